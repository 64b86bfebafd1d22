/** XMP sidecar parsing (browser side, DOMParser based).
 *
 * Values are addressed by element-name path and trimmed of XML whitespace,
 * matching the publisher toolkit's parser.
 */

import type { EndorsementMetadata, SidecarDocument } from "./types";

const HEX_DIGEST_RE = /^[0-9a-f]{64}$/;
const B64_RE = /^[A-Za-z0-9+/]*={0,2}$/;

export class MalformedSidecarError extends Error {}

function trimXmlWs(text: string | null): string {
  return (text ?? "").replace(/^[ \t\r\n]+|[ \t\r\n]+$/g, "");
}

function directChild(parent: Element, name: string): Element | null {
  for (const child of Array.from(parent.children)) {
    if (child.tagName === name) return child;
  }
  return null;
}

function childText(parent: Element, path: string[]): string {
  let node: Element | null = parent;
  for (const step of path) {
    node = node && directChild(node, step);
  }
  return trimXmlWs(node ? node.textContent : "");
}

function firstByTag(root: Document, name: string): Element | null {
  const found = root.getElementsByTagName(name);
  return found.length > 0 ? found[0] : null;
}

function requireB64(value: string, what: string): string {
  if (value.length % 4 !== 0 || !B64_RE.test(value)) {
    throw new MalformedSidecarError(`${what} is not valid Base64`);
  }
  return value;
}

export function parseSidecar(text: string): SidecarDocument {
  const doc = new DOMParser().parseFromString(text, "application/xml");
  if (doc.getElementsByTagName("parsererror").length > 0) {
    throw new MalformedSidecarError("not well-formed XML");
  }

  const contentMeta = firstByTag(doc, "contentMeta");
  if (!contentMeta) throw new MalformedSidecarError("contentMeta element missing");
  const digestElem = firstByTag(doc, "DigestValue");
  if (!digestElem) throw new MalformedSidecarError("DigestValue element missing");
  const signatureElem = firstByTag(doc, "SignatureValue");
  if (!signatureElem) throw new MalformedSidecarError("SignatureValue element missing");
  const certificateElem = firstByTag(doc, "X509Certificate");
  if (!certificateElem) throw new MalformedSidecarError("X509Certificate element missing");

  const metadata: EndorsementMetadata = {
    dateTime: childText(contentMeta, ["contentCreated"]),
    city: childText(contentMeta, ["location", "city"]),
    region: childText(contentMeta, ["location", "region"]),
    country: childText(contentMeta, ["location", "country"]),
    creator: childText(contentMeta, ["creator", "name"]),
    headline: childText(contentMeta, ["headline"]),
    description: childText(contentMeta, ["description"]),
  };

  const digestHex = trimXmlWs(digestElem.textContent);
  if (!HEX_DIGEST_RE.test(digestHex)) {
    throw new MalformedSidecarError("DigestValue is not 64 lowercase hex chars");
  }
  return {
    metadata,
    digestHex,
    signatureB64: requireB64(trimXmlWs(signatureElem.textContent), "SignatureValue"),
    certificateB64: requireB64(trimXmlWs(certificateElem.textContent), "X509Certificate"),
  };
}
