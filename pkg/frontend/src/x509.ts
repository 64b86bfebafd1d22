/** Minimal X.509/DER reader: just enough to pull the endorser's display
 * name, public key, validity window, and the pieces needed to check that a
 * trusted root signed the certificate. Handles the RSA/SHA-256 certificates
 * this system produces; anything else fails loudly.
 */

import { bytesEqual, bytesToHex } from "./bytes";

export class CertificateError extends Error {}

interface Tlv {
  tag: number;
  start: number; // offset of the tag byte
  contentStart: number;
  contentEnd: number;
  end: number; // end of the whole TLV
}

function readTlv(bytes: Uint8Array, offset: number): Tlv {
  if (offset + 2 > bytes.length) throw new CertificateError("truncated DER");
  const tag = bytes[offset];
  let length = bytes[offset + 1];
  let headerLen = 2;
  if (length & 0x80) {
    const lengthBytes = length & 0x7f;
    if (lengthBytes === 0 || lengthBytes > 4) throw new CertificateError("bad DER length");
    length = 0;
    for (let i = 0; i < lengthBytes; i++) {
      length = (length << 8) | bytes[offset + 2 + i];
    }
    headerLen = 2 + lengthBytes;
  }
  const contentStart = offset + headerLen;
  const contentEnd = contentStart + length;
  if (contentEnd > bytes.length) throw new CertificateError("truncated DER content");
  return { tag, start: offset, contentStart, contentEnd, end: contentEnd };
}

function children(bytes: Uint8Array, node: Tlv): Tlv[] {
  const out: Tlv[] = [];
  let cursor = node.contentStart;
  while (cursor < node.contentEnd) {
    const child = readTlv(bytes, cursor);
    out.push(child);
    cursor = child.end;
  }
  return out;
}

function slice(bytes: Uint8Array, node: Tlv): Uint8Array {
  return bytes.slice(node.start, node.end);
}

const OID_O_HEX = "55040a"; // 2.5.4.10
const OID_CN_HEX = "550403"; // 2.5.4.3

const STRING_TAGS = new Set([0x0c, 0x13, 0x14, 0x16, 0x1e]);

function nameAttribute(bytes: Uint8Array, nameNode: Tlv, oidHex: string): string | null {
  for (const rdn of children(bytes, nameNode)) {
    for (const attr of children(bytes, rdn)) {
      const parts = children(bytes, attr);
      if (parts.length < 2 || parts[0].tag !== 0x06) continue;
      const oid = bytesToHex(bytes.slice(parts[0].contentStart, parts[0].contentEnd));
      if (oid !== oidHex) continue;
      const value = parts[1];
      if (!STRING_TAGS.has(value.tag)) continue;
      return new TextDecoder("utf-8").decode(bytes.slice(value.contentStart, value.contentEnd));
    }
  }
  return null;
}

function parseTime(bytes: Uint8Array, node: Tlv): Date {
  const text = new TextDecoder("ascii").decode(bytes.slice(node.contentStart, node.contentEnd));
  let year: number;
  let rest: string;
  if (node.tag === 0x17) {
    // UTCTime YYMMDDHHMMSSZ
    const yy = parseInt(text.slice(0, 2), 10);
    year = yy < 50 ? 2000 + yy : 1900 + yy;
    rest = text.slice(2);
  } else if (node.tag === 0x18) {
    // GeneralizedTime YYYYMMDDHHMMSSZ
    year = parseInt(text.slice(0, 4), 10);
    rest = text.slice(4);
  } else {
    throw new CertificateError(`unexpected time tag 0x${node.tag.toString(16)}`);
  }
  const month = parseInt(rest.slice(0, 2), 10);
  const day = parseInt(rest.slice(2, 4), 10);
  const hour = parseInt(rest.slice(4, 6), 10);
  const minute = parseInt(rest.slice(6, 8), 10);
  const second = parseInt(rest.slice(8, 10), 10);
  return new Date(Date.UTC(year, month - 1, day, hour, minute, second));
}

export interface ParsedCertificate {
  der: Uint8Array;
  tbsDer: Uint8Array;
  signature: Uint8Array;
  issuerDer: Uint8Array;
  subjectDer: Uint8Array;
  spkiDer: Uint8Array;
  displayName: string;
  notBefore: Date;
  notAfter: Date;
}

export function parseCertificate(der: Uint8Array): ParsedCertificate {
  const outer = readTlv(der, 0);
  if (outer.tag !== 0x30) throw new CertificateError("certificate is not a DER SEQUENCE");
  const [tbs, , signatureBits] = children(der, outer);
  if (!tbs || !signatureBits || signatureBits.tag !== 0x03) {
    throw new CertificateError("certificate structure is not TBS/alg/signature");
  }
  if (der[signatureBits.contentStart] !== 0x00) {
    throw new CertificateError("unsupported BIT STRING padding in signature");
  }
  const signature = der.slice(signatureBits.contentStart + 1, signatureBits.contentEnd);

  const tbsChildren = children(der, tbs);
  let index = 0;
  if (tbsChildren[index]?.tag === 0xa0) index++; // [0] version
  index++; // serialNumber
  index++; // signature algorithm
  const issuer = tbsChildren[index++];
  const validity = tbsChildren[index++];
  const subject = tbsChildren[index++];
  const spki = tbsChildren[index++];
  if (!issuer || !validity || !subject || !spki) {
    throw new CertificateError("TBSCertificate is missing required fields");
  }
  const [notBeforeNode, notAfterNode] = children(der, validity);

  const displayName =
    nameAttribute(der, subject, OID_O_HEX) ??
    nameAttribute(der, subject, OID_CN_HEX) ??
    "";

  return {
    der: der.slice(0, outer.end),
    tbsDer: slice(der, tbs),
    signature,
    issuerDer: slice(der, issuer),
    subjectDer: slice(der, subject),
    spkiDer: slice(der, spki),
    displayName,
    notBefore: parseTime(der, notBeforeNode),
    notAfter: parseTime(der, notAfterNode),
  };
}

const RSA_VERIFY_PARAMS: RsaHashedImportParams = {
  name: "RSASSA-PKCS1-v1_5",
  hash: "SHA-256",
};

export async function importRsaPublicKey(spkiDer: Uint8Array): Promise<CryptoKey> {
  try {
    return await crypto.subtle.importKey(
      "spki",
      spkiDer as BufferSource,
      RSA_VERIFY_PARAMS,
      false,
      ["verify"],
    );
  } catch (err) {
    throw new CertificateError(`certificate public key is not usable RSA: ${err}`);
  }
}

export async function verifyRsaSha256(
  key: CryptoKey,
  signature: Uint8Array,
  data: Uint8Array,
): Promise<boolean> {
  try {
    return await crypto.subtle.verify(
      "RSASSA-PKCS1-v1_5",
      key,
      signature as BufferSource,
      data as BufferSource,
    );
  } catch {
    return false;
  }
}

export function sameDer(a: Uint8Array, b: Uint8Array): boolean {
  return bytesEqual(a, b);
}
