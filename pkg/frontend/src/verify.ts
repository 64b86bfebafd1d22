/** The client-side verification procedure.
 *
 * Same steps and same outcome statuses as the command-line verifier:
 * extract the endorser from the embedded certificate, chain it to a trust
 * root, check the signature over the canonical preimage, then cross-check
 * the stored digest. Certificate expiry downgrades to a warning (the
 * toolkit's default policy). Never throws; every failure is an outcome.
 */

import { base64Decode } from "./bytes";
import { canonicalMessage, sha256Hex } from "./canonical";
import type { SidecarDocument, VerifyOutcome } from "./types";
import {
  importRsaPublicKey,
  parseCertificate,
  sameDer,
  verifyRsaSha256,
  type ParsedCertificate,
} from "./x509";

interface TrustDecision {
  trusted: boolean;
  warning: string;
  detail: string;
}

async function checkTrust(
  cert: ParsedCertificate,
  trustRootsDer: Uint8Array[],
): Promise<TrustDecision> {
  if (trustRootsDer.length === 0) {
    return { trusted: false, warning: "", detail: "trust store is empty" };
  }
  let anchored = false;
  for (const rootDer of trustRootsDer) {
    if (sameDer(rootDer, cert.der)) {
      anchored = true;
      break;
    }
    let root: ParsedCertificate;
    try {
      root = parseCertificate(rootDer);
    } catch {
      continue;
    }
    if (!sameDer(root.subjectDer, cert.issuerDer)) continue;
    try {
      const rootKey = await importRsaPublicKey(root.spkiDer);
      if (await verifyRsaSha256(rootKey, cert.signature, cert.tbsDer)) {
        anchored = true;
        break;
      }
    } catch {
      continue;
    }
  }
  if (!anchored) {
    return {
      trusted: false,
      warning: "",
      detail: "no trust root matches the endorser certificate",
    };
  }
  const now = new Date();
  if (now < cert.notBefore) {
    return { trusted: true, warning: "warning: endorser certificate is not yet valid", detail: "" };
  }
  if (now > cert.notAfter) {
    return { trusted: true, warning: "warning: endorser certificate has expired", detail: "" };
  }
  return { trusted: true, warning: "", detail: "" };
}

export async function verifyEndorsement(
  sidecar: SidecarDocument,
  media: Uint8Array,
  trustRootsDer: Uint8Array[],
): Promise<VerifyOutcome> {
  let cert: ParsedCertificate;
  let publicKey: CryptoKey;
  try {
    cert = parseCertificate(base64Decode(sidecar.certificateB64));
    publicKey = await importRsaPublicKey(cert.spkiDer);
  } catch (err) {
    return {
      status: "MalformedSidecar",
      endorserName: null,
      metadata: null,
      detail: String(err),
    };
  }
  const endorserName = cert.displayName;

  const decision = await checkTrust(cert, trustRootsDer);
  if (!decision.trusted) {
    return {
      status: "UntrustedEndorser",
      endorserName,
      metadata: null,
      detail: decision.detail,
    };
  }

  const message = canonicalMessage(sidecar.metadata, media);
  let signature: Uint8Array;
  try {
    signature = base64Decode(sidecar.signatureB64);
  } catch (err) {
    return { status: "MalformedSidecar", endorserName, metadata: null, detail: String(err) };
  }
  if (!(await verifyRsaSha256(publicKey, signature, message))) {
    return {
      status: "FailedSignatureInvalid",
      endorserName,
      metadata: null,
      detail: "signature does not match the asset and metadata",
    };
  }

  if ((await sha256Hex(message)) !== sidecar.digestHex) {
    return {
      status: "FailedDigestMismatch",
      endorserName,
      metadata: null,
      detail: "stored digest does not match the recomputed digest",
    };
  }

  return {
    status: "Verified",
    endorserName,
    metadata: sidecar.metadata,
    detail: decision.warning,
  };
}
