// DER certificate reader against certificates issued by the demo CA.
import { describe, expect, it } from "vitest";

import { base64Decode } from "../src/bytes";
import { parseSidecar } from "../src/sidecar";
import { parsePemCertificates } from "../src/trust";
import { CertificateError, importRsaPublicKey, parseCertificate, sameDer, verifyRsaSha256 } from "../src/x509";
import { fixtureText } from "./fixtures";

function endorserDer(): Uint8Array {
  return base64Decode(parseSidecar(fixtureText("sidecar.xmp")).certificateB64);
}

describe("parseCertificate", () => {
  it("extracts the organization display name", () => {
    expect(parseCertificate(endorserDer()).displayName).toBe("Example News");
  });

  it("exposes a plausible validity window", () => {
    const cert = parseCertificate(endorserDer());
    expect(cert.notBefore.getTime()).toBeLessThan(Date.now());
    expect(cert.notAfter.getTime()).toBeGreaterThan(Date.now());
  });

  it("yields an SPKI that WebCrypto can import", async () => {
    const key = await importRsaPublicKey(parseCertificate(endorserDer()).spkiDer);
    expect(key.type).toBe("public");
  });

  it("links issuer to the root's subject and verifies the root signature", async () => {
    const cert = parseCertificate(endorserDer());
    const [rootDer] = parsePemCertificates(fixtureText("root.pem"));
    const root = parseCertificate(rootDer);
    expect(sameDer(root.subjectDer, cert.issuerDer)).toBe(true);
    const rootKey = await importRsaPublicKey(root.spkiDer);
    expect(await verifyRsaSha256(rootKey, cert.signature, cert.tbsDer)).toBe(true);
  });

  it("does not chain to a foreign root", () => {
    const cert = parseCertificate(endorserDer());
    const [otherDer] = parsePemCertificates(fixtureText("other_root.pem"));
    const other = parseCertificate(otherDer);
    expect(sameDer(other.subjectDer, cert.issuerDer)).toBe(false);
  });

  it("rejects garbage", () => {
    expect(() => parseCertificate(new Uint8Array(64))).toThrow(CertificateError);
  });

  it("reports the expired fixture as expired", () => {
    const doc = parseSidecar(fixtureText("sidecar_expired.xmp"));
    const cert = parseCertificate(base64Decode(doc.certificateB64));
    expect(cert.notAfter.getTime()).toBeLessThan(Date.now());
  });
});
