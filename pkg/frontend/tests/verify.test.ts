// Oracle equivalence: for every fixture case, this verifier must reach the
// exact verdict the publisher-side verifier recorded in expected.json.
import { describe, expect, it } from "vitest";

import { parseSidecar } from "../src/sidecar";
import { parsePemCertificates } from "../src/trust";
import { verifyEndorsement } from "../src/verify";
import { expectedCases, fixtureBytes, fixtureText } from "./fixtures";

describe("verifyEndorsement equivalence with the CLI verifier", () => {
  for (const testCase of expectedCases()) {
    it(`matches on ${testCase.name} (${testCase.status})`, async () => {
      const sidecar = parseSidecar(fixtureText(testCase.sidecar));
      const media = fixtureBytes(testCase.asset);
      const roots = testCase.trustRoots.flatMap((name) =>
        parsePemCertificates(fixtureText(name)),
      );
      const outcome = await verifyEndorsement(sidecar, media, roots);
      expect(outcome.status).toBe(testCase.status);
      if (testCase.endorser !== null && outcome.status !== "MalformedSidecar") {
        expect(outcome.endorserName).toBe(testCase.endorser);
      }
      if (testCase.status === "Verified") {
        expect(outcome.metadata).toEqual(sidecar.metadata);
        // warning expectations travel with the recorded detail
        if (testCase.detail.includes("expired")) {
          expect(outcome.detail).toContain("expired");
        } else {
          expect(outcome.detail).toBe("");
        }
      }
    });
  }

  it("fails the signature when a metadata field is altered after signing", async () => {
    const sidecar = parseSidecar(fixtureText("sidecar.xmp"));
    sidecar.metadata.city = "Elsewhere";
    const roots = parsePemCertificates(fixtureText("root.pem"));
    const outcome = await verifyEndorsement(sidecar, fixtureBytes("asset.bin"), roots);
    expect(outcome.status).toBe("FailedSignatureInvalid");
  });

  it("never throws, even on garbage base64 signature", async () => {
    const sidecar = parseSidecar(fixtureText("sidecar.xmp"));
    sidecar.signatureB64 = "%%%";
    const roots = parsePemCertificates(fixtureText("root.pem"));
    const outcome = await verifyEndorsement(sidecar, fixtureBytes("asset.bin"), roots);
    expect(outcome.status).toBe("MalformedSidecar");
  });
});
