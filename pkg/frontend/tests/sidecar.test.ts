// Sidecar parsing against files produced by the publisher toolkit.
import { describe, expect, it } from "vitest";

import { MalformedSidecarError, parseSidecar } from "../src/sidecar";
import { fixtureText } from "./fixtures";

describe("parseSidecar", () => {
  it("reads metadata from the fixture sidecar", () => {
    const doc = parseSidecar(fixtureText("sidecar.xmp"));
    expect(doc.metadata).toEqual({
      dateTime: "2021-03-14T15:09:26Z",
      city: "Montréal",
      region: "QC",
      country: "CA",
      creator: "Anaïs Photographe",
      headline: "Fixture headline <&> ok",
      description: "Extension fixture, multi-byte 日本語.",
    });
    expect(doc.digestHex).toMatch(/^[0-9a-f]{64}$/);
    expect(doc.signatureB64.length % 4).toBe(0);
    expect(doc.certificateB64.length).toBeGreaterThan(100);
  });

  it("rejects non-XML", () => {
    expect(() => parseSidecar("not xml <<<")).toThrow(MalformedSidecarError);
  });

  it("rejects truncated documents", () => {
    const text = fixtureText("sidecar.xmp");
    expect(() => parseSidecar(text.slice(0, text.length / 2))).toThrow(MalformedSidecarError);
  });

  it("rejects a sidecar with the Signature element removed", () => {
    const text = fixtureText("sidecar.xmp");
    const start = text.indexOf("<SignatureValue>");
    const end = text.indexOf("</SignatureValue>") + "</SignatureValue>".length;
    expect(() => parseSidecar(text.slice(0, start) + text.slice(end))).toThrow(
      MalformedSidecarError,
    );
  });

  it("rejects an uppercase digest", () => {
    const doc = parseSidecar(fixtureText("sidecar.xmp"));
    const text = fixtureText("sidecar.xmp").replace(doc.digestHex, doc.digestHex.toUpperCase());
    expect(() => parseSidecar(text)).toThrow(MalformedSidecarError);
  });

  it("distinguishes the creator name from the subject name", () => {
    // the template carries an empty <subject><name> sibling
    const doc = parseSidecar(fixtureText("sidecar.xmp"));
    expect(doc.metadata.creator).toBe("Anaïs Photographe");
  });
});
