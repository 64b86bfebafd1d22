// Content-script behavior: scanning, fetching, decorating, transparency.
import { beforeEach, describe, expect, it } from "vitest";

import { OVERLAY_ATTR } from "../src/badge";
import { CERT_ATTR, scanAndVerify, type FetchFn } from "../src/content";
import { parsePemCertificates } from "../src/trust";
import { fixtureBytes, fixtureText } from "./fixtures";

const ROOTS = parsePemCertificates(fixtureText("root.pem"));

function fetchFromFixtures(overrides: Record<string, Uint8Array | null> = {}): FetchFn {
  return async (url: string) => {
    const name = url.split("/").pop() ?? "";
    if (name in overrides) {
      const bytes = overrides[name];
      if (bytes === null) return { ok: false, status: 404, bytes: new Uint8Array() };
      return { ok: true, status: 200, bytes };
    }
    if (name === "asset.bin") return { ok: true, status: 200, bytes: fixtureBytes("asset.bin") };
    if (name === "asset.bin.xmp") {
      return { ok: true, status: 200, bytes: fixtureBytes("sidecar.xmp") };
    }
    return { ok: false, status: 404, bytes: new Uint8Array() };
  };
}

beforeEach(() => {
  document.body.innerHTML = "";
});

describe("scanAndVerify", () => {
  it("leaves a page without annotations completely untouched", async () => {
    document.body.innerHTML = '<img src="plain.png"><p>text</p>';
    const before = document.documentElement.outerHTML;
    const states = await scanAndVerify(document, { fetchFn: fetchFromFixtures(), trustRoots: ROOTS });
    expect(states.size).toBe(0);
    expect(document.documentElement.outerHTML).toBe(before);
  });

  it("verifies an annotated image and shows a green overlay", async () => {
    document.body.innerHTML = `<img src="asset.bin" ${CERT_ATTR}="asset.bin.xmp">`;
    const states = await scanAndVerify(document, { fetchFn: fetchFromFixtures(), trustRoots: ROOTS });
    const [state] = Array.from(states.values());
    expect(state.status).toBe("verified");
    expect(state.endorserName).toBe("Example News");
    expect(document.querySelector(`[${OVERLAY_ATTR}="verified"]`)).not.toBeNull();
  });

  it("marks tampered media with a red overlay", async () => {
    document.body.innerHTML = `<img src="asset.bin" ${CERT_ATTR}="asset.bin.xmp">`;
    const fetchFn = fetchFromFixtures({ "asset.bin": fixtureBytes("asset_tampered.bin") });
    const states = await scanAndVerify(document, { fetchFn, trustRoots: ROOTS });
    const [state] = Array.from(states.values());
    expect(state.status).toBe("failed");
    expect(state.detail).toContain("FailedSignatureInvalid");
    expect(document.querySelector(`[${OVERLAY_ATTR}="failed"]`)).not.toBeNull();
  });

  it("marks a missing sidecar as failed with the fetch status", async () => {
    document.body.innerHTML = `<img src="asset.bin" ${CERT_ATTR}="missing.xmp">`;
    const states = await scanAndVerify(document, { fetchFn: fetchFromFixtures(), trustRoots: ROOTS });
    const [state] = Array.from(states.values());
    expect(state.status).toBe("failed");
    expect(state.detail).toContain("404");
  });

  it("fails with an empty trust store", async () => {
    document.body.innerHTML = `<img src="asset.bin" ${CERT_ATTR}="asset.bin.xmp">`;
    const states = await scanAndVerify(document, { fetchFn: fetchFromFixtures(), trustRoots: [] });
    const [state] = Array.from(states.values());
    expect(state.status).toBe("failed");
    expect(state.detail).toContain("UntrustedEndorser");
  });

  it("only decorates annotated elements on a mixed page", async () => {
    document.body.innerHTML =
      `<img id="a" src="asset.bin" ${CERT_ATTR}="asset.bin.xmp">` +
      '<img id="b" src="plain.png">';
    const plainBefore = document.getElementById("b")!.outerHTML;
    const states = await scanAndVerify(document, { fetchFn: fetchFromFixtures(), trustRoots: ROOTS });
    expect(states.size).toBe(1);
    expect(document.getElementById("b")!.outerHTML).toBe(plainBefore);
    expect(document.querySelectorAll(`[${OVERLAY_ATTR}]`)).toHaveLength(1);
  });

  it("verifies annotated video elements too", async () => {
    document.body.innerHTML = `<video src="asset.bin" ${CERT_ATTR}="asset.bin.xmp"></video>`;
    const states = await scanAndVerify(document, { fetchFn: fetchFromFixtures(), trustRoots: ROOTS });
    const [state] = Array.from(states.values());
    expect(state.status).toBe("verified");
  });

  it("never throws into the page on fetch errors", async () => {
    document.body.innerHTML = `<img src="asset.bin" ${CERT_ATTR}="asset.bin.xmp">`;
    const fetchFn: FetchFn = async () => {
      throw new Error("network down");
    };
    const states = await scanAndVerify(document, { fetchFn, trustRoots: ROOTS });
    const [state] = Array.from(states.values());
    expect(state.status).toBe("failed");
    expect(state.detail).toContain("network down");
  });
});
