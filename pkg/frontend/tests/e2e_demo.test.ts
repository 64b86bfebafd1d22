// End-to-end against the real demo site: the publisher toolkit builds and
// serves it (photo2 tampered in transit), this extension verifies the page,
// and the verdicts must line up with the CLI crawler's JSON report.
//
// Skipped automatically when the Python toolkit is not on PATH.
import { spawn, spawnSync } from "node:child_process";
import { mkdtempSync, readFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { OVERLAY_ATTR, POPUP_ATTR } from "../src/badge";
import { CERT_ATTR, scanAndVerify } from "../src/content";
import { parsePemCertificates } from "../src/trust";
import type { BadgeState } from "../src/types";

const toolkitAvailable =
  spawnSync("python3", ["-c", "import mediacert"], { timeout: 30000 }).status === 0;

describe.skipIf(!toolkitAvailable)("extension vs demo site", () => {
  let server: ReturnType<typeof spawn>;
  let baseUrl = "";
  let siteDir = "";
  let trustDir = "";
  let states: Map<HTMLElement, BadgeState>;
  let elements: Record<string, HTMLElement>;

  beforeAll(async () => {
    const out = mkdtempSync(join(tmpdir(), "mediacert-e2e-"));
    const build = spawnSync(
      "python3",
      ["-c", `from mediacert import demo; demo.build_demo_site(${JSON.stringify(out)})`],
      { timeout: 120000 },
    );
    if (build.status !== 0) throw new Error(`demo site build failed: ${build.stderr}`);
    siteDir = join(out, "site");
    trustDir = join(out, "trust");

    server = spawn("python3", [
      "-m", "mediacert.cli",
      "demo-server", siteDir,
      "--bind", "127.0.0.1:0",
      "--tamper", "photo2.png",
    ]);
    baseUrl = await new Promise<string>((resolve, reject) => {
      const timer = setTimeout(() => reject(new Error("server did not start")), 30000);
      server.stdout!.on("data", (chunk: Buffer) => {
        const match = /at (http:\/\/[^/]+\/)/.exec(chunk.toString());
        if (match) {
          clearTimeout(timer);
          resolve(match[1]);
        }
      });
      server.on("exit", () => reject(new Error("server exited early")));
    });

    // lift the served page's annotated images into the test document with
    // absolute URLs, exactly what the content script would see in situ
    const pageText = await (await fetch(baseUrl + "index.html")).text();
    const served = new DOMParser().parseFromString(pageText, "text/html");
    document.body.innerHTML = "";
    elements = {};
    for (const img of Array.from(served.querySelectorAll("img"))) {
      const copy = document.createElement("img");
      const src = img.getAttribute("src")!;
      copy.setAttribute("src", new URL(src, baseUrl).toString());
      const cert = img.getAttribute(CERT_ATTR);
      if (cert) copy.setAttribute(CERT_ATTR, new URL(cert, baseUrl).toString());
      document.body.appendChild(copy);
      elements[src] = copy;
    }

    const roots = parsePemCertificates(readFileSync(join(trustDir, "root.pem"), "utf-8"));
    states = await scanAndVerify(document, { trustRoots: roots });
  }, 120000);

  afterAll(() => {
    server?.kill();
  });

  it("shows a green shield and border on the valid image", () => {
    const state = states.get(elements["photo1.png"])!;
    expect(state.status).toBe("verified");
    expect(state.endorserName).toBe("Example News");
    const overlays = document.querySelectorAll(`[${OVERLAY_ATTR}="verified"]`);
    expect(overlays).toHaveLength(1);
    expect(overlays[0].querySelector("svg path")?.getAttribute("fill")).toBe("#1d9a4b");
  });

  it("shows a red shield and border on the tampered image", () => {
    const state = states.get(elements["photo2.png"])!;
    expect(state.status).toBe("failed");
    const overlays = document.querySelectorAll(`[${OVERLAY_ATTR}="failed"]`);
    expect(overlays).toHaveLength(1);
  });

  it("does not touch the unannotated image at all", () => {
    expect(states.has(elements["photo3.png"])).toBe(false);
    expect(document.querySelectorAll(`[${OVERLAY_ATTR}]`)).toHaveLength(2);
    expect(elements["photo3.png"].outerHTML).not.toContain(CERT_ATTR);
  });

  it("popup lists the five certification lines", async () => {
    const overlay = document.querySelector(`[${OVERLAY_ATTR}="verified"]`)!;
    const shield = overlay.querySelector<HTMLElement>("[data-media-cert-shield]")!;
    shield.dispatchEvent(new MouseEvent("click", { bubbles: true }));
    const popup = document.querySelector(`[${POPUP_ATTR}]`)!;
    const text = popup.textContent ?? "";
    for (const label of ["Endorsed by", "Date & Time", "Location", "Photographer", "Description"]) {
      expect(text).toContain(label);
    }
    expect(text).toContain("Example News");
    popup.remove();
  });

  it("verdicts equal the CLI crawler's on every demo asset", () => {
    const crawl = spawnSync(
      "python3",
      ["-m", "mediacert.cli", "crawl", baseUrl + "index.html", "--trust", trustDir, "--json"],
      { timeout: 120000 },
    );
    const report = JSON.parse(crawl.stdout.toString());
    expect(report.entries).toHaveLength(2);
    for (const entry of report.entries) {
      const name = entry.asset.split("/").pop()!;
      const state = states.get(elements[name])!;
      const expected = entry.status === "Verified" ? "verified" : "failed";
      expect(state.status, name).toBe(expected);
      if (entry.status === "Verified") {
        expect(state.endorserName).toBe(entry.endorser);
      }
    }
  });
});
