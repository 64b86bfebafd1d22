// Fixture loading helpers. Everything under ../fixtures was produced by the
// Python toolkit (see fixtures/generate_fixtures.py); expected.json records
// the verdict the Python verifier gave for each case.
import { readFileSync } from "node:fs";
import { resolve } from "node:path";

export function fixturePath(name: string): string {
  // vitest runs with cwd at the frontend root; jsdom rewrites import.meta.url
  return resolve(process.cwd(), "fixtures", name);
}

export function fixtureBytes(name: string): Uint8Array {
  return new Uint8Array(readFileSync(fixturePath(name)));
}

export function fixtureText(name: string): string {
  return readFileSync(fixturePath(name), "utf-8");
}

export interface ExpectedCase {
  name: string;
  sidecar: string;
  asset: string;
  trustRoots: string[];
  status: string;
  endorser: string | null;
  detail: string;
}

export function expectedCases(): ExpectedCase[] {
  return JSON.parse(fixtureText("expected.json"));
}
