/** Trust-root handling: user-imported PEM certificates kept in extension
 * storage (the options page writes them, the content script reads them).
 */

import { base64Decode } from "./bytes";

declare const chrome: any;

const STORAGE_KEY = "trustRootsPem";

const PEM_BLOCK_RE = /-----BEGIN CERTIFICATE-----([A-Za-z0-9+/=\s]+?)-----END CERTIFICATE-----/g;

export function parsePemCertificates(pemText: string): Uint8Array[] {
  const roots: Uint8Array[] = [];
  for (const match of pemText.matchAll(PEM_BLOCK_RE)) {
    const body = match[1].replace(/\s+/g, "");
    roots.push(base64Decode(body));
  }
  return roots;
}

function storageAvailable(): boolean {
  return typeof chrome !== "undefined" && !!chrome?.storage?.local;
}

export async function loadTrustRootsPem(): Promise<string> {
  if (!storageAvailable()) return "";
  const stored = await chrome.storage.local.get(STORAGE_KEY);
  return stored[STORAGE_KEY] ?? "";
}

export async function saveTrustRootsPem(pemText: string): Promise<void> {
  if (!storageAvailable()) return;
  await chrome.storage.local.set({ [STORAGE_KEY]: pemText });
}

export async function loadTrustRoots(): Promise<Uint8Array[]> {
  try {
    return parsePemCertificates(await loadTrustRootsPem());
  } catch {
    return [];
  }
}
