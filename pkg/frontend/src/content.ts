/** Content script: find annotated media, verify, decorate.
 *
 * Pages with no x-media-cert attribute are left completely untouched: no
 * nodes, styles, or listeners are added. Media bytes are re-fetched from
 * the element's own URL so hashing sees exactly the published bytes, not a
 * possibly transformed rendition.
 */

import { removeBadge, renderBadge, repositionBadges } from "./badge";
import { parseSidecar } from "./sidecar";
import { loadTrustRoots } from "./trust";
import type { BadgeState, VerifyOutcome } from "./types";
import { verifyEndorsement } from "./verify";

declare const chrome: any;

export const CERT_ATTR = "x-media-cert";

export interface FetchedResource {
  ok: boolean;
  status: number;
  bytes: Uint8Array;
}

export type FetchFn = (url: string) => Promise<FetchedResource>;

async function defaultFetch(url: string): Promise<FetchedResource> {
  const response = await fetch(url, { redirect: "follow" });
  const bytes = new Uint8Array(await response.arrayBuffer());
  return { ok: response.ok, status: response.status, bytes };
}

export interface ScanOptions {
  fetchFn?: FetchFn;
  trustRoots?: Uint8Array[];
}

function toBadgeState(outcome: VerifyOutcome): BadgeState {
  if (outcome.status === "Verified") {
    return {
      status: "verified",
      endorserName: outcome.endorserName,
      metadata: outcome.metadata,
      detail: outcome.detail,
    };
  }
  return {
    status: "failed",
    endorserName: outcome.endorserName,
    metadata: null,
    detail: outcome.detail ? `${outcome.status}: ${outcome.detail}` : outcome.status,
  };
}

export function annotatedMedia(doc: Document): HTMLElement[] {
  return Array.from(
    doc.querySelectorAll<HTMLElement>(`img[${CERT_ATTR}], video[${CERT_ATTR}]`),
  );
}

async function verifyElement(
  element: HTMLElement,
  fetchFn: FetchFn,
  trustRoots: Uint8Array[],
  baseUri: string,
): Promise<BadgeState> {
  try {
    const certRef = element.getAttribute(CERT_ATTR);
    const src = element.getAttribute("src");
    if (!certRef || !src) {
      return { status: "failed", endorserName: null, metadata: null, detail: "missing src" };
    }
    const sidecarUrl = new URL(certRef, baseUri).toString();
    const mediaUrl = new URL(src, baseUri).toString();

    const sidecarResponse = await fetchFn(sidecarUrl);
    if (!sidecarResponse.ok) {
      return {
        status: "failed",
        endorserName: null,
        metadata: null,
        detail: `sidecar fetch failed (${sidecarResponse.status})`,
      };
    }
    const mediaResponse = await fetchFn(mediaUrl);
    if (!mediaResponse.ok) {
      return {
        status: "failed",
        endorserName: null,
        metadata: null,
        detail: `media fetch failed (${mediaResponse.status})`,
      };
    }
    const sidecar = parseSidecar(new TextDecoder("utf-8").decode(sidecarResponse.bytes));
    const outcome = await verifyEndorsement(sidecar, mediaResponse.bytes, trustRoots);
    return toBadgeState(outcome);
  } catch (err) {
    return { status: "failed", endorserName: null, metadata: null, detail: String(err) };
  }
}

/** Verify every annotated element; returns the per-element states. */
export async function scanAndVerify(
  doc: Document,
  options: ScanOptions = {},
): Promise<Map<HTMLElement, BadgeState>> {
  const states = new Map<HTMLElement, BadgeState>();
  const elements = annotatedMedia(doc);
  if (elements.length === 0) return states; // untouched page, by design

  const fetchFn = options.fetchFn ?? defaultFetch;
  const trustRoots = options.trustRoots ?? (await loadTrustRoots());

  await Promise.all(
    elements.map(async (element) => {
      removeBadge(element);
      const state = await verifyElement(element, fetchFn, trustRoots, doc.baseURI);
      states.set(element, state);
      renderBadge(element, state);
    }),
  );
  return states;
}

function watchForNewMedia(doc: Document): void {
  const observer = new MutationObserver((mutations) => {
    let found = false;
    for (const mutation of mutations) {
      for (const node of Array.from(mutation.addedNodes)) {
        if (!(node instanceof Element)) continue;
        if (node.matches?.(`img[${CERT_ATTR}], video[${CERT_ATTR}]`)) found = true;
        else if (node.querySelector?.(`img[${CERT_ATTR}], video[${CERT_ATTR}]`)) found = true;
      }
    }
    if (found) void scanAndVerify(doc);
  });
  observer.observe(doc.documentElement, { childList: true, subtree: true });
}

function runAsExtension(): void {
  const doc = document;
  void scanAndVerify(doc).then((states) => {
    if (states.size === 0) return;
    const watched = Array.from(states.keys());
    window.addEventListener("scroll", () => repositionBadges(watched), { passive: true });
    window.addEventListener("resize", () => repositionBadges(watched), { passive: true });
  });
  watchForNewMedia(doc);
}

// Only self-start inside a real extension; imports from tests stay inert.
if (typeof chrome !== "undefined" && chrome?.runtime?.id) {
  if (document.readyState === "loading") {
    document.addEventListener("DOMContentLoaded", runAsExtension);
  } else {
    runAsExtension();
  }
}
