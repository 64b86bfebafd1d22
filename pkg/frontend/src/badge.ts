/** Shield badge and popup rendering.
 *
 * Decoration is an absolutely positioned overlay; the media element itself
 * is never touched (no attribute, style, or layout change), so removing the
 * overlay restores the page exactly.
 */

import type { BadgeState } from "./types";

export const OVERLAY_ATTR = "data-media-cert-overlay";
export const POPUP_ATTR = "data-media-cert-popup";

const GREEN = "#1d9a4b";
const RED = "#cc2222";

const SHIELD_SVG = (color: string) =>
  `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 24 24" width="22" height="22">` +
  `<path fill="${color}" stroke="white" stroke-width="1" ` +
  `d="M12 2 L20 5 V11 C20 16.5 16.6 20.6 12 22 C7.4 20.6 4 16.5 4 11 V5 Z"/></svg>`;

const overlays = new WeakMap<Element, HTMLElement>();

function positionOverlay(overlay: HTMLElement, element: Element): void {
  const rect = element.getBoundingClientRect();
  const doc = element.ownerDocument;
  const win = doc.defaultView;
  const scrollX = win ? win.scrollX : 0;
  const scrollY = win ? win.scrollY : 0;
  overlay.style.left = `${rect.left + scrollX}px`;
  overlay.style.top = `${rect.top + scrollY}px`;
  overlay.style.width = `${rect.width}px`;
  overlay.style.height = `${rect.height}px`;
}

export function removeBadge(element: Element): void {
  const existing = overlays.get(element);
  if (existing) {
    existing.remove();
    overlays.delete(element);
  }
}

export function renderBadge(element: HTMLElement, state: BadgeState): HTMLElement | null {
  if (state.status === "pending") return null; // no decoration until resolved
  removeBadge(element);

  const doc = element.ownerDocument;
  const color = state.status === "verified" ? GREEN : RED;

  const overlay = doc.createElement("div");
  overlay.setAttribute(OVERLAY_ATTR, state.status);
  overlay.style.cssText =
    "position:absolute;box-sizing:border-box;pointer-events:none;z-index:2147483646;" +
    `border:3px solid ${color};`;
  positionOverlay(overlay, element);

  const shield = doc.createElement("div");
  shield.setAttribute("data-media-cert-shield", state.status);
  shield.style.cssText =
    "position:absolute;top:2px;left:2px;width:22px;height:22px;" +
    "pointer-events:auto;cursor:pointer;line-height:0;";
  shield.innerHTML = SHIELD_SVG(color);
  shield.title =
    state.status === "verified"
      ? `Certified by ${state.endorserName ?? "unknown endorser"}`
      : `Verification failed${state.detail ? `: ${state.detail}` : ""}`;
  shield.addEventListener("click", (event) => {
    event.stopPropagation();
    showPopup(element, state);
  });
  overlay.appendChild(shield);

  doc.body.appendChild(overlay);
  overlays.set(element, overlay);
  return overlay;
}

export function repositionBadges(elements: Iterable<Element>): void {
  for (const element of elements) {
    const overlay = overlays.get(element);
    if (overlay) positionOverlay(overlay, element);
  }
}

function popupRow(doc: Document, label: string, value: string): HTMLElement {
  const row = doc.createElement("div");
  row.style.cssText = "margin:2px 0;";
  const term = doc.createElement("strong");
  term.textContent = `${label}: `;
  row.appendChild(term);
  row.appendChild(doc.createTextNode(value));
  return row;
}

export function showPopup(element: HTMLElement, state: BadgeState): HTMLElement {
  const doc = element.ownerDocument;
  dismissPopups(doc);

  const popup = doc.createElement("div");
  popup.setAttribute(POPUP_ATTR, "");
  popup.style.cssText =
    "position:absolute;z-index:2147483647;background:white;color:#222;" +
    "border:1px solid #888;border-radius:6px;box-shadow:0 2px 10px rgba(0,0,0,.35);" +
    "padding:10px 14px;font:13px/1.45 system-ui,sans-serif;max-width:340px;";
  const rect = element.getBoundingClientRect();
  const win = doc.defaultView;
  popup.style.left = `${rect.left + (win ? win.scrollX : 0)}px`;
  popup.style.top = `${rect.top + (win ? win.scrollY : 0) + 28}px`;

  if (state.status === "verified" && state.metadata) {
    const meta = state.metadata;
    const location = [meta.city, meta.region, meta.country].filter(Boolean).join(", ");
    popup.appendChild(popupRow(doc, "Endorsed by", state.endorserName ?? ""));
    popup.appendChild(popupRow(doc, "Date & Time", meta.dateTime));
    popup.appendChild(popupRow(doc, "Location", location));
    popup.appendChild(popupRow(doc, "Photographer", meta.creator));
    popup.appendChild(popupRow(doc, "Description", meta.description));
    if (state.detail) popup.appendChild(popupRow(doc, "Note", state.detail));
  } else {
    popup.appendChild(popupRow(doc, "Verification failed", state.detail || "unknown reason"));
  }

  doc.body.appendChild(popup);

  const dismiss = (event: Event) => {
    if (event.target instanceof Node && popup.contains(event.target)) return;
    popup.remove();
    doc.removeEventListener("click", dismiss, true);
  };
  // deferred so the opening click does not immediately dismiss
  setTimeout(() => doc.addEventListener("click", dismiss, true), 0);
  return popup;
}

export function dismissPopups(doc: Document): void {
  for (const popup of Array.from(doc.querySelectorAll(`[${POPUP_ATTR}]`))) {
    popup.remove();
  }
}
