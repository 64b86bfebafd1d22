/** Byte helpers: UTF-8, hex, and strict RFC 4648 Base64 (padded, unwrapped). */

const B64_CHARS = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
const B64_RE = /^[A-Za-z0-9+/]*={0,2}$/;

export function utf8Bytes(text: string): Uint8Array {
  return new TextEncoder().encode(text);
}

export function concatBytes(parts: Uint8Array[]): Uint8Array {
  let total = 0;
  for (const part of parts) total += part.length;
  const out = new Uint8Array(total);
  let offset = 0;
  for (const part of parts) {
    out.set(part, offset);
    offset += part.length;
  }
  return out;
}

export function bytesEqual(a: Uint8Array, b: Uint8Array): boolean {
  if (a.length !== b.length) return false;
  for (let i = 0; i < a.length; i++) {
    if (a[i] !== b[i]) return false;
  }
  return true;
}

export function bytesToHex(bytes: Uint8Array): string {
  let out = "";
  for (const byte of bytes) out += byte.toString(16).padStart(2, "0");
  return out;
}

export function base64Encode(bytes: Uint8Array): string {
  let out = "";
  for (let i = 0; i < bytes.length; i += 3) {
    const b0 = bytes[i];
    const b1 = i + 1 < bytes.length ? bytes[i + 1] : 0;
    const b2 = i + 2 < bytes.length ? bytes[i + 2] : 0;
    out += B64_CHARS[b0 >> 2];
    out += B64_CHARS[((b0 & 0x03) << 4) | (b1 >> 4)];
    out += i + 1 < bytes.length ? B64_CHARS[((b1 & 0x0f) << 2) | (b2 >> 6)] : "=";
    out += i + 2 < bytes.length ? B64_CHARS[b2 & 0x3f] : "=";
  }
  return out;
}

export function base64Decode(text: string): Uint8Array {
  if (text.length % 4 !== 0 || !B64_RE.test(text)) {
    throw new Error("invalid Base64");
  }
  const padding = text.endsWith("==") ? 2 : text.endsWith("=") ? 1 : 0;
  const out = new Uint8Array((text.length / 4) * 3 - padding);
  let outPos = 0;
  for (let i = 0; i < text.length; i += 4) {
    const n =
      (B64_CHARS.indexOf(text[i]) << 18) |
      (B64_CHARS.indexOf(text[i + 1]) << 12) |
      ((text[i + 2] === "=" ? 0 : B64_CHARS.indexOf(text[i + 2])) << 6) |
      (text[i + 3] === "=" ? 0 : B64_CHARS.indexOf(text[i + 3]));
    out[outPos++] = n >> 16;
    if (text[i + 2] !== "=") out[outPos++] = (n >> 8) & 0xff;
    if (text[i + 3] !== "=") out[outPos++] = n & 0xff;
  }
  return out;
}
