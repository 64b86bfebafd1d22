/** Canonical preimage: seven LF-terminated UTF-8 fields, then Base64 media.
 *
 * Must stay byte-identical to the publisher toolkit's construction or no
 * signature produced there will ever verify here.
 */

import { base64Encode, bytesToHex, concatBytes, utf8Bytes } from "./bytes";
import type { EndorsementMetadata } from "./types";

const LF = new Uint8Array([0x0a]);

export function metadataFieldsInOrder(meta: EndorsementMetadata): string[] {
  return [
    meta.dateTime,
    meta.city,
    meta.region,
    meta.country,
    meta.creator,
    meta.headline,
    meta.description,
  ];
}

export function canonicalMessage(meta: EndorsementMetadata, media: Uint8Array): Uint8Array {
  const parts: Uint8Array[] = [];
  for (const field of metadataFieldsInOrder(meta)) {
    parts.push(utf8Bytes(field), LF);
  }
  parts.push(utf8Bytes(base64Encode(media)));
  return concatBytes(parts);
}

export async function sha256Hex(data: Uint8Array): Promise<string> {
  const digest = await crypto.subtle.digest("SHA-256", data as BufferSource);
  return bytesToHex(new Uint8Array(digest));
}
