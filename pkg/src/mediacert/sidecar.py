"""XMP sidecar serialization and parsing.

The on-disk document is the fixed XML skeleton below with values substituted
into well-known element paths; elements are addressed by name path, not by
XML namespace resolution (the template's namespace declarations are emitted
verbatim and are partly nonstandard, so namespace-aware lookup would be
misleading). Values are emitted with single-space padding and trimmed of
ASCII whitespace on parse, which means metadata fields with leading or
trailing whitespace do not survive a round trip; signers should not produce
them.

Large assets may carry a chunk manifest instead: one remoteContent element
per chunk with index/offset/length/signature attributes and the chunk digest
in the hash child. A sidecar is chunked iff at least one remoteContent
element carries an index attribute.
"""

from __future__ import annotations

import base64
import binascii
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union
from xml.sax.saxutils import escape

from .core import EndorsementMetadata
from .errors import MalformedSidecarError

SIDECAR_SUFFIX = ".xmp"

# Whitespace stripped around element values; exactly the XML whitespace set,
# so non-ASCII spaces (e.g. NBSP) inside values are preserved.
_XML_WS = " \t\r\n"

_HEX_DIGEST_RE = re.compile(r"[0-9a-f]{64}")


def sidecar_path_for(asset_path: Union[str, Path]) -> Path:
    """Sidecar naming convention: the full asset filename plus ".xmp"."""
    asset_path = Path(asset_path)
    return asset_path.with_name(asset_path.name + SIDECAR_SUFFIX)


@dataclass(frozen=True)
class ChunkEntry:
    """One chunk of a chunk-signed asset."""

    index: int
    byte_offset: int
    byte_length: int
    digest_hex: str
    signature_b64: str


@dataclass(frozen=True)
class SidecarDocument:
    """Parsed form of the sidecar: metadata, digest, signature, certificate.

    digest_hex is 64 lowercase hex chars; signature_b64 and certificate_b64
    are padded standard-alphabet Base64 without line breaks. chunks is None
    for ordinary assets and an index-contiguous list for chunked ones.
    """

    metadata: EndorsementMetadata
    digest_hex: str
    signature_b64: str
    certificate_b64: str
    chunks: Optional[tuple[ChunkEntry, ...]] = None


_PLAIN_CONTENT_SET = """  <remoteContent>
    <hash type="SHA-2"></hash>
  </remoteContent>"""


def _chunk_content_set(chunks: tuple[ChunkEntry, ...]) -> str:
    lines = []
    for chunk in chunks:
        lines.append(
            f'  <remoteContent index="{chunk.index}" offset="{chunk.byte_offset}"'
            f' length="{chunk.byte_length}" signature="{chunk.signature_b64}">'
        )
        lines.append(f'    <hash type="SHA-2">{chunk.digest_hex}</hash>')
        lines.append("  </remoteContent>")
    return "\n".join(lines)


def serialize_sidecar(doc: SidecarDocument) -> str:
    """Render a sidecar document to its canonical XML text.

    Deterministic: equal documents produce byte-identical output.
    """
    meta = doc.metadata
    if doc.chunks:
        content_set = _chunk_content_set(doc.chunks)
    else:
        content_set = _PLAIN_CONTENT_SET
    return f"""<?xml version="1.0" encoding="UTF-8"?>
<xmpmeta xmlns:x="adobe:xs:meta/" x:xmptk="Adobe XMP Core 5.6-c148 79.163820, 2019/02/20-18:54:02">
<RDF xmlns:rdf="http://www.w3.org/1999/02/22-rdf-syntax-ns#">
<NewsItemDescription rdf:about="">
<newsItem xml:lang="en-US">
<catalogRef href=""/>
<contentMeta>
<contentCreated> {escape(meta.date_time)} </contentCreated>
<location>
  <city> {escape(meta.city)} </city>
  <region> {escape(meta.region)} </region>
  <country> {escape(meta.country)} </country>
</location>
<creator role="crol:photographer">
  <name> {escape(meta.creator)} </name>
</creator>
<creditline> </creditline>
<subject type="cpnat:abstract" qcode="medtop:20000717">
  <name xml:lang="en-GB"></name>
</subject>
<headline> {escape(meta.headline)} </headline>
<description> {escape(meta.description)} </description>
</contentMeta>
<contentSet>
{content_set}
</contentSet>
</newsItem>
<Signature>
  <SignedInfo>
    <DigestMethod Algorithm="http://www.w3.org/2001/04/xmldsig#sha256"/>
    <DigestValue> {doc.digest_hex} </DigestValue>
  </SignedInfo>
  <SignatureValue> {doc.signature_b64} </SignatureValue>
  <KeyInfo>
    <X509Data>
      <X509Certificate> {doc.certificate_b64} </X509Certificate>
    </X509Data>
  </KeyInfo>
</Signature>
</NewsItemDescription>
</RDF>
</xmpmeta>
"""


def _trim(text: Optional[str]) -> str:
    return (text or "").strip(_XML_WS)


def _require_b64(value: str, what: str) -> str:
    try:
        base64.b64decode(value.encode("ascii"), validate=True)
    except (binascii.Error, ValueError, UnicodeEncodeError) as exc:
        raise MalformedSidecarError(f"{what} is not valid Base64: {exc}") from exc
    return value


def _find_one(root: ET.Element, tag: str) -> Optional[ET.Element]:
    for elem in root.iter(tag):
        return elem
    return None


def _parse_chunks(root: ET.Element) -> Optional[tuple[ChunkEntry, ...]]:
    entries = []
    for rc in root.iter("remoteContent"):
        if "index" not in rc.attrib:
            continue
        try:
            index = int(rc.attrib["index"])
            offset = int(rc.attrib["offset"])
            length = int(rc.attrib["length"])
        except (KeyError, ValueError) as exc:
            raise MalformedSidecarError(f"bad chunk attributes: {exc}") from exc
        signature = _require_b64(rc.attrib.get("signature", ""), "chunk signature")
        digest = _trim(rc.findtext("hash"))
        if not _HEX_DIGEST_RE.fullmatch(digest):
            raise MalformedSidecarError(f"chunk {index} digest is not 64 lowercase hex chars")
        if length <= 0:
            raise MalformedSidecarError(f"chunk {index} has non-positive length")
        entries.append(ChunkEntry(index, offset, length, digest, signature))
    if not entries:
        return None
    entries.sort(key=lambda e: e.index)
    expected_offset = 0
    for position, entry in enumerate(entries):
        if entry.index != position:
            raise MalformedSidecarError("chunk indices are not contiguous from 0")
        if entry.byte_offset != expected_offset:
            raise MalformedSidecarError(
                f"chunk {entry.index} offset {entry.byte_offset} != expected {expected_offset}"
            )
        expected_offset += entry.byte_length
    return tuple(entries)


def parse_sidecar(text: str) -> SidecarDocument:
    """Parse sidecar XML text back into a SidecarDocument.

    Inverse of serialize_sidecar up to whitespace trimming; unknown extra
    elements are ignored. Raises MalformedSidecarError for anything that is
    not well-formed or lacks DigestValue / SignatureValue / X509Certificate
    / contentMeta.
    """
    try:
        root = ET.fromstring(text.encode("utf-8"))
    except ET.ParseError as exc:
        raise MalformedSidecarError(f"not well-formed XML: {exc}") from exc

    content_meta = _find_one(root, "contentMeta")
    if content_meta is None:
        raise MalformedSidecarError("contentMeta element missing")
    digest_elem = _find_one(root, "DigestValue")
    if digest_elem is None:
        raise MalformedSidecarError("DigestValue element missing")
    signature_elem = _find_one(root, "SignatureValue")
    if signature_elem is None:
        raise MalformedSidecarError("SignatureValue element missing")
    certificate_elem = _find_one(root, "X509Certificate")
    if certificate_elem is None:
        raise MalformedSidecarError("X509Certificate element missing")

    metadata = EndorsementMetadata(
        date_time=_trim(content_meta.findtext("contentCreated")),
        city=_trim(content_meta.findtext("location/city")),
        region=_trim(content_meta.findtext("location/region")),
        country=_trim(content_meta.findtext("location/country")),
        creator=_trim(content_meta.findtext("creator/name")),
        headline=_trim(content_meta.findtext("headline")),
        description=_trim(content_meta.findtext("description")),
    )

    digest_hex = _trim(digest_elem.text)
    if not _HEX_DIGEST_RE.fullmatch(digest_hex):
        raise MalformedSidecarError("DigestValue is not 64 lowercase hex chars")
    signature_b64 = _require_b64(_trim(signature_elem.text), "SignatureValue")
    certificate_b64 = _require_b64(_trim(certificate_elem.text), "X509Certificate")

    return SidecarDocument(
        metadata=metadata,
        digest_hex=digest_hex,
        signature_b64=signature_b64,
        certificate_b64=certificate_b64,
        chunks=_parse_chunks(root),
    )
