"""Publisher-side operations: sign assets, write sidecars, annotate HTML.

Signing never touches the media file. Sidecars are written atomically
(temp file in the target directory, then rename) and are deterministic for
identical inputs since RSASSA-PKCS1-v1_5 is deterministic.
"""

from __future__ import annotations

import base64
import json
import os
import re
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Mapping, Optional, Union
from xml.sax.saxutils import quoteattr

from cryptography.hazmat.primitives import serialization

from . import core, sidecar
from .core import EndorsementMetadata, MediaAsset, METADATA_FIELDS
from .errors import EmptyMediaError, MalformedCertificateError, MalformedSidecarError
from .htmltags import CERT_ATTR, scan_media_tags

DEFAULT_CHUNK_SIZE = 1024 * 1024
MIN_CHUNK_SIZE = 64 * 1024

# Environment variable names for the seven metadata fields, in field order.
METADATA_ENV_VARS = {name: "MEDIACERT_" + name.upper() for name in METADATA_FIELDS}

_PROMPTS = {
    "date_time": "Date and time",
    "city": "City",
    "region": "Region",
    "country": "Country",
    "creator": "Creator",
    "headline": "Headline",
    "description": "Description",
}


@dataclass(frozen=True)
class SignRequest:
    asset_path: Path
    metadata: EndorsementMetadata
    key_path: Path
    cert_chain_path: Path
    output_path: Optional[Path] = None
    chunk_size: Optional[int] = None

    def __post_init__(self) -> None:
        if self.chunk_size is not None and self.chunk_size < MIN_CHUNK_SIZE:
            raise ValueError(f"chunk_size must be at least {MIN_CHUNK_SIZE} bytes")

    @property
    def sidecar_path(self) -> Path:
        if self.output_path is not None:
            return Path(self.output_path)
        return sidecar.sidecar_path_for(self.asset_path)


def collect_metadata(
    flags: Mapping[str, Optional[str]],
    env: Optional[Mapping[str, str]] = None,
    prompt: Optional[Callable[[str], str]] = None,
    stdin_is_tty: Optional[bool] = None,
) -> EndorsementMetadata:
    """Resolve the seven metadata fields.

    Precedence per field: flag, then environment variable, then interactive
    prompt. Prompting happens only when a field is still absent and a
    terminal is attached; otherwise a missing field is an error. Fields are
    stored verbatim, empty strings included.
    """
    env = os.environ if env is None else env
    if stdin_is_tty is None:
        stdin_is_tty = sys.stdin.isatty()
    if prompt is None:
        prompt = input

    values = {}
    missing = []
    for name in METADATA_FIELDS:
        value = flags.get(name)
        if value is None:
            value = env.get(METADATA_ENV_VARS[name])
        if value is None:
            missing.append(name)
        values[name] = value
    if missing:
        if not stdin_is_tty:
            pretty = ", ".join(name.replace("_", "-") for name in missing)
            raise ValueError(f"missing metadata fields (no terminal to prompt): {pretty}")
        for name in METADATA_FIELDS:  # prompt in canonical field order
            if name in missing:
                values[name] = prompt(f"{_PROMPTS[name]}: ")
    return EndorsementMetadata(**values)


def _read_asset(path: Path) -> MediaAsset:
    if not path.is_file():
        raise FileNotFoundError(f"asset not found: {path}")
    return MediaAsset(bytes=path.read_bytes(), kind=core.media_kind_for(path), locator=str(path))


def _load_signing_material(req: SignRequest):
    key_path = Path(req.key_path)
    cert_path = Path(req.cert_chain_path)
    if not key_path.is_file():
        raise FileNotFoundError(f"key file not found: {key_path}")
    if not cert_path.is_file():
        raise FileNotFoundError(f"certificate file not found: {cert_path}")
    key = core.load_private_key(key_path.read_bytes())
    cert = core.load_certificate(cert_path.read_bytes())
    return key, cert


def _cert_b64(cert) -> str:
    return base64.b64encode(cert.public_bytes(serialization.Encoding.DER)).decode("ascii")


def _write_atomic(path: Path, text: str) -> None:
    fd, tmp_name = tempfile.mkstemp(dir=str(path.parent), prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise


def sign_asset(req: SignRequest) -> Path:
    """Sign one asset and write its sidecar; returns the sidecar path."""
    if req.chunk_size is not None:
        return sign_chunked(req)
    media = _read_asset(Path(req.asset_path))
    key, cert = _load_signing_material(req)

    message = core.canonical_message(req.metadata, media)
    doc = sidecar.SidecarDocument(
        metadata=req.metadata,
        digest_hex=core.digest_of(message).hex,
        signature_b64=core.sign_message(message, key).b64,
        certificate_b64=_cert_b64(cert),
    )
    out = req.sidecar_path
    _write_atomic(out, sidecar.serialize_sidecar(doc))
    return out


def sign_chunked(req: SignRequest) -> Path:
    """Split the asset into fixed-size chunks and sign each one.

    Each chunk's preimage binds the chunk index (see core.chunk_message), so
    reordering chunks or their signatures fails verification. The top-level
    digest and signature still cover the whole asset, letting a chunked
    sidecar also verify through the ordinary whole-file path.
    """
    chunk_size = req.chunk_size if req.chunk_size is not None else DEFAULT_CHUNK_SIZE
    if chunk_size < MIN_CHUNK_SIZE:
        raise ValueError(f"chunk_size must be at least {MIN_CHUNK_SIZE} bytes")
    media = _read_asset(Path(req.asset_path))
    if not media.bytes:
        raise EmptyMediaError(f"cannot chunk-sign empty asset: {req.asset_path}")
    key, cert = _load_signing_material(req)

    entries = []
    data = media.bytes
    for index, offset in enumerate(range(0, len(data), chunk_size)):
        chunk = data[offset : offset + chunk_size]
        message = core.chunk_message(req.metadata, chunk, index)
        entries.append(
            sidecar.ChunkEntry(
                index=index,
                byte_offset=offset,
                byte_length=len(chunk),
                digest_hex=core.digest_of(message).hex,
                signature_b64=core.sign_message(message, key).b64,
            )
        )

    whole = core.canonical_message(req.metadata, media)
    doc = sidecar.SidecarDocument(
        metadata=req.metadata,
        digest_hex=core.digest_of(whole).hex,
        signature_b64=core.sign_message(whole, key).b64,
        certificate_b64=_cert_b64(cert),
        chunks=tuple(entries),
    )
    out = req.sidecar_path
    _write_atomic(out, sidecar.serialize_sidecar(doc))
    return out


_CERT_ATTR_RE = re.compile(r"""\s+x-media-cert\s*=\s*("[^"]*"|'[^']*'|[^\s>/]+)""")


def annotate_html(page: str, mapping: Mapping[str, str]) -> str:
    """Add x-media-cert attributes to img/video tags with mapped sources.

    Tags whose src is not in the mapping, and all other markup, are left
    byte-for-byte untouched. Idempotent: a tag that already carries the
    correct attribute is not modified again.
    """
    replacements = []
    for tag in scan_media_tags(page):
        src = tag.attrs.get("src")
        if src is None or src not in mapping:
            continue
        target = mapping[src]
        if tag.attrs.get(CERT_ATTR) == target:
            continue
        raw = tag.raw
        if not raw.endswith(">"):
            continue
        body = _CERT_ATTR_RE.sub("", raw[:-1])
        self_closing = body.endswith("/")
        if self_closing:
            body = body[:-1]
        new = body.rstrip() + f" {CERT_ATTR}={quoteattr(target)}" + ("/>" if self_closing else ">")
        replacements.append((tag.offset, tag.offset + len(raw), new))

    if not replacements:
        return page
    pieces = []
    cursor = 0
    for start, end, new in sorted(replacements):
        pieces.append(page[cursor:start])
        pieces.append(new)
        cursor = end
    pieces.append(page[cursor:])
    return "".join(pieces)


MEDIA_EXTENSIONS = frozenset(core.IMAGE_EXTENSIONS | core.VIDEO_EXTENSIONS)


@dataclass
class BatchSummary:
    signed: list[Path] = field(default_factory=list)
    skipped: list[Path] = field(default_factory=list)
    failed: list[tuple[Path, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failed


def _has_valid_sidecar(asset_path: Path) -> bool:
    """True if the existing sidecar is self-consistent for the asset bytes.

    Self-consistent means it parses and the embedded certificate's key
    verifies the signature and digest; trust anchoring is not required for
    the skip decision.
    """
    side = sidecar.sidecar_path_for(asset_path)
    if not side.is_file():
        return False
    try:
        doc = sidecar.parse_sidecar(side.read_text(encoding="utf-8"))
        endorser = core.extract_endorser(base64.b64decode(doc.certificate_b64))
    except (MalformedSidecarError, MalformedCertificateError, OSError, UnicodeDecodeError):
        return False
    media = MediaAsset(
        bytes=asset_path.read_bytes(), kind=core.media_kind_for(asset_path), locator=str(asset_path)
    )
    message = core.canonical_message(doc.metadata, media)
    if not core.verify_signature(
        message, core.SignatureValue.from_b64(doc.signature_b64), endorser.public_key
    ):
        return False
    return core.digest_of(message).hex == doc.digest_hex


def _metadata_for_file(
    asset_path: Path, shared: Optional[EndorsementMetadata]
) -> EndorsementMetadata:
    """Per-file metadata: <asset>.meta.json beats the shared values."""
    meta_path = asset_path.with_name(asset_path.name + ".meta.json")
    if meta_path.is_file():
        raw = json.loads(meta_path.read_text(encoding="utf-8"))
        values = {name: str(raw.get(name, "")) for name in METADATA_FIELDS}
        return EndorsementMetadata(**values)
    if shared is None:
        raise ValueError(f"no metadata for {asset_path}: no shared flags and no meta.json")
    return shared


def batch_sign(
    directory: Union[str, Path],
    key_path: Union[str, Path],
    cert_chain_path: Union[str, Path],
    metadata: Optional[EndorsementMetadata] = None,
    *,
    force: bool = False,
    concurrency: int = 4,
) -> BatchSummary:
    """Sign every media file in a directory.

    Files that already have a valid sidecar are skipped unless forced.
    Per-file failures are collected, not raised; results are sorted by path
    so runs are deterministic regardless of worker scheduling.
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise FileNotFoundError(f"directory not found: {directory}")
    targets = sorted(
        p for p in directory.iterdir() if p.suffix.lower() in MEDIA_EXTENSIONS
    )

    summary = BatchSummary()

    def process(asset_path: Path) -> tuple[str, Path, str]:
        try:
            if not force and _has_valid_sidecar(asset_path):
                return ("skipped", asset_path, "")
            req = SignRequest(
                asset_path=asset_path,
                metadata=_metadata_for_file(asset_path, metadata),
                key_path=Path(key_path),
                cert_chain_path=Path(cert_chain_path),
            )
            sign_asset(req)
            return ("signed", asset_path, "")
        except Exception as exc:
            return ("failed", asset_path, str(exc))

    with ThreadPoolExecutor(max_workers=max(1, concurrency)) as pool:
        results = list(pool.map(process, targets))

    for outcome, path, detail in sorted(results, key=lambda item: item[1]):
        if outcome == "signed":
            summary.signed.append(path)
        elif outcome == "skipped":
            summary.skipped.append(path)
        else:
            summary.failed.append((path, detail))
    return summary
