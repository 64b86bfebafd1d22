"""Consumer-side verification: single files, annotated pages, chunked streams.

Only media elements carrying the x-media-cert attribute are ever examined;
everything else on a page is invisible to the verifier. Page reports are
deterministic regardless of fetch concurrency: entries are sorted by asset
locator (document order breaks ties).
"""

from __future__ import annotations

import base64
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import BinaryIO, Iterator, Optional, Union
from urllib.parse import urljoin, urlsplit, unquote

import requests

from . import core, sidecar
from .core import (
    MediaAsset,
    MediaKind,
    TrustStore,
    VerificationReport,
    VerificationStatus,
)
from .errors import (
    MalformedCertificateError,
    MalformedSidecarError,
    PageUnreachableError,
    StreamTruncatedError,
)
from .htmltags import CERT_ATTR, scan_media_tags

MAX_REDIRECTS = 5
_STREAM_READ_SIZE = 64 * 1024


def verify_file(
    asset: Union[str, Path],
    sidecar_path: Optional[Union[str, Path]] = None,
    trust: TrustStore = TrustStore(),
) -> VerificationReport:
    """Verify one local asset against its sidecar.

    The sidecar defaults to "<asset>.xmp" next to the asset. A missing
    sidecar yields NoSidecar and an unparsable one MalformedSidecar; only a
    missing asset raises.
    """
    asset = Path(asset)
    if not asset.is_file():
        raise FileNotFoundError(f"asset not found: {asset}")
    side = Path(sidecar_path) if sidecar_path is not None else sidecar.sidecar_path_for(asset)
    locator = str(asset)
    if not side.is_file():
        return VerificationReport(
            status=VerificationStatus.NO_SIDECAR,
            detail=f"no sidecar at {side}",
            asset_locator=locator,
        )
    try:
        doc = sidecar.parse_sidecar(side.read_text(encoding="utf-8"))
    except (MalformedSidecarError, UnicodeDecodeError) as exc:
        return VerificationReport(
            status=VerificationStatus.MALFORMED_SIDECAR,
            detail=str(exc),
            asset_locator=locator,
        )
    media = MediaAsset(
        bytes=asset.read_bytes(), kind=core.media_kind_for(asset), locator=locator
    )
    return core.verify_endorsement(doc, media, trust)


@dataclass
class PageReport:
    """All verification outcomes for one crawled page."""

    page_locator: str
    entries: list[VerificationReport] = field(default_factory=list)

    def counts(self) -> dict[VerificationStatus, int]:
        tally = {status: 0 for status in VerificationStatus}
        for entry in self.entries:
            tally[entry.status] += 1
        return tally

    @property
    def ok(self) -> bool:
        return not any(entry.status in core.FAILURE_STATUSES for entry in self.entries)


def report_to_json(report: PageReport) -> dict:
    """Render a PageReport into the documented JSON shape."""
    entries = []
    for entry in report.entries:
        meta = None
        if entry.metadata is not None:
            meta = {
                "dateTime": entry.metadata.date_time,
                "city": entry.metadata.city,
                "region": entry.metadata.region,
                "country": entry.metadata.country,
                "creator": entry.metadata.creator,
                "headline": entry.metadata.headline,
                "description": entry.metadata.description,
            }
        entries.append(
            {
                "asset": entry.asset_locator,
                "status": entry.status.value,
                "endorser": entry.endorser.display_name if entry.endorser else None,
                "metadata": meta,
                "detail": entry.detail,
            }
        )
    counts = report.counts()
    return {
        "page": report.page_locator,
        "entries": entries,
        "summary": {
            "verified": counts[VerificationStatus.VERIFIED],
            "failed": counts[VerificationStatus.FAILED_DIGEST_MISMATCH]
            + counts[VerificationStatus.FAILED_SIGNATURE_INVALID],
            "noSidecar": counts[VerificationStatus.NO_SIDECAR],
            "malformed": counts[VerificationStatus.MALFORMED_SIDECAR],
            "untrusted": counts[VerificationStatus.UNTRUSTED_ENDORSER],
        },
    }


class _NotFound(Exception):
    pass


def _is_url(page: str) -> bool:
    return urlsplit(page).scheme in ("http", "https")


def _http_get(url: str) -> bytes:
    session = requests.Session()
    session.max_redirects = MAX_REDIRECTS
    response = session.get(url, timeout=30)
    if response.status_code == 404:
        raise _NotFound(url)
    response.raise_for_status()
    return response.content


def _local_get(base_dir: Path, ref: str) -> bytes:
    target = base_dir / unquote(urlsplit(ref).path).lstrip("/")
    if not target.is_file():
        raise _NotFound(str(target))
    return target.read_bytes()


def crawl_page(
    page: Union[str, Path], trust: TrustStore, concurrency: int = 4
) -> PageReport:
    """Verify every annotated media element on a page (URL or local file).

    Sidecar and asset URLs are resolved against the page location exactly as
    written in the markup; nothing is probed or guessed. Fetch failures do
    not abort the crawl: a missing or unfetchable resource shows up as a
    NoSidecar entry with the failure in its detail.
    """
    page = str(page)
    remote = _is_url(page)
    if remote:
        try:
            text = _http_get(page).decode("utf-8", errors="replace")
        except (_NotFound, requests.RequestException) as exc:
            raise PageUnreachableError(f"could not fetch page {page}: {exc}") from exc

        def resolve(ref: str) -> str:
            return urljoin(page, ref)

        def fetch(ref: str) -> bytes:
            return _http_get(resolve(ref))

    else:
        page_path = Path(page)
        if not page_path.is_file():
            raise PageUnreachableError(f"page file not found: {page}")
        text = page_path.read_text(encoding="utf-8", errors="replace")
        base_dir = page_path.parent

        def resolve(ref: str) -> str:
            if _is_url(ref):
                return ref
            return str(base_dir / unquote(urlsplit(ref).path).lstrip("/"))

        def fetch(ref: str) -> bytes:
            if _is_url(ref):
                return _http_get(ref)
            return _local_get(base_dir, ref)

    annotated = []
    for doc_index, tag in enumerate(scan_media_tags(text)):
        cert_ref = tag.attrs.get(CERT_ATTR)
        if cert_ref is None:
            continue
        annotated.append((doc_index, tag, cert_ref))

    def verify_one(item) -> tuple[str, int, VerificationReport]:
        doc_index, tag, cert_ref = item
        src = tag.attrs.get("src", "")
        locator = resolve(src) if src else f"{page}#element-{doc_index}"
        kind = MediaKind.VIDEO if tag.name == "video" else MediaKind.IMAGE
        if not src:
            return (
                locator,
                doc_index,
                VerificationReport(
                    status=VerificationStatus.NO_SIDECAR,
                    detail="media element has no src attribute",
                    asset_locator=locator,
                ),
            )
        try:
            sidecar_bytes = fetch(cert_ref)
        except _NotFound:
            return (
                locator,
                doc_index,
                VerificationReport(
                    status=VerificationStatus.NO_SIDECAR,
                    detail=f"sidecar not found: {resolve(cert_ref)}",
                    asset_locator=locator,
                ),
            )
        except (requests.RequestException, OSError) as exc:
            return (
                locator,
                doc_index,
                VerificationReport(
                    status=VerificationStatus.NO_SIDECAR,
                    detail=f"fetch error for sidecar {resolve(cert_ref)}: {exc}",
                    asset_locator=locator,
                ),
            )
        try:
            asset_bytes = fetch(src)
        except (_NotFound, requests.RequestException, OSError) as exc:
            return (
                locator,
                doc_index,
                VerificationReport(
                    status=VerificationStatus.NO_SIDECAR,
                    detail=f"fetch error for asset {locator}: {exc}",
                    asset_locator=locator,
                ),
            )
        try:
            doc = sidecar.parse_sidecar(sidecar_bytes.decode("utf-8"))
        except (MalformedSidecarError, UnicodeDecodeError) as exc:
            return (
                locator,
                doc_index,
                VerificationReport(
                    status=VerificationStatus.MALFORMED_SIDECAR,
                    detail=str(exc),
                    asset_locator=locator,
                ),
            )
        media = MediaAsset(bytes=asset_bytes, kind=kind, locator=locator)
        return (locator, doc_index, core.verify_endorsement(doc, media, trust))

    if annotated:
        with ThreadPoolExecutor(max_workers=max(1, concurrency)) as pool:
            results = list(pool.map(verify_one, annotated))
    else:
        results = []

    results.sort(key=lambda item: (item[0], item[1]))
    return PageReport(page_locator=page, entries=[report for _, _, report in results])


@dataclass(frozen=True)
class ChunkVerdict:
    """Outcome for a single chunk of a streamed asset."""

    index: int
    status: VerificationStatus
    detail: str = ""

    @property
    def verified(self) -> bool:
        return self.status is VerificationStatus.VERIFIED


def verify_chunked_stream(
    stream: BinaryIO, manifest: sidecar.SidecarDocument, trust: TrustStore
) -> Iterator[ChunkVerdict]:
    """Verify a chunk-signed asset incrementally while it streams in.

    Yields one verdict per manifest chunk the moment that chunk's final byte
    has been read; at most one chunk is buffered at a time. Each verdict
    depends only on its own chunk bytes and manifest entry, so tampering
    with chunk k flips verdict k alone. Raises StreamTruncatedError if the
    stream ends early (verdicts already yielded stand).
    """
    if not manifest.chunks:
        raise ValueError("manifest has no chunks")

    fixed_status = None
    fixed_detail = ""
    endorser = None
    warning = ""
    try:
        cert_der = base64.b64decode(manifest.certificate_b64.encode("ascii"), validate=True)
        endorser = core.extract_endorser(cert_der)
    except (MalformedCertificateError, ValueError) as exc:
        fixed_status = VerificationStatus.MALFORMED_SIDECAR
        fixed_detail = str(exc)
    if endorser is not None:
        decision = core.check_trust(endorser.certificate_der, trust)
        if not decision.trusted:
            fixed_status = VerificationStatus.UNTRUSTED_ENDORSER
            fixed_detail = decision.detail
        else:
            warning = decision.warning

    for entry in manifest.chunks:
        buffer = bytearray()
        while len(buffer) < entry.byte_length:
            piece = stream.read(min(_STREAM_READ_SIZE, entry.byte_length - len(buffer)))
            if not piece:
                raise StreamTruncatedError(
                    f"stream ended inside chunk {entry.index} "
                    f"({len(buffer)}/{entry.byte_length} bytes)"
                )
            buffer.extend(piece)

        if fixed_status is not None:
            yield ChunkVerdict(entry.index, fixed_status, fixed_detail)
            continue

        message = core.chunk_message(manifest.metadata, bytes(buffer), entry.index)
        try:
            signature = core.SignatureValue.from_b64(entry.signature_b64)
        except Exception as exc:
            yield ChunkVerdict(
                entry.index, VerificationStatus.MALFORMED_SIDECAR, f"bad signature field: {exc}"
            )
            continue
        if not core.verify_signature(message, signature, endorser.public_key):
            yield ChunkVerdict(
                entry.index,
                VerificationStatus.FAILED_SIGNATURE_INVALID,
                "chunk signature does not match",
            )
            continue
        if core.digest_of(message).hex != entry.digest_hex:
            yield ChunkVerdict(
                entry.index,
                VerificationStatus.FAILED_DIGEST_MISMATCH,
                "chunk digest does not match",
            )
            continue
        yield ChunkVerdict(entry.index, VerificationStatus.VERIFIED, warning)
