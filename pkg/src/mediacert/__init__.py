"""mediacert: detached XMP sidecar signing and verification for news media."""

from .core import (
    CanonicalMessage,
    Digest,
    DemoChain,
    EndorsementMetadata,
    EndorserIdentity,
    MediaAsset,
    MediaKind,
    SignatureValue,
    TrustPolicy,
    TrustStore,
    VerificationReport,
    VerificationStatus,
    canonical_message,
    chunk_message,
    compute_digest,
    extract_endorser,
    issue_demo_chain,
    sign_endorsement,
    verify_endorsement,
)
from .errors import (
    BindFailureError,
    EmptyMediaError,
    InvalidKeyError,
    MalformedCertificateError,
    MalformedSidecarError,
    MediaCertError,
    PageUnreachableError,
    StreamTruncatedError,
    UnparsableHtmlError,
)
from .sidecar import ChunkEntry, SidecarDocument, parse_sidecar, serialize_sidecar, sidecar_path_for
from .signer import SignRequest, annotate_html, batch_sign, sign_asset, sign_chunked
from .verifier import ChunkVerdict, PageReport, crawl_page, verify_chunked_stream, verify_file

__version__ = "0.1.0"

__all__ = [
    "BindFailureError",
    "CanonicalMessage",
    "ChunkEntry",
    "ChunkVerdict",
    "DemoChain",
    "Digest",
    "EmptyMediaError",
    "EndorsementMetadata",
    "EndorserIdentity",
    "InvalidKeyError",
    "MalformedCertificateError",
    "MalformedSidecarError",
    "MediaAsset",
    "MediaCertError",
    "MediaKind",
    "PageReport",
    "PageUnreachableError",
    "SidecarDocument",
    "SignRequest",
    "SignatureValue",
    "StreamTruncatedError",
    "TrustPolicy",
    "TrustStore",
    "UnparsableHtmlError",
    "VerificationReport",
    "VerificationStatus",
    "annotate_html",
    "batch_sign",
    "canonical_message",
    "chunk_message",
    "compute_digest",
    "crawl_page",
    "extract_endorser",
    "issue_demo_chain",
    "parse_sidecar",
    "serialize_sidecar",
    "sidecar_path_for",
    "sign_asset",
    "sign_chunked",
    "sign_endorsement",
    "verify_chunked_stream",
    "verify_endorsement",
    "verify_file",
]
