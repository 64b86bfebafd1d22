"""Cryptographic core: canonical preimage, digesting, signing, verification.

Everything here is a pure function over immutable values; no file or network
I/O. The canonical preimage layout is the contract shared by the signer, the
verifier and the browser extension:

    UTF8(date_time) LF UTF8(city) LF UTF8(region) LF UTF8(country) LF
    UTF8(creator) LF UTF8(headline) LF UTF8(description) LF
    ASCII(Base64(media bytes))

LF is the single byte 0x0A and Base64 is RFC 4648 standard alphabet, padded,
with no line wrapping. The per-field LF delimiter blocks boundary-shift
collisions (city="ab", region="c" vs city="a", region="bc"). For per-chunk
signing the chunk index is inserted as a decimal string plus LF before the
Base64 payload, which binds the index and defeats chunk reordering.
"""

from __future__ import annotations

import base64
import binascii
import enum
import hashlib
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Optional, Union

from cryptography import x509
from cryptography.exceptions import InvalidSignature
from cryptography.hazmat.primitives import hashes, serialization
from cryptography.hazmat.primitives.asymmetric import padding, rsa
from cryptography.x509.oid import NameOID

from .errors import InvalidKeyError, MalformedCertificateError

MIN_RSA_BITS = 2048

METADATA_FIELDS = (
    "date_time",
    "city",
    "region",
    "country",
    "creator",
    "headline",
    "description",
)


@dataclass(frozen=True)
class EndorsementMetadata:
    """The seven descriptive fields an endorser attests to.

    All fields are stored verbatim; empty strings are allowed, absence is
    not. Serialization order is fixed and must never change.
    """

    date_time: str
    city: str
    region: str
    country: str
    creator: str
    headline: str
    description: str

    def fields_in_order(self) -> tuple[str, ...]:
        return tuple(getattr(self, name) for name in METADATA_FIELDS)


class MediaKind(enum.Enum):
    IMAGE = "image"
    VIDEO = "video"
    OTHER = "other"


IMAGE_EXTENSIONS = {".jpg", ".jpeg", ".png", ".gif", ".webp", ".bmp", ".tif", ".tiff"}
VIDEO_EXTENSIONS = {".mp4", ".webm", ".mov", ".avi", ".mkv", ".m4v"}


def media_kind_for(path: Union[str, Path]) -> MediaKind:
    """Guess the media kind from a file extension."""
    ext = Path(path).suffix.lower()
    if ext in IMAGE_EXTENSIONS:
        return MediaKind.IMAGE
    if ext in VIDEO_EXTENSIONS:
        return MediaKind.VIDEO
    return MediaKind.OTHER


@dataclass(frozen=True)
class MediaAsset:
    """Raw bytes of an image/video plus its kind and source locator."""

    bytes: bytes
    kind: MediaKind = MediaKind.OTHER
    locator: str = ""


@dataclass(frozen=True)
class CanonicalMessage:
    """The exact byte preimage fed to the hash and the signature."""

    bytes: bytes


@dataclass(frozen=True)
class Digest:
    """A SHA-256 digest (32 bytes)."""

    value: bytes

    def __post_init__(self) -> None:
        if len(self.value) != 32:
            raise ValueError("digest must be exactly 32 bytes")

    @property
    def hex(self) -> str:
        return self.value.hex()


@dataclass(frozen=True)
class SignatureValue:
    """An RSA signature; raw length equals the key's modulus byte-length."""

    raw: bytes

    @property
    def b64(self) -> str:
        return base64.b64encode(self.raw).decode("ascii")

    @classmethod
    def from_b64(cls, text: str) -> "SignatureValue":
        return cls(base64.b64decode(text.encode("ascii"), validate=True))


@dataclass(frozen=True)
class EndorserIdentity:
    """Name and public key extracted from an endorser's X.509 certificate."""

    display_name: str
    public_key: rsa.RSAPublicKey
    certificate_der: bytes


class TrustPolicy(enum.Enum):
    STRICT = "strict"
    WARN_ON_EXPIRY = "warn-on-expiry"


@dataclass(frozen=True)
class TrustStore:
    """Trusted root certificates (DER) plus the expiry-handling policy."""

    roots: tuple[bytes, ...] = ()
    policy: TrustPolicy = TrustPolicy.WARN_ON_EXPIRY

    @classmethod
    def from_pem_data(
        cls, *pem_blobs: bytes, policy: TrustPolicy = TrustPolicy.WARN_ON_EXPIRY
    ) -> "TrustStore":
        roots = []
        for blob in pem_blobs:
            for cert in x509.load_pem_x509_certificates(blob):
                roots.append(cert.public_bytes(serialization.Encoding.DER))
        return cls(roots=tuple(roots), policy=policy)

    @classmethod
    def from_dir(
        cls, path: Union[str, Path], policy: TrustPolicy = TrustPolicy.WARN_ON_EXPIRY
    ) -> "TrustStore":
        """Load every PEM certificate found in a directory (non-recursive)."""
        blobs = []
        for entry in sorted(Path(path).iterdir()):
            if entry.is_file() and entry.suffix.lower() in {".pem", ".crt", ".cert"}:
                blobs.append(entry.read_bytes())
        return cls.from_pem_data(*blobs, policy=policy)


class VerificationStatus(enum.Enum):
    VERIFIED = "Verified"
    FAILED_DIGEST_MISMATCH = "FailedDigestMismatch"
    FAILED_SIGNATURE_INVALID = "FailedSignatureInvalid"
    UNTRUSTED_ENDORSER = "UntrustedEndorser"
    MALFORMED_SIDECAR = "MalformedSidecar"
    NO_SIDECAR = "NoSidecar"


FAILURE_STATUSES = frozenset(
    {
        VerificationStatus.FAILED_DIGEST_MISMATCH,
        VerificationStatus.FAILED_SIGNATURE_INVALID,
        VerificationStatus.UNTRUSTED_ENDORSER,
        VerificationStatus.MALFORMED_SIDECAR,
    }
)


@dataclass(frozen=True)
class VerificationReport:
    """Per-asset verification outcome."""

    status: VerificationStatus
    endorser: Optional[EndorserIdentity] = None
    metadata: Optional[EndorsementMetadata] = None
    detail: str = ""
    asset_locator: str = ""

    @property
    def verified(self) -> bool:
        return self.status is VerificationStatus.VERIFIED


def canonical_message(meta: EndorsementMetadata, media: MediaAsset) -> CanonicalMessage:
    """Build the canonical preimage for a whole asset."""
    parts = []
    for value in meta.fields_in_order():
        parts.append(value.encode("utf-8"))
        parts.append(b"\n")
    parts.append(base64.b64encode(media.bytes))
    return CanonicalMessage(b"".join(parts))


def chunk_message(meta: EndorsementMetadata, chunk: bytes, index: int) -> CanonicalMessage:
    """Canonical preimage for one chunk of a chunk-signed asset.

    The decimal chunk index plus LF sits between the metadata block and the
    Base64 payload so a signature is only valid for its own position.
    """
    if index < 0:
        raise ValueError("chunk index must be non-negative")
    parts = []
    for value in meta.fields_in_order():
        parts.append(value.encode("utf-8"))
        parts.append(b"\n")
    parts.append(str(index).encode("ascii"))
    parts.append(b"\n")
    parts.append(base64.b64encode(chunk))
    return CanonicalMessage(b"".join(parts))


def compute_digest(meta: EndorsementMetadata, media: MediaAsset) -> Digest:
    """SHA-256 over the canonical preimage."""
    return digest_of(canonical_message(meta, media))


def digest_of(message: CanonicalMessage) -> Digest:
    return Digest(hashlib.sha256(message.bytes).digest())


KeyMaterial = Union[bytes, str, rsa.RSAPrivateKey]


def load_private_key(material: KeyMaterial) -> rsa.RSAPrivateKey:
    """Load an RSA private key from PEM or DER bytes (or pass one through).

    Raises InvalidKeyError for undecodable material, non-RSA keys, and
    moduli below 2048 bits.
    """
    if isinstance(material, rsa.RSAPrivateKey):
        key = material
    else:
        data = material.encode("ascii") if isinstance(material, str) else bytes(material)
        key = None
        for loader in (serialization.load_pem_private_key, serialization.load_der_private_key):
            try:
                key = loader(data, password=None)
                break
            except Exception:
                continue
        if key is None:
            raise InvalidKeyError("could not decode private key (PEM or DER expected)")
    if not isinstance(key, rsa.RSAPrivateKey):
        raise InvalidKeyError("private key is not RSA")
    if key.key_size < MIN_RSA_BITS:
        raise InvalidKeyError(f"RSA key is {key.key_size} bits; minimum is {MIN_RSA_BITS}")
    return key


def load_certificate(data: bytes) -> x509.Certificate:
    """Load one X.509 certificate from DER or PEM bytes."""
    try:
        return x509.load_der_x509_certificate(data)
    except Exception:
        pass
    try:
        return x509.load_pem_x509_certificate(data)
    except Exception as exc:
        raise MalformedCertificateError(f"could not decode certificate: {exc}") from exc


def sign_message(message: CanonicalMessage, key: KeyMaterial) -> SignatureValue:
    """RSASSA-PKCS1-v1_5 / SHA-256 over an already built preimage."""
    private_key = load_private_key(key)
    raw = private_key.sign(message.bytes, padding.PKCS1v15(), hashes.SHA256())
    return SignatureValue(raw)


def sign_endorsement(
    meta: EndorsementMetadata, media: MediaAsset, key: KeyMaterial
) -> SignatureValue:
    """Sign the canonical preimage of (metadata, media)."""
    return sign_message(canonical_message(meta, media), key)


def verify_signature(
    message: CanonicalMessage, signature: SignatureValue, public_key: rsa.RSAPublicKey
) -> bool:
    try:
        public_key.verify(signature.raw, message.bytes, padding.PKCS1v15(), hashes.SHA256())
        return True
    except InvalidSignature:
        return False
    except Exception:
        return False


def extract_endorser(certificate_der: bytes) -> EndorserIdentity:
    """Pull the display name and RSA public key out of a certificate.

    Display name preference: subject Organization, then Common Name, then
    the whole RFC 4514 subject string.
    """
    cert = load_certificate(certificate_der)
    public_key = cert.public_key()
    if not isinstance(public_key, rsa.RSAPublicKey):
        raise MalformedCertificateError("certificate public key is not RSA")
    display_name = ""
    for oid in (NameOID.ORGANIZATION_NAME, NameOID.COMMON_NAME):
        attrs = cert.subject.get_attributes_for_oid(oid)
        if attrs:
            display_name = str(attrs[0].value)
            break
    if not display_name:
        display_name = cert.subject.rfc4514_string()
    return EndorserIdentity(
        display_name=display_name,
        public_key=public_key,
        certificate_der=cert.public_bytes(serialization.Encoding.DER),
    )


@dataclass(frozen=True)
class TrustDecision:
    trusted: bool
    warning: str = ""
    detail: str = ""


def check_trust(certificate_der: bytes, trust: TrustStore) -> TrustDecision:
    """Chain the endorser certificate to a trust root.

    A certificate is trusted when it is itself a root in the store, or when
    some root's subject matches its issuer and that root's key verifies its
    signature. Time-validity problems downgrade to a warning under
    WARN_ON_EXPIRY and to untrusted under STRICT.
    """
    if not trust.roots:
        return TrustDecision(False, detail="trust store is empty")
    try:
        cert = load_certificate(certificate_der)
    except MalformedCertificateError as exc:
        return TrustDecision(False, detail=str(exc))

    anchored = False
    cert_der = cert.public_bytes(serialization.Encoding.DER)
    for root_der in trust.roots:
        if root_der == cert_der:
            anchored = True
            break
        try:
            root = x509.load_der_x509_certificate(root_der)
        except Exception:
            continue
        if root.subject != cert.issuer:
            continue
        try:
            root.public_key().verify(  # type: ignore[union-attr]
                cert.signature,
                cert.tbs_certificate_bytes,
                padding.PKCS1v15(),
                cert.signature_hash_algorithm,
            )
            anchored = True
            break
        except Exception:
            continue
    if not anchored:
        return TrustDecision(False, detail="no trust root matches the endorser certificate")

    now = datetime.now(timezone.utc)
    time_problem = ""
    if now < cert.not_valid_before_utc:
        time_problem = "endorser certificate is not yet valid"
    elif now > cert.not_valid_after_utc:
        time_problem = "endorser certificate has expired"
    if time_problem:
        if trust.policy is TrustPolicy.STRICT:
            return TrustDecision(False, detail=time_problem)
        return TrustDecision(True, warning=f"warning: {time_problem}")
    return TrustDecision(True)


def verify_endorsement(sidecar, media: MediaAsset, trust: TrustStore) -> VerificationReport:
    """Run the full verification procedure for one asset.

    Steps, in order: extract the endorser identity from the certificate,
    chain the certificate to a trust root, check the signature over the
    canonical preimage, then cross-check the stored digest. The first
    failing step determines the report status; nothing is raised.

    ``sidecar`` is a parsed sidecar document (see mediacert.sidecar); parse
    failures are reported upstream as MalformedSidecar.
    """
    locator = media.locator

    try:
        cert_der = base64.b64decode(sidecar.certificate_b64.encode("ascii"), validate=True)
    except (binascii.Error, ValueError, UnicodeEncodeError) as exc:
        return VerificationReport(
            status=VerificationStatus.MALFORMED_SIDECAR,
            detail=f"certificate is not valid Base64: {exc}",
            asset_locator=locator,
        )
    try:
        endorser = extract_endorser(cert_der)
    except MalformedCertificateError as exc:
        return VerificationReport(
            status=VerificationStatus.MALFORMED_SIDECAR,
            detail=str(exc),
            asset_locator=locator,
        )

    decision = check_trust(endorser.certificate_der, trust)
    if not decision.trusted:
        return VerificationReport(
            status=VerificationStatus.UNTRUSTED_ENDORSER,
            endorser=endorser,
            detail=decision.detail,
            asset_locator=locator,
        )

    try:
        signature = SignatureValue.from_b64(sidecar.signature_b64)
    except (binascii.Error, ValueError) as exc:
        return VerificationReport(
            status=VerificationStatus.MALFORMED_SIDECAR,
            endorser=endorser,
            detail=f"signature is not valid Base64: {exc}",
            asset_locator=locator,
        )
    message = canonical_message(sidecar.metadata, media)
    if not verify_signature(message, signature, endorser.public_key):
        return VerificationReport(
            status=VerificationStatus.FAILED_SIGNATURE_INVALID,
            endorser=endorser,
            detail="signature does not match the asset and metadata",
            asset_locator=locator,
        )

    recomputed = digest_of(message)
    if recomputed.hex != sidecar.digest_hex:
        return VerificationReport(
            status=VerificationStatus.FAILED_DIGEST_MISMATCH,
            endorser=endorser,
            detail="stored digest does not match the recomputed digest",
            asset_locator=locator,
        )

    return VerificationReport(
        status=VerificationStatus.VERIFIED,
        endorser=endorser,
        metadata=sidecar.metadata,
        detail=decision.warning,
        asset_locator=locator,
    )


@dataclass(frozen=True)
class DemoChain:
    """A self-signed demo root plus one endorser certificate it issued."""

    root_cert: x509.Certificate
    root_key: rsa.RSAPrivateKey = field(repr=False)
    endorser_cert: x509.Certificate
    endorser_key: rsa.RSAPrivateKey = field(repr=False)

    @property
    def root_cert_pem(self) -> bytes:
        return self.root_cert.public_bytes(serialization.Encoding.PEM)

    @property
    def endorser_cert_pem(self) -> bytes:
        return self.endorser_cert.public_bytes(serialization.Encoding.PEM)

    @property
    def endorser_key_pem(self) -> bytes:
        return self.endorser_key.private_bytes(
            encoding=serialization.Encoding.PEM,
            format=serialization.PrivateFormat.PKCS8,
            encryption_algorithm=serialization.NoEncryption(),
        )

    @property
    def root_key_pem(self) -> bytes:
        return self.root_key.private_bytes(
            encoding=serialization.Encoding.PEM,
            format=serialization.PrivateFormat.PKCS8,
            encryption_algorithm=serialization.NoEncryption(),
        )

    def trust_store(self, policy: TrustPolicy = TrustPolicy.WARN_ON_EXPIRY) -> TrustStore:
        return TrustStore(
            roots=(self.root_cert.public_bytes(serialization.Encoding.DER),),
            policy=policy,
        )


def issue_demo_chain(
    endorser_name: str,
    *,
    key_size: int = MIN_RSA_BITS,
    valid_days: int = 3650,
    not_before: Optional[datetime] = None,
    not_after: Optional[datetime] = None,
) -> DemoChain:
    """Generate a demo root CA and an endorser certificate it signs.

    Demo/test PKI only; fixtures need no external CA. The optional validity
    window applies to the endorser certificate and lets tests build expired
    or not-yet-valid endorsers.
    """
    if not endorser_name:
        raise ValueError("endorser_name must be non-empty")
    now = datetime.now(timezone.utc)

    root_key = rsa.generate_private_key(public_exponent=65537, key_size=key_size)
    root_name = x509.Name(
        [
            x509.NameAttribute(NameOID.ORGANIZATION_NAME, f"{endorser_name} Demo Root"),
            x509.NameAttribute(NameOID.COMMON_NAME, f"{endorser_name} Demo Root CA"),
        ]
    )
    root_cert = (
        x509.CertificateBuilder()
        .subject_name(root_name)
        .issuer_name(root_name)
        .public_key(root_key.public_key())
        .serial_number(x509.random_serial_number())
        .not_valid_before(now - timedelta(days=1))
        .not_valid_after(now + timedelta(days=valid_days))
        .add_extension(x509.BasicConstraints(ca=True, path_length=0), critical=True)
        .sign(root_key, hashes.SHA256())
    )

    endorser_key = rsa.generate_private_key(public_exponent=65537, key_size=key_size)
    leaf_name = x509.Name(
        [
            x509.NameAttribute(NameOID.ORGANIZATION_NAME, endorser_name),
            x509.NameAttribute(NameOID.COMMON_NAME, endorser_name),
        ]
    )
    endorser_cert = (
        x509.CertificateBuilder()
        .subject_name(leaf_name)
        .issuer_name(root_name)
        .public_key(endorser_key.public_key())
        .serial_number(x509.random_serial_number())
        .not_valid_before(not_before if not_before is not None else now - timedelta(days=1))
        .not_valid_after(not_after if not_after is not None else now + timedelta(days=valid_days))
        .add_extension(x509.BasicConstraints(ca=False, path_length=None), critical=True)
        .sign(root_key, hashes.SHA256())
    )

    return DemoChain(
        root_cert=root_cert,
        root_key=root_key,
        endorser_cert=endorser_cert,
        endorser_key=endorser_key,
    )
