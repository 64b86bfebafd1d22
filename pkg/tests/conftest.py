"""Shared fixtures: one demo chain per session (RSA keygen is the slow part)."""

from __future__ import annotations

import base64

import pytest
from cryptography.hazmat.primitives import serialization
from hypothesis import settings

from mediacert import core, sidecar

settings.register_profile("ci", deadline=None)
settings.load_profile("ci")


SAMPLE_METADATA = core.EndorsementMetadata(
    date_time="2020-01-01T00:00:00Z",
    city="Orlando",
    region="FL",
    country="US",
    creator="A. Photographer",
    headline="Headline",
    description="Desc.",
)


@pytest.fixture(scope="session")
def chain() -> core.DemoChain:
    return core.issue_demo_chain("Example News")


@pytest.fixture(scope="session")
def trust(chain) -> core.TrustStore:
    return chain.trust_store()


@pytest.fixture
def sample_metadata() -> core.EndorsementMetadata:
    return SAMPLE_METADATA


def cert_b64_of(chain: core.DemoChain) -> str:
    der = chain.endorser_cert.public_bytes(serialization.Encoding.DER)
    return base64.b64encode(der).decode("ascii")


def make_signed_doc(
    chain: core.DemoChain, meta: core.EndorsementMetadata, media: core.MediaAsset
) -> sidecar.SidecarDocument:
    """Build an in-memory signed sidecar document for (meta, media)."""
    message = core.canonical_message(meta, media)
    return sidecar.SidecarDocument(
        metadata=meta,
        digest_hex=core.digest_of(message).hex,
        signature_b64=core.sign_message(message, chain.endorser_key).b64,
        certificate_b64=cert_b64_of(chain),
    )


@pytest.fixture
def make_doc(chain):
    def _make(meta: core.EndorsementMetadata, media: core.MediaAsset):
        return make_signed_doc(chain, meta, media)

    return _make


@pytest.fixture(scope="session")
def sign_material(chain, tmp_path_factory):
    """Endorser key and certificate written out as PEM files."""
    directory = tmp_path_factory.mktemp("material")
    key_path = directory / "endorser.key.pem"
    cert_path = directory / "endorser.cert.pem"
    key_path.write_bytes(chain.endorser_key_pem)
    cert_path.write_bytes(chain.endorser_cert_pem)
    return key_path, cert_path
