#!/usr/bin/env python3
"""Regenerate the extension test fixtures from the Python toolkit.

Produces signed sidecars plus expected.json, which records the verdict the
Python verifier gives for every case; the TypeScript tests must reproduce
those verdicts exactly (oracle equivalence across components).

Run from this directory: python generate_fixtures.py
"""

from __future__ import annotations

import base64
import json
from datetime import datetime, timedelta, timezone
from pathlib import Path

from cryptography.hazmat.primitives import serialization

from mediacert import core, sidecar
from mediacert.core import EndorsementMetadata, MediaAsset, TrustPolicy, TrustStore

HERE = Path(__file__).parent

METADATA = EndorsementMetadata(
    date_time="2021-03-14T15:09:26Z",
    city="Montréal",
    region="QC",
    country="CA",
    creator="Anaïs Photographe",
    headline="Fixture headline <&> ok",
    description="Extension fixture, multi-byte 日本語.",
)


def cert_b64(chain: core.DemoChain) -> str:
    return base64.b64encode(
        chain.endorser_cert.public_bytes(serialization.Encoding.DER)
    ).decode()


def signed_doc(chain: core.DemoChain, media: MediaAsset) -> sidecar.SidecarDocument:
    message = core.canonical_message(METADATA, media)
    return sidecar.SidecarDocument(
        metadata=METADATA,
        digest_hex=core.digest_of(message).hex,
        signature_b64=core.sign_message(message, chain.endorser_key).b64,
        certificate_b64=cert_b64(chain),
    )


def main() -> None:
    asset = MediaAsset(bytes(range(256)) * 5)
    (HERE / "asset.bin").write_bytes(asset.bytes)
    tampered = bytearray(asset.bytes)
    tampered[100] ^= 0x01
    (HERE / "asset_tampered.bin").write_bytes(bytes(tampered))

    chain = core.issue_demo_chain("Example News")
    other = core.issue_demo_chain("Other Org")
    past = datetime.now(timezone.utc) - timedelta(days=365)
    expired = core.issue_demo_chain(
        "Expired News", not_before=past - timedelta(days=365), not_after=past
    )

    (HERE / "root.pem").write_bytes(chain.root_cert_pem)
    (HERE / "other_root.pem").write_bytes(other.root_cert_pem)
    (HERE / "expired_root.pem").write_bytes(expired.root_cert_pem)

    doc = signed_doc(chain, asset)
    (HERE / "sidecar.xmp").write_text(sidecar.serialize_sidecar(doc), encoding="utf-8")

    bad_digest = sidecar.SidecarDocument(
        metadata=doc.metadata,
        digest_hex="0" * 64,
        signature_b64=doc.signature_b64,
        certificate_b64=doc.certificate_b64,
    )
    (HERE / "sidecar_baddigest.xmp").write_text(
        sidecar.serialize_sidecar(bad_digest), encoding="utf-8"
    )

    bad_cert = sidecar.SidecarDocument(
        metadata=doc.metadata,
        digest_hex=doc.digest_hex,
        signature_b64=doc.signature_b64,
        certificate_b64=base64.b64encode(b"\x00" * 48).decode(),
    )
    (HERE / "sidecar_badcert.xmp").write_text(
        sidecar.serialize_sidecar(bad_cert), encoding="utf-8"
    )

    expired_doc = signed_doc(expired, asset)
    (HERE / "sidecar_expired.xmp").write_text(
        sidecar.serialize_sidecar(expired_doc), encoding="utf-8"
    )

    cases = [
        ("valid", "sidecar.xmp", "asset.bin", ["root.pem"]),
        ("tampered_media", "sidecar.xmp", "asset_tampered.bin", ["root.pem"]),
        ("digest_field_tampered", "sidecar_baddigest.xmp", "asset.bin", ["root.pem"]),
        ("untrusted", "sidecar.xmp", "asset.bin", ["other_root.pem"]),
        ("empty_trust", "sidecar.xmp", "asset.bin", []),
        ("expired_warns", "sidecar_expired.xmp", "asset.bin", ["expired_root.pem"]),
        ("malformed_cert", "sidecar_badcert.xmp", "asset.bin", ["root.pem"]),
    ]
    expected = []
    for name, side_name, asset_name, roots in cases:
        doc_parsed = sidecar.parse_sidecar((HERE / side_name).read_text(encoding="utf-8"))
        media = MediaAsset((HERE / asset_name).read_bytes())
        trust = TrustStore.from_pem_data(
            *[(HERE / r).read_bytes() for r in roots], policy=TrustPolicy.WARN_ON_EXPIRY
        )
        report = core.verify_endorsement(doc_parsed, media, trust)
        expected.append(
            {
                "name": name,
                "sidecar": side_name,
                "asset": asset_name,
                "trustRoots": roots,
                "status": report.status.value,
                "endorser": report.endorser.display_name if report.endorser else None,
                "detail": report.detail,
            }
        )
    (HERE / "expected.json").write_text(json.dumps(expected, indent=2, ensure_ascii=False))
    print(f"wrote {len(expected)} fixture cases to {HERE}")
    for case in expected:
        print(f"  {case['name']}: {case['status']}")


if __name__ == "__main__":
    main()
