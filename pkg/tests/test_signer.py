"""Signer tests: sidecar writing, chunked signing, annotation, batch runs."""

from __future__ import annotations

import json
import math
import os
from pathlib import Path

import pytest

from mediacert import sidecar, signer, verifier
from mediacert.core import EndorsementMetadata, VerificationStatus
from mediacert.errors import EmptyMediaError
from mediacert.signer import SignRequest, annotate_html, batch_sign, collect_metadata

from conftest import SAMPLE_METADATA


@pytest.fixture
def asset(tmp_path) -> Path:
    path = tmp_path / "photo.png"
    path.write_bytes(b"\x89PNG fake image payload " * 20)
    return path


def make_request(asset: Path, material, **kwargs) -> SignRequest:
    key_path, cert_path = material
    return SignRequest(
        asset_path=asset,
        metadata=SAMPLE_METADATA,
        key_path=key_path,
        cert_chain_path=cert_path,
        **kwargs,
    )


class TestSignAsset:
    def test_sidecar_verifies(self, asset, sign_material, trust):
        out = signer.sign_asset(make_request(asset, sign_material))
        assert out == asset.with_name("photo.png.xmp")
        report = verifier.verify_file(asset, trust=trust)
        assert report.status is VerificationStatus.VERIFIED
        assert report.endorser.display_name == "Example News"

    def test_missing_asset(self, tmp_path, sign_material):
        missing = tmp_path / "nope.png"
        with pytest.raises(FileNotFoundError):
            signer.sign_asset(make_request(missing, sign_material))
        assert not missing.with_name("nope.png.xmp").exists()

    def test_deterministic_rerun(self, asset, sign_material):
        out = signer.sign_asset(make_request(asset, sign_material))
        first = out.read_bytes()
        signer.sign_asset(make_request(asset, sign_material))
        assert out.read_bytes() == first

    def test_asset_untouched(self, asset, sign_material):
        before = asset.read_bytes()
        signer.sign_asset(make_request(asset, sign_material))
        assert asset.read_bytes() == before

    def test_custom_output_path(self, asset, sign_material, tmp_path):
        target = tmp_path / "elsewhere.xmp"
        out = signer.sign_asset(make_request(asset, sign_material, output_path=target))
        assert out == target and target.is_file()

    def test_missing_key_file(self, asset, sign_material, tmp_path):
        _, cert_path = sign_material
        req = SignRequest(
            asset_path=asset,
            metadata=SAMPLE_METADATA,
            key_path=tmp_path / "missing.pem",
            cert_chain_path=cert_path,
        )
        with pytest.raises(FileNotFoundError):
            signer.sign_asset(req)


class TestSignChunked:
    def test_chunk_arithmetic(self, tmp_path, sign_material):
        size = signer.MIN_CHUNK_SIZE
        asset = tmp_path / "clip.mp4"
        asset.write_bytes(os.urandom(size * 10))
        out = signer.sign_chunked(make_request(asset, sign_material, chunk_size=size))
        doc = sidecar.parse_sidecar(out.read_text())
        assert len(doc.chunks) == 10
        assert [c.byte_offset for c in doc.chunks] == [i * size for i in range(10)]
        assert all(c.byte_length == size for c in doc.chunks)

    def test_trailing_partial_chunk(self, tmp_path, sign_material):
        size = signer.MIN_CHUNK_SIZE
        asset = tmp_path / "clip.mp4"
        asset.write_bytes(os.urandom(size * 10 + 1))
        out = signer.sign_chunked(make_request(asset, sign_material, chunk_size=size))
        doc = sidecar.parse_sidecar(out.read_text())
        assert len(doc.chunks) == math.ceil((size * 10 + 1) / size) == 11
        assert doc.chunks[-1].byte_length == 1

    def test_empty_asset_rejected(self, tmp_path, sign_material):
        asset = tmp_path / "empty.mp4"
        asset.write_bytes(b"")
        with pytest.raises(EmptyMediaError):
            signer.sign_chunked(make_request(asset, sign_material, chunk_size=signer.MIN_CHUNK_SIZE))

    def test_chunk_size_floor(self, asset, sign_material):
        with pytest.raises(ValueError):
            make_request(asset, sign_material, chunk_size=signer.MIN_CHUNK_SIZE - 1)

    def test_whole_file_signature_also_valid(self, tmp_path, sign_material, trust):
        asset = tmp_path / "clip.mp4"
        asset.write_bytes(os.urandom(signer.MIN_CHUNK_SIZE + 10))
        signer.sign_chunked(make_request(asset, sign_material, chunk_size=signer.MIN_CHUNK_SIZE))
        report = verifier.verify_file(asset, trust=trust)
        assert report.status is VerificationStatus.VERIFIED


class TestAnnotateHtml:
    def test_basic_annotation(self):
        out = annotate_html('<img src="a.jpg">', {"a.jpg": "a.jpg.xmp"})
        assert out == '<img src="a.jpg" x-media-cert="a.jpg.xmp">'

    def test_unmapped_page_unchanged(self):
        page = '<html><body><img src="b.jpg"><p>hi</p></body></html>'
        assert annotate_html(page, {"a.jpg": "a.jpg.xmp"}) == page

    def test_idempotent(self):
        page = '<img src="a.jpg">'
        mapping = {"a.jpg": "a.jpg.xmp"}
        once = annotate_html(page, mapping)
        assert annotate_html(once, mapping) == once

    def test_surrounding_markup_preserved(self):
        page = '<!-- keep -->\n<div  class="x">\n<img src="a.jpg">\n</div>\n<!-- me -->'
        out = annotate_html(page, {"a.jpg": "a.jpg.xmp"})
        assert out == (
            '<!-- keep -->\n<div  class="x">\n'
            '<img src="a.jpg" x-media-cert="a.jpg.xmp">\n</div>\n<!-- me -->'
        )

    def test_video_elements_annotated(self):
        out = annotate_html('<video src="v.mp4" controls></video>', {"v.mp4": "v.mp4.xmp"})
        assert 'x-media-cert="v.mp4.xmp"' in out

    def test_self_closing_tag(self):
        out = annotate_html('<img src="a.jpg"/>', {"a.jpg": "a.jpg.xmp"})
        assert out == '<img src="a.jpg" x-media-cert="a.jpg.xmp"/>'

    def test_stale_attribute_replaced(self):
        page = '<img src="a.jpg" x-media-cert="old.xmp">'
        out = annotate_html(page, {"a.jpg": "new.xmp"})
        assert out == '<img src="a.jpg" x-media-cert="new.xmp">'

    def test_sidecar_url_quoted(self):
        out = annotate_html('<img src="a.jpg">', {"a.jpg": 'x"y.xmp'})
        assert 'x-media-cert=\'x"y.xmp\'' in out

    def test_multiple_images(self):
        page = '<img src="a.jpg"><img src="b.jpg"><img src="c.jpg">'
        out = annotate_html(page, {"a.jpg": "a.xmp", "c.jpg": "c.xmp"})
        assert out == (
            '<img src="a.jpg" x-media-cert="a.xmp">'
            '<img src="b.jpg">'
            '<img src="c.jpg" x-media-cert="c.xmp">'
        )


class TestBatchSign:
    @pytest.fixture
    def media_dir(self, tmp_path) -> Path:
        for name in ("one.png", "two.jpg", "three.gif"):
            (tmp_path / name).write_bytes(b"media " + name.encode())
        (tmp_path / "notes.txt").write_text("not media")
        return tmp_path

    def test_fresh_directory_all_signed(self, media_dir, sign_material):
        key_path, cert_path = sign_material
        summary = batch_sign(media_dir, key_path, cert_path, SAMPLE_METADATA)
        assert len(summary.signed) == 3
        assert not summary.skipped and not summary.failed

    def test_rerun_skips(self, media_dir, sign_material):
        key_path, cert_path = sign_material
        batch_sign(media_dir, key_path, cert_path, SAMPLE_METADATA)
        summary = batch_sign(media_dir, key_path, cert_path, SAMPLE_METADATA)
        assert len(summary.skipped) == 3
        assert not summary.signed and not summary.failed

    def test_force_resigns(self, media_dir, sign_material):
        key_path, cert_path = sign_material
        batch_sign(media_dir, key_path, cert_path, SAMPLE_METADATA)
        summary = batch_sign(media_dir, key_path, cert_path, SAMPLE_METADATA, force=True)
        assert len(summary.signed) == 3

    def test_stale_sidecar_resigned(self, media_dir, sign_material):
        key_path, cert_path = sign_material
        batch_sign(media_dir, key_path, cert_path, SAMPLE_METADATA)
        (media_dir / "one.png").write_bytes(b"changed bytes")  # sidecar now stale
        summary = batch_sign(media_dir, key_path, cert_path, SAMPLE_METADATA)
        assert [p.name for p in summary.signed] == ["one.png"]
        assert len(summary.skipped) == 2

    def test_unreadable_file_counted_failed(self, media_dir, sign_material):
        key_path, cert_path = sign_material
        (media_dir / "broken.png").mkdir()  # a directory: read_bytes() fails
        summary = batch_sign(media_dir, key_path, cert_path, SAMPLE_METADATA)
        assert len(summary.signed) == 3
        assert len(summary.failed) == 1
        assert summary.failed[0][0].name == "broken.png"
        assert not summary.ok

    def test_per_file_metadata_wins(self, media_dir, sign_material, trust):
        key_path, cert_path = sign_material
        override = {"date_time": "1999-12-31T23:59:59Z", "city": "Tampa", "region": "FL",
                    "country": "US", "creator": "Someone Else", "headline": "Override",
                    "description": "per-file"}
        (media_dir / "one.png.meta.json").write_text(json.dumps(override))
        batch_sign(media_dir, key_path, cert_path, SAMPLE_METADATA)
        report = verifier.verify_file(media_dir / "one.png", trust=trust)
        assert report.metadata.city == "Tampa"
        report2 = verifier.verify_file(media_dir / "two.jpg", trust=trust)
        assert report2.metadata.city == "Orlando"

    def test_results_sorted_by_path(self, media_dir, sign_material):
        key_path, cert_path = sign_material
        summary = batch_sign(media_dir, key_path, cert_path, SAMPLE_METADATA, concurrency=8)
        assert summary.signed == sorted(summary.signed)


class TestCollectMetadata:
    FULL_FLAGS = {
        "date_time": "d", "city": "c", "region": "r", "country": "co",
        "creator": "cr", "headline": "h", "description": "de",
    }

    def test_flags_only(self):
        meta = collect_metadata(self.FULL_FLAGS, env={}, stdin_is_tty=False)
        assert meta.city == "c"

    def test_env_fills_missing_flags(self):
        flags = dict(self.FULL_FLAGS, city=None)
        env = {"MEDIACERT_CITY": "from-env"}
        meta = collect_metadata(flags, env=env, stdin_is_tty=False)
        assert meta.city == "from-env"

    def test_flag_beats_env(self):
        env = {"MEDIACERT_CITY": "from-env"}
        meta = collect_metadata(self.FULL_FLAGS, env=env, stdin_is_tty=False)
        assert meta.city == "c"

    def test_prompts_in_field_order(self):
        asked = []

        def fake_prompt(text: str) -> str:
            asked.append(text)
            return f"answer{len(asked)}"

        meta = collect_metadata({}, env={}, prompt=fake_prompt, stdin_is_tty=True)
        assert [a.split(":")[0] for a in asked] == [
            "Date and time", "City", "Region", "Country", "Creator", "Headline", "Description",
        ]
        assert meta.date_time == "answer1" and meta.description == "answer7"

    def test_prompt_output_equals_flag_output(self):
        answers = iter(self.FULL_FLAGS[name] for name in
                       ("date_time", "city", "region", "country", "creator", "headline", "description"))
        via_prompt = collect_metadata({}, env={}, prompt=lambda _: next(answers), stdin_is_tty=True)
        via_flags = collect_metadata(self.FULL_FLAGS, env={}, stdin_is_tty=False)
        assert via_prompt == via_flags

    def test_missing_without_terminal_is_error(self):
        with pytest.raises(ValueError, match="city"):
            collect_metadata(dict(self.FULL_FLAGS, city=None), env={}, stdin_is_tty=False)

    def test_empty_string_flag_is_present(self):
        flags = dict(self.FULL_FLAGS, headline="")
        meta = collect_metadata(flags, env={}, stdin_is_tty=False)
        assert meta.headline == ""
