"""Fixture HTTP server and demo-site builder for end-to-end runs.

The server is read-only: it never touches files under its root. Tamper mode
serves listed media assets with their last byte XOR 0xFF so verification of
exactly those assets must fail; sidecars are never tampered.
"""

from __future__ import annotations

import http.server
import mimetypes
import random
import ssl
import tempfile
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Union
from urllib.parse import unquote, urlsplit

from cryptography.hazmat.primitives import serialization

from . import signer
from .core import EndorsementMetadata, issue_demo_chain
from .errors import BindFailureError
from .signer import SignRequest, annotate_html

SITE_SUBDIR = "site"
TRUST_SUBDIR = "trust"
KEYS_SUBDIR = "keys"

DEMO_ENDORSER = "Example News"

VIDEO_CHUNK_SIZE = signer.MIN_CHUNK_SIZE
VIDEO_CHUNK_COUNT = 3
_VIDEO_SEED = 0x5EED

DEMO_METADATA = EndorsementMetadata(
    date_time="2020-01-01T12:00:00Z",
    city="Orlando",
    region="FL",
    country="US",
    creator="A. Photographer",
    headline="Demo headline",
    description="Procedurally generated demo image.",
)

_PAGE_TEMPLATE = """<!DOCTYPE html>
<html>
<head><meta charset="utf-8"><title>mediacert demo</title></head>
<body>
<h1>mediacert demo site</h1>
<p>Two of these images are endorsed; one is not.</p>
<img src="photo1.png" alt="endorsed">
<img src="photo2.png" alt="endorsed (tamper me)">
<img src="photo3.png" alt="plain">
</body>
</html>
"""


def _demo_png(width: int, height: int, rgb: tuple[int, int, int]) -> bytes:
    """Render a small flat-color PNG with a diagonal stripe."""
    from PIL import Image

    image = Image.new("RGB", (width, height), rgb)
    stripe = tuple(255 - c for c in rgb)
    for x in range(min(width, height)):
        image.putpixel((x, x), stripe)
    import io

    buf = io.BytesIO()
    image.save(buf, format="PNG")
    return buf.getvalue()


def synthetic_video_bytes(
    size: int = VIDEO_CHUNK_SIZE * VIDEO_CHUNK_COUNT, seed: int = _VIDEO_SEED
) -> bytes:
    """Deterministic pseudo-random bytes standing in for a video file."""
    return random.Random(seed).randbytes(size)


def build_demo_site(output: Union[str, Path]) -> Path:
    """Generate a self-contained annotated demo site.

    Layout under ``output``: site/ (index.html, three images, a chunked
    video, sidecars), trust/ (root certificate PEM), keys/ (demo private
    material; never served). Rerunning regenerates keys and signatures but
    produces the same assets and structure.
    """
    output = Path(output)
    site = output / SITE_SUBDIR
    trust = output / TRUST_SUBDIR
    keys = output / KEYS_SUBDIR
    for directory in (site, trust, keys):
        directory.mkdir(parents=True, exist_ok=True)

    chain = issue_demo_chain(DEMO_ENDORSER)
    (trust / "root.pem").write_bytes(chain.root_cert_pem)
    (keys / "root.key.pem").write_bytes(chain.root_key_pem)
    key_path = keys / "endorser.key.pem"
    cert_path = keys / "endorser.cert.pem"
    key_path.write_bytes(chain.endorser_key_pem)
    cert_path.write_bytes(chain.endorser_cert_pem)

    images = {
        "photo1.png": _demo_png(64, 64, (40, 120, 200)),
        "photo2.png": _demo_png(64, 64, (200, 80, 40)),
        "photo3.png": _demo_png(64, 64, (60, 160, 60)),
    }
    for name, data in images.items():
        (site / name).write_bytes(data)

    for name in ("photo1.png", "photo2.png"):
        signer.sign_asset(
            SignRequest(
                asset_path=site / name,
                metadata=DEMO_METADATA,
                key_path=key_path,
                cert_chain_path=cert_path,
            )
        )

    video_path = site / "video.bin"
    video_path.write_bytes(synthetic_video_bytes())
    signer.sign_chunked(
        SignRequest(
            asset_path=video_path,
            metadata=DEMO_METADATA,
            key_path=key_path,
            cert_chain_path=cert_path,
            chunk_size=VIDEO_CHUNK_SIZE,
        )
    )

    page = annotate_html(
        _PAGE_TEMPLATE,
        {
            "photo1.png": "photo1.png.xmp",
            "photo2.png": "photo2.png.xmp",
        },
    )
    (site / "index.html").write_text(page, encoding="utf-8")
    return output


def _normalize_tamper(paths: Optional[Iterable[Union[str, Path]]]) -> frozenset[str]:
    normalized = set()
    for raw in paths or ():
        text = str(raw).replace("\\", "/")
        if not text.startswith("/"):
            text = "/" + text
        normalized.add(text)
    return frozenset(normalized)


class _DemoHandler(http.server.BaseHTTPRequestHandler):
    server_version = "mediacert-demo"
    root: Path
    tamper: frozenset[str]

    def log_message(self, format, *args):  # silence per-request noise
        pass

    def do_GET(self):
        url_path = unquote(urlsplit(self.path).path)
        if url_path.endswith("/"):
            url_path += "index.html"
        relative = url_path.lstrip("/")
        target = (self.root / relative).resolve()
        try:
            target.relative_to(self.root.resolve())
        except ValueError:
            self.send_error(403)
            return
        if target.is_dir():
            target = target / "index.html"
            url_path = url_path.rstrip("/") + "/index.html"
        if not target.is_file():
            self.send_error(404)
            return
        body = target.read_bytes()
        if url_path in self.tamper and not url_path.endswith(".xmp") and body:
            body = body[:-1] + bytes([body[-1] ^ 0xFF])
        if target.suffix.lower() == ".xmp":
            content_type = "application/xml"
        else:
            content_type = mimetypes.guess_type(str(target))[0] or "application/octet-stream"
        self.send_response(200)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)


@dataclass
class DemoServer:
    """Handle for a running fixture server."""

    httpd: http.server.ThreadingHTTPServer
    thread: threading.Thread
    tls: bool = False

    @property
    def address(self) -> tuple[str, int]:
        host, port = self.httpd.server_address[:2]
        return str(host), int(port)

    @property
    def url(self) -> str:
        host, port = self.address
        scheme = "https" if self.tls else "http"
        return f"{scheme}://{host}:{port}/"

    def shutdown(self) -> None:
        self.httpd.shutdown()
        self.httpd.server_close()
        self.thread.join(timeout=5)

    def __enter__(self) -> "DemoServer":
        return self

    def __exit__(self, *exc_info) -> None:
        self.shutdown()


def _self_signed_tls_context() -> ssl.SSLContext:
    chain = issue_demo_chain("mediacert demo TLS")
    context = ssl.SSLContext(ssl.PROTOCOL_TLS_SERVER)
    with tempfile.NamedTemporaryFile(suffix=".pem") as certfile, tempfile.NamedTemporaryFile(
        suffix=".pem"
    ) as keyfile:
        certfile.write(chain.endorser_cert.public_bytes(serialization.Encoding.PEM))
        certfile.flush()
        keyfile.write(chain.endorser_key_pem)
        keyfile.flush()
        context.load_cert_chain(certfile.name, keyfile.name)
    return context


def serve(
    root: Union[str, Path],
    bind: tuple[str, int] = ("127.0.0.1", 0),
    tamper_list: Optional[Iterable[Union[str, Path]]] = None,
    tls: bool = False,
) -> DemoServer:
    """Serve ``root`` on ``bind`` in a background thread.

    Port 0 picks a free port; read it back from the returned handle. Raises
    BindFailureError when the address cannot be bound.
    """
    root = Path(root)
    if not root.is_dir():
        raise FileNotFoundError(f"server root not found: {root}")

    handler = type(
        "_BoundDemoHandler",
        (_DemoHandler,),
        {"root": root, "tamper": _normalize_tamper(tamper_list)},
    )
    try:
        httpd = http.server.ThreadingHTTPServer(bind, handler)
    except OSError as exc:
        raise BindFailureError(f"could not bind {bind[0]}:{bind[1]}: {exc}") from exc
    if tls:
        httpd.socket = _self_signed_tls_context().wrap_socket(httpd.socket, server_side=True)
    thread = threading.Thread(target=httpd.serve_forever, daemon=True)
    thread.start()
    return DemoServer(httpd=httpd, thread=thread, tls=tls)
