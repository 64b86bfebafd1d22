"""Command-line interface.

Exit codes: 0 success, 1 failure or partial failure, 2 usage error.
Verification subcommands treat a missing sidecar as "nothing claimed", not
as a failure; any Failed/Untrusted/Malformed outcome exits 1.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import demo, signer, verifier
from .core import TrustPolicy, TrustStore, VerificationStatus, issue_demo_chain
from .core import FAILURE_STATUSES
from .errors import MediaCertError
from .signer import SignRequest, collect_metadata

_METADATA_FLAGS = (
    ("--date-time", "date_time"),
    ("--city", "city"),
    ("--region", "region"),
    ("--country", "country"),
    ("--creator", "creator"),
    ("--headline", "headline"),
    ("--description", "description"),
)


def _add_metadata_flags(parser: argparse.ArgumentParser) -> None:
    for flag, dest in _METADATA_FLAGS:
        parser.add_argument(flag, dest=dest, default=None, metavar="TEXT")


def _metadata_from_args(args: argparse.Namespace):
    flags = {dest: getattr(args, dest) for _, dest in _METADATA_FLAGS}
    return collect_metadata(flags)


def _trust_from_args(args: argparse.Namespace) -> TrustStore:
    policy = TrustPolicy.STRICT if getattr(args, "strict", False) else TrustPolicy.WARN_ON_EXPIRY
    return TrustStore.from_dir(args.trust, policy=policy)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mediacert",
        description="Endorse multimedia news files with detached XMP sidecar "
        "signatures, and verify such endorsements.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("keygen", help="generate a demo root CA plus endorser key/cert")
    p.add_argument("--name", required=True, help="endorser organization name")
    p.add_argument("--out-dir", type=Path, default=Path("."), metavar="DIR")

    p = sub.add_parser("sign", help="sign one asset and write its sidecar")
    p.add_argument("asset", type=Path)
    _add_metadata_flags(p)
    p.add_argument("--key", required=True, type=Path, metavar="PEM")
    p.add_argument("--cert", required=True, type=Path, metavar="PEM")
    p.add_argument("--out", type=Path, default=None, metavar="PATH")
    p.add_argument("--chunk-size", type=int, default=None, metavar="BYTES")

    p = sub.add_parser("annotate", help="add x-media-cert attributes to an HTML page")
    p.add_argument("page", type=Path)
    p.add_argument(
        "--map",
        dest="mappings",
        action="append",
        required=True,
        metavar="ASSET=SIDECAR",
        help="asset source to sidecar URL (repeatable)",
    )
    p.add_argument("--out", type=Path, default=None, metavar="PATH",
                   help="write here instead of editing the page in place")

    p = sub.add_parser("batch", help="sign every media file in a directory")
    p.add_argument("directory", type=Path)
    _add_metadata_flags(p)
    p.add_argument("--key", required=True, type=Path, metavar="PEM")
    p.add_argument("--cert", required=True, type=Path, metavar="PEM")
    p.add_argument("--force", action="store_true", help="re-sign even if a valid sidecar exists")
    p.add_argument("--jobs", type=int, default=4, metavar="N")

    p = sub.add_parser("verify", help="verify one asset against its sidecar")
    p.add_argument("asset", type=Path)
    p.add_argument("--sidecar", type=Path, default=None, metavar="PATH")
    p.add_argument("--trust", required=True, type=Path, metavar="DIR")
    p.add_argument("--strict", action="store_true",
                   help="treat certificate expiry as untrusted instead of a warning")

    p = sub.add_parser("crawl", help="verify every annotated media element on a page")
    p.add_argument("page", help="URL or local HTML file")
    p.add_argument("--trust", required=True, type=Path, metavar="DIR")
    p.add_argument("--json", action="store_true", dest="as_json")
    p.add_argument("--concurrency", type=int, default=4, metavar="N")
    p.add_argument("--strict", action="store_true")

    p = sub.add_parser("demo-server", help="serve a directory for demos and tests")
    p.add_argument("root", type=Path)
    p.add_argument("--bind", default="127.0.0.1:8080", metavar="ADDR:PORT")
    p.add_argument("--tamper", action="append", default=[], metavar="PATH",
                   help="serve this asset with its last byte flipped (repeatable)")
    p.add_argument("--tls", action="store_true", help="serve with a self-signed certificate")

    return parser


def _cmd_keygen(args: argparse.Namespace) -> int:
    chain = issue_demo_chain(args.name)
    out = args.out_dir
    out.mkdir(parents=True, exist_ok=True)
    written = {
        "root.pem": chain.root_cert_pem,
        "root.key.pem": chain.root_key_pem,
        "endorser.cert.pem": chain.endorser_cert_pem,
        "endorser.key.pem": chain.endorser_key_pem,
    }
    for name, data in written.items():
        (out / name).write_bytes(data)
        print(out / name)
    return 0


def _cmd_sign(args: argparse.Namespace) -> int:
    req = SignRequest(
        asset_path=args.asset,
        metadata=_metadata_from_args(args),
        key_path=args.key,
        cert_chain_path=args.cert,
        output_path=args.out,
        chunk_size=args.chunk_size,
    )
    print(signer.sign_asset(req))
    return 0


def _parse_mappings(raw: Sequence[str]) -> dict[str, str]:
    mapping = {}
    for item in raw:
        asset, sep, side = item.partition("=")
        if not sep or not asset:
            raise ValueError(f"bad --map value (expected ASSET=SIDECAR): {item!r}")
        mapping[asset] = side
    return mapping


def _cmd_annotate(args: argparse.Namespace) -> int:
    page_text = args.page.read_text(encoding="utf-8")
    annotated = signer.annotate_html(page_text, _parse_mappings(args.mappings))
    out = args.out if args.out is not None else args.page
    out.write_text(annotated, encoding="utf-8")
    print(out)
    return 0


def _cmd_batch(args: argparse.Namespace) -> int:
    flags = {dest: getattr(args, dest) for _, dest in _METADATA_FLAGS}
    env_present = any(os.environ.get(v) is not None for v in signer.METADATA_ENV_VARS.values())
    if any(value is not None for value in flags.values()) or env_present:
        metadata = collect_metadata(flags)
    else:
        metadata = None  # per-file .meta.json must cover every asset
    summary = signer.batch_sign(
        args.directory,
        key_path=args.key,
        cert_chain_path=args.cert,
        metadata=metadata,
        force=args.force,
        concurrency=args.jobs,
    )
    print(f"signed: {len(summary.signed)}  skipped: {len(summary.skipped)}  "
          f"failed: {len(summary.failed)}")
    for path, detail in summary.failed:
        print(f"failed: {path}: {detail}", file=sys.stderr)
    return 0 if summary.ok else 1


def _cmd_verify(args: argparse.Namespace) -> int:
    report = verifier.verify_file(args.asset, args.sidecar, _trust_from_args(args))
    line = f"{report.status.value}: {report.asset_locator}"
    if report.endorser is not None:
        line += f" (endorser: {report.endorser.display_name})"
    if report.detail:
        line += f" [{report.detail}]"
    print(line)
    return 1 if report.status in FAILURE_STATUSES else 0


def _cmd_crawl(args: argparse.Namespace) -> int:
    report = verifier.crawl_page(args.page, _trust_from_args(args), args.concurrency)
    if args.as_json:
        print(json.dumps(verifier.report_to_json(report), indent=2))
    else:
        for entry in report.entries:
            line = f"{entry.status.value}: {entry.asset_locator}"
            if entry.endorser is not None:
                line += f" (endorser: {entry.endorser.display_name})"
            if entry.detail:
                line += f" [{entry.detail}]"
            print(line)
        counts = report.counts()
        shown = ", ".join(
            f"{status.value}={count}" for status, count in counts.items() if count
        )
        print(f"summary: {shown or 'no annotated media'}")
    return 0 if report.ok else 1


def _cmd_demo_server(args: argparse.Namespace) -> int:
    host, _, port_text = args.bind.rpartition(":")
    try:
        port = int(port_text)
    except ValueError:
        raise ValueError(f"bad --bind value (expected ADDR:PORT): {args.bind!r}")
    server = demo.serve(args.root, (host or "127.0.0.1", port),
                        tamper_list=args.tamper, tls=args.tls)
    print(f"serving {args.root} at {server.url}", flush=True)
    try:
        server.thread.join()
    except KeyboardInterrupt:
        server.shutdown()
    return 0


_COMMANDS = {
    "keygen": _cmd_keygen,
    "sign": _cmd_sign,
    "annotate": _cmd_annotate,
    "batch": _cmd_batch,
    "verify": _cmd_verify,
    "crawl": _cmd_crawl,
    "demo-server": _cmd_demo_server,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (MediaCertError, FileNotFoundError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
