#!/usr/bin/env python3
"""End-to-end demo: build the site, serve it (optionally tampering one image),
crawl it, and print the verification report. Leaves the server running so a
browser or the extension can be pointed at it; Ctrl-C stops it.

Usage: python scripts/run_demo.py [OUTPUT_DIR] [--tamper]
"""

import json
import sys
from pathlib import Path

from mediacert import demo, verifier
from mediacert.core import TrustStore


def main() -> int:
    args = [a for a in sys.argv[1:] if a != "--tamper"]
    tamper = "--tamper" in sys.argv[1:]
    output = Path(args[0]) if args else Path("demo-site")

    out = demo.build_demo_site(output)
    trust = TrustStore.from_dir(out / demo.TRUST_SUBDIR)
    tamper_list = ["photo2.png"] if tamper else []

    server = demo.serve(out / demo.SITE_SUBDIR, tamper_list=tamper_list)
    url = server.url + "index.html"
    print(f"serving demo site at {url}" + ("  (photo2.png tampered in transit)" if tamper else ""))

    report = verifier.crawl_page(url, trust)
    print(json.dumps(verifier.report_to_json(report), indent=2))
    print("press Ctrl-C to stop the server")
    try:
        server.thread.join()
    except KeyboardInterrupt:
        server.shutdown()
    return 0


if __name__ == "__main__":
    sys.exit(main())
