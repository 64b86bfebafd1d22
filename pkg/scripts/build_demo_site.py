#!/usr/bin/env python3
"""Build the annotated demo site (images, sidecars, trust root) into a directory.

Usage: python scripts/build_demo_site.py [OUTPUT_DIR]
"""

import sys
from pathlib import Path

from mediacert import demo


def main() -> int:
    output = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("demo-site")
    out = demo.build_demo_site(output)
    print(f"demo site built under {out}")
    print(f"  serve with:  mediacert demo-server {out / demo.SITE_SUBDIR} --bind 127.0.0.1:8080")
    print(f"  trust dir:   {out / demo.TRUST_SUBDIR}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
