"""Regenerate the generating-polynomial files shipped in ``src/tropinv/data``.

Usage: python tools/regenerate_data.py [--check]

With ``--check`` nothing is written; the script exits nonzero when a
shipped file differs from a fresh computation.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from tropinv import cache
from tropinv.sympoly import EdgeWeightedGraph, generating_polynomial

SHIPPED = [(3, 2), (4, 2), (4, 3), (5, 2), (5, 3), (6, 2)]
DATA = Path(__file__).resolve().parents[1] / "src" / "tropinv" / "data"


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--check", action="store_true")
    args = ap.parse_args()
    status = 0
    for d, s in SHIPPED:
        g = EdgeWeightedGraph.complete(d, s)
        t0 = time.perf_counter()
        text = cache.dumps(generating_polynomial(g))
        path = DATA / cache.file_name(g)
        if args.check:
            same = path.is_file() and path.read_text() == text
            status |= not same
            print(f"{path.name}: {'ok' if same else 'DIFFERS'}")
        else:
            path.write_text(text)
            print(f"{path.name}: written in {time.perf_counter() - t0:.1f}s")
    return status


if __name__ == "__main__":
    sys.exit(main())
