"""Certify and re-check a batch of CM type configurations.

    python scripts/certify_all.py [--out DIR] [FACTORS ...]

FACTORS are comma-separated genera, e.g. ``1,2``. Prints one line per
configuration with record count, verdict, checker result and timing.
"""
import argparse
import sys
import time
from pathlib import Path

from cmcycles.checker import check_certificate
from cmcycles.cm import CMConfig
from cmcycles.descent import certify_theorem

DEFAULT = ["1", "2", "3", "4", "1,1", "1,2", "1,1,1", "2,2"]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("factors", nargs="*", default=DEFAULT)
    ap.add_argument("--out", type=Path, help="directory for certificate files")
    args = ap.parse_args(argv)
    if args.out:
        args.out.mkdir(parents=True, exist_ok=True)
    ok = True
    for spec in args.factors:
        cfg = CMConfig(tuple(int(x) for x in spec.split(",")))
        t0 = time.perf_counter()
        text = certify_theorem(cfg).dumps()
        t1 = time.perf_counter()
        rep = check_certificate(text)
        t2 = time.perf_counter()
        if args.out:
            (args.out / f"cert_{spec.replace(',', '_')}.json").write_text(text)
        ok &= rep.confirmed
        print(f"{spec:>8}  records={rep.n_records:<5} verdict={rep.verdict!s:<5} "
              f"checked={rep.confirmed!s:<5} certify={t1 - t0:.2f}s check={t2 - t1:.2f}s")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
