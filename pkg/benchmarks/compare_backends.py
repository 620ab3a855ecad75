"""Time the compiled and numpy kernels side by side and check they agree.

    python benchmarks/compare_backends.py --sizes 640x480,1920x1080 --iters 20
"""

import argparse
import json
import sys

from mugiqa import available_backends
from mugiqa.bench import run_bench


def _size(text):
    w, h = text.lower().split("x")
    return int(w), int(h)


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", default="640x480,1920x1080")
    p.add_argument("--iters", type=int, default=20)
    p.add_argument("--metric", default="mug_plus")
    p.add_argument("--json", action="store_true", help="one JSON object per run instead of a table")
    args = p.parse_args(argv)

    backends = available_backends()
    if "compiled" not in backends:
        print("compiled backend not built; timing python only", file=sys.stderr)
    mismatch = False
    if not args.json:
        print(f"{'size':>10} {'backend':>9} {'mean ms':>9} {'p95 ms':>9} {'MP/s':>7}  speedup")
    for size in args.sizes.split(","):
        w, h = _size(size)
        reports = {b: run_bench(w, h, iters=args.iters, metric=args.metric, backend=b) for b in backends}
        if len({r.score for r in reports.values()}) != 1:
            mismatch = True
        slowest = max(r.mean_ms for r in reports.values())
        for b, r in reports.items():
            if args.json:
                print(json.dumps(r.as_dict()))
            else:
                print(f"{r.image_size:>10} {b:>9} {r.mean_ms:9.1f} {r.p95_ms:9.1f} "
                      f"{r.megapixels_per_second:7.1f}  {slowest / r.mean_ms:.2f}x")
    if mismatch:
        print("backends disagree on the score", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
