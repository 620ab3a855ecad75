"""``mugiqa`` command line.

Exit codes: 0 success, 2 I/O failure, 3 invalid input (bad arguments
included), 4 numeric failure (degenerate data, logistic fit divergence).
"""

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

from . import _backend
from .bench import run_bench
from .errors import (BatchScoringError, CorruptStream, CropTooLarge, DegenerateInput, FitDivergence,
                     GroupTooSmall, InvalidGeometry, InvalidImage, ParseError, QualityOutOfRange,
                     UnsupportedFormat)
from .harness import (ScoreTable, evaluate, jpeg_ladder, load_manifest, metric_name, misalignment_experiment,
                      resolve_jobs, score_dataset)
from .images import read_image
from .metric import score_image

EXIT_OK = 0
EXIT_IO = 2
EXIT_INVALID = 3
EXIT_NUMERIC = 4

log = logging.getLogger("mugiqa")


def _dump(obj):
    return json.dumps(obj, separators=(",", ":"))


def _write(path, text):
    path = Path(path)
    if path.parent != Path():
        path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def cmd_score(args):
    img = read_image(args.image)
    result = score_image(img)
    if args.metric == "all":
        fields = result.as_dict()
    else:
        key = metric_name(args.metric)
        fields = {key: getattr(result, key)}
        if key == "mug_plus":
            fields["n_available"] = result.n_available
    if args.json:
        print(_dump(fields))
    else:
        for key, value in fields.items():
            print(f"{key}\t{value!r}")
    return EXIT_OK


def cmd_batch(args):
    manifest = load_manifest(args.manifest)
    try:
        table = score_dataset(manifest, resolve_jobs(args.jobs), skip_errors=args.skip_errors)
    except BatchScoringError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    _write(args.out, table.to_csv())
    if table.failures:
        print(f"warning: skipped {len(table.failures)} image(s):", file=sys.stderr)
        for path, reason in table.failures:
            print(f"  {path}: {reason}", file=sys.stderr)
    return EXIT_OK


def cmd_eval(args):
    table = ScoreTable.read_csv(args.scores)
    report = evaluate(table, args.metric)
    _write(args.out, report.to_json() + "\n")
    if args.scatter:
        scores = table.column(report.metric_name)
        fitted = report.params(scores)
        rows = [["score", "mos", "fitted"]]
        rows += [[repr(float(s)), repr(r.mos), repr(float(f))] for s, r, f in zip(scores, table.rows, fitted)]
        Path(args.scatter).parent.mkdir(parents=True, exist_ok=True)
        with open(args.scatter, "w", newline="", encoding="utf-8") as fh:
            csv.writer(fh, lineterminator="\n").writerows(rows)
    print(_dump(report.as_dict()))
    return EXIT_OK


def cmd_misalign(args):
    manifest = load_manifest(args.manifest)
    try:
        report = misalignment_experiment(manifest, args.k, args.metric, resolve_jobs(args.jobs))
    except BatchScoringError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    text = json.dumps(report.as_dict(), indent=2)
    if args.out:
        _write(args.out, text + "\n")
    print(text)
    return EXIT_OK


def _qualities(text):
    try:
        return [int(q) for q in text.split(",") if q.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def cmd_ladder(args):
    src = read_image(args.input)
    ladder = jpeg_ladder(src, args.qualities)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for q, enc in zip(ladder.qualities, ladder.encoded):
        enc.save(out / f"q{q:03d}.jpg")
    summary = ladder.as_dict()
    _write(out / "ladder.json", json.dumps(summary, indent=2) + "\n")
    print(_dump(summary["monotonicity"] | {"degenerate": summary["degenerate"]}))
    return EXIT_OK


def cmd_bench(args):
    if args.backend == "both":
        backends = _backend.available_backends()
    elif args.backend == "auto":
        backends = (_backend.BACKEND,)
    else:
        backends = (args.backend,)
    for name in backends:
        report = run_bench(args.width, args.height, args.iters, args.metric, backend=name, seed=args.seed)
        print(_dump(report.as_dict()))
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def build_parser():
    parser = _Parser(prog="mugiqa", description="MUG / MUG+ no-reference JPEG quality metrics")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("score", help="score one image")
    p.add_argument("image")
    p.add_argument("--metric", default="all", choices=["nug", "mug", "mug+", "mug_plus", "all"])
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("batch", help="score every image of a manifest into a CSV")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=1, help="worker threads (env MUGIQA_JOBS overrides)")
    p.add_argument("--skip-errors", action="store_true", help="drop unreadable images instead of failing")
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("eval", help="SRCC / PLCC report for a score CSV")
    p.add_argument("--scores", required=True)
    p.add_argument("--metric", default="mug", choices=["nug", "mug", "mug+", "mug_plus"])
    p.add_argument("--out", required=True, help="CorrelationReport JSON")
    p.add_argument("--scatter", help="optional score,mos,fitted CSV")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("misalign", help="compare correlations before and after border cropping")
    p.add_argument("--manifest", required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--metric", default="mug", choices=["nug", "mug", "mug+", "mug_plus"])
    p.add_argument("--out")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_misalign)

    p = sub.add_parser("ladder", help="re-encode one image at falling JPEG qualities and score it")
    p.add_argument("--input", required=True)
    p.add_argument("--qualities", type=_qualities, default=[90, 70, 50, 30, 10])
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_ladder)

    p = sub.add_parser("bench", help="time the metric on seeded noise")
    p.add_argument("--width", type=int, default=1920)
    p.add_argument("--height", type=int, default=1080)
    p.add_argument("--iters", type=int, default=50)
    p.add_argument("--metric", default="mug+", choices=["nug", "mug", "mug+", "mug_plus"])
    p.add_argument("--backend", default="auto", choices=["auto", "compiled", "python", "both"])
    p.add_argument("--seed", type=int, default=20160)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (FileNotFoundError, IsADirectoryError, PermissionError, UnsupportedFormat, CorruptStream) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (FitDivergence, DegenerateInput) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (InvalidImage, CropTooLarge, ParseError, QualityOutOfRange, GroupTooSmall, InvalidGeometry,
            ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
