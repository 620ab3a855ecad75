"""Manifest-driven batch scoring and the evaluation experiments.

Manifest CSV: header ``path,mos[,group]``, ``#`` lines are comments, relative
paths resolve against the manifest's directory. Score CSV:
``path,nug,mug,mug_plus,mos[,group]`` with shortest round-trip floats.
"""

import csv
import io
import json
import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .correlation import fit_logistic, plcc, srcc
from .errors import BatchScoringError, CropTooLarge, DegenerateInput, DuplicatePath, GroupTooSmall, MugError, ParseError
from .images import crop_border, decode, encode_jpeg, read_image
from .metric import score_image

log = logging.getLogger(__name__)

METRICS = ("nug", "mug", "mug_plus")
_ALIASES = {"mug+": "mug_plus", "mugplus": "mug_plus"}
JOBS_ENV = "MUGIQA_JOBS"


def metric_name(name):
    key = _ALIASES.get(name.lower(), name.lower())
    if key not in METRICS:
        raise ValueError(f"unknown metric {name!r}; choose from nug, mug, mug_plus")
    return key


def resolve_jobs(jobs):
    """Worker count, overridden by ``MUGIQA_JOBS`` when set."""
    env = os.environ.get(JOBS_ENV)
    if env:
        jobs = int(env)
    if jobs < 1:
        raise ValueError(f"worker count must be positive, got {jobs}")
    return jobs


@dataclass(frozen=True)
class ManifestRecord:
    image_path: str
    mos: float
    group_id: str | None = None


@dataclass(frozen=True)
class DatasetManifest:
    records: tuple

    def __len__(self):
        return len(self.records)


def _data_lines(text):
    for lineno, line in enumerate(text.splitlines(), start=1):
        if line.strip() and not line.lstrip().startswith("#"):
            yield lineno, line


def load_manifest(path):
    path = Path(path)
    text = path.read_text(encoding="utf-8-sig")
    lines = list(_data_lines(text))
    if not lines:
        raise ParseError("manifest is empty; header row 'path,mos[,group]' required", 1)
    header_line, header = lines[0]
    cols = [c.strip().lower() for c in next(csv.reader([header]))]
    if cols[:2] != ["path", "mos"] or cols[2:] not in ([], ["group"]):
        raise ParseError(f"header must be 'path,mos[,group]', got {header!r}", header_line)
    has_group = len(cols) == 3

    base = path.parent
    records, seen = [], set()
    for lineno, line in lines[1:]:
        fields = [f.strip() for f in next(csv.reader([line]))]
        if len(fields) != len(cols):
            raise ParseError(f"expected {len(cols)} fields, got {len(fields)}", lineno)
        raw_path, raw_mos = fields[0], fields[1]
        if not raw_path:
            raise ParseError("empty path", lineno)
        try:
            mos = float(raw_mos)
        except ValueError:
            raise ParseError(f"MOS {raw_mos!r} is not a number", lineno) from None
        if not math.isfinite(mos):
            raise ParseError(f"MOS {raw_mos!r} is not finite", lineno)
        image_path = raw_path if os.path.isabs(raw_path) else str(base / raw_path)
        if image_path in seen:
            raise DuplicatePath(f"duplicate path {raw_path!r}", lineno)
        seen.add(image_path)
        group = (fields[2] or None) if has_group else None
        records.append(ManifestRecord(image_path, mos, group))
    return DatasetManifest(tuple(records))


@dataclass(frozen=True)
class ScoreRow:
    image_path: str
    nug: int
    mug: float
    mug_plus: float
    mos: float
    group_id: str | None = None


@dataclass
class ScoreTable:
    rows: list
    failures: list = field(default_factory=list)

    def __len__(self):
        return len(self.rows)

    def column(self, name):
        if name in ("mos", "nug"):
            return np.array([getattr(r, name) for r in self.rows], dtype=np.float64)
        return np.array([getattr(r, metric_name(name)) for r in self.rows], dtype=np.float64)

    @property
    def has_groups(self):
        return any(r.group_id is not None for r in self.rows)

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        groups = self.has_groups
        w.writerow(["path", "nug", "mug", "mug_plus", "mos"] + (["group"] if groups else []))
        for r in self.rows:
            row = [r.image_path, r.nug, repr(r.mug), repr(r.mug_plus), repr(r.mos)]
            if groups:
                row.append(r.group_id or "")
            w.writerow(row)
        return buf.getvalue()

    def write_csv(self, path):
        Path(path).write_text(self.to_csv(), encoding="utf-8")

    @classmethod
    def read_csv(cls, path):
        rows = []
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            missing = {"path", "nug", "mug", "mug_plus", "mos"} - set(reader.fieldnames or ())
            if missing:
                raise ParseError(f"score table lacks columns {sorted(missing)}", 1)
            for lineno, rec in enumerate(reader, start=2):
                try:
                    rows.append(ScoreRow(rec["path"], int(rec["nug"]), float(rec["mug"]),
                                         float(rec["mug_plus"]), float(rec["mos"]),
                                         rec.get("group") or None))
                except (TypeError, ValueError) as exc:
                    raise ParseError(str(exc), lineno) from None
        return cls(rows)


def _score_record(record, crop):
    img = read_image(record.image_path)
    if crop:
        img = crop_border(img, crop)
    return score_image(img)


def score_dataset(manifest, parallelism=1, *, skip_errors=False, crop=0):
    """Score every manifest image; rows keep manifest order whatever the worker count.

    Any failure raises ``BatchScoringError`` listing the offending paths,
    unless ``skip_errors`` is set, in which case failed rows are left out and
    recorded in ``ScoreTable.failures``.
    """
    records = list(manifest.records)

    def work(record):
        try:
            return _score_record(record, crop), None
        except (OSError, MugError, ValueError) as exc:
            return None, exc

    if parallelism == 1 or len(records) < 2:
        outcomes = [work(r) for r in records]
    else:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            outcomes = list(pool.map(work, records))

    rows, failures = [], []
    for record, (result, error) in zip(records, outcomes):
        if isinstance(error, CropTooLarge):
            # a bad crop width is the caller's mistake, not a per-image failure
            raise error
        if error is not None:
            failures.append((record.image_path, f"{type(error).__name__}: {error}"))
            continue
        rows.append(ScoreRow(record.image_path, result.nug, result.mug, result.mug_plus,
                             record.mos, record.group_id))
    if failures:
        if not skip_errors:
            raise BatchScoringError(failures)
        for path, reason in failures:
            log.warning("skipped %s: %s", path, reason)
    return ScoreTable(rows, failures)


@dataclass(frozen=True)
class CorrelationReport:
    metric_name: str
    srcc: float
    plcc: float
    params: object
    residual_rmse: float
    n: int

    def as_dict(self):
        return {"metric": self.metric_name, "srcc": self.srcc, "plcc": self.plcc,
                "beta": self.params.beta, "rmse": self.residual_rmse, "n": self.n}

    def to_json(self):
        return json.dumps(self.as_dict(), indent=2)


def correlate(scores, mos, metric="score"):
    """SRCC of raw scores and PLCC of logistic-mapped scores against MOS.

    SRCC keeps its sign: MUG and MUG+ fall as quality rises, so they come
    out negative. PLCC is taken after the fit and is positive for any
    useful metric.
    """
    scores = np.asarray(scores, dtype=np.float64)
    mos = np.asarray(mos, dtype=np.float64)
    params = fit_logistic(scores, mos)
    fitted = params(scores)
    rmse = float(np.sqrt(np.mean((fitted - mos) ** 2)))
    if np.ptp(fitted) == 0:
        raise DegenerateInput("logistic mapping collapsed to a constant")
    return CorrelationReport(metric, srcc(scores, mos), plcc(fitted, mos), params, rmse, int(scores.size))


def evaluate(table, metric):
    if len(table) == 0:
        raise DegenerateInput("score table is empty")
    metric = metric_name(metric)
    return correlate(table.column(metric), table.column("mos"), metric)


@dataclass(frozen=True)
class GroupCorrelation:
    group_id: str | None
    srcc: float
    n: int


def per_group_srcc(table, metric):
    """SRCC within each group, in order of first appearance."""
    metric = metric_name(metric)
    groups = {}
    for row in table.rows:
        groups.setdefault(row.group_id, []).append(row)
    if not groups:
        raise DegenerateInput("score table is empty")
    out = []
    for gid, rows in groups.items():
        if len(rows) < 2:
            raise GroupTooSmall(f"group {gid!r} has {len(rows)} row(s); SRCC needs at least 2")
        x = [getattr(r, metric) for r in rows]
        y = [r.mos for r in rows]
        out.append(GroupCorrelation(gid, srcc(x, y), len(rows)))
    return out


@dataclass(frozen=True)
class MisalignmentReport:
    metric: str
    k: int
    aligned: CorrelationReport
    cropped: CorrelationReport
    max_abs_score_delta: float
    aligned_table: ScoreTable
    cropped_table: ScoreTable

    def as_dict(self):
        return {"metric": self.metric, "k": self.k, "aligned": self.aligned.as_dict(),
                "cropped": self.cropped.as_dict(), "max_abs_score_delta": self.max_abs_score_delta}


def misalignment_experiment(manifest, k=1, metric="mug", parallelism=1):
    """Score each image as-is and with ``k`` pixels cut from every border, against the same MOS."""
    metric = metric_name(metric)
    aligned = score_dataset(manifest, parallelism)
    cropped = score_dataset(manifest, parallelism, crop=k) if k else aligned
    a, c = aligned.column(metric), cropped.column(metric)
    delta = float(np.max(np.abs(a - c))) if a.size else 0.0
    return MisalignmentReport(metric, k, evaluate(aligned, metric), evaluate(cropped, metric),
                              delta, aligned, cropped)


@dataclass
class LadderResult:
    qualities: list
    images: list
    results: list
    monotonicity: dict
    encoded: list = field(default_factory=list)

    @property
    def degenerate(self):
        return any(v is None for v in self.monotonicity.values())

    def scores(self, metric):
        metric = metric_name(metric)
        return [getattr(r, metric) for r in self.results]

    def as_dict(self):
        return {"qualities": list(self.qualities),
                "results": [r.as_dict() for r in self.results],
                "monotonicity": dict(self.monotonicity),
                "degenerate": self.degenerate}


def jpeg_ladder(src, qualities):
    """Re-encode ``src`` at each quality (strictly decreasing) and score the decoded copies.

    ``monotonicity[metric]`` is the SRCC of the metric against the quality
    factor, or ``None`` when the metric is constant along the ladder.
    """
    qualities = [int(q) for q in qualities]
    if len(qualities) < 2:
        raise ValueError("a ladder needs at least two quality factors")
    if any(b >= a for a, b in zip(qualities, qualities[1:])):
        raise ValueError(f"qualities must be strictly decreasing, got {qualities}")
    src = np.asarray(src)
    encoded = [encode_jpeg(src, q) for q in qualities]
    images = [decode(e) for e in encoded]
    results = [score_image(img) for img in images]
    monotonicity = {}
    for metric in METRICS:
        values = [getattr(r, metric) for r in results]
        monotonicity[metric] = srcc(values, qualities) if np.ptp(values) > 0 else None
    return LadderResult(qualities, images, results, monotonicity, encoded)
