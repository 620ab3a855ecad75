"""Throughput measurement for the metric pipeline."""

import math
import time
from dataclasses import asdict, dataclass

import numpy as np

from . import _backend
from .harness import metric_name
from .metric import score_image

DEFAULT_SEED = 20160


def noise_image(width, height, seed=DEFAULT_SEED):
    """Seeded uniform RGB noise: nearly every gradient is distinct, the slowest case for NUG."""
    rng = np.random.default_rng(seed)
    return rng.integers(0, 256, size=(height, width, 3), dtype=np.uint8)


@dataclass(frozen=True)
class BenchReport:
    width: int
    height: int
    iterations: int
    mean_ms: float
    p95_ms: float
    megapixels_per_second: float
    metric: str
    backend: str
    score: float

    @property
    def image_size(self):
        return f"{self.width}x{self.height}"

    def as_dict(self):
        out = asdict(self)
        out["image_size"] = self.image_size
        return out


def _p95(samples):
    ordered = sorted(samples)
    # nearest rank, so the value is an observed sample
    return ordered[max(0, math.ceil(0.95 * len(ordered)) - 1)]


def run_bench(width=1920, height=1080, iters=50, metric="mug_plus", backend=None, seed=DEFAULT_SEED,
              warmup=1):
    if iters < 1:
        raise ValueError("iters must be at least 1")
    metric = metric_name(metric)
    backend = backend or _backend.BACKEND
    img = noise_image(width, height, seed)
    for _ in range(warmup):
        score_image(img, backend=backend)
    samples = []
    result = None
    for _ in range(iters):
        t0 = time.perf_counter()
        result = score_image(img, backend=backend)
        samples.append((time.perf_counter() - t0) * 1e3)
    mean_ms = sum(samples) / len(samples)
    return BenchReport(
        width=width, height=height, iterations=iters,
        mean_ms=mean_ms, p95_ms=_p95(samples),
        megapixels_per_second=width * height / 1e6 / (mean_ms / 1e3),
        metric=metric, backend=backend, score=float(getattr(result, metric)),
    )
