"""Parameterless no-reference JPEG quality metrics: NUG, MUG and MUG+.

>>> from mugiqa import score_image, read_image
>>> score_image(read_image("photo.jpg"))          # doctest: +SKIP
MetricResult(nug=..., mug=..., mug_plus=..., n_available=...)
"""

from ._backend import BACKEND, available_backends
from .correlation import LogisticParams, fit_logistic, logistic, plcc, srcc
from .errors import (BatchScoringError, CorruptStream, CropTooLarge, DegenerateInput, DegenerateSpectrum,
                     DuplicatePath, FitDivergence, GroupTooSmall, ImageTooSmall, InvalidGeometry, InvalidImage,
                     MugError, ParseError, QualityOutOfRange, UnsupportedFormat)
from .harness import (CorrelationReport, DatasetManifest, ManifestRecord, ScoreRow, ScoreTable, evaluate,
                      jpeg_ladder, load_manifest, misalignment_experiment, per_group_srcc, score_dataset)
from .images import EncodedImage, crop_border, decode, encode, encode_jpeg, read_image, synthesize_chessboard
from .metric import (M, GradientField, MetricResult, UniqueGradientSpectrum, mug_plus_score, mug_score,
                     normalize_spectrum, rgb_to_luminance, scharr_gradients, score_image, unique_gradient_spectrum)

__version__ = "0.1.0"
