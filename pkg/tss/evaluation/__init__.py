from .spectrum import SimilarityScore, SpectralIndex, periodogram, spectrum_values, psd_similarity, nearest_real_match
from .curve import CurvePoint, StepCurve, per_step_curve, mean_curve
from .tstr import (
    NearestCentroidClassifier,
    TstrResult,
    confusion_matrix,
    per_class_recall,
    per_class_f1,
    macro_f1,
    geometric_mean_recall,
    tstr_run,
    tstr_evaluate,
)

__all__ = [
    "SimilarityScore",
    "SpectralIndex",
    "periodogram",
    "spectrum_values",
    "psd_similarity",
    "nearest_real_match",
    "CurvePoint",
    "StepCurve",
    "per_step_curve",
    "mean_curve",
    "NearestCentroidClassifier",
    "TstrResult",
    "confusion_matrix",
    "per_class_recall",
    "per_class_f1",
    "macro_f1",
    "geometric_mean_recall",
    "tstr_run",
    "tstr_evaluate",
]
