"""Train-on-synthetic / test-on-real harness with a nearest-centroid classifier."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, List, Sequence

import numpy as np

from tss.errors import DatasetError
from tss.evaluation.spectrum import spectrum_values
from tss.model.dataset import LabeledDataset

logger = logging.getLogger(__name__)

METRICS = ("macro_f1", "gmean")


def psd_features(dataset: LabeledDataset) -> np.ndarray:
    return np.stack([spectrum_values(s.values).reshape(-1) for s in dataset.samples])


class NearestCentroidClassifier:
    def __init__(self):
        self.classes: List[int] = []
        self.centroids: np.ndarray = np.empty((0, 0))

    def fit(self, features: np.ndarray, labels: Sequence[int]) -> "NearestCentroidClassifier":
        labels = np.asarray(labels)
        self.classes = sorted(set(int(l) for l in labels))
        self.centroids = np.stack([features[labels == c].mean(axis=0) for c in self.classes])
        return self

    def predict(self, features: np.ndarray) -> np.ndarray:
        d = ((features[:, np.newaxis, :] - self.centroids[np.newaxis, :, :]) ** 2).sum(axis=2)
        # argmin returns the first minimum, so ties go to the lowest class id
        return np.asarray(self.classes)[np.argmin(d, axis=1)]


def confusion_matrix(true: Sequence[int], pred: Sequence[int], classes: Sequence[int]) -> np.ndarray:
    """Rows are true classes, columns predicted classes, both in `classes` order."""
    pos = {c: i for i, c in enumerate(classes)}
    cm = np.zeros((len(classes), len(classes)), dtype=np.int64)
    for t, p in zip(true, pred):
        cm[pos[int(t)], pos[int(p)]] += 1
    return cm


def per_class_recall(cm: np.ndarray) -> np.ndarray:
    support = cm.sum(axis=1)
    return np.divide(np.diag(cm), support, out=np.zeros(len(cm)), where=support > 0)


def per_class_f1(cm: np.ndarray) -> np.ndarray:
    tp = np.diag(cm).astype(np.float64)
    denom = cm.sum(axis=0) + cm.sum(axis=1)
    return np.divide(2.0 * tp, denom, out=np.zeros(len(cm)), where=denom > 0)


def _present(cm: np.ndarray) -> np.ndarray:
    return cm.sum(axis=1) > 0


def macro_f1(cm: np.ndarray) -> float:
    """Unweighted mean F1 over the classes present in the test labels."""
    return float(np.mean(per_class_f1(cm)[_present(cm)]))


def geometric_mean_recall(cm: np.ndarray) -> float:
    recalls = per_class_recall(cm)[_present(cm)]
    if np.any(recalls == 0):
        return 0.0
    return float(np.exp(np.mean(np.log(recalls))))


@dataclass
class TstrResult:
    macro_f1: float
    gmean: float
    n_classes: int
    confusion: np.ndarray
    class_names: List[str]

    @property
    def chance(self) -> float:
        return 1.0 / self.n_classes

    def summary(self) -> Dict[str, str]:
        return {
            "macro_f1": repr(self.macro_f1),
            "gmean": repr(self.gmean),
            "chance": repr(self.chance),
            "macro_f1_margin": repr(self.macro_f1 - self.chance),
            "n_classes": str(self.n_classes),
            "classes": ";".join(self.class_names),
            "confusion": ";".join(",".join(str(v) for v in row) for row in self.confusion),
        }


def _aligned_labels(train: LabeledDataset, test: LabeledDataset) -> List[int]:
    """Test labels re-expressed as training class ids, matched by class name."""
    by_name = {name: cid for cid, name in train.class_names.items()}
    out = []
    for label in test.labels:
        name = test.class_names[label]
        if name not in by_name:
            raise DatasetError(f"test class {name!r} is absent from the training set")
        out.append(by_name[name])
    return out


def tstr_run(synthetic_train: LabeledDataset, real_test: LabeledDataset) -> TstrResult:
    if len(synthetic_train.class_ids) < 2:
        raise DatasetError("training set needs at least 2 classes")
    if len(real_test) == 0:
        raise DatasetError("test set is empty")
    if len(set(real_test.labels)) < 2:
        raise DatasetError("test set needs at least 2 classes")
    if synthetic_train.shape != real_test.shape:
        raise DatasetError(f"train shape {synthetic_train.shape} differs from test shape {real_test.shape}")
    true = _aligned_labels(synthetic_train, real_test)

    clf = NearestCentroidClassifier().fit(psd_features(synthetic_train), synthetic_train.labels)
    pred = clf.predict(psd_features(real_test))
    classes = synthetic_train.class_ids
    cm = confusion_matrix(true, pred, classes)
    result = TstrResult(
        macro_f1=macro_f1(cm),
        gmean=geometric_mean_recall(cm),
        n_classes=len(classes),
        confusion=cm,
        class_names=[synthetic_train.class_names[c] for c in classes],
    )
    logger.info("tstr: macro_f1=%.4f gmean=%.4f over %d test samples", result.macro_f1, result.gmean, len(real_test))
    return result


def tstr_evaluate(synthetic_train: LabeledDataset, real_test: LabeledDataset, metric: str = "macro_f1") -> float:
    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric!r}; expected one of {', '.join(METRICS)}")
    result = tstr_run(synthetic_train, real_test)
    return result.macro_f1 if metric == "macro_f1" else result.gmean
