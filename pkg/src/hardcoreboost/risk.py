"""Empirical and restricted risk functionals.

Restricted risks are unnormalized sums of point masses over the region, so
the core and complement pieces add up exactly to the full risk.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._scalar import golden_min
from .hypotheses import FeatureMatrix
from .losses import Loss

# Search bracket for per-instance optimal predictions in the brute-force
# Bayes surrogate oracle; the conditional risk is convex in the prediction.
PREDICTION_BRACKET = 60.0


@dataclass(frozen=True)
class Sample:
    """A finite labeled dataset with point masses summing to one."""

    x: np.ndarray  # (m, d) instances
    y: np.ndarray  # (m,) labels in {-1, +1}
    weights: np.ndarray | None = None

    def __post_init__(self):
        xs = np.atleast_2d(np.asarray(self.x, dtype=float))
        ys = np.asarray(self.y, dtype=float)
        object.__setattr__(self, "x", xs)
        object.__setattr__(self, "y", ys)
        if xs.shape[0] != ys.shape[0]:
            raise ValueError("instances and labels must have equal length")
        if not np.all(np.isin(ys, (-1.0, 1.0))):
            raise ValueError("labels must be -1 or +1")
        if self.weights is None:
            w = np.full(len(ys), 1.0 / len(ys))
        else:
            w = np.asarray(self.weights, dtype=float)
            if w.shape != ys.shape or np.any(w < 0):
                raise ValueError("weights must be nonnegative, one per point")
            if abs(w.sum() - 1.0) > 1e-12:
                raise ValueError("weights must sum to 1")
        object.__setattr__(self, "weights", w)

    @property
    def m(self) -> int:
        return len(self.y)


def region_to_mask(region, m: int) -> np.ndarray:
    """Normalize an index array or boolean mask to a boolean mask of length m."""
    if region is None:
        return np.ones(m, dtype=bool)
    region = np.asarray(region)
    if region.dtype == bool:
        if region.shape != (m,):
            raise ValueError("boolean region mask has wrong length")
        return region
    mask = np.zeros(m, dtype=bool)
    if region.size:
        if region.min() < 0 or region.max() >= m:
            raise ValueError("region indices out of range")
        if len(np.unique(region)) != region.size:
            raise ValueError("region indices must be distinct")
        mask[region] = True
    return mask


def margins(fm: FeatureMatrix, lam) -> np.ndarray:
    """Signed confidences y_j (H lam)(x_j)."""
    lam = np.asarray(lam, dtype=float)
    if lam.shape != (fm.n,):
        raise ValueError(f"weighting must have length {fm.n}")
    return fm.labels * (fm.features @ lam)


def surrogate_risk(fm: FeatureMatrix, lam, loss: Loss, region=None) -> float:
    """Mass-weighted sum of phi(-y (H lam)(x)) over the region (full if None)."""
    mask = region_to_mask(region, fm.m)
    z = -margins(fm, lam)
    return float(np.sum(fm.weights[mask] * loss.value(z[mask])))


def classification_risk(fm: FeatureMatrix, lam, region=None) -> float:
    """Mass of misclassified points in the region; f(x) = 0 predicts +1."""
    mask = region_to_mask(region, fm.m)
    pred = np.where(fm.features @ np.asarray(lam, dtype=float) >= 0.0, 1.0, -1.0)
    wrong = pred != fm.labels
    return float(np.sum(fm.weights[mask & wrong]))


def _group_by_instance(sample: Sample):
    """Masses of +1 and -1 labels per distinct instance."""
    _, inverse = np.unique(sample.x, axis=0, return_inverse=True)
    k = inverse.max() + 1
    pos = np.zeros(k)
    neg = np.zeros(k)
    for idx, y, w in zip(inverse, sample.y, sample.weights):
        if y > 0:
            pos[idx] += w
        else:
            neg[idx] += w
    return pos, neg


def bayes_risk_discrete(sample: Sample) -> float:
    """Minimal classification risk over all predictors for a finite-support law.

    Equals the sum over distinct instances of the minority label mass.
    """
    pos, neg = _group_by_instance(sample)
    return float(np.minimum(pos, neg).sum())


def bayes_surrogate_risk(sample: Sample, loss: Loss, tol: float = 1e-10) -> float:
    """Brute-force minimal surrogate risk over all predictors.

    Minimizes the convex conditional risk per distinct instance by
    golden-section over predictions in [-B, B].
    """
    pos, neg = _group_by_instance(sample)
    total = 0.0
    for wp, wn in zip(pos, neg):
        if wp + wn == 0:
            continue
        _, v = golden_min(
            lambda f: wp * float(loss.value(-f)) + wn * float(loss.value(f)),
            -PREDICTION_BRACKET,
            PREDICTION_BRACKET,
            tol,
        )
        total += v
    return total


def load_sample_csv(path: str) -> Sample:
    """Read a dataset CSV with header f1,...,fd,label[,weight]."""
    import csv

    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        header = [h.strip() for h in header]
        if "label" not in header:
            raise ValueError("dataset CSV must have a 'label' column")
        label_col = header.index("label")
        weight_col = header.index("weight") if "weight" in header else None
        feat_cols = [
            i for i, h in enumerate(header) if i not in (label_col, weight_col)
        ]
        xs, ys, ws = [], [], []
        for row in reader:
            if not row:
                continue
            xs.append([float(row[i]) for i in feat_cols])
            ys.append(int(float(row[label_col])))
            if weight_col is not None:
                ws.append(float(row[weight_col]))
    return Sample(np.array(xs), np.array(ys, dtype=float), np.array(ws) if ws else None)
