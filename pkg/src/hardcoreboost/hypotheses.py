"""Finite weak-learner classes with range [-1, +1] and the operator H.

Three kinds are provided: coordinate projections over [-1, +1]^d, lattice
subcube indicators tiling [-i, i)^d at resolution i (the structural-risk
family used by the consistency experiments), and explicit pass-through
feature tables.
"""

from __future__ import annotations

import abc
from dataclasses import dataclass, field

import numpy as np

MAX_LATTICE_CELLS = 10**6


class ResourceLimitError(ValueError):
    """Raised when a requested class would exceed the enumeration budget."""


@dataclass(frozen=True)
class FeatureMatrix:
    """Materialized hypotheses on a sample: entry (j, i) = h_i(x_j).

    weights are the sample-point masses (uniform 1/m by default) and are
    carried along so risk sums and optimizers need no separate handle on the
    originating sample.
    """

    features: np.ndarray  # (m, n)
    labels: np.ndarray  # (m,), values in {-1, +1}
    weights: np.ndarray | None = None

    def __post_init__(self):
        f = np.asarray(self.features, dtype=float)
        y = np.asarray(self.labels, dtype=float)
        object.__setattr__(self, "features", f)
        object.__setattr__(self, "labels", y)
        if f.ndim != 2 or y.shape != (f.shape[0],):
            raise ValueError("features must be (m, n) with matching labels")
        if not np.all(np.abs(f) <= 1.0 + 1e-12):
            raise ValueError("feature entries must lie in [-1, +1]")
        if not np.all(np.isin(y, (-1.0, 1.0))):
            raise ValueError("labels must be -1 or +1")
        if self.weights is None:
            w = np.full(f.shape[0], 1.0 / f.shape[0])
        else:
            w = np.asarray(self.weights, dtype=float)
            if w.shape != y.shape or np.any(w < 0):
                raise ValueError("weights must be nonnegative, one per point")
            if abs(w.sum() - 1.0) > 1e-12:
                raise ValueError("weights must sum to 1")
        object.__setattr__(self, "weights", w)

    @property
    def m(self) -> int:
        return self.features.shape[0]

    @property
    def n(self) -> int:
        return self.features.shape[1]


class HypothesisClass(abc.ABC):
    """A finite family {h_i} of features mapping instances into [-1, +1]."""

    n: int

    @abc.abstractmethod
    def evaluate(self, x) -> np.ndarray:
        """All hypothesis values (h_1(x), ..., h_n(x)) for one instance."""

    def apply(self, lam: np.ndarray, x) -> float:
        """(H lam)(x) = sum_i lam_i h_i(x)."""
        lam = np.asarray(lam, dtype=float)
        if lam.shape != (self.n,):
            raise ValueError(f"weighting must have length {self.n}")
        return float(self.evaluate(x) @ lam)

    def materialize(self, sample) -> FeatureMatrix:
        """Evaluate every hypothesis on every sample point."""
        xs = np.atleast_2d(np.asarray(sample.x, dtype=float))
        if xs.shape[0] == 0:
            raise ValueError("sample is empty")
        rows = np.vstack([self.evaluate(x) for x in xs])
        return FeatureMatrix(rows, sample.y, sample.weights)


@dataclass(frozen=True)
class ProjectionClass(HypothesisClass):
    """h_i(x) = x_i over the cube [-1, +1]^d."""

    dim: int

    @property
    def n(self) -> int:
        return self.dim

    def evaluate(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float).reshape(-1)
        if x.shape != (self.dim,):
            raise ValueError(f"instance must have dimension {self.dim}")
        if np.any(np.abs(x) > 1.0 + 1e-12):
            raise ValueError("projection instances must lie in [-1, +1]^d")
        return x

    def materialize(self, sample) -> FeatureMatrix:
        xs = np.atleast_2d(np.asarray(sample.x, dtype=float))
        if xs.shape[1] != self.dim:
            raise ValueError(f"instance must have dimension {self.dim}")
        return FeatureMatrix(xs, sample.y, sample.weights)


@dataclass(frozen=True)
class LatticeCellClass(HypothesisClass):
    """Indicators of the (2 i^2)^d half-open subcubes of side 1/i tiling [-i, i)^d.

    Points outside the support cube get all-zero features.
    """

    resolution: int
    dim: int

    def __post_init__(self):
        if self.resolution < 1 or self.dim < 1:
            raise ValueError("resolution and dimension must be >= 1")
        if self.cells_per_axis**self.dim > MAX_LATTICE_CELLS:
            raise ResourceLimitError(
                f"lattice_cells({self.resolution}, {self.dim}) would enumerate "
                f"{self.cells_per_axis ** self.dim} cells (> {MAX_LATTICE_CELLS})"
            )

    @property
    def cells_per_axis(self) -> int:
        return 2 * self.resolution * self.resolution

    @property
    def n(self) -> int:
        return self.cells_per_axis**self.dim

    def cell_index(self, x) -> int | None:
        """Flat index of the subcube containing x, or None when x is outside."""
        x = np.asarray(x, dtype=float).reshape(-1)
        if x.shape != (self.dim,):
            raise ValueError(f"instance must have dimension {self.dim}")
        i = self.resolution
        axis = np.floor((x + i) * i).astype(int)
        if np.any(axis < 0) or np.any(axis >= self.cells_per_axis):
            return None
        return int(np.ravel_multi_index(axis, (self.cells_per_axis,) * self.dim))

    def evaluate(self, x) -> np.ndarray:
        out = np.zeros(self.n)
        k = self.cell_index(x)
        if k is not None:
            out[k] = 1.0
        return out

    def materialize(self, sample) -> FeatureMatrix:
        xs = np.atleast_2d(np.asarray(sample.x, dtype=float))
        if xs.shape[1] != self.dim:
            raise ValueError(f"instance must have dimension {self.dim}")
        i = self.resolution
        axis = np.floor((xs + i) * i).astype(int)
        inside = np.all((axis >= 0) & (axis < self.cells_per_axis), axis=1)
        rows = np.zeros((xs.shape[0], self.n))
        if np.any(inside):
            flat = np.ravel_multi_index(
                axis[inside].T, (self.cells_per_axis,) * self.dim
            )
            rows[np.flatnonzero(inside), flat] = 1.0
        return FeatureMatrix(rows, sample.y, sample.weights)


@dataclass(frozen=True)
class ExplicitClass(HypothesisClass):
    """Pass-through features: instances are already rows of hypothesis values.

    When a fixed table is attached, materialize ignores the sample instances
    and uses the table rows (matched by index) instead.
    """

    n_features: int
    table: np.ndarray | None = field(default=None, compare=False)

    @property
    def n(self) -> int:
        return self.n_features

    def evaluate(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float).reshape(-1)
        if x.shape != (self.n_features,):
            raise ValueError(f"instance must have {self.n_features} feature values")
        if np.any(np.abs(x) > 1.0 + 1e-12):
            raise ValueError("explicit feature values must lie in [-1, +1]")
        return x

    def materialize(self, sample) -> FeatureMatrix:
        if self.table is not None:
            tab = np.asarray(self.table, dtype=float)
            if tab.shape[0] != len(sample.y):
                raise ValueError("feature table row count must match the sample")
            return FeatureMatrix(tab, sample.y, sample.weights)
        xs = np.atleast_2d(np.asarray(sample.x, dtype=float))
        if xs.shape[1] != self.n_features:
            raise ValueError(f"instance must have {self.n_features} feature values")
        return FeatureMatrix(xs, sample.y, sample.weights)


def lsrm_schedule(dim: int, i_max: int) -> list[LatticeCellClass]:
    """The increasing lattice-cell family [H_1, ..., H_{i_max}] in dimension dim."""
    if dim < 1 or i_max < 1:
        raise ValueError("dim and i_max must be >= 1")
    return [LatticeCellClass(i, dim) for i in range(1, i_max + 1)]


def parse_class_spec(spec: str) -> HypothesisClass:
    """Parse "proj:<d>" | "lattice:<i>x<d>" | "explicit:<path.csv>"."""
    spec = spec.strip()
    if spec.startswith("proj:"):
        return ProjectionClass(int(spec.split(":", 1)[1]))
    if spec.startswith("lattice:"):
        res, _, dim = spec.split(":", 1)[1].partition("x")
        return LatticeCellClass(int(res), int(dim))
    if spec.startswith("explicit:"):
        path = spec.split(":", 1)[1]
        table = np.loadtxt(path, delimiter=",", ndmin=2, skiprows=_csv_has_header(path))
        return ExplicitClass(table.shape[1], table=table)
    raise ValueError(f"unknown class spec {spec!r}")


def _csv_has_header(path: str) -> int:
    with open(path) as fh:
        first = fh.readline()
    try:
        [float(tok) for tok in first.strip().split(",") if tok]
        return 0
    except ValueError:
        return 1
