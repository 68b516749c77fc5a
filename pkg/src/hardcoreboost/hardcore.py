"""Hard-core decomposition of an empirical linear classification problem.

The dual side finds the maximal support of a decorrelating reweighting p
(nonnegative, zero correlation with every feature against the labels); the
primal side produces a weighting with zero margins on the core and strictly
positive margins on the complement.  Both witnesses are verified before a
certificate is returned.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .hypotheses import FeatureMatrix
from .lp import STATUS_OPTIMAL, LinearProgram, LpError, solve
from .risk import region_to_mask

# One order of magnitude above the LP feasibility tolerance.
CORE_TOL = 1e-7

THREADS_ENV = "HARDCOREBOOST_THREADS"


class HardCoreInconsistencyError(RuntimeError):
    """A computed certificate failed its own invariant checks."""


@dataclass(frozen=True)
class HardCoreCertificate:
    core: np.ndarray  # sorted indices of core points
    p: np.ndarray  # decorrelating weights, max entry 1, positive exactly on core
    separator: np.ndarray  # weighting with |lam|_1 <= 1
    margin: float  # separator margin floor on the complement; +inf if empty
    point_optima: np.ndarray  # per-point LP optima (diagnostics)

    def core_mask(self, m: int) -> np.ndarray:
        return region_to_mask(self.core, m)


def _correlation_matrix(fm: FeatureMatrix) -> np.ndarray:
    """A with A[i, j] = y_j h_i(x_j)."""
    return (fm.features * fm.labels[:, None]).T


def _worker_count() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def compute_hardcore(fm: FeatureMatrix, tol: float = CORE_TOL) -> HardCoreCertificate:
    """Compute and verify the hard core of the sampled problem.

    Per sample point j, the LP max p_j over {p in [0,1]^m : A p = 0} decides
    membership; the sum of the per-point optimizers is a single reweighting
    positive exactly on the core (the finite-sample analogue of closure under
    countable unions).  Zero-mass points are excluded by convention.
    """
    a = _correlation_matrix(fm)
    m = fm.m
    zero_mass = fm.weights == 0.0
    upper = np.where(zero_mass, 0.0, 1.0)

    def point_lp(j: int):
        c = np.zeros(m)
        c[j] = 1.0
        sol = solve(LinearProgram(c, a_eq=a, b_eq=np.zeros(a.shape[0]), upper=upper))
        if sol.status != STATUS_OPTIMAL:
            raise LpError(f"per-point decorrelation LP for point {j} is {sol.status}")
        return sol

    workers = _worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            solutions = list(pool.map(point_lp, range(m)))
    else:
        solutions = [point_lp(j) for j in range(m)]

    optima = np.array([s.value for s in solutions])
    core_mask = optima > tol
    p = np.sum([s.x for s in solutions], axis=0)
    if p.max(initial=0.0) > 0:
        p = p / p.max()
    p[~core_mask] = 0.0

    core = np.flatnonzero(core_mask)
    lam, t = separator_certificate(fm, core)
    cert = HardCoreCertificate(core, p, lam, t, optima)
    _verify_certificate(fm, cert, tol)
    return cert


def separator_certificate(fm: FeatureMatrix, core) -> tuple[np.ndarray, float]:
    """Max-margin separator abstaining on the core.

    Solves max t subject to y_j (H lam)(x_j) >= t off the core,
    y_j (H lam)(x_j) = 0 on the core, and |lam|_1 <= 1.  Returns (lam, t);
    with an empty complement the zero weighting and a +inf sentinel are
    returned.  A nonpositive t with nonempty complement means the supplied
    core is not a hard core.
    """
    mask = region_to_mask(core, fm.m)
    # zero-mass points are excluded from the core by convention, and being
    # null they need no positive margin either
    comp = np.flatnonzero(~mask & (fm.weights > 0))
    n = fm.n
    if comp.size == 0:
        return np.zeros(n), float("inf")
    a = _correlation_matrix(fm)  # (n, m)

    # variables: [lam+ (n), lam- (n), t, s_j (complement slacks), u (norm slack)]
    nc = comp.size
    nv = 2 * n + 1 + nc + 1
    obj = np.zeros(nv)
    obj[2 * n] = 1.0
    rows = []
    rhs = []
    core_idx = np.flatnonzero(mask)
    for j in core_idx:
        row = np.zeros(nv)
        row[:n] = a[:, j]
        row[n : 2 * n] = -a[:, j]
        rows.append(row)
        rhs.append(0.0)
    for k, j in enumerate(comp):
        row = np.zeros(nv)
        row[:n] = a[:, j]
        row[n : 2 * n] = -a[:, j]
        row[2 * n] = -1.0
        row[2 * n + 1 + k] = -1.0
        rows.append(row)
        rhs.append(0.0)
    norm_row = np.zeros(nv)
    norm_row[: 2 * n] = 1.0
    norm_row[-1] = 1.0
    rows.append(norm_row)
    rhs.append(1.0)

    lower = np.zeros(nv)
    lower[2 * n] = -1.0
    upper = np.full(nv, np.inf)
    upper[: 2 * n] = 1.0
    upper[2 * n] = 1.0
    upper[-1] = 1.0

    sol = solve(LinearProgram(obj, np.array(rows), np.array(rhs), lower, upper))
    if sol.status != STATUS_OPTIMAL:
        raise LpError(f"separator LP is {sol.status}")
    lam = sol.x[:n] - sol.x[n : 2 * n]
    t = float(sol.value)
    if t <= 1e-9:
        raise HardCoreInconsistencyError(
            f"separator margin {t:g} is not positive: core/complement mismatch"
        )
    return lam, t


def _verify_certificate(fm: FeatureMatrix, cert: HardCoreCertificate, tol: float):
    a = _correlation_matrix(fm)
    mask = cert.core_mask(fm.m)
    if np.any(cert.p[~mask] != 0.0) or np.any(cert.p[mask] <= 0.0):
        raise HardCoreInconsistencyError("p is not positive exactly on the core")
    decorr = np.abs(a @ cert.p).max(initial=0.0)
    if decorr > tol:
        raise HardCoreInconsistencyError(f"decorrelation violation {decorr:g}")
    marg = a.T @ cert.separator
    if np.abs(marg[mask]).max(initial=0.0) > tol:
        raise HardCoreInconsistencyError("separator does not abstain on the core")
    live = ~mask & (fm.weights > 0)
    if np.any(live):
        floor = marg[live].min()
        if not floor >= cert.margin - tol:
            raise HardCoreInconsistencyError("separator margin floor not achieved")
        if cert.margin <= 1e-9:
            raise HardCoreInconsistencyError("separator margin not positive")


@dataclass(frozen=True)
class DichotomyReport:
    trials: int
    violations: int
    seed: int


def verify_dichotomy(fm: FeatureMatrix, core, trials: int, seed: int,
                     tol: float = 1e-9) -> DichotomyReport:
    """Sample random weightings and check the abstain-or-err dichotomy.

    For each unit weighting, the margins on the core must either all vanish
    or include a strictly negative one.  Violations are counted, not thrown.
    """
    mask = region_to_mask(core, fm.m)
    a_core = _correlation_matrix(fm)[:, mask]  # (n, |core|)
    rng = np.random.default_rng(seed)
    violations = 0
    if a_core.shape[1] == 0:
        return DichotomyReport(trials, 0, seed)
    lams = rng.standard_normal((trials, fm.n))
    norms = np.linalg.norm(lams, axis=1)
    norms[norms == 0] = 1.0
    lams /= norms[:, None]
    margins = lams @ a_core  # (trials, |core|)
    all_zero = np.all(np.abs(margins) <= tol, axis=1)
    some_negative = np.any(margins < -tol, axis=1)
    violations = int(np.sum(~(all_zero | some_negative)))
    return DichotomyReport(trials, violations, seed)


def bounded_representation(fm: FeatureMatrix, core, lam) -> np.ndarray:
    """Minimum-l1 weighting matching (H lam) on the core points.

    lam itself is feasible, so infeasibility is an internal error.  The
    returned weighting never has larger l1 norm than lam.
    """
    lam = np.asarray(lam, dtype=float)
    if lam.shape != (fm.n,):
        raise ValueError(f"weighting must have length {fm.n}")
    mask = region_to_mask(core, fm.m)
    core_idx = np.flatnonzero(mask)
    n = fm.n
    if core_idx.size == 0:
        return np.zeros(n)
    feats = fm.features[core_idx]  # (k, n)
    target = feats @ lam

    # variables [lam+, lam-], minimize total, i.e. maximize the negation
    obj = -np.ones(2 * n)
    a_eq = np.hstack([feats, -feats])
    sol = solve(LinearProgram(obj, a_eq, target))
    if sol.status != STATUS_OPTIMAL:
        raise LpError(f"bounded-representation LP is {sol.status} (internal error)")
    out = sol.x[:n] - sol.x[n:]
    if np.abs(out).sum() > np.abs(lam).sum() + 1e-7:
        raise LpError("minimum-norm representation exceeds the input norm")
    return out
