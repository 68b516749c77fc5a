"""Shared brute-force oracles used to pin derived reference values."""

from __future__ import annotations

import itertools

import numpy as np


def box_vertices(a_eq, b_eq, lower, upper, tol=1e-9):
    """Enumerate vertices of {x : a_eq x = b_eq, lower <= x <= upper}.

    Works for small dense systems: every vertex fixes all but at most
    rank(a_eq) coordinates at a finite bound; the rest solve the equality
    system restricted to the free columns.  Bound patterns for a fixed free
    set are solved in one least-squares call with stacked right-hand sides.
    """
    a_eq = np.atleast_2d(np.asarray(a_eq, dtype=float))
    b_eq = np.asarray(b_eq, dtype=float)
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    m = lower.size
    rank = np.linalg.matrix_rank(a_eq) if a_eq.size else 0
    verts = []
    for k in range(rank + 1):
        for free in itertools.combinations(range(m), k):
            fixed = [j for j in range(m) if j not in free]
            bound_choices = [
                [v for v in (lower[j], upper[j]) if np.isfinite(v)] for j in fixed
            ]
            if any(not c for c in bound_choices):
                continue
            patterns = np.array(list(itertools.product(*bound_choices)))
            if patterns.size == 0:
                patterns = np.zeros((1, 0))
            a_free = a_eq[:, list(free)]
            a_fixed = a_eq[:, fixed]
            rhs = b_eq[:, None] - a_fixed @ patterns.T  # (rows, npat)
            if k:
                sol, *_ = np.linalg.lstsq(a_free, rhs, rcond=None)
                resid = a_free @ sol - rhs
            else:
                sol = np.zeros((0, patterns.shape[0]))
                resid = -rhs
            ok = np.all(np.abs(resid) <= tol, axis=0)
            if k:
                ok &= np.all(sol >= lower[list(free)][:, None] - tol, axis=0)
                ok &= np.all(sol <= upper[list(free)][:, None] + tol, axis=0)
            for col in np.flatnonzero(ok):
                x = np.empty(m)
                x[list(free)] = sol[:, col]
                x[fixed] = patterns[col]
                verts.append(x)
    if not verts:
        return np.zeros((0, m))
    verts = np.unique(np.round(np.array(verts), 9), axis=0)
    return verts


def decorrelation_support_oracle(a, tol=1e-9):
    """Maximal support of {p in [0,1]^m : a p = 0} by vertex enumeration."""
    m = a.shape[1]
    verts = box_vertices(a, np.zeros(a.shape[0]), np.zeros(m), np.ones(m), tol)
    if verts.shape[0] == 0:
        return np.array([], dtype=int)
    return np.flatnonzero(np.any(verts > tol, axis=0))


def random_sign_problem(rng, m_max=8, n_max=3):
    """Random small problem with feature entries in {-1, 0, +1}."""
    from hardcoreboost import FeatureMatrix

    m = int(rng.integers(2, m_max + 1))
    n = int(rng.integers(1, n_max + 1))
    feats = rng.integers(-1, 2, size=(m, n)).astype(float)
    labels = rng.choice([-1.0, 1.0], size=m)
    return FeatureMatrix(feats, labels)


def grid_min_risk(fm, loss, radius=6.0, steps=241):
    """Brute-force min of the empirical surrogate risk over a lambda box."""
    from hardcoreboost import surrogate_risk

    axes = [np.linspace(-radius, radius, steps)] * fm.n
    best = np.inf
    if fm.n == 1:
        for a in axes[0]:
            best = min(best, surrogate_risk(fm, np.array([a]), loss))
    else:
        z = -fm.labels[:, None, None] * (
            fm.features[:, 0, None, None] * axes[0][None, :, None]
            + fm.features[:, 1, None, None] * axes[1][None, None, :]
        )
        vals = (fm.weights[:, None, None] * loss.value(z)).sum(axis=0)
        best = float(vals.min())
    return float(best)
