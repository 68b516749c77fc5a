"""One-dimensional search helpers shared across the package."""

from __future__ import annotations

import math

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0  # 1/phi
_INVPHI2 = (3.0 - math.sqrt(5.0)) / 2.0  # 1/phi^2


def golden_min(f, lo: float, hi: float, tol: float = 1e-8) -> tuple[float, float]:
    """Minimize a unimodal function on [lo, hi] by golden-section search.

    Returns (argmin, min value). The bracket is shrunk until its width is
    below `tol`.
    """
    if hi < lo:
        raise ValueError("empty bracket")
    a, b = lo, hi
    h = b - a
    if h <= tol:
        x = 0.5 * (a + b)
        return x, f(x)
    c = a + _INVPHI2 * h
    d = a + _INVPHI * h
    fc, fd = f(c), f(d)
    while h > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            h = b - a
            c = a + _INVPHI2 * h
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            h = b - a
            d = a + _INVPHI * h
            fd = f(d)
    x = c if fc < fd else d
    return x, min(fc, fd)


def golden_max(f, lo: float, hi: float, tol: float = 1e-8) -> tuple[float, float]:
    x, v = golden_min(lambda t: -f(t), lo, hi, tol)
    return x, -v


def bisect_root(g, lo: float, hi: float, tol: float = 1e-12, max_iter: int = 400) -> float:
    """Root of a nondecreasing function g on [lo, hi] with g(lo) <= 0 <= g(hi)."""
    glo, ghi = g(lo), g(hi)
    if glo > 0:
        return lo
    if ghi < 0:
        return hi
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= tol:
            return mid
        if g(mid) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
