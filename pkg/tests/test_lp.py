import numpy as np
import pytest
from conftest import box_vertices

from hardcoreboost.lp import (
    STATUS_INFEASIBLE,
    STATUS_OPTIMAL,
    STATUS_UNBOUNDED,
    LinearProgram,
    LpError,
    solve,
)


class TestExamples:
    def test_box_only(self):
        sol = solve(LinearProgram(np.array([1.0]), upper=np.array([1.0])))
        assert sol.status == STATUS_OPTIMAL
        assert sol.value == pytest.approx(1.0, abs=1e-8)
        assert sol.x[0] == pytest.approx(1.0, abs=1e-8)

    def test_tied_pair(self):
        sol = solve(
            LinearProgram(
                np.array([1.0, 0.0]),
                a_eq=np.array([[1.0, -1.0]]),
                b_eq=np.array([0.0]),
                upper=np.ones(2),
            )
        )
        assert sol.status == STATUS_OPTIMAL
        assert sol.value == pytest.approx(1.0, abs=1e-8)
        assert np.allclose(sol.x, [1.0, 1.0], atol=1e-8)

    def test_decorrelation_triple(self):
        sol = solve(
            LinearProgram(
                np.array([0.0, 0.0, 1.0]),
                a_eq=np.array([[0.5, -0.5, 1.0]]),
                b_eq=np.array([0.0]),
                upper=np.ones(3),
            )
        )
        assert sol.status == STATUS_OPTIMAL
        assert sol.value == pytest.approx(0.5, abs=1e-8)
        assert np.allclose(sol.x, [0.0, 1.0, 0.5], atol=1e-8)

    def test_infeasible(self):
        sol = solve(
            LinearProgram(
                np.array([1.0]),
                a_eq=np.array([[1.0]]),
                b_eq=np.array([2.0]),
                upper=np.array([1.0]),
            )
        )
        assert sol.status == STATUS_INFEASIBLE

    def test_unbounded(self):
        sol = solve(LinearProgram(np.array([1.0])))
        assert sol.status == STATUS_UNBOUNDED

    def test_dimension_guard(self):
        with pytest.raises((ValueError, LpError)):
            solve(
                LinearProgram(
                    np.array([1.0, 1.0]),
                    a_eq=np.array([[1.0]]),
                    b_eq=np.array([0.0]),
                )
            )


def random_bounded_lp(rng):
    n = int(rng.integers(2, 7))
    rows = int(rng.integers(0, min(3, n - 1) + 1))
    c = rng.normal(size=n)
    lower = np.zeros(n)
    upper = rng.uniform(0.5, 2.0, size=n)
    if rows:
        a = rng.integers(-1, 2, size=(rows, n)).astype(float)
        interior = lower + rng.uniform(0.1, 0.9, size=n) * (upper - lower)
        b = a @ interior  # guarantees feasibility
    else:
        a, b = None, None
    return LinearProgram(c, a, b, lower, upper)


def test_agreement_with_vertex_enumeration():
    rng = np.random.default_rng(0)
    for _ in range(100):
        lp = random_bounded_lp(rng)
        sol = solve(lp)
        assert sol.status == STATUS_OPTIMAL
        a = lp.a_eq if lp.a_eq is not None else np.zeros((0, lp.objective.size))
        b = lp.b_eq if lp.b_eq is not None else np.zeros(0)
        verts = box_vertices(a, b, lp.lower, lp.upper)
        assert verts.shape[0] > 0
        brute = float(np.max(verts @ lp.objective))
        assert sol.value == pytest.approx(brute, abs=1e-7)


def test_weak_duality_feasible_points():
    rng = np.random.default_rng(1)
    for _ in range(30):
        lp = random_bounded_lp(rng)
        sol = solve(lp)
        a = lp.a_eq if lp.a_eq is not None else np.zeros((0, lp.objective.size))
        b = lp.b_eq if lp.b_eq is not None else np.zeros(0)
        verts = box_vertices(a, b, lp.lower, lp.upper)
        # convex combinations of vertices are feasible
        for _ in range(10):
            w = rng.dirichlet(np.ones(verts.shape[0]))
            x = w @ verts
            assert float(lp.objective @ x) <= sol.value + 1e-8


def test_determinism():
    rng = np.random.default_rng(2)
    lp = random_bounded_lp(rng)
    a = solve(lp)
    b = solve(lp)
    assert a.status == b.status
    assert a.value == b.value
    assert np.array_equal(a.x, b.x)


def test_solution_feasibility_contract():
    rng = np.random.default_rng(3)
    for _ in range(30):
        lp = random_bounded_lp(rng)
        sol = solve(lp)
        assert sol.status == STATUS_OPTIMAL
        assert np.all(sol.x >= lp.lower - 1e-8)
        assert np.all(sol.x <= lp.upper + 1e-8)
        if lp.a_eq is not None:
            assert np.max(np.abs(lp.a_eq @ sol.x - lp.b_eq)) <= 1e-8
        assert abs(float(lp.objective @ sol.x) - sol.value) <= 1e-8
