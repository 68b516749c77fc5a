import math

import numpy as np
import pytest

from hardcoreboost import (
    BoundInputs,
    FeatureMatrix,
    compute_hardcore,
    constants_from_certificate,
    core_classification_bound,
    core_surrogate_bound,
    full_risk_bound,
    rademacher_constant,
    rademacher_surrogate_deviation,
    sample_split_bounds,
    surrogate_risk,
    vc_unbounded_bound,
)
from hardcoreboost.losses import Loss


class TestSampleSplit:
    def test_zero_log_boundary(self):
        lo_c, lo_p = sample_split_bounds(100, 1.0, 1.0 - 1e-15)
        assert lo_c == pytest.approx(100.0, abs=1e-3)

    def test_worked_example(self):
        lo_c, _ = sample_split_bounds(800, 0.5, 0.01)
        expected = 800 * (0.5 - math.sqrt(math.log(100.0) / 1600.0))
        assert lo_c == pytest.approx(expected, abs=1e-9)
        assert lo_c == pytest.approx(357.1, abs=0.1)

    def test_clamped_at_zero(self):
        lo_c, _ = sample_split_bounds(100, 0.0, 0.1)
        assert lo_c == 0.0


class TestVcBound:
    def test_zero_error_form(self):
        n, m_plus, dp = 3, 500, 0.02
        expected = 4 * (n * math.log(2 * m_plus + 1) + math.log(4 / dp)) / m_plus
        assert vc_unbounded_bound(n, m_plus, 0.0, 1.0, dp, zero_error=True) == pytest.approx(expected)

    def test_worked_example(self):
        v = vc_unbounded_bound(2, 1000, 0.0, 1.0, 0.0125, zero_error=True)
        assert v == pytest.approx(0.08389, abs=1e-4)

    def test_general_form_reduces_at_zero_epsilon(self):
        a = vc_unbounded_bound(2, 1000, 0.0, 1.0, 0.0125, zero_error=False)
        b = vc_unbounded_bound(2, 1000, 0.0, 1.0, 0.0125, zero_error=True)
        assert a == pytest.approx(b)

    def test_monotone_in_m_plus(self):
        vals = [vc_unbounded_bound(3, m, 0.0, 1.0, 0.05, True) for m in (100, 400, 1600)]
        assert vals[0] > vals[1] > vals[2]


class TestCoreSurrogateBound:
    def test_unit_arithmetic(self):
        # ln n = 0 and ln(2/delta') = 1 makes the deviation term c * 4 / sqrt(m_C)
        dp = 2.0 / math.e
        out = core_surrogate_bound(1.0, 1, dp, 0.0, 16.0)
        assert out.value == pytest.approx(1.0)

    def test_epsilon_additivity(self):
        dp = 0.05
        base = core_surrogate_bound(1.0, 4, dp, 0.0, 100.0).value
        assert core_surrogate_bound(1.0, 4, dp, 0.1, 100.0).value == pytest.approx(base + 0.1)

    def test_quadruple_m_halves_deviation(self):
        dp = 0.05
        a = core_surrogate_bound(1.0, 4, dp, 0.0, 100.0).value
        b = core_surrogate_bound(1.0, 4, dp, 0.0, 400.0).value
        assert b == pytest.approx(a / 2.0)

    def test_precondition_flag(self):
        assert not core_surrogate_bound(10.0, 100, 0.01, 0.0, 10.0).valid
        assert core_surrogate_bound(1.0, 2, 0.1, 0.0, 1000.0).valid


class TestCoreClassificationBound:
    def test_hinge_identity(self):
        dp = 0.05
        inner = core_surrogate_bound(1.0, 4, dp, 0.0, 100.0).value
        out = core_classification_bound(Loss("hinge"), 1.0, 4, dp, 0.0, 100.0, 0.0)
        assert out.value == pytest.approx(inner)

    def test_exp_psi_wrap(self):
        # inner bound r maps to 2 sqrt(r)
        out = core_classification_bound(Loss("exp"), 0.02, 1, 2.0 / math.e, 0.0, 4.0, 0.0)
        inner = core_surrogate_bound(0.02, 1, 2.0 / math.e, 0.0, 4.0).value
        assert out.value == pytest.approx(2.0 * math.sqrt(inner))

    def test_zero_inner_zero(self):
        out = core_classification_bound(Loss("exp"), 1e-12, 2, 0.5, 0.0, 1e12, 0.0)
        assert out.value == pytest.approx(0.0, abs=1e-5)

    def test_negative_approx_error_rejected(self):
        with pytest.raises(ValueError):
            core_classification_bound(Loss("exp"), 1.0, 2, 0.1, 0.0, 100.0, -0.1)


class TestFullRiskBound:
    def test_worked_example(self):
        inputs = BoundInputs(m=10**6, n=8, delta=0.08, mu_core=0.5, c=2.0)
        report = full_risk_bound(inputs, Loss("hinge"))
        assert report.delta_prime == pytest.approx(0.01)
        assert report.total == pytest.approx(0.04438, abs=1e-4)
        assert report.psi_term == pytest.approx(0.0426, abs=1e-3)
        assert report.vc_term == pytest.approx(0.001775, abs=1e-5)
        assert report.valid

    def test_zero_core_mass(self):
        inputs = BoundInputs(m=1000, n=4, delta=0.1, mu_core=0.0)
        report = full_risk_bound(inputs, Loss("hinge"))
        assert report.psi_term == 0.0
        assert report.vc_term > 0.0

    def test_full_core_mass(self):
        inputs = BoundInputs(m=10**6, n=4, delta=0.1, mu_core=1.0)
        report = full_risk_bound(inputs, Loss("hinge"))
        assert report.vc_term == 0.0
        assert report.psi_term > 0.0

    def test_monotonicity_sweeps(self):
        base = dict(n=8, delta=0.08, mu_core=0.5, c=2.0)
        loss = Loss("hinge")
        ms = [10**4, 10**5, 10**6, 10**7]
        totals = [full_risk_bound(BoundInputs(m=m, **base), loss).total for m in ms]
        assert all(b < a for a, b in zip(totals, totals[1:]))
        ns = [2, 4, 8, 16]
        totals_n = [
            full_risk_bound(
                BoundInputs(m=10**6, n=n, delta=0.08, mu_core=0.5, c=2.0), loss
            ).total
            for n in ns
        ]
        assert all(b > a for a, b in zip(totals_n, totals_n[1:]))
        deltas = [0.01, 0.04, 0.16]
        totals_d = [
            full_risk_bound(
                BoundInputs(m=10**6, n=8, delta=d, mu_core=0.5, c=2.0), loss
            ).total
            for d in deltas
        ]
        assert all(b < a for a, b in zip(totals_d, totals_d[1:]))
        eps = [0.0, 1e-8, 1e-7]
        totals_e = [
            full_risk_bound(
                BoundInputs(m=10**6, n=8, delta=0.08, mu_core=0.5, c=2.0, epsilon=e),
                loss,
            ).total
            for e in eps
        ]
        assert all(b > a for a, b in zip(totals_e, totals_e[1:]))

    def test_composition_consistency(self):
        # with both masses positive the total is exactly psi-wrap plus VC term
        inputs = BoundInputs(m=10**5, n=4, delta=0.1, mu_core=0.3, c=1.5)
        loss = Loss("exp")
        report = full_risk_bound(inputs, loss)
        assert report.total == pytest.approx(report.psi_term + report.vc_term, abs=1e-15)

    def test_precondition_flags(self):
        tiny = BoundInputs(m=10, n=8, delta=0.08, mu_core=0.5, c=2.0)
        report = full_risk_bound(tiny, Loss("hinge"))
        assert not report.preconditions["m_large_enough"]

    def test_input_validation(self):
        with pytest.raises(ValueError):
            BoundInputs(m=10, n=2, delta=1.5)
        with pytest.raises(ValueError):
            BoundInputs(m=10, n=2, delta=0.1, mu_core=2.0)
        with pytest.raises(ValueError):
            BoundInputs(m=10, n=2, delta=0.1, m_core=6, m_plus=6)


class TestRademacher:
    def test_hinge_constant(self):
        lip, phib = rademacher_constant(Loss("hinge"), 1.0)
        assert lip == 1.0 and phib == 2.0
        c = max(2.0 * lip * 1.0 * math.sqrt(2.0), phib)
        assert c == pytest.approx(2.0 * math.sqrt(2.0))

    def test_single_hypothesis_drops_ln_n(self):
        v = rademacher_surrogate_deviation(1, 100, 1.0, 1.0, 2.0, 0.1)
        c = 2.0 * math.sqrt(2.0)
        assert v == pytest.approx(c * math.sqrt(math.log(20.0)) / 10.0)

    def test_scaling_in_m(self):
        a = rademacher_surrogate_deviation(4, 100, 1.0, 1.0, 2.0, 0.1)
        b = rademacher_surrogate_deviation(4, 10000, 1.0, 1.0, 2.0, 0.1)
        assert b == pytest.approx(a / 10.0)

    def test_empirical_validity_hinge(self):
        # fixed finitely-supported law, n = 4, b = 1, hinge, delta = 0.1:
        # the uniform deviation bound may fail in at most 15% of resamples
        rng = np.random.default_rng(0)
        support = rng.uniform(-1, 1, size=(16, 4))
        labels = rng.choice([-1.0, 1.0], size=16)
        probs = rng.dirichlet(np.ones(16))
        loss = Loss("hinge")
        lam = rng.normal(size=4)
        lam /= np.abs(lam).sum()  # l1 norm exactly 1
        true_fm = FeatureMatrix(support, labels, probs)
        true_risk = surrogate_risk(true_fm, lam, loss)
        lip, phib = rademacher_constant(loss, 1.0)
        bound = rademacher_surrogate_deviation(4, 400, 1.0, lip, phib, 0.1)
        violations = 0
        for _ in range(500):
            idx = rng.choice(16, size=400, p=probs)
            emp = FeatureMatrix(support[idx], labels[idx])
            if abs(surrogate_risk(emp, lam, loss) - true_risk) > bound:
                violations += 1
        assert violations <= 0.15 * 500


def test_constants_from_certificate():
    fm = FeatureMatrix(np.array([[1.0], [1.0]]), np.array([1.0, -1.0]))
    cert = compute_hardcore(fm)
    c, b = constants_from_certificate(cert, fm, Loss("hinge"), np.array([0.5]))
    assert b == pytest.approx(0.5)
    assert c == pytest.approx(max(2.0 * 1.0 * 0.5 * math.sqrt(2.0), 1.5))
