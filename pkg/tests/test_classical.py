"""Closed-form barrier solution: scale function, barrier, threshold."""

import numpy as np
import pytest

from divband import band, char_roots, classify_regime
from divband.classical import (
    classical_solution,
    classical_value,
    h_eval,
    optimal_barrier,
    phi_threshold,
)
from divband.errors import DegenerateRegime, NegativeX

from conftest import make_params

B_TILDE = 7.265246114987539     # frozen: closed form, h''(b)=0 cross-check below
PHI_MAX = 13.371003258518       # frozen: h'(0)/h'(b_tilde)


class TestScaleFunction:
    def test_value_at_zero(self, params):
        r = char_roots(params)
        assert h_eval(params, 0.0) == pytest.approx(r.S1 - r.S2, rel=1e-14)

    def test_negative_x_rejected(self, params):
        with pytest.raises(NegativeX):
            h_eval(params, -0.1)

    @pytest.mark.parametrize("order", [1, 2])
    def test_derivatives_match_finite_differences(self, params, order):
        step = 1e-6
        xs = np.linspace(0.2, 10.0, 25)
        exact = h_eval(params, xs, order)
        fd = (h_eval(params, xs + step, order - 1)
              - h_eval(params, xs - step, order - 1)) / (2 * step)
        assert np.max(np.abs(fd - exact) / np.abs(exact)) <= 1e-6

    def test_zero_curvature_at_optimal_barrier(self, params):
        b = optimal_barrier(params)
        assert abs(h_eval(params, b, 2)) <= 1e-12 * abs(h_eval(params, 0.0, 2))


class TestOptimalBarrier:
    def test_reference_value(self, params):
        assert optimal_barrier(params) == pytest.approx(B_TILDE, rel=1e-12)
        assert optimal_barrier(params) == pytest.approx(7.265, abs=5e-4)

    def test_degenerate_regime_raises(self):
        p = make_params(delta=0.6)  # (0.6+1)^2 = 2.56 > 2.25
        with pytest.raises(DegenerateRegime):
            optimal_barrier(p)

    def test_barrier_vanishes_at_the_regime_boundary(self):
        # boundary delta* solves (delta+1)^2 = 2.25, i.e. delta* = 0.5
        values = [optimal_barrier(make_params(delta=0.5 - eps))
                  for eps in (1e-2, 1e-4, 1e-6)]
        assert values[0] > values[1] > values[2]
        assert values[2] < 5e-5


class TestClassicalValue:
    def test_value_at_barrier_is_ratio(self, params):
        b = optimal_barrier(params)
        v, dv, d2v = classical_value(params, b, b)
        assert v == pytest.approx(h_eval(params, b) / h_eval(params, b, 1), rel=1e-14)
        assert dv == pytest.approx(1.0, abs=1e-14)
        assert d2v == pytest.approx(0.0, abs=1e-12)

    def test_linear_extension(self, params):
        b = optimal_barrier(params)
        v_b = classical_value(params, b, b)[0]
        v, dv, d2v = classical_value(params, b + 3.0, b)
        assert v == pytest.approx(v_b + 3.0, rel=1e-14)
        assert dv == 1.0 and d2v == 0.0

    def test_dominates_linear_lower_bound(self, params):
        b = optimal_barrier(params)
        xs = np.linspace(0.0, 2 * b, 100)
        v = classical_value(params, xs, b)[0]
        floor = xs + params.c / (params.lam + params.delta)
        assert np.all(v >= floor - 1e-12)

    def test_band_solution_at_zero_funding_level_matches(self, params):
        b = optimal_barrier(params)
        coef = band.assemble_coefficients(0.0, b, params)
        xs = np.linspace(0.0, b, 200)
        expect = classical_value(params, xs, b)[0]
        assert np.max(np.abs(coef.upper(xs) - expect)) <= 1e-9

    def test_strict_concavity_inside(self, params):
        b = optimal_barrier(params)
        xs = np.linspace(1e-3, b - 1e-3, 400)
        assert np.all(classical_value(params, xs, b)[2] < 0.0)

    def test_slope_at_least_one_with_equality_beyond(self, params):
        b = optimal_barrier(params)
        xs = np.linspace(0.0, 2 * b, 400)
        dv = classical_value(params, xs, b)[1]
        assert np.all(dv >= 1.0 - 1e-12)
        inside = xs < b - 1e-9
        assert np.all(dv[inside] > 1.0)
        assert np.all(dv[~inside] <= 1.0 + 1e-12)


class TestPhiThreshold:
    def test_reference_value(self, params):
        assert phi_threshold(params) == pytest.approx(PHI_MAX, rel=1e-10)
        assert phi_threshold(params) == pytest.approx(13.37, abs=5e-3)

    def test_matches_independent_slope_ratio(self, params):
        b = optimal_barrier(params)
        ratio = h_eval(params, 0.0, 1) / h_eval(params, b, 1)
        assert phi_threshold(params) == pytest.approx(ratio, rel=1e-10)

    def test_at_least_one_over_random_parameters(self):
        rng = np.random.default_rng(11)
        found = 0
        while found < 100:
            p = make_params(c=rng.uniform(0.5, 3), lam=rng.uniform(0.3, 2),
                            alpha=rng.uniform(0.5, 3), beta=rng.uniform(0, 4),
                            delta=rng.uniform(0.005, 0.2), phi=1.5)
            if p.payout_all():
                continue
            found += 1
            assert phi_threshold(p) >= 1.0 - 1e-12

    def test_gap_equation_root_is_barrier_at_threshold(self, params):
        # the gap residual vanishes exactly at (phi_max, b_tilde)
        b = optimal_barrier(params)
        phi_max = phi_threshold(params)
        at_threshold = make_params(phi=phi_max)
        assert abs(band.gap_residual(b, at_threshold)) <= 1e-9
        # just inside the band regime the root sits next to the barrier
        just_inside = make_params(phi=phi_max * (1.0 - 1e-9))
        assert band.gap_root(just_inside) == pytest.approx(b, abs=1e-5)

    def test_degenerate_regime_raises(self):
        with pytest.raises(DegenerateRegime):
            phi_threshold(make_params(delta=0.6))


def test_solution_bundle(params):
    cs = classical_solution(params)
    assert cs.b_tilde == pytest.approx(B_TILDE, rel=1e-12)
    # h and h' are both negative under this sign convention
    assert cs.normalizer < 0.0
    assert cs.value(0.0) > 0.0
    assert cs.value(0.0, 1) == pytest.approx(classify_regime(params).phi_max, rel=1e-12)
    assert cs.value(cs.b_tilde, 1) == pytest.approx(1.0, abs=1e-14)
