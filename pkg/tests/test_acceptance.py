"""Acceptance suite: every release criterion at its stated tolerance.

Each test prints one PASS/FAIL line (run with ``pytest -s`` to see them
live).  Tolerances are fixed here, not configurable.
"""

import math
import time

import numpy as np
import pytest
from scipy.integrate import quad

from divband import band, hjb
from divband.band import (
    assemble_coefficients,
    gap_residual,
    merged_curvature,
    piecewise_value,
    solve,
)
from divband.classical import classical_value, optimal_barrier
from divband.policy_iter import ClaimDistribution, iterate
from divband.risk_model import char_roots
from divband.simulate import SimConfig, StrategySpec, estimate_value

from conftest import make_params


def report(criterion: int, ok: bool, detail: str) -> None:
    print(f"ACCEPTANCE CRITERION {criterion}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, f"criterion {criterion}: {detail}"


def test_criterion_1_reference_reproduction(params):
    t0 = time.perf_counter()
    sol = solve(params)
    elapsed = time.perf_counter() - t0
    ok = (abs(sol.a_star - 3.1746) <= 2e-3
          and abs(sol.b_star - 6.8526) <= 2e-3
          and elapsed < 1.0)
    report(1, ok, f"a*={sol.a_star:.6f}, b*={sol.b_star:.6f}, solved in {elapsed:.3f}s")


def test_criterion_2_gap_equation_consistency(params, solution):
    r = char_roots(params)
    h = solution.b_star - solution.a_star
    residual = (params.phi * (r.S2 - r.S1)
                + r.S1 * math.exp(-r.S2 * h) - r.S2 * math.exp(-r.S1 * h))
    ok = abs(residual) <= 1e-8
    report(2, ok, f"|H(b*-a*)| = {abs(residual):.3e} <= 1e-8")


def test_criterion_3_smooth_fit_suite(params, band_param_samples):
    worst = {"slope_a": 0.0, "slope_b": 0.0, "curv_b": 0.0, "curv_gap_a": 0.0}
    for p in [params] + band_param_samples:
        sol = solve(p)
        coef = sol.coeffs
        a, b = sol.a_star, sol.b_star
        worst["slope_a"] = max(worst["slope_a"], abs(coef.upper(a, 1) - p.phi))
        worst["slope_b"] = max(worst["slope_b"], abs(coef.upper(b, 1) - 1.0))
        worst["curv_b"] = max(worst["curv_b"], abs(coef.upper(b, 2)))
        worst["curv_gap_a"] = max(worst["curv_gap_a"],
                                  abs(coef.lower(a, 2) - coef.upper(a, 2)))
    ok = (worst["slope_a"] <= 1e-8 and worst["slope_b"] <= 1e-8
          and worst["curv_b"] <= 1e-6 and worst["curv_gap_a"] <= 1e-6)
    report(3, ok, "worst over 21 parameter sets: "
           + ", ".join(f"{k}={v:.2e}" for k, v in worst.items()))


def test_criterion_4_hjb_residual_grid(params, solution, value_fn):
    b_star = solution.b_star
    xs = np.linspace(0.0, 2.0 * b_star, 4096)
    part1, part2 = hjb.hjb_residual(value_fn, xs, params)
    on_band = xs <= b_star

    drift_violation = float(np.max(np.abs(part1[on_band])))
    payout_violation = float(np.max(np.abs(part2[~on_band])))
    inactive_drift = float(np.max(part1[~on_band]))    # must stay negative
    inactive_payout = float(np.max(part2[on_band]))    # must stay non-positive

    slope_err = 0.0
    h = 1e-4
    for x in xs[~on_band][8::16]:
        x = float(x)
        up, _ = hjb.hjb_residual(value_fn, x + h, params)
        dn, _ = hjb.hjb_residual(value_fn, x - h, params)
        expect = (math.exp((b_star - x) * params.alpha) - 1.0) * params.delta
        slope_err = max(slope_err, abs((up - dn) / (2.0 * h) - expect))

    ok = (drift_violation <= 1e-6 and payout_violation <= 1e-6
          and inactive_drift < 0.0 and inactive_payout <= 1e-12
          and slope_err <= 1e-6)
    report(4, ok,
           f"drift resid {drift_violation:.2e}, payout resid {payout_violation:.2e}, "
           f"inactive drift max {inactive_drift:.2e}, slope err {slope_err:.2e}")


def test_criterion_5_regime_limits(params):
    # merged band at unit funding cost
    merged = solve(make_params(phi=1.0))
    merged_ok = (merged.a_star == merged.b_star
                 and abs(merged_curvature(merged.a_star, merged.params)) <= 1e-8)

    # expensive funding returns the pure barrier solution
    rich = make_params(phi=14.0)
    rich_sol = solve(rich)
    xs = np.linspace(0.0, 2.0 * rich_sol.b_star, 2000)
    diff = np.max(np.abs(band.eval(rich_sol, xs)
                         - classical_value(rich, xs, optimal_barrier(rich))[0]))
    classical_ok = (rich_sol.a_star == 0.0 and diff <= 1e-9)

    # degenerate parameters give the exact linear value
    lin = make_params(c=1.0, lam=1.0, alpha=1.0, delta=1.0)
    lin_sol = solve(lin)
    lin_ok = all(band.eval(lin_sol, x) == x + 0.5 for x in (0.0, 1.0, 2.5, 10.0))

    ok = merged_ok and classical_ok and lin_ok
    report(5, ok, f"merged a*=b*={merged.a_star:.4f}, "
           f"barrier max|V-classical|={diff:.2e}, linear exact={lin_ok}")


def test_criterion_6_funding_cost_sweep(params):
    t0 = time.perf_counter()
    phi_max = solve(params).phi_max
    phis = np.linspace(1.0, phi_max + 2.0, 50)
    a_list, b_list = [], []
    for phi in phis:
        sol = solve(make_params(phi=float(phi)))
        a_list.append(sol.a_star)
        b_list.append(sol.b_star)
    elapsed = time.perf_counter() - t0

    a_arr, b_arr = np.array(a_list), np.array(b_list)
    inside = phis <= phi_max
    monotone = (np.all(np.diff(a_arr) <= 1e-9)
                and np.all(np.diff(b_arr[inside]) >= -1e-9))
    beyond = ~inside
    b_tilde = optimal_barrier(params)
    constant_beyond = (np.all(a_arr[beyond] == 0.0)
                       and np.all(np.abs(b_arr[beyond] - b_tilde) <= 1e-12))
    merged_at_one = a_arr[0] == b_arr[0]
    ok = monotone and constant_beyond and merged_at_one and elapsed < 30.0
    report(6, ok, f"50-point sweep in {elapsed:.2f}s; monotone={monotone}, "
           f"flat beyond threshold={constant_beyond}, a*(1)=b*(1)={merged_at_one}")


def test_criterion_7_monte_carlo_cross_validation(params, solution, value_fn):
    t0 = time.perf_counter()
    optimal = StrategySpec(a=solution.a_star, b=solution.b_star)
    n, horizon = 100_000, 400.0

    worst_rel, details = 0.0, []
    optimal_at_a = None
    for i, x0 in enumerate((0.0, solution.a_star, solution.b_star)):
        cfg = SimConfig(x0=x0, n_paths=n, horizon=horizon, seed=1000 + i)
        est = estimate_value(optimal, cfg, params)
        target = float(value_fn.value(x0))
        gap = abs(est.mean - target)
        tol = max(3.0 * est.stderr, 0.01 * target)
        worst_rel = max(worst_rel, gap / tol)
        details.append(f"x0={x0:.2f}: |{est.mean:.3f}-{target:.3f}|<= {tol:.3f}")
        if x0 == solution.a_star:
            optimal_at_a = est
    value_ok = worst_rel <= 1.0

    perturbed_ok = True
    a, b = solution.a_star, solution.b_star
    for j, (pa, pb) in enumerate([(a + 0.5, b), (a - 0.5, b), (a, b + 0.5), (a, b - 0.5)]):
        cfg = SimConfig(x0=solution.a_star, n_paths=n, horizon=horizon, seed=2000 + j)
        est = estimate_value(StrategySpec(a=pa, b=pb), cfg, params)
        if est.mean > optimal_at_a.mean + 3.0 * optimal_at_a.stderr:
            perturbed_ok = False
    elapsed = time.perf_counter() - t0

    ok = value_ok and perturbed_ok and elapsed < 60.0
    report(7, ok, f"{'; '.join(details)}; perturbed dominated={perturbed_ok}; "
           f"{elapsed:.1f}s")


def test_criterion_8_policy_iteration(params, solution, value_fn):
    step = 0.02
    dist = ClaimDistribution.exponential(params.alpha)
    b_tilde = optimal_barrier(params)
    sols = iterate(dist, params, 10, step)

    at_zero = np.array([float(g(0.0)) for g in sols])
    ceiling = float(value_fn.value(0.0))
    monotone = bool(np.all(np.diff(at_zero) >= -1e-12))
    bounded = bool(np.all(at_zero <= 1.01 * ceiling))

    probe = np.array([0.0, b_tilde / 2.0, b_tilde])
    v0 = np.asarray(sols[0](probe))
    exact = classical_value(params, probe, b_tilde)[0]
    v0_err = float(np.max(np.abs(v0 - exact) / np.abs(exact)))
    barrier_gap = abs(sols[0].b - b_tilde)

    ok = monotone and bounded and v0_err <= 0.005 and barrier_gap <= 2.0 * step
    report(8, ok, f"V_n(0) monotone={monotone}, bounded={bounded}, "
           f"V_0 err {v0_err:.2%}, |best_b - no-funding barrier| = {barrier_gap:.3f}")


def test_criterion_9_oracle_equivalence(params, solution, value_fn):
    rng = np.random.default_rng(99)
    b_tilde = optimal_barrier(params)

    worst_resid = 0.0
    for _ in range(1000):
        a = rng.uniform(0.0, 1.2 * b_tilde)
        b = a + rng.uniform(0.0, 1.2 * b_tilde)
        probe = band.BandSolution(
            params=params, regime=solution.regime, a_star=a, b_star=b,
            coeffs=assemble_coefficients(a, b, params),
            b_tilde=b_tilde, phi_max=solution.phi_max, h_bar=b - a)
        x = rng.uniform(0.0, b)
        r5, r6 = band.ide_residual(probe, x)
        for r in (r5, r6):
            if not math.isnan(r):
                worst_resid = max(worst_resid, abs(r))
    resid_ok = worst_resid <= 1e-9

    r = char_roots(params)
    a, b, phi = solution.a_star, solution.b_star, params.phi
    s1, s2 = r.S1, r.S2
    b1_closed = s2 * phi * math.exp(b * s2) / (
        s1 * s2 * math.exp(a * s1 + b * s2) - s1**2 * math.exp(a * s2 + b * s1))
    b2_closed = s1 * phi * math.exp(b * s1) / (
        s1 * s2 * math.exp(a * s2 + b * s1) - s2**2 * math.exp(a * s1 + b * s2))
    coef_err = max(abs(solution.coeffs.B1 - b1_closed) / abs(b1_closed),
                   abs(solution.coeffs.B2 - b2_closed) / abs(b2_closed))
    coef_ok = coef_err <= 1e-8

    conv_err = 0.0
    for x in rng.uniform(0.0, 2.0 * b, 100):
        x = float(x)
        closed = hjb.convolution_term(value_fn, x)
        pts = sorted({p for p in (x - b, x - a) if 0.0 < p < x})
        ref, _ = quad(lambda y: float(value_fn.value(x - y))
                      * params.alpha * np.exp(-params.alpha * y),
                      0.0, x, points=pts or None, limit=400,
                      epsabs=1e-12, epsrel=1e-12)
        conv_err = max(conv_err, abs(closed - params.lam * ref))
    conv_ok = conv_err <= 1e-8

    ok = resid_ok and coef_ok and conv_ok
    report(9, ok, f"max piece residual {worst_resid:.2e}, coefficient err "
           f"{coef_err:.2e}, convolution vs quadrature {conv_err:.2e}")
