"""Dynamic-programming verification of a constructed value function.

The optimality equation is a maximum of two branches: a drift branch

    c V'(x) - (lam+delta) V(x) + lam * (V * claim density)(x)
        + beta * sup_{f>=0} { V(x+f) - V(x) - phi f }

and a payout branch ``1 - V'(x)``.  A correct value function makes the
maximum zero everywhere: the drift branch vanishes below the barrier and
the payout branch vanishes beyond it.  The checks here evaluate both
branches in closed form on dense grids and audit the regularity
hypotheses (twice continuously differentiable, concave, positive,
slope at least one) that a direct verification argument needs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .band import PiecewiseValue, linear_integral, mode_integral
from .errors import NegativeX, NonConcave
from .risk_model import ModelParams, RegimeKind

HYPOTHESIS_GRID = 4096
C2_GAP_TOL = 1e-6
MARGIN_TOL = 1e-9


def _grid_span(V: PiecewiseValue) -> float:
    """Verification window: twice the barrier, or 10 mean claims when the
    payout-all solution has no barrier."""
    if V.b_star > 0.0:
        return 2.0 * V.b_star
    return 10.0 / V.params.alpha


def convolution_term(V: PiecewiseValue, x):
    """``lam * int_0^x V(x-y) alpha e^{-alpha y} dy`` in closed form.

    Each piece of V is an exponential-polynomial, so the convolution with
    the exponential claim density is a sum of elementary integrals; no
    quadrature is involved.  Accepts scalar or array ``x >= 0``.
    """
    p = V.params
    xa = np.asarray(x, dtype=float)
    if np.any(xa < 0.0):
        raise NegativeX("convolution requires x >= 0")
    total = np.zeros_like(xa)
    for lo, hi, modes, (p1, p0) in V.convolution_pieces():
        hi_eff = np.maximum(np.minimum(xa, hi), lo)
        for coef, w, anchor in modes:
            total = total + mode_integral(coef, w, anchor, p.alpha, lo, hi_eff, xa)
        if p1 != 0.0 or p0 != 0.0:
            total = total + linear_integral(p1, p0, p.alpha, lo, hi_eff, xa)
    out = p.lam * total
    return float(out) if out.ndim == 0 else out


def _assert_concave(V: PiecewiseValue, params: ModelParams, n: int = 257) -> None:
    xs = np.linspace(0.0, _grid_span(V), n)
    worst = float(np.max(V.value(xs, 2)))
    if worst > 1e-7:
        raise NonConcave(f"second derivative reaches {worst:.3e} > 1e-7 on the grid")


def funding_level(V: PiecewiseValue, params: ModelParams) -> float:
    """Largest surplus level at which the slope still exceeds ``phi``.

    For a concave V this is where an injection stops being worth its
    proportional cost; injections always refill exactly to this level.
    """
    phi = params.phi
    if V.value(0.0, 1) <= phi:
        return 0.0
    lo, hi = 0.0, max(V.b_star, 1e-12)
    for _ in range(200):
        if hi - lo <= 1e-15 * max(1.0, hi):
            break
        mid = 0.5 * (lo + hi)
        if V.value(mid, 1) > phi:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def funding_sup(V: PiecewiseValue, x, params: ModelParams):
    """Value and maximizer of ``sup_{f>=0} { V(x+f) - V(x) - phi f }``.

    Exploits concavity: the supremum is attained at ``f* = (a_phi - x)^+``
    where ``a_phi`` solves ``V'(a_phi) = phi``, and is zero wherever the
    local slope is already at most ``phi``.
    """
    _assert_concave(V, params)
    a_phi = funding_level(V, params)
    xa = np.asarray(x, dtype=float)
    if np.any(xa < 0.0):
        raise NegativeX("funding supremum requires x >= 0")
    dv = np.asarray(V.value(xa, 1))
    f_star = np.where(dv > params.phi, np.maximum(a_phi - xa, 0.0), 0.0)
    v_top = V.value(a_phi, 0)
    sup = np.where(f_star > 0.0,
                   v_top - np.asarray(V.value(xa, 0)) - params.phi * f_star,
                   0.0)
    if xa.ndim == 0:
        return float(sup), float(f_star)
    return sup, f_star


def hjb_residual(V: PiecewiseValue, x, params: ModelParams):
    """Both branches of the optimality equation at ``x`` (scalar or array).

    Returns ``(part1, part2)`` with ``part1`` the drift branch and
    ``part2 = 1 - V'(x)``; a valid solution has ``max(part1, part2) = 0``
    up to the residual tolerance, with ``part1 = 0`` on ``[0, b*]`` and
    ``part2 = 0`` beyond.
    """
    xa = np.asarray(x, dtype=float)
    if np.any(xa < 0.0):
        raise NegativeX("residual requires x >= 0")
    sup, _ = funding_sup(V, xa, params)
    dv = np.asarray(V.value(xa, 1))
    val = np.asarray(V.value(xa, 0))
    conv = np.asarray(convolution_term(V, xa))
    part1 = params.c * dv - (params.lam + params.delta) * val + conv + params.beta * sup
    part2 = 1.0 - dv
    if xa.ndim == 0:
        return float(part1), float(part2)
    return part1, part2


@dataclass(frozen=True)
class HypothesisCheck:
    name: str
    value: float
    threshold: float
    passed: bool


@dataclass(frozen=True)
class HypothesisReport:
    """Outcome of the regularity and optimality-equation audit.

    The report is always produced in full; callers decide what a failure
    means for them.
    """

    checks: list[HypothesisCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> HypothesisCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def _joint_gaps(V: PiecewiseValue):
    """One-sided mismatches of V, V', V'' at the interior joints."""
    sol = V.solution
    gaps = []
    if sol.regime.kind is RegimeKind.PAYOUT_ALL:
        return gaps
    coef = sol.coeffs
    a, b = sol.a_star, sol.b_star
    vb = V.terminal_value
    if 0.0 < a < b:
        for order, short in ((0, "value"), (1, "slope"), (2, "curvature")):
            gaps.append((f"c2_{short}_gap_at_a",
                         abs(coef.lower(a, order) - coef.upper(a, order))))
    edge = coef.lower if a == b else coef.upper
    linear = {0: vb, 1: 1.0, 2: 0.0}
    for order, short in ((0, "value"), (1, "slope"), (2, "curvature")):
        gaps.append((f"c2_{short}_gap_at_b",
                     abs(edge(b, order) - linear[order])))
    return gaps


def hypothesis_report(V: PiecewiseValue, params: ModelParams,
                      n: int = HYPOTHESIS_GRID) -> HypothesisReport:
    """Audit the verification hypotheses on a dense grid.

    Checks: twice-continuous differentiability at the joints, concavity,
    slope at least one, the linear lower bound ``x + c/(lam+delta)``,
    positivity down to ``c/(lam+delta)``, and the optimality equation
    itself (``max`` of the two branches within the residual tolerance).
    """
    xs = np.linspace(0.0, _grid_span(V), n)
    checks: list[HypothesisCheck] = []

    for name, gap in _joint_gaps(V):
        checks.append(HypothesisCheck(name, gap, C2_GAP_TOL, gap <= C2_GAP_TOL))

    val = np.asarray(V.value(xs, 0))
    dv = np.asarray(V.value(xs, 1))
    d2v = np.asarray(V.value(xs, 2))
    floor = params.c / (params.lam + params.delta)

    margin_checks = [
        ("concavity_min", float(np.min(-d2v))),
        ("slope_margin", float(np.min(dv - 1.0))),
        ("lower_bound_margin", float(np.min(val - xs - floor))),
        ("positivity_margin", float(np.min(val - floor))),
    ]
    for name, value in margin_checks:
        checks.append(HypothesisCheck(name, value, -MARGIN_TOL, value >= -MARGIN_TOL))

    part1, part2 = hjb_residual(V, xs, params)
    worst = float(np.max(np.abs(np.maximum(part1, part2))))
    checks.append(HypothesisCheck("hjb_max_violation", worst, params.tol_residual,
                                  worst <= params.tol_residual))
    return HypothesisReport(checks)


def residual_summary(V: PiecewiseValue, params: ModelParams,
                     n: int = HYPOTHESIS_GRID) -> dict:
    """Branch-pattern summary on the verification grid.

    Reports the worst drift-branch residual below the barrier, the payout
    branch everywhere, sign violations of the inactive branches, and the
    overall ``max(part1, part2)`` magnitude.
    """
    xs = np.linspace(0.0, _grid_span(V), n)
    part1, part2 = hjb_residual(V, xs, params)
    on_band = xs <= V.b_star
    return {
        "max_abs_part1_on_band": float(np.max(np.abs(part1[on_band]))) if on_band.any() else 0.0,
        "max_part2_on_band": float(np.max(part2[on_band])) if on_band.any() else 0.0,
        "max_part1_beyond": float(np.max(part1[~on_band])) if (~on_band).any() else -math.inf,
        "max_abs_part2_beyond": float(np.max(np.abs(part2[~on_band]))) if (~on_band).any() else 0.0,
        "max_abs_hjb": float(np.max(np.abs(np.maximum(part1, part2)))),
    }


def verification_table(V: PiecewiseValue, params: ModelParams,
                       n: int = 1001, span: float | None = None) -> dict:
    """Column arrays (x, V, dV, d2V, part1, part2) for report emission."""
    xs = np.linspace(0.0, span if span is not None else _grid_span(V), n)
    part1, part2 = hjb_residual(V, xs, params)
    return {
        "x": xs,
        "V": np.asarray(V.value(xs, 0)),
        "dV": np.asarray(V.value(xs, 1)),
        "d2V": np.asarray(V.value(xs, 2)),
        "hjb_part1": part1,
        "hjb_part2": part2,
    }
