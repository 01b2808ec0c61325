"""Two-level band strategies: coefficient system, smooth-fit roots, dispatcher.

A band strategy holds two levels ``0 <= a <= b``: dividends keep the surplus
at or below the barrier ``b``, and whenever an investor arrives while the
surplus is below ``a`` it is topped up exactly to ``a``.  The value of such
a strategy is piecewise exponential-polynomial,

    V_l(x) = A1 e^{R1 x} + A2 e^{R2 x} + A3 x + A4     on [0, a],
    V_u(x) = B1 e^{S1 x} + B2 e^{S2 x}                 on [a, b],
    V(x)   = x - b + V(b)                              beyond b,

and the optimal ``(a*, b*)`` is pinned down by second-order smooth fit:
zero curvature at ``b*`` and matching curvatures (equivalently slope
``phi``) at ``a*``.

Internally the exponential modes are anchored at the nearest interval
endpoint (``A2`` at ``a``, ``B1``/``B2`` at ``b``) so that the linear
system and all evaluations stay well-scaled even for very large levels;
the conventional coefficients are exposed as properties.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import (
    BracketFailure,
    NegativeGap,
    NegativeX,
    NoSignChange,
    OutOfDomain,
    PostconditionFailure,
    RegimeMismatch,
    SingularSystem,
)
from .risk_model import (
    CharRoots,
    ModelParams,
    Regime,
    RegimeKind,
    char_roots,
    classify_regime,
)

logger = logging.getLogger(__name__)

COND_LIMIT = 1e14
SCAN_STEP_FRACTION = 0.01   # scan step for smooth-fit roots, in units of b_tilde
SCAN_RANGE_FACTOR = 50.0    # hard cap for the geometric bracket expansion


# ---------------------------------------------------------------------------
# closed-form integrals of exponential-polynomial pieces against the claim
# density, shared with the verification module
# ---------------------------------------------------------------------------

def mode_integral(coef, w, anchor, alpha, lo, hi, x):
    """``coef * int_lo^hi e^{w(u-anchor)} alpha e^{alpha(u-x)} du``.

    The two exponents are combined before exponentiation so the result is
    stable even when ``e^{w u}`` alone would overflow.
    """
    return coef * alpha * (
        np.exp(w * (hi - anchor) + alpha * (hi - x))
        - np.exp(w * (lo - anchor) + alpha * (lo - x))
    ) / (w + alpha)


def linear_integral(p1, p0, alpha, lo, hi, x):
    """``int_lo^hi (p1 u + p0) alpha e^{alpha(u-x)} du``."""
    hi_t = np.exp(alpha * (hi - x)) * (p1 * hi + p0 - p1 / alpha)
    lo_t = np.exp(alpha * (lo - x)) * (p1 * lo + p0 - p1 / alpha)
    return hi_t - lo_t


# ---------------------------------------------------------------------------
# coefficient container
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BandCoefficients:
    """Solved coefficients of the two pieces for a given level pair ``(a, b)``.

    ``A2_at_a = A2 e^{R2 a}`` and ``Bj_at_b = Bj e^{Sj b}`` are the anchored
    forms used for evaluation; ``A3 = beta*phi/(delta+beta)`` is forced by
    matching the linear term of the lower-piece equation.
    """

    a: float
    b: float
    A1: float
    A2_at_a: float
    A3: float
    A4: float
    B1_at_b: float
    B2_at_b: float
    roots: CharRoots
    cond: float

    @property
    def A2(self) -> float:
        return self.A2_at_a * math.exp(-self.roots.R2 * self.a)

    @property
    def B1(self) -> float:
        return self.B1_at_b * math.exp(-self.roots.S1 * self.b)

    @property
    def B2(self) -> float:
        return self.B2_at_b * math.exp(-self.roots.S2 * self.b)

    def lower(self, x, order: int = 0):
        """Lower piece ``V_l`` (or derivative) -- valid on [0, a]."""
        x = np.asarray(x, dtype=float)
        r = self.roots
        out = (self.A1 * r.R1**order * np.exp(r.R1 * x)
               + self.A2_at_a * r.R2**order * np.exp(r.R2 * (x - self.a)))
        if order == 0:
            out = out + self.A3 * x + self.A4
        elif order == 1:
            out = out + self.A3
        return float(out) if out.ndim == 0 else out

    def upper(self, x, order: int = 0):
        """Upper piece ``V_u`` (or derivative) -- valid on [a, b]."""
        x = np.asarray(x, dtype=float)
        r = self.roots
        out = (self.B1_at_b * r.S1**order * np.exp(r.S1 * (x - self.b))
               + self.B2_at_b * r.S2**order * np.exp(r.S2 * (x - self.b)))
        return float(out) if out.ndim == 0 else out


def _band_system(a: float, b: float, params: ModelParams, roots: CharRoots):
    """The five linear equations in the anchored unknowns.

    Unknown order: (A1, A2_at_a, A4, B1_at_b, B2_at_b).  The equations are
    obtained by substituting the ansatz into the two piece equations,
    evaluating all convolutions in closed form and collecting coefficients
    of the independent basis functions (the ``e^{R x}`` / ``e^{S x}``
    coefficients vanish identically by the characteristic equations):

      row 0: e^{-alpha x} coefficient of the lower-piece equation,
      row 1: constant coefficient of the lower-piece equation,
      row 2: e^{-alpha x} coefficient of the upper-piece equation,
             normalized by e^{-alpha a},
      row 3: value continuity V_l(a) = V_u(a),
      row 4: unit slope V_u'(b) = 1.
    """
    c, lam, alpha, beta, delta, phi = (
        params.c, params.lam, params.alpha, params.beta, params.delta, params.phi)
    R1, R2, S1, S2 = roots.R1, roots.R2, roots.S1, roots.S2
    gap = b - a
    A3 = beta * phi / (delta + beta)

    e_r1a = math.exp(R1 * a)
    e_ma = math.exp(-alpha * a)
    e_s1g = math.exp(-S1 * gap)
    e_s2g = math.exp(-S2 * gap)

    mat = np.array([
        [alpha / (alpha + R1), alpha / (alpha + R2) * math.exp(-R2 * a), 1.0, 0.0, 0.0],
        [beta * e_r1a, beta, -delta, 0.0, 0.0],
        [(e_r1a - e_ma) / (alpha + R1),
         (1.0 - math.exp(-(alpha + R2) * a)) / (alpha + R2),
         (1.0 - e_ma) / alpha,
         -e_s1g / (alpha + S1),
         -e_s2g / (alpha + S2)],
        [e_r1a, 1.0, 1.0, -e_s1g, -e_s2g],
        [0.0, 0.0, 0.0, S1, S2],
    ])
    rhs = np.array([
        A3 / alpha,
        beta * phi * delta * a / (delta + beta) - (c - lam / alpha) * A3,
        -A3 * ((alpha * a - 1.0) + e_ma) / alpha**2,
        -A3 * a,
        1.0,
    ])
    return mat, rhs, A3


def assemble_coefficients(a: float, b: float, params: ModelParams,
                          roots: CharRoots | None = None) -> BandCoefficients:
    """Solve the five-equation coefficient system for the level pair ``(a, b)``."""
    if a < 0.0:
        raise NegativeX("levels must satisfy a >= 0")
    if a > b:
        raise NegativeGap(f"funding level above barrier: a={a} > b={b}")
    r = roots or char_roots(params)
    try:
        mat, rhs, A3 = _band_system(a, b, params, r)
    except OverflowError:
        raise SingularSystem(
            f"coefficient system overflows at (a={a}, b={b})") from None
    cond = float(np.linalg.cond(mat))
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise SingularSystem(
            f"coefficient system is degenerate at (a={a}, b={b}): cond={cond:.3e}")
    sol = np.linalg.solve(mat, rhs)
    return BandCoefficients(
        a=a, b=b,
        A1=float(sol[0]), A2_at_a=float(sol[1]), A3=A3, A4=float(sol[2]),
        B1_at_b=float(sol[3]), B2_at_b=float(sol[4]),
        roots=r, cond=cond,
    )


def _merged_system(a: float, params: ModelParams, roots: CharRoots):
    """Linear system for the merged case a = b (unknowns A1, A2_at_a, A4).

    The upper piece disappears; the remaining conditions are the two basis
    coefficients of the lower-piece equation plus unit slope at ``a``.
    """
    c, lam, alpha, beta, delta, phi = (
        params.c, params.lam, params.alpha, params.beta, params.delta, params.phi)
    R1, R2 = roots.R1, roots.R2
    A3 = beta * phi / (delta + beta)
    e_r1a = math.exp(R1 * a)
    mat = np.array([
        [alpha / (alpha + R1), alpha / (alpha + R2) * math.exp(-R2 * a), 1.0],
        [beta * e_r1a, beta, -delta],
        [R1 * e_r1a, R2, 0.0],
    ])
    rhs = np.array([
        A3 / alpha,
        beta * phi * delta * a / (delta + beta) - (c - lam / alpha) * A3,
        1.0 - A3,
    ])
    return mat, rhs, A3


def merged_coefficients(a: float, params: ModelParams,
                        roots: CharRoots | None = None) -> BandCoefficients:
    """Coefficients of the single lower piece when funding jumps straight to
    the dividend barrier (a = b)."""
    if a < 0.0:
        raise NegativeX("levels must satisfy a >= 0")
    r = roots or char_roots(params)
    mat, rhs, A3 = _merged_system(a, params, r)
    cond = float(np.linalg.cond(mat))
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise SingularSystem(f"merged system is degenerate at a={a}: cond={cond:.3e}")
    sol = np.linalg.solve(mat, rhs)
    return BandCoefficients(
        a=a, b=a,
        A1=float(sol[0]), A2_at_a=float(sol[1]), A3=A3, A4=float(sol[2]),
        B1_at_b=math.nan, B2_at_b=math.nan,
        roots=r, cond=cond,
    )


# ---------------------------------------------------------------------------
# smooth-fit roots
# ---------------------------------------------------------------------------

def gap_residual(h, params: ModelParams, roots: CharRoots | None = None):
    """Residual of the barrier-gap equation,
    ``H(h) = phi (S2-S1) + S1 e^{-S2 h} - S2 e^{-S1 h}``.

    ``H`` is strictly decreasing with ``H(0) = (phi-1)(S2-S1)``, so its
    unique root is the optimal gap ``b* - a*``.
    """
    r = roots or char_roots(params)
    return (params.phi * (r.S2 - r.S1)
            + r.S1 * np.exp(-r.S2 * np.asarray(h, dtype=float))
            - r.S2 * np.exp(-r.S1 * np.asarray(h, dtype=float)))


def gap_root(params: ModelParams, regime: Regime | None = None) -> float:
    """Unique gap ``h_bar = b* - a*`` solving the gap equation, by bisection
    on ``[0, b_tilde]``."""
    reg = regime or classify_regime(params)
    if reg.kind is not RegimeKind.BAND:
        raise RegimeMismatch(f"gap root requires the Band regime, got {reg.kind.value}")
    roots = char_roots(params)
    b_tilde = reg.b_tilde
    lo, hi = 0.0, b_tilde
    f_lo = float(gap_residual(lo, params, roots))
    f_hi = float(gap_residual(hi, params, roots))
    if not (f_lo > 0.0 and f_hi < 0.0):
        raise BracketFailure(
            f"gap bracket has wrong signs: H(0)={f_lo}, H(b_tilde)={f_hi}")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if hi - lo <= 1e-16 * max(1.0, b_tilde):
            break
        if float(gap_residual(mid, params, roots)) > 0.0:
            lo = mid
        else:
            hi = mid
    h_bar = 0.5 * (lo + hi)
    resid = abs(float(gap_residual(h_bar, params, roots)))
    if resid > 1e-10:
        raise PostconditionFailure(f"gap residual {resid} above 1e-10")
    return h_bar


def _upper_curvature_at_b(a: float, gap: float, params: ModelParams,
                          roots: CharRoots) -> float:
    """``V_u''(a+gap; a, a+gap)`` -- the function whose smallest positive
    root is the optimal lower level."""
    coef = assemble_coefficients(a, a + gap, params, roots)
    return coef.B1_at_b * roots.S1**2 + coef.B2_at_b * roots.S2**2


def merged_curvature(a: float, params: ModelParams,
                     roots: CharRoots | None = None) -> float:
    """``V_l''(a; a, a)`` under the unit-slope boundary condition (phi = 1)."""
    r = roots or char_roots(params)
    coef = merged_coefficients(a, params, r)
    return coef.lower(a, 2)


def _scan_and_bisect(fn, b_tilde: float, tol: float, what: str) -> float:
    """Smallest positive root of ``fn``: scan from 0 in steps of
    ``SCAN_STEP_FRACTION * b_tilde``, extend the range geometrically up to
    ``SCAN_RANGE_FACTOR * b_tilde``, then bisect the first bracket."""
    step = SCAN_STEP_FRACTION * b_tilde
    f_prev = fn(0.0)
    if f_prev >= 0.0:
        raise BracketFailure(f"{what}: expected a negative value at 0, got {f_prev}")

    a_prev = 0.0
    bound = b_tilde
    bracket = None
    while bracket is None:
        a_cur = a_prev
        while a_cur < bound:
            a_cur = min(a_cur + step, bound)
            f_cur = fn(a_cur)
            if f_cur >= 0.0:
                bracket = (a_prev, a_cur)
                break
            a_prev, f_prev = a_cur, f_cur
        if bracket is None:
            if bound >= SCAN_RANGE_FACTOR * b_tilde:
                raise NoSignChange(
                    f"{what}: no sign change up to {SCAN_RANGE_FACTOR:g} * b_tilde")
            bound = min(2.0 * bound, SCAN_RANGE_FACTOR * b_tilde)

    lo, hi = bracket
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if fn(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    root = 0.5 * (lo + hi)

    if logger.isEnabledFor(logging.DEBUG):
        extra = 0
        f_prev2 = fn(hi)
        a_cur = hi
        while a_cur < b_tilde:
            a_cur = min(a_cur + step, b_tilde)
            f_cur = fn(a_cur)
            if f_cur * f_prev2 < 0.0:
                extra += 1
            f_prev2 = f_cur
        if extra:
            logger.debug("%s: %d additional sign change(s) beyond the smallest root",
                         what, extra)
    return root


def lower_level(h_bar: float, params: ModelParams) -> float:
    """Smallest ``a > 0`` at which the upper-piece curvature at the barrier
    ``a + h_bar`` vanishes."""
    reg = classify_regime(params)
    if reg.kind is not RegimeKind.BAND:
        raise RegimeMismatch(f"lower level requires the Band regime, got {reg.kind.value}")
    roots = char_roots(params)
    return _scan_and_bisect(
        lambda a: _upper_curvature_at_b(a, h_bar, params, roots),
        reg.b_tilde, params.tol_root, "lower-level curvature scan")


def merged_level(params: ModelParams) -> float:
    """Smallest ``a > 0`` with vanishing lower-piece curvature when the
    funding target and the dividend barrier coincide (phi = 1)."""
    reg = classify_regime(params)
    if reg.kind is not RegimeKind.MERGED_BAND:
        raise RegimeMismatch(
            f"merged level requires the MergedBand regime, got {reg.kind.value}")
    roots = char_roots(params)
    return _scan_and_bisect(
        lambda a: merged_curvature(a, params, roots),
        reg.b_tilde, params.tol_root, "merged-level curvature scan")


# ---------------------------------------------------------------------------
# assembled solutions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BandSolution:
    """Optimal levels, regime tag, coefficients and diagnostics."""

    params: ModelParams
    regime: Regime
    a_star: float
    b_star: float
    coeffs: Optional[BandCoefficients]
    b_tilde: float
    phi_max: float
    h_bar: float


@dataclass(frozen=True)
class PiecewiseValue:
    """Evaluable value function assembled from a band solution."""

    solution: BandSolution

    @property
    def params(self) -> ModelParams:
        return self.solution.params

    @property
    def a_star(self) -> float:
        return self.solution.a_star

    @property
    def b_star(self) -> float:
        return self.solution.b_star

    @property
    def terminal_value(self) -> float:
        """V at the barrier, the anchor of the unit-slope extension."""
        sol = self.solution
        if sol.regime.kind is RegimeKind.PAYOUT_ALL:
            return sol.params.c / (sol.params.lam + sol.params.delta)
        if sol.regime.kind is RegimeKind.MERGED_BAND:
            return sol.coeffs.lower(sol.b_star)
        return sol.coeffs.upper(sol.b_star)

    def value(self, x, order: int = 0):
        """V, V' or V'' at ``x >= 0`` (scalar or array)."""
        sol = self.solution
        xa = np.asarray(x, dtype=float)
        if np.any(xa < 0.0):
            raise NegativeX("value function is defined for x >= 0")
        if order not in (0, 1, 2):
            raise ValueError("order must be 0, 1 or 2")

        if sol.regime.kind is RegimeKind.PAYOUT_ALL:
            base = sol.params.c / (sol.params.lam + sol.params.delta)
            out = {0: xa + base, 1: np.ones_like(xa), 2: np.zeros_like(xa)}[order]
            return float(out) if out.ndim == 0 else out

        a, b = sol.a_star, sol.b_star
        coef = sol.coeffs
        out = np.empty_like(xa)
        if a == b:
            low = xa <= a
        else:
            low = xa < a
        mid = (~low) & (xa <= b)
        top = xa > b
        if low.any():
            out[low] = coef.lower(xa[low], order)
        if mid.any():
            out[mid] = coef.upper(xa[mid], order)
        if top.any():
            if order == 0:
                out[top] = xa[top] - b + self.terminal_value
            else:
                out[top] = 1.0 if order == 1 else 0.0
        return float(out) if out.ndim == 0 else out

    def __call__(self, x, order: int = 0):
        return self.value(x, order)

    def convolution_pieces(self):
        """Piece descriptors for closed-form integration against the claim
        density: ``(lo, hi, [(coef, rate, anchor), ...], (p1, p0))``."""
        sol = self.solution
        if sol.regime.kind is RegimeKind.PAYOUT_ALL:
            base = sol.params.c / (sol.params.lam + sol.params.delta)
            return [(0.0, math.inf, [], (1.0, base))]
        a, b = sol.a_star, sol.b_star
        coef = sol.coeffs
        r = coef.roots
        pieces = []
        if a > 0.0 or a == b:
            pieces.append((0.0, a,
                           [(coef.A1, r.R1, 0.0), (coef.A2_at_a, r.R2, a)],
                           (coef.A3, coef.A4)))
        if b > a:
            pieces.append((a, b,
                           [(coef.B1_at_b, r.S1, b), (coef.B2_at_b, r.S2, b)],
                           (0.0, 0.0)))
        pieces.append((b, math.inf, [], (1.0, self.terminal_value - b)))
        return pieces


def piecewise_value(solution: BandSolution) -> PiecewiseValue:
    return PiecewiseValue(solution)


def eval(solution: BandSolution, x, order: int = 0):  # noqa: A001
    """Piecewise evaluation of V (order 0), V' (1) or V'' (2)."""
    return PiecewiseValue(solution).value(x, order)


def _check_postconditions(sol: BandSolution) -> None:
    kind = sol.regime.kind
    p = sol.params
    if kind is RegimeKind.PAYOUT_ALL:
        return
    checks = []
    if kind is RegimeKind.BAND:
        coef = sol.coeffs
        checks = [
            ("slope phi at a*", abs(coef.upper(sol.a_star, 1) - p.phi), 1e-8),
            ("unit slope at b*", abs(coef.upper(sol.b_star, 1) - 1.0), 1e-8),
            ("zero curvature at b*", abs(coef.upper(sol.b_star, 2)), 1e-6),
            ("curvature match at a*",
             abs(coef.lower(sol.a_star, 2) - coef.upper(sol.a_star, 2)), 1e-6),
            ("value continuity at a*",
             abs(coef.lower(sol.a_star) - coef.upper(sol.a_star)), 1e-8),
        ]
    elif kind is RegimeKind.MERGED_BAND:
        coef = sol.coeffs
        checks = [
            ("unit slope at a*", abs(coef.lower(sol.a_star, 1) - 1.0), 1e-8),
            ("zero curvature at a*", abs(coef.lower(sol.a_star, 2)), 1e-6),
        ]
    elif kind is RegimeKind.CLASSICAL_BARRIER:
        coef = sol.coeffs
        checks = [
            ("unit slope at b_tilde", abs(coef.upper(sol.b_star, 1) - 1.0), 1e-8),
            ("zero curvature at b_tilde", abs(coef.upper(sol.b_star, 2)), 1e-6),
        ]
    bad = [(name, gap, tol) for name, gap, tol in checks if not gap <= tol]
    if bad:
        raise PostconditionFailure(
            "; ".join(f"{name}: |gap|={gap:.3e} > {tol:g}" for name, gap, tol in bad))


def solve(params: ModelParams) -> BandSolution:
    """Optimal strategy and value function for the given parameters.

    Dispatches on the regime: a degenerate payout-all solution, the pure
    dividend barrier, the merged band (phi = 1) or the genuine two-level
    band, whose levels come from the gap equation and the curvature scan.
    """
    regime = classify_regime(params)
    kind = regime.kind

    if kind is RegimeKind.PAYOUT_ALL:
        sol = BandSolution(params, regime, 0.0, 0.0, None,
                           math.nan, math.nan, math.nan)
        return sol

    roots = char_roots(params)
    b_tilde, phi_max = regime.b_tilde, regime.phi_max

    if kind is RegimeKind.CLASSICAL_BARRIER:
        coeffs = assemble_coefficients(0.0, b_tilde, params, roots)
        sol = BandSolution(params, regime, 0.0, b_tilde, coeffs,
                           b_tilde, phi_max, b_tilde)
    elif kind is RegimeKind.MERGED_BAND:
        a_star = merged_level(params)
        coeffs = merged_coefficients(a_star, params, roots)
        sol = BandSolution(params, regime, a_star, a_star, coeffs,
                           b_tilde, phi_max, 0.0)
    else:
        h_bar = gap_root(params, regime)
        a_star = lower_level(h_bar, params)
        b_star = a_star + h_bar
        coeffs = assemble_coefficients(a_star, b_star, params, roots)
        sol = BandSolution(params, regime, a_star, b_star, coeffs,
                           b_tilde, phi_max, h_bar)

    _check_postconditions(sol)
    return sol


# ---------------------------------------------------------------------------
# residual oracle for the piece equations
# ---------------------------------------------------------------------------

def ide_residual(solution: BandSolution, x: float) -> tuple[float, float]:
    """Left-hand sides of the two piece equations at ``x``.

    Returns ``(r5, r6)`` where ``r5`` is the lower-piece residual (defined
    for ``x`` in ``[0, a*]``, NaN elsewhere) and ``r6`` the upper-piece
    residual (defined on ``[a*, b*]``).  All convolutions are evaluated in
    closed form, so for a correctly solved coefficient set both residuals
    are zero to rounding.
    """
    sol = solution
    if sol.regime.kind is RegimeKind.PAYOUT_ALL:
        raise RegimeMismatch("piece equations undefined in the PayoutAll regime")
    x = float(x)
    a, b = sol.a_star, sol.b_star
    if x < 0.0 or x > b:
        raise OutOfDomain(f"x={x} outside [0, b*]=[0, {b}]")

    p = sol.params
    c, lam, alpha, beta, delta, phi = p.c, p.lam, p.alpha, p.beta, p.delta, p.phi
    coef = sol.coeffs
    r = coef.roots

    def conv_lower(lo, hi, at):
        return (mode_integral(coef.A1, r.R1, 0.0, alpha, lo, hi, at)
                + mode_integral(coef.A2_at_a, r.R2, a, alpha, lo, hi, at)
                + linear_integral(coef.A3, coef.A4, alpha, lo, hi, at))

    r5 = math.nan
    if x <= a:
        r5 = float(c * coef.lower(x, 1) - (delta + lam) * coef.lower(x)
                   + lam * conv_lower(0.0, x, x)
                   + beta * (coef.lower(a) - coef.lower(x) - phi * (a - x)))

    r6 = math.nan
    if a <= x <= b and b > a:
        i_upper = (mode_integral(coef.B1_at_b, r.S1, b, alpha, a, x, x)
                   + mode_integral(coef.B2_at_b, r.S2, b, alpha, a, x, x))
        r6 = float(c * coef.upper(x, 1) - (delta + lam) * coef.upper(x)
                   + lam * (i_upper + conv_lower(0.0, a, x)))
    return r5, r6
