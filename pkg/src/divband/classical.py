"""Closed-form solution of the pure dividend-barrier problem (no funding used).

The scale function ``h(x) = e^{S1 x}(S1+alpha) - e^{S2 x}(S2+alpha)`` solves
the dividend integro-differential equation; the optimal barrier is the
inflection point of ``h`` and the value below the barrier is ``h(x)/h'(b)``.
These closed forms also provide the threshold ``phi_max`` above which extra
funding is never worth its cost.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateRegime, NegativeX
from .risk_model import CharRoots, ModelParams, char_roots


def h_eval(params: ModelParams, x, order: int = 0, roots: CharRoots | None = None):
    """Scale function ``h`` or one of its first two derivatives at ``x``.

    ``h^(k)(x) = S1^k e^{S1 x}(S1+alpha) - S2^k e^{S2 x}(S2+alpha)``.
    Accepts scalar or array ``x >= 0``.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x < 0.0):
        raise NegativeX("h_eval requires x >= 0")
    if order not in (0, 1, 2):
        raise ValueError("order must be 0, 1 or 2")
    r = roots or char_roots(params)
    a = params.alpha
    out = (r.S1**order * np.exp(r.S1 * x) * (r.S1 + a)
           - r.S2**order * np.exp(r.S2 * x) * (r.S2 + a))
    return float(out) if out.ndim == 0 else out


def optimal_barrier(params: ModelParams, roots: CharRoots | None = None) -> float:
    """Barrier level at which the scale function has zero curvature.

    ``b_tilde = ln(S2^2 (S2+alpha) / (S1^2 (S1+alpha))) / (S1 - S2)``.
    Only defined when ``(delta+lam)^2 < c*alpha*lam``.
    """
    if params.payout_all():
        raise DegenerateRegime("no positive barrier: (delta+lam)^2 >= c*alpha*lam")
    r = roots or char_roots(params)
    a = params.alpha
    ratio = r.S2**2 * (r.S2 + a) / (r.S1**2 * (r.S1 + a))
    return math.log(ratio) / (r.S1 - r.S2)


def classical_value(params: ModelParams, x, b: float, roots: CharRoots | None = None):
    """Value triple ``(V, V', V'')`` of the barrier strategy at level ``b``.

    Below the barrier the value is ``h(x)/h'(b)``; beyond it every extra
    unit of surplus is paid out immediately, so the extension is linear
    with unit slope and zero curvature.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x < 0.0):
        raise NegativeX("classical_value requires x >= 0")
    if b < 0.0:
        raise NegativeX("classical_value requires b >= 0")
    r = roots or char_roots(params)
    hp_b = h_eval(params, b, 1, r)
    inside = x <= b
    xi = np.where(inside, x, b)
    v = np.where(inside, h_eval(params, xi, 0, r) / hp_b,
                 x - b + h_eval(params, b, 0, r) / hp_b)
    dv = np.where(inside, h_eval(params, xi, 1, r) / hp_b, 1.0)
    d2v = np.where(inside, h_eval(params, xi, 2, r) / hp_b, 0.0)
    if v.ndim == 0:
        return float(v), float(dv), float(d2v)
    return v, dv, d2v


def phi_threshold(params: ModelParams, roots: CharRoots | None = None) -> float:
    """Largest funding cost at which funding is still used: ``V'(0)`` of the
    optimal barrier strategy.

    The production path is ``h'(0)/h'(b_tilde)``.  An equivalent explicit
    form written with exponent ratios of the roots is evaluated as a
    self-check; disagreement indicates a root-finding defect.
    """
    if params.payout_all():
        raise DegenerateRegime("phi threshold undefined: (delta+lam)^2 >= c*alpha*lam")
    r = roots or char_roots(params)
    b_tilde = optimal_barrier(params, r)
    value = h_eval(params, 0.0, 1, r) / h_eval(params, b_tilde, 1, r)

    a = params.alpha
    ratio = r.S2**2 * (a + r.S2) / (r.S1**2 * (a + r.S1))
    explicit = ((r.S1 - r.S2) * (a + r.S1 + r.S2)
                / (r.S1 * (a + r.S1) * ratio ** (r.S1 / (r.S1 - r.S2))
                   - r.S2 * (a + r.S2) * ratio ** (r.S2 / (r.S1 - r.S2))))
    if not math.isfinite(explicit) or abs(explicit - value) > 1e-8 * abs(value):
        raise ArithmeticError(
            f"phi threshold self-check failed: {value} vs explicit {explicit}"
        )
    return value


@dataclass(frozen=True)
class ClassicalSolution:
    """Barrier solution bundle: level, normalizer and evaluation handles.

    With this sign convention ``h`` and ``h'`` are both negative on
    ``[0, inf)``, so the normalizer is negative too; the value ratios it
    enters are positive.
    """

    params: ModelParams
    roots: CharRoots
    b_tilde: float
    normalizer: float  # h'(b_tilde), nonzero

    def value(self, x, order: int = 0):
        v, dv, d2v = classical_value(self.params, x, self.b_tilde, self.roots)
        return (v, dv, d2v)[order]


def classical_solution(params: ModelParams) -> ClassicalSolution:
    roots = char_roots(params)
    b_tilde = optimal_barrier(params, roots)
    return ClassicalSolution(
        params=params,
        roots=roots,
        b_tilde=b_tilde,
        normalizer=h_eval(params, b_tilde, 1, roots),
    )
