"""Model parameters, characteristic exponents and regime classification.

The controlled surplus earns premiums at rate ``c``, pays compound-Poisson
claims (intensity ``lam``, exponential sizes with rate ``alpha``), may be
topped up at investor arrival times (intensity ``beta``) at proportional
cost ``phi`` per unit injected, and future cash flows are discounted at
rate ``delta``.  Which of the four qualitative strategy shapes is optimal
depends only on these six constants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Optional

from .errors import (
    DegenerateRegime,
    MissingKey,
    NegativeBeta,
    NonPositiveRate,
    ParseError,
    PhiBelowOne,
)

MODEL_KEYS = ("c", "lambda", "alpha", "beta", "delta", "phi")
OPTIONAL_KEYS = ("tol_root", "tol_residual")


@dataclass(frozen=True)
class ModelParams:
    """The six model constants plus shared solver tolerances.

    ``mu`` (the mean claim size) is always derived as ``1/alpha`` and never
    stored separately.
    """

    c: float
    lam: float
    alpha: float
    beta: float
    delta: float
    phi: float
    tol_root: float = 1e-12
    tol_residual: float = 1e-6

    @property
    def mu(self) -> float:
        return 1.0 / self.alpha

    def payout_all(self) -> bool:
        """True when paying the whole reserve out immediately is optimal."""
        return (self.delta + self.lam) ** 2 >= self.c * self.alpha * self.lam


class RegimeKind(Enum):
    PAYOUT_ALL = "PayoutAll"
    CLASSICAL_BARRIER = "ClassicalBarrier"
    MERGED_BAND = "MergedBand"
    BAND = "Band"


@dataclass(frozen=True)
class Regime:
    """Regime tag with the thresholds that delimit it (when defined)."""

    kind: RegimeKind
    b_tilde: Optional[float] = None
    phi_max: Optional[float] = None


@dataclass(frozen=True)
class CharRoots:
    """Characteristic exponents of the exponential ansatz.

    ``S1 < 0 < S2`` solve ``c*S - (delta+lam) + alpha*lam/(alpha+S) = 0``;
    ``R1 < 0 < R2`` solve the same equation with ``delta+lam`` replaced by
    ``delta+lam+beta``.  Multiplying through by ``(alpha+S)`` turns each
    into a quadratic with a negative root product, so the sign pattern is
    guaranteed.
    """

    S1: float
    S2: float
    R1: float
    R2: float


def validate_params(raw: Mapping[str, float]) -> ModelParams:
    """Validate a mapping of named scalars into a ModelParams record."""
    missing = [k for k in MODEL_KEYS if k not in raw]
    if missing:
        raise MissingKey(f"missing model parameter(s): {', '.join(missing)}")
    unknown = [k for k in raw if k not in MODEL_KEYS + OPTIONAL_KEYS]
    if unknown:
        raise ParseError(f"unknown model parameter(s): {', '.join(unknown)}")

    vals = {k: float(raw[k]) for k in raw}
    for key in ("c", "lambda", "alpha", "delta"):
        if not vals[key] > 0.0:
            raise NonPositiveRate(f"{key} must be > 0, got {vals[key]}")
    if vals["beta"] < 0.0:
        raise NegativeBeta(f"beta must be >= 0, got {vals['beta']}")
    if vals["phi"] < 1.0:
        raise PhiBelowOne(f"phi must be >= 1, got {vals['phi']}")
    for key in OPTIONAL_KEYS:
        if key in vals and not vals[key] > 0.0:
            raise NonPositiveRate(f"{key} must be > 0, got {vals[key]}")

    return ModelParams(
        c=vals["c"],
        lam=vals["lambda"],
        alpha=vals["alpha"],
        beta=vals["beta"],
        delta=vals["delta"],
        phi=vals["phi"],
        tol_root=vals.get("tol_root", 1e-12),
        tol_residual=vals.get("tol_residual", 1e-6),
    )


def _stable_quadratic(a: float, b: float, cc: float) -> tuple[float, float]:
    """Both real roots of a*x^2 + b*x + cc = 0, cancellation-free, ordered."""
    disc = b * b - 4.0 * a * cc
    if disc < 0.0:
        raise ArithmeticError("negative discriminant in characteristic quadratic")
    q = -0.5 * (b + math.copysign(math.sqrt(disc), b if b != 0.0 else 1.0))
    r1, r2 = q / a, (cc / q if q != 0.0 else 0.0)
    return (r1, r2) if r1 < r2 else (r2, r1)


def char_roots(params: ModelParams) -> CharRoots:
    """Characteristic exponents from the closed-form quadratic formula.

    The S-quadratic is ``c*S^2 + (c*alpha - delta - lam)*S - alpha*delta``;
    the R-quadratic additionally subtracts ``beta`` from the linear
    coefficient and uses ``alpha*(delta+beta)`` as the constant.  Root
    products are negative, so each pair straddles zero.
    """
    c, lam, alpha, beta, delta = params.c, params.lam, params.alpha, params.beta, params.delta
    s1, s2 = _stable_quadratic(c, c * alpha - delta - lam, -alpha * delta)
    r1, r2 = _stable_quadratic(c, c * alpha - delta - lam - beta, -alpha * (delta + beta))
    return CharRoots(S1=s1, S2=s2, R1=r1, R2=r2)


def classify_regime(params: ModelParams) -> Regime:
    """Decide which of the four optimal-strategy shapes applies.

    Ties are resolved toward the simpler regime: equality in
    ``(delta+lam)^2 >= c*alpha*lam`` classifies as PayoutAll, and
    ``phi == phi_max`` classifies as ClassicalBarrier.
    """
    if params.payout_all():
        return Regime(RegimeKind.PAYOUT_ALL)

    # non-degenerate parameters necessarily satisfy c*alpha > delta + lam
    if not params.c * params.alpha > params.delta + params.lam:
        raise DegenerateRegime(
            "inconsistent regime: (delta+lam)^2 < c*alpha*lam should imply "
            "c*alpha > delta+lam"
        )

    from .classical import optimal_barrier, phi_threshold  # deferred: avoids import cycle

    b_tilde = optimal_barrier(params)
    phi_max = phi_threshold(params)
    if params.phi >= phi_max:
        kind = RegimeKind.CLASSICAL_BARRIER
    elif params.phi == 1.0:
        kind = RegimeKind.MERGED_BAND
    else:
        kind = RegimeKind.BAND
    return Regime(kind, b_tilde=b_tilde, phi_max=phi_max)
