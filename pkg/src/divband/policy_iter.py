"""Grid-based value iteration with a capped number of funding opportunities.

``V_0`` is the pure dividend-barrier value for a general claim
distribution, obtained by integrating the drift equation forward on a
uniform grid.  Each further iterate allows one more funding opportunity:
the previous iterate yields the pointwise optimal injection and its gain,
which enters the next solve as an inhomogeneity.  Every iterate gets its
own barrier sweep.

The linear ODE structure is exploited twice: a solve for a given barrier
is a superposition of one homogeneous and one particular forward pass,
and one pair of passes on the widest grid serves every candidate barrier
in a sweep.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import EmptyRange, NonPositiveStep, UnstableIntegration
from .risk_model import ModelParams

Inhomogeneity = Optional[Callable[[np.ndarray], np.ndarray]]


@dataclass(frozen=True)
class ClaimDistribution:
    """Claim-size law on [0, inf): density, CDF and mean."""

    pdf: Callable[[np.ndarray], np.ndarray]
    cdf: Callable[[np.ndarray], np.ndarray]
    mean: float

    @classmethod
    def exponential(cls, alpha: float) -> "ClaimDistribution":
        if alpha <= 0.0:
            raise ValueError("exponential rate must be > 0")
        return cls(
            pdf=lambda y: alpha * np.exp(-alpha * np.asarray(y, dtype=float)),
            cdf=lambda y: 1.0 - np.exp(-alpha * np.asarray(y, dtype=float)),
            mean=1.0 / alpha,
        )

    def validate(self, tol: float = 1e-6) -> None:
        """Check F(0) = 0 and unit total density mass (fine trapezoid)."""
        if abs(float(self.cdf(0.0))) > tol:
            raise ValueError("claim distribution must satisfy F(0) = 0")
        span = 40.0 * self.mean
        ys = np.linspace(0.0, span, 200_001)
        mass = float(np.trapezoid(self.pdf(ys), ys))
        if abs(mass - 1.0) > tol:
            raise ValueError(f"claim density integrates to {mass}, not 1")


@dataclass(frozen=True)
class GridFn:
    """Grid value function with barrier ``b`` and unit-slope extension."""

    x: np.ndarray
    v: np.ndarray
    dv: np.ndarray
    b: float
    step: float

    def __call__(self, q):
        q = np.asarray(q, dtype=float)
        inside = np.interp(np.minimum(q, self.b), self.x, self.v)
        out = np.where(q <= self.b, inside, self.v[-1] + (q - self.b))
        return float(out) if out.ndim == 0 else out


def _forward_pass(dist: ClaimDistribution, params: ModelParams, n_steps: int,
                  step: float, g0: float, inh: np.ndarray | None,
                  kill_extra: float = 0.0):
    """Integrate ``c g' = (delta+lam+kill_extra) g - lam (g*f_Y) - inh`` from 0.

    ``kill_extra`` is the arrival rate of events that replace the current
    value by the inhomogeneity (funding opportunities); it is zero for the
    plain no-funding solve.  Trapezoidal (implicit) update for the
    derivative term and trapezoidal convolution; both second order, stable
    at the default step.
    """
    c, lam = params.c, params.lam
    kill = params.delta + lam + kill_extra
    g = np.zeros(n_steps + 1)
    gp = np.zeros(n_steps + 1)
    g[0] = g0
    fy = np.asarray(dist.pdf(step * np.arange(n_steps + 1)), dtype=float)
    if inh is None:
        inh = np.zeros(n_steps + 1)
    gp[0] = (kill * g0 - inh[0]) / c
    denom = 1.0 - 0.5 * step * kill / c + 0.25 * lam * step * step * fy[0] / c
    if denom <= 0.0:
        raise UnstableIntegration(f"step {step} too large for the implicit update")
    for j in range(n_steps):
        # trapezoid convolution at x_{j+1}, minus its implicit g_{j+1} term
        if j >= 1:
            partial = step * (np.dot(g[1:j + 1][::-1], fy[1:j + 1]) + 0.5 * g[0] * fy[j + 1])
        else:
            partial = step * 0.5 * g[0] * fy[1]
        rhs = g[j] + 0.5 * step * gp[j] - 0.5 * (step / c) * (lam * partial + inh[j + 1])
        g[j + 1] = rhs / denom
        gp[j + 1] = (kill * g[j + 1]
                     - lam * (partial + step * 0.5 * fy[0] * g[j + 1])
                     - inh[j + 1]) / c
        if not math.isfinite(g[j + 1]):
            raise UnstableIntegration(f"non-finite value at grid node {j + 1}")
    return g, gp


def _snap(b: float, step: float) -> int:
    return max(1, int(round(b / step)))


def solve_classical_grid(dist: ClaimDistribution, params: ModelParams,
                         b: float, step: float) -> GridFn:
    """No-funding value for barrier ``b``: integrate the homogeneous
    equation with g(0) = 1, then rescale so that g'(b) = 1 exactly."""
    if step <= 0.0:
        raise NonPositiveStep(f"grid step must be > 0, got {step}")
    if b <= 0.0:
        raise ValueError(f"barrier must be > 0, got {b}")
    n_steps = _snap(b, step)
    actual = b / n_steps
    g, gp = _forward_pass(dist, params, n_steps, actual, 1.0, None)
    scale = gp[-1]
    if not (math.isfinite(scale) and scale > 0.0):
        raise UnstableIntegration(f"derivative at the barrier is {scale}")
    xs = actual * np.arange(n_steps + 1)
    return GridFn(x=xs, v=g / scale, dv=gp / scale, b=xs[-1], step=actual)


def barrier_sweep(dist: ClaimDistribution, params: ModelParams,
                  inhomogeneity: Inhomogeneity, step: float,
                  b_range: Sequence[float],
                  funding_rate: float = 0.0) -> tuple[float, GridFn]:
    """Pick the candidate barrier maximizing the value at the origin.

    ``inhomogeneity`` is the continuation value collected at funding
    arrivals (rate ``funding_rate``); both are zero/None for the plain
    no-funding solve.  One homogeneous and one particular pass on the
    widest grid serve every candidate: for barrier ``b`` the solution is
    ``u + s w`` with ``s = (1 - u'(b)) / w'(b)``, so the objective
    ``g_b(0)`` is just ``s`` (``u(0) = 0``, ``w(0) = 1``).  Candidates
    where the homogeneous slope has turned non-positive cannot anchor a
    barrier solution and are skipped.
    """
    if step <= 0.0:
        raise NonPositiveStep(f"grid step must be > 0, got {step}")
    cands = np.asarray(list(b_range), dtype=float)
    if cands.size == 0:
        raise EmptyRange("no candidate barriers to sweep")
    b_max = float(np.max(cands))
    n_steps = _snap(b_max, step)
    actual = b_max / n_steps
    xs = actual * np.arange(n_steps + 1)

    w, wp = _forward_pass(dist, params, n_steps, actual, 1.0, None, funding_rate)
    if inhomogeneity is None:
        u = np.zeros(n_steps + 1)
        up = np.zeros(n_steps + 1)
    else:
        inh = funding_rate * np.asarray(inhomogeneity(xs), dtype=float)
        u, up = _forward_pass(dist, params, n_steps, actual, 0.0, inh, funding_rate)

    idx = np.clip(np.rint(cands / actual).astype(int), 1, n_steps)
    objective = np.full(idx.size, -np.inf)
    for k, j in enumerate(idx):
        if wp[j] > 0.0:
            s = (1.0 - up[j]) / wp[j]
            if s > 0.0:
                objective[k] = s * w[0] + u[0]
    if not np.isfinite(objective).any():
        raise UnstableIntegration("no admissible barrier candidate in the sweep")
    k_best = int(np.argmax(objective))
    j_best = int(idx[k_best])
    s = (1.0 - up[j_best]) / wp[j_best]
    best = GridFn(x=xs[:j_best + 1], v=(u + s * w)[:j_best + 1],
                  dv=(up + s * wp)[:j_best + 1], b=xs[j_best], step=actual)
    return best.b, best


@dataclass(frozen=True)
class FundingPlan:
    """Optimal injection per grid point together with its gain."""

    level: float          # injections refill to this level
    f: np.ndarray         # (level - x)^+ on the source grid
    gain: np.ndarray      # value improvement minus phi-weighted cost
    source: GridFn
    phi: float

    def gain_at(self, q):
        """Gain of the optimal injection started from any surplus ``q``."""
        q = np.asarray(q, dtype=float)
        f = np.maximum(self.level - q, 0.0)
        out = self.source(q + f) - self.source(q) - self.phi * f
        return np.maximum(out, 0.0)

    def continuation_at(self, q):
        """``sup_{f>=0} [prev(q+f) - phi f]``: value carried out of a
        funding arrival, where the remaining-opportunity count drops by
        one whether or not capital is injected."""
        return self.source(q) + self.gain_at(q)


def funding_argmax(prev: GridFn, params: ModelParams) -> FundingPlan:
    """Discrete maximizer of ``prev(x+f) - prev(x) - phi f`` over ``f >= 0``.

    For a concave iterate climbing is worthwhile exactly while the forward
    slope exceeds ``phi``, so the refill level is the grid point after the
    last such segment (0 when none qualifies).
    """
    phi = params.phi
    slopes = np.diff(prev.v) / prev.step
    qualifying = np.nonzero(slopes > phi)[0]
    level = float(prev.x[qualifying[-1] + 1]) if qualifying.size else 0.0
    f = np.maximum(level - prev.x, 0.0)
    gain = np.maximum(prev(prev.x + f) - prev.v - phi * f, 0.0)
    return FundingPlan(level=level, f=f, gain=gain, source=prev, phi=phi)


def iterate(dist: ClaimDistribution, params: ModelParams, n: int, step: float,
            b_max: float | None = None) -> list[GridFn]:
    """Iterates ``V_0 .. V_n``, each with its own barrier sweep.

    ``V_k`` values the strategy set that may use the first ``k`` funding
    arrivals: at such an arrival the controller collects the best
    injection continuation of ``V_{k-1}``, so the arrival rate acts as an
    extra killing term and the iterates increase toward the unrestricted
    value from below.  ``b_max`` bounds the swept barrier range; by
    default it is the closed-form no-funding barrier plus two
    (exponential claims), or ten mean claim sizes when that barrier is
    undefined.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if step <= 0.0:
        raise NonPositiveStep(f"grid step must be > 0, got {step}")
    dist.validate()
    if b_max is None:
        from .classical import optimal_barrier
        from .errors import DegenerateRegime
        try:
            b_max = optimal_barrier(params) + 2.0
        except DegenerateRegime:
            b_max = 10.0 * dist.mean
    n_cand = _snap(b_max, step)
    b_range = (b_max / n_cand) * np.arange(1, n_cand + 1)

    _, current = barrier_sweep(dist, params, None, step, b_range)
    out = [current]
    for _ in range(n):
        plan = funding_argmax(current, params)
        # a band strategy needs its refill level at or below the barrier
        feasible = b_range[b_range >= plan.level - 1e-12]
        if feasible.size == 0:
            feasible = b_range[-1:]
        _, current = barrier_sweep(dist, params, plan.continuation_at, step,
                                   feasible, funding_rate=params.beta)
        out.append(current)
    return out


def discrete_residual(grid: GridFn, dist: ClaimDistribution, params: ModelParams,
                      inhomogeneity: Inhomogeneity = None,
                      funding_rate: float = 0.0) -> np.ndarray:
    """Independent residual of the grid equation at interior nodes.

    Uses central differences for the derivative and the trapezoid rule for
    the convolution; for a converged grid function this is O(step).
    """
    c, lam = params.c, params.lam
    kill = params.delta + lam + funding_rate
    x, v, dlt = grid.x, grid.v, grid.step
    m = x.size - 1
    fy = np.asarray(dist.pdf(x), dtype=float)
    res = np.zeros(m - 1)
    inh = np.zeros(x.size) if inhomogeneity is None \
        else funding_rate * np.asarray(inhomogeneity(x))
    for j in range(1, m):
        dvj = (v[j + 1] - v[j - 1]) / (2.0 * dlt)
        kern = v[j::-1] * fy[: j + 1]
        conv = dlt * (np.sum(kern) - 0.5 * kern[0] - 0.5 * kern[-1])
        res[j - 1] = c * dvj - kill * v[j] + lam * conv + inh[j]
    return res
