"""Optimal dividend and random-funding band strategies.

Compound-Poisson surplus with exponential claims; dividends above a
barrier, costly capital injections at investor arrival times below a
funding level.  The package computes the optimal two-level band in closed
form, verifies it against the dynamic-programming equation, and
cross-validates it by event-exact Monte Carlo simulation and a
capped-funding value iteration.
"""

from . import band, classical, hjb, policy_iter, simulate
from .band import (
    BandCoefficients,
    BandSolution,
    PiecewiseValue,
    assemble_coefficients,
    gap_root,
    lower_level,
    merged_level,
    piecewise_value,
    solve,
)
from .classical import classical_solution, classical_value, optimal_barrier, phi_threshold
from .errors import DivbandError
from .hjb import convolution_term, funding_sup, hjb_residual, hypothesis_report
from .policy_iter import ClaimDistribution, GridFn, barrier_sweep, funding_argmax, iterate
from .risk_model import (
    CharRoots,
    ModelParams,
    Regime,
    RegimeKind,
    char_roots,
    classify_regime,
    validate_params,
)
from .simulate import PathRecord, SimConfig, SimEstimate, StrategySpec, estimate_value, simulate_path

__version__ = "0.1.0"

__all__ = [
    "BandCoefficients",
    "BandSolution",
    "CharRoots",
    "ClaimDistribution",
    "DivbandError",
    "GridFn",
    "ModelParams",
    "PathRecord",
    "PiecewiseValue",
    "Regime",
    "RegimeKind",
    "SimConfig",
    "SimEstimate",
    "StrategySpec",
    "assemble_coefficients",
    "band",
    "barrier_sweep",
    "char_roots",
    "classical",
    "classical_solution",
    "classical_value",
    "classify_regime",
    "convolution_term",
    "estimate_value",
    "funding_argmax",
    "funding_sup",
    "gap_root",
    "hjb",
    "hjb_residual",
    "hypothesis_report",
    "iterate",
    "lower_level",
    "merged_level",
    "optimal_barrier",
    "phi_threshold",
    "piecewise_value",
    "policy_iter",
    "simulate",
    "simulate_path",
    "solve",
    "validate_params",
]
