"""Shared fixtures: the reference parameter set and random regime samples."""

import numpy as np
import pytest

from divband import ModelParams, RegimeKind, band, classify_regime


def make_params(**overrides) -> ModelParams:
    base = dict(c=1.5, lam=1.0, alpha=1.5, beta=2.0, delta=0.02, phi=1.5)
    base.update(overrides)
    return ModelParams(**base)


@pytest.fixture(scope="session")
def params():
    """Reference parameter set used throughout."""
    return make_params()


@pytest.fixture(scope="session")
def solution(params):
    return band.solve(params)


@pytest.fixture(scope="session")
def value_fn(solution):
    return band.piecewise_value(solution)


def sample_band_params(n: int, seed: int = 20240817) -> list[ModelParams]:
    """Random valid parameter sets that land in the two-level band regime."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        c = rng.uniform(0.5, 3.0)
        lam = rng.uniform(0.3, 2.0)
        alpha = rng.uniform(0.5, 3.0)
        delta = rng.uniform(0.01, 0.15)
        beta = rng.uniform(0.2, 4.0)
        if (delta + lam) ** 2 >= 0.95 * c * alpha * lam:
            continue
        probe = ModelParams(c=c, lam=lam, alpha=alpha, beta=beta, delta=delta, phi=1.0)
        regime = classify_regime(probe)
        if regime.kind is RegimeKind.PAYOUT_ALL:
            continue
        if not (regime.b_tilde and 0.5 <= regime.b_tilde <= 25.0):
            continue
        phi = 1.0 + rng.uniform(0.1, 0.9) * (regime.phi_max - 1.0)
        out.append(ModelParams(c=c, lam=lam, alpha=alpha, beta=beta,
                               delta=delta, phi=float(phi)))
    return out


@pytest.fixture(scope="session")
def band_param_samples():
    return sample_band_params(20)
