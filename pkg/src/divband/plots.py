"""Figure rendering for the CLI report path (headless, PNG files)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def plot_solution(table: dict, solution, path: str) -> None:
    """Value function with its first two derivatives and the fitted levels."""
    x = table["x"]
    fig, axes = plt.subplots(3, 1, figsize=(7, 9), sharex=True)
    a, b = solution.a_star, solution.b_star
    phi = solution.params.phi

    axes[0].plot(x, table["V"], lw=2)
    axes[0].set_ylabel("V(x)")
    axes[1].plot(x, table["dV"], lw=2)
    axes[1].axhline(phi, color="tab:red", ls="--", lw=1, label=f"slope {phi:g}")
    axes[1].axhline(1.0, color="tab:green", ls="--", lw=1, label="slope 1")
    axes[1].set_ylabel("V'(x)")
    axes[1].legend(fontsize=8)
    axes[2].plot(x, table["d2V"], lw=2)
    axes[2].axhline(0.0, color="black", lw=0.8)
    axes[2].set_ylabel("V''(x)")
    axes[2].set_xlabel("surplus x")
    for ax in axes:
        if b > a:
            ax.axvline(a, color="tab:red", ls=":", lw=1)
        ax.axvline(b, color="tab:green", ls=":", lw=1)
        ax.grid(alpha=0.3)
    fig.suptitle(f"regime {solution.regime.kind.value}: a*={a:.4f}, b*={b:.4f}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_sweep(phis, a_stars, b_stars, phi_max, b_tilde, path: str) -> None:
    """Optimal levels as functions of the funding cost factor."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(phis, a_stars, lw=2, label="a*")
    ax.plot(phis, b_stars, lw=2, label="b*")
    if np.isfinite(phi_max):
        ax.axvline(phi_max, color="gray", ls="--", lw=1, label="funding threshold")
    if np.isfinite(b_tilde):
        ax.axhline(b_tilde, color="gray", ls=":", lw=1, label="no-funding barrier")
    ax.set_xlabel("funding cost factor")
    ax.set_ylabel("level")
    ax.grid(alpha=0.3)
    ax.legend(fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_iterate(ns, best_bs, v0s, ceiling, path: str) -> None:
    """Iteration progress against the closed-form ceiling."""
    fig, axes = plt.subplots(1, 2, figsize=(9, 4))
    axes[0].plot(ns, v0s, marker="o", lw=2)
    if np.isfinite(ceiling):
        axes[0].axhline(ceiling, color="gray", ls="--", lw=1, label="closed form")
        axes[0].legend(fontsize=9)
    axes[0].set_xlabel("allowed fundings n")
    axes[0].set_ylabel("V_n(0)")
    axes[0].grid(alpha=0.3)
    axes[1].plot(ns, best_bs, marker="s", lw=2, color="tab:orange")
    axes[1].set_xlabel("allowed fundings n")
    axes[1].set_ylabel("best barrier")
    axes[1].grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_simulate(estimate, closed_form, path: str) -> None:
    """Monte Carlo estimate with a three-standard-error band."""
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.errorbar([0.0], [estimate.mean], yerr=[3.0 * estimate.stderr],
                fmt="o", capsize=6, label="MC mean +/- 3 stderr")
    if closed_form is not None and np.isfinite(closed_form):
        ax.axhline(closed_form, color="tab:red", ls="--", lw=1, label="closed form")
    ax.set_xticks([])
    ax.set_ylabel("discounted payoff")
    ax.set_title(f"{estimate.n_paths} paths, ruin fraction {estimate.ruin_fraction:.3f}")
    ax.grid(alpha=0.3)
    ax.legend(fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
