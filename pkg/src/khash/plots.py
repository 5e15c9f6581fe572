"""Figure rendering for reports (saved to files, never shown interactively)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from . import bounds


def plot_balance(k: int, gamma_star: float, path: str) -> None:
    """The two regime bounds vs gamma, with the balancing threshold marked."""
    pole = 1.0 / (k * k - 2 * k)
    lo = pole + 0.25 * (1.0 / k - pole)
    gammas = np.linspace(lo, 1.0 / k, 400)
    r_u = [bounds.r_unbal(k, g) for g in gammas]
    r_b = [bounds.r_bal(k, bounds.theta_closed(k, g)) for g in gammas]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(gammas, r_u, label="skewed-regime bound")
    ax.plot(gammas, r_b, label="balanced-regime bound (closed-form theta)")
    ax.axhline(bounds.fk_alpha(k), color="gray", ls=":", label="Fredman-Komlos alpha")
    ax.axvline(gamma_star, color="red", ls="--", lw=0.8,
               label=f"gamma* = {gamma_star:.6f}")
    ax.set_xlabel("gamma")
    ax.set_ylabel("rate bound (bits)")
    ax.set_title(f"Threshold balancing, k = {k}")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_theta_sweep(k: int, rows, path: str) -> None:
    """Optimized theta-hat vs gamma, against the closed-form curve."""
    gammas = [r[0] for r in rows]
    theta_hat = [r[1] for r in rows]
    pole = 1.0 / (k * k - 2 * k)
    dense = np.linspace(max(min(gammas), pole * 1.01), max(gammas), 300)
    closed = [bounds.theta_closed(k, g) for g in dense]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(dense, closed, color="C1", lw=1, label="closed-form theta")
    ax.plot(gammas, theta_hat, "o-", ms=4, color="C0", label="max over functionals")
    ax.axhline(bounds.fk_alpha(k), color="gray", ls=":", label="alpha")
    ax.set_xlabel("gamma")
    ax.set_ylabel("theta")
    ax.set_title(f"theta(gamma), k = {k}")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
