"""Figure rendering helpers for the CLI report path (opt-in via --fig)."""

from __future__ import annotations

import numpy as np

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def save_length_histogram(samples_full, samples_restricted, path: str) -> None:
    fig, axes = plt.subplots(1, 2, figsize=(9, 3.5))
    axes[0].hist(samples_full, bins=40, color="tab:blue", alpha=0.8)
    axes[0].set_title("full length")
    axes[1].hist(samples_restricted, bins=40, color="tab:orange", alpha=0.8)
    axes[1].set_title("restricted length")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_angle_scatter(angles, path: str, s: float | None = None) -> None:
    fig, ax = plt.subplots(figsize=(4, 4), subplot_kw={"projection": "polar"})
    ax.plot(angles, np.ones(len(angles)), "o", ms=4)
    if s is not None:
        for j in range(4):
            th = np.linspace(-s + j * np.pi / 2, s + j * np.pi / 2, 50)
            ax.plot(th, np.full_like(th, 1.05), "-", color="tab:red", lw=2)
    ax.set_yticks([])
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_kernel_profile(n: int, path: str, smax: float = 0.5) -> None:
    from .field import covariance_arrays

    rho = np.linspace(1e-4, smax, 600)
    pts = np.stack([rho, np.zeros_like(rho)], axis=-1)
    r = covariance_arrays(n, pts)["r"]
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ax.plot(rho, r, lw=1.2)
    ax.axhline(7 / 8, color="tab:red", ls="--", lw=0.8)
    ax.axhline(-7 / 8, color="tab:red", ls="--", lw=0.8)
    ax.set_xlabel("|z|")
    ax.set_ylabel("r(z)")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_moment_deviations(entries, path: str) -> None:
    names = [e["name"] for e in entries]
    devs = [e["rel_dev"] if e["rel_dev"] == e["rel_dev"] else 0.0 for e in entries]
    fig, ax = plt.subplots(figsize=(8, 3.5))
    ax.bar(range(len(names)), devs, color="tab:green")
    ax.set_xticks(range(len(names)))
    ax.set_xticklabels(names, rotation=60, ha="right", fontsize=7)
    ax.set_ylabel("relative deviation")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
