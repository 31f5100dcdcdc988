"""Matplotlib figures written next to the CSV outputs (PNG, headless)."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)


def plot_histogram(hist, path, alpha=None, fit=None):
    """Log-log cluster-size density, one marker per bin."""
    fig, ax = plt.subplots(figsize=(5, 4))
    x, y = hist.centers(), hist.densities()
    keep = y > 0
    ax.loglog(x[keep], y[keep], "o", ms=3, label=f"alpha={alpha}" if alpha is not None else None)
    if fit is not None:
        xs = np.array(fit.k_range, dtype=float)
        ax.loglog(xs, np.exp(fit.intercept) * xs ** fit.slope, "-",
                  label=f"slope {fit.slope:.3f}")
    ax.set_xlabel("cluster size k")
    ax.set_ylabel(f"density ({hist.weighting} weighted)")
    ax.legend(loc="lower left")
    return _save(fig, path)


def plot_crossing_curve(rows, path):
    """Crossing probability against alpha, one line per n with Wilson bars."""
    fig, ax = plt.subplots(figsize=(5, 4))
    for n in sorted({n for _, n, _ in rows}):
        pts = sorted((a, e) for a, m, e in rows if m == n)
        a = np.array([p[0] for p in pts])
        p = np.array([p[1].p_hat for p in pts])
        lo = np.array([p[1].ci_low for p in pts])
        hi = np.array([p[1].ci_high for p in pts])
        ax.errorbar(a, p, yerr=[p - lo, hi - p], marker="o", ms=3, capsize=2, label=f"n={n}")
    ax.axhline(0.5, color="grey", lw=0.8, ls=":")
    ax.set_xlabel("alpha")
    ax.set_ylabel("P(left-right crossing)")
    ax.set_ylim(-0.02, 1.02)
    ax.legend()
    return _save(fig, path)


def plot_pmf(pmf, path, fit=None):
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.loglog(pmf.k, pmf.p, "-", lw=1, label=f"d={pmf.d}, alpha={pmf.alpha}")
    if fit is not None:
        xs = np.array(fit.k_range, dtype=float)
        ax.loglog(xs, np.exp(fit.intercept) * xs ** -fit.exponent, "--",
                  label=f"exponent {fit.exponent:.3f}")
    ax.set_xlabel("root cluster size k")
    ax.set_ylabel("p_k")
    ax.legend(loc="lower left")
    return _save(fig, path)


def plot_star_bound(rows, path):
    """``rows``: ``(degree, alpha, f)`` triples."""
    fig, ax = plt.subplots(figsize=(5, 4))
    for deg in sorted({r[0] for r in rows}):
        pts = sorted((a, f) for d, a, f in rows if d == deg)
        ax.semilogx([p[0] for p in pts], [p[1] for p in pts], "o-", ms=3, label=f"degree {deg}")
    ax.set_xlabel("alpha")
    ax.set_ylabel("f(alpha)")
    ax.legend()
    return _save(fig, path)
