"""Matplotlib rendering of the delimited outputs; figures go to files."""

from __future__ import annotations

import numpy as np


def _pyplot():
    import matplotlib
    matplotlib.use("Agg", force=True)
    import matplotlib.pyplot as plt
    return plt


def plot_norms(series, path) -> None:
    """Decay of the monitored norms with the envelope overlaid."""
    plt = _pyplot()
    t = np.asarray(series.times)
    fig, (ax0, ax1) = plt.subplots(1, 2, figsize=(10, 4))
    for name, values in (("A0", series.a0), ("A2", series.a2), ("A4", series.a4)):
        ax0.semilogy(t, np.maximum(np.asarray(values), 1e-300), label=name)
    env = np.asarray(series.envelope)
    if np.any(np.isfinite(env)):
        ax0.semilogy(t, env, "k--", label="envelope")
    ax0.set_xlabel("t")
    ax0.set_ylabel("Wiener seminorms")
    ax0.legend(loc="best", fontsize=8)
    ax1.plot(t, series.h2, label="H2")
    ax1.plot(t, series.h4_sq_integral, label="int H4^2 dt")
    ax1.set_xlabel("t")
    ax1.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def plot_sweep(rows, c1_values, c2_values, s0: float, path) -> None:
    """Map of the smallness region over the (c1, c2) plane at fixed s0.

    ``rows`` is the list of sweep dicts; points with several s0 values are
    filtered to the requested one.
    """
    plt = _pyplot()
    d1 = np.full((len(c1_values), len(c2_values)), np.nan)
    d2 = np.full_like(d1, np.nan)
    idx1 = {v: i for i, v in enumerate(c1_values)}
    idx2 = {v: i for i, v in enumerate(c2_values)}
    for row in rows:
        if row["s0"] != s0:
            continue
        d1[idx1[row["c1"]], idx2[row["c2"]]] = row["D1"]
        d2[idx1[row["c1"]], idx2[row["c2"]]] = row["D2"]
    region = (d1 > 0) & (d2 > 0)
    fig, ax = plt.subplots(figsize=(5.5, 4.5))
    if len(c1_values) > 1 and len(c2_values) > 1:
        mesh = ax.pcolormesh(c2_values, c1_values, region.astype(float),
                             shading="nearest", cmap="RdYlGn", vmin=0, vmax=1)
        fig.colorbar(mesh, ax=ax, label="smallness holds")
    else:
        ax.scatter([r["c2"] for r in rows], [r["c1"] for r in rows],
                   c=["g" if (r["D1"] > 0 and r["D2"] > 0) else "r" for r in rows])
    ax.set_xlabel("c2")
    ax.set_ylabel("c1")
    ax.set_title(f"smallness region at s0 = {s0:g}")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def plot_dispersion(k_values, lambdas, path) -> None:
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(5.5, 4))
    ax.plot(k_values, lambdas, "o-")
    ax.axhline(0.0, color="k", lw=0.8)
    ax.set_xlabel("|k|")
    ax.set_ylabel("lambda(k)")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
