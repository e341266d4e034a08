"""Figure emission for experiment reports: simple line/scatter SVGs written
next to the delimited output."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def scaling_figure(est, path) -> str:
    """Log-log scatter of mean largest-component size against n, with the fit."""
    fig, ax = plt.subplots(figsize=(5.0, 3.6))
    ax.plot(est.log_n / np.log(2), est.mean_log_size / np.log(2), "o", label="mean log2 |C_max|")
    fit = est.slope * est.log_n + est.intercept
    ax.plot(est.log_n / np.log(2), fit / np.log(2), "-",
            label=f"slope {est.slope:.3f} +/- {est.stderr:.3f}")
    ax.set_xlabel("log2 n")
    ax.set_ylabel("log2 size")
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return str(path)


def ratio_figure(ratios, n: int, path) -> str:
    """Histogram of second/largest component ratios at the top grid size."""
    fig, ax = plt.subplots(figsize=(5.0, 3.6))
    ax.hist(np.asarray(ratios, dtype=float), bins=20, range=(0.0, 1.0), color="#4477aa")
    ax.set_xlabel("|C_sec| / |C_max|")
    ax.set_ylabel("replicas")
    ax.set_title(f"n = {n}", fontsize=9)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return str(path)


def path_figure(path_obj, out_path, marks=None, title=None) -> str:
    """Line plot of a simulated limit path, optionally with excursion marks."""
    fig, ax = plt.subplots(figsize=(6.0, 3.2))
    ax.plot(path_obj.times, path_obj.values, lw=0.8)
    if marks is not None and len(marks):
        for (s, e) in zip(marks.starts, marks.ends):
            ax.axvspan(s, e, alpha=0.15, color="#cc6677")
    if title:
        ax.set_title(title, fontsize=9)
    ax.set_xlabel("t")
    ax.set_ylabel("value")
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)
    return str(out_path)


def trajectory_figure(ns, series, labels, out_path, logx=True, logy=True) -> str:
    """Plot growth trajectories (susceptibilities, component sizes) against n."""
    fig, ax = plt.subplots(figsize=(5.5, 3.6))
    for values, label in zip(series, labels):
        ax.plot(ns, values, lw=1.0, label=label)
    if logx:
        ax.set_xscale("log")
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel("n")
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)
    return str(out_path)
