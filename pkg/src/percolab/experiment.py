"""Reproducible experiment orchestration: parameter sweeps over (n, replica)
cells with derived seed streams, exponent estimation, and report emission."""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import generators, percolation
from .degrees import DegreeSequence, PowerLawSpec, power_law_weights, quantile_degrees
from .dynamics import susceptibility
from .graphs import components

SCHEMA_VERSION = 1

CSV_COLUMNS = ["n", "replica", "seed", "cmax", "csec", "surplus_max", "s2", "pi"]


@dataclass
class ExperimentConfig:
    """Declarative sweep description; see docs/schema.md for the file format."""

    model: dict
    percolation: dict
    n_grid: list
    replicas: int
    seed: int
    exclude_isolated: bool = False
    track_s2: bool = False
    workers: int = 1
    regime_band: tuple = (0.1, 0.9)
    assertions: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.replicas < 1:
            raise ValueError("replicas must be >= 1")
        grid = list(self.n_grid)
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("n grid must be strictly increasing")
        if not grid:
            raise ValueError("n grid must be nonempty")
        kind = self.model.get("kind")
        if kind not in _MODEL_BUILDERS:
            raise ValueError(f"unknown model kind {kind!r}")
        mode = self.percolation.get("mode")
        if mode not in ("fixed", "window"):
            raise ValueError("percolation mode must be 'fixed' or 'window'")
        if mode == "window" and self.percolation.get("window") not in ("fin3", "heavy", "tau23", "single"):
            raise ValueError("unknown window kind")

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        with open(path) as fh:
            raw = json.load(fh)
        return cls(**raw)

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "percolation": self.percolation,
            "n_grid": list(self.n_grid),
            "replicas": self.replicas,
            "seed": self.seed,
            "exclude_isolated": self.exclude_isolated,
            "track_s2": self.track_s2,
            "workers": self.workers,
            "regime_band": list(self.regime_band),
            "assertions": self.assertions,
        }


def derive_rng(master_seed: int, n: int, replica: int):
    """Replica stream: the master seed hashed with the (n, replica) cell key.

    Deterministic and independent of execution order, so sweeps parallelise
    without coordination.
    """
    ss = np.random.SeedSequence(master_seed, spawn_key=(n, replica))
    return np.random.default_rng(ss), int(ss.generate_state(1, np.uint64)[0])


# --- model builders: kind -> (config, n, rng) -> percolatable graph ---------

def _build_cm_regular(model, n, rng):
    r = int(model["degree"])
    if (n * r) % 2:
        n += 1
    return generators.configuration_model(DegreeSequence(np.full(n, r)), rng)


def _build_cm_quantile(model, n, rng):
    spec = PowerLawSpec(tau=model["tau"], cf=model.get("cf", 1.0))
    return generators.configuration_model(quantile_degrees(n, spec), rng)


def _build_nr_single(model, n, rng):
    spec = PowerLawSpec(tau=model["tau"], cf=model.get("cf", 1.0))
    return generators.nr_graph(power_law_weights(n, spec), rng)


def _build_nr_multi(model, n, rng):
    spec = PowerLawSpec(tau=model["tau"], cf=model.get("cf", 1.0))
    return generators.nr_multigraph(power_law_weights(n, spec), rng)


def _build_ua(model, n, rng):
    g, _ = generators.uniform_attachment(n, int(model.get("m", 2)), rng)
    return g


def _build_pa(model, n, rng):
    spec = generators.PASpec(m=int(model.get("m", 2)),
                             delta=float(model.get("delta", 0.0)),
                             a=float(model.get("a", 1.0)))
    g, _ = generators.preferential_attachment(n, spec, rng)
    return g


_MODEL_BUILDERS = {
    "cm-regular": _build_cm_regular,
    "cm-quantile": _build_cm_quantile,
    "nr-single": _build_nr_single,
    "nr-multi": _build_nr_multi,
    "ua": _build_ua,
    "pa": _build_pa,
}


def _window_pi(config: ExperimentConfig, g, n: int) -> float:
    perc = config.percolation
    if perc["mode"] == "fixed":
        return float(perc["pi"])
    window = perc["window"]
    lam = float(perc.get("lambda", 0.0))
    if window == "single":
        return percolation.pi_window_single_edge(n, float(config.model["tau"]), lam)
    deg = g.degrees()
    d = DegreeSequence(deg[deg >= 1])
    if window == "fin3":
        return percolation.pi_window_finite_third(d, lam)
    if window == "heavy":
        return percolation.pi_window_heavy(d, lam, float(config.model["tau"]))
    return percolation.pi_window_tau23(d, lam)


def run_cell(config: ExperimentConfig, n: int, replica: int) -> dict:
    """One (n, replica) measurement; a pure function of (config, seed)."""
    rng, child_seed = derive_rng(config.seed, n, replica)
    g = _MODEL_BUILDERS[config.model["kind"]](config.model, n, rng)
    pi = _window_pi(config, g, n)
    gp = percolation.percolate(g, pi, rng)
    dec_full = components(gp)
    dec = components(gp, include_isolated=False) if config.exclude_isolated else dec_full
    s2 = susceptibility(dec_full, 2) if config.track_s2 else math.nan
    return {
        "n": n,
        "replica": replica,
        "seed": child_seed,
        "cmax": dec.max_size,
        "csec": dec.second_size,
        "surplus_max": dec.max_surplus,
        "s2": s2,
        "pi": pi,
    }


def _cell_worker(args):
    cfg_dict, n, replica = args
    return run_cell(ExperimentConfig(**cfg_dict), n, replica)


@dataclass(frozen=True)
class ExponentEstimate:
    """Least-squares slope of mean log size against log n."""

    slope: float
    intercept: float
    stderr: float
    r_squared: float
    log_n: np.ndarray
    mean_log_size: np.ndarray


def estimate_exponent(ns, sizes_by_n) -> ExponentEstimate:
    """Fit mean log|C_max| = slope * log n + intercept over the grid.

    ``sizes_by_n`` maps each n to its replicate sizes. Needs at least
    three grid points for a meaningful residual-based standard error.
    """
    ns = list(ns)
    if len(ns) < 3:
        raise ValueError("need at least 3 grid points")
    x = np.log(np.asarray(ns, dtype=float))
    y = np.array([np.mean(np.log(np.maximum(np.asarray(sizes_by_n[n], dtype=float), 1.0)))
                  for n in ns])
    xbar = x.mean()
    sxx = float(np.sum((x - xbar) ** 2))
    if sxx == 0:
        raise ValueError("degenerate n grid")
    slope = float(np.sum((x - xbar) * (y - y.mean())) / sxx)
    intercept = float(y.mean() - slope * xbar)
    resid = y - (slope * x + intercept)
    dof = len(ns) - 2
    s2 = float(np.sum(resid ** 2) / dof) if dof > 0 else 0.0
    stderr = math.sqrt(s2 / sxx)
    sst = float(np.sum((y - y.mean()) ** 2))
    r_squared = 1.0 - float(np.sum(resid ** 2)) / sst if sst > 0 else 1.0
    return ExponentEstimate(slope=slope, intercept=intercept, stderr=stderr,
                            r_squared=r_squared, log_n=x, mean_log_size=y)


@dataclass(frozen=True)
class ConcentrationReport:
    cv: float                 # coefficient of variation of cmax / sqrt(n)
    mean_ratio: float         # mean csec / cmax
    concentrated: bool
    threshold: float


def concentration_check(cmax, csec, n: int, threshold: float = 0.25) -> ConcentrationReport:
    """Concentration of the sqrt(n)-rescaled largest component across replicas."""
    cmax = np.asarray(cmax, dtype=float)
    if len(cmax) < 10:
        raise ValueError("need at least 10 replicas")
    scaled = cmax / math.sqrt(n)
    cv = float(scaled.std(ddof=1) / scaled.mean()) if scaled.mean() > 0 else math.inf
    ratios = np.asarray(csec, dtype=float) / np.maximum(cmax, 1.0)
    return ConcentrationReport(cv=cv, mean_ratio=float(ratios.mean()),
                               concentrated=cv < threshold, threshold=threshold)


def run(config: ExperimentConfig, out_dir, figures: bool = True) -> dict:
    """Execute the sweep and write runs.csv, summary.json, and figures.

    The CSV is a deterministic function of (config, seed): cells are
    computed from per-cell derived streams and written in sorted order.
    Returns the summary dictionary.
    """
    os.makedirs(out_dir, exist_ok=True)
    cells = [(n, r) for n in config.n_grid for r in range(config.replicas)]
    if config.workers > 1:
        payload = [(config.to_dict(), n, r) for n, r in cells]
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            rows = list(pool.map(_cell_worker, payload, chunksize=8))
    else:
        rows = [run_cell(config, n, r) for n, r in cells]
    rows.sort(key=lambda row: (row["n"], row["replica"]))

    csv_path = os.path.join(out_dir, "runs.csv")
    with open(csv_path, "w") as fh:
        fh.write(",".join(CSV_COLUMNS) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(row[c]) for c in CSV_COLUMNS) + "\n")

    by_n = {n: [row for row in rows if row["n"] == n] for n in config.n_grid}
    summary = {
        "schema_version": SCHEMA_VERSION,
        "config": config.to_dict(),
        "per_n": {
            str(n): {
                "mean_cmax": float(np.mean([r["cmax"] for r in group])),
                "mean_csec": float(np.mean([r["csec"] for r in group])),
                "mean_ratio": float(np.mean([r["csec"] / max(r["cmax"], 1) for r in group])),
                "mean_pi": float(np.mean([r["pi"] for r in group])),
                "mean_s2": float(np.mean([r["s2"] for r in group])) if config.track_s2 else None,
            }
            for n, group in by_n.items()
        },
    }

    if len(config.n_grid) >= 3:
        est = estimate_exponent(config.n_grid,
                                {n: [r["cmax"] for r in group] for n, group in by_n.items()})
        summary["exponent"] = {
            "slope": est.slope, "intercept": est.intercept,
            "stderr": est.stderr, "r_squared": est.r_squared,
        }
    else:
        est = None

    n_top = config.n_grid[-1]
    top = by_n[n_top]
    if len(top) >= 2:
        regime = percolation.regime_diagnostic(
            [r["cmax"] for r in top], [r["csec"] for r in top],
            lo=config.regime_band[0], hi=config.regime_band[1])
        summary["regime"] = {
            "label": regime.label,
            "mean_ratio": regime.mean_ratio,
            "fraction_in_band": regime.fraction_in_band,
        }
    if len(top) >= 10:
        conc = concentration_check([r["cmax"] for r in top], [r["csec"] for r in top], n_top)
        summary["concentration"] = {
            "cv": conc.cv, "mean_ratio": conc.mean_ratio,
            "concentrated": conc.concentrated,
        }

    if figures:
        from . import report
        figs = {}
        if est is not None:
            figs["scaling"] = report.scaling_figure(
                est, os.path.join(out_dir, "fig_scaling.svg"))
        if len(top) >= 2:
            ratios = [r["csec"] / max(r["cmax"], 1) for r in top]
            figs["ratio"] = report.ratio_figure(
                ratios, n_top, os.path.join(out_dir, "fig_ratio.svg"))
        summary["figures"] = figs

    summary["assertions"] = evaluate_assertions(config, summary)

    with open(os.path.join(out_dir, "summary.json"), "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return summary


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def evaluate_assertions(config: ExperimentConfig, summary: dict) -> dict:
    """Check declared expectations against the summary; all must pass."""
    results = {}
    spec = config.assertions or {}
    if "exponent_slope" in spec and "exponent" in summary:
        bounds = spec["exponent_slope"]
        slope = summary["exponent"]["slope"]
        results["exponent_slope"] = bool(bounds.get("min", -np.inf) <= slope <= bounds.get("max", np.inf))
    if "regime" in spec and "regime" in summary:
        results["regime"] = summary["regime"]["label"] == spec["regime"]
    if "max_cv" in spec and "concentration" in summary:
        results["max_cv"] = summary["concentration"]["cv"] <= spec["max_cv"]
    results["ok"] = all(results.values()) if results else True
    return results
