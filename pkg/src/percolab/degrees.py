"""Degree and weight sequences, power-law constructions, size-biased sampling."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np


class DegreeSequence:
    """Per-vertex positive integer degrees with cached moments.

    Degree-0 vertices are rejected: an isolated vertex can always be
    removed before building a graph. The total degree ``ell`` is not
    required to be even here; pairing-based constructions check that.
    """

    __slots__ = ("d", "ell", "nu")

    def __init__(self, d):
        d = np.asarray(d, dtype=np.int64)
        if d.ndim != 1 or len(d) == 0:
            raise ValueError("degree sequence must be a nonempty 1-d array")
        if d.min() < 1:
            raise ValueError("degrees must be >= 1")
        self.d = d
        self.d.setflags(write=False)
        self.ell = int(d.sum())
        self.nu = float((d * (d - 1)).sum() / self.ell)

    @property
    def n(self) -> int:
        return len(self.d)

    def __repr__(self):
        return f"DegreeSequence(n={self.n}, ell={self.ell}, nu={self.nu:.4g})"


class WeightSequence:
    """Per-vertex positive real weights with cached total."""

    __slots__ = ("w", "ell")

    def __init__(self, w):
        w = np.asarray(w, dtype=float)
        if w.ndim != 1 or len(w) == 0:
            raise ValueError("weight sequence must be a nonempty 1-d array")
        if w.min() <= 0:
            raise ValueError("weights must be positive")
        self.w = w
        self.w.setflags(write=False)
        self.ell = float(w.sum())

    @property
    def n(self) -> int:
        return len(self.w)

    def __repr__(self):
        return f"WeightSequence(n={self.n}, ell={self.ell:.4g})"


@dataclass(frozen=True)
class PowerLawSpec:
    """Pareto-type tail: P(W > w) = (cf / w)**(tau - 1) for w > cf."""

    tau: float
    cf: float = 1.0

    def __post_init__(self):
        if not self.tau > 2:
            raise ValueError("tau must exceed 2")
        if not self.cf > 0:
            raise ValueError("cf must be positive")

    def inverse_tail(self, u):
        """Quantile transform: value w with tail probability u."""
        return self.cf * np.asarray(u, dtype=float) ** (-1.0 / (self.tau - 1.0))


def nu_n(d: DegreeSequence) -> float:
    """Mean forward degree sum(d(d-1)) / sum(d)."""
    return d.nu


def empirical_moment(d: DegreeSequence, k: int) -> float:
    """k-th empirical moment n^-1 sum d_v^k."""
    if k < 1:
        raise ValueError("moment order must be >= 1")
    return float(np.mean(d.d.astype(float) ** k))


def power_law_weights(n: int, spec: PowerLawSpec) -> WeightSequence:
    """Deterministic weights w_v = cf * (n / v)^(1/(tau-1)), v = 1..n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    v = np.arange(1, n + 1, dtype=float)
    return WeightSequence(spec.inverse_tail(v / n))


def quantile_degree_values(n: int, spec: PowerLawSpec) -> np.ndarray:
    """Floor of the tail quantile at v/n, clamped to at least 1 (no parity fix)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    vals = spec.inverse_tail(np.arange(1, n + 1, dtype=float) / n)
    return np.maximum(1, np.floor(vals)).astype(np.int64)


def quantile_degrees(n: int, spec: PowerLawSpec) -> DegreeSequence:
    """Deterministic power-law degrees via the quantile construction.

    If the total degree is odd, d_1 is incremented by one so the sequence
    can be paired into a multigraph.
    """
    d = quantile_degree_values(n, spec)
    if d.sum() % 2 == 1:
        d = d.copy()
        d[0] += 1
    return DegreeSequence(d)


def coupled_quantiles(n: int, spec: PowerLawSpec, rng=None, increments=None) -> np.ndarray:
    """Descending order statistics of n iid power-law draws, via Gamma ratios.

    Writing G_i for the partial sums of n+1 iid standard exponentials,
    the vector (G_i / G_{n+1})_{i<=n} is distributed as uniform order
    statistics, so applying the tail quantile yields the descending order
    statistics of an iid sample. The shared exponential stream couples
    sequences across different n, keeping the top order statistics aligned.

    ``increments`` overrides the exponential stream (length >= n+1),
    which makes the construction deterministic for testing.
    """
    if increments is None:
        if rng is None:
            raise ValueError("provide either rng or increments")
        increments = rng.exponential(size=n + 1)
    e = np.asarray(increments, dtype=float)
    if len(e) < n + 1:
        raise ValueError("need n+1 exponential increments")
    gam = np.cumsum(e[: n + 1])
    return spec.inverse_tail(gam[:n] / gam[n])


def iid_degrees_coupled(n: int, spec: PowerLawSpec, rng=None, increments=None) -> DegreeSequence:
    """Integer degree order statistics from the coupled iid construction.

    Continuous order statistics are floored and clamped at 1 like the
    quantile construction, then the parity of the total is fixed by
    incrementing the largest degree.
    """
    vals = coupled_quantiles(n, spec, rng=rng, increments=increments)
    d = np.maximum(1, np.floor(vals)).astype(np.int64)
    if d.sum() % 2 == 1:
        d[0] += 1
    return DegreeSequence(d)


def size_biased_reordering(d: DegreeSequence, rng) -> np.ndarray:
    """Random permutation of 1..n drawn sequentially with P proportional to degree.

    Implemented as an exponential race: sorting Exp(1)/d_v ascending gives
    exactly the sequential without-replacement law.
    """
    keys = rng.exponential(size=d.n) / d.d
    return np.argsort(keys, kind="stable").astype(np.int64) + 1


def size_biased_distribution(p) -> np.ndarray:
    """Size-biased version of a pmf indexed by value: q_k = k p_k / mean."""
    p = np.asarray(p, dtype=float)
    q = np.arange(len(p)) * p
    total = q.sum()
    if total <= 0:
        raise ValueError("distribution must have positive mean")
    return q / total


# ---------------------------------------------------------------------------
# Serialization: one value per line, plus a JSON manifest for provenance.
# ---------------------------------------------------------------------------

def save_sequence(values, path) -> None:
    arr = np.asarray(values)
    with open(path, "w") as fh:
        for x in arr.tolist():
            fh.write(f"{x}\n")


def load_sequence(path, dtype=float) -> np.ndarray:
    with open(path) as fh:
        return np.array([dtype(line) for line in fh if line.strip()], dtype=dtype)


def write_manifest(path, *, n: int, tau=None, cf=None, seed=None, kind=None) -> None:
    payload = {"n": n, "tau": tau, "cf": cf, "seed": seed, "kind": kind}
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
