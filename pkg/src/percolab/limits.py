"""Scaling-limit processes: drifted Brownian motion, thinned jump processes,
reflection, excursions, and Poisson surplus marks."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .graphs import OrderedPairVector, ord_pairs


@dataclass(frozen=True)
class LimitPath:
    """Real-valued path sampled on the uniform grid t_i = i * dt, values[0] = value at 0."""

    dt: float
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.values.ndim != 1 or len(self.values) == 0:
            raise ValueError("values must be a nonempty 1-d array")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("path values must be finite")

    @property
    def times(self) -> np.ndarray:
        return np.arange(len(self.values)) * self.dt

    @property
    def T(self) -> float:
        return (len(self.values) - 1) * self.dt


def _grid(T: float, dt: float) -> np.ndarray:
    if T <= 0 or dt <= 0:
        raise ValueError("T and dt must be positive")
    steps = int(round(T / dt))
    return np.arange(steps + 1) * dt


def simulate_bm_parabolic(mu: float, kappa: float, lam: float, T: float, dt: float, rng) -> LimitPath:
    """Brownian motion with linear and negative parabolic drift.

    S(t) = (sqrt(kappa)/mu) B(t) + lam*t - kappa*t^2 / (2 mu^3), discretised
    with exact drift and Gaussian increments of variance (kappa/mu^2) dt.
    """
    if mu <= 0 or kappa <= 0:
        raise ValueError("mu and kappa must be positive")
    t = _grid(T, dt)
    noise = np.zeros(len(t))
    noise[1:] = np.cumsum(rng.normal(0.0, math.sqrt(dt), len(t) - 1))
    values = (math.sqrt(kappa) / mu) * noise + lam * t - kappa * t ** 2 / (2.0 * mu ** 3)
    return LimitPath(dt=dt, values=values)


def reflect(p: LimitPath) -> LimitPath:
    """Path minus its running minimum; nonnegative, zero at running minima."""
    return LimitPath(dt=p.dt, values=p.values - np.minimum.accumulate(p.values))


# ---------------------------------------------------------------------------
# Truncated jump-process limits driven by a decreasing weight sequence.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ThetaSequence:
    """Positive nonincreasing weights, optionally tagged with their power-law origin.

    For weights theta_i = cf**alpha * i**(-alpha) the analytic tail
    sum_{i>K} theta_i^p is available, which quantifies the truncation
    error of the simulated processes. Membership: l3 minus l2 for tau in
    (3,4), l2 minus l1 for tau in (2,3).
    """

    values: np.ndarray
    tau: float = None
    cf: float = None

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        v = self.values
        if v.ndim != 1 or len(v) == 0 or v.min() <= 0:
            raise ValueError("theta must be a nonempty positive 1-d array")
        if np.any(np.diff(v) > 1e-12):
            raise ValueError("theta must be nonincreasing")

    @property
    def K(self) -> int:
        return len(self.values)

    @property
    def membership(self) -> str:
        if self.tau is None:
            return "unknown"
        return "l3\\l2" if self.tau > 3 else "l2\\l1"

    def norm2_sq(self) -> float:
        return float(np.sum(self.values ** 2))

    def tail_power_sum(self, p: int) -> float:
        """Upper bound on sum_{i>K} theta_i^p; zero if the tail law is unknown."""
        if self.tau is None:
            return 0.0
        alpha = 1.0 / (self.tau - 1.0)
        if p * alpha <= 1.0:
            return math.inf
        c = self.cf ** alpha
        return c ** p * self.K ** (1.0 - p * alpha) / (p * alpha - 1.0)


def power_law_thetas(K: int, tau: float, cf: float = 1.0) -> ThetaSequence:
    """Truncated weight sequence theta_i = cf**alpha * i**(-alpha), alpha = 1/(tau-1)."""
    if K < 1:
        raise ValueError("K must be >= 1")
    alpha = 1.0 / (tau - 1.0)
    i = np.arange(1, K + 1, dtype=float)
    return ThetaSequence(values=cf ** alpha * i ** (-alpha), tau=tau, cf=cf)


def _add_jumps(t: np.ndarray, dt: float, jump_times: np.ndarray, jump_sizes: np.ndarray) -> np.ndarray:
    """Cumulative jump contribution on the grid; a jump at xi shows up from
    the first grid point >= xi."""
    acc = np.zeros(len(t))
    inside = jump_times <= t[-1]
    idx = np.ceil(jump_times[inside] / dt - 1e-12).astype(np.int64)
    np.add.at(acc, np.maximum(idx, 1), jump_sizes[inside])
    return np.cumsum(acc)


def simulate_thinned_levy(theta: ThetaSequence, mu: float, nu: float, lam: float,
                          T: float, dt: float, rng, tol: float = None,
                          return_jumps: bool = False):
    """Compensated one-shot jump process for the infinite-third-moment limit.

    Weight i contributes (theta_i / sqrt(nu)) * (1{xi_i <= t} - theta_i t / (mu sqrt(nu)))
    with xi_i ~ Exp(theta_i / (mu sqrt(nu))); a linear lam*t drift is added.
    Each weight jumps at most once, unlike the Poisson-driven process that
    dominates it. Truncation at K weights shifts the mean by at most
    t^2 / (2 mu^2 nu^{3/2}) * sum_{i>K} theta_i^3, which is checked against
    ``tol`` when the tail law is known.
    """
    if mu <= 0 or nu <= 0:
        raise ValueError("mu and nu must be positive")
    t = _grid(T, dt)
    th = theta.values
    if tol is not None:
        bound = T ** 2 / (2.0 * mu ** 2 * nu ** 1.5) * theta.tail_power_sum(3)
        if bound > tol:
            raise ValueError(f"truncation too coarse: tail mean shift {bound:.3g} > tol")
    rates = th / (mu * math.sqrt(nu))
    xi = rng.exponential(1.0 / rates)
    drift = lam - float(np.sum(th ** 2)) / (mu * nu)
    values = drift * t + _add_jumps(t, dt, xi, th / math.sqrt(nu))
    path = LimitPath(dt=dt, values=values)
    return (path, xi) if return_jumps else path


def simulate_tau23_process(theta: ThetaSequence, mu: float, lam: float,
                           T: float, dt: float, rng, return_jumps: bool = False):
    """Bounded-variation limit for infinite-variance degrees: unit downward
    drift plus one-shot jumps of size lam*mu*theta_i/||theta||^2 at
    xi_i ~ Exp(theta_i/mu)."""
    if mu <= 0 or lam <= 0:
        raise ValueError("mu and lam must be positive")
    t = _grid(T, dt)
    th = theta.values
    norm2 = float(np.sum(th ** 2))
    xi = rng.exponential(mu / th)
    sizes = lam * mu * th / norm2
    values = -t + _add_jumps(t, dt, xi, sizes)
    path = LimitPath(dt=dt, values=values)
    return (path, xi) if return_jumps else path


# ---------------------------------------------------------------------------
# Excursions and Poisson marks.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExcursionSet:
    """Excursion intervals (start, end), sorted by length descending (ties by
    start time); ``marks[k]`` counts Poisson marks inside the k-th interval."""

    starts: np.ndarray
    ends: np.ndarray
    marks: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "starts", np.asarray(self.starts, dtype=float))
        object.__setattr__(self, "ends", np.asarray(self.ends, dtype=float))
        object.__setattr__(self, "marks", np.asarray(self.marks, dtype=np.int64))

    @property
    def lengths(self) -> np.ndarray:
        return self.ends - self.starts

    def __len__(self):
        return len(self.starts)


def excursions(p: LimitPath, tol: float = 0.0) -> ExcursionSet:
    """Maximal intervals where the reflected path exceeds tol.

    On the grid, a run of consecutive points with reflected value > tol
    opens at the preceding grid point (where the path last sat at its
    running minimum) and closes at the first point back within tol; a run
    still open at T closes there. Intervals are returned longest first.
    """
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    r = p.values - np.minimum.accumulate(p.values)
    above = r > tol
    flags = np.concatenate([[False], above, [False]])
    d = np.diff(flags.astype(np.int8))
    run_starts = np.nonzero(d == 1)[0]
    run_ends = np.nonzero(d == -1)[0] - 1     # inclusive last index above tol
    starts = np.maximum(run_starts - 1, 0) * p.dt
    ends = np.minimum(run_ends + 1, len(r) - 1) * p.dt
    lengths = ends - starts
    order = np.lexsort((starts, -lengths))
    return ExcursionSet(starts=starts[order], ends=ends[order],
                        marks=np.zeros(len(order), dtype=np.int64))


def default_excursion_tol(dt: float, drift_rate: float) -> float:
    """Discrete paths sag below the running minimum by up to one grid step of
    drift; two steps of slack keeps gridding artefacts out of the excursions."""
    return 2.0 * dt * abs(drift_rate)


def poisson_marks(reflected: LimitPath, excs: ExcursionSet, intensity_scale: float, rng) -> ExcursionSet:
    """Mark the path with an inhomogeneous Poisson process of intensity
    intensity_scale * reflected(s) and count marks per excursion.

    Cell counts are Poisson(scale * value_at_left_endpoint * dt); only
    cells inside excursion intervals contribute.
    """
    if intensity_scale < 0:
        raise ValueError("intensity scale must be nonnegative")
    vals = reflected.values
    if vals.min() < -1e-9:
        raise ValueError("expected a nonnegative (reflected) path")
    rates = intensity_scale * np.maximum(vals[:-1], 0.0) * reflected.dt
    cell_counts = rng.poisson(rates) if len(rates) else np.zeros(0, dtype=np.int64)
    cum = np.concatenate([[0], np.cumsum(cell_counts)])
    i0 = np.round(excs.starts / reflected.dt).astype(np.int64)
    i1 = np.round(excs.ends / reflected.dt).astype(np.int64)
    marks = cum[i1] - cum[i0]
    return replace(excs, marks=marks.astype(np.int64))


def limit_component_vector(excs: ExcursionSet, length_scale: float = 1.0) -> OrderedPairVector:
    """Ordered (scaled length, mark count) vector of a marked excursion set."""
    return ord_pairs(excs.lengths * length_scale, excs.marks)


def bm_parameters(pmf) -> tuple[float, float, float]:
    """Drift and variance constants (mu, kappa, beta) from a degree pmf:
    mu the mean, kappa = m3*m1 - m2^2, beta = 1/mu."""
    p = np.asarray(pmf, dtype=float)
    p = p / p.sum()
    k = np.arange(len(p), dtype=float)
    m1 = float((k * p).sum())
    m2 = float((k ** 2 * p).sum())
    m3 = float((k ** 3 * p).sum())
    if m1 <= 0:
        raise ValueError("pmf must have positive mean")
    if not np.isfinite(m3):
        raise ValueError("third moment must be finite")
    return m1, m3 * m1 - m2 ** 2, 1.0 / m1
