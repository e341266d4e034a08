"""Bond percolation, critical-window calculators, the explosion construction,
and the branching-process survival oracle."""

from __future__ import annotations

import itertools
import math
import random
import warnings
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .degrees import DegreeSequence
from .generators import _pair_half_edges
from .graphs import MultiGraph


def percolate(g: MultiGraph, pi: float, rng=None, *, uniforms=None) -> MultiGraph:
    """Retain each edge copy independently with probability pi.

    Parallel copies and self-loops are retained independently of each
    other. Passing ``uniforms`` (one per edge) realises the monotone
    coupling: the retained set at pi is contained in the one at pi' >= pi.
    """
    if not 0.0 <= pi <= 1.0:
        raise ValueError("retention probability must lie in [0, 1]")
    if uniforms is None:
        uniforms = rng.random(g.edge_count)
    else:
        uniforms = np.asarray(uniforms, dtype=float)
        if len(uniforms) != g.edge_count:
            raise ValueError("need one uniform per edge")
    keep = uniforms < pi
    return MultiGraph(g.n, g.u[keep], g.v[keep])


# ---------------------------------------------------------------------------
# Critical values and finite-size windows.
# ---------------------------------------------------------------------------

def _clamp_pi(pi: float) -> float:
    if pi < 0.0 or pi > 1.0:
        warnings.warn(f"window value pi={pi:.4g} clamped to [0, 1]", stacklevel=3)
        return min(max(pi, 0.0), 1.0)
    return pi


def pi_window_finite_third(d: DegreeSequence, lam: float) -> float:
    """Retention probability (1 + lam * n^(-1/3)) / nu_n for the diffusive window."""
    if d.nu <= 0:
        raise ValueError("nu_n must be positive")
    return _clamp_pi((1.0 + lam * d.n ** (-1.0 / 3.0)) / d.nu)


def pi_window_heavy(d: DegreeSequence, lam: float, tau: float) -> float:
    """Window (1 + lam / c_n) / nu_n with c_n = n^((tau-3)/(tau-1)), tau in (3,4)."""
    if not 3.0 < tau < 4.0:
        raise ValueError("tau must lie in (3, 4)")
    if d.nu <= 0:
        raise ValueError("nu_n must be positive")
    c_n = d.n ** ((tau - 3.0) / (tau - 1.0))
    return _clamp_pi((1.0 + lam / c_n) / d.nu)


def pi_window_tau23(d: DegreeSequence, lam: float) -> float:
    """Window lam / nu_n for infinite-variance degrees (tau in (2,3)), lam > 0."""
    if lam <= 0:
        raise ValueError("lam must be positive")
    if d.nu <= 0:
        raise ValueError("nu_n must be positive")
    return _clamp_pi(lam / d.nu)


def pi_window_single_edge(n: int, tau: float, lam: float) -> float:
    """Window lam * n^(-(3-tau)/2) for single-edge rank-1 graphs, tau in (2,3)."""
    if not 2.0 < tau < 3.0:
        raise ValueError("tau must lie in (2, 3)")
    if lam <= 0:
        raise ValueError("lam must be positive")
    return _clamp_pi(lam * float(n) ** (-(3.0 - tau) / 2.0))


@dataclass(frozen=True)
class ScalingConstants:
    alpha: float
    rho: float
    eta: float
    a_n: float
    b_n: float
    c_n: float


def scaling_constants(n: int, tau: float) -> ScalingConstants:
    """Power-law scaling exponents and sequences (slowly varying part = 1).

    alpha = 1/(tau-1) sets the maximal degree scale a_n = n^alpha,
    rho = (tau-2)/(tau-1) the component scale b_n = n^rho, and
    eta = (tau-3)/(tau-1) the window scale c_n = n^eta.
    """
    if not 2.0 < tau < 4.0:
        raise ValueError("tau must lie in (2, 4)")
    alpha = 1.0 / (tau - 1.0)
    rho = (tau - 2.0) / (tau - 1.0)
    eta = (tau - 3.0) / (tau - 1.0)
    return ScalingConstants(alpha, rho, eta, n ** alpha, n ** rho, n ** eta)


def cm_pi_c(d: DegreeSequence) -> float:
    """Critical retention probability 1 / nu_n for half-edge pairing graphs."""
    if d.nu <= 0:
        raise ValueError("nu_n must be positive")
    return 1.0 / d.nu


def pa_pi_c(m: int, delta: float) -> float:
    """Closed-form critical retention probability for linear preferential attachment.

    Zero for delta in (-m, 0]: the local limit percolates at any positive
    retention there.
    """
    if delta <= -m:
        raise ValueError("delta must exceed -m")
    if delta <= 0:
        return 0.0
    root = math.sqrt(m * (m - 1) * (m + delta) * (m + 1 + delta))
    return delta / (2.0 * (m * (m + delta) + root))


def ua_pi_c() -> float:
    """Critical retention probability for uniform attachment with two edges per vertex."""
    return (2.0 - math.sqrt(2.0)) / 4.0


# ---------------------------------------------------------------------------
# Explosion construction: percolation as another half-edge pairing model.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExplodedDegrees:
    """Degrees after splitting each vertex into a Bin(d_v, sqrt(pi)) core plus
    red degree-1 stubs; half-edge count is conserved."""

    degrees: np.ndarray   # length N = n + n_plus
    red: np.ndarray       # bool, True for the appended degree-1 vertices
    n_original: int

    @property
    def n_total(self) -> int:
        return len(self.degrees)

    @property
    def n_plus(self) -> int:
        return int(self.red.sum())


def janson_explode(d: DegreeSequence, pi: float, rng) -> ExplodedDegrees:
    """Split degrees for the explosion construction at retention pi."""
    if not 0.0 <= pi <= 1.0:
        raise ValueError("retention probability must lie in [0, 1]")
    kept = rng.binomial(d.d, math.sqrt(pi))
    n_plus = int((d.d - kept).sum())
    degrees = np.concatenate([kept, np.ones(n_plus, dtype=np.int64)])
    red = np.zeros(len(degrees), dtype=bool)
    red[d.n:] = True
    return ExplodedDegrees(degrees=degrees, red=red, n_original=d.n)


def janson_percolate(d: DegreeSequence, pi: float, rng) -> MultiGraph:
    """Percolation realised by pairing exploded degrees and discarding red stubs.

    Equal in law to ``percolate(configuration_model(d), pi)``: retaining a
    half-edge with probability sqrt(pi) on both sides retains the edge
    with probability pi.
    """
    ex = janson_explode(d, pi, rng)
    u, v = _pair_half_edges(ex.degrees, rng)
    keep = (u <= d.n) & (v <= d.n)
    return MultiGraph(d.n, u[keep], v[keep])


# ---------------------------------------------------------------------------
# Survival probability of the percolated local limit.
# ---------------------------------------------------------------------------

def _pmf_array(p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or len(p) == 0 or p.min() < 0:
        raise ValueError("pmf must be a nonempty nonnegative 1-d array")
    total = p.sum()
    if total <= 0:
        raise ValueError("pmf must have positive mass")
    return p / total


def theta_survival(p, pi: float, tol: float = 1e-12, max_iter: int = 10 ** 6) -> float:
    """Limiting giant fraction for retention pi, given the degree pmf p (index = value).

    The local limit is a two-stage branching process: the root has
    offspring pmf p, later generations have the size-biased forward pmf.
    With eta the smallest root of eta = g*(1 - pi + pi*eta), where g* is
    the forward-offspring generating function, the survival probability is
    theta = 1 - g(1 - pi + pi*eta). Iteration starts at 0 and increases,
    hence converges to the smallest root.
    """
    p = _pmf_array(p)
    if not 0.0 <= pi <= 1.0:
        raise ValueError("retention probability must lie in [0, 1]")
    k = np.arange(len(p))
    mu = float((k * p).sum())
    if mu <= 0:
        raise ValueError("pmf must have positive mean")
    nu = float((k * (k - 1) * p).sum() / mu)
    if pi * nu <= 1.0:
        return 0.0

    def g(s):
        return float(np.polynomial.polynomial.polyval(s, p))

    def g_star(s):
        # pgf of the forward offspring: g'(s) / g'(1)
        coeffs = k[1:] * p[1:]
        return float(np.polynomial.polynomial.polyval(s, coeffs)) / mu

    eta = 0.0
    for _ in range(max_iter):
        nxt = g_star(1.0 - pi + pi * eta)
        if abs(nxt - eta) < tol:
            eta = nxt
            break
        eta = nxt
    else:
        raise RuntimeError("survival fixed point did not converge")
    return 1.0 - g(1.0 - pi + pi * eta)


def janson_degree_pmf(p, pi: float) -> np.ndarray:
    """Degree pmf of the exploded pairing model in the large-graph limit.

    A vertex is, with probability n/N, an original vertex with degree
    Bin(D, sqrt(pi)) and otherwise a red degree-1 stub, where
    N/n -> 1 + E[D](1 - sqrt(pi)).
    """
    p = _pmf_array(p)
    if not 0.0 <= pi <= 1.0:
        raise ValueError("retention probability must lie in [0, 1]")
    s = math.sqrt(pi)
    kmax = len(p) - 1
    q = np.zeros(kmax + 2)
    for d0, mass in enumerate(p):
        if mass == 0:
            continue
        for j in range(d0 + 1):
            q[j] += mass * math.comb(d0, j) * s ** j * (1 - s) ** (d0 - j)
    mu = float(np.dot(np.arange(len(p)), p))
    red_mass = mu * (1.0 - s)
    q[1] += red_mass
    return q / (1.0 + red_mass)


# ---------------------------------------------------------------------------
# Regime diagnostics.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RegimeReport:
    label: str
    mean_ratio: float
    ratios: np.ndarray
    fraction_in_band: float
    lo: float
    hi: float


def regime_diagnostic(cmax, csec, lo: float = 0.1, hi: float = 0.9) -> RegimeReport:
    """Classify a retention sequence from replicated (largest, second) sizes.

    The ratio second/largest concentrates near 0 barely above the window,
    stays near 1 barely below it, and remains spread out inside it. The
    label is decided from the mean ratio against the [lo, hi] band.
    """
    cmax = np.asarray(cmax, dtype=float)
    csec = np.asarray(csec, dtype=float)
    if len(cmax) < 2 or len(cmax) != len(csec):
        raise ValueError("need at least two paired samples")
    with np.errstate(invalid="ignore", divide="ignore"):
        ratios = np.where(cmax > 0, csec / np.maximum(cmax, 1e-300), 0.0)
    mean = float(ratios.mean())
    frac = float(np.mean((ratios >= lo) & (ratios <= hi)))
    if mean <= lo:
        label = "barely-supercritical"
    elif mean >= hi:
        label = "barely-subcritical"
    else:
        label = "critical-window"
    return RegimeReport(label=label, mean_ratio=mean, ratios=ratios,
                        fraction_in_band=frac, lo=lo, hi=hi)


# ---------------------------------------------------------------------------
# Component-size-multiset laws for equivalence checks between direct
# percolation and the explosion construction, both sampled and exact.
# ---------------------------------------------------------------------------

def _sizes_key(n: int, pairs) -> tuple:
    parent = list(range(n))
    size = [1] * n

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            if size[ra] < size[rb]:
                ra, rb = rb, ra
            parent[rb] = ra
            size[ra] += size[rb]
    counts = sorted(size[find(x)] for x in range(n))
    # each component contributes |C| copies of its size; compress to one
    out = []
    i = 0
    while i < len(counts):
        out.append(counts[i])
        i += counts[i]
    return tuple(sorted(out, reverse=True))


def sample_component_law_direct(d: DegreeSequence, pi: float, samples: int, rng) -> Counter:
    """Empirical law of the component-size multiset under direct percolation."""
    rnd = random.Random(int(rng.integers(2 ** 63)))
    shuffle, coin = rnd.shuffle, rnd.random
    base = [v for v, dv in enumerate(d.d.tolist()) for _ in range(dv)]
    n = d.n
    out = Counter()
    for _ in range(samples):
        half = base[:]
        shuffle(half)
        pairs = [(half[i], half[i + 1]) for i in range(0, len(half), 2) if coin() < pi]
        out[_sizes_key(n, pairs)] += 1
    return out


def sample_component_law_janson(d: DegreeSequence, pi: float, samples: int, rng) -> Counter:
    """Empirical law of the component-size multiset under the explosion construction."""
    rnd = random.Random(int(rng.integers(2 ** 63)))
    shuffle, coin = rnd.shuffle, rnd.random
    s = math.sqrt(pi)
    dlist = d.d.tolist()
    n = d.n
    ell = d.ell
    out = Counter()
    for _ in range(samples):
        half = []
        for v, dv in enumerate(dlist):
            kept = sum(coin() < s for _ in range(dv))
            half.extend([v] * kept)
        half.extend([-1] * (ell - len(half)))  # red stubs; identity irrelevant
        shuffle(half)
        pairs = [(half[i], half[i + 1]) for i in range(0, ell, 2)
                 if half[i] >= 0 and half[i + 1] >= 0]
        out[_sizes_key(n, pairs)] += 1
    return out


def _matchings(items):
    """All perfect matchings of a list, as lists of index pairs into it."""
    idx = list(range(len(items)))

    def rec(free):
        if not free:
            yield []
            return
        a = free[0]
        for k in range(1, len(free)):
            b = free[k]
            rest = free[1:k] + free[k + 1:]
            for tail in rec(rest):
                yield [(a, b)] + tail

    yield from rec(idx)


def exact_component_law_direct(d: DegreeSequence, pi: float) -> dict:
    """Exact component-size-multiset law of percolation on the pairing model.

    Enumerates all (ell-1)!! matchings and all retained-edge subsets;
    only practical for tiny degree sequences.
    """
    base = [v for v, dv in enumerate(d.d.tolist()) for _ in range(dv)]
    n = d.n
    law = Counter()
    match_list = list(_matchings(base))
    p_match = 1.0 / len(match_list)
    m_edges = d.ell // 2
    for matching in match_list:
        edges = [(base[a], base[b]) for a, b in matching]
        for mask in itertools.product((0, 1), repeat=m_edges):
            k = sum(mask)
            prob = p_match * pi ** k * (1 - pi) ** (m_edges - k)
            kept = [e for e, keep in zip(edges, mask) if keep]
            law[_sizes_key(n, kept)] += prob
    return dict(law)


def exact_component_law_janson(d: DegreeSequence, pi: float) -> dict:
    """Exact component-size-multiset law under the explosion construction."""
    s = math.sqrt(pi)
    dlist = d.d.tolist()
    n = d.n
    ell = d.ell
    law = Counter()
    for kept in itertools.product(*(range(dv + 1) for dv in dlist)):
        p_deg = 1.0
        for dv, kv in zip(dlist, kept):
            p_deg *= math.comb(dv, kv) * s ** kv * (1 - s) ** (dv - kv)
        half = [v for v, kv in enumerate(kept) for _ in range(kv)]
        half.extend([-1] * (ell - len(half)))
        match_list = list(_matchings(half))
        p_match = p_deg / len(match_list)
        for matching in match_list:
            edges = [(half[a], half[b]) for a, b in matching
                     if half[a] >= 0 and half[b] >= 0]
            law[_sizes_key(n, edges)] += p_match
    return dict(law)


def tv_distance(law1, law2) -> float:
    """Total variation distance between two (possibly unnormalised) laws."""
    c1, c2 = Counter(law1), Counter(law2)
    t1 = sum(c1.values())
    t2 = sum(c2.values())
    keys = set(c1) | set(c2)
    return 0.5 * sum(abs(c1[k] / t1 - c2[k] / t2) for k in keys)
