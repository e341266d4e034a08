"""Random graph constructors: configuration model, rank-1 models, attachment growth."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .degrees import DegreeSequence, WeightSequence
from .graphs import MultiGraph


def _uniform_matching(ell: int, rng) -> tuple[np.ndarray, np.ndarray]:
    """Uniform perfect matching on half-edges 0..ell-1.

    A Fisher-Yates shuffle paired sequentially: every matching is produced
    by the same number of orderings, hence uniformly.
    """
    if ell % 2 == 1:
        raise ValueError("total degree must be even")
    perm = rng.permutation(ell)
    return perm[0::2], perm[1::2]


def _pair_half_edges(degree_array: np.ndarray, rng) -> tuple[np.ndarray, np.ndarray]:
    """Pair half-edges of an arbitrary nonnegative degree array into vertex pairs."""
    vertex_of = np.repeat(np.arange(1, len(degree_array) + 1, dtype=np.int64), degree_array)
    a, b = _uniform_matching(len(vertex_of), rng)
    return vertex_of[a], vertex_of[b]


def configuration_model(d: DegreeSequence, rng) -> MultiGraph:
    """Uniform pairing of d_v half-edges per vertex; keeps self-loops and multi-edges."""
    if d.ell % 2 == 1:
        raise ValueError("total degree must be even")
    u, v = _pair_half_edges(d.d, rng)
    return MultiGraph(d.n, u, v)


# ---------------------------------------------------------------------------
# Rank-1 inhomogeneous random graphs.
# ---------------------------------------------------------------------------

def nr_multigraph(w: WeightSequence, rng) -> MultiGraph:
    """Poisson multigraph: independent Poisson(w_u w_v / ell) edge counts, no self-loops.

    Sampled by superposition: a Poisson(ell/2) total number of edges with
    endpoints drawn iid proportional to weight gives independent
    Poisson(w_u w_v / ell) counts per unordered pair once self-draws are
    discarded. This is O(edges) rather than O(n^2).
    """
    n = w.n
    probs = w.w / w.ell
    m = rng.poisson(w.ell / 2.0)
    ends = rng.choice(n, size=2 * m, p=probs).astype(np.int64) + 1
    u, v = ends[:m], ends[m:]
    keep = u != v
    return MultiGraph(n, u[keep], v[keep])


def _collapse(g: MultiGraph) -> MultiGraph:
    """Simple graph obtained by merging parallel edges and dropping self-loops."""
    lo = np.minimum(g.u, g.v)
    hi = np.maximum(g.u, g.v)
    keep = lo != hi
    lo, hi = lo[keep], hi[keep]
    if len(lo) == 0:
        return MultiGraph(g.n, lo, hi)
    codes = np.unique(lo * np.int64(g.n + 1) + hi)
    return MultiGraph(g.n, codes // (g.n + 1), codes % (g.n + 1))


def nr_graph(w: WeightSequence, rng) -> MultiGraph:
    """Single-edge Poissonian graph: edge {u,v} present with 1 - exp(-w_u w_v / ell)."""
    return _collapse(nr_multigraph(w, rng))


def _simple_pairwise(w: WeightSequence, rng, prob_of_product) -> MultiGraph:
    # Row-by-row Bernoulli sweep over the upper triangle; quadratic in n,
    # intended for the moderate sizes where these variants are compared.
    n = w.n
    us, vs = [], []
    for i in range(n - 1):
        p = prob_of_product(w.w[i] * w.w[i + 1:])
        hits = np.nonzero(rng.random(n - 1 - i) < p)[0]
        if len(hits):
            us.append(np.full(len(hits), i + 1, dtype=np.int64))
            vs.append(hits.astype(np.int64) + i + 2)
    if not us:
        return MultiGraph(n, np.empty(0, np.int64), np.empty(0, np.int64))
    return MultiGraph(n, np.concatenate(us), np.concatenate(vs))


def chung_lu(w: WeightSequence, rng) -> MultiGraph:
    """Simple graph with edge probability min(w_u w_v / ell, 1)."""
    ell = w.ell
    return _simple_pairwise(w, rng, lambda prod: np.minimum(prod / ell, 1.0))


def grg(w: WeightSequence, rng) -> MultiGraph:
    """Generalised random graph: edge probability w_u w_v / (ell + w_u w_v)."""
    ell = w.ell
    return _simple_pairwise(w, rng, lambda prod: prod / (ell + prod))


# ---------------------------------------------------------------------------
# Attachment growth models.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PASpec:
    """Linear attachment rule: a new edge picks target u with weight a*deg(u) + delta.

    ``m`` out-edges per arriving vertex; ``a=1`` is classic preferential
    attachment, ``a=0`` uniform attachment. ``init_edges`` seeds the
     2-vertex start graph and defaults to m parallel edges {1,2} (so the
    second vertex has degree exactly m).
    """

    m: int
    delta: float = 0.0
    a: float = 1.0
    init_edges: tuple = None

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be >= 1")
        if not 0.0 <= self.a <= 1.0:
            raise ValueError("a must lie in [0, 1]")
        if self.a > 0 and self.delta <= -self.m / self.a:
            raise ValueError("delta must exceed -m/a")
        if self.a == 0 and self.delta <= 0:
            raise ValueError("uniform attachment (a=0) needs delta > 0")
        if self.init_edges is None:
            object.__setattr__(self, "init_edges", tuple((2, 1) for _ in range(self.m)))
        else:
            object.__setattr__(self, "init_edges", tuple(tuple(e) for e in self.init_edges))
        for (x, y) in self.init_edges:
            if x not in (1, 2) or y not in (1, 2):
                raise ValueError("init edges must connect vertices 1 and 2")


@dataclass(frozen=True)
class GrowthTrace:
    """Arrival log: vertex v >= 3 connected its j-th edge to targets[v-3, j-1]."""

    targets: np.ndarray          # shape (n-2, m), entries < their row vertex
    init_edges: tuple
    times: np.ndarray = None     # optional continuous arrival times, len n

    @property
    def m(self) -> int:
        return self.targets.shape[1]

    @property
    def n(self) -> int:
        return self.targets.shape[0] + 2


def _growth_graph(n: int, trace: GrowthTrace) -> MultiGraph:
    init = np.asarray(trace.init_edges, dtype=np.int64).reshape(-1, 2)
    m = trace.m
    new_u = np.repeat(np.arange(3, n + 1, dtype=np.int64), m)
    u = np.concatenate([init[:, 0], new_u])
    v = np.concatenate([init[:, 1], trace.targets.reshape(-1)])
    return MultiGraph(n, u, v)


def pa_target_weights(deg, v: int, spec: PASpec) -> np.ndarray:
    """Unnormalised attachment weights a*deg(u) + delta over targets u < v.

    ``deg`` holds current degrees indexed by vertex (slot 0 unused). The
    normaliser is their sum; it must be positive for the spec to be valid.
    """
    w = spec.a * np.asarray(deg[1:v], dtype=float) + spec.delta
    if w.min() < 0 or w.sum() <= 0:
        raise ValueError("attachment weights nonpositive: invalid spec for this graph")
    return w


def preferential_attachment(n: int, spec: PASpec, rng) -> tuple[MultiGraph, GrowthTrace]:
    """Grow a linear-attachment multigraph to n vertices.

    Degrees update after every single edge placement, and a vertex never
    targets itself. Sampling uses one uniform per edge: the interval
    [0, a*D + delta*(v-1)) decomposes into an endpoint-list part (weight a
    per edge-end) and a uniform part (weight delta per vertex), so the
    chosen target has probability exactly (a*deg(u) + delta) / total.
    For delta < 0 a rejection step against the pure-degree proposal is
    used instead.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    m, a, delta = spec.m, spec.a, spec.delta
    deg = [0] * (n + 1)
    endpoints = []  # one entry per edge-end among completed vertices
    for (x, y) in spec.init_edges:
        deg[x] += 1
        deg[y] += 1
    for x in (1, 2):
        endpoints.extend([x] * deg[x])
    total_prev = deg[1] + deg[2]  # total degree of vertices < v

    targets = np.zeros((max(n - 2, 0), m), dtype=np.int64)
    rand = rng.random
    for v in range(3, n + 1):
        n_prev = v - 1
        for j in range(m):
            norm = a * total_prev + delta * n_prev
            if norm <= 0:
                raise ValueError("nonpositive attachment normaliser: invalid spec")
            if a == 0:
                t = 1 + min(int(rand() * n_prev), n_prev - 1)
            elif delta >= 0:
                r = rand() * norm
                if r < a * total_prev:
                    t = endpoints[min(int(r / a), total_prev - 1)]
                else:
                    t = 1 + min(int((r - a * total_prev) / delta), n_prev - 1)
            else:
                while True:
                    t = endpoints[int(rand() * total_prev)]
                    if rand() * (a * deg[t]) < a * deg[t] + delta:
                        break
            targets[v - 3, j] = t
            deg[t] += 1
            deg[v] += 1
            endpoints.append(t)
            total_prev += 1
        endpoints.extend([v] * m)
        total_prev += m
    trace = GrowthTrace(targets=targets, init_edges=spec.init_edges)
    return _growth_graph(n, trace), trace


def uniform_attachment(n: int, m: int, rng) -> tuple[MultiGraph, GrowthTrace]:
    """Each of the m edges of an arriving vertex picks a uniform older vertex."""
    if n < 2:
        raise ValueError("n must be >= 2")
    if m < 1:
        raise ValueError("m must be >= 1")
    rows = n - 2
    vmax = np.arange(2, n, dtype=float)[:, None]  # v-1 for v = 3..n
    targets = (rng.random((rows, m)) * vmax).astype(np.int64) + 1
    trace = GrowthTrace(targets=targets, init_edges=tuple((2, 1) for _ in range(m)))
    return _growth_graph(n, trace), trace


def yule_arrival_times(n: int, rng) -> np.ndarray:
    """Arrival times of a pure-birth process growing at rate equal to its size.

    times[0] = 0 and times[k] - times[k-1] ~ Exp(rate k), so the
    population at time t grows like e^t.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    t = np.zeros(n)
    if n > 1:
        rates = np.arange(1, n, dtype=float)
        t[1:] = np.cumsum(rng.exponential(1.0 / rates))
    return t
