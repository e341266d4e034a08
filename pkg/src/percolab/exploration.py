"""Breadth-first exploration of the half-edge pairing model.

The exploration builds a uniform pairing while walking it. Each step l is
either a component start (a fresh vertex chosen proportional to degree
among undiscovered vertices, all its half-edges activated) or a pairing
(one active half-edge matched to a uniform unpaired one). The walk value
satisfies S(l) = S(l-1) + d_(l) * J_l - 2, where J_l flags a newly
discovered vertex of degree d_(l); within the k-th explored component the
active half-edge count equals S(l) + 2k, so the component closes exactly
when S first hits -2k. Every J=0 pairing joins two already-active
half-edges and is therefore a surplus edge.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .degrees import DegreeSequence
from .graphs import MultiGraph
from .limits import LimitPath


@dataclass(frozen=True)
class ExplorationTrace:
    """Per-step record of one full exploration.

    Arrays are indexed by step l = 1..L (position l-1). ``vertex`` holds
    the discovered vertex at J=1 steps and 0 otherwise; ``d_new`` its
    degree. ``boundaries[k-1]`` is tau_k, the step at which the k-th
    component closed. ``S`` excludes the initial S(0) = 0.
    """

    S: np.ndarray
    J: np.ndarray
    d_new: np.ndarray
    vertex: np.ndarray
    surplus_mark: np.ndarray
    boundaries: np.ndarray
    n: int

    @property
    def steps(self) -> int:
        return len(self.S)

    @property
    def n_components(self) -> int:
        return len(self.boundaries)


class _RandomChooser:
    """Uniform index choices backed by a numpy Generator."""

    def __init__(self, rng):
        self._rng = rng

    def pick(self, k: int) -> int:
        return int(self._rng.integers(k))


def _explore(degree_array, chooser):
    """Core state machine; returns (event lists, edge list).

    ``chooser.pick(k)`` must return a uniform index in range(k). All
    randomness flows through it, so an enumerating chooser can walk the
    full decision tree for exact-law tests.
    """
    deg = [int(x) for x in degree_array]
    n = len(deg)
    ell = sum(deg)
    if ell % 2 == 1:
        raise ValueError("total degree must be even")

    # half-edge h belongs to vertex_of[h]; offsets give each vertex's slice
    vertex_of = []
    half_ids = []
    start = 0
    for v1, dv in enumerate(deg, start=1):
        vertex_of.extend([v1] * dv)
        half_ids.append(range(start, start + dv))
        start += dv

    alive = list(range(ell))
    pos = list(range(ell))  # position of each half-edge in `alive`, -1 once dead

    def kill(h):
        i = pos[h]
        last = alive[-1]
        alive[i] = last
        pos[last] = i
        alive.pop()
        pos[h] = -1

    discovered = [False] * (n + 1)
    S = 0
    closed = 0
    ev_S, ev_J, ev_d, ev_vertex, ev_mark = [], [], [], [], []
    boundaries = []
    edges_u, edges_v = [], []

    def record(j, dv, vv, mark):
        nonlocal S, closed
        S += dv * j - 2
        ev_S.append(S)
        ev_J.append(j)
        ev_d.append(dv)
        ev_vertex.append(vv)
        ev_mark.append(mark)
        if S == -2 * (closed + 1):
            closed += 1
            boundaries.append(len(ev_S))

    while alive:
        # component start: uniform alive half-edge <=> vertex prop. to degree
        h0 = alive[chooser.pick(len(alive))]
        v = vertex_of[h0]
        discovered[v] = True
        record(1, deg[v - 1], v, 0)
        queue = [v]
        head = 0
        while head < len(queue):
            w = queue[head]
            head += 1
            for h in half_ids[w - 1]:
                if pos[h] < 0:
                    continue
                kill(h)
                f = alive[chooser.pick(len(alive))]
                kill(f)
                u = vertex_of[f]
                edges_u.append(w)
                edges_v.append(u)
                if discovered[u]:
                    record(0, 0, 0, 1)
                else:
                    discovered[u] = True
                    record(1, deg[u - 1], u, 0)
                    if deg[u - 1] > 1:
                        queue.append(u)

    events = (ev_S, ev_J, ev_d, ev_vertex, ev_mark, boundaries)
    return events, (edges_u, edges_v)


def explore_cm(d: DegreeSequence, rng) -> tuple[ExplorationTrace, MultiGraph]:
    """Explore a uniform pairing of d, building the trace and the realized graph.

    The sequential uniform partner choices make the resulting matching
    uniform, so the returned graph has exactly the configuration-model law.
    """
    events, (eu, ev) = _explore(d.d, _RandomChooser(rng))
    s, j, dn, vert, mark, bnd = events
    trace = ExplorationTrace(
        S=np.array(s, dtype=np.int64),
        J=np.array(j, dtype=np.int64),
        d_new=np.array(dn, dtype=np.int64),
        vertex=np.array(vert, dtype=np.int64),
        surplus_mark=np.array(mark, dtype=np.int64),
        boundaries=np.array(bnd, dtype=np.int64),
        n=d.n,
    )
    graph = MultiGraph(d.n, np.array(eu, dtype=np.int64), np.array(ev, dtype=np.int64))
    return trace, graph


def _interval_slices(trace: ExplorationTrace):
    lo = np.concatenate([[0], trace.boundaries[:-1]])
    return lo, trace.boundaries


def component_stats_from_trace(trace: ExplorationTrace):
    """Per explored component: (size, surplus, edges) read off the trace.

    Component k occupies steps (tau_{k-1}, tau_k]: one start step plus one
    step per edge, so edges = tau_k - tau_{k-1} - 1, the size is the
    number of J=1 steps, and the surplus the number of J=0 steps.
    """
    lo, hi = _interval_slices(trace)
    cumj = np.concatenate([[0], np.cumsum(trace.J)])
    sizes = cumj[hi] - cumj[lo]
    lengths = hi - lo
    edges = lengths - 1
    surplus = lengths - sizes
    return sizes, surplus, edges


def surplus_from_trace(trace: ExplorationTrace) -> np.ndarray:
    """Surplus of each explored component: count of pairings that hit an
    already-active half-edge; equals edges - size + 1 of the realized component."""
    if len(trace.boundaries) == 0 or trace.boundaries[-1] != trace.steps:
        raise ValueError("trace boundaries are malformed (exploration incomplete)")
    _, surplus, _ = component_stats_from_trace(trace)
    return surplus


def rewritten_process_check(trace: ExplorationTrace, d: DegreeSequence) -> bool:
    """Verify S(l) = sum of discovered degrees - 2l at every step.

    The discovered-degree sum is recomputed from the recorded vertex
    identities and the external degree sequence, so a corrupted trace
    (for instance a flipped J) fails the check.
    """
    dv = np.where(trace.J == 1, d.d[np.maximum(trace.vertex - 1, 0)], 0)
    discovered_sum = np.cumsum(dv)
    steps = np.arange(1, trace.steps + 1)
    return bool(np.all(discovered_sum - 2 * steps == trace.S))


def incremental_process_check(trace: ExplorationTrace) -> bool:
    """Verify the one-step identity S(l) - S(l-1) = d_(l) J_l - 2 on the records."""
    s_prev = np.concatenate([[0], trace.S[:-1]])
    return bool(np.all(trace.S - s_prev == trace.d_new * trace.J - 2))


def rescaled_path(trace: ExplorationTrace, time_scale: float, space_scale: float) -> LimitPath:
    """Embed the walk as a step path: value S(ceil(t * time_scale)) / space_scale."""
    if time_scale <= 0 or space_scale <= 0:
        raise ValueError("scales must be positive")
    values = np.concatenate([[0.0], trace.S / space_scale])
    return LimitPath(dt=1.0 / time_scale, values=values)


@dataclass(frozen=True)
class DriftEstimate:
    t: np.ndarray
    mean: np.ndarray          # Monte Carlo mean of d_(ceil(t n^{2/3})) - 2
    stderr: np.ndarray
    predicted: np.ndarray     # n^{-1/3} (lambda_n - t (sigma3 - 2 sigma2) / mu^2)
    lambda_n: float


def drift_estimate(d: DegreeSequence, t_grid, replicas: int, rng) -> DriftEstimate:
    """Monte Carlo mean of the walk's jump sizes along size-biased discovery order.

    The degree found at step l of the exploration is the l-th entry of a
    size-biased reordering. Early picks are degree-biased upward, which
    depletes large degrees and pushes the later mean below nu_n - 1; the
    predicted curve quantifies that with the third-moment slope.
    """
    from .degrees import size_biased_reordering

    t_grid = np.asarray(t_grid, dtype=float)
    n = d.n
    l_idx = np.maximum(np.ceil(t_grid * n ** (2.0 / 3.0)).astype(np.int64), 1)
    if l_idx.max() > n:
        raise ValueError("t grid runs past the end of the reordering")
    samples = np.empty((replicas, len(t_grid)))
    for r in range(replicas):
        perm = size_biased_reordering(d, rng)
        samples[r] = d.d[perm[l_idx - 1] - 1] - 2
    mean = samples.mean(axis=0)
    stderr = samples.std(axis=0, ddof=1) / np.sqrt(replicas)
    mu = d.ell / n
    sigma2 = float(np.mean(d.d.astype(float) ** 2))
    sigma3 = float(np.mean(d.d.astype(float) ** 3))
    lambda_n = (d.nu - 1.0) * n ** (1.0 / 3.0)
    predicted = n ** (-1.0 / 3.0) * (lambda_n - t_grid * (sigma3 - 2.0 * sigma2) / mu ** 2)
    return DriftEstimate(t=t_grid, mean=mean, stderr=stderr,
                         predicted=predicted, lambda_n=lambda_n)


# ---------------------------------------------------------------------------
# Trace serialization: CSV with columns l, S, J, d_new, surplus_mark.
# ---------------------------------------------------------------------------

def write_trace_csv(trace: ExplorationTrace, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["l", "S", "J", "d_new", "surplus_mark"])
        for i in range(trace.steps):
            writer.writerow([i + 1, trace.S[i], trace.J[i],
                             trace.d_new[i], trace.surplus_mark[i]])
