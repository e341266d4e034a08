"""Susceptibility tracking for percolated growing graphs and the associated
drift polynomial, fixed points, and growth exponent."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .generators import yule_arrival_times
from .graphs import ComponentDecomposition
from .percolation import ua_pi_c


def susceptibility(dec: ComponentDecomposition, k: int) -> float:
    """k-th susceptibility n^-1 sum |C|^k; isolated vertices count as size 1."""
    if k < 2:
        raise ValueError("susceptibility order must be >= 2")
    return float(np.sum(dec.sizes.astype(float) ** k) / dec.n)


# ---------------------------------------------------------------------------
# Drift polynomial of the s2 evolution, its fixed points, and the exponent.
# ---------------------------------------------------------------------------

def susceptibility_drift(s: float, pi: float) -> float:
    """One-step drift of s2 for percolated two-edge uniform attachment:
    F(s) = 2 pi^2 s^2 + (4 pi - 1) s + 1."""
    return 2.0 * pi * pi * s * s + (4.0 * pi - 1.0) * s + 1.0


@dataclass(frozen=True)
class FixedPointReport:
    lambda1: float          # stable root; the limiting s2
    lambda2: float          # unstable root
    b: float                # leading coefficient 2 pi^2
    supercritical: bool


def fixed_points(pi: float) -> FixedPointReport:
    """Roots of the drift polynomial F(s) = 2 pi^2 (s - l1)(s - l2).

    Real roots with l1 < l2 exist for pi below the critical retention
    (2 - sqrt 2)/4; above it the report is flagged supercritical and the
    roots are NaN. l1 is computed through l2 via the product of roots
    l1 l2 = 1/(2 pi^2), which avoids cancellation for small pi.
    """
    if not 0.0 < pi < 1.0:
        raise ValueError("pi must lie in (0, 1)")
    b = 2.0 * pi * pi
    if pi > ua_pi_c():
        return FixedPointReport(math.nan, math.nan, b, True)
    disc = 8.0 * pi * pi - 8.0 * pi + 1.0
    root = math.sqrt(max(disc, 0.0))
    lambda2 = (1.0 - 4.0 * pi + root) / (4.0 * pi * pi)
    lambda1 = 1.0 / (b * lambda2)
    return FixedPointReport(lambda1, lambda2, b, False)


def s2_infinity(pi: float) -> float:
    """Limiting susceptibility for subcritical retention on two-edge uniform attachment."""
    rep = fixed_points(pi)
    if rep.supercritical:
        raise ValueError("s2 limit only exists below the critical retention")
    return rep.lambda1


def alpha_exponent(pi: float) -> float:
    """Growth exponent of the largest subcritical component:
    alpha(pi) = (1 - sqrt(8 pi^2 - 8 pi + 1)) / 2, for pi <= (2 - sqrt 2)/4."""
    if pi < 0 or pi > ua_pi_c() + 1e-15:
        raise ValueError("exponent defined for 0 <= pi <= critical retention")
    disc = max(8.0 * pi * pi - 8.0 * pi + 1.0, 0.0)
    return 0.5 * (1.0 - math.sqrt(disc))


# ---------------------------------------------------------------------------
# Percolate-as-you-grow tracking with O(1) susceptibility updates.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SusceptibilityTrack:
    """Checkpointed trajectory of a single percolated growth run.

    ``s2_next`` (present when requested) holds s2 right after the next
    arrival, for one-step increment diagnostics. ``s4`` is tracked only on
    demand since fourth powers are the expensive part.
    """

    ns: np.ndarray
    s2: np.ndarray
    s3: np.ndarray
    cmax: np.ndarray
    c1: np.ndarray
    pi: float
    m: int
    s4: np.ndarray = None
    s2_next: np.ndarray = None
    retained_edges: tuple = None  # (u, v, arrival) arrays when requested


def log_checkpoints(n_max: int, per_decade: int = 8) -> np.ndarray:
    """Geometrically spaced checkpoint sizes in [3, n_max], always ending at n_max."""
    pts = np.unique(np.geomspace(3, n_max, max(2, int(per_decade * math.log10(max(n_max, 10))))).astype(np.int64))
    if pts[-1] != n_max:
        pts = np.append(pts, n_max)
    return pts


class _GrowthState:
    """Union-find plus running power sums over component sizes."""

    __slots__ = ("parent", "size", "s2", "s3", "s4", "cmax", "track4", "n")

    def __init__(self, n_max: int, track4: bool):
        self.parent = list(range(n_max + 1))
        self.size = [1] * (n_max + 1)
        self.s2 = 0.0
        self.s3 = 0.0
        self.s4 = 0.0
        self.cmax = 1
        self.track4 = track4
        self.n = 0

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def add_vertex(self):
        self.n += 1
        self.s2 += 1.0
        self.s3 += 1.0
        if self.track4:
            self.s4 += 1.0

    def union(self, a: int, b: int):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        x, y = self.size[ra], self.size[rb]
        if x < y:
            ra, rb = rb, ra
            x, y = y, x
        self.parent[rb] = ra
        z = x + y
        self.size[ra] = z
        self.s2 += float(z * z - x * x - y * y)
        self.s3 += float(z ** 3 - x ** 3 - y ** 3)
        if self.track4:
            self.s4 += float(z ** 4 - x ** 4 - y ** 4)
        if z > self.cmax:
            self.cmax = z


def track_growth(n_max: int, m: int, pi: float, checkpoints, rng,
                 track_s4: bool = False, record_next: bool = False,
                 record_edges: bool = False) -> SusceptibilityTrack:
    """Grow a uniform attachment graph, percolating each edge on arrival.

    Retaining an edge with probability pi at arrival time is equal in law
    to percolating the final graph, and lets the merge bookkeeping stay
    O(1) per edge. Checkpoints record s2, s3 (and s4 on request), the
    largest component, and the component of vertex 1.
    """
    if not 0.0 <= pi <= 1.0:
        raise ValueError("retention probability must lie in [0, 1]")
    checkpoints = np.unique(np.asarray(checkpoints, dtype=np.int64))
    if checkpoints.min() < 2 or checkpoints.max() > n_max:
        raise ValueError("checkpoints must lie in [2, n_max]")
    st = _GrowthState(n_max, track_s4)
    edges = [] if record_edges else None
    st.add_vertex()  # vertex 1
    st.add_vertex()  # vertex 2
    for _ in range(m):  # seed edges between 2 and 1
        if rng.random() < pi:
            st.union(2, 1)
            if record_edges:
                edges.append((2, 1))

    rec = {int(c): None for c in checkpoints.tolist()}
    rec_next = {}
    want_next = set(rec) if record_next else set()

    def snapshot(n):
        return (st.s2 / n, st.s3 / n, (st.s4 / n if track_s4 else math.nan),
                st.cmax, st.size[st.find(1)])

    if 2 in rec:
        rec[2] = snapshot(2)

    chunk = 1 << 15
    v = 3
    while v <= n_max:
        hi = min(n_max, v + chunk - 1)
        count = hi - v + 1
        us = rng.random((count, m))
        coins = rng.random((count, m))
        for i in range(count):
            vv = v + i
            st.add_vertex()
            row_u = us[i]
            row_c = coins[i]
            for j in range(m):
                if row_c[j] < pi:
                    target = 1 + int(row_u[j] * (vv - 1))
                    st.union(vv, target)
                    if edges is not None:
                        edges.append((vv, target))
            if vv in rec:
                rec[vv] = snapshot(vv)
            if (vv - 1) in want_next:
                rec_next[vv - 1] = st.s2 / vv
        v = hi + 1

    ns = checkpoints
    s2 = np.array([rec[int(c)][0] for c in ns])
    s3 = np.array([rec[int(c)][1] for c in ns])
    s4 = np.array([rec[int(c)][2] for c in ns]) if track_s4 else None
    cmax = np.array([rec[int(c)][3] for c in ns], dtype=np.int64)
    c1 = np.array([rec[int(c)][4] for c in ns], dtype=np.int64)
    s2n = None
    if record_next:
        s2n = np.array([rec_next.get(int(c), math.nan) for c in ns])
    kept = None
    if record_edges:
        arr = np.array(edges, dtype=np.int64).reshape(-1, 2)
        kept = (arr[:, 0], arr[:, 1])
    return SusceptibilityTrack(ns=ns, s2=s2, s3=s3, cmax=cmax, c1=c1,
                               pi=pi, m=m, s4=s4, s2_next=s2n, retained_edges=kept)


@dataclass(frozen=True)
class ComponentOneTrajectory:
    ns: np.ndarray
    times: np.ndarray       # continuous arrival times of the checkpoints
    c1: np.ndarray
    martingale: np.ndarray  # |C1(t)| exp(-int (2 pi^2 s2 + 2 pi))


def component_one_trajectory(n_max: int, m: int, pi: float, checkpoints, rng) -> ComponentOneTrajectory:
    """Track the component of vertex 1 along the continuous-time embedding.

    Arrivals follow the pure-birth clock, s2 is piecewise constant between
    them, so the compensator integral accumulates exactly per interval.
    The resulting normalised size is a nonnegative supermartingale.
    """
    checkpoints = np.unique(np.asarray(checkpoints, dtype=np.int64))
    track = track_growth(n_max, m, pi, np.arange(2, n_max + 1), rng)
    times = yule_arrival_times(n_max, rng)  # times[k] = arrival of vertex k+1
    # integral of 2 pi^2 s2(N(u)) + 2 pi over [0, t_nmax]
    integral = np.zeros(n_max)
    g = 2.0 * pi * pi * track.s2 + 2.0 * pi  # indexed by n = 2..n_max
    integral[1] = (2.0 * pi * pi + 2.0 * pi) * times[1]  # s2 = 1 before vertex 2
    for k in range(2, n_max):
        integral[k] = integral[k - 1] + g[k - 2] * (times[k] - times[k - 1])
    idx = checkpoints - 1
    c1 = track.c1[checkpoints - 2]
    mart = c1 * np.exp(-integral[idx])
    return ComponentOneTrajectory(ns=checkpoints, times=times[idx], c1=c1, martingale=mart)


# ---------------------------------------------------------------------------
# Stochastic-approximation residual diagnostics.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SAResidualReport:
    ns: np.ndarray
    residual: np.ndarray        # (n+1) * (s2(n+1) - s2(n)) - F(s2(n))
    s4_over_n: np.ndarray       # scale of the deterministic error term
    s3: np.ndarray              # scale of the martingale noise


def sa_residual_check(track: SusceptibilityTrack, pi: float) -> SAResidualReport:
    """One-step increments of s2 against the drift polynomial.

    Residuals combine the bounded error term (order s4/n) with the
    martingale noise (conditional second moment of order s3^2); their
    mean across replicas should vanish and their envelope should follow
    the s4/n scale.
    """
    if track.s2_next is None or track.s4 is None:
        raise ValueError("track must be recorded with record_next=True and track_s4=True")
    ns = track.ns.astype(float)
    drift = np.array([susceptibility_drift(s, pi) for s in track.s2])
    residual = (ns + 1.0) * (track.s2_next - track.s2) - drift
    return SAResidualReport(ns=track.ns, residual=residual,
                            s4_over_n=track.s4 / ns, s3=track.s3)


def sa_residual_summary(tracks, pi: float):
    """Aggregate residual reports across replicas: mean, stderr, and scales."""
    reports = [sa_residual_check(t, pi) for t in tracks]
    res = np.vstack([r.residual for r in reports])
    s4n = np.vstack([r.s4_over_n for r in reports])
    return {
        "ns": reports[0].ns,
        "mean": res.mean(axis=0),
        "stderr": res.std(axis=0, ddof=1) / math.sqrt(len(reports)),
        "abs_mean": np.abs(res).mean(axis=0),
        "s4_over_n": s4n.mean(axis=0),
    }
