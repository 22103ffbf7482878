"""Structural analysis of generated graphs.

Connected components, exact diameters (iFUB), degree statistics with a
tail-exponent fit, layer and band diagnostics, sector-run statistics,
deterministic geometric consistency checks, and greedy routing. All
functions take an immutable :class:`~hrg.graphgen.Graph` or
:class:`~hrg.sampling.PointSet` and are safe to run concurrently.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components as _scipy_components

from ._util import concatenated_ranges
from .geometry import ModelParams, PolarPoint, angle_gaps, pair_distances
from .graphgen import Graph, layer_of_radius
from .sampling import PointSet

__all__ = [
    "ComponentReport",
    "DegreeStats",
    "BandDiagnostics",
    "InnerBandReach",
    "UnderpassResult",
    "RouteResult",
    "bfs_distances",
    "connected_components",
    "component_report",
    "exact_diameter",
    "degree_stats",
    "layer_index",
    "inner_band_radius",
    "inner_band",
    "is_between",
    "max_empty_sector_run",
    "band_diagnostics",
    "check_underpass",
    "check_core_clique",
    "core_node_ids",
    "inner_band_hops",
    "greedy_route",
]

# Components no larger than this get their diameter from all-pairs BFS;
# larger ones go through iFUB.
_SMALL_COMPONENT = 512


def bfs_distances(g: Graph, sources) -> np.ndarray:
    """Hop distances from a source set; -1 marks unreachable nodes."""
    dist = np.full(g.n, -1, dtype=np.int64)
    frontier = np.atleast_1d(np.asarray(sources, dtype=np.int64))
    if frontier.size == 0:
        return dist
    dist[frontier] = 0
    level = 0
    while frontier.size:
        level += 1
        counts = g.indptr[frontier + 1] - g.indptr[frontier]
        nbrs = g.indices[concatenated_ranges(g.indptr[frontier], counts)]
        nbrs = nbrs[dist[nbrs] < 0]
        if nbrs.size == 0:
            break
        mark = np.zeros(g.n, dtype=bool)
        mark[nbrs] = True
        frontier = np.nonzero(mark)[0]
        dist[frontier] = level
    return dist


def connected_components(g: Graph) -> np.ndarray:
    """Component label per node; the label is the smallest node id the
    component contains, which makes the labeling deterministic."""
    if g.n == 0:
        return np.empty(0, dtype=np.int64)
    mat = csr_matrix(
        (np.ones(g.indices.size, dtype=np.int8), g.indices, g.indptr),
        shape=(g.n, g.n),
    )
    count, raw = _scipy_components(mat, directed=False)
    first = np.full(count, g.n, dtype=np.int64)
    np.minimum.at(first, raw, np.arange(g.n, dtype=np.int64))
    return first[raw]


def _component_nodes(labels: np.ndarray, label: int) -> np.ndarray:
    return np.nonzero(labels == label)[0]


def _apsp_diameter(g: Graph, nodes: np.ndarray) -> int:
    """Exact diameter of a small connected component by BFS from every
    node; kept independent of the iFUB path so either can check the
    other."""
    node_list = [int(v) for v in nodes]
    best = 0
    for s in node_list:
        dist = {s: 0}
        queue = deque([s])
        far = 0
        while queue:
            u = queue.popleft()
            du = dist[u] + 1
            for v in g.neighbors(u):
                v = int(v)
                if v not in dist:
                    dist[v] = du
                    far = max(far, du)
                    queue.append(v)
        if len(dist) != len(node_list):
            raise ValueError("component is not connected")
        best = max(best, far)
    return best


def exact_diameter(g: Graph, component) -> int:
    """Exact hop diameter of a connected component via iFUB.

    Strategy: BFS layering from the highest-degree node of the component,
    a double sweep for the initial lower bound, then eccentricity
    refutation level by level from the top. The result equals the maximum
    over all single-source BFS eccentricities; disconnected input raises.
    """
    comp = np.unique(np.asarray(component, dtype=np.int64))
    if comp.size == 0:
        raise ValueError("empty component")
    if comp.size == 1:
        return 0
    start = int(comp[np.argmax(g.degrees[comp])])
    d_root = bfs_distances(g, start)
    if np.any(d_root[comp] < 0):
        raise ValueError("component is not connected")
    ecc_root = int(d_root[comp].max())
    far = int(comp[d_root[comp] == ecc_root][0])
    d_far = bfs_distances(g, far)
    lower = int(d_far[comp].max())
    level = ecc_root
    upper = 2 * ecc_root
    while lower < upper and level > 0:
        for v in comp[d_root[comp] == level]:
            ecc = int(bfs_distances(g, int(v))[comp].max())
            lower = max(lower, ecc)
        if lower > 2 * (level - 1):
            return lower
        upper = 2 * (level - 1)
        level -= 1
    return lower


@dataclass(frozen=True, eq=False)
class ComponentReport:
    """Component structure: sizes in descending order, the giant (largest,
    ties broken by smallest contained node id), and exact diameters."""

    labels: np.ndarray
    sizes: list[int]
    giant_label: int
    giant_size: int
    second_size: int
    giant_diameter: int
    max_component_diameter: int

    def nodes_of(self, label: int) -> np.ndarray:
        return _component_nodes(self.labels, label)


def component_report(g: Graph, with_diameters: bool = True) -> ComponentReport:
    labels = connected_components(g)
    if g.n == 0:
        return ComponentReport(labels, [], -1, 0, 0, 0, 0)
    uniq, counts = np.unique(labels, return_counts=True)
    order = np.lexsort((uniq, -counts))
    uniq, counts = uniq[order], counts[order]
    giant_label = int(uniq[0])
    giant_size = int(counts[0])
    second_size = int(counts[1]) if counts.size > 1 else 0

    giant_diameter = 0
    max_diameter = 0
    if with_diameters:
        for label, size in zip(uniq, counts):
            nodes = _component_nodes(labels, int(label))
            if size <= _SMALL_COMPONENT:
                dia = _apsp_diameter(g, nodes) if size > 1 else 0
            else:
                dia = exact_diameter(g, nodes)
            if int(label) == giant_label:
                giant_diameter = dia
            max_diameter = max(max_diameter, dia)
    return ComponentReport(
        labels=labels,
        sizes=[int(c) for c in counts],
        giant_label=giant_label,
        giant_size=giant_size,
        second_size=second_size,
        giant_diameter=giant_diameter,
        max_component_diameter=max_diameter,
    )


@dataclass(frozen=True, eq=False)
class DegreeStats:
    """Degree histogram plus a discrete maximum-likelihood tail exponent.

    ``beta_hat = 1 + k / sum(ln(d_i / (x_min - 1/2)))`` over the k degrees
    >= x_min. The fit is flagged unreliable below 50 tail samples.
    """

    histogram: np.ndarray
    mean_degree: float
    beta_hat: float
    x_min: int
    tail_size: int
    reliable: bool
    beta_theory: float
    delta_theory: float


def degree_stats(g: Graph, tail_floor: int = 10, min_tail: int = 50) -> DegreeStats:
    deg = g.degrees
    params = g.pointset.params
    hist = np.bincount(deg, minlength=1) if g.n else np.zeros(1, dtype=np.int64)
    mean = 2.0 * g.m / g.n if g.n else 0.0
    x_min = tail_floor
    tail = deg[deg >= x_min]
    reliable = tail.size >= min_tail
    if tail.size:
        denom = float(np.log(tail / (x_min - 0.5)).sum())
        beta_hat = 1.0 + tail.size / denom if denom > 0 else math.nan
    else:
        beta_hat = math.nan
    return DegreeStats(
        histogram=hist,
        mean_degree=mean,
        beta_hat=beta_hat,
        x_min=x_min,
        tail_size=int(tail.size),
        reliable=bool(reliable),
        beta_theory=params.degree_exponent,
        delta_theory=params.mean_degree,
    )


def layer_index(p: PolarPoint, params: ModelParams) -> int:
    """Layer of a point: layer i holds radii in (R-i, R-i+1]."""
    return int(layer_of_radius(p.r, params.R))


def inner_band_radius(params: ModelParams, c: float = 1.0) -> float:
    """Boundary radius of the inner band, R - ln(R)/(1-alpha) - c."""
    if params.alpha >= 1.0:
        raise ValueError("inner band is undefined for alpha >= 1")
    return params.R - math.log(params.R) / (1.0 - params.alpha) - c


def inner_band(p: PolarPoint, params: ModelParams, c: float = 1.0) -> bool:
    """True iff the point lies in the inner band."""
    return p.r <= inner_band_radius(params, c)


def core_node_ids(g: Graph) -> np.ndarray:
    """Nodes with radius at most R/2; they always form a clique."""
    ps = g.pointset
    return np.nonzero(ps.r <= ps.params.R / 2.0)[0]


def max_empty_sector_run(ps: PointSet, params: ModelParams, c: float = 1.0) -> int:
    """Longest circular run of consecutive empty sectors, out of n equal
    sectors, where a sector counts as empty when it holds no inner-band
    node."""
    n = params.n
    bound = inner_band_radius(params, c)
    inner_phi = ps.phi[ps.r <= bound]
    if inner_phi.size == 0:
        return n
    sector = np.minimum((inner_phi / (2.0 * math.pi) * n).astype(np.int64), n - 1)
    occupied = np.unique(sector)
    if occupied.size == 1:
        return n - 1
    gaps = np.diff(occupied) - 1
    wrap = occupied[0] + n - occupied[-1] - 1
    return int(max(gaps.max(), wrap))


@dataclass(frozen=True, eq=False)
class BandDiagnostics:
    """Per-node layer/band membership plus sector occupancy summaries."""

    inner_c: float
    layer: np.ndarray
    inner_mask: np.ndarray
    sectors: int
    max_empty_sector_run: int
    window_k: int
    max_nodes_in_window: int


def band_diagnostics(ps: PointSet, params: ModelParams, c: float = 1.0) -> BandDiagnostics:
    n = params.n
    layer = layer_of_radius(ps.r, params.R)
    inner_mask = ps.r <= inner_band_radius(params, c)
    run = max_empty_sector_run(ps, params, c)
    if n > 1:
        k = min(n, int(math.ceil(math.log(n) ** (1.0 / (1.0 - params.alpha)))))
    else:
        k = 1
    if len(ps):
        sector = np.minimum((ps.phi / (2.0 * math.pi) * n).astype(np.int64), n - 1)
        counts = np.bincount(sector, minlength=n)
        if k >= n:
            max_window = int(counts.sum())
        else:
            doubled = np.concatenate((counts, counts[: k - 1]))
            sums = np.cumsum(np.concatenate(([0], doubled)))
            max_window = int((sums[k:] - sums[:-k]).max())
    else:
        max_window = 0
    return BandDiagnostics(
        inner_c=c,
        layer=layer,
        inner_mask=inner_mask,
        sectors=n,
        max_empty_sector_run=run,
        window_k=k,
        max_nodes_in_window=max_window,
    )


def _gap(u: PolarPoint, v: PolarPoint) -> float:
    return float(angle_gaps(u.phi, v.phi))


def is_between(u: PolarPoint, v: PolarPoint, w: PolarPoint, tol: float = 1e-9) -> bool:
    """True iff v lies angularly between u and w: the small angles satisfy
    gap(u,v) + gap(v,w) = gap(u,w) within ``tol``."""
    return abs(_gap(u, v) + _gap(v, w) - _gap(u, w)) <= tol


@dataclass(frozen=True)
class UnderpassResult:
    violations: int
    tested: int
    attempts: int


def check_underpass(g: Graph, trials: int, seed: int = 0, tol: float = 1e-9) -> UnderpassResult:
    """Sample edge/between-node triples and verify the forced edges.

    For a sampled edge {u, w} and a node v angularly between them: if v's
    radius is at most both endpoint radii, v must be adjacent to both; if
    it is at most r_u but at least r_w, v must be adjacent to w. The count
    of violations is returned and must be zero, as the property is plain
    geometry, not a random event.
    """
    if g.m == 0 or g.n < 3:
        return UnderpassResult(0, 0, 0)
    ps = g.pointset
    phi, r = ps.phi, ps.r
    order = np.argsort(phi, kind="stable")
    sorted_phi = phi[order]
    doubled_vals = np.concatenate((sorted_phi, sorted_phi + 2.0 * math.pi))
    doubled_ids = np.concatenate((order, order))
    rng = np.random.default_rng(seed)
    violations = 0
    tested = 0
    attempts = 0
    max_attempts = 100 * trials + 1000
    while tested < trials and attempts < max_attempts:
        attempts += 1
        u, w = (int(x) for x in g.edges[rng.integers(g.m)])
        fwd = (phi[w] - phi[u]) % (2.0 * math.pi)
        if fwd <= math.pi:
            arc_lo, width = phi[u], fwd
        else:
            arc_lo, width = phi[w], 2.0 * math.pi - fwd
        if width == 0.0:
            continue
        lo = int(np.searchsorted(doubled_vals, arc_lo, side="left"))
        hi = int(np.searchsorted(doubled_vals, arc_lo + width, side="right"))
        cands = doubled_ids[lo:hi]
        cands = cands[(cands != u) & (cands != w)]
        if cands.size == 0:
            continue
        v = int(cands[rng.integers(cands.size)])
        pu, pv, pw = ps.point(u), ps.point(v), ps.point(w)
        if abs(_gap(pu, pv) + _gap(pv, pw) - _gap(pu, pw)) > tol:
            continue
        tested += 1
        if r[v] <= r[u] and r[v] <= r[w]:
            if not (g.has_edge(v, u) and g.has_edge(v, w)):
                violations += 1
        elif r[v] <= r[u] and r[v] >= r[w]:
            if not g.has_edge(v, w):
                violations += 1
        elif r[v] <= r[w] and r[v] >= r[u]:
            if not g.has_edge(v, u):
                violations += 1
    return UnderpassResult(violations=violations, tested=tested, attempts=attempts)


def check_core_clique(g: Graph) -> bool:
    """True iff every pair of nodes with radius <= R/2 is adjacent."""
    core = core_node_ids(g)
    for a in range(core.size):
        for b in range(a + 1, core.size):
            if not g.has_edge(int(core[a]), int(core[b])):
                return False
    return True


@dataclass(frozen=True)
class InnerBandReach:
    """Hop distances from the central clique to the inner band."""

    max_hops: int
    pairwise_bound: int
    anomalies: int
    inner_count: int
    core_count: int
    core_empty: bool


def inner_band_hops(g: Graph, params: ModelParams, c: float = 1.0) -> InnerBandReach:
    """Maximum BFS hop distance from the core (radius <= R/2) over the
    inner-band nodes.

    Inner-band nodes unreachable from the core are counted as anomalies
    rather than failures; the implied bound on inner-band pairwise
    distances is 2 * max + 1.
    """
    core = core_node_ids(g)
    bound = inner_band_radius(params, c)
    inner = np.nonzero(g.pointset.r <= bound)[0]
    if core.size == 0:
        return InnerBandReach(0, 0, int(inner.size), int(inner.size), 0, True)
    dist = bfs_distances(g, core)
    hops = dist[inner]
    reachable = hops[hops >= 0]
    max_hops = int(reachable.max()) if reachable.size else 0
    anomalies = int(np.count_nonzero(hops < 0))
    return InnerBandReach(
        max_hops=max_hops,
        pairwise_bound=2 * max_hops + 1,
        anomalies=anomalies,
        inner_count=int(inner.size),
        core_count=int(core.size),
        core_empty=False,
    )


@dataclass(frozen=True)
class RouteResult:
    success: bool
    path: list[int] = field(default_factory=list)

    @property
    def hops(self) -> int:
        return len(self.path) - 1


def greedy_route(g: Graph, s: int, t: int) -> RouteResult:
    """Greedy geometric routing: repeatedly forward to the neighbor
    hyperbolically closest to the target, ties broken by smallest node id.

    Succeeds on reaching t; fails when no neighbor improves the current
    distance to t (a local minimum). The distance strictly decreases along
    the route, so termination is guaranteed.
    """
    if s == t:
        return RouteResult(True, [s])
    ps = g.pointset
    rt, pt = float(ps.r[t]), float(ps.phi[t])
    cur = int(s)
    cur_dist = float(pair_distances(ps.r[cur], ps.phi[cur], rt, pt))
    path = [cur]
    while True:
        nbrs = g.neighbors(cur)
        if nbrs.size == 0:
            return RouteResult(False, path)
        dists = np.atleast_1d(pair_distances(ps.r[nbrs], ps.phi[nbrs], rt, pt))
        k = int(np.argmin(dists))  # neighbor lists are sorted, argmin takes lowest id on ties
        nxt = int(nbrs[k])
        if nxt == t:
            path.append(t)
            return RouteResult(True, path)
        if not dists[k] < cur_dist:
            return RouteResult(False, path)
        cur, cur_dist = nxt, float(dists[k])
        path.append(cur)
