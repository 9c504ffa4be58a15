"""Per-episode network metrics.

Every metric is computed over the ACTIVE node set (degree >= 1): silent
characters never enter a denominator.  Topology metrics treat the graph as
unweighted; edge weights feed node strength only.  All iteration runs in
sorted node/pair order so float sums are identical across runs and hash
seeds.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

from .errors import (
    CharnetError,
    ConvergenceError,
    DegenerateGraphError,
    EmptyVectorError,
    NoEdgesError,
)
from .graph import CharacterId, EpisodeGraph, EpisodeKey, connected_components


@dataclass(frozen=True)
class MetricsConfig:
    """Knobs for metric computation, echoed into every report."""

    efficiency_mode: str = "component-mean"
    eigen_tol: float = 1e-10
    eigen_max_iter: int = 10000


@dataclass
class CentralityVector:
    """One score per active node."""

    kind: str  # degree | strength | harmonic | eigenvector
    scores: dict[CharacterId, float]


@dataclass
class EpisodeMetrics:
    """The 12-column metric row for one episode."""

    key: EpisodeKey
    ordinal: int = 0
    active_nodes: int = 0
    density: float = 0.0
    efficiency: float = 0.0
    transitivity: float = 0.0
    strength_max: float = 0.0
    strength_std: float = 0.0
    degree_max: int = 0
    degree_std: float = 0.0
    harmonic_max: float = 0.0
    harmonic_std: float = 0.0
    eigen_max: float = 0.0
    eigen_std: float = 0.0
    warnings: list[str] = field(default_factory=list)


@dataclass(frozen=True)
class MetricColumn:
    """Names one metric column everywhere it appears."""

    attr: str  # EpisodeMetrics field name, also the CLI --metric spelling
    header: str  # metrics CSV column header
    label: str  # correlation-table row label
    integer: bool = False  # rendered without decimals


METRICS: tuple[MetricColumn, ...] = (
    MetricColumn("active_nodes", "Active_Nodes", "Active Nodes", integer=True),
    MetricColumn("density", "Density", "Density"),
    MetricColumn("efficiency", "Efficiency", "Efficiency"),
    MetricColumn("transitivity", "Transitivity", "Transitivity"),
    MetricColumn("strength_max", "Strength_max", "Max Strength"),
    MetricColumn("strength_std", "Strength_std", "Std Strength"),
    MetricColumn("degree_max", "Degree_max", "Max Degree", integer=True),
    MetricColumn("degree_std", "Degree_std", "Std Degree"),
    MetricColumn("harmonic_max", "Harmonic_max", "Max Harmonic"),
    MetricColumn("harmonic_std", "Harmonic_std", "Std Harmonic"),
    MetricColumn("eigen_max", "Eigen_max", "Max Eigen"),
    MetricColumn("eigen_std", "Eigen_std", "Std Eigen"),
)

METRIC_BY_ATTR = {column.attr: column for column in METRICS}

EFFICIENCY_MODES = ("component-mean", "neighborhood")


def active_node_set(graph) -> set[CharacterId]:
    """Nodes with at least one edge."""
    return {v for pair in graph.edges for v in pair}


def active_nodes(graph) -> int:
    return len(active_node_set(graph))


def density(graph) -> float:
    """Realized fraction of possible edges among active nodes: 2m / (n(n-1))."""
    n = active_nodes(graph)
    if n < 2:
        raise DegenerateGraphError(f"density needs at least 2 active nodes, got {n}")
    return 2.0 * len(graph.edges) / (n * (n - 1))


def node_strengths(graph) -> CentralityVector:
    """Total conversation seconds per active node (sum of incident weights)."""
    scores: dict[CharacterId, float] = {}
    for pair in sorted(graph.edges):
        weight = graph.edges[pair]
        for v in pair:
            scores[v] = scores.get(v, 0.0) + weight
    return CentralityVector("strength", scores)


def _induced_adjacency(graph, nodes: set[CharacterId]) -> dict[CharacterId, set[CharacterId]]:
    adj: dict[CharacterId, set[CharacterId]] = {v: set() for v in nodes}
    for a, b in graph.edges:
        if a in adj and b in adj:
            adj[a].add(b)
            adj[b].add(a)
    return adj


def _hop_distances(adj: dict[CharacterId, set[CharacterId]], source: CharacterId) -> dict[CharacterId, int]:
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def _efficiency_within(adj: dict[CharacterId, set[CharacterId]]) -> float:
    """Mean reciprocal hop distance over ordered node pairs; 0 below 2 nodes."""
    n = len(adj)
    if n < 2:
        return 0.0
    total = 0.0
    for source in sorted(adj):
        reached = _hop_distances(adj, source)
        for v in sorted(reached):
            if v != source:
                total += 1.0 / reached[v]
    return total / (n * (n - 1))


def global_efficiency(graph) -> float:
    """Efficiency of the whole graph as given; unreachable pairs contribute 0."""
    adj = _induced_adjacency(graph, set(graph.nodes))
    return _efficiency_within(adj)


def efficiency_metric(graph, mode: str = "component-mean") -> float:
    """The Efficiency column.

    component-mean: unweighted mean of global efficiency over connected
    components with >= 2 nodes.  neighborhood: mean over active nodes of
    the efficiency of the subgraph induced by each node's neighbors.
    """
    if mode == "component-mean":
        parts = [part for part in connected_components(graph) if len(part) >= 2]
        if not parts:
            raise DegenerateGraphError("no connected component has 2 or more nodes")
        values = [_efficiency_within(_induced_adjacency(graph, part)) for part in parts]
        return sum(values) / len(values)
    if mode == "neighborhood":
        active = active_node_set(graph)
        if not active:
            raise DegenerateGraphError("no active nodes")
        adj = _induced_adjacency(graph, active)
        values = [
            _efficiency_within(_induced_adjacency(graph, adj[v])) for v in sorted(active)
        ]
        return sum(values) / len(values)
    raise ValueError(f"unknown efficiency mode {mode!r}")


def transitivity(graph) -> float:
    """3 x triangles / triads; a triad is a 2-path centered at a node."""
    adj = _induced_adjacency(graph, active_node_set(graph))
    triads = sum(len(nbrs) * (len(nbrs) - 1) // 2 for nbrs in adj.values())
    if triads == 0:
        return 0.0
    # each triangle contributes one common neighbor per edge, so this sum is 3 * triangles
    triangle_paths = sum(len(adj[a] & adj[b]) for a, b in sorted(graph.edges))
    return triangle_paths / triads


def degree_vector(graph) -> CentralityVector:
    """Unweighted edge count per active node."""
    adj = _induced_adjacency(graph, active_node_set(graph))
    return CentralityVector("degree", {v: float(len(adj[v])) for v in adj})


def harmonic_vector(graph) -> CentralityVector:
    """Sum of reciprocal hop distances from every other active node.

    Unreachable pairs contribute 0; no normalization by n - 1.
    """
    active = active_node_set(graph)
    adj = _induced_adjacency(graph, active)
    scores: dict[CharacterId, float] = {}
    for u in sorted(active):
        reached = _hop_distances(adj, u)
        scores[u] = sum(1.0 / reached[v] for v in sorted(reached) if v != u)
    return CentralityVector("harmonic", scores)


def eigenvector_vector(
    graph, tol: float = 1e-10, max_iter: int = 10000
) -> CentralityVector:
    """Dominant eigenvector of the unweighted adjacency over active nodes.

    Power iteration from the uniform positive vector, normalized to unit
    Euclidean norm each step; converged when successive iterates differ by
    less than tol in max-norm.  Iterating with A + I instead of A leaves
    the eigenvectors unchanged but keeps bipartite graphs, whose extreme
    eigenvalues tie in magnitude, from oscillating forever.
    """
    if not graph.edges:
        raise NoEdgesError("eigenvector centrality needs at least one edge")
    nodes = sorted(active_node_set(graph))
    index = {v: i for i, v in enumerate(nodes)}
    neighbors: list[list[int]] = [[] for _ in nodes]
    for a, b in sorted(graph.edges):
        neighbors[index[a]].append(index[b])
        neighbors[index[b]].append(index[a])
    for row in neighbors:
        row.sort()

    n = len(nodes)
    x = [1.0 / math.sqrt(n)] * n
    delta = math.inf
    for _ in range(max_iter):
        y = [x[i] + sum(x[j] for j in neighbors[i]) for i in range(n)]
        norm = math.sqrt(sum(v * v for v in y))
        y = [v / norm for v in y]
        delta = max(abs(y[i] - x[i]) for i in range(n))
        x = y
        if delta < tol:
            return CentralityVector("eigenvector", dict(zip(nodes, x)))
    raise ConvergenceError(
        f"power iteration missed tol={tol:g} after {max_iter} iterations (last delta {delta:.3e})"
    )


def summarize(vec: CentralityVector) -> tuple[float, float]:
    """(max, population std) of a centrality vector."""
    if not vec.scores:
        raise EmptyVectorError(f"cannot summarize an empty {vec.kind} vector")
    values = [vec.scores[v] for v in sorted(vec.scores)]
    mean = sum(values) / len(values)
    variance = sum((v - mean) ** 2 for v in values) / len(values)
    return max(values), math.sqrt(variance)


def compute_episode_metrics(graph: EpisodeGraph, config: MetricsConfig | None = None) -> EpisodeMetrics:
    """Fill all 12 metric columns for one episode.

    A degenerate metric becomes 0 plus a warning; the row itself always
    comes back rectangular so downstream correlation never loses a column.
    """
    config = config or MetricsConfig()
    row = EpisodeMetrics(key=graph.key, ordinal=graph.ordinal)
    row.active_nodes = active_nodes(graph)
    if row.active_nodes == 0:
        row.warnings.append("DegenerateGraph: no active nodes, all metrics 0")
        return row

    def guarded(name: str, compute, fallback):
        try:
            return compute()
        except CharnetError as exc:
            row.warnings.append(f"{name}: {exc}")
            return fallback

    row.density = guarded("density", lambda: density(graph), 0.0)
    row.efficiency = guarded(
        "efficiency", lambda: efficiency_metric(graph, config.efficiency_mode), 0.0
    )
    row.transitivity = transitivity(graph)
    row.strength_max, row.strength_std = guarded(
        "strength", lambda: summarize(node_strengths(graph)), (0.0, 0.0)
    )
    degree_max, row.degree_std = guarded(
        "degree", lambda: summarize(degree_vector(graph)), (0.0, 0.0)
    )
    row.degree_max = int(degree_max)
    row.harmonic_max, row.harmonic_std = guarded(
        "harmonic", lambda: summarize(harmonic_vector(graph)), (0.0, 0.0)
    )
    row.eigen_max, row.eigen_std = guarded(
        "eigenvector",
        lambda: summarize(eigenvector_vector(graph, config.eigen_tol, config.eigen_max_iter)),
        (0.0, 0.0),
    )
    return row
