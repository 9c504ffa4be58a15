"""Character-network metrics for TV episodes and their correlation with
review scores.

Pipeline: parse per-episode segment graphs (ingest), aggregate them into
weighted episode graphs (graph), compute the 12-column metric suite
(metrics), rank-correlate each metric against review scores (stats), and
render tables, plots, and the manifest (report, cli).
"""

from .errors import CharnetError
from .graph import (
    UNREACHABLE,
    DistanceMap,
    EpisodeGraph,
    EpisodeKey,
    SegmentGraph,
    add_interaction,
    aggregate_segments,
    bfs_distances,
    connected_components,
)
from .ingest import (
    DatasetManifest,
    RatingsTable,
    load_dataset,
    parse_ratings_csv,
    parse_segment_file,
    serialize_episode,
)
from .metrics import (
    METRICS,
    CentralityVector,
    EpisodeMetrics,
    MetricsConfig,
    active_nodes,
    compute_episode_metrics,
    degree_vector,
    density,
    efficiency_metric,
    eigenvector_vector,
    global_efficiency,
    harmonic_vector,
    node_strengths,
    summarize,
    transitivity,
)
from .stats import (
    CorrelationReport,
    CorrelationResult,
    RankVector,
    correlate_all,
    permutation_pvalue,
    rank_with_ties,
    spearman_pvalue,
    spearman_rho,
)

__version__ = "0.1.0"

__all__ = [
    "CharnetError",
    "UNREACHABLE",
    "DistanceMap",
    "EpisodeGraph",
    "EpisodeKey",
    "SegmentGraph",
    "add_interaction",
    "aggregate_segments",
    "bfs_distances",
    "connected_components",
    "DatasetManifest",
    "RatingsTable",
    "load_dataset",
    "parse_ratings_csv",
    "parse_segment_file",
    "serialize_episode",
    "METRICS",
    "CentralityVector",
    "EpisodeMetrics",
    "MetricsConfig",
    "active_nodes",
    "compute_episode_metrics",
    "degree_vector",
    "density",
    "efficiency_metric",
    "eigenvector_vector",
    "global_efficiency",
    "harmonic_vector",
    "node_strengths",
    "summarize",
    "transitivity",
    "CorrelationReport",
    "CorrelationResult",
    "RankVector",
    "correlate_all",
    "permutation_pvalue",
    "rank_with_ties",
    "spearman_pvalue",
    "spearman_rho",
    "__version__",
]
