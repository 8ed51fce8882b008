"""Dynamic temporal graph warping (dtgw) distances between temporal graphs."""

from .assignment import AssignmentError, AssignmentSolution, solve_assignment, solve_assignment_lex
from .distance import (
    BudgetExceededError,
    DtgwOptions,
    DtgwResult,
    PairCosts,
    ZeroTest,
    am_heuristic,
    decide_dtgw,
    exact_dtgw,
    init_owp,
    init_sigma_opt,
    init_sigma_star,
    is_zero_dtgw,
    layer_distance,
    mapping_cost,
    non_consistent_distance,
    non_temporal_distance,
    normalize_distance,
    optimal_mapping_for_path,
    optimal_path_for_mapping,
)
from .experiments import (
    Dendrogram,
    ErrorStats,
    NoiseSpec,
    complete_linkage_cluster,
    cut_dendrogram,
    deanonymization_accuracy,
    error_percentages,
    error_stats,
    pairwise_distances,
    perturb,
    random_relabel,
    random_temporal_graph,
)
from .io import IngestError, format_events, ingest, load_graph, write_events
from .model import (
    InvalidGraphError,
    InvalidMappingError,
    InvalidPathError,
    TemporalGraph,
    VertexMapping,
    WarpingPath,
    underlying_graph,
    validate_temporal_graph,
    validate_vertex_mapping,
    validate_warping_path,
)
from .qp import build_qp, export_qp, parse_qp, solve_qp_exhaustive, to_lp
from .signatures import DeletionCost, Metric, SignatureKind, SignatureMatrix, compute_signatures
from .warp import (
    Band,
    BandInfeasibleError,
    count_warping_paths,
    dtw_optimal_path,
    enumerate_warping_paths,
    shortest_warping_path,
)

__version__ = "0.1.0"
