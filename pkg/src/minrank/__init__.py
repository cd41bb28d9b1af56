"""Minimum rank, maximum nullity and xi bounds for Erdos-Renyi random graphs."""

__version__ = "0.1.0"

from .errors import DataError, NumericError, ParameterError, SizeLimitError, SolverError
from .graph_core import (
    DegreeStats,
    GnpModel,
    LabeledGraph,
    complete_bipartite_graph,
    complete_graph,
    cycle_graph,
    empty_graph,
    graph_stats,
    path_graph,
    petersen_graph,
    read_edge_list,
    sample_gnp,
    vertex_connectivity,
)
from .linalg import numeric_rank_nullity, pattern_of_matrix, random_matrix_with_pattern, sym_eigen
from .analytic import (
    AnalyticBound,
    CpSolution,
    azuma_tail,
    connectivity_failure_bound,
    deviation_intervals,
    mr_expectation_bounds,
    mr_probability_bound,
    solve_cp,
    stirling_binom_upper,
    xi_bounds,
    zero_pattern_bound,
)
from .bounds_engine import (
    BoundConfig,
    BoundReport,
    OrthogonalRep,
    assemble_bound_report,
    construct_faithful_rep,
    gram_psd,
    minrank_upper_numeric,
    verify_faithful_rep,
    zero_forcing_number,
)
from .sah_xi import (
    SahVerdict,
    XiCertificate,
    check_sah,
    tangent_normal_dims,
    verify_xi_edge_inequality,
    xi_certificate_search,
)
from .experiments import (
    ExperimentConfig,
    TrialRecord,
    emit_curve_data,
    load_config,
    run_experiment,
    summarize_records,
)
