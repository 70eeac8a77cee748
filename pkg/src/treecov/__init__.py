"""Tree covers for weighted graphs: small families of dominating trees with
bounded stretch, plus the distance oracles, labelings, routing schemes, and
certification tools built on top of them."""

__version__ = "0.1.0"

from .graph import (
    Graph,
    GraphError,
    UNREACHABLE,
    VertexSet,
    all_pairs_distances,
    connected_components,
    diameter_bound,
    dump_graph_json,
    dump_graph_text,
    induced_subgraph,
    is_connected,
    load_graph_json,
    load_graph_text,
    multi_source_shortest_paths,
    shortest_paths,
)
from .separator import (
    DecompositionError,
    SeparatorBound,
    SeparatorProvider,
    TreeDecomposition,
    dump_pace_td,
    exact_small_separator,
    heuristic_separator,
    is_balanced_separator,
    parse_pace_td,
    validate_decomposition,
)
from .treekit import (
    LcaOracle,
    RoutingLabel,
    Tree,
    TreeError,
    TreePathOracle,
    TreeRouting,
    TwoHopEmulator,
    build_tree_labels,
    label_distance,
    max_label_entries,
    simulate_tree_route,
    tree_distance_matrix,
)
from .ramsey import (
    ExtensionError,
    FiniteMetric,
    Hst,
    MetricError,
    RamseyOutcome,
    Ultrametric,
    UltrametricError,
    derive_seed,
    extend_ultrametric,
    glue_hsts,
    hst_from_ultrametric,
    metric_ramsey,
    ramsey_tree_pair,
    spanning_ramsey_forest,
    um_to_tree,
    verify_tree_against_ultrametric,
)
from .cover import (
    Cover,
    CoverError,
    best_distance_array,
    cover_from_json_obj,
    cover_to_json_obj,
    extend_forest_to_spanning_tree,
    graph_distance_array,
    hst_cover_to_tree_cover,
    measure_cover_stretch,
    pair_predicate_array,
    pairwise_tree_collection,
    ramsey_cover_general,
    separator_recursion_cover,
    verify_noncontraction,
)
from .queries import (
    CoverDistanceLabeling,
    CoverLabel,
    GraphRoutingScheme,
    HstLabel,
    LowHopPathReporting,
    MetricRoutingOverlay,
    PairwiseDistanceOracle,
    PathReportingStructure,
    QueryError,
    SeparatorDistanceOracle,
    build_hst_labels,
    hst_label_distance,
)
from .verify import (
    BoundSpec,
    CheckResult,
    FitResult,
    RunRecord,
    VerifyError,
    certify,
    certify_cover,
    certify_oracle,
    scaling_fit,
    stretch_threshold,
)
from .generators import gnp_graph, grid_graph, partial_k_tree, random_tree

__all__ = [name for name in dir() if not name.startswith("_")]
