"""Controllable-subspace and equitable-partition analysis for matrix-weighted
leader-follower networks: exact Laplacian/input-matrix construction, equitable
partition verification and refinement, quotient graphs with certified lift
identities, Krylov controllable subspaces, and an upper bound on the strong
structural controllable subspace with reproducible sampled estimates."""

from .graphs import (
    BlockMatrix,
    EqualConstraint,
    FixedConstraint,
    MatrixWeightedGraph,
    SignConstraint,
    WeightPattern,
    build_input_matrix,
    build_laplacian,
    cell_degree,
    degree,
)
from .krylov import (
    ControllableSubspace,
    controllable_subspace,
    dual_pair,
    is_controllable,
    observability_matrix,
)
from .netio import ParseError, parse_network, serialize_network
from .partitions import (
    EPReport,
    InvalidPartitionError,
    NotEquitableError,
    Partition,
    QuotientGraph,
    characteristic_matrix,
    coarsest_ep,
    partition_of,
    quotient,
    quotient_laplacian,
    verify_equitable,
    verify_lift,
)
from .ssc import (
    EnumerationCapError,
    EPConstraintSystem,
    SSCReport,
    SamplingError,
    enumerate_feasible_eps,
    ep_constraint_system,
    estimate_ssc_dimension,
    invariant_node_report,
    min_cell_ep,
    reversal_check,
    sample_weights,
    ssc_upper_bound,
)

__version__ = "0.1.0"

__all__ = [
    "BlockMatrix",
    "ControllableSubspace",
    "EPConstraintSystem",
    "EPReport",
    "EnumerationCapError",
    "EqualConstraint",
    "FixedConstraint",
    "InvalidPartitionError",
    "MatrixWeightedGraph",
    "NotEquitableError",
    "ParseError",
    "Partition",
    "QuotientGraph",
    "SSCReport",
    "SamplingError",
    "SignConstraint",
    "WeightPattern",
    "build_input_matrix",
    "build_laplacian",
    "cell_degree",
    "characteristic_matrix",
    "coarsest_ep",
    "controllable_subspace",
    "degree",
    "dual_pair",
    "enumerate_feasible_eps",
    "ep_constraint_system",
    "estimate_ssc_dimension",
    "invariant_node_report",
    "is_controllable",
    "min_cell_ep",
    "observability_matrix",
    "parse_network",
    "partition_of",
    "quotient",
    "quotient_laplacian",
    "reversal_check",
    "sample_weights",
    "serialize_network",
    "ssc_upper_bound",
    "verify_equitable",
    "verify_lift",
]
