"""Reasoning over more-or-less CP-nets.

Conditional preference networks whose variables carry ordered domains
and whose preference tables are monotone in a precise sense: every own
ranking follows the declared value order or its reverse, and each
variable splits its children's tables at a single boundary.  On such
nets dominance can be decided inside a small restricted space (at most
three values per variable) instead of the full outcome space.

Parse or build a net with :mod:`mlcp.model`, classify it with
:mod:`mlcp.analysis`, answer queries with :mod:`mlcp.dominance`, and
check anything against the exhaustive graph oracle in
:mod:`mlcp.oracle`.
"""

from .analysis import (
    LESS,
    MORE,
    MlReport,
    MonotonicityReport,
    categories,
    check_monotonic,
    check_more_or_less,
    less_values,
    more_values,
)
from .dominance import (
    DEFAULT_NODE_CAP,
    DominanceResult,
    PruningRules,
    RepMap,
    RepresentativeSet,
    can_order_before,
    default_repmap,
    dominates,
    dominates_naive,
    flip_in_category,
    flip_out_category,
    is_skip_flipping,
    optimize,
    order_outcomes,
    reduce_to_skip,
    representative_candidates,
)
from .errors import (
    BadRepMapError,
    BudgetExceededError,
    CptLookupError,
    CyclicNetError,
    MlcpError,
    ModelError,
    NotImprovingError,
    NotIrreducibleError,
    NotMoreOrLessError,
    ParseError,
    ReductionError,
    RepIndependenceError,
    ResourceCapError,
)
from .gen import GenSpec, random_ml_net
from .model import (
    CPNet,
    CPT,
    CptRow,
    OrderedDomain,
    Predicate,
    Ranking,
    Variable,
    format_assignment,
    format_outcome,
    lookup_ranking,
    match_row,
    parse_cpnet,
    parse_outcome,
    serialize_cpnet,
    validate_structure,
)
from .oracle import (
    DEFAULT_OUTCOME_BUDGET,
    FlipSequence,
    PreferenceGraph,
    TotalRanking,
    improving_flips,
    induced_graph,
    is_improving_sequence,
    is_irreducible,
    oracle_dominates,
    oracle_path,
    ranking_satisfies,
    reachability_closure,
)

__version__ = "0.1.0"

__all__ = [
    "BadRepMapError",
    "BudgetExceededError",
    "CPNet",
    "CPT",
    "CptLookupError",
    "CptRow",
    "CyclicNetError",
    "DEFAULT_NODE_CAP",
    "DEFAULT_OUTCOME_BUDGET",
    "DominanceResult",
    "FlipSequence",
    "GenSpec",
    "LESS",
    "MORE",
    "MlReport",
    "MlcpError",
    "ModelError",
    "MonotonicityReport",
    "NotImprovingError",
    "NotIrreducibleError",
    "NotMoreOrLessError",
    "OrderedDomain",
    "ParseError",
    "Predicate",
    "PreferenceGraph",
    "PruningRules",
    "Ranking",
    "ReductionError",
    "RepIndependenceError",
    "RepMap",
    "RepresentativeSet",
    "ResourceCapError",
    "TotalRanking",
    "Variable",
    "can_order_before",
    "categories",
    "check_monotonic",
    "check_more_or_less",
    "default_repmap",
    "dominates",
    "dominates_naive",
    "flip_in_category",
    "flip_out_category",
    "format_assignment",
    "format_outcome",
    "improving_flips",
    "induced_graph",
    "is_improving_sequence",
    "is_irreducible",
    "is_skip_flipping",
    "less_values",
    "lookup_ranking",
    "match_row",
    "optimize",
    "oracle_dominates",
    "oracle_path",
    "order_outcomes",
    "parse_cpnet",
    "parse_outcome",
    "random_ml_net",
    "ranking_satisfies",
    "reachability_closure",
    "reduce_to_skip",
    "representative_candidates",
    "serialize_cpnet",
    "validate_structure",
]
