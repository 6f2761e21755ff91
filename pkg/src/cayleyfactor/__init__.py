"""1-factorizations of Cayley graphs of groups Q x H (Q a 2-group, H of odd order)."""

from .cayley import (
    CayleyGraph,
    QuotientFibration,
    build_cayley,
    components_by_cosets,
    connection_set,
    quotient_graph,
)
from .edge_color import (
    EdgeColoring,
    Factorization,
    Report,
    SimpleGraph,
    complete_cross_edges,
    exact_one_factorize,
    mirror_color,
    verify_coloring,
    vizing_color,
)
from .errors import (
    BudgetExceeded,
    CayleyFactorError,
    CompletionFailed,
    NotConnectedError,
    NotDecomposableError,
    OutOfScopeError,
    ParseError,
    PreconditionError,
    SizeLimitError,
)
from .factorizer import (
    FactorizeOutcome,
    Stage,
    extend_by_even_generator,
    factorize,
    factorize_cycle_base,
    factorize_nilpotent,
    lemma1_factorize,
    lift_from_quotient,
    replay_certificate,
    replicate_over_cosets,
    verify_factorization,
)
from .formats import GroupSpec, parse_group_spec
from .groups import (
    Group,
    Subgroup,
    build_cyclic,
    catalog_group,
    direct_product,
    element_order,
    from_permutations,
    generated_subgroup,
    is_normal,
    quotient_group,
    right_transversal,
    split_even_odd_parts,
    sylow_q2_decompose,
)

__version__ = "0.1.0"
