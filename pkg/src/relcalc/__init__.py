"""Exact calculus of closed piecewise-linear relations on compact subsets of the line."""

from .dynamics import (
    Completed,
    Escaped,
    OrbitResult,
    PairRow,
    PairTable,
    Periodic,
    commuting_check,
    maps_relation,
    orbit,
    pair_table,
    path_check,
    push_forward,
)
from .errors import (
    CellLimitExceeded,
    DimensionMismatch,
    DomainNotDense,
    InputError,
    MinimalError,
    NegativeEpsilon,
    NonClosedRestriction,
    NonUniqueMinimal,
    NotContinuous,
    NotFullDomain,
    NotIsomorphism,
    NotSuitable,
    NotTotal,
    PointOutsideSpace,
    Refusal,
    RelcalcError,
    ResolutionTooLarge,
    SpaceMismatch,
    Unreachable,
)
from .grid import (
    Grid,
    finite_oracle,
    from_bits,
    from_pbm,
    grid_compose,
    grid_distance,
    hausdorff,
    rasterize,
    to_bits,
    to_pbm,
)
from .relation import (
    Cell,
    Fun,
    Piece,
    Rel,
    closure_of_difference,
    compose,
    constant,
    costar,
    domain,
    equals,
    fiber,
    fun_from_singletons,
    graph,
    identity,
    image,
    inverse,
    is_subset,
    iterate,
    modulus,
    preimage,
    product,
    restrict,
    union,
    v_epsilon,
)
from .semilinear import FSet, Interval, Space, combine, fmt_rat, parse_rat, parse_set
from .suitable import (
    MapAnalysis,
    Report,
    closure_of_function,
    is_pi1_irreducible,
    is_pi2_almost_open,
    map_analysis,
    one_set,
    selection_check,
    singleton_map,
    suitability_report,
    suitable_compose,
    suitable_inverse,
    suitable_iterate,
    unique_minimal,
)
from .worked import EXAMPLES, run_worked_examples

__version__ = "0.1.0"

__all__ = sorted(
    name for name, value in globals().items() if not name.startswith("_") and not isinstance(value, type(dynamics))
)
