"""Exact workbench for anti-blocking lattice polytopes and their reflections."""

from .errors import (
    BudgetExceeded,
    DimensionMismatch,
    InvariantViolation,
    NoChainFound,
)
from .fibers import (
    Fiber,
    PointConfiguration,
    QuadGenCertificate,
    all_quadratic_moves,
    enumerate_fiber,
    fiber_connected_under_quadratic_moves,
    is_generated_by,
    quad_generation_check,
    reflections,
)
from .graphs import (
    Coloring,
    Graph,
    HarnessReport,
    chromatic_number,
    kempe_equivalent_all,
    kempe_switch,
    replication,
    stable_config,
    stable_set_polytope,
    stable_sets,
    theorem_equivalence_harness,
)
from .polytopes import (
    AntiBlockingPolytope,
    HRepresentation,
    IdpReport,
    LocallyAntiBlockingPolytope,
    UnconditionalPolytope,
    build_anti_blocking,
    build_unconditional,
    contains,
    dilate_lattice_points,
    down_closure,
    idp_check,
    merge_decomposition,
    validate_locally_anti_blocking,
)
from .transfer import (
    MoveChain,
    SeparableResolution,
    descend_chain,
    find_quadratic_chain,
    lift_generators,
    nonnegative_projection,
    resolve_separable,
    selection_list,
    signed_sum,
    verify_chain,
)
from .vectors import (
    BinomialMove,
    Monomial,
    SignedPoint,
    canonical_signed_point,
    ordered_list,
    reflect,
    separable,
    signed_point,
    weight,
)
