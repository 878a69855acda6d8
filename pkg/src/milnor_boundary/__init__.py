"""Plumbing graphs computed from the embedded resolution of a pair of plane curves ``f``, ``g``."""

from .calculus import CalculusError, blow_down, flip_signs_at, normalize
from .cfrac import Convergents, ncf_convergents, ncf_eval, ncf_expand, validate_ncf
from .construct import (
    ConstructionError,
    ConstructionOutput,
    Piece,
    VerificationReport,
    build_plumbing,
    check_output_identities,
    verify_z_system,
    z_mult_chain,
)
from .formats import FormatError, dump_resolution, parse_plumbing, parse_resolution, serialize_plumbing
from .graph import (
    Edge,
    GraphError,
    MultiplicitySystem,
    PlumbingGraph,
    export_dot,
    graphs_isomorphic,
    residuals,
    top_ident_residual,
)
from .resolution import (
    Arrow,
    MultPair,
    ResolutionError,
    ResolutionGraph,
    check_balance,
    component_invariants,
    components_gamma1,
    gen_tab,
    partition,
    solve_mult_pair,
    solve_multiplicities,
)

__all__ = [name for name in dir() if not name.startswith("_")]
