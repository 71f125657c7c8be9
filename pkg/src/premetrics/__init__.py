"""Continuity spaces valued in value distributive lattices.

Finite lattices and the extended non-negative rationals as value
lattices, the free-locale lattices Ω(X), generated topologies and Flagg's
inverse construction, limits and colimits of continuity spaces, and
brute-force checkers for their universal properties.
"""

from .colimits import (
    AdmitsInstance,
    FunctionGround,
    admit_set,
    admits,
    coequaliser,
    coproduct,
    final_lift,
    final_space,
    links,
)
from .errors import PremetricError
from .lattice import EXT_RATIONALS, ExtRationalLattice, FiniteLattice, chain, product_lattice, validate_lattice
from .limits import Cone, equaliser, initial_lift, phi_embed, positives_product_ground, product, pullback_premetric
from .omega import DownSetFamily, Ground, OmegaLattice, materialize, well_above_omega
from .space import (
    ContinuitySpace,
    FiniteTopology,
    SpaceMap,
    ball,
    enumerate_topologies,
    flagg,
    generate_topology,
    is_eps_delta_continuous,
    is_top_continuous,
    premetrize,
)
from .verify import (
    VerificationReport,
    check_adjunction,
    check_colimit,
    check_limit,
    check_O_preservation,
    continuity_gap_search,
    round_trip_suite,
)

__all__ = [
    "AdmitsInstance", "Cone", "ContinuitySpace", "DownSetFamily", "EXT_RATIONALS", "ExtRationalLattice",
    "FiniteLattice", "FiniteTopology", "FunctionGround", "Ground", "OmegaLattice", "PremetricError",
    "SpaceMap", "VerificationReport", "admit_set", "admits", "ball", "chain", "check_O_preservation",
    "check_adjunction", "check_colimit", "check_limit", "coequaliser", "continuity_gap_search",
    "coproduct", "enumerate_topologies", "equaliser", "final_lift", "final_space", "flagg",
    "generate_topology", "initial_lift", "is_eps_delta_continuous", "is_top_continuous", "links",
    "materialize", "phi_embed", "positives_product_ground", "premetrize", "product", "product_lattice",
    "pullback_premetric", "round_trip_suite", "validate_lattice", "well_above_omega",
]
