"""Exact finite models of inverse monoids, chain compactifications and Ellis semigroup elements."""
from .chain import (
    EQ, GT, INF, INFINITY, LT, SUP, Gap, GapCut, Inf, Infinity, Plain, Space, Sup, Tagged,
    cmp_extended, lattice_arrows, make_gap, parse_point, quotient_point, stabilizer_partition,
)
from .partial import (
    PartialBijection, compose, enumerate_monoid, invert, is_order_preserving, rank,
)
from .semigroup import (
    FiniteMonoid, IdealSet, check_homomorphism, check_inverse_monoid,
    close_under_composition, enumerate_all_ideals, rank_ideal, rees_quotient,
)
from .ellis import (
    Cofinite, EllisElementFin, Exactly, InInterval, Observation, Verdict,
    check_alpha_membership, check_bm_membership, check_br_membership,
    check_cm_membership, check_cX_membership, check_EF_ideal, check_membership,
    ellis_compose, induce_quotient_obs, xi_restrict,
)
from .approx import (
    Cover, FinitePermutationWitness, PLAutomorphism, ellis_witness, extension,
    permutation_witness, pl_witness, star_star_witness,
)

__all__ = [
    "EQ",
    "GT",
    "INF",
    "INFINITY",
    "LT",
    "SUP",
    "Gap",
    "GapCut",
    "Inf",
    "Infinity",
    "Plain",
    "Space",
    "Sup",
    "Tagged",
    "cmp_extended",
    "lattice_arrows",
    "make_gap",
    "parse_point",
    "quotient_point",
    "stabilizer_partition",
    "PartialBijection",
    "compose",
    "enumerate_monoid",
    "invert",
    "is_order_preserving",
    "rank",
    "FiniteMonoid",
    "IdealSet",
    "check_homomorphism",
    "check_inverse_monoid",
    "close_under_composition",
    "enumerate_all_ideals",
    "rank_ideal",
    "rees_quotient",
    "Cofinite",
    "EllisElementFin",
    "Exactly",
    "InInterval",
    "Observation",
    "Verdict",
    "check_alpha_membership",
    "check_bm_membership",
    "check_br_membership",
    "check_cm_membership",
    "check_cX_membership",
    "check_EF_ideal",
    "check_membership",
    "ellis_compose",
    "induce_quotient_obs",
    "xi_restrict",
    "Cover",
    "FinitePermutationWitness",
    "PLAutomorphism",
    "ellis_witness",
    "extension",
    "permutation_witness",
    "pl_witness",
    "star_star_witness",
]

__version__ = "0.1.0"
