"""Finite lattice analysis: join-covers and the D relation, lower
boundedness, leaven decompositions, dual *-distributivity and SD_join^omega,
notions of convergence, and premise checks for non-embeddability witnesses."""

__version__ = "0.1.0"

from .errors import (
    AxiomViolation,
    CapExceeded,
    InvalidInput,
    LatkitError,
    LeavenInvalid,
    NotALattice,
    NotModular,
    ViolationFound,
)
from .lattice import (
    ElementSet,
    FiniteLattice,
    LatticeFile,
    build_from_covers,
    dedekind_macneille,
    direct_product,
    join_irreducibles,
    load_lattice,
)
from .generators import FamilySpec, generate
from .joincover import (
    d_relation_direct,
    d_relation_from_covers,
    is_lower_bounded_lattice,
    minimal_join_covers,
)
from .distributivity import (
    dual_k_star_distributive,
    is_join_semidistributive,
    sd_omega_check,
    translation_monoid,
)
from .fermentable import decompose, leaven_check
from .convergence import check_axioms, least_element_family, special_family
from .witnesses import modhom_witness_search, nonhom_check
