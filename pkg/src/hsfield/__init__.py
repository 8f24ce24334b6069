"""Hasse-Schmidt derivations, truncated formal group laws and prolongations in characteristic p."""

from .derivation import (
    DerivationContext,
    HSDerivation,
    apply,
    canonical_derivation,
    canonical_group_derivation,
    check_iterativity,
    constants_basis,
    dependence_over_constants,
)
from .errors import BudgetExceeded, NotAUnitError, PreconditionError, Verdict
from .fields import GF, field
from .formal_group import FormalGroupLaw, TruncatedGroupLaw, fgl_builtin, fgl_check_axioms, fgl_truncate, structure_constants
from .poly import MultiPoly
from .prolongation import AffineVariety, JetRing, axiom_instance_check, cv_compatibility, nabla_ideal
from .ratfunc import RationalFunction
from .trunc import TruncSeries, TruncSpace, index_set

__all__ = [
    "AffineVariety",
    "BudgetExceeded",
    "DerivationContext",
    "FormalGroupLaw",
    "GF",
    "HSDerivation",
    "JetRing",
    "MultiPoly",
    "NotAUnitError",
    "PreconditionError",
    "RationalFunction",
    "TruncSeries",
    "TruncSpace",
    "TruncatedGroupLaw",
    "Verdict",
    "apply",
    "axiom_instance_check",
    "canonical_derivation",
    "canonical_group_derivation",
    "check_iterativity",
    "constants_basis",
    "cv_compatibility",
    "dependence_over_constants",
    "fgl_builtin",
    "fgl_check_axioms",
    "fgl_truncate",
    "field",
    "index_set",
    "nabla_ideal",
    "structure_constants",
]
