"""Exact pointwise norms on tensor products of Banach L0-modules over finite
atomic measure spaces.

Modules are described fiber by fiber: one finite-dimensional normed space per
atom. Polyhedral fibers get exact rational answers (linear programs and
vertex enumeration); Euclidean fibers get singular values or certified
bounds.
"""

from .errors import (DimensionMismatch, DocumentError, InconsistentFamily, Infeasible, InvalidDescriptor,
                     L0Error, NotAPartition, NotSummable, PreconditionFailed, SpaceMismatch, UnsupportedKinds)
from .fibers import NormDescriptor, NormValue, block, l1, l2, linf, polyhedral, polyhedral_from_points
from .hom import BilinearForm, Homomorphism, dual_module, hahn_banach_witness, is_quotient_operator
from .measure import L0Function, MeasureSpace
from .modules import Element, ModuleSpec, Submodule, pointwise_norm
from .pullback import AtomMap, pullback_element, pullback_module, pullback_tensor_check
from .summability import CountableFamily, TailBound, cauchy_check, family_sum, hom_commute_check
from .tensor import (Representation, Tensor, elementary, from_representation, hs_norm_squared,
                     injective_norm, is_null, projective_norm)

__all__ = [
    "AtomMap", "BilinearForm", "CountableFamily", "DimensionMismatch", "DocumentError", "Element",
    "Homomorphism", "InconsistentFamily", "Infeasible", "InvalidDescriptor", "L0Error", "L0Function",
    "MeasureSpace", "ModuleSpec", "NormDescriptor", "NormValue", "NotAPartition", "NotSummable",
    "PreconditionFailed", "Representation", "SpaceMismatch", "Submodule", "TailBound", "Tensor",
    "UnsupportedKinds", "block", "cauchy_check", "dual_module", "elementary", "family_sum",
    "from_representation", "hahn_banach_witness", "hom_commute_check", "hs_norm_squared",
    "injective_norm", "is_null", "is_quotient_operator", "l1", "l2", "linf", "pointwise_norm",
    "polyhedral", "polyhedral_from_points", "projective_norm", "pullback_element", "pullback_module",
    "pullback_tensor_check",
]
