"""Exact linear algebra for left-symmetric Rinehart algebras, their cohomology,
deformations and operator theory."""

__version__ = "0.1.0"

from .algebra import (LieRinehartAlgebra, LsrAlgebra, MorphismPair, StructureAlgebra, Subspace,
                      check_morphism, check_substructure, classify_anchor, derivation_basis, sub_adjacent,
                      trivial_extension, validate)
from .cohomology import Cochain, CochainComplex, CochainSpace, coboundary, cochain_basis, cohomology_dim, \
    zero_cochain_space
from .deformation import (FormalAutomorphism, TruncatedDeformation, apply_equivalence, check_deformation,
                          infinitesimal, nijenhuis_trivial_deformation, obstruction, one_param_from_cocycle,
                          rigidity_certificate, try_extend)
from .operators import (check_nijenhuis, check_o_operator, check_rota_baxter, composition_condition,
                        deformed_structures, induced_algebra_from_o_operator, lift_to_semidirect,
                        o_operator_compatibility, polynomial_nijenhuis, quotient_nijenhuis, search_operators)
from .report import Check, InvariantViolation, PreconditionError, Report, StructureError
from .representations import (RepresentationBundle, adjoint_rep, derived_reps, semidirect_product, trivial_rep,
                              validate_representation)
