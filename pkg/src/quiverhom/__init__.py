"""Exact homological algebra for finite-dimensional quiver algebras."""

from .exactlin import GF, QQ, parse_field
from .algebra import (FDAlgebra, PathExpr, Quiver, build_quotient, corner, enveloping, load_algebra, opposite,
                      parse_algebra, tensor)
from .modules import FDModule, ModuleMap, direct_sum, injective, projective, regular_module, simple
from .complexes import Complex, HomComplex, Resolution
from .homology import ext_dims, injdim, is_gorenstein, projdim
from .nakayama import admissible_sequence, fg_certificate_nakayama, is_nakayama
from .tilting import check_tilting, is_almost_complete, left_add_approximation, mutate_complement
from .endo import HomFunctor, endomorphism_algebra, present_by_quiver
from .hochschild import cup_product, hh_dims, kunneth_check, phi_action
from .fgcheck import eAe_reduction, fg_evidence, support_fingerprint
from .derived import assoc_check, derived_tensor, hyper_hom_dims, invariance_suite, rhom_tilting

__all__ = [
    "GF", "QQ", "parse_field", "FDAlgebra", "PathExpr", "Quiver", "build_quotient", "corner", "enveloping",
    "load_algebra", "opposite", "parse_algebra", "tensor", "FDModule", "ModuleMap", "direct_sum", "injective",
    "projective", "regular_module", "simple", "Complex", "HomComplex", "Resolution", "ext_dims", "injdim",
    "is_gorenstein", "projdim", "admissible_sequence", "fg_certificate_nakayama", "is_nakayama", "check_tilting",
    "is_almost_complete", "left_add_approximation", "mutate_complement", "HomFunctor", "endomorphism_algebra",
    "present_by_quiver", "cup_product", "hh_dims", "kunneth_check", "phi_action", "eAe_reduction", "fg_evidence",
    "support_fingerprint", "assoc_check", "derived_tensor", "hyper_hom_dims", "invariance_suite", "rhom_tilting",
]
