"""Exact construction and verification of S-Hadamard matrices and the
Kochen-Specker pairs built from them."""

from .cyclotomic import CycInt, IntPoly, cyc_root, cyclotomic_poly, inner_product, is_zero, lift_order
from .ghmat import (
    GHMatrix,
    NotFound,
    Recipe,
    execute_recipe,
    gh_compose,
    gh_cyclic_prime,
    gh_export,
    gh_import,
    gh_search,
    plan_order,
    verify_gh,
)
from .ksset import (
    ColoringStatus,
    KSPair,
    KSVector,
    build_ks,
    hadamard_product,
    ks_export,
    ks_import,
    ks_stats,
    noncolor_check,
    verify_ks,
)
from .report import VerificationReport
from .shadamard import SHadamard, dephase, from_gh, shad_export, shad_import, verify_shadamard

__version__ = "0.1.0"
