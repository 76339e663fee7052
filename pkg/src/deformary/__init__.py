"""Exact computations for deformation rings of mod-p Galois representations.

Galois rings and their linear algebra, truncated power series, group cohomology,
Fontaine-Laffaille matrix calculus, local conditions, dimension ledgers, and the
explicit universal framed deformation of a sum of 2-dimensional representations.
"""

from deformary.kernels import BACKEND
from deformary.ring import FieldSpec, GaloisRing, GaloisRingElement, Matrix, kernel_dim
from deformary.series import RingPresentation, SeriesRing, TruncatedSeries, formal_smoothness_check
from deformary.groups import Character, GroupRep, MarkedGroup, intertwiner_space, lift_equivalent, rep_verify
from deformary.cohomology import CohomologyReport, EPLedger, ep_solve, h01_fox, h1_bar, h2_bar, tg_kernel_dim
from deformary.fontaine_laffaille import FLModule, fl_ext1, fl_lift_count, fl_validate
from deformary.local import (chi_line_find, flat_certificate_check, inf_ring_compute, parity_det_check,
                             steinberg_check)
from deformary.local_global import ThetaLedger, geometric_bounds, glue_presentation, ltg_bookkeeping
from deformary.universal import (BlockLayout, BundleRep, InputBundle, build_universal, eliminate_centralizer,
                                 hypotheses_check, schoof_example, tangent_dim_check)

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "FieldSpec", "GaloisRing", "GaloisRingElement", "Matrix", "kernel_dim",
    "RingPresentation", "SeriesRing", "TruncatedSeries", "formal_smoothness_check",
    "Character", "GroupRep", "MarkedGroup", "intertwiner_space", "lift_equivalent", "rep_verify",
    "CohomologyReport", "EPLedger", "ep_solve", "h01_fox", "h1_bar", "h2_bar", "tg_kernel_dim",
    "FLModule", "fl_ext1", "fl_lift_count", "fl_validate",
    "chi_line_find", "flat_certificate_check", "inf_ring_compute", "parity_det_check", "steinberg_check",
    "ThetaLedger", "geometric_bounds", "glue_presentation", "ltg_bookkeeping",
    "BlockLayout", "BundleRep", "InputBundle", "build_universal", "eliminate_centralizer",
    "hypotheses_check", "schoof_example", "tangent_dim_check",
]
