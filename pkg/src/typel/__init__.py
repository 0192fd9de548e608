"""Exact and certified checks around Gaussian moment comparison for type L laws."""

__version__ = "0.1.0"

from .certify import CertReport, classify, enestrom_kakeya, lattice_to_polynomial, sv_alpha_condition
from .ferro import SiteMeasure, SpinSystem
from .moments import (
    GaussPolyLaw,
    LatticeDistribution,
    MomentSequence,
    check_moment_comparison,
    check_r_logconcave,
    even_moments_gausspoly,
    even_moments_lattice,
)
from .polynomials import SelfInversivePolynomial, numeric_roots, schur_cohn_unit_circle

__all__ = [
    "CertReport",
    "GaussPolyLaw",
    "LatticeDistribution",
    "MomentSequence",
    "SelfInversivePolynomial",
    "SiteMeasure",
    "SpinSystem",
    "check_moment_comparison",
    "check_r_logconcave",
    "classify",
    "enestrom_kakeya",
    "even_moments_gausspoly",
    "even_moments_lattice",
    "lattice_to_polynomial",
    "numeric_roots",
    "schur_cohn_unit_circle",
    "sv_alpha_condition",
]
