"""lfunclab: a desk-scale numerical laboratory for exponential sums, trace
formulas, GL(3) Voronoi summation and first moments of L-functions."""

__version__ = "0.1.0"

from .numkernel import (  # noqa: F401
    AlphaTriple,
    bessel_j,
    bessel_phase_part,
    complex_gamma,
    gamma_factor_gl2,
    gamma_factor_rankin,
    rankin_gamma_ratio,
    voronoi_gamma_kernel,
)
