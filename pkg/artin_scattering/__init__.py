"""
Scattering data of the quantized Artin billiard on the modular surface.

S-matrix phase, resonance spectrum from the Riemann zeta zeros, and the Maass
wave function, with the numerical checks that tie them together.
"""
from artin_scattering.errors import ArtinError
from artin_scattering.maass import HalfPlanePoint, MaassWaveFunction, TruncationSpec, wavefunction
from artin_scattering.scattering import (
    Resonance,
    approx_resonances,
    exact_resonances,
    phase_scan,
    s_matrix,
    theta,
)
from artin_scattering.zeros import ZeroFinder, ZetaZero, first_n_zeros

__all__ = [
    "ArtinError",
    "HalfPlanePoint",
    "MaassWaveFunction",
    "Resonance",
    "TruncationSpec",
    "ZeroFinder",
    "ZetaZero",
    "approx_resonances",
    "exact_resonances",
    "first_n_zeros",
    "phase_scan",
    "s_matrix",
    "theta",
    "wavefunction",
]
