"""
S-matrix, phase shift and resonance spectrum of the quantized Artin billiard.

θ(s) = π^{-s} ζ(2s) Γ(s); the reflection amplitude of a plane wave coming down
the cusp is S(p) = θ(1/2 + ip) / θ(1/2 - ip) = exp(2iδ(p)) with E = p² + 1/4.
"""
import cmath
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np

from artin_scattering.errors import BranchPointError, BudgetError, ConfigError, DomainError, PoleError
from artin_scattering.specfun import (
    DEFAULT_SERIES,
    LOG_PI,
    SeriesSpec,
    digamma,
    log_gamma,
    zeta,
    zeta_prime,
)
from artin_scattering.zeros import ZetaZero

logger = logging.getLogger(__name__)

THRESHOLD_ENERGY = 0.25
ENERGY_SHIFT = 3.0 / 16.0

# below this |ζ(2s)| theta_prime switches to the product-rule form
SMALL_ZETA = 1e-6

# Phase scan configuration
MAX_PHASE_STEP = math.pi / 4
MAX_REFINEMENT_SAMPLES = 20000
MIN_REFINEMENT_WIDTH = 1e-10


class ResonanceMethod(str, Enum):
    EXACT = "exact"
    APPROX = "approx"


class Sheet(str, Enum):
    PHYSICAL = "physical"
    SECOND = "second"


@dataclass(frozen=True)
class Resonance:
    """
    A quasi-discrete level E - iΓ/2.

    phase_offset is the background phase δ'_n of the local expansion and is
    only set for the approximate method.
    """

    index: int
    u: float
    energy: float
    width: float
    method: ResonanceMethod
    phase_offset: Optional[float] = None

    def __post_init__(self):
        if not (self.energy > 0 and self.width > 0):
            raise ConfigError(
                f"Resonance {self.index} needs positive energy and width, "
                f"got E={self.energy}, Gamma={self.width}"
            )

    @property
    def half_width(self) -> float:
        """Γ/2 = -Im(pole), the quantity listed in the published width columns."""
        return 0.5 * self.width

    @property
    def pole(self) -> complex:
        return complex(self.energy, -self.half_width)


@dataclass(frozen=True)
class PhaseSample:
    energy: float
    momentum: float
    s_value: complex
    delta: float


def _check_theta_argument(s: complex) -> None:
    if s.imag == 0.0 and s.real <= 0.0 and s.real == math.floor(s.real):
        raise PoleError(f"theta has a Gamma pole at s = {s.real:g}")
    if 2.0 * s == 1.0:
        raise PoleError("theta has a zeta pole at s = 1/2")


def theta(s: complex, series: SeriesSpec = DEFAULT_SERIES) -> complex:
    """
    θ(s) = π^{-s} ζ(2s) Γ(s).

    Raises:
        PoleError: At the poles of Γ and at s = 1/2
    """
    s = complex(s)
    _check_theta_argument(s)
    return cmath.exp(-s * LOG_PI + log_gamma(s)) * zeta(2.0 * s, series)


def theta_prime(s: complex, series: SeriesSpec = DEFAULT_SERIES) -> complex:
    """
    dθ/ds.

    Uses θ(s)(-ln π + ψ(s) + 2ζ'(2s)/ζ(2s)) away from zeros of ζ(2s) and the
    product-rule form π^{-s}Γ(s)((-ln π + ψ(s))ζ(2s) + 2ζ'(2s)) near them.
    """
    s = complex(s)
    _check_theta_argument(s)
    prefactor = cmath.exp(-s * LOG_PI + log_gamma(s))
    zeta_value = zeta(2.0 * s, series)
    zeta_derivative = zeta_prime(2.0 * s, series)
    log_derivative = -LOG_PI + digamma(s)

    if abs(zeta_value) >= SMALL_ZETA:
        return prefactor * zeta_value * (log_derivative + 2.0 * zeta_derivative / zeta_value)
    return prefactor * (log_derivative * zeta_value + 2.0 * zeta_derivative)


def s_matrix(p: float, series: SeriesSpec = DEFAULT_SERIES) -> complex:
    """
    Reflection amplitude S(p) = θ(1/2 + ip) / θ(1/2 - ip).

    For real p the denominator is the conjugate of the numerator, so S is
    built from the phase of θ(1/2 + ip) alone and has unit modulus.

    Args:
        p: Real momentum, p > 0

    Returns:
        S(p), |S| = 1
    """
    if not (math.isfinite(p) and p > 0):
        raise DomainError(f"s_matrix requires real p > 0, got {p}")
    s = complex(0.5, p)
    phase = (-s * LOG_PI + log_gamma(s)).imag + cmath.phase(zeta(2.0 * s, series))
    return cmath.exp(2j * phase)


def momentum_from_energy(energy: complex, sheet: Sheet = Sheet.PHYSICAL) -> complex:
    """
    p = sqrt(E - 1/4) on the requested sheet.

    The cut runs along real E >= 1/4. The physical branch has Im p >= 0; the
    second sheet is the opposite branch, where the resonance poles
    E_n - iΓ_n/2 map to p_n = u_n/2 - i/4.

    Raises:
        BranchPointError: At E = 1/4
    """
    energy = complex(energy)
    if energy == THRESHOLD_ENERGY:
        raise BranchPointError("momentum is not defined at the branch point E = 1/4")
    momentum = cmath.sqrt(energy - THRESHOLD_ENERGY)
    if momentum.imag < 0:
        momentum = -momentum
    if Sheet(sheet) is Sheet.SECOND:
        momentum = -momentum
    return momentum


def exact_resonances(zeros: Sequence[ZetaZero]) -> List[Resonance]:
    """E_n = u_n²/4 + 3/16 and Γ_n = u_n/2 for each zero."""
    if not zeros:
        raise DomainError("exact_resonances needs at least one zero")
    return [
        Resonance(
            index=zero.index,
            u=zero.u,
            energy=zero.u ** 2 / 4.0 + ENERGY_SHIFT,
            width=zero.u / 2.0,
            method=ResonanceMethod.EXACT,
        )
        for zero in zeros
    ]


def _incoming_amplitude(energy: complex, series: SeriesSpec) -> Tuple[complex, complex]:
    # f(E) = θ(1/2 - i q), q = sqrt(E - 1/4), and df/dE
    q = cmath.sqrt(complex(energy) - THRESHOLD_ENERGY)
    s = 0.5 - 1j * q
    return theta(s, series), theta_prime(s, series) * (-1j / (2.0 * q))


def approx_resonances(
    zeros: Sequence[ZetaZero],
    newton_steps: int = 0,
    series: SeriesSpec = DEFAULT_SERIES,
) -> List[Resonance]:
    """
    Resonances from the linear expansion of S around the bumps E_n.

    E'_n - iΓ'_n/2 = E_n - f(E_n)/f'(E_n) with f(E) = θ(1/2 - i sqrt(E - 1/4))
    and the prime taken in E. The background phase satisfies
    exp(2iδ'_n) = g'(E_n)/f'(E_n), g(E) = θ(1/2 + i sqrt(E - 1/4)).

    Args:
        zeros: Zeta zeros defining the bump energies
        newton_steps: Extra Newton iterations from E'_n toward the pole;
            0 reproduces the one-step table
        series: ζ truncation parameters

    Returns:
        One approximate Resonance per zero
    """
    if not zeros:
        raise DomainError("approx_resonances needs at least one zero")
    if newton_steps < 0:
        raise ConfigError(f"newton_steps must be >= 0, got {newton_steps}")

    resonances = []
    for zero in zeros:
        bump = zero.u ** 2 / 4.0 + ENERGY_SHIFT
        q = math.sqrt(bump - THRESHOLD_ENERGY)

        f_value, f_prime_bump = _incoming_amplitude(bump, series)
        pole = bump - f_value / f_prime_bump
        for _ in range(newton_steps):
            f_value, f_prime = _incoming_amplitude(pole, series)
            pole -= f_value / f_prime

        g_prime = theta_prime(complex(0.5, q), series) * (1j / (2.0 * q))
        phase_offset = 0.5 * cmath.phase(g_prime / f_prime_bump)

        resonances.append(
            Resonance(
                index=zero.index,
                u=zero.u,
                energy=pole.real,
                width=-2.0 * pole.imag,
                method=ResonanceMethod.APPROX,
                phase_offset=phase_offset,
            )
        )
        logger.debug(f"Resonance {zero.index}: E' = {pole.real:.6f}, Gamma' = {-2.0 * pole.imag:.6f}")

    return resonances


def local_s_matrix(energy: float, resonance: Resonance) -> complex:
    """Single-resonance form (E - E' - iΓ'/2)/(E - E' + iΓ'/2) exp(2iδ')."""
    if resonance.phase_offset is None:
        raise DomainError("local_s_matrix needs an approximate resonance with a phase offset")
    shifted = energy - resonance.energy
    half_width = 0.5 * resonance.width
    return (
        complex(shifted, -half_width)
        / complex(shifted, half_width)
        * cmath.exp(2j * resonance.phase_offset)
    )


def width_ratios(resonances: Sequence[Resonance]) -> List[Tuple[float, Optional[float]]]:
    """
    Γ_n/E_n and Γ_n/(E_{n+1} - E_n) for each resonance.

    The last entry has no spacing ratio (None).
    """
    if len(resonances) < 2:
        raise DomainError("width_ratios needs at least two resonances")
    if any(r.method is not ResonanceMethod.EXACT for r in resonances):
        raise DomainError("width_ratios is defined for exact resonances only")
    energies = [r.energy for r in resonances]
    if any(b <= a for a, b in zip(energies, energies[1:])):
        raise DomainError("width_ratios needs resonances sorted by energy")

    ratios = []
    for current, following in zip(resonances, list(resonances[1:]) + [None]):
        spacing_ratio = None
        if following is not None:
            spacing_ratio = current.width / (following.energy - current.energy)
        ratios.append((current.width / current.energy, spacing_ratio))
    return ratios


def _raw_sample(energy: float, series: SeriesSpec) -> Tuple[float, complex, float]:
    momentum = math.sqrt(energy - THRESHOLD_ENERGY)
    value = s_matrix(momentum, series)
    return momentum, value, 0.5 * cmath.phase(value)


def phase_scan(
    e_min: float,
    e_max: float,
    samples: int,
    series: SeriesSpec = DEFAULT_SERIES,
    max_samples: int = MAX_REFINEMENT_SAMPLES,
) -> List[PhaseSample]:
    """
    Unwrapped phase shift δ(E) = (1/2) arg S on [e_min, e_max].

    δ is continued from sample to sample by the nearest multiple of π; where
    consecutive values differ by MAX_PHASE_STEP or more the interval is
    bisected until they do not. δ(e_min) lies in (-π/2, π/2].

    Args:
        e_min: Lowest energy, > 1/4
        e_max: Highest energy
        samples: Number of base grid points, >= 2
        max_samples: Budget for base plus inserted points

    Raises:
        BudgetError: If refinement needs more than max_samples points
    """
    if not THRESHOLD_ENERGY < e_min < e_max:
        raise DomainError(f"phase_scan requires 1/4 < e_min < e_max, got [{e_min}, {e_max}]")
    if samples < 2:
        raise DomainError(f"phase_scan requires at least 2 samples, got {samples}")

    grid = [float(e) for e in np.linspace(e_min, e_max, samples)]
    grid[0], grid[-1] = e_min, e_max

    momentum, value, raw_delta = _raw_sample(grid[0], series)
    scan = [PhaseSample(energy=grid[0], momentum=momentum, s_value=value, delta=raw_delta)]

    pending = [(e,) + _raw_sample(e, series) for e in reversed(grid[1:])]
    inserted = 0
    while pending:
        energy, momentum, value, raw_delta = pending[-1]
        previous = scan[-1]
        delta = raw_delta + math.pi * round((previous.delta - raw_delta) / math.pi)

        if abs(delta - previous.delta) < MAX_PHASE_STEP:
            pending.pop()
            scan.append(PhaseSample(energy=energy, momentum=momentum, s_value=value, delta=delta))
            continue

        midpoint = 0.5 * (previous.energy + energy)
        if len(scan) + len(pending) >= max_samples or energy - previous.energy < MIN_REFINEMENT_WIDTH:
            error_msg = f"Phase refinement budget exhausted near E = {midpoint:.6f}"
            logger.error(error_msg)
            raise BudgetError(error_msg)
        pending.append((midpoint,) + _raw_sample(midpoint, series))
        inserted += 1

    if inserted:
        logger.warning(f"Phase scan inserted {inserted} samples to keep delta continuous")
    return scan


def phase_derivative(scan: Sequence[PhaseSample]) -> List[Tuple[float, float]]:
    """dδ/dE along a phase scan; central differences inside, one-sided at the ends."""
    if len(scan) < 2:
        raise DomainError("phase_derivative needs at least two samples")
    energies = np.array([sample.energy for sample in scan])
    deltas = np.array([sample.delta for sample in scan])
    slopes = np.gradient(deltas, energies)
    return [(float(e), float(d)) for e, d in zip(energies, slopes)]
