"""
Maass wave function of the modular surface, its Fourier coefficients, the
geometry of the fundamental domain and the verification oracles built on them.

The wave function is evaluated in the coordinates (x, ỹ) with ỹ = ln y:

    ψ_p(x, ỹ) = e^{ỹ/2} [ e^{-ipỹ} + S(p) e^{ipỹ}
                          + 4/θ(1/2 - ip) Σ_l τ_ip(l) K_ip(2πl e^ỹ) cos(2πlx) ]

The bracket is the plane-wave form; the factor e^{ỹ/2} = y^{1/2} turns it into
the automorphic eigenfunction of -y²Δ with eigenvalue p² + 1/4.
"""
import cmath
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence

from artin_scattering.errors import BudgetError, ConfigError, ConvergenceError, DomainError
from artin_scattering.scattering import s_matrix, theta
from artin_scattering.specfun import (
    DEFAULT_QUADRATURE,
    DEFAULT_SERIES,
    QuadratureSpec,
    SeriesSpec,
    bessel_k_imag_order,
)

logger = logging.getLogger(__name__)

# Divisor enumeration budget
MAX_TAU_ARGUMENT = 10 ** 9
_WHEEL_PRIMES = (2, 3, 5)
_WHEEL_STEPS = (4, 2, 4, 2, 4, 6, 2, 6)  # gaps between integers coprime to 30, from 7

# Truncation margin absorbing the algebraic prefactor of K_ip(w) ~ e^{-w}
TRUNCATION_MARGIN = 10.0

# Band of ỹ where both z and -1/z are comfortable for the invariance oracle
INVARIANCE_BAND = (-0.14, 2.0)
DEFAULT_STENCIL_STEP = 1e-3

MAX_REDUCTION_STEPS = 10000
REDUCTION_EPS = 1e-14


@dataclass(frozen=True)
class HalfPlanePoint:
    """A point z = x + iy of the upper half-plane stored as (x, ỹ = ln y)."""

    x: float
    y_tilde: float

    @property
    def y(self) -> float:
        return math.exp(self.y_tilde)

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)

    @classmethod
    def from_xy(cls, x: float, y: float) -> "HalfPlanePoint":
        if not y > 0:
            raise DomainError(f"Points of the upper half-plane need y > 0, got {y}")
        return cls(x=x, y_tilde=math.log(y))

    def translated(self) -> "HalfPlanePoint":
        """Image under w = z + 1."""
        return HalfPlanePoint(x=self.x + 1.0, y_tilde=self.y_tilde)

    def inverted(self) -> "HalfPlanePoint":
        """Image under w = -1/z."""
        y = self.y
        modulus_sq = self.x * self.x + y * y
        return HalfPlanePoint(x=-self.x / modulus_sq, y_tilde=self.y_tilde - math.log(modulus_sq))


@dataclass(frozen=True)
class TruncationSpec:
    """Controls how many Fourier modes of the wave function are summed."""

    tail_tol: float = 1e-12
    l_min: int = 3
    l_max_cap: int = 400

    def __post_init__(self):
        if not 0 < self.tail_tol < 1:
            raise ConfigError(f"tail_tol must lie in (0, 1), got {self.tail_tol}")
        if not 1 <= self.l_min <= self.l_max_cap:
            raise ConfigError(
                f"Need 1 <= l_min <= l_max_cap, got l_min={self.l_min}, l_max_cap={self.l_max_cap}"
            )


DEFAULT_TRUNCATION = TruncationSpec()


@dataclass(frozen=True)
class WavefunctionSample:
    point: HalfPlanePoint
    psi: complex
    modes_used: int
    tail_bound: float
    psi_reduced: complex


def _prime_factors(n: int) -> Dict[int, int]:
    factors: Dict[int, int] = {}
    for prime in _WHEEL_PRIMES:
        while n % prime == 0:
            factors[prime] = factors.get(prime, 0) + 1
            n //= prime

    candidate, step = 7, 0
    while candidate * candidate <= n:
        while n % candidate == 0:
            factors[candidate] = factors.get(candidate, 0) + 1
            n //= candidate
        candidate += _WHEEL_STEPS[step]
        step = (step + 1) % len(_WHEEL_STEPS)

    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


def divisors(n: int) -> List[int]:
    """Sorted divisors of n >= 1 by trial division."""
    if n < 1:
        raise DomainError(f"divisors requires n >= 1, got {n}")
    result = [1]
    for prime, exponent in _prime_factors(n).items():
        result = [d * prime ** k for d in result for k in range(exponent + 1)]
    return sorted(result)


def tau(p: float, n: int) -> float:
    """
    Divisor sum τ_ip(n) = Σ_{ab=n} (a/b)^{ip}.

    The pairs (a, b) and (b, a) are complex conjugates, so the sum is the real
    number Σ_{d|n} cos(p ln(d²/n)).

    Args:
        p: Momentum
        n: Positive integer

    Returns:
        τ_ip(n)

    Raises:
        BudgetError: If n exceeds the trial-division budget
    """
    if n < 1:
        raise DomainError(f"tau requires n >= 1, got {n}")
    if n > MAX_TAU_ARGUMENT:
        raise BudgetError(f"tau argument {n} exceeds trial-division budget {MAX_TAU_ARGUMENT}")
    log_n = math.log(n)
    return math.fsum(math.cos(p * (2.0 * math.log(d) - log_n)) for d in divisors(n))


class MaassWaveFunction:
    """Wave function at one momentum, with its point-independent factors cached."""

    def __init__(
        self,
        p: float,
        trunc: TruncationSpec = DEFAULT_TRUNCATION,
        quadrature: QuadratureSpec = DEFAULT_QUADRATURE,
        series: SeriesSpec = DEFAULT_SERIES,
    ):
        """
        Args:
            p: Momentum, p > 0
            trunc: Fourier-mode truncation
            quadrature: K_ip quadrature parameters
            series: ζ truncation parameters
        """
        if not (math.isfinite(p) and p > 0):
            raise DomainError(f"wave function requires p > 0, got {p}")
        self.p = p
        self.trunc = trunc
        self.quadrature = quadrature
        self.s_value = s_matrix(p, series)
        self.prefactor = 4.0 / theta(complex(0.5, -p), series)
        self.energy = p * p + 0.25
        # K_ip(w) <= e^{-w}, so a mode is weighed by |prefactor| e^{-w}
        self.log_scale = max(0.0, math.log(abs(self.prefactor)))
        logger.debug(f"Wave function p={p}: S={self.s_value}, prefactor={self.prefactor}")

    def modes_for(self, y: float) -> int:
        """
        Smallest l_max with 2π l_max y above ln(1/tail_tol) + margin + ln|4/θ(1/2 - ip)|,
        at least l_min.

        The prefactor grows like e^{πp/2}; K_ip(w) stays below e^{-w} for every p.
        """
        threshold = math.log(1.0 / self.trunc.tail_tol) + TRUNCATION_MARGIN + self.log_scale
        modes = max(self.trunc.l_min, math.floor(threshold / (2.0 * math.pi * y)) + 1)
        if modes > self.trunc.l_max_cap:
            raise BudgetError(
                f"Wave function at y={y:g} needs {modes} modes, cap is {self.trunc.l_max_cap}"
            )
        return modes

    def evaluate(self, point: HalfPlanePoint, modes: Optional[int] = None) -> WavefunctionSample:
        """
        ψ at one point.

        Args:
            point: Evaluation point
            modes: Fixed number of Fourier modes; chosen from the truncation
                settings when omitted

        Returns:
            WavefunctionSample with the automorphic ψ and the plane-wave bracket
        """
        y = point.y
        modes = self.modes_for(y) if modes is None else modes
        if modes < 1:
            raise DomainError(f"modes must be >= 1, got {modes}")

        # reduce x into [-1/2, 1/2] so x -> x + 1 and x -> -x act exactly
        x = point.x - round(point.x)
        standing = 0.0
        for l in range(1, modes + 1):
            argument = 2.0 * math.pi * l * y
            standing += (
                tau(self.p, l)
                * bessel_k_imag_order(self.p, argument, self.quadrature)
                * math.cos(2.0 * math.pi * l * x)
            )

        phase = self.p * point.y_tilde
        reduced = cmath.exp(-1j * phase) + self.s_value * cmath.exp(1j * phase) + self.prefactor * standing
        return WavefunctionSample(
            point=point,
            psi=math.exp(0.5 * point.y_tilde) * reduced,
            modes_used=modes,
            tail_bound=math.exp(self.log_scale - 2.0 * math.pi * (modes + 1) * y),
            psi_reduced=reduced,
        )


@lru_cache(maxsize=32)
def _wave_function_for(p: float, trunc: TruncationSpec) -> MaassWaveFunction:
    return MaassWaveFunction(p, trunc)


def wavefunction(
    p: float,
    point: HalfPlanePoint,
    trunc: TruncationSpec = DEFAULT_TRUNCATION,
) -> WavefunctionSample:
    """ψ_p at one point; the per-momentum prefactors are cached."""
    return _wave_function_for(p, trunc).evaluate(point)


def wavefunction_grid(
    p: float,
    xs: Sequence[float],
    y_tildes: Sequence[float],
    trunc: TruncationSpec = DEFAULT_TRUNCATION,
) -> List[WavefunctionSample]:
    """ψ_p on the product grid, ỹ-major."""
    function = _wave_function_for(p, trunc)
    return [function.evaluate(HalfPlanePoint(x, y_tilde)) for y_tilde in y_tildes for x in xs]


def _relative_difference(image: complex, reference: complex) -> float:
    return abs(image - reference) / max(abs(reference), 1e-30)


def generator_residuals(
    p: float,
    point: HalfPlanePoint,
    trunc: TruncationSpec = DEFAULT_TRUNCATION,
) -> Dict[str, float]:
    """Relative change of ψ under w = z + 1 ("translate") and w = -1/z ("invert")."""
    low, high = INVARIANCE_BAND
    if not low <= point.y_tilde <= high:
        raise DomainError(f"Invariance oracle needs y_tilde in [{low}, {high}], got {point.y_tilde}")

    function = _wave_function_for(p, trunc)
    reference = function.evaluate(point).psi
    return {
        "translate": _relative_difference(function.evaluate(point.translated()).psi, reference),
        "invert": _relative_difference(function.evaluate(point.inverted()).psi, reference),
    }


def modular_invariance_residual(
    p: float,
    point: HalfPlanePoint,
    trunc: TruncationSpec = DEFAULT_TRUNCATION,
) -> float:
    """Max over the generators z + 1 and -1/z of |ψ(w) - ψ(z)| / |ψ(z)|."""
    return max(generator_residuals(p, point, trunc).values())


def pde_residual(
    p: float,
    point: HalfPlanePoint,
    h: float = DEFAULT_STENCIL_STEP,
    trunc: TruncationSpec = DEFAULT_TRUNCATION,
) -> float:
    """
    Relative residual of -y²Δψ = (p² + 1/4)ψ with a 5-point stencil in (x, y).

    All stencil points share the mode count needed at y - h, so the truncation
    does not change across the stencil.
    """
    y = point.y
    if not 0 < h < y:
        raise DomainError(f"Stencil step must satisfy 0 < h < y, got h={h}, y={y}")

    function = _wave_function_for(p, trunc)
    modes = function.modes_for(y - h)

    def psi_at(x: float, y_value: float) -> complex:
        return function.evaluate(HalfPlanePoint(x, math.log(y_value)), modes=modes).psi

    center = psi_at(point.x, y)
    laplacian = (
        psi_at(point.x + h, y)
        + psi_at(point.x - h, y)
        + psi_at(point.x, y + h)
        + psi_at(point.x, y - h)
        - 4.0 * center
    ) / (h * h)
    energy = function.energy
    return abs(-y * y * laplacian - energy * center) / (energy * abs(center))


def area_below(y_tilde_0: float) -> float:
    """
    Hyperbolic area of the fundamental domain below the ordinate y_0 = e^{ỹ_0}.

    Raises:
        DomainError: If y_0 < 1 (below the apex of the bounding arc)
    """
    if not y_tilde_0 >= 0:
        raise DomainError(f"area_below requires e^y_tilde >= 1, got y_tilde={y_tilde_0}")
    return math.pi / 3.0 - math.exp(-y_tilde_0)


def horizontal_length(y_tilde_0: float) -> float:
    """Hyperbolic length e^{-ỹ_0} of the horizontal cross-section at ỹ_0."""
    return math.exp(-y_tilde_0)


def reduce_to_fundamental_domain(x: float, y: float) -> HalfPlanePoint:
    """
    Map z = x + iy into the closure of the fundamental domain.

    Alternates z -> z - round(x) with z -> -1/z until |x| <= 1/2 and
    x² + y² >= 1 (up to rounding).

    Raises:
        ConvergenceError: If the point is too close to the real axis to settle
    """
    if not (math.isfinite(x) and math.isfinite(y) and y > 0):
        raise DomainError(f"Reduction requires finite x and y > 0, got ({x}, {y})")

    for _ in range(MAX_REDUCTION_STEPS):
        x -= round(x)
        modulus_sq = x * x + y * y
        if modulus_sq >= 1.0 - REDUCTION_EPS:
            return HalfPlanePoint.from_xy(x, y)
        x, y = -x / modulus_sq, y / modulus_sq

    raise ConvergenceError(f"Modular reduction did not settle in {MAX_REDUCTION_STEPS} steps")
