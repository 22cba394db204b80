"""
Complex special-function kernel: log-gamma, digamma, Riemann zeta, the
Riemann-Siegel functions and the modified Bessel function K_ip(y).

Complex values are plain Python ``complex``; every public operation checks that
its result is finite before returning it.
"""
import cmath
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple, Union

import numpy as np

from artin_scattering.errors import AccuracyError, ConfigError, DomainError, PoleError

logger = logging.getLogger(__name__)

Number = Union[int, float, complex]

# Stirling series configuration
STIRLING_MIN_MODULUS = 15.0
STIRLING_TERMS = 10

# Bessel quadrature configuration
GAUSS_LEGENDRE_POINTS = 16
MAX_PANEL_WIDTH = 0.5
TAIL_CUT_EXPONENT = 745.0  # exp(-745) underflows in double precision
CONTOUR_MARGIN = 4.0  # shifted contour keeps e^{-4} of the e^{-πp/2} cancellation
SHIFTED_TAIL_DECAY = 40.0  # shifted integrand is cut at e^{-40} of its peak

LOG_PI = math.log(math.pi)
HALF_LOG_TWO_PI = 0.5 * math.log(2.0 * math.pi)

# B_2 ... B_30; Euler-Maclaurin corrections beyond B_30 start to diverge
BERNOULLI = {
    2: Fraction(1, 6),
    4: Fraction(-1, 30),
    6: Fraction(1, 42),
    8: Fraction(-1, 30),
    10: Fraction(5, 66),
    12: Fraction(-691, 2730),
    14: Fraction(7, 6),
    16: Fraction(-3617, 510),
    18: Fraction(43867, 798),
    20: Fraction(-174611, 330),
    22: Fraction(854513, 138),
    24: Fraction(-236364091, 2730),
    26: Fraction(8553103, 6),
    28: Fraction(-23749461029, 870),
    30: Fraction(8615841276005, 14322),
}
MAX_CORRECTION_TERMS = 15

# Euler-Maclaurin coefficients B_2k / (2k)!
_EM_COEFFICIENTS = tuple(
    float(BERNOULLI[2 * k] / math.factorial(2 * k))
    for k in range(1, MAX_CORRECTION_TERMS + 1)
)

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(GAUSS_LEGENDRE_POINTS)
_GL_NODES.flags.writeable = False
_GL_WEIGHTS.flags.writeable = False


@dataclass(frozen=True)
class SeriesSpec:
    """
    Controls the Euler-Maclaurin evaluation of ζ.

    The number of direct terms actually summed is
    ``max(direct_terms, ceil(height_factor * |Im s|))`` so the default settings
    keeps its accuracy as the height grows.
    """

    direct_terms: int = 20
    correction_terms: int = 8
    height_factor: float = 1.3
    tolerance: float = 1e-10

    def __post_init__(self):
        if self.direct_terms < 10:
            raise ConfigError(f"direct_terms must be >= 10, got {self.direct_terms}")
        if not 1 <= self.correction_terms <= MAX_CORRECTION_TERMS:
            raise ConfigError(
                f"correction_terms must lie in [1, {MAX_CORRECTION_TERMS}], "
                f"got {self.correction_terms}"
            )
        if self.height_factor < 0:
            raise ConfigError(f"height_factor must be >= 0, got {self.height_factor}")
        if self.tolerance <= 0:
            raise ConfigError(f"tolerance must be > 0, got {self.tolerance}")

    def terms_for(self, s: complex) -> int:
        return max(self.direct_terms, math.ceil(self.height_factor * abs(s.imag)))


@dataclass(frozen=True)
class QuadratureSpec:
    """Controls the composite Gauss-Legendre evaluation of K_ip(y)."""

    rel_tol: float = 1e-12
    abs_tol: float = 1e-30
    max_panels: int = 4096
    tail_cut_exponent: float = TAIL_CUT_EXPONENT

    def __post_init__(self):
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ConfigError("rel_tol and abs_tol must be > 0")
        if self.max_panels < 4:
            raise ConfigError(f"max_panels must be >= 4, got {self.max_panels}")
        if self.tail_cut_exponent <= 0:
            raise ConfigError("tail_cut_exponent must be > 0")


DEFAULT_SERIES = SeriesSpec()
DEFAULT_QUADRATURE = QuadratureSpec()


def _as_complex(s: Number) -> complex:
    value = complex(s)
    if not cmath.isfinite(value):
        raise DomainError(f"Argument must be finite, got {s!r}")
    return value


def _checked(value: complex, what: str) -> complex:
    if not cmath.isfinite(value):
        raise AccuracyError(f"{what} produced a non-finite value: {value!r}")
    return value


def _is_gamma_pole(s: complex) -> bool:
    return s.imag == 0.0 and s.real <= 0.0 and s.real == math.floor(s.real)


def _stirling_shift(s: complex) -> int:
    shift = 0
    while (s + shift).real < 1.0 or abs(s + shift) < STIRLING_MIN_MODULUS:
        shift += 1
    return shift


def log_gamma(s: Number) -> complex:
    """
    Principal branch of log Γ(s).

    Stirling series applied after shifting the argument upward until it is
    large enough, then undone with log Γ(s) = log Γ(s + n) - Σ log(s + k).

    Args:
        s: Complex argument

    Returns:
        log Γ(s), analytic off the non-positive real axis

    Raises:
        PoleError: If s is a non-positive integer
    """
    s = _as_complex(s)
    if _is_gamma_pole(s):
        raise PoleError(f"log_gamma has a pole at s = {s.real:g}")

    shift = _stirling_shift(s)
    z = s + shift
    result = (z - 0.5) * cmath.log(z) - z + HALF_LOG_TWO_PI
    z_inv = 1.0 / z
    z_inv_sq = z_inv * z_inv
    power = z_inv
    for k in range(1, STIRLING_TERMS + 1):
        result += float(BERNOULLI[2 * k]) / (2 * k * (2 * k - 1)) * power
        power *= z_inv_sq

    for k in range(shift):
        result -= cmath.log(s + k)

    return _checked(result, "log_gamma")


def digamma(s: Number) -> complex:
    """ψ(s) = d/ds log Γ(s), by the same shift-then-asymptotic scheme as log_gamma."""
    s = _as_complex(s)
    if _is_gamma_pole(s):
        raise PoleError(f"digamma has a pole at s = {s.real:g}")

    shift = _stirling_shift(s)
    z = s + shift
    z_inv = 1.0 / z
    z_inv_sq = z_inv * z_inv
    result = cmath.log(z) - 0.5 * z_inv
    power = z_inv_sq
    for k in range(1, STIRLING_TERMS + 1):
        result -= float(BERNOULLI[2 * k]) / (2 * k) * power
        power *= z_inv_sq

    for k in range(shift):
        result -= 1.0 / (s + k)

    return _checked(result, "digamma")


def _euler_maclaurin(s: complex, spec: SeriesSpec, derivative: bool) -> complex:
    n_terms = spec.terms_for(s)
    log_n = np.log(np.arange(1, n_terms, dtype=float))
    powers = np.exp(-s * log_n)

    big_n = float(n_terms)
    log_big_n = math.log(big_n)
    n_pow = cmath.exp(-s * log_big_n)  # N^-s

    if derivative:
        total = complex(-(log_n * powers).sum())
        total += big_n * n_pow * (-log_big_n / (s - 1.0) - 1.0 / (s - 1.0) ** 2)
        total -= 0.5 * log_big_n * n_pow
    else:
        total = complex(powers.sum())
        total += big_n * n_pow / (s - 1.0) + 0.5 * n_pow

    # rising = s(s+1)...(s+2k-2) and its derivative
    rising, rising_prime = s, 1.0 + 0j
    term_pow = n_pow / big_n
    last = 0j
    for k in range(1, spec.correction_terms + 1):
        if k > 1:
            a, b = 2 * k - 3, 2 * k - 2
            q = (s + a) * (s + b)
            q_prime = 2.0 * s + a + b
            rising, rising_prime = rising * q, rising_prime * q + rising * q_prime
            term_pow /= big_n * big_n
        coefficient = _EM_COEFFICIENTS[k - 1]
        if derivative:
            last = coefficient * term_pow * (rising_prime - log_big_n * rising)
        else:
            last = coefficient * term_pow * rising
        total += last

    if abs(last) > spec.tolerance:
        raise AccuracyError(
            f"Euler-Maclaurin remainder {abs(last):.3e} exceeds tolerance "
            f"{spec.tolerance:g} at s = {s} (N={n_terms}, M={spec.correction_terms})"
        )
    return total


def zeta(s: Number, spec: SeriesSpec = DEFAULT_SERIES) -> complex:
    """
    Riemann ζ(s) by Euler-Maclaurin summation.

    Args:
        s: Complex argument, s != 1
        spec: Series truncation parameters

    Returns:
        ζ(s)

    Raises:
        PoleError: At s = 1
        AccuracyError: If the last Bernoulli correction exceeds spec.tolerance
    """
    s = _as_complex(s)
    if s == 1:
        raise PoleError("zeta has a pole at s = 1")
    return _checked(_euler_maclaurin(s, spec, derivative=False), "zeta")


def zeta_prime(s: Number, spec: SeriesSpec = DEFAULT_SERIES) -> complex:
    """ζ'(s) from the term-wise differentiated Euler-Maclaurin formula."""
    s = _as_complex(s)
    if s == 1:
        raise PoleError("zeta_prime has a pole at s = 1")
    return _checked(_euler_maclaurin(s, spec, derivative=True), "zeta_prime")


def riemann_siegel_theta(t: float) -> float:
    """ϑ(t) = Im log Γ(1/4 + it/2) - (t/2) ln π, computed from the exact log-gamma."""
    return log_gamma(complex(0.25, 0.5 * t)).imag - 0.5 * t * LOG_PI


def hardy_z(t: float, spec: SeriesSpec = DEFAULT_SERIES) -> float:
    """
    Hardy's Z(t) = exp(iϑ(t)) ζ(1/2 + it), real on the real axis.

    Args:
        t: Height on the critical line, t >= 0
        spec: Series truncation parameters for ζ

    Returns:
        Z(t)

    Raises:
        DomainError: If t < 0
    """
    if not math.isfinite(t) or t < 0:
        raise DomainError(f"hardy_z requires finite t >= 0, got {t}")
    rotated = cmath.exp(1j * riemann_siegel_theta(t)) * zeta(complex(0.5, t), spec)
    return rotated.real


def _contour_height(p: float, y: float) -> float:
    """Height θ of the line Im t = θ the K_ip integral is moved to (p >= 0)."""
    if p == 0.0:
        return 0.0
    margin = min(0.5 * math.pi, CONTOUR_MARGIN / p)
    saddle = math.asin(min(p / y, 1.0))
    return max(0.0, min(saddle, 0.5 * math.pi - margin))


def _panel_edges(p: float, y_sin: float, t_max: float, max_panels: int) -> np.ndarray:
    # panel width tracks the local phase speed |p - y sinθ cosh t|
    edges = [0.0]
    while edges[-1] < t_max:
        if len(edges) > max_panels:
            raise AccuracyError(f"K_ip with p={p} needs more than {max_panels} panels")
        t = edges[-1]
        frequency = max(p, 1.0, y_sin * math.cosh(min(t + MAX_PANEL_WIDTH, t_max)))
        edges.append(min(t_max, t + min(MAX_PANEL_WIDTH, math.pi / (4.0 * frequency))))
    if len(edges) < 5:
        return np.linspace(0.0, t_max, 5)
    return np.array(edges)


def _split_panels(edges: np.ndarray) -> np.ndarray:
    refined = np.empty(2 * len(edges) - 1)
    refined[0::2] = edges
    refined[1::2] = 0.5 * (edges[:-1] + edges[1:])
    return refined


def _gauss_legendre_panels(p: float, y: float, theta: float, edges: np.ndarray) -> Tuple[float, float]:
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    t = mid[:, None] + half[:, None] * _GL_NODES[None, :]
    magnitude = np.exp(-p * theta - y * math.cos(theta) * np.cosh(t))
    integrand = magnitude * np.cos(p * t - y * math.sin(theta) * np.sinh(t))
    weighted = half[:, None] * _GL_WEIGHTS[None, :]
    return float((weighted * integrand).sum()), float((weighted * magnitude).sum())


def bessel_k_imag_order(p: float, y: float, spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """
    Modified Bessel function of imaginary order, K_ip(y) = ∫_0^∞ e^{-y cosh t} cos(pt) dt.

    For large p the real-axis integrand cancels down to K_ip(y) ~ e^{-πp/2},
    so the integral is taken along Im t = θ instead:

        K_ip(y) = ∫_0^∞ e^{-pθ - y cosθ cosh t} cos(pt - y sinθ sinh t) dt

    θ passes through the saddle point asin(p/y) when p < y and stays
    CONTOUR_MARGIN / p below π/2 otherwise, which pulls the e^{-πp/2} out of
    the integral. For small p, θ = 0 and this is the plain real-axis rule
    cut where y cosh t exceeds spec.tail_cut_exponent.

    The integral is evaluated with 16-point Gauss-Legendre panels no wider
    than min(0.5, π / (4 × local phase speed)); panels are split until two
    consecutive rules agree relative to ∫|integrand|.

    Args:
        p: Order parameter (K_ip is even in p)
        y: Argument, y > 0
        spec: Quadrature parameters

    Returns:
        Real value of K_ip(y)

    Raises:
        DomainError: If y <= 0
        AccuracyError: If the panel budget is exhausted
    """
    if not (math.isfinite(p) and math.isfinite(y)):
        raise DomainError(f"bessel_k_imag_order requires finite arguments, got p={p}, y={y}")
    if y <= 0:
        raise DomainError(f"bessel_k_imag_order requires y > 0, got {y}")

    p = abs(p)
    if y >= spec.tail_cut_exponent:
        return 0.0

    theta = _contour_height(p, y)
    y_cos = y * math.cos(theta)
    peak_exponent = p * theta + y_cos
    cut_exponent = spec.tail_cut_exponent
    if theta > 0.0:
        cut_exponent = min(cut_exponent, peak_exponent + SHIFTED_TAIL_DECAY)
    if cut_exponent <= peak_exponent:
        return 0.0

    t_max = math.acosh((cut_exponent - p * theta) / y_cos)
    edges = _panel_edges(p, y * math.sin(theta), t_max, spec.max_panels)

    value, l1_norm = _gauss_legendre_panels(p, y, theta, edges)
    while 2 * (len(edges) - 1) <= spec.max_panels:
        edges = _split_panels(edges)
        refined, l1_norm = _gauss_legendre_panels(p, y, theta, edges)
        if abs(refined - value) <= max(spec.abs_tol, spec.rel_tol * l1_norm):
            return refined
        value = refined
        logger.debug(f"K_ip refinement: p={p}, y={y}, theta={theta:.4f}, panels={len(edges) - 1}")

    raise AccuracyError(
        f"K_ip({y}) with p={p} did not converge within {spec.max_panels} panels"
    )
