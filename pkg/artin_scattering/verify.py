"""
Runs the numerical self-checks behind the `verify` command.

Every check compares a computed quantity against an identity, an independent
evaluation or the published tables, and either returns a one-line detail or
raises CheckFailed.
"""
import cmath
import logging
import math
import sys
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from artin_scattering.errors import ArtinError
from artin_scattering.maass import (
    HalfPlanePoint,
    area_below,
    horizontal_length,
    modular_invariance_residual,
    pde_residual,
    reduce_to_fundamental_domain,
)
from artin_scattering.scattering import (
    Sheet,
    approx_resonances,
    exact_resonances,
    momentum_from_energy,
    phase_derivative,
    phase_scan,
    s_matrix,
    theta,
    width_ratios,
)
from artin_scattering.specfun import bessel_k_imag_order, log_gamma, zeta
from artin_scattering.tables import load_published_table, published_table_resolution
from artin_scattering.zeros import DEFAULT_REFINE_TOL, ZeroFinder, zero_count_estimate

logger = logging.getLogger(__name__)

# Published tables hold the first ten resonances
PUBLISHED_ROWS = 10

# Tolerances
IDENTITY_TOL = 1e-8
BESSEL_ODE_TOL = 1e-3
ZERO_TOL = 5e-4
TABLE2_REL_TOL = 1e-3
ENERGY_DEVIATION = 0.03
WIDTH_DEVIATION = 0.35
UNITARITY_TOL = 1e-9
UNITARITY_SAMPLES = 200
UNITARITY_SEED = 20240101
JUMP_RANGE = (0.7 * math.pi, 1.3 * math.pi)
JUMP_SAMPLES = 120
PEAK_SAMPLES = 400
POLE_ZETA_TOL = 1e-6
INVARIANCE_TOL = 1e-6
INVARIANCE_MOMENTA_EXTRA = 5.0
PDE_POINTS = ((0.1, 1.2), (-0.3, 1.5), (0.25, 2.0), (0.4, 1.1), (-0.15, 3.0))
PDE_STEPS = (4e-3, 2e-3, 1e-3)
PDE_RATIO_RANGE = (3.5, 4.5)
PDE_RESIDUAL_BOUND = 1e-4
AREA_TOL = 1e-6
COUNT_HEIGHTS = (30.0, 50.0, 60.0)
ASYMPTOTIC_TOL = 5e-3


class CheckFailed(ArtinError, AssertionError):
    """A verification check found a value outside its tolerance."""


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise CheckFailed(message)


def _relative(value: complex, reference: complex) -> float:
    return abs(value - reference) / max(abs(reference), 1e-300)


def _gauss_legendre_area(y_top: float, nodes: int = 64) -> float:
    """∫∫ dx dy / y² over |x| <= 1/2, sqrt(1 - x²) <= y <= y_top by a tensor rule."""
    points, weights = np.polynomial.legendre.leggauss(nodes)
    xs = 0.5 * points
    x_weights = 0.5 * weights
    total = 0.0
    for x, wx in zip(xs, x_weights):
        bottom = math.sqrt(1.0 - x * x)
        half = 0.5 * (y_top - bottom)
        ys = bottom + half * (points + 1.0)
        total += wx * half * float(np.sum(weights / ys ** 2))
    return total


class VerificationRunner:
    """Runs every self-check and collects the outcomes."""

    def __init__(self, count: int = PUBLISHED_ROWS, tol: Optional[float] = None):
        """
        Args:
            count: Number of resonances to check against the tables, at most 10
            tol: Zero refinement tolerance
        """
        self.count = min(count, PUBLISHED_ROWS)
        self.finder = ZeroFinder(tol=tol or DEFAULT_REFINE_TOL)
        self.checks: Dict[str, Callable[[], str]] = {
            "special_functions": self.check_special_functions,
            "zero_count": self.check_zero_count,
            "zeros_published": self.check_zeros,
            "resonances_exact": self.check_exact_table,
            "resonances_approx": self.check_approx_table,
            "approx_consistency": self.check_approx_consistency,
            "width_ratios": self.check_width_ratios,
            "unitarity": self.check_unitarity,
            "phase_jumps": self.check_phase_jumps,
            "phase_peaks": self.check_phase_peaks,
            "pole_placement": self.check_pole_placement,
            "modular_invariance": self.check_modular_invariance,
            "pde_convergence": self.check_pde_convergence,
            "geometry": self.check_geometry,
        }

    def _zeros(self):
        return self.finder.first_n_zeros(self.count)

    def check_special_functions(self) -> str:
        worst = 0.0
        for s in (complex(0.25, 5.0), complex(0.5, 10.0), complex(0.75, 20.0), complex(0.3, 40.0)):
            rhs = (
                2.0 ** s
                * cmath.exp((s - 1.0) * math.log(math.pi))
                * cmath.sin(math.pi * s / 2.0)
                * cmath.exp(log_gamma(1.0 - s))
                * zeta(1.0 - s)
            )
            worst = max(worst, _relative(zeta(s), rhs))
        _require(worst <= IDENTITY_TOL, f"zeta functional equation residual {worst:.3g}")

        for s in (complex(0.3, 2.0), complex(0.7, -4.5), complex(0.5, 11.0)):
            product = cmath.exp(log_gamma(s) + log_gamma(1.0 - s))
            residual = _relative(product, math.pi / cmath.sin(math.pi * s))
            _require(residual <= IDENTITY_TOL, f"Gamma reflection residual {residual:.3g} at s={s}")

        for s in (complex(0.1, 3.0), complex(0.35, 12.5), complex(-0.2, 7.0)):
            residual = _relative(theta(s), theta(0.5 - s))
            _require(residual <= IDENTITY_TOL, f"theta(s) != theta(1/2 - s) at s={s}: {residual:.3g}")

        p, y, h = 3.0, 2.0, 1e-2
        k_minus, k_0, k_plus = (bessel_k_imag_order(p, y + d) for d in (-h, 0.0, h))
        second = y * y * (k_plus - 2.0 * k_0 + k_minus) / (h * h)
        first = y * (k_plus - k_minus) / (2.0 * h)
        potential = (y * y - p * p) * k_0
        scale = max(abs(second), abs(first), abs(potential))
        ode = abs(second + first - potential) / scale
        _require(ode <= BESSEL_ODE_TOL, f"Bessel ODE residual {ode:.3g}")

        return f"functional equation {worst:.2g}, Bessel ODE {ode:.2g}"

    def check_zero_count(self) -> str:
        counts = []
        for height in COUNT_HEIGHTS:
            found = len(self.finder.scan_brackets(0.0, height))
            expected = zero_count_estimate(height)
            _require(abs(found - expected) <= 1, f"{found} zeros below {height:g}, estimate {expected}")
            counts.append(f"N({height:g})={found}")
        return ", ".join(counts)

    def check_zeros(self) -> str:
        table = load_published_table("exact")
        worst = max(abs(z.u - table.loc[z.index, "u"]) for z in self._zeros())
        _require(worst <= ZERO_TOL, f"zeros deviate from the published table by {worst:.3g}")
        return f"max |u - u_table| = {worst:.2g}"

    def check_exact_table(self) -> str:
        table = load_published_table("exact")
        units = published_table_resolution("exact")
        for resonance in exact_resonances(self._zeros()):
            n = resonance.index
            for column, value in (("E", resonance.energy), ("Gamma", resonance.half_width)):
                difference = abs(value - table.loc[n, column])
                _require(
                    difference <= units.loc[n, column] * (1.0 + 1e-9),
                    f"exact table row {n}: {column} = {value:.6g}, printed {table.loc[n, column]}",
                )
        return f"{self.count} rows within one printed digit"

    def check_approx_table(self) -> str:
        table = load_published_table("approx")
        worst = 0.0
        for resonance in approx_resonances(self._zeros()):
            n = resonance.index
            for column, value in (("E_approx", resonance.energy), ("Gamma_approx", resonance.half_width)):
                relative = abs(value - table.loc[n, column]) / table.loc[n, column]
                _require(
                    relative <= TABLE2_REL_TOL,
                    f"approx table row {n}: {column} = {value:.6g}, printed {table.loc[n, column]}",
                )
                worst = max(worst, relative)
        return f"max relative deviation {worst:.2g}"

    def check_approx_consistency(self) -> str:
        zeros = self._zeros()
        energy_dev = width_dev = 0.0
        for exact, approx in zip(exact_resonances(zeros), approx_resonances(zeros)):
            energy_dev = max(energy_dev, abs(approx.energy - exact.energy) / exact.energy)
            width_dev = max(width_dev, abs(approx.width - exact.width) / exact.width)
        _require(energy_dev <= ENERGY_DEVIATION, f"energy deviation {energy_dev:.3g}")
        _require(width_dev <= WIDTH_DEVIATION, f"width deviation {width_dev:.3g}")
        return f"energies within {energy_dev:.2%}, widths within {width_dev:.2%}"

    def check_width_ratios(self) -> str:
        if self.count < 2:
            return "skipped, needs two resonances"
        resonances = exact_resonances(self._zeros())
        ratios = width_ratios(resonances)
        last = resonances[-1]
        asymptotic = abs(ratios[-1][0] * last.u / 2.0 - 1.0)
        _require(ratios[-1][1] is None, "last resonance must have no spacing ratio")
        if self.count == PUBLISHED_ROWS:
            _require(asymptotic <= ASYMPTOTIC_TOL, f"Gamma/E * u/2 off by {asymptotic:.3g} at n={last.index}")
        return f"Gamma/E * u/2 - 1 = {asymptotic:.2g} at n={last.index}"

    def check_unitarity(self) -> str:
        rng = np.random.default_rng(UNITARITY_SEED)
        momenta = rng.uniform(0.1, 60.0, UNITARITY_SAMPLES)
        worst = max(abs(abs(s_matrix(float(p))) - 1.0) for p in momenta)
        _require(worst <= UNITARITY_TOL, f"|S| deviates from 1 by {worst:.3g}")
        return f"max ||S| - 1| = {worst:.2g} over {UNITARITY_SAMPLES} momenta"

    def check_phase_jumps(self) -> str:
        jumps: List[float] = []
        for resonance in approx_resonances(self._zeros()):
            window = 3.0 * resonance.half_width
            scan = phase_scan(resonance.energy - window, resonance.energy + window, JUMP_SAMPLES)
            jump = scan[-1].delta - scan[0].delta
            _require(
                JUMP_RANGE[0] <= jump <= JUMP_RANGE[1],
                f"phase jump {jump / math.pi:.3f} pi across resonance {resonance.index}",
            )
            jumps.append(jump / math.pi)
        return f"jumps in [{min(jumps):.3f}, {max(jumps):.3f}] pi"

    def check_phase_peaks(self) -> str:
        for resonance in approx_resonances(self._zeros()):
            half = resonance.half_width
            scan = phase_scan(resonance.energy - 2.0 * half, resonance.energy + 2.0 * half, PEAK_SAMPLES)
            slopes = phase_derivative(scan)
            peak_energy = max(slopes, key=lambda pair: pair[1])[0]
            _require(
                abs(peak_energy - resonance.energy) <= half,
                f"d(delta)/dE peaks at {peak_energy:.4f}, outside E' +- Gamma'/2 of resonance {resonance.index}",
            )
        return f"{self.count} peaks inside their resonance windows"

    def check_pole_placement(self) -> str:
        worst = 0.0
        for resonance in exact_resonances(self._zeros()):
            momentum = momentum_from_energy(resonance.pole, Sheet.SECOND)
            expected = complex(resonance.u / 2.0, -0.25)
            _require(
                abs(momentum - expected) <= 1e-9 * resonance.u,
                f"pole {resonance.index} maps to p = {momentum}, expected {expected}",
            )
            worst = max(worst, abs(zeta(complex(0.5, -resonance.u))))
        _require(worst <= POLE_ZETA_TOL, f"|zeta| at the poles reaches {worst:.3g}")
        return f"max |zeta(1/2 - iu)| = {worst:.2g}"

    def check_modular_invariance(self) -> str:
        zeros = self.finder.first_n_zeros(2)
        momenta = (zeros[0].u / 2.0, zeros[1].u / 2.0, INVARIANCE_MOMENTA_EXTRA)
        worst = 0.0
        for p in momenta:
            for y_tilde in np.linspace(-0.1, 1.0, 5):
                for x in np.linspace(-0.45, 0.45, 5):
                    point = HalfPlanePoint(float(x), float(y_tilde))
                    worst = max(worst, modular_invariance_residual(p, point))
        _require(worst <= INVARIANCE_TOL, f"modular invariance residual {worst:.3g}")
        return f"max residual {worst:.2g} on 5x5 grid, 3 momenta"

    def check_pde_convergence(self) -> str:
        p = self.finder.first_n_zeros(1)[0].u / 2.0
        ratios = []
        for x, y in PDE_POINTS:
            point = HalfPlanePoint.from_xy(x, y)
            residuals = [pde_residual(p, point, h) for h in PDE_STEPS]
            for coarse, fine in zip(residuals, residuals[1:]):
                ratio = coarse / fine
                _require(
                    PDE_RATIO_RANGE[0] <= ratio <= PDE_RATIO_RANGE[1],
                    f"residual ratio {ratio:.3f} at ({x}, {y}) is not second order",
                )
                ratios.append(ratio)
            _require(
                residuals[-1] <= PDE_RESIDUAL_BOUND,
                f"residual {residuals[-1]:.3g} at ({x}, {y}) for h={PDE_STEPS[-1]}",
            )
        logger.debug(f"pde ratios at p={p}: {ratios}")
        return f"ratios in [{min(ratios):.3f}, {max(ratios):.3f}]"

    def check_geometry(self) -> str:
        area = area_below(1.0)
        brute = _gauss_legendre_area(math.e)
        _require(abs(area - brute) <= AREA_TOL, f"area {area} vs quadrature {brute}")
        _require(horizontal_length(1.0) == math.exp(-1.0), "horizontal length at y_tilde=1")

        reduced = reduce_to_fundamental_domain(0.3, 0.05)
        _require(
            abs(reduced.x) <= 0.5 and reduced.x ** 2 + reduced.y ** 2 >= 1.0 - 1e-12,
            f"reduction left the fundamental domain: {reduced}",
        )
        return f"area error {abs(area - brute):.2g}"

    def run_single(self, name: str) -> Dict[str, Any]:
        """
        Run one check by name.

        Returns:
            Dictionary with the check outcome
        """
        if name not in self.checks:
            raise ValueError(f"Unknown check: {name}. Available: {list(self.checks.keys())}")

        try:
            detail = self.checks[name]()
            logger.info(f"✓ {name}: {detail}")
            return {"check": name, "success": True, "detail": detail, "error": None}
        except Exception as e:
            error_msg = f"{name} failed: {e}"
            logger.error(error_msg)
            return {"check": name, "success": False, "detail": None, "error": error_msg}

    def run_all(self) -> Dict[str, Any]:
        """
        Run every check.

        Returns:
            Dictionary with per-check outcomes and pass/fail counts
        """
        results: Dict[str, Any] = {"passed": 0, "failed": 0, "checks": {}, "success": True, "errors": []}

        logger.info("Starting verification...")
        for name in self.checks:
            outcome = self.run_single(name)
            results["checks"][name] = outcome
            if outcome["success"]:
                results["passed"] += 1
            else:
                results["failed"] += 1
                results["errors"].append(outcome["error"])
                results["success"] = False

        logger.info(f"Verification complete: {results['passed']} passed, {results['failed']} failed")
        return results


def print_summary(results: Dict[str, Any], stream=None) -> None:
    """Print one ✓/✗ line per check and the totals."""
    stream = stream or sys.stdout
    for name, outcome in results["checks"].items():
        if outcome["success"]:
            print(f"✓ {name}: {outcome['detail']}", file=stream)
        else:
            print(f"✗ {outcome['error']}", file=stream)
    print(f"{results['passed']} passed, {results['failed']} failed", file=stream)
