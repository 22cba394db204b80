"""
Locate nontrivial Riemann zeta zeros on the critical line.

Zeros are bracketed by sign changes of Hardy's Z on a uniform grid and then
refined by bisection with secant acceleration.
"""
import logging
import math
import threading
from dataclasses import dataclass
from typing import List, Optional, Tuple

from artin_scattering.errors import BudgetError, ConvergenceError, DomainError, ZeroCountError
from artin_scattering.specfun import DEFAULT_SERIES, SeriesSpec, hardy_z

logger = logging.getLogger(__name__)

# Scan configuration
DEFAULT_SCAN_STEP = 0.25
SCAN_CHUNK = 20.0
DEFAULT_MAX_HEIGHT = 150.0
MAX_ZEROS = 50

# Refinement configuration
DEFAULT_REFINE_TOL = 1e-8
MAX_REFINE_ITERATIONS = 200

Bracket = Tuple[float, float]


@dataclass(frozen=True)
class ZetaZero:
    """A zero 1/2 + iu of ζ, with |Z(u)| and the width of its final bracket."""

    index: int
    u: float
    residual: float
    bracket_width: float

    def __post_init__(self):
        if self.index < 1:
            raise DomainError(f"zero index must be >= 1, got {self.index}")


def zero_count_estimate(height: float) -> int:
    """
    Riemann-von Mangoldt estimate of the number of zeros with 0 < u <= height.

    Args:
        height: Height T > 0

    Returns:
        floor((T/2π) ln(T/2π) - T/2π + 7/8)
    """
    if height <= 0:
        raise DomainError(f"zero_count_estimate requires T > 0, got {height}")
    scaled = height / (2.0 * math.pi)
    return math.floor(scaled * math.log(scaled) - scaled + 0.875)


class ZeroFinder:
    """Finds and caches the first zeros of ζ on the critical line."""

    def __init__(
        self,
        step: float = DEFAULT_SCAN_STEP,
        tol: float = DEFAULT_REFINE_TOL,
        max_height: float = DEFAULT_MAX_HEIGHT,
        series: SeriesSpec = DEFAULT_SERIES,
    ):
        """
        Initialize the finder.

        Args:
            step: Grid spacing of the sign-change scan
            tol: Final bracket width for each refined zero
            max_height: Highest ordinate the scan may reach
            series: ζ truncation used for Z(t)
        """
        if step <= 0 or tol <= 0:
            raise DomainError("step and tol must be > 0")
        self.step = step
        self.tol = tol
        self.max_height = max_height
        self.series = series
        self._zeros: List[ZetaZero] = []
        self._scanned_to = 0.0
        self._lock = threading.Lock()

    def hardy_z(self, t: float) -> float:
        return hardy_z(t, self.series)

    def scan_brackets(self, t_min: float, t_max: float, step: Optional[float] = None) -> List[Bracket]:
        """
        Return disjoint, ordered intervals across which Z changes sign.

        Args:
            t_min: Lower end of the scan, t_min >= 0
            t_max: Upper end of the scan, t_max > t_min
            step: Grid spacing (defaults to the finder's step)

        Returns:
            List of (t_lo, t_hi) brackets, possibly empty
        """
        step = self.step if step is None else step
        if not 0 <= t_min < t_max:
            raise DomainError(f"scan requires 0 <= t_min < t_max, got [{t_min}, {t_max}]")
        if step <= 0:
            raise DomainError(f"scan step must be > 0, got {step}")

        n_steps = math.ceil((t_max - t_min) / step)
        grid = [min(t_min + k * step, t_max) for k in range(n_steps + 1)]

        brackets = []
        previous_t, previous_positive = grid[0], self.hardy_z(grid[0]) >= 0
        for t in grid[1:]:
            positive = self.hardy_z(t) >= 0
            if positive != previous_positive:
                brackets.append((previous_t, t))
            previous_t, previous_positive = t, positive

        logger.debug(f"Scan [{t_min}, {t_max}] step {step}: {len(brackets)} brackets")
        return brackets

    def refine_zero(self, bracket: Bracket, tol: Optional[float] = None, index: int = 1) -> ZetaZero:
        """
        Refine a sign-change bracket of Z down to width tol.

        `index` is the position of the zero along the critical line; it is
        recorded as given.

        Raises:
            DomainError: If Z does not change sign across the bracket
            ConvergenceError: If the iteration cap is reached
        """
        tol = self.tol if tol is None else tol
        if tol <= 0:
            raise DomainError(f"tol must be > 0, got {tol}")

        a, b = bracket
        fa, fb = self.hardy_z(a), self.hardy_z(b)
        if (fa >= 0) == (fb >= 0):
            raise DomainError(f"No sign change of Z across [{a}, {b}]")

        bisect = False
        for _ in range(MAX_REFINE_ITERATIONS):
            width = b - a
            if width <= tol:
                break

            c = 0.5 * (a + b)
            if not bisect and fb != fa:
                secant = b - fb * (b - a) / (fb - fa)
                if a < secant < b:
                    c = secant

            fc = self.hardy_z(c)
            if fc == 0.0:
                a = b = c
                fa = fb = fc
                break
            if (fc >= 0) == (fa >= 0):
                a, fa = c, fc
            else:
                b, fb = c, fc

            # fall back to bisection whenever the bracket failed to halve
            bisect = (b - a) > 0.5 * width
        else:
            raise ConvergenceError(
                f"Zero refinement in [{bracket[0]}, {bracket[1]}] did not reach "
                f"tol {tol} in {MAX_REFINE_ITERATIONS} iterations"
            )

        u = a
        if b > a and fb != fa:
            u = min(max(b - fb * (b - a) / (fb - fa), a), b)
        return ZetaZero(index=index, u=u, residual=abs(self.hardy_z(u)), bracket_width=b - a)

    def first_n_zeros(self, count: int) -> List[ZetaZero]:
        """
        Return the first `count` zeros, scanning upward in chunks as needed.

        Args:
            count: Number of zeros, 1 <= count <= 50

        Returns:
            Zeros with indices 1..count

        Raises:
            BudgetError: If the scan would pass max_height
            ZeroCountError: If the zeros found disagree with zero_count_estimate
        """
        if not 1 <= count <= MAX_ZEROS:
            raise DomainError(f"count must lie in [1, {MAX_ZEROS}], got {count}")

        with self._lock:
            while len(self._zeros) < count:
                if self._scanned_to >= self.max_height:
                    raise BudgetError(
                        f"Only {len(self._zeros)} zeros below height {self.max_height}; "
                        f"{count} requested"
                    )
                t_lo = self._scanned_to
                t_hi = min(t_lo + SCAN_CHUNK, self.max_height)
                logger.info(f"Scanning Hardy Z on [{t_lo:g}, {t_hi:g}]...")

                for bracket in self.scan_brackets(t_lo, t_hi):
                    zero = self.refine_zero(bracket, index=len(self._zeros) + 1)
                    self._zeros.append(zero)
                    logger.debug(f"Zero {zero.index}: u = {zero.u:.10f}")

                self._scanned_to = t_hi
                self._check_count()

            return list(self._zeros[:count])

    def _check_count(self) -> None:
        expected = zero_count_estimate(self._scanned_to)
        found = len(self._zeros)
        if abs(found - expected) > 1:
            error_msg = (
                f"Found {found} zeros below {self._scanned_to:g}, "
                f"Riemann-von Mangoldt estimate is {expected}"
            )
            logger.error(error_msg)
            raise ZeroCountError(error_msg)


_DEFAULT_FINDER = ZeroFinder()


def scan_brackets(t_min: float, t_max: float, step: float = DEFAULT_SCAN_STEP) -> List[Bracket]:
    """Sign-change brackets of Z on [t_min, t_max] with the default finder."""
    return _DEFAULT_FINDER.scan_brackets(t_min, t_max, step)


def refine_zero(bracket: Bracket, tol: float = DEFAULT_REFINE_TOL, index: int = 1) -> ZetaZero:
    """Refine one bracket with the default finder."""
    return _DEFAULT_FINDER.refine_zero(bracket, tol, index)


def first_n_zeros(count: int) -> List[ZetaZero]:
    """The first `count` zeros from the in-process cache of the default finder."""
    return _DEFAULT_FINDER.first_n_zeros(count)
