"""
Run configuration and one command class per CLI subcommand.
"""
import logging
import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, List, Optional

import numpy as np

from artin_scattering.errors import ConfigError
from artin_scattering.maass import DEFAULT_TRUNCATION, TruncationSpec, wavefunction_grid
from artin_scattering.plots import write_plot_script
from artin_scattering.scattering import (
    THRESHOLD_ENERGY,
    approx_resonances,
    exact_resonances,
    phase_scan,
)
from artin_scattering.specfun import DEFAULT_SERIES, SeriesSpec
from artin_scattering.tables import FORMATS, TableRow, TableWriter
from artin_scattering.zeros import DEFAULT_REFINE_TOL, MAX_ZEROS, ZeroFinder

logger = logging.getLogger(__name__)

COMMAND_NAMES = ("zeros", "resonances", "phase", "wave", "verify")
RESONANCE_METHODS = ("exact", "approx", "both")

# Defaults
DEFAULT_COUNT = 10
DEFAULT_PHASE_WINDOW = (1.0, 700.0)
DEFAULT_PHASE_SAMPLES = 2000
DEFAULT_WAVE_MOMENTUM = 7.06735
DEFAULT_WAVE_BAND = (-0.14, 2.0)
DEFAULT_GRID_POINTS = 21
MARKER_ZEROS = 10

# Parameters recorded in the output of each command
_COMMAND_PARAMS = {
    "zeros": ("count", "tol"),
    "resonances": ("count", "method", "newton_steps", "tol"),
    "phase": ("e_min", "e_max", "samples", "tol"),
    "wave": ("momentum", "x_points", "y_tilde_min", "y_tilde_max", "y_points", "tol"),
    "verify": ("count", "tol"),
}


@dataclass(frozen=True)
class RunConfig:
    """A validated CLI invocation."""

    command: str
    format: str = "csv"
    output_path: Optional[str] = None
    tol: Optional[float] = None
    count: int = DEFAULT_COUNT
    method: str = "both"
    newton_steps: int = 0
    e_min: float = DEFAULT_PHASE_WINDOW[0]
    e_max: float = DEFAULT_PHASE_WINDOW[1]
    samples: int = DEFAULT_PHASE_SAMPLES
    momentum: float = DEFAULT_WAVE_MOMENTUM
    x_points: int = DEFAULT_GRID_POINTS
    y_tilde_min: float = DEFAULT_WAVE_BAND[0]
    y_tilde_max: float = DEFAULT_WAVE_BAND[1]
    y_points: int = DEFAULT_GRID_POINTS
    plot: bool = False

    def __post_init__(self):
        if self.command not in COMMAND_NAMES:
            raise ConfigError(f"Unknown command: {self.command}. Available: {list(COMMAND_NAMES)}")
        if self.format not in FORMATS:
            raise ConfigError(f"Unknown format: {self.format}. Available: {list(FORMATS)}")
        if self.tol is not None and not (math.isfinite(self.tol) and 0 < self.tol < 1):
            raise ConfigError(f"--tol must lie in (0, 1), got {self.tol}")
        if not 1 <= self.count <= MAX_ZEROS:
            raise ConfigError(f"--count must lie in [1, {MAX_ZEROS}], got {self.count}")
        if self.method not in RESONANCE_METHODS:
            raise ConfigError(f"Unknown method: {self.method}. Available: {list(RESONANCE_METHODS)}")
        if self.newton_steps < 0:
            raise ConfigError(f"--newton-steps must be >= 0, got {self.newton_steps}")
        if not THRESHOLD_ENERGY < self.e_min < self.e_max:
            raise ConfigError(f"Need 1/4 < --e-min < --e-max, got [{self.e_min}, {self.e_max}]")
        if self.samples < 2:
            raise ConfigError(f"--samples must be >= 2, got {self.samples}")
        if not (math.isfinite(self.momentum) and self.momentum > 0):
            raise ConfigError(f"--momentum must be > 0, got {self.momentum}")
        if self.x_points < 1 or self.y_points < 1:
            raise ConfigError("--x-points and --y-points must be >= 1")
        if not self.y_tilde_min <= self.y_tilde_max:
            raise ConfigError("--y-tilde-min must not exceed --y-tilde-max")
        if self.plot and self.output_path in (None, "-"):
            raise ConfigError("--plot needs --output so the script can reference the data file")
        if self.plot and self.format != "csv":
            raise ConfigError("--plot needs --format csv")
        if self.plot and self.command == "verify":
            raise ConfigError("verify has no plot")

    def params(self) -> Dict[str, Any]:
        values = asdict(self)
        return {name: values[name] for name in _COMMAND_PARAMS[self.command]}


class Command:
    """Base for commands: compute results, turn them into rows, write them."""

    name = ""
    plot_kind: Optional[str] = None

    def __init__(self, config: RunConfig):
        self.config = config

    def compute(self) -> Any:
        raise NotImplementedError

    def to_rows(self, results: Any) -> List[TableRow]:
        raise NotImplementedError

    def plot_markers(self, results: Any) -> List[float]:
        return []

    def compute_and_write(self, writer: TableWriter) -> int:
        """
        Compute, write the artifact and, if requested, its gnuplot script.

        Args:
            writer: Destination writer

        Returns:
            Number of rows written
        """
        logger.info(f"Running {self.name}...")
        results = self.compute()
        rows = self.to_rows(results)
        written = writer.write(self.name, self.config.params(), rows)

        if self.config.plot and self.plot_kind:
            script = write_plot_script(self.config.output_path, self.plot_kind, self.plot_markers(results))
            logger.info(f"Wrote plot script {script}")

        logger.info(f"{self.name}: {written} rows")
        return written


class ZerosCommand(Command):
    name = "zeros"

    def __init__(self, config: RunConfig):
        super().__init__(config)
        self.finder = ZeroFinder(tol=config.tol or DEFAULT_REFINE_TOL)

    def compute(self):
        return self.finder.first_n_zeros(self.config.count)

    def to_rows(self, zeros):
        return [TableRow.of(n=z.index, u=z.u, residual=z.residual) for z in zeros]


class ResonancesCommand(Command):
    name = "resonances"
    plot_kind = "resonances"

    def __init__(self, config: RunConfig):
        super().__init__(config)
        self.finder = ZeroFinder(tol=config.tol or DEFAULT_REFINE_TOL)

    def compute(self):
        zeros = self.finder.first_n_zeros(self.config.count)
        # the exact columns are part of every resonances layout
        exact = exact_resonances(zeros)
        approx = None
        if self.config.method in ("approx", "both"):
            approx = approx_resonances(zeros, newton_steps=self.config.newton_steps)
        return zeros, exact, approx

    def to_rows(self, results):
        zeros, exact, approx = results
        rows = []
        for i, zero in enumerate(zeros):
            # width columns follow the published tables: Γ/2
            columns: Dict[str, Any] = {
                "n": zero.index,
                "u": zero.u,
                "E": exact[i].energy,
                "Gamma": exact[i].half_width,
            }
            if approx is not None:
                columns.update(
                    E_approx=approx[i].energy,
                    Gamma_approx=approx[i].half_width,
                    delta_offset=approx[i].phase_offset,
                )
            rows.append(TableRow.of(**columns))
        return rows


class PhaseCommand(Command):
    name = "phase"
    plot_kind = "phase"

    def __init__(self, config: RunConfig):
        super().__init__(config)
        self.series = DEFAULT_SERIES if config.tol is None else SeriesSpec(tolerance=config.tol)

    def compute(self):
        return phase_scan(self.config.e_min, self.config.e_max, self.config.samples, series=self.series)

    def to_rows(self, samples):
        return [
            TableRow.of(
                E=sample.energy,
                p=sample.momentum,
                delta=sample.delta,
                re_S=sample.s_value.real,
                im_S=sample.s_value.imag,
            )
            for sample in samples
        ]

    def plot_markers(self, samples):
        zeros = ZeroFinder().first_n_zeros(MARKER_ZEROS)
        return [
            r.energy
            for r in approx_resonances(zeros)
            if self.config.e_min <= r.energy <= self.config.e_max
        ]


class WaveCommand(Command):
    name = "wave"
    plot_kind = "wave"

    def __init__(self, config: RunConfig):
        super().__init__(config)
        self.trunc = DEFAULT_TRUNCATION if config.tol is None else TruncationSpec(tail_tol=config.tol)

    def compute(self):
        xs = [float(x) for x in np.linspace(-0.5, 0.5, self.config.x_points)]
        y_tildes = [
            float(y) for y in np.linspace(self.config.y_tilde_min, self.config.y_tilde_max, self.config.y_points)
        ]
        return wavefunction_grid(self.config.momentum, xs, y_tildes, self.trunc)

    def to_rows(self, samples):
        return [
            TableRow.of(
                x=sample.point.x,
                y_tilde=sample.point.y_tilde,
                re_psi=sample.psi.real,
                im_psi=sample.psi.imag,
                modes_used=sample.modes_used,
            )
            for sample in samples
        ]


class VerifyCommand(Command):
    name = "verify"

    def __init__(self, config: RunConfig):
        super().__init__(config)
        # imported here: verify builds on every other module, commands included
        from artin_scattering.verify import VerificationRunner

        self.runner = VerificationRunner(count=config.count, tol=config.tol)
        self.results: Dict[str, Any] = {}

    def compute(self):
        self.results = self.runner.run_all()
        return self.results

    def to_rows(self, results):
        rows = []
        for check, outcome in results["checks"].items():
            rows.append(
                TableRow.of(
                    check=check,
                    passed=outcome["success"],
                    detail=outcome["detail"] if outcome["success"] else outcome["error"],
                )
            )
        return rows


COMMANDS = {
    "zeros": ZerosCommand,
    "resonances": ResonancesCommand,
    "phase": PhaseCommand,
    "wave": WaveCommand,
    "verify": VerifyCommand,
}
