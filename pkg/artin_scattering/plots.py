"""
gnuplot script emission for phase scans, resonance poles and wave-function grids.
"""
import logging
from pathlib import Path
from typing import List, Optional, Sequence

from artin_scattering.errors import SchemaError
from artin_scattering.tables import check_schema, read_csv_header

logger = logging.getLogger(__name__)

PLOT_KINDS = ("phase", "wave", "resonances")
TERMINAL = "pngcairo size 1000,700"


def _column(header: Sequence[str], name: str) -> int:
    # gnuplot columns are 1-based
    return list(header).index(name) + 1


def _preamble(data_name: str, title: str) -> List[str]:
    stem = Path(data_name).stem
    return [
        f"# generated for {data_name}",
        f"set terminal {TERMINAL}",
        f"set output '{stem}.png'",
        "set datafile separator ','",
        f"set title '{title}'",
    ]


def _phase_script(data_name: str, header: Sequence[str], markers: Sequence[float]) -> List[str]:
    lines = _preamble(data_name, "Phase shift delta(E)")
    lines += ["set xlabel 'E'", "set ylabel 'delta [rad]'", "set key top left"]
    for energy in markers:
        lines.append(f"set arrow from {energy!r}, graph 0 to {energy!r}, graph 1 nohead dashtype 2")
    lines.append(
        f"plot '{data_name}' using {_column(header, 'E')}:{_column(header, 'delta')} "
        "skip 1 with lines title 'delta(E)'"
    )
    return lines


def _resonance_script(data_name: str, header: Sequence[str]) -> List[str]:
    lines = _preamble(data_name, "Resonance poles E - i Gamma/2")
    lines += ["set xlabel 'Re E'", "set ylabel 'Im E'", "set xzeroaxis", "set key bottom left"]
    # Gamma columns hold Γ/2, the distance of the pole below the real axis
    series = []
    if "E" in header:
        series.append(
            f"'{data_name}' using {_column(header, 'E')}:(-${_column(header, 'Gamma')}) "
            "skip 1 with points pointtype 7 title 'exact'"
        )
    if "E_approx" in header:
        series.append(
            f"'{data_name}' using {_column(header, 'E_approx')}:(-${_column(header, 'Gamma_approx')}) "
            "skip 1 with points pointtype 6 title 'approx'"
        )
    lines.append("plot " + ", \\\n     ".join(series))
    return lines


def _wave_script(data_name: str, header: Sequence[str]) -> List[str]:
    re_col, im_col = _column(header, "re_psi"), _column(header, "im_psi")
    lines = _preamble(data_name, "|psi| over the fundamental strip")
    lines += ["set xlabel 'x'", "set ylabel 'y~'", "set palette rgbformulae 33,13,10", "set view map"]
    lines.append(
        f"plot '{data_name}' using {_column(header, 'x')}:{_column(header, 'y_tilde')}:"
        f"(sqrt(${re_col}**2 + ${im_col}**2)) skip 1 with image title ''"
    )
    return lines


def emit_plot_script(data_path: str, kind: str, markers: Optional[Sequence[float]] = None) -> str:
    """
    Build a standalone gnuplot script for a CSV artifact.

    The script refers to the data file by name, so it is meant to sit in the
    same directory.

    Args:
        data_path: CSV file written by the matching command
        kind: "phase", "wave" or "resonances"
        markers: Energies for vertical markers on phase plots

    Returns:
        Script text

    Raises:
        SchemaError: If the file is missing, not CSV, or has other columns
    """
    if kind not in PLOT_KINDS:
        raise SchemaError(f"Unknown plot kind: {kind}. Available: {list(PLOT_KINDS)}")
    path = Path(data_path)
    if not path.is_file():
        raise SchemaError(f"Data file {data_path} does not exist")
    if path.suffix.lower() != ".csv":
        raise SchemaError(f"gnuplot scripts need CSV data, got {path.name}")

    header = read_csv_header(str(path))
    check_schema(kind, header)

    if kind == "phase":
        lines = _phase_script(path.name, header, markers or [])
    elif kind == "resonances":
        lines = _resonance_script(path.name, header)
    else:
        lines = _wave_script(path.name, header)

    logger.debug(f"Emitted {kind} plot script for {path.name}")
    return "\n".join(lines) + "\n"


def write_plot_script(data_path: str, kind: str, markers: Optional[Sequence[float]] = None) -> Path:
    """Write the script next to the data file as <data>.gp and return its path."""
    script_path = Path(str(data_path) + ".gp")
    script_path.write_text(emit_plot_script(data_path, kind, markers), encoding="utf-8", newline="\n")
    return script_path
