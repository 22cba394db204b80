"""
Table rows, CSV/JSON writers and the normalized published tables.
"""
import io
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import pandas as pd

from artin_scattering.errors import SchemaError

logger = logging.getLogger(__name__)

DEFAULT_DIGITS = 6
FORMATS = ("csv", "json")
PUBLISHED_TABLES = ("exact", "approx")

# Column sets per command; resonances adds the approx columns unless --method exact
SCHEMAS: Dict[str, Tuple[Tuple[str, ...], ...]] = {
    "zeros": (("n", "u", "residual"),),
    "resonances": (
        ("n", "u", "E", "Gamma"),
        ("n", "u", "E", "Gamma", "E_approx", "Gamma_approx", "delta_offset"),
    ),
    "phase": (("E", "p", "delta", "re_S", "im_S"),),
    "wave": (("x", "y_tilde", "re_psi", "im_psi", "modes_used"),),
    "verify": (("check", "passed", "detail"),),
}


def _default_data_dir() -> Path:
    return Path(__file__).parent.parent / "data"


@dataclass(frozen=True)
class TableRow:
    """Ordered (column, value) pairs of one output row."""

    values: Tuple[Tuple[str, Any], ...]

    @classmethod
    def of(cls, **columns: Any) -> "TableRow":
        return cls(values=tuple(columns.items()))

    @property
    def columns(self) -> Tuple[str, ...]:
        return tuple(name for name, _ in self.values)

    def as_dict(self) -> Dict[str, Any]:
        return dict(self.values)

    def rendered(self, digits: int = DEFAULT_DIGITS) -> Dict[str, str]:
        """Values as text, floats with `digits` significant digits."""
        result = {}
        for name, value in self.values:
            if isinstance(value, bool) or value is None:
                result[name] = "" if value is None else str(value).lower()
            elif isinstance(value, float):
                result[name] = f"{value:.{digits}g}"
            else:
                result[name] = str(value)
        return result


def check_schema(command: str, columns: Sequence[str]) -> None:
    """
    Raise SchemaError unless `columns` is one of the layouts of `command`.
    """
    if command not in SCHEMAS:
        raise SchemaError(f"Unknown command schema: {command}. Available: {list(SCHEMAS.keys())}")
    if tuple(columns) not in SCHEMAS[command]:
        raise SchemaError(f"Columns {list(columns)} do not match the {command} schema")


class TableWriter:
    """Writes command results as CSV or JSON artifacts."""

    def __init__(self, output_path: Optional[str] = None, fmt: str = "csv", digits: int = DEFAULT_DIGITS):
        """
        Initialize the writer.

        Args:
            output_path: Destination file; None or "-" writes to stdout
            fmt: "csv" or "json"
            digits: Significant digits for CSV rendering
        """
        if fmt not in FORMATS:
            raise SchemaError(f"Unknown format: {fmt}. Available: {list(FORMATS)}")
        self.output_path = None if output_path in (None, "-") else Path(output_path)
        self.fmt = fmt
        self.digits = digits

    def render(self, command: str, params: Dict[str, Any], rows: Sequence[TableRow]) -> str:
        """
        Render rows in the writer's format.

        Args:
            command: Command name, selects the schema
            params: Run parameters recorded in JSON output
            rows: Rows sharing one column layout

        Returns:
            The artifact text
        """
        columns = rows[0].columns if rows else SCHEMAS[command][0]
        for row in rows:
            check_schema(command, row.columns)
            if row.columns != columns:
                raise SchemaError(f"Mixed column layouts in {command} output")

        if self.fmt == "json":
            document = {
                "command": command,
                "params": params,
                "rows": [row.as_dict() for row in rows],
            }
            return json.dumps(document, indent=2, ensure_ascii=False, allow_nan=False) + "\n"

        frame = pd.DataFrame([row.rendered(self.digits) for row in rows], columns=list(columns))
        buffer = io.StringIO()
        frame.to_csv(buffer, index=False, lineterminator="\n")
        return buffer.getvalue()

    def write(self, command: str, params: Dict[str, Any], rows: Sequence[TableRow]) -> int:
        """
        Write rows to the output path (or stdout).

        Returns:
            Number of rows written
        """
        text = self.render(command, params, rows)
        if self.output_path is None:
            sys.stdout.write(text)
        else:
            self.output_path.parent.mkdir(parents=True, exist_ok=True)
            self.output_path.write_text(text, encoding="utf-8", newline="\n")
            logger.info(f"Wrote {len(rows)} {command} rows to {self.output_path}")
        return len(rows)


def read_json_table(path: str) -> Dict[str, Any]:
    """Parse a JSON artifact back into {"command", "params", "rows"}."""
    document = json.loads(Path(path).read_text(encoding="utf-8"))
    if not {"command", "params", "rows"} <= set(document):
        raise SchemaError(f"{path} is not a table document")
    return document


def read_csv_header(path: str) -> List[str]:
    """Column names of a CSV artifact."""
    with open(path, encoding="utf-8") as handle:
        header = handle.readline().strip()
    if not header:
        raise SchemaError(f"{path} has no header row")
    return header.split(",")


def _published_path(kind: str, data_dir: Optional[str]) -> Path:
    if kind not in PUBLISHED_TABLES:
        raise SchemaError(f"Unknown published table: {kind}. Available: {list(PUBLISHED_TABLES)}")
    directory = Path(data_dir) if data_dir else _default_data_dir()
    return directory / f"published_{kind}.csv"


def load_published_table(kind: str, data_dir: Optional[str] = None) -> pd.DataFrame:
    """
    Load a normalized published table.

    The exact table holds (n, u, E, Gamma), the approx table
    (n, u, E_approx, Gamma_approx). Width columns are Γ/2 as printed.

    Args:
        kind: "exact" or "approx"
        data_dir: Directory of the golden files, defaults to <project>/data

    Returns:
        DataFrame indexed by n
    """
    frame = pd.read_csv(_published_path(kind, data_dir))
    return frame.set_index("n")


def published_table_resolution(kind: str, data_dir: Optional[str] = None) -> pd.DataFrame:
    """
    One unit in the last printed digit of every cell of a published table.

    Returns:
        DataFrame indexed by n, same columns as load_published_table
    """
    text = pd.read_csv(_published_path(kind, data_dir), dtype=str).set_index("n")
    text.index = text.index.astype(int)

    def unit(cell: str) -> float:
        decimals = len(cell.split(".", 1)[1]) if "." in cell else 0
        return 10.0 ** -decimals

    return text.apply(lambda column: column.map(unit))
