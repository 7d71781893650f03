import io
import csv
import sys
import json
from typing import Any, Dict, List, Optional, Sequence

from config import get_logger

logger = get_logger(__name__)

FORMATS = ("json", "csv", "pretty")


def _jsonable(value: Any) -> Any:
    if isinstance(value, tuple):
        return [_jsonable(v) for v in value]
    if isinstance(value, list):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if hasattr(value, "model_dump"):
        return _jsonable(value.model_dump())
    if hasattr(value, "to_dict"):
        return _jsonable(value.to_dict())
    if hasattr(value, "value") and type(value).__module__ != "builtins":
        return value.value
    return value


def render_json(data: Dict[str, Any]) -> str:
    return json.dumps(_jsonable(data), indent=2) + "\n"


def render_csv(columns: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    """Header row plus data rows."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(list(columns))
    for row in rows:
        writer.writerow(["" if value is None else value for value in row])
    return buffer.getvalue()


def _cell(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return f"{value:.2f}"
    if isinstance(value, bool):
        return "yes" if value else "no"
    return str(value)


def render_pretty(
    fields: Dict[str, Any],
    columns: Optional[Sequence[str]] = None,
    rows: Optional[Sequence[Sequence[Any]]] = None,
) -> str:
    """Aligned 'key: value' lines, then an aligned table when rows are given."""
    lines = []
    if fields:
        width = max(len(key) for key in fields)
        for key, value in fields.items():
            lines.append(f"{key.ljust(width)} : {_cell(value)}")
    if columns and rows is not None:
        table = [[str(c) for c in columns]] + [[_cell(v) for v in row] for row in rows]
        widths = [max(len(r[i]) for r in table) for i in range(len(columns))]
        if lines:
            lines.append("")
        for index, row in enumerate(table):
            lines.append("  ".join(cell.rjust(widths[i]) for i, cell in enumerate(row)).rstrip())
            if index == 0:
                lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def render(
    fmt: str,
    data: Dict[str, Any],
    columns: Optional[Sequence[str]] = None,
    rows: Optional[List[Sequence[Any]]] = None,
    fields: Optional[Dict[str, Any]] = None,
) -> str:
    """
    Render one report.

    Args:
        fmt (str): json, csv or pretty
        data (dict): Full report, used for JSON output
        columns, rows: Tabular part, used for CSV and pretty output
        fields (dict, optional): Scalar summary for pretty output; defaults to
                                 data's non-list entries

    Returns:
        str: Rendered report ending in a newline
    """
    if fmt not in FORMATS:
        raise ValueError(f"Unknown output format {fmt!r}; expected one of {', '.join(FORMATS)}")
    if fmt == "json":
        return render_json(data)
    if fields is None:
        fields = {k: v for k, v in data.items() if not isinstance(v, (list, dict))}
    if fmt == "csv":
        if columns is None:
            return render_csv(list(fields), [list(fields.values())])
        return render_csv(columns, rows or [])
    return render_pretty(fields, columns, rows)


def write_report(text: str, path: Optional[str] = None) -> bool:
    """Write a rendered report to stdout, or to a file when a path is given."""
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return True
    try:
        with open(path, "w", newline="", encoding="utf-8") as handle:
            handle.write(text)
        logger.info(f"Report written to {path}")
        return True
    except OSError as e:
        logger.error(f"Failed to write report to {path}: {e}")
        return False
