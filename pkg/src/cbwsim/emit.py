"""CSV and JSON writers. Output is byte-stable: fixed formatting, LF endings."""

from __future__ import annotations

import json
from typing import Iterable, Mapping

import numpy as np

from .analysis import Curve, Map2D


def format_number(x) -> str:
    """17 significant digits, shortest exponent form, ``-0`` folded to ``0``."""
    x = float(x)
    if x == 0:
        return "0"
    return format(x, ".17g")


def emit_curve_csv(curve: Curve, x_name: str = "phi", y_name: str = "value") -> str:
    lines = [f"{x_name},{y_name}"]
    lines.extend(f"{format_number(x)},{format_number(y)}" for x, y in zip(curve.xs, curve.ys))
    return "\n".join(lines) + "\n"


def _json_floats(values: np.ndarray) -> list[float]:
    return [0.0 if v == 0 else float(v) for v in np.ravel(values)]


def emit_map_json(grid: Map2D) -> str:
    """JSON object with ``phis``, ``psis`` and ``values_row_major`` (psi rows)."""
    payload = {
        "phis": _json_floats(grid.phis),
        "psis": _json_floats(grid.psis),
        "values_row_major": _json_floats(grid.values),
    }
    return json.dumps(payload, separators=(",", ":")) + "\n"


def emit_map_csv(grid: Map2D) -> str:
    """Long-form ``psi,phi,value`` rows in row-major order."""
    lines = ["psi,phi,value"]
    for psi, row in zip(grid.psis, grid.values):
        p = format_number(psi)
        lines.extend(f"{p},{format_number(phi)},{format_number(v)}" for phi, v in zip(grid.phis, row))
    return "\n".join(lines) + "\n"


def _cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_number(value)
    return str(value)


def emit_records_csv(records: Mapping[str, object], header: tuple[str, str] = ("quantity", "value")) -> str:
    lines = [",".join(header)]
    lines.extend(f"{k},{_cell(v)}" for k, v in records.items())
    return "\n".join(lines) + "\n"


def emit_rows_csv(header: Iterable[str], rows: Iterable[Iterable[object]]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(_cell(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def emit_json(payload) -> str:
    return json.dumps(payload, separators=(",", ":"), sort_keys=True) + "\n"
