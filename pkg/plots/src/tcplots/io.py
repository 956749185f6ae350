"""Readers for the simulator's CSV/JSON file schemas (no physics here)."""
from __future__ import annotations

import csv
import json

import numpy as np

TRAJECTORY_COLUMNS = (
    "t", "p1", "pc", "p2", "phase1", "phasec", "phase2",
    "coh_1c", "coh_2c", "coh_12", "energy", "fidelity", "total_excitation",
)
HEATMAP_COLUMNS = ("delta1", "delta2", "f_max", "t_max")


class SchemaError(ValueError):
    """Input file does not match the expected column schema."""


def _read_rows(path: str) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file")
        return header, [row for row in reader if row]


def _require_columns(path: str, header: list[str], required: tuple[str, ...]):
    for name in required:
        if name not in header:
            raise SchemaError(f"{path}: missing required column {name!r}")


def read_table(path: str, required: tuple[str, ...] = ()) -> dict[str, np.ndarray]:
    """Generic CSV table; numeric columns become float arrays, others stay str."""
    if path.endswith(".json"):
        with open(path) as fh:
            payload = json.load(fh)
        header = payload["columns"]
        rows = [[str(v) for v in row] for row in payload["rows"]]
    else:
        header, rows = _read_rows(path)
    _require_columns(path, header, required)
    columns: dict[str, np.ndarray] = {}
    for k, name in enumerate(header):
        values = [row[k] for row in rows]
        try:
            columns[name] = np.array([float(v) for v in values])
        except ValueError:
            columns[name] = np.array(values)
    return columns


def read_trajectory(path: str) -> dict[str, np.ndarray]:
    return read_table(path, required=TRAJECTORY_COLUMNS)


def read_heatmap(path: str) -> dict[str, np.ndarray]:
    """Pivot the long-form heatmap file into axis vectors and 2-d grids."""
    table = read_table(path, required=HEATMAP_COLUMNS)
    d1 = np.unique(table["delta1"])
    d2 = np.unique(table["delta2"])
    f_max = np.full((d1.size, d2.size), np.nan)
    t_max = np.full_like(f_max, np.nan)
    i1 = {v: i for i, v in enumerate(d1)}
    i2 = {v: i for i, v in enumerate(d2)}
    for a, b, f, t in zip(table["delta1"], table["delta2"], table["f_max"], table["t_max"]):
        f_max[i1[a], i2[b]] = f
        t_max[i1[a], i2[b]] = t
    if np.isnan(f_max).any():
        raise SchemaError(f"{path}: heatmap rows do not fill a complete grid")
    return {"delta1": d1, "delta2": d2, "f_max": f_max, "t_max": t_max}


def unwrap_phases(raw: np.ndarray) -> np.ndarray:
    """Continuous phase series; differs from the input by exact 2 pi steps."""
    return raw + 2 * np.pi * np.round((np.unwrap(raw) - raw) / (2 * np.pi))
