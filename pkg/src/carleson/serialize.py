"""File formats and deterministic report writers.

Field files:  {"n": int, "depth": int, "values": [{"level": j,
"index": [k...], "v": float}, ...]} in flat tree order.
Grid files add "m" and replace "v" by "cells", the m^(1+n) cell values of
the Whitney region in row-major (t, x_1, ..., x_n) order.

JSON output is rendered by a fixed-order writer with floats at 17
significant digits, so identical inputs produce identical bytes.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .fields import DyadicField, GridFunction
from .geometry import TreeConfig, tree_tables

__all__ = [
    "dumps",
    "write_json",
    "write_csv",
    "field_to_doc",
    "field_from_doc",
    "grid_to_doc",
    "grid_from_doc",
    "save_field",
    "save_grid",
    "load_input",
]


def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    if x == int(x) and abs(x) < 1e16:
        return repr(float(x))
    return format(x, ".17g")


def dumps(obj, indent: int = 0) -> str:
    """Deterministic JSON: insertion-ordered keys, 17-significant-digit floats."""
    pad = " " * indent
    inner = " " * (indent + 2)
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{inner}{json.dumps(str(k))}: {dumps(v, indent + 2)}' for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        flat = all(isinstance(v, (int, float, np.integer, np.floating)) for v in seq)
        if flat:
            return "[" + ", ".join(dumps(v) for v in seq) + "]"
        items = [f"{inner}{dumps(v, indent + 2)}" for v in seq]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(obj)!r}")


def write_json(path: str | Path, obj) -> Path:
    path = Path(path)
    path.write_text(dumps(obj) + "\n")
    return path


def write_csv(path: str | Path, rows: list[dict], fieldnames: list[str]) -> Path:
    path = Path(path)

    def cell(v):
        if isinstance(v, (float, np.floating)):
            if math.isnan(v):
                return "nan"
            if math.isinf(v):
                return "inf" if v > 0 else "-inf"
            return format(float(v), ".17g")
        return v

    with path.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fieldnames)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: cell(row.get(k, "")) for k in fieldnames})
    return path


def field_to_doc(a: DyadicField) -> dict:
    t = tree_tables(a.tree)
    values = [
        {"level": int(t.level[i]), "index": [int(k) for k in t.index[i]], "v": float(a.values[i])}
        for i in range(a.tree.num_cubes)
    ]
    return {"n": a.tree.n, "depth": a.tree.depth, "values": values}


def field_from_doc(doc: dict) -> DyadicField:
    tree = TreeConfig(int(doc["n"]), int(doc["depth"]))
    t = tree_tables(tree)
    vals = np.zeros(tree.num_cubes)
    for entry in doc["values"]:
        j = int(entry["level"])
        k = tuple(int(v) for v in entry["index"])
        i = t.offsets[j] + np.ravel_multi_index(k, (2**j,) * tree.n)
        vals[i] = float(entry["v"])
    return DyadicField(tree, vals)


def grid_to_doc(g: GridFunction) -> dict:
    t = tree_tables(g.tree)
    values = [
        {
            "level": int(t.level[i]),
            "index": [int(k) for k in t.index[i]],
            "cells": [float(v) for v in g.values[i]],
        }
        for i in range(g.tree.num_cubes)
    ]
    return {"n": g.tree.n, "depth": g.tree.depth, "m": g.m, "values": values}


def grid_from_doc(doc: dict) -> GridFunction:
    tree = TreeConfig(int(doc["n"]), int(doc["depth"]))
    m = int(doc["m"])
    t = tree_tables(tree)
    vals = np.zeros((tree.num_cubes, m ** (1 + tree.n)))
    for entry in doc["values"]:
        j = int(entry["level"])
        k = tuple(int(v) for v in entry["index"])
        i = t.offsets[j] + np.ravel_multi_index(k, (2**j,) * tree.n)
        vals[i] = np.asarray(entry["cells"], dtype=float)
    return GridFunction(tree, m, vals)


def save_field(path: str | Path, a: DyadicField) -> Path:
    return write_json(path, field_to_doc(a))


def save_grid(path: str | Path, g: GridFunction) -> Path:
    return write_json(path, grid_to_doc(g))


def load_input(path: str | Path) -> DyadicField | GridFunction:
    """Load a field or grid file, deciding by the presence of the "m" key."""
    doc = json.loads(Path(path).read_text())
    if "m" in doc:
        return grid_from_doc(doc)
    return field_from_doc(doc)
