"""JSON matrix files.

Layout::

    {"rows": n, "cols": n,
     "shape": [{"kind": "plain" | "antisym", "dim": k}, ...],
     "entries": [[re, im], ...]}

Entries are row-major and written with 17 significant digits so a
write/read cycle is bit-exact.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import IO, Union

import numpy as np

from .errors import ShapeMismatch
from .numerics import DensityMatrix, SpaceShape, as_array

PathOrFile = Union[str, Path, IO[str]]


def _num(x: float) -> str:
    if not np.isfinite(x):
        raise ValueError("matrix entries must be finite")
    return format(float(x), ".17g")


def dumps_matrix(matrix, shape: SpaceShape | None = None) -> str:
    """Serialize a matrix (and optional shape) to the JSON file format."""
    if isinstance(matrix, DensityMatrix) and shape is None:
        shape = matrix.shape
    a = as_array(matrix)
    if a.ndim != 2:
        raise ShapeMismatch("only 2-d matrices can be written")
    rows, cols = a.shape
    if shape is None:
        if rows != cols:
            raise ShapeMismatch("a non-square matrix needs an explicit shape")
        shape = SpaceShape.plain(rows)
    entries = ",".join(f"[{_num(z.real)},{_num(z.imag)}]" for z in a.ravel())
    head = json.dumps({"rows": rows, "cols": cols, "shape": shape.to_json()})
    return head[:-1] + ', "entries": [' + entries + "]}"


def loads_matrix(text: str) -> tuple[np.ndarray, SpaceShape]:
    obj = json.loads(text)
    rows, cols = int(obj["rows"]), int(obj["cols"])
    entries = np.asarray(obj["entries"], dtype=float).reshape(-1, 2)
    if entries.shape[0] != rows * cols:
        raise ShapeMismatch(f"expected {rows * cols} entries, found {entries.shape[0]}")
    a = (entries[:, 0] + 1j * entries[:, 1]).reshape(rows, cols)
    shape = SpaceShape.from_json(obj["shape"])
    if rows == cols and shape.dim != rows:
        raise ShapeMismatch(f"shape dimension {shape.dim} does not match {rows} rows")
    return a, shape


def write_matrix(dest: PathOrFile, matrix, shape: SpaceShape | None = None) -> None:
    text = dumps_matrix(matrix, shape)
    if hasattr(dest, "write"):
        dest.write(text)
    else:
        Path(dest).write_text(text)


def read_matrix(src: PathOrFile) -> tuple[np.ndarray, SpaceShape]:
    text = src.read() if hasattr(src, "read") else Path(src).read_text()
    return loads_matrix(text)


def read_density_matrix(src: PathOrFile) -> DensityMatrix:
    a, shape = read_matrix(src)
    return DensityMatrix(a, shape)
