"""Small dense real-matrix arithmetic used by every other module.

Matrices here are tiny (the factorization problems top out at a handful of
rows and columns), so everything is plain float64 numpy with validation on
construction. No attempt is made at BLAS-scale performance.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import InputError, ShapeError

__all__ = [
    "Matrix",
    "matmul",
    "frobenius_norm",
    "residual_norm",
    "load_csv",
    "save_csv",
]


@dataclass(frozen=True, eq=False)
class Matrix:
    """Immutable dense real matrix in row-major order.

    All entries must be finite; NaN or Inf is rejected at construction so it
    can never propagate into QUBO coefficients or residual norms.
    """

    array: np.ndarray = field(repr=False)

    def __post_init__(self):
        a = np.asarray(self.array, dtype=np.float64)
        if a.ndim != 2:
            raise ShapeError(f"matrix must be 2-D, got shape {a.shape}")
        if a.shape[0] < 1 or a.shape[1] < 1:
            raise ShapeError(f"matrix dimensions must be positive, got {a.shape}")
        if not np.all(np.isfinite(a)):
            raise InputError("matrix entries must be finite (no NaN/Inf)")
        a = a.copy()
        a.setflags(write=False)
        object.__setattr__(self, "array", a)

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[float]]) -> "Matrix":
        rows = [list(r) for r in rows]
        if not rows:
            raise ShapeError("matrix must contain at least one row")
        width = len(rows[0])
        for i, r in enumerate(rows):
            if len(r) != width:
                raise ShapeError(
                    f"row {i} has {len(r)} values, expected {width}"
                )
        return cls(np.array(rows, dtype=np.float64))

    @classmethod
    def from_flat(cls, rows: int, cols: int, data: Sequence[float]) -> "Matrix":
        data = list(data)
        if rows < 1 or cols < 1:
            raise ShapeError(f"matrix dimensions must be positive, got {rows}x{cols}")
        if len(data) != rows * cols:
            raise ShapeError(
                f"flat data has {len(data)} values, expected {rows * cols} "
                f"for a {rows}x{cols} matrix"
            )
        return cls(np.array(data, dtype=np.float64).reshape(rows, cols))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls(np.zeros((rows, cols)))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(np.eye(n))

    @property
    def rows(self) -> int:
        return self.array.shape[0]

    @property
    def cols(self) -> int:
        return self.array.shape[1]

    @property
    def data(self) -> tuple[float, ...]:
        """Entries flattened in row-major order."""
        return tuple(self.array.ravel())

    def row(self, i: int) -> list[float]:
        return list(self.array[i, :])

    def col(self, j: int) -> list[float]:
        # returns a copy; matrices stay immutable
        return list(self.array[:, j])

    def __repr__(self) -> str:
        return f"Matrix({self.rows}x{self.cols})"


def matmul(a: Matrix, b: Matrix) -> Matrix:
    """Standard matrix product; raises ShapeError on inner-dimension mismatch."""
    if a.cols != b.rows:
        raise ShapeError(
            f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}: "
            f"inner dimensions {a.cols} != {b.rows}"
        )
    return Matrix(a.array @ b.array)


def frobenius_norm(m: Matrix) -> float:
    """Square root of the sum of squared entries."""
    return float(np.linalg.norm(m.array))


def residual_norm(v: Matrix, w: Matrix, h: Matrix) -> float:
    """Frobenius norm of ``v - w @ h``, the factorization residual."""
    if w.cols != h.rows:
        raise ShapeError(
            f"factor shapes not conformable: {w.rows}x{w.cols} times {h.rows}x{h.cols}"
        )
    if v.rows != w.rows or v.cols != h.cols:
        raise ShapeError(
            f"product shape {w.rows}x{h.cols} does not match target {v.rows}x{v.cols}"
        )
    return float(np.linalg.norm(v.array - w.array @ h.array))


def load_csv(path: str | os.PathLike) -> Matrix:
    """Read a matrix from CSV: one row per line, comma-separated, no header.

    Ragged rows, non-numeric fields and non-finite values are rejected with
    the offending line number in the message.
    """
    rows: list[list[float]] = []
    width = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                if rows:
                    continue  # tolerate trailing blank lines
                raise InputError(f"{path}: line {lineno}: empty line before any data")
            fields = line.split(",")
            try:
                values = [float(f) for f in fields]
            except ValueError:
                raise InputError(
                    f"{path}: line {lineno}: non-numeric value in {fields!r}"
                ) from None
            if not all(np.isfinite(values)):
                raise InputError(f"{path}: line {lineno}: non-finite value")
            if width is None:
                width = len(values)
            elif len(values) != width:
                raise InputError(
                    f"{path}: line {lineno}: expected {width} values, found {len(values)}"
                )
            rows.append(values)
    if not rows:
        raise InputError(f"{path}: file contains no data")
    return Matrix.from_rows(rows)


def save_csv(m: Matrix, path: str | os.PathLike) -> None:
    """Write a matrix as CSV with round-trip-exact float formatting."""
    with open(path, "w", encoding="utf-8") as fh:
        for i in range(m.rows):
            fh.write(",".join(repr(float(x)) for x in m.array[i, :]))
            fh.write("\n")
