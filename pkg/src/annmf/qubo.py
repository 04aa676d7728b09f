"""QUBO construction for one factor-row subproblem.

A row w of the left factor minimizes

    ||v - H^T w||^2 + penalty * (1 - sum_j w_j)^2

over the encoding grid. Substituting each w_j with its block decode sum and
using q^2 = q for binary q turns this into a quadratic form in the flat
bit-vector. Because every qubit belongs to exactly one value block, the
expansion collapses to closed-form coefficients driven by three statistics of
the data: the Gram matrix H H^T, the correlations H v, and ||v||^2. The
dropped constant (offset) is carried explicitly so annealer energies can be
reported as true objective values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .encoding import EncodingScheme, build_d_table
from .errors import BudgetError, ShapeError
from .linalg import Matrix

__all__ = [
    "QuboProblem",
    "RowProblem",
    "row_objective",
    "build_row_qubo",
    "qubo_energy",
    "energy_batch",
    "check_variable_budget",
    "export_text",
    "HARDWARE_VARIABLE_LIMIT",
]

# Largest fully-connected logical problem the reference annealer can embed.
HARDWARE_VARIABLE_LIMIT = 65


@dataclass(frozen=True)
class QuboProblem:
    """Quadratic unconstrained binary objective.

    ``linear[e]`` multiplies q_e, ``quadratic[(e, f)]`` (with e < f) multiplies
    q_e q_f, and ``offset`` is the constant restoring the original objective:
    energy(q) + offset == objective(decode(q)).
    """

    n_vars: int
    linear: np.ndarray = field(repr=False)
    quadratic: dict[tuple[int, int], float] = field(repr=False)
    offset: float = 0.0

    def __post_init__(self):
        lin = np.asarray(self.linear, dtype=np.float64)
        if lin.shape != (self.n_vars,):
            raise ShapeError(
                f"linear coefficients have shape {lin.shape}, expected ({self.n_vars},)"
            )
        if not np.all(np.isfinite(lin)):
            raise ValueError("linear coefficients must be finite")
        lin.setflags(write=False)
        object.__setattr__(self, "linear", lin)
        for (e, f), b in self.quadratic.items():
            if not (0 <= e < f < self.n_vars):
                raise ValueError(f"quadratic key ({e}, {f}) must satisfy 0 <= e < f < {self.n_vars}")
            if not np.isfinite(b):
                raise ValueError(f"quadratic coefficient ({e}, {f}) is not finite")
        if not np.isfinite(self.offset):
            raise ValueError("offset must be finite")

    @cached_property
    def coupling_matrix(self) -> np.ndarray:
        """Symmetric zero-diagonal matrix view of the quadratic terms."""
        b = np.zeros((self.n_vars, self.n_vars))
        for (e, f), val in self.quadratic.items():
            b[e, f] = val
            b[f, e] = val
        b.setflags(write=False)
        return b


@dataclass(frozen=True)
class RowProblem:
    """One row subproblem: data matrix h (rank x m), target row v_row (m),
    sum-to-one penalty weight, and the encoding scheme for w."""

    h: Matrix
    v_row: np.ndarray = field(repr=False)
    penalty: float = 1.0
    scheme: EncodingScheme = EncodingScheme()

    def __post_init__(self):
        v = np.asarray(self.v_row, dtype=np.float64).ravel()
        if self.h.rows != self.scheme.rank:
            raise ShapeError(
                f"h has {self.h.rows} rows but the scheme encodes rank {self.scheme.rank}"
            )
        if v.shape != (self.h.cols,):
            raise ShapeError(
                f"v_row has length {v.shape[0]}, expected {self.h.cols}"
            )
        if not np.all(np.isfinite(v)):
            raise ValueError("v_row entries must be finite")
        if self.penalty < 0:
            raise ValueError(f"penalty must be non-negative, got {self.penalty}")
        v.setflags(write=False)
        object.__setattr__(self, "v_row", v)


def row_objective(p: RowProblem, w: np.ndarray) -> float:
    """Direct evaluation of the row objective; the independent check for the
    QUBO construction."""
    w = np.asarray(w, dtype=np.float64)
    r = p.v_row - p.h.array.T @ w
    gap = 1.0 - float(np.sum(w))
    return float(r @ r + p.penalty * gap * gap)


def build_row_qubo(p: RowProblem) -> QuboProblem:
    """Expand the row objective into QUBO coefficients.

    With d_e the decode weight of qubit e and j(e) its value block:

        a(e)    = (G[j,j] + penalty) d_e^2 - 2 (c[j] + penalty) d_e
        b(e, f) = 2 (G[j(e), j(f)] + penalty) d_e d_f        (e < f)
        offset  = ||v||^2 + penalty

    where G = H H^T and c = H v. Same-block pairs pick up the Gram diagonal,
    cross-block pairs the off-diagonal, so the quadratic structure mirrors the
    block partition exactly.
    """
    scheme = p.scheme
    h = p.h.array
    gram = h @ h.T
    corr = h @ p.v_row
    lam = p.penalty

    table = build_d_table(scheme)
    n = scheme.n_vars
    blocks = np.arange(n) // scheme.bits
    weights = table.values[blocks, np.arange(n)]

    linear = (np.diag(gram)[blocks] + lam) * weights**2 - 2.0 * (
        corr[blocks] + lam
    ) * weights

    quadratic: dict[tuple[int, int], float] = {}
    for e in range(n):
        for f in range(e + 1, n):
            b = 2.0 * (gram[blocks[e], blocks[f]] + lam) * weights[e] * weights[f]
            if b != 0.0:
                quadratic[(e, f)] = float(b)

    offset = float(p.v_row @ p.v_row + lam)
    return QuboProblem(n_vars=n, linear=linear, quadratic=quadratic, offset=offset)


def qubo_energy(qubo: QuboProblem, q: np.ndarray) -> float:
    """Energy of one bit assignment, offset excluded."""
    q = np.asarray(q)
    if q.shape != (qubo.n_vars,):
        raise ShapeError(f"expected {qubo.n_vars} bits, got shape {q.shape}")
    qf = q.astype(np.float64)
    b = qubo.coupling_matrix
    return float(qubo.linear @ qf + 0.5 * qf @ (b @ qf))


def energy_batch(qubo: QuboProblem, q_batch: np.ndarray) -> np.ndarray:
    """Energies of many bit assignments at once (rows of ``q_batch``),
    offset excluded."""
    qf = np.asarray(q_batch, dtype=np.float64)
    if qf.ndim != 2 or qf.shape[1] != qubo.n_vars:
        raise ShapeError(
            f"expected batch of shape (m, {qubo.n_vars}), got {qf.shape}"
        )
    b = qubo.coupling_matrix
    return qf @ qubo.linear + 0.5 * np.einsum("ij,ij->i", qf @ b, qf)


def check_variable_budget(scheme: EncodingScheme, limit: int | None = HARDWARE_VARIABLE_LIMIT) -> None:
    """Raise BudgetError if the encoded row needs more logical variables than
    ``limit``. Pass ``limit=None`` to skip the gate (simulator override)."""
    if limit is None:
        return
    if scheme.n_vars > limit:
        raise BudgetError(required=scheme.n_vars, available=limit)


def export_text(qubo: QuboProblem) -> str:
    """Plain-text dump for cross-checking with external solvers.

    Format: a ``# offset`` comment, then one ``e e a(e)`` line per linear
    coefficient and one ``e f b(e,f)`` line per stored quadratic pair.
    """
    lines = [f"# offset {qubo.offset!r}"]
    for e in range(qubo.n_vars):
        lines.append(f"{e} {e} {float(qubo.linear[e])!r}")
    for (e, f) in sorted(qubo.quadratic):
        lines.append(f"{e} {f} {qubo.quadratic[(e, f)]!r}")
    return "\n".join(lines) + "\n"
