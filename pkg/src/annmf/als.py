"""Alternating least squares drivers for the non-negative factorization.

Two modes share one sweep structure (all W rows by ascending index, then all
H columns by ascending index, one residual record per full sweep):

- classical: every W row solved by penalty-augmented NNLS, every H column by
  plain NNLS.
- mixed: W rows are encoded to fixed-point bits, compiled to a QUBO, and
  minimized by a forward anneal followed by the adaptive refinement loop;
  H columns stay classical (the activation matrix needs no special form and
  is never quantized).

The mixed path's per-iteration residual can fluctuate, so factorize returns
the best (W, H) pair seen along with the full history.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .annealer import (
    AnnealConfig,
    ReverseConfig,
    adaptive_refine,
    derive_seed,
    forward_anneal,
)
from .encoding import EncodingScheme, build_d_table, decode_row
from .errors import InputError, ShapeError
from .linalg import Matrix, residual_norm
from .nnls import nnls_solve, solve_h_column
from .qubo import (
    HARDWARE_VARIABLE_LIMIT,
    RowProblem,
    build_row_qubo,
    check_variable_budget,
    row_objective,
)

__all__ = [
    "FACTORIZATION_MODES",
    "FactorizationConfig",
    "RowDiagnostics",
    "IterationRecord",
    "FactorizationHistory",
    "init_h",
    "solve_w_row",
    "factorize",
]

FACTORIZATION_MODES = ("classical", "mixed")


@dataclass(frozen=True)
class FactorizationConfig:
    """Knobs for one factorization run.

    penalty is the sum-to-one weight applied to every W row (the same
    constant the QUBO builder uses). scheme defaults to the standard
    fixed-point layout at the configured rank. budget_limit of None skips
    the logical-variable budget check in mixed mode.
    """

    rank: int = 3
    max_iterations: int = 50
    mode: str = "classical"
    penalty: float = 1.0
    scheme: EncodingScheme | None = None
    anneal: AnnealConfig = field(default_factory=AnnealConfig)
    reverse: ReverseConfig = field(default_factory=ReverseConfig)
    seed: int = 0
    stop_tol: float = 0.0
    budget_limit: int | None = HARDWARE_VARIABLE_LIMIT

    def __post_init__(self):
        if self.rank < 1:
            raise InputError(f"rank must be at least 1, got {self.rank}")
        if self.max_iterations < 1:
            raise InputError(
                f"max_iterations must be at least 1, got {self.max_iterations}"
            )
        if self.mode not in FACTORIZATION_MODES:
            raise InputError(
                f"mode must be one of {FACTORIZATION_MODES}, got {self.mode!r}"
            )
        if self.penalty < 0:
            raise InputError(f"penalty must be non-negative, got {self.penalty}")
        if self.stop_tol < 0:
            raise InputError(f"stop_tol must be non-negative, got {self.stop_tol}")
        if self.scheme is None:
            object.__setattr__(self, "scheme", EncodingScheme(rank=self.rank))
        elif self.scheme.rank != self.rank:
            raise ShapeError(
                f"encoding scheme is sized for rank {self.scheme.rank}, "
                f"config says rank {self.rank}"
            )


@dataclass(frozen=True)
class RowDiagnostics:
    """Per-row solve bookkeeping surfaced in the iteration history."""

    attempts_used: int
    modeled_qpu_us: float
    objective: float
    converged: bool


@dataclass(frozen=True)
class IterationRecord:
    """One full (W, H) sweep: 1-based index, residual after the sweep,
    refinement attempts per W row, and modeled annealer time spent."""

    iteration: int
    residual: float
    row_attempts: tuple[int, ...]
    qpu_us: float


@dataclass(frozen=True)
class FactorizationHistory:
    """Complete run record: per-iteration data, the final factors, and the
    best factors seen (mixed-mode residuals are not monotone, so last is
    not necessarily best)."""

    records: tuple[IterationRecord, ...]
    w: Matrix
    h: Matrix
    best_w: Matrix
    best_h: Matrix
    best_residual: float
    best_iteration: int

    @property
    def qpu_us_total(self) -> float:
        return float(sum(r.qpu_us for r in self.records))

    def qpu_us_cumulative(self) -> list[float]:
        total = 0.0
        out = []
        for r in self.records:
            total += r.qpu_us
            out.append(total)
        return out


def init_h(k: int, m: int, seed) -> Matrix:
    """Seeded uniform [0, 1) starting activation matrix, k rows by m columns."""
    if k < 1 or m < 1:
        raise InputError(f"init_h needs positive dimensions, got {k}x{m}")
    rng = np.random.default_rng(seed)
    return Matrix(rng.random((k, m)))


def _classical_w_row(h: Matrix, v: np.ndarray, cfg: FactorizationConfig):
    design = np.vstack([h.array.T, np.sqrt(cfg.penalty) * np.ones(h.rows)])
    target = np.concatenate([v, [np.sqrt(cfg.penalty)]])
    result = nnls_solve(design, target)
    w = np.clip(result.x, 0.0, cfg.scheme.max_value)
    problem = RowProblem(h=h, v_row=v, penalty=cfg.penalty, scheme=cfg.scheme)
    diag = RowDiagnostics(
        attempts_used=0,
        modeled_qpu_us=0.0,
        objective=row_objective(problem, w),
        converged=result.converged,
    )
    return w, diag


def _mixed_w_row(h: Matrix, v: np.ndarray, cfg: FactorizationConfig, row_seed: int):
    if cfg.budget_limit is not None:
        check_variable_budget(cfg.scheme, cfg.budget_limit)
    problem = RowProblem(h=h, v_row=v, penalty=cfg.penalty, scheme=cfg.scheme)
    qubo = build_row_qubo(problem)
    fwd_cfg = replace(cfg.anneal, seed=derive_seed(row_seed, 0))
    fwd = forward_anneal(qubo, fwd_cfg)
    rev_cfg = replace(
        cfg.reverse, base=replace(cfg.reverse.base, seed=derive_seed(row_seed, 1))
    )
    refined = adaptive_refine(qubo, fwd.best_q, rev_cfg)
    w = decode_row(refined.best_q, build_d_table(cfg.scheme))
    diag = RowDiagnostics(
        attempts_used=refined.attempts_used,
        modeled_qpu_us=fwd.modeled_qpu_us + refined.modeled_qpu_us,
        objective=float(refined.best_energy),
        converged=True,
    )
    return w, diag


def solve_w_row(h: Matrix, v_row, cfg: FactorizationConfig, row_seed: int | None = None):
    """Solve one basis-row subproblem under the configured mode.

    Returns (w, RowDiagnostics) where w has length cfg.rank. The mixed path
    decodes the best annealer state, so w lies exactly on the encoding grid;
    the classical path returns the continuous penalty-augmented NNLS point
    clipped to the representable range.
    """
    v = np.asarray(v_row, dtype=np.float64).ravel()
    if h.cols != v.shape[0]:
        raise ShapeError(
            f"basis matrix has {h.cols} columns but the data row has {v.shape[0]}"
        )
    if row_seed is None:
        row_seed = cfg.seed
    if cfg.mode == "classical":
        return _classical_w_row(h, v, cfg)
    return _mixed_w_row(h, v, cfg, int(row_seed))


def factorize(v: Matrix, cfg: FactorizationConfig) -> FactorizationHistory:
    """Run the alternating sweeps and return history plus best factors.

    Given H, each W row is solved independently (penalty-augmented NNLS or
    encoded annealing per cfg.mode); given W, each H column is a plain NNLS
    solve. The residual is recorded once per full sweep. Iteration stops at
    max_iterations or as soon as the residual drops to stop_tol.
    """
    if np.any(v.array < 0):
        raise InputError("factorization input must be non-negative")
    if cfg.mode == "mixed" and cfg.budget_limit is not None:
        check_variable_budget(cfg.scheme, cfg.budget_limit)

    h = init_h(cfg.rank, v.cols, cfg.seed)
    records: list[IterationRecord] = []
    best_residual = np.inf
    best_w = best_h = None
    best_iteration = 0
    w = Matrix.zeros(v.rows, cfg.rank)

    for it in range(1, cfg.max_iterations + 1):
        sweep_seed = derive_seed(cfg.seed, it)
        rows = []
        diags = []
        for i in range(v.rows):
            w_i, diag = solve_w_row(h, v.array[i, :], cfg, derive_seed(sweep_seed, i))
            rows.append(w_i)
            diags.append(diag)
        w = Matrix(np.vstack(rows))
        cols = [solve_h_column(w, v.array[:, j]) for j in range(v.cols)]
        h = Matrix(np.column_stack(cols))
        resid = residual_norm(v, w, h)
        records.append(
            IterationRecord(
                iteration=it,
                residual=resid,
                row_attempts=tuple(d.attempts_used for d in diags),
                qpu_us=float(sum(d.modeled_qpu_us for d in diags)),
            )
        )
        if resid < best_residual:
            best_residual = resid
            best_w, best_h = w, h
            best_iteration = it
        if resid <= cfg.stop_tol:
            break

    return FactorizationHistory(
        records=tuple(records),
        w=w,
        h=h,
        best_w=best_w,
        best_h=best_h,
        best_residual=float(best_residual),
        best_iteration=best_iteration,
    )
