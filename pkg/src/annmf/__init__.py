"""Annealing-based non-negative matrix factorization toolkit.

Real-valued factor entries are written in fixed-point binary, each matrix row
becomes a QUBO problem, and a simulated annealer with seeded (reverse) reads
refines the solutions inside an alternating least squares loop.
"""

from .als import (
    FactorizationConfig,
    FactorizationHistory,
    IterationRecord,
    RowDiagnostics,
    factorize,
    init_h,
    solve_w_row,
)
from .annealer import (
    AnnealConfig,
    AnnealOutcome,
    AttemptRecord,
    ReverseConfig,
    Sample,
    adaptive_refine,
    brute_force_minimum,
    derive_seed,
    forward_anneal,
    mean_hamming,
    reverse_anneal,
    reverse_refine,
)
from .datasets import (
    data_path,
    load_factorization_factors,
    load_factorization_target,
    load_linear_system,
)
from .encoding import (
    BlockTable,
    EncodingScheme,
    build_d_table,
    decode_bits,
    decode_row,
    encode_value,
)
from .errors import (
    AnnmfError,
    BudgetError,
    InputError,
    RangeError,
    ShapeError,
    SizeError,
)
from .linalg import (
    Matrix,
    frobenius_norm,
    load_csv,
    matmul,
    residual_norm,
    save_csv,
)
from .nnls import NnlsResult, nnls_solve, solve_h_column
from .qubo import (
    HARDWARE_VARIABLE_LIMIT,
    QuboProblem,
    RowProblem,
    build_row_qubo,
    check_variable_budget,
    energy_batch,
    export_text,
    qubo_energy,
    row_objective,
)
from .timing import TimingParams, duration_breakdown, t_factorization, t_rev

__version__ = "0.1.0"

__all__ = [
    "AnnealConfig",
    "AnnealOutcome",
    "AnnmfError",
    "AttemptRecord",
    "BlockTable",
    "BudgetError",
    "EncodingScheme",
    "FactorizationConfig",
    "FactorizationHistory",
    "HARDWARE_VARIABLE_LIMIT",
    "InputError",
    "IterationRecord",
    "Matrix",
    "NnlsResult",
    "QuboProblem",
    "RangeError",
    "ReverseConfig",
    "RowDiagnostics",
    "RowProblem",
    "Sample",
    "ShapeError",
    "SizeError",
    "TimingParams",
    "adaptive_refine",
    "brute_force_minimum",
    "build_d_table",
    "build_row_qubo",
    "check_variable_budget",
    "data_path",
    "decode_bits",
    "decode_row",
    "derive_seed",
    "duration_breakdown",
    "encode_value",
    "energy_batch",
    "export_text",
    "factorize",
    "forward_anneal",
    "frobenius_norm",
    "init_h",
    "load_csv",
    "load_factorization_factors",
    "load_factorization_target",
    "load_linear_system",
    "matmul",
    "mean_hamming",
    "nnls_solve",
    "qubo_energy",
    "residual_norm",
    "reverse_anneal",
    "reverse_refine",
    "row_objective",
    "save_csv",
    "solve_h_column",
    "solve_w_row",
    "t_factorization",
    "t_rev",
]
