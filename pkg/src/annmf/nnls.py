"""Non-negative least squares via the Lawson-Hanson active-set method.

Solves min ‖A·x − b‖₂ subject to x ≥ 0. The passive-set subproblems are
solved with an orthogonal decomposition (numpy lstsq) rather than normal
equations, which keeps the tiny systems here well conditioned. Used for the
H-column subproblems of the factorization and, with a penalty-augmented
design matrix, for the classical W-row baseline.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError, ShapeError
from .linalg import Matrix

__all__ = [
    "NnlsResult",
    "nnls_solve",
    "solve_h_column",
    "DEFAULT_TOL",
]

# Dual-feasibility threshold below which a coordinate is not worth freeing.
DEFAULT_TOL = 1e-10


@dataclass(frozen=True)
class NnlsResult:
    """Outcome of one constrained solve.

    x is exactly non-negative (coordinates at the bound are exactly 0.0, not
    merely tiny). residual is the 2-norm of A·x − b. iterations counts
    passive-set changes; converged is False only when the iteration cap was
    hit before dual feasibility.
    """

    x: np.ndarray
    residual: float
    iterations: int
    converged: bool

    def __post_init__(self):
        x = np.asarray(self.x, dtype=np.float64)
        x.setflags(write=False)
        object.__setattr__(self, "x", x)


def _design_array(a) -> np.ndarray:
    if isinstance(a, Matrix):
        return a.array
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim != 2:
        raise ShapeError(f"design matrix must be 2-D, got shape {arr.shape}")
    return arr


def nnls_solve(a, b, tol: float = DEFAULT_TOL, max_iter: int | None = None) -> NnlsResult:
    """Lawson-Hanson active-set solve of min ‖A·x − b‖₂ s.t. x ≥ 0.

    The returned point satisfies the KKT conditions within tol: the gradient
    g = Aᵀ(A·x − b) has g_i ≥ −tol everywhere and g_i·x_i ≈ 0 on free
    coordinates. Exactly-zero columns of A can never improve the fit, so
    those coordinates stay pinned at 0. Hitting max_iter returns the current
    iterate with converged=False instead of raising.
    """
    arr = _design_array(a)
    vec = np.asarray(b, dtype=np.float64).ravel()
    if arr.shape[0] != vec.shape[0]:
        raise ShapeError(
            f"design matrix has {arr.shape[0]} rows but target has {vec.shape[0]} entries"
        )
    if not (tol > 0):
        raise InputError(f"tolerance must be positive, got {tol}")
    n = arr.shape[1]
    if max_iter is None:
        max_iter = 3 * n

    # coordinates eligible to leave the bound; zero columns never are
    eligible = np.linalg.norm(arr, axis=0) > 0.0
    passive = np.zeros(n, dtype=bool)
    x = np.zeros(n, dtype=np.float64)
    grad_neg = arr.T @ vec  # -gradient at x=0
    iterations = 0
    converged = False

    while iterations < max_iter:
        candidates = eligible & ~passive
        if not candidates.any():
            converged = True
            break
        j = int(np.flatnonzero(candidates)[np.argmax(grad_neg[candidates])])
        if grad_neg[j] <= tol:
            converged = True
            break
        passive[j] = True
        iterations += 1

        # inner loop: restore feasibility of the passive-set LS solution
        while True:
            idx = np.flatnonzero(passive)
            z = np.linalg.lstsq(arr[:, idx], vec, rcond=None)[0]
            if z.min() > 0.0:
                x = np.zeros(n, dtype=np.float64)
                x[idx] = z
                break
            blocking = z <= 0.0
            denom = x[idx][blocking] - z[blocking]
            # denom is 0 only when a coordinate sits at the bound already;
            # its step length is 0, which releases it below
            ratios = np.where(denom > 0.0, x[idx][blocking] / np.where(denom > 0.0, denom, 1.0), 0.0)
            alpha = float(ratios.min())
            x_new = np.zeros(n, dtype=np.float64)
            x_new[idx] = x[idx] + alpha * (z - x[idx])
            x = x_new
            # release every coordinate driven (numerically) to the bound
            at_bound = passive & (x <= 1e-14)
            if not at_bound.any():
                # alpha failed to zero anything; release the worst offender
                at_bound = np.zeros(n, dtype=bool)
                at_bound[idx[np.argmin(z)]] = True
            passive &= ~at_bound
            x[~passive] = 0.0
            if not passive.any():
                x = np.zeros(n, dtype=np.float64)
                break

        resid_vec = vec - arr @ x
        grad_neg = arr.T @ resid_vec

    residual = float(np.linalg.norm(arr @ x - vec))
    x[x < 0] = 0.0  # guard: the algorithm never leaves negatives behind
    return NnlsResult(x=x, residual=residual, iterations=iterations, converged=converged)


def solve_h_column(w, v_col) -> np.ndarray:
    """One column-activation subproblem: min ‖W·h − v_col‖₂ with h ≥ 0.

    Convenience wrapper with the default tolerance and iteration budget;
    shape errors propagate from the solver.
    """
    return nnls_solve(w, v_col).x
