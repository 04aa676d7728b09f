import numpy as np
import pytest

from annmf import (
    EncodingScheme,
    RowProblem,
    build_row_qubo,
    load_linear_system,
)

# The 3x5 reference system's ground truth on the default 0.001 grid, found by
# exhaustive enumeration of all 2^30 encoded states at penalty weight 1 and
# confirmed by exact decimal arithmetic on the two lowest states.
GRID_OPTIMUM_W = (0.178, 0.332, 0.490)
GRID_OPTIMUM_OBJECTIVE = 2.472160e-07
RUNNER_UP_W = (0.178, 0.333, 0.489)
RUNNER_UP_OBJECTIVE = 3.302020e-07

# Reduced-width scheme covering the same [0, 1.023] range with 4-bit entries.
REDUCED_SCALE = 1.023 / 15


@pytest.fixture(scope="session")
def reference_system():
    h, v = load_linear_system()
    return h, v


@pytest.fixture(scope="session")
def reference_qubo(reference_system):
    h, v = reference_system
    scheme = EncodingScheme(rank=3, scale=0.001, bits=10)
    problem = RowProblem(h=h, v_row=v, penalty=1.0, scheme=scheme)
    return build_row_qubo(problem), scheme


@pytest.fixture(scope="session")
def reduced_qubo(reference_system):
    h, v = reference_system
    scheme = EncodingScheme(rank=3, scale=REDUCED_SCALE, bits=4)
    problem = RowProblem(h=h, v_row=v, penalty=1.0, scheme=scheme)
    return build_row_qubo(problem), scheme


def spearman_rank_correlation(x, y) -> float:
    """Spearman's rho from scratch (rank then Pearson), no ties handling
    beyond argsort order since our grids never tie."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    rx = np.argsort(np.argsort(x)).astype(float)
    ry = np.argsort(np.argsort(y)).astype(float)
    rx -= rx.mean()
    ry -= ry.mean()
    return float((rx * ry).sum() / np.sqrt((rx * rx).sum() * (ry * ry).sum()))
