"""Load helpers for the example data shipped in the package's data directory.

See data/README.md for what each file contains and how the ground-truth
values were derived.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

import numpy as np

from .linalg import Matrix, load_csv

__all__ = [
    "data_path",
    "load_linear_system",
    "load_factorization_target",
    "load_factorization_factors",
]


def data_path(name: str) -> Path:
    """Filesystem path of one bundled data file."""
    path = Path(str(resources.files("annmf").joinpath("data", name)))
    if not path.exists():
        raise FileNotFoundError(f"no bundled data file named {name!r}")
    return path


def load_linear_system() -> tuple[Matrix, np.ndarray]:
    """The reference 3x5 linear system: (H, v)."""
    h = load_csv(data_path("linear_system_h.csv"))
    v = load_csv(data_path("linear_system_v.csv"))
    return h, v.array.ravel()


def load_factorization_target() -> Matrix:
    """The 2x2 exactly factorable target matrix V."""
    return load_csv(data_path("factorization_v.csv"))


def load_factorization_factors() -> tuple[Matrix, Matrix]:
    """The generating factors (W, H) with V = W @ H exactly."""
    w = load_csv(data_path("factorization_w.csv"))
    h = load_csv(data_path("factorization_h.csv"))
    return w, h
