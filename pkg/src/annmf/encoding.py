"""Fixed-point binary encoding of the bounded factor entries.

Each real value in [0, scale*(2**bits - 1)] is stored as ``bits`` qubits,
least significant bit first, so a whole factor row of ``rank`` values flattens
into one bit-vector of ``rank * bits`` variables. The block table built here
maps that flat vector back to the row: entry (j, e) holds the power-of-two
weight of qubit e within value j, and is zero whenever qubit e belongs to a
different value's block.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import RangeError, ShapeError

__all__ = [
    "EncodingScheme",
    "BlockTable",
    "encode_value",
    "decode_bits",
    "build_d_table",
    "decode_row",
]


@dataclass(frozen=True)
class EncodingScheme:
    """Fixed-point parameters: resolution ``scale``, ``bits`` per value,
    ``rank`` values per row."""

    rank: int = 3
    scale: float = 0.001
    bits: int = 10

    def __post_init__(self):
        if self.scale <= 0:
            raise ValueError(f"scale must be positive, got {self.scale}")
        if self.bits < 1:
            raise ValueError(f"bits must be >= 1, got {self.bits}")
        if self.rank < 1:
            raise ValueError(f"rank must be >= 1, got {self.rank}")

    @property
    def n_vars(self) -> int:
        """Total qubit count for one encoded row."""
        return self.rank * self.bits

    @property
    def levels(self) -> int:
        """Number of representable grid points per value, 2**bits."""
        return 1 << self.bits

    @property
    def max_value(self) -> float:
        """Top of the representable range, scale*(2**bits - 1)."""
        return self.scale * (self.levels - 1)

    def block(self, j: int) -> range:
        """Qubit indices holding value j of the row."""
        return range(j * self.bits, (j + 1) * self.bits)


@dataclass(frozen=True)
class BlockTable:
    """Per-(value, qubit) decode weights for one encoded row.

    ``values[j, e]`` is ``scale * 2**(e - j*bits)`` when qubit e lies in value
    j's block and zero otherwise, so each column has exactly one nonzero
    entry: the blocks partition the qubit indices.
    """

    scheme: EncodingScheme
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __getitem__(self, j: int) -> np.ndarray:
        return self.values[j]


def encode_value(x: float, scheme: EncodingScheme) -> np.ndarray:
    """Quantize ``x`` to the grid and return its bits, LSB first.

    Rounding is half-up on x/scale, so decode_bits(encode_value(x)) is always
    within scale/2 of x.
    """
    if not (0.0 <= x <= scheme.max_value):
        raise RangeError(
            f"value {x} outside representable range [0, {scheme.max_value}]"
        )
    level = math.floor(x / scheme.scale + 0.5)
    bits = np.empty(scheme.bits, dtype=np.int8)
    for i in range(scheme.bits):
        bits[i] = (level >> i) & 1
    return bits


def decode_bits(q: np.ndarray, scheme: EncodingScheme) -> float:
    """Value of one encoded number: scale times the LSB-first integer."""
    q = np.asarray(q)
    if q.shape != (scheme.bits,):
        raise ShapeError(f"expected {scheme.bits} bits, got shape {q.shape}")
    level = 0
    for i in range(scheme.bits):
        if q[i]:
            level += 1 << i
    return scheme.scale * level


def build_d_table(scheme: EncodingScheme) -> BlockTable:
    """Build the block decode table for ``scheme``."""
    table = np.zeros((scheme.rank, scheme.n_vars))
    for j in range(scheme.rank):
        for e in scheme.block(j):
            table[j, e] = scheme.scale * float(2 ** (e - j * scheme.bits))
    return BlockTable(scheme, table)


def decode_row(q: np.ndarray, d: BlockTable) -> np.ndarray:
    """Map a flat bit-vector back to its ``rank`` real values.

    Equivalent to ``d.values @ q`` but each value is reconstructed as
    scale * integer, a single rounding, so it agrees bit-for-bit with
    decode_bits on the corresponding block.
    """
    scheme = d.scheme
    q = np.asarray(q)
    if q.shape != (scheme.n_vars,):
        raise ShapeError(
            f"expected {scheme.n_vars} bits for rank {scheme.rank}, got shape {q.shape}"
        )
    out = np.empty(scheme.rank)
    for j in range(scheme.rank):
        block = q[j * scheme.bits : (j + 1) * scheme.bits]
        out[j] = decode_bits(block, scheme)
    return out
