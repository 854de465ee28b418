"""Square-grid geometry and small sparse-matrix helpers shared by all modules.

Vectors on an ``n_side x n_side`` grid of interior points are stored flat in
column-major order: the flat index of the 1-based point ``(i, j)`` is
``(j - 1) * n_side + (i - 1)``, so ``i`` is the fast index.  Every operator
construction in the library goes through :func:`ij_to_k` so the ordering is
fixed in exactly one place.

All floating-point work is IEEE double precision.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp


def _is_pow2_minus_1(n: int) -> bool:
    return n >= 1 and (n + 1) & n == 0


@dataclass(frozen=True)
class GridLevel:
    """Interior points of a uniform square grid at one resolution level.

    ``n_side`` must equal ``2**m - 1`` for some ``m >= 1`` so that the next
    coarser grid, with ``(n_side - 1) // 2`` points per side, has the same
    form.  ``h`` is the algebraic mesh width ``1 / (n_side + 1)``; physical
    coordinates enter only where a concrete domain is sampled.
    """

    level: int
    n_side: int

    def __post_init__(self):
        if self.level < 0:
            raise ValueError(f"level must be nonnegative, got {self.level}")
        if not _is_pow2_minus_1(self.n_side):
            raise ValueError(
                f"n_side must be 2**m - 1 for some m >= 1, got {self.n_side}"
            )

    @property
    def h(self) -> float:
        return 1.0 / (self.n_side + 1)

    @property
    def n_total(self) -> int:
        return self.n_side * self.n_side

    def coarsen(self) -> "GridLevel":
        """The next coarser grid (points at every second fine point)."""
        if self.n_side < 3:
            raise ValueError("cannot coarsen a grid with a single interior point")
        return GridLevel(self.level + 1, (self.n_side - 1) // 2)


def ij_to_k(i: int, j: int, n_side: int) -> int:
    """Flat (0-based) index of the 1-based interior point ``(i, j)``."""
    if not (1 <= i <= n_side and 1 <= j <= n_side):
        raise IndexError(f"point ({i}, {j}) outside 1..{n_side} square")
    return (j - 1) * n_side + (i - 1)


def k_to_ij(k: int, n_side: int) -> tuple[int, int]:
    """Inverse of :func:`ij_to_k`."""
    if not (0 <= k < n_side * n_side):
        raise IndexError(f"flat index {k} outside 0..{n_side * n_side - 1}")
    j, i = divmod(k, n_side)
    return (i + 1, j + 1)


def sparse_from_triplets(rows, cols, values, shape) -> sp.csr_array:
    """Assemble a CSR matrix from (row, col, value) triplets.

    Unlike plain COO assembly, duplicate (row, col) pairs are an error here
    rather than being summed silently.
    """
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    values = np.asarray(values, dtype=np.float64)
    if not (rows.shape == cols.shape == values.shape):
        raise ValueError("rows, cols and values must have equal length")
    n_rows, n_cols = shape
    if rows.size:
        if rows.min() < 0 or rows.max() >= n_rows:
            raise IndexError("row index out of range")
        if cols.min() < 0 or cols.max() >= n_cols:
            raise IndexError("column index out of range")
        keys = rows * np.int64(n_cols) + cols
        if np.unique(keys).size != keys.size:
            raise ValueError("duplicate (row, col) coordinates are forbidden")
    return sp.csr_array(sp.coo_array((values, (rows, cols)), shape=shape))


def spmv(A, x: np.ndarray) -> np.ndarray:
    """Sparse matrix-vector product with an explicit dimension check."""
    x = np.asarray(x, dtype=np.float64)
    if A.shape[1] != x.shape[0]:
        raise ValueError(f"dimension mismatch: matrix is {A.shape}, vector has {x.shape[0]}")
    return A @ x
