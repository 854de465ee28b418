"""Grid transfer operators: full weighting restriction, prolongation, masking.

Restriction R maps a fine-grid vector to the next coarser grid; the coarse
point (I, J) sits over the fine point (2I, 2J) and averages its 3x3 fine
neighborhood with the kernel scale * [[1, 2, 1], [2, 4, 2], [1, 2, 1]]
(scale = 1/8 by default, so interior row sums are 2).  Prolongation is
P = c * R^T with c = 2 by default.

The adaptive variants zero out fine coordinates where the nonsmooth term's
subdifferential is set-valued: columns of R when restricting subgradients (so
the restricted subgradient is single-valued) and rows of P when prolonging
corrections (so those fine points receive no coarse correction).  Plain
variables always restrict with the full R.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .grid import GridLevel
from .nonsmooth import SeparableNonsmooth


@dataclass(frozen=True)
class TransferPair:
    """Restriction, matching prolongation P = c R^T, and the scale c."""

    restrict: sp.csr_array
    prolong: sp.csr_array
    c: float

    @property
    def n_coarse(self) -> int:
        return self.restrict.shape[0]

    @property
    def n_fine(self) -> int:
        return self.restrict.shape[1]


def _weighting_1d(n_fine: int, n_coarse: int) -> sp.csr_array:
    """Rows [1, 2, 1] centered at fine index 2I, clipped at the boundary."""
    rows, cols, vals = [], [], []
    for I in range(1, n_coarse + 1):
        center = 2 * I  # 1-based fine index
        for offset, w in ((-1, 1.0), (0, 2.0), (1, 1.0)):
            col = center + offset
            if 1 <= col <= n_fine:
                rows.append(I - 1)
                cols.append(col - 1)
                vals.append(w)
    return sp.csr_array(sp.coo_array((vals, (rows, cols)), shape=(n_coarse, n_fine)))


def build_full_weighting(fine: GridLevel, kernel_scale: float = 0.125,
                         c: float = 2.0) -> TransferPair:
    """Full weighting for a square grid with n_side = 2**m - 1, m >= 2."""
    if fine.n_side < 3:
        raise ValueError("fine grid too small to coarsen")
    n_c = (fine.n_side - 1) // 2
    R1 = _weighting_1d(fine.n_side, n_c)
    R = sp.csr_array(kernel_scale * sp.kron(R1, R1, format="csr"))
    P = sp.csr_array(c * R.T)
    return TransferPair(R, P, c)


def build_line_weighting(n_fine: int, kernel_scale: float = 0.25,
                         c: float = 2.0) -> TransferPair:
    """1-D weighting for chain problems; coarse size is n_fine // 2.

    Used by the synthetic rate-verification hierarchy.  Out-of-range stencil
    legs are dropped (Dirichlet ends).
    """
    n_c = n_fine // 2
    if n_c < 1:
        raise ValueError("chain too short to coarsen")
    R = sp.csr_array(kernel_scale * _weighting_1d(n_fine, n_c))
    P = sp.csr_array(c * R.T)
    return TransferPair(R, P, c)


def adaptive_mask(g: SeparableNonsmooth, x: np.ndarray) -> np.ndarray:
    """True at fine coordinates where the subdifferential of g is set-valued."""
    return g.subdiff(x).set_valued()


def restrict_adaptive(t: TransferPair, mask: np.ndarray, v: np.ndarray) -> np.ndarray:
    """R with masked columns zeroed, applied to v."""
    if v.shape[0] != t.n_fine:
        raise ValueError(f"dimension mismatch: expected {t.n_fine}, got {v.shape[0]}")
    mask = np.asarray(mask, dtype=bool)
    return t.restrict @ np.where(mask, 0.0, v)


def prolong_adaptive(t: TransferPair, mask: np.ndarray, v_coarse: np.ndarray) -> np.ndarray:
    """P with masked rows zeroed, applied to v_coarse."""
    if v_coarse.shape[0] != t.n_coarse:
        raise ValueError(f"dimension mismatch: expected {t.n_coarse}, got {v_coarse.shape[0]}")
    mask = np.asarray(mask, dtype=bool)
    out = t.prolong @ v_coarse
    out[mask] = 0.0
    return out
