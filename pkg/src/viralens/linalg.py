"""Singular value decomposition with energy-threshold truncation.

Used as a diagnostic/export path over the doc-term matrix: pick the smallest
rank whose cumulative squared singular values reach a retention threshold
(default 95%) and project documents onto it.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SvdResult:
    """A = U diag(s) V^T with singular values sorted non-increasing."""

    singular_values: np.ndarray  # (r,)
    left_vectors: np.ndarray     # (M, r), orthonormal columns
    right_vectors: np.ndarray    # (V, r), orthonormal columns
    retained_rank: int
    retained_energy: float


def svd(matrix) -> SvdResult:
    """Full decomposition, r = min(M, V)."""
    a = np.asarray(matrix, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise ValueError("matrix must be 2-dimensional and non-empty")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    u, s, vt = np.linalg.svd(a, full_matrices=False)
    return SvdResult(
        singular_values=s,
        left_vectors=u,
        right_vectors=vt.T,
        retained_rank=s.shape[0],
        retained_energy=1.0,
    )


def reduce_energy(matrix, threshold: float = 0.95):
    """Project rows onto the smallest rank retaining `threshold` energy.

    Energy is the cumulative squared-singular-value fraction.  Returns
    (reduced M x r matrix = U_r diag(s_r), r, retained_energy).  An all-zero
    matrix has no energy to retain and reduces to rank 0.
    """
    if not 0.0 < threshold <= 1.0:
        raise ValueError("threshold must lie in (0, 1]")
    full = svd(matrix)
    s2 = full.singular_values**2
    total = s2.sum()
    if total == 0.0:
        return np.zeros((full.left_vectors.shape[0], 0)), 0, 1.0
    fractions = np.cumsum(s2) / total
    r = int(np.searchsorted(fractions, threshold - 1e-12) + 1)
    r = min(r, s2.shape[0])
    reduced = full.left_vectors[:, :r] * full.singular_values[:r]
    return reduced, r, float(fractions[r - 1])
