"""Euclidean distance kernels shared by the clustering algorithms.

Broadcasting with a fixed reduction order keeps results bit-identical
across runs (no BLAS dispatch in the hot paths).
"""

from __future__ import annotations

import numpy as np

_CHUNK = 256


def sq_distances(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Squared Euclidean distances, |A| x |B|."""
    A = np.asarray(A, dtype=np.float64)
    B = np.asarray(B, dtype=np.float64)
    out = np.empty((A.shape[0], B.shape[0]), dtype=np.float64)
    for start in range(0, A.shape[0], _CHUNK):
        stop = min(start + _CHUNK, A.shape[0])
        diff = A[start:stop, None, :] - B[None, :, :]
        out[start:stop] = np.einsum("ijk,ijk->ij", diff, diff)
    return out


def pairwise_sq_distances(X: np.ndarray) -> np.ndarray:
    return sq_distances(X, X)


def pairwise_distances(X: np.ndarray) -> np.ndarray:
    return np.sqrt(pairwise_sq_distances(X))
