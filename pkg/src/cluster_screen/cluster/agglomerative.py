"""Bottom-up hierarchical clustering via Lance-Williams distance updates.

Linkages: single (min), complete (max), average (mean pairwise), and ward
(minimum increase in within-cluster sum of squares).  Single, complete and
average operate on Euclidean distances; ward runs the recurrence on squared
distances and reports each merge as the SSE increase it causes.

Cluster ids follow the usual dendrogram convention: points are clusters
0..n-1, and the merge at step t creates cluster id n+t.  The whole
procedure is deterministic; ties are broken toward the earliest active
pair in slot order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._distance import pairwise_sq_distances
from .configs import AgglomerativeConfig


@dataclass
class Dendrogram:
    """Merge list, one row per merge: (id_a, id_b, distance, merged size)."""

    merges: np.ndarray  # (n-1) x 4 float

    def to_json_dict(self) -> dict:
        return {"merges": self.merges.tolist()}


def agglomerative_fit_predict(
    X: np.ndarray, cfg: AgglomerativeConfig
) -> tuple[np.ndarray, Dendrogram]:
    """Build the full merge tree, then cut it at cfg.k clusters.

    Returns the flat assignment (ids canonicalized to 0..k-1 in order of
    first appearance) and the full dendrogram.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError("X must be a 2-d matrix")
    n = X.shape[0]
    if n < cfg.k:
        raise ValueError(f"need at least k={cfg.k} points, got {n}")

    D = pairwise_sq_distances(X)
    if cfg.linkage != "ward":
        D = np.sqrt(D)
    np.fill_diagonal(D, np.inf)

    ids = np.arange(n, dtype=np.int64)          # slot -> current cluster id
    sizes = np.ones(n, dtype=np.int64)
    active = np.ones(n, dtype=bool)
    members: list[list[int] | None] = [[i] for i in range(n)]

    labels_at_k: np.ndarray | None = None
    if cfg.k == n:
        labels_at_k = np.arange(n, dtype=np.int64)

    merges = np.empty((max(n - 1, 0), 4), dtype=np.float64)
    for step in range(n - 1):
        flat = int(np.argmin(D))
        i, j = divmod(flat, n)
        if i > j:
            i, j = j, i
        dist = D[i, j]
        reported = dist / 2.0 if cfg.linkage == "ward" else dist

        id_i, id_j = int(ids[i]), int(ids[j])
        merged_size = int(sizes[i] + sizes[j])
        merges[step] = (min(id_i, id_j), max(id_i, id_j), reported, merged_size)

        other = active.copy()
        other[i] = other[j] = False
        di, dj = D[i, other], D[j, other]
        if cfg.linkage == "single":
            new = np.minimum(di, dj)
        elif cfg.linkage == "complete":
            new = np.maximum(di, dj)
        elif cfg.linkage == "average":
            new = (sizes[i] * di + sizes[j] * dj) / (sizes[i] + sizes[j])
        else:  # ward, on squared distances
            sk = sizes[other].astype(np.float64)
            new = ((sizes[i] + sk) * di + (sizes[j] + sk) * dj - sk * dist) / (
                sizes[i] + sizes[j] + sk
            )

        D[i, other] = new
        D[other, i] = new
        D[j, :] = np.inf
        D[:, j] = np.inf
        ids[i] = n + step
        sizes[i] = merged_size
        active[j] = False
        members[i] = members[i] + members[j]  # type: ignore[operator]
        members[j] = None

        remaining = n - step - 1
        if remaining == cfg.k:
            labels_at_k = _labels_from_members(members, active, n)

    assert labels_at_k is not None
    return labels_at_k, Dendrogram(merges=merges)


def _labels_from_members(members, active, n: int) -> np.ndarray:
    raw = np.empty(n, dtype=np.int64)
    for slot in np.nonzero(active)[0]:
        for point in members[slot]:
            raw[point] = slot
    # canonicalize: 0..k-1 in order of first appearance
    remap: dict[int, int] = {}
    labels = np.empty(n, dtype=np.int64)
    for point in range(n):
        slot = int(raw[point])
        if slot not in remap:
            remap[slot] = len(remap)
        labels[point] = remap[slot]
    return labels
