"""Density-based clustering with noise (brute-force neighborhoods).

A point is core when at least ``min_samples`` points, itself included,
lie within ``eps``.  Clusters grow from core points in ascending point
index order; border points join the first cluster that reaches them and
unreachable points are labeled -1.
"""

from __future__ import annotations

import numpy as np

from ._distance import pairwise_sq_distances
from .configs import DbscanConfig

NOISE = -1
_UNVISITED = -2


def dbscan_fit_predict(X: np.ndarray, cfg: DbscanConfig) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError("X must be a 2-d matrix")
    if not np.isfinite(X).all():
        raise ValueError("X contains non-finite values")
    n = X.shape[0]

    within = pairwise_sq_distances(X) <= cfg.eps * cfg.eps
    neighbor_lists = [np.nonzero(within[i])[0] for i in range(n)]
    core = within.sum(axis=1) >= cfg.min_samples

    labels = np.full(n, _UNVISITED, dtype=np.int64)
    cluster = 0
    for p in range(n):
        if labels[p] != _UNVISITED:
            continue
        if not core[p]:
            labels[p] = NOISE  # provisional; a later cluster may claim it
            continue
        labels[p] = cluster
        queue = list(neighbor_lists[p])
        qi = 0
        while qi < len(queue):
            q = int(queue[qi])
            qi += 1
            if labels[q] == NOISE:
                labels[q] = cluster
            elif labels[q] == _UNVISITED:
                labels[q] = cluster
                if core[q]:
                    queue.extend(neighbor_lists[q])
        cluster += 1
    return labels
