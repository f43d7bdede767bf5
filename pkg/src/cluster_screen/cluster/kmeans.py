"""Lloyd's algorithm with k-means++ or random seeding and restarts."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .._seeding import rng_for
from ._distance import sq_distances
from .configs import KMeansConfig


@dataclass
class KMeansModel:
    """Result of the best restart: final centroids and their assignment."""

    centroids: np.ndarray        # k x d
    labels: np.ndarray           # training assignment under the final centroids
    inertia: float               # within-cluster sum of squared distances
    inertia_history: list[float]
    iterations: int
    seed: int

    def to_json_dict(self) -> dict:
        return {
            "centroids": self.centroids.tolist(),
            "inertia": float(self.inertia),
            "iterations": int(self.iterations),
            "seed": int(self.seed),
        }


def _init_kmeanspp(X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """D^2-weighted seeding: each new center sampled proportionally to the
    squared distance from the nearest center chosen so far."""
    n = X.shape[0]
    centers = np.empty((k, X.shape[1]), dtype=np.float64)
    centers[0] = X[int(rng.integers(n))]
    d2 = sq_distances(X, centers[:1])[:, 0]
    for c in range(1, k):
        total = d2.sum()
        if total > 0.0:
            idx = int(rng.choice(n, p=d2 / total))
        else:
            # remaining points coincide with chosen centers
            idx = int(rng.integers(n))
        centers[c] = X[idx]
        d2 = np.minimum(d2, sq_distances(X, centers[c : c + 1])[:, 0])
    return centers


def _init_random(X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    idx = rng.choice(X.shape[0], size=k, replace=False)
    return X[idx].astype(np.float64, copy=True)


def _fill_empty_clusters(labels: np.ndarray, d_own: np.ndarray, k: int) -> None:
    """Reseed each empty cluster with the point currently farthest from its
    centroid.  Reassigned points are pinned so a cluster never re-empties."""
    d_own = d_own.copy()
    while True:
        counts = np.bincount(labels, minlength=k)
        empty = np.nonzero(counts == 0)[0]
        if empty.size == 0:
            return
        far = int(np.argmax(d_own))
        labels[far] = empty[0]
        d_own[far] = -np.inf


def _lloyd(X: np.ndarray, centers: np.ndarray, max_iter: int, tol: float):
    k = centers.shape[0]
    history: list[float] = []
    iterations = 0
    for _ in range(max_iter):
        d2 = sq_distances(X, centers)
        labels = np.argmin(d2, axis=1)
        d_own = d2[np.arange(X.shape[0]), labels]
        _fill_empty_clusters(labels, d_own, k)

        sums = np.zeros_like(centers)
        np.add.at(sums, labels, X)
        counts = np.bincount(labels, minlength=k).astype(np.float64)
        new_centers = sums / counts[:, None]

        inertia = float(((X - new_centers[labels]) ** 2).sum())
        history.append(inertia)
        shift = float(np.linalg.norm(new_centers - centers))
        centers = new_centers
        iterations += 1
        if shift < tol:
            break

    # final hard assignment so labels/inertia match the returned centroids
    d2 = sq_distances(X, centers)
    labels = np.argmin(d2, axis=1)
    inertia = float(d2[np.arange(X.shape[0]), labels].sum())
    history.append(inertia)
    return centers, labels, inertia, history, iterations


def kmeans_fit(X: np.ndarray, cfg: KMeansConfig, seed: int) -> KMeansModel:
    """Run Lloyd's algorithm cfg.n_init times, keep the lowest-inertia run.

    Convergence: centroid shift (Frobenius norm) below cfg.tol, or
    cfg.max_iter iterations.  Fully deterministic for a fixed seed.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError("X must be a 2-d matrix")
    if not np.isfinite(X).all():
        raise ValueError("X contains non-finite values")
    if X.shape[0] < cfg.k:
        raise ValueError(f"need at least k={cfg.k} points, got {X.shape[0]}")

    best = None
    for restart in range(cfg.n_init):
        rng = rng_for(seed, restart)
        if cfg.init == "kmeanspp":
            centers = _init_kmeanspp(X, cfg.k, rng)
        else:
            centers = _init_random(X, cfg.k, rng)
        run = _lloyd(X, centers, cfg.max_iter, cfg.tol)
        if best is None or run[2] < best[2]:
            best = run

    centers, labels, inertia, history, iterations = best
    return KMeansModel(
        centroids=centers,
        labels=labels,
        inertia=inertia,
        inertia_history=history,
        iterations=iterations,
        seed=int(seed),
    )


def kmeans_predict(model: KMeansModel, X: np.ndarray) -> np.ndarray:
    """Nearest-centroid assignment; ties go to the lowest centroid index."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != model.centroids.shape[1]:
        raise ValueError(
            f"X has {X.shape[1] if X.ndim == 2 else '?'} columns, "
            f"model expects {model.centroids.shape[1]}"
        )
    return np.argmin(sq_distances(X, model.centroids), axis=1)
