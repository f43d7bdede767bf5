"""Cross-validation harness: seeded folds, grid search, final refits.

Protocol per algorithm and grid cell: fit on the training fold and
assign the test fold (K-Means, GMM), or run fit_predict directly on the
test fold (Agglomerative, DBSCAN, which have no out-of-sample assignment
rule).  Cluster-to-label mapping and all scores are computed within the
test fold; fold scores are averaged per cell; the winning cell is
refitted on the full dataset.

Sub-seeds are derived from (master seed, config key, fold), so adding or
reordering grid cells never changes another cell's numbers.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._seeding import derived_seed
from .cluster import (
    AgglomerativeConfig,
    AlgoConfig,
    DbscanConfig,
    GmmConfig,
    KMeansConfig,
    agglomerative_fit_predict,
    config_key,
    config_to_dict,
    dbscan_fit_predict,
    gmm_fit,
    gmm_predict,
    kmeans_fit,
    kmeans_predict,
)
from .cluster.dbscan import NOISE
from .ingest import apply_scaler, fit_scaler
from .metrics import MetricBundle, score_assignment, silhouette

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FoldPlan:
    """Disjoint test folds covering 0..n-1, from a seeded shuffle."""

    folds: tuple[np.ndarray, ...]
    seed: int
    n: int


def kfold_split(n: int, k: int, seed: int) -> FoldPlan:
    """Shuffle indices with the seeded generator, cut into k nearly-equal
    contiguous chunks (the first n % k folds get the extra point)."""
    if k < 2:
        raise ValueError("need at least 2 folds")
    if n < k:
        raise ValueError(f"cannot split {n} points into {k} folds")
    # Mersenne-Twister permutation: the conventional shuffled k-fold split
    order = np.random.RandomState(seed & 0xFFFFFFFF).permutation(n)
    sizes = np.full(k, n // k, dtype=np.int64)
    sizes[: n % k] += 1
    folds = []
    start = 0
    for size in sizes:
        folds.append(order[start : start + size].copy())
        start += size
    return FoldPlan(folds=tuple(folds), seed=int(seed), n=n)


def default_grid(algorithm: str) -> list[AlgoConfig]:
    """The benchmark's hyperparameter grid for one algorithm."""
    if algorithm == "kmeans":
        return [KMeansConfig(k=2, init=init, n_init=10) for init in ("kmeanspp", "random")]
    if algorithm == "gmm":
        return [GmmConfig(k=2, covariance=cov) for cov in ("full", "tied", "diag", "spherical")]
    if algorithm == "agglomerative":
        return [
            AgglomerativeConfig(k=2, linkage=linkage)
            for linkage in ("ward", "complete", "average", "single")
        ]
    if algorithm == "dbscan":
        return [
            DbscanConfig(eps=eps, min_samples=ms)
            for eps in (0.5, 0.7, 1.0, 1.2)
            for ms in (3, 5)
        ]
    raise ValueError(f"unknown algorithm {algorithm!r}")


def _fit_assign(X_fit: np.ndarray, X_assign: np.ndarray, cfg: AlgoConfig, fit_seed: int):
    """Fit per the protocol and return (assignment of X_assign, model json)."""
    if cfg.algorithm == "kmeans":
        model = kmeans_fit(X_fit, cfg, seed=fit_seed)
        return kmeans_predict(model, X_assign), model.to_json_dict()
    if cfg.algorithm == "gmm":
        model = gmm_fit(X_fit, cfg, seed=fit_seed)
        return gmm_predict(model, X_assign), model.to_json_dict()
    if cfg.algorithm == "agglomerative":
        assign, dendrogram = agglomerative_fit_predict(X_assign, cfg)
        return assign, {"linkage": cfg.linkage, "merges": dendrogram.merges.tolist()}
    assign = dbscan_fit_predict(X_assign, cfg)
    return assign, {
        "eps": cfg.eps,
        "min_samples": cfg.min_samples,
        "n_clusters": int(np.unique(assign[assign != NOISE]).size),
        "n_noise": int(np.sum(assign == NOISE)),
    }


@dataclass
class CvResult:
    """One grid cell: per-fold bundles and their averages."""

    config: AlgoConfig
    fold_bundles: list[MetricBundle]
    mean_accuracy: float
    mean_ari: float
    mean_silhouette: float | None  # None when undefined on every fold

    def to_json_dict(self) -> dict:
        return {
            "config": config_to_dict(self.config),
            "mean_accuracy": float(self.mean_accuracy),
            "mean_ari": float(self.mean_ari),
            "mean_silhouette": (
                None if self.mean_silhouette is None else float(self.mean_silhouette)
            ),
            "folds": [b.to_json_dict() for b in self.fold_bundles],
        }


def cv_evaluate(
    X: np.ndarray,
    y: np.ndarray,
    cfg: AlgoConfig,
    plan: FoldPlan,
    seed: int,
    *,
    scale_per_fold: bool = False,
    X_unscaled: np.ndarray | None = None,
) -> CvResult:
    """Score one config across all folds of the plan.

    ``scale_per_fold`` switches to the hygienic variant: the scaler is
    refit on each training fold instead of once on the full dataset (in
    which case X_unscaled must hold the encoded, unstandardized matrix).
    """
    if scale_per_fold and X_unscaled is None:
        raise ValueError("scale_per_fold requires X_unscaled")
    key = config_key(cfg)
    bundles: list[MetricBundle] = []
    for fi, test_idx in enumerate(plan.folds):
        mask = np.ones(plan.n, dtype=bool)
        mask[test_idx] = False
        train_idx = np.nonzero(mask)[0]

        if scale_per_fold:
            scaler = fit_scaler(X_unscaled[train_idx])
            X_train = apply_scaler(X_unscaled[train_idx], scaler)
            X_test = apply_scaler(X_unscaled[test_idx], scaler)
        else:
            X_train = X[train_idx]
            X_test = X[test_idx]

        assign, _ = _fit_assign(X_train, X_test, cfg, derived_seed(seed, key, "fold", fi))
        bundle = score_assignment(X_test, assign, y[test_idx])
        if bundle.silhouette is None:
            logger.info(
                "silhouette undefined on fold %d for %s; excluded from the average",
                fi,
                key,
            )
        bundles.append(bundle)

    sil_values = [b.silhouette for b in bundles if b.silhouette is not None]
    return CvResult(
        config=cfg,
        fold_bundles=bundles,
        mean_accuracy=float(np.mean([b.accuracy for b in bundles])),
        mean_ari=float(np.mean([b.ari for b in bundles])),
        mean_silhouette=float(np.mean(sil_values)) if sil_values else None,
    )


@dataclass
class GridResult:
    """All cells of one algorithm's grid, sorted by mean accuracy."""

    algorithm: str
    cells: list[CvResult]  # sorted: accuracy desc, then ARI desc, then grid order

    @property
    def best(self) -> CvResult:
        return self.cells[0]

    def to_json_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "best": self.best.to_json_dict(),
            "cells": [c.to_json_dict() for c in self.cells],
        }


def grid_search(
    X: np.ndarray,
    y: np.ndarray,
    algorithm: str,
    plan: FoldPlan,
    seed: int,
    *,
    grid: list[AlgoConfig] | None = None,
    scale_per_fold: bool = False,
    X_unscaled: np.ndarray | None = None,
    n_workers: int = 1,
) -> GridResult:
    """cv_evaluate every cell of the grid (default grid if none given)."""
    cells = grid if grid is not None else default_grid(algorithm)
    if not cells:
        raise ValueError("empty grid")
    for cfg in cells:
        if cfg.algorithm != algorithm:
            raise ValueError(f"config {config_key(cfg)} does not belong to {algorithm!r}")

    def run(cfg: AlgoConfig) -> CvResult:
        return cv_evaluate(
            X, y, cfg, plan, seed, scale_per_fold=scale_per_fold, X_unscaled=X_unscaled
        )

    if n_workers > 1:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            results = list(pool.map(run, cells))
    else:
        results = [run(cfg) for cfg in cells]

    order = sorted(
        range(len(results)),
        key=lambda i: (-results[i].mean_accuracy, -results[i].mean_ari, i),
    )
    return GridResult(algorithm=algorithm, cells=[results[i] for i in order])


@dataclass
class FinalResult:
    """Full-dataset refit of an algorithm's best config."""

    algorithm: str
    config: AlgoConfig
    bundle: MetricBundle
    assignment: np.ndarray
    silhouette_values: np.ndarray | None  # per point; NaN for excluded points
    silhouette_noise_as_cluster: float | None  # DBSCAN sensitivity variant
    model: dict

    def to_json_dict(self) -> dict:
        if self.silhouette_values is None:
            sil = None
        else:
            sil = [None if np.isnan(v) else float(v) for v in self.silhouette_values]
        return {
            "algorithm": self.algorithm,
            "config": config_to_dict(self.config),
            "metrics": self.bundle.to_json_dict(),
            "assignment": self.assignment.tolist(),
            "silhouette_values": sil,
            "silhouette_noise_as_cluster": (
                None
                if self.silhouette_noise_as_cluster is None
                else float(self.silhouette_noise_as_cluster)
            ),
            "model": self.model,
        }


def final_fit(X: np.ndarray, y: np.ndarray, cfg: AlgoConfig, seed: int) -> FinalResult:
    """Fit on all rows, assign all rows, map and score."""
    fit_seed = derived_seed(seed, config_key(cfg), "final")
    assign, model = _fit_assign(X, X, cfg, fit_seed)
    bundle = score_assignment(X, assign, y)

    try:
        sil_values = silhouette(X, assign).s
    except ValueError:
        sil_values = None

    noise_variant = None
    if cfg.algorithm == "dbscan" and np.any(assign == NOISE):
        relabeled = assign.copy()
        relabeled[relabeled == NOISE] = assign.max() + 1
        try:
            noise_variant = silhouette(X, relabeled).mean
        except ValueError:
            noise_variant = None

    return FinalResult(
        algorithm=cfg.algorithm,
        config=cfg,
        bundle=bundle,
        assignment=assign,
        silhouette_values=sil_values,
        silhouette_noise_as_cluster=noise_variant,
        model=model,
    )
