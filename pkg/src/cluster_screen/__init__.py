"""Clustering benchmark harness for the adult autism screening dataset.

Four from-scratch clustering algorithms (K-Means, Gaussian mixtures,
agglomerative, DBSCAN), the preprocessing pipeline for the screening
CSV, cluster-to-label evaluation metrics, and a seeded cross-validation
grid-search harness with a reporting CLI.
"""

from .cluster import (
    AgglomerativeConfig,
    DbscanConfig,
    GmmConfig,
    KMeansConfig,
    agglomerative_fit_predict,
    dbscan_fit_predict,
    gmm_fit,
    gmm_predict,
    kmeans_fit,
    kmeans_predict,
)
from .harness import cv_evaluate, default_grid, final_fit, grid_search, kfold_split
from .ingest import load_csv, load_dataset
from .metrics import (
    accuracy,
    adjusted_rand_index,
    confusion,
    map_clusters_to_labels,
    silhouette,
)

__version__ = "0.1.0"

__all__ = [
    "AgglomerativeConfig",
    "DbscanConfig",
    "GmmConfig",
    "KMeansConfig",
    "accuracy",
    "adjusted_rand_index",
    "agglomerative_fit_predict",
    "confusion",
    "cv_evaluate",
    "dbscan_fit_predict",
    "default_grid",
    "final_fit",
    "gmm_fit",
    "gmm_predict",
    "grid_search",
    "kfold_split",
    "kmeans_fit",
    "kmeans_predict",
    "load_csv",
    "load_dataset",
    "map_clusters_to_labels",
    "silhouette",
]
