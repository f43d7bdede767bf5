"""From-scratch clustering algorithms behind a uniform fit/assign contract."""

from .agglomerative import Dendrogram, agglomerative_fit_predict
from .configs import (
    ALGORITHMS,
    AgglomerativeConfig,
    AlgoConfig,
    DbscanConfig,
    GmmConfig,
    KMeansConfig,
    config_from_dict,
    config_key,
    config_to_dict,
)
from .dbscan import NOISE, dbscan_fit_predict
from .gmm import GmmModel, gmm_fit, gmm_predict, gmm_responsibilities
from .kmeans import KMeansModel, kmeans_fit, kmeans_predict

__all__ = [
    "ALGORITHMS",
    "AgglomerativeConfig",
    "AlgoConfig",
    "DbscanConfig",
    "Dendrogram",
    "GmmConfig",
    "GmmModel",
    "KMeansConfig",
    "KMeansModel",
    "NOISE",
    "agglomerative_fit_predict",
    "config_from_dict",
    "config_key",
    "config_to_dict",
    "dbscan_fit_predict",
    "gmm_fit",
    "gmm_predict",
    "gmm_responsibilities",
    "kmeans_fit",
    "kmeans_predict",
]
