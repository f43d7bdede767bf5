"""Hyperparameter configurations for the four clustering algorithms."""

from __future__ import annotations

from dataclasses import dataclass, fields
from typing import Union

KMEANS_INITS = ("kmeanspp", "random")
COVARIANCE_TYPES = ("full", "tied", "diag", "spherical")
LINKAGES = ("ward", "complete", "average", "single")


@dataclass(frozen=True)
class KMeansConfig:
    algorithm = "kmeans"
    k: int = 2
    init: str = "kmeanspp"
    n_init: int = 10
    max_iter: int = 300
    tol: float = 1e-4

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.init not in KMEANS_INITS:
            raise ValueError(f"init must be one of {KMEANS_INITS}, got {self.init!r}")
        if self.n_init < 1:
            raise ValueError("n_init must be >= 1")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if not self.tol > 0:
            raise ValueError("tol must be > 0")


@dataclass(frozen=True)
class GmmConfig:
    algorithm = "gmm"
    k: int = 2
    covariance: str = "full"
    n_init: int = 1
    max_iter: int = 300
    tol: float = 1e-4
    reg_covar: float = 1e-6

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.covariance not in COVARIANCE_TYPES:
            raise ValueError(
                f"covariance must be one of {COVARIANCE_TYPES}, got {self.covariance!r}"
            )
        if self.n_init < 1:
            raise ValueError("n_init must be >= 1")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if not self.tol > 0:
            raise ValueError("tol must be > 0")
        if self.reg_covar < 0:
            raise ValueError("reg_covar must be >= 0")


@dataclass(frozen=True)
class AgglomerativeConfig:
    algorithm = "agglomerative"
    k: int = 2
    linkage: str = "ward"

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.linkage not in LINKAGES:
            raise ValueError(f"linkage must be one of {LINKAGES}, got {self.linkage!r}")


@dataclass(frozen=True)
class DbscanConfig:
    algorithm = "dbscan"
    eps: float = 0.5
    min_samples: int = 5

    def __post_init__(self):
        if not self.eps > 0:
            raise ValueError("eps must be > 0")
        if self.min_samples < 1:
            raise ValueError("min_samples must be >= 1")


AlgoConfig = Union[KMeansConfig, GmmConfig, AgglomerativeConfig, DbscanConfig]

_CONFIG_CLASSES = {
    "kmeans": KMeansConfig,
    "gmm": GmmConfig,
    "agglomerative": AgglomerativeConfig,
    "dbscan": DbscanConfig,
}

ALGORITHMS = tuple(_CONFIG_CLASSES)


def config_key(cfg: AlgoConfig) -> str:
    """Canonical string identity of a config (also seeds its RNG streams)."""
    params = ",".join(f"{f.name}={getattr(cfg, f.name)!r}" for f in fields(cfg))
    return f"{cfg.algorithm}({params})"


def config_to_dict(cfg: AlgoConfig) -> dict:
    d = {"algorithm": cfg.algorithm}
    for f in fields(cfg):
        d[f.name] = getattr(cfg, f.name)
    return d


def config_from_dict(d: dict) -> AlgoConfig:
    d = dict(d)
    name = d.pop("algorithm", None)
    if name not in _CONFIG_CLASSES:
        raise ValueError(f"unknown algorithm {name!r}; expected one of {ALGORITHMS}")
    cls = _CONFIG_CLASSES[name]
    valid = {f.name for f in fields(cls)}
    unknown = set(d) - valid
    if unknown:
        raise ValueError(f"unknown {name} parameter(s): {sorted(unknown)}")
    return cls(**d)
