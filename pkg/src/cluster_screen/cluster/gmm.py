"""Gaussian mixture fitting by expectation-maximization.

Supports four covariance structures:

  full       one unrestricted d x d matrix per component
  tied       a single d x d matrix shared by all components
  diag       one variance vector per component
  spherical  one scalar variance per component

The E-step works in log space with a log-sum-exp normalization; the
M-step re-estimates weights, means and covariances from the posterior
responsibilities, adding ``reg_covar`` to every covariance diagonal.
Initialization comes from a k-means++ seeded K-Means run (hard labels
turned into one-hot responsibilities).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .._seeding import derived_seed
from .configs import GmmConfig, KMeansConfig
from .kmeans import kmeans_fit

_LOG_2PI = np.log(2.0 * np.pi)


@dataclass
class GmmModel:
    weights: np.ndarray        # k mixture proportions, sum to 1
    means: np.ndarray          # k x d
    covariances: np.ndarray    # shape depends on covariance_type
    covariance_type: str
    log_likelihood: float      # final mean per-sample log-likelihood
    ll_history: list[float]    # one entry per EM iteration
    iterations: int
    seed: int

    def to_json_dict(self) -> dict:
        return {
            "weights": self.weights.tolist(),
            "means": self.means.tolist(),
            "covariances": self.covariances.tolist(),
            "covariance_type": self.covariance_type,
            "log_likelihood": float(self.log_likelihood),
            "iterations": int(self.iterations),
            "seed": int(self.seed),
        }


def _logsumexp(a: np.ndarray, axis: int) -> np.ndarray:
    amax = np.max(a, axis=axis, keepdims=True)
    amax = np.where(np.isfinite(amax), amax, 0.0)
    out = np.log(np.sum(np.exp(a - amax), axis=axis)) + np.squeeze(amax, axis=axis)
    return out


def _chol_logdet_and_maha(X: np.ndarray, mean: np.ndarray, cov: np.ndarray):
    """log|cov| and per-point Mahalanobis terms via a Cholesky factor."""
    try:
        L = np.linalg.cholesky(cov)
    except np.linalg.LinAlgError:
        raise ValueError(
            "covariance matrix is not positive definite; increase reg_covar"
        ) from None
    logdet = 2.0 * float(np.sum(np.log(np.diag(L))))
    solved = (X - mean) @ np.linalg.inv(L).T
    return logdet, np.einsum("ij,ij->i", solved, solved)


def _log_densities(X, weights, means, covs, covariance_type) -> np.ndarray:
    """n x k matrix of log(weight_c) + log N(x | mean_c, cov_c)."""
    n, d = X.shape
    k = means.shape[0]
    out = np.empty((n, k), dtype=np.float64)
    if covariance_type == "full":
        for c in range(k):
            logdet, maha = _chol_logdet_and_maha(X, means[c], covs[c])
            out[:, c] = -0.5 * (d * _LOG_2PI + logdet + maha)
    elif covariance_type == "tied":
        for c in range(k):
            logdet, maha = _chol_logdet_and_maha(X, means[c], covs)
            out[:, c] = -0.5 * (d * _LOG_2PI + logdet + maha)
    elif covariance_type == "diag":
        for c in range(k):
            diff = X - means[c]
            maha = np.einsum("ij,ij->i", diff / covs[c], diff)
            logdet = float(np.sum(np.log(covs[c])))
            out[:, c] = -0.5 * (d * _LOG_2PI + logdet + maha)
    else:  # spherical
        for c in range(k):
            diff = X - means[c]
            maha = np.einsum("ij,ij->i", diff, diff) / covs[c]
            logdet = d * float(np.log(covs[c]))
            out[:, c] = -0.5 * (d * _LOG_2PI + logdet + maha)
    return out + np.log(weights)


def _estimate_parameters(X, resp, reg_covar, covariance_type):
    n, d = X.shape
    nk = resp.sum(axis=0) + 10.0 * np.finfo(np.float64).eps
    weights = nk / n
    means = (resp.T @ X) / nk[:, None]

    if covariance_type == "full":
        k = means.shape[0]
        covs = np.empty((k, d, d), dtype=np.float64)
        for c in range(k):
            diff = X - means[c]
            covs[c] = (resp[:, c] * diff.T) @ diff / nk[c]
            covs[c].flat[:: d + 1] += reg_covar
    elif covariance_type == "tied":
        avg_x2 = X.T @ X
        avg_means2 = (nk[:, None] * means).T @ means
        covs = (avg_x2 - avg_means2) / n
        covs.flat[:: d + 1] += reg_covar
    elif covariance_type == "diag":
        avg_x2 = (resp.T @ (X * X)) / nk[:, None]
        covs = avg_x2 - means**2 + reg_covar
    else:  # spherical: mean of the per-feature variances
        avg_x2 = (resp.T @ (X * X)) / nk[:, None]
        covs = (avg_x2 - means**2 + reg_covar).mean(axis=1)
    return weights, means, covs


def _initial_responsibilities(X: np.ndarray, cfg: GmmConfig, seed: int) -> np.ndarray:
    km_cfg = KMeansConfig(k=cfg.k, init="kmeanspp", n_init=1, max_iter=cfg.max_iter)
    km = kmeans_fit(X, km_cfg, seed=seed)
    resp = np.zeros((X.shape[0], cfg.k), dtype=np.float64)
    resp[np.arange(X.shape[0]), km.labels] = 1.0
    return resp


def _run_em(X: np.ndarray, cfg: GmmConfig, init_seed: int):
    resp = _initial_responsibilities(X, cfg, init_seed)
    weights, means, covs = _estimate_parameters(X, resp, cfg.reg_covar, cfg.covariance)

    history: list[float] = []
    prev_ll = -np.inf
    iterations = 0
    for _ in range(cfg.max_iter):
        weighted = _log_densities(X, weights, means, covs, cfg.covariance)
        log_norm = _logsumexp(weighted, axis=1)
        ll = float(log_norm.mean())
        history.append(ll)
        iterations += 1

        resp = np.exp(weighted - log_norm[:, None])
        weights, means, covs = _estimate_parameters(X, resp, cfg.reg_covar, cfg.covariance)
        if abs(ll - prev_ll) < cfg.tol:
            break
        prev_ll = ll

    # evaluate the returned parameters so log_likelihood matches the model
    weighted = _log_densities(X, weights, means, covs, cfg.covariance)
    final_ll = float(_logsumexp(weighted, axis=1).mean())
    history.append(final_ll)
    return weights, means, covs, final_ll, history, iterations


def gmm_fit(X: np.ndarray, cfg: GmmConfig, seed: int) -> GmmModel:
    """EM fit; best of cfg.n_init restarts by final log-likelihood."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError("X must be a 2-d matrix")
    if not np.isfinite(X).all():
        raise ValueError("X contains non-finite values")
    if X.shape[0] < cfg.k:
        raise ValueError(f"need at least k={cfg.k} points, got {X.shape[0]}")

    best = None
    for restart in range(cfg.n_init):
        run = _run_em(X, cfg, init_seed=derived_seed(seed, restart))
        if best is None or run[3] > best[3]:
            best = run

    weights, means, covs, final_ll, history, iterations = best
    return GmmModel(
        weights=weights,
        means=means,
        covariances=covs,
        covariance_type=cfg.covariance,
        log_likelihood=final_ll,
        ll_history=history,
        iterations=iterations,
        seed=int(seed),
    )


def gmm_responsibilities(model: GmmModel, X: np.ndarray) -> np.ndarray:
    """Posterior component probabilities for each point (rows sum to 1)."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != model.means.shape[1]:
        raise ValueError(
            f"X has {X.shape[1] if X.ndim == 2 else '?'} columns, "
            f"model expects {model.means.shape[1]}"
        )
    weighted = _log_densities(
        X, model.weights, model.means, model.covariances, model.covariance_type
    )
    log_norm = _logsumexp(weighted, axis=1)
    return np.exp(weighted - log_norm[:, None])


def gmm_predict(model: GmmModel, X: np.ndarray) -> np.ndarray:
    """Most responsible component per point; ties go to the lowest index."""
    return np.argmax(gmm_responsibilities(model, X), axis=1)
