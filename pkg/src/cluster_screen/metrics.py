"""Evaluation metrics: cluster-to-label mapping, accuracy, ARI, silhouette.

Cluster ids are arbitrary, so accuracy is only meaningful after mapping
ids onto the binary labels.  With exactly two clusters (and no noise)
both id->label permutations are tried and the better one kept; otherwise
each cluster, noise included, takes the majority label of its members.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cluster._distance import pairwise_distances

NOISE = -1


@dataclass
class LabelMapping:
    """Cluster id -> binary label, plus which rule produced it."""

    mapping: dict[int, int]
    method: str  # "permutation" | "majority"

    def apply(self, assign: np.ndarray) -> np.ndarray:
        return np.array([self.mapping[int(c)] for c in assign], dtype=np.int64)

    def to_json_dict(self) -> dict:
        return {
            "mapping": {str(c): int(lab) for c, lab in sorted(self.mapping.items())},
            "method": self.method,
        }


@dataclass
class ConfusionMatrix2x2:
    """Counts with rows = actual (NO, ASD) and columns = predicted (NO, ASD)."""

    tn: int
    fp: int
    fn: int
    tp: int

    @property
    def n(self) -> int:
        return self.tn + self.fp + self.fn + self.tp

    def to_json_dict(self) -> dict:
        return {"tn": self.tn, "fp": self.fp, "fn": self.fn, "tp": self.tp}


@dataclass
class SilhouetteReport:
    """Per-point silhouette values; NaN marks points excluded from scoring."""

    s: np.ndarray
    a: np.ndarray
    b: np.ndarray
    mean: float


@dataclass
class MetricBundle:
    """All scores for one evaluated assignment."""

    accuracy: float
    ari: float
    silhouette: float | None
    confusion: ConfusionMatrix2x2
    mapping: LabelMapping

    def to_json_dict(self) -> dict:
        return {
            "accuracy": float(self.accuracy),
            "ari": float(self.ari),
            "silhouette": None if self.silhouette is None else float(self.silhouette),
            "confusion": self.confusion.to_json_dict(),
            "mapping": self.mapping.to_json_dict()["mapping"],
            "method": self.mapping.method,
        }


def _check_lengths(u, v) -> None:
    if len(u) != len(v):
        raise ValueError(f"length mismatch: {len(u)} vs {len(v)}")
    if len(u) == 0:
        raise ValueError("empty input")


def map_clusters_to_labels(
    assign: np.ndarray, truth: np.ndarray
) -> tuple[LabelMapping, np.ndarray]:
    """Pick the id->label mapping, then apply it.

    Two clusters and no noise: the permutation with higher accuracy wins
    (a tie maps the lower id to label 0).  Anything else: per-cluster
    majority vote with ties resolved to label 0.
    """
    assign = np.asarray(assign, dtype=np.int64)
    truth = np.asarray(truth, dtype=np.int64)
    _check_lengths(assign, truth)

    ids = np.unique(assign)
    if ids.size == 2 and NOISE not in ids:
        lo, hi = int(ids[0]), int(ids[1])
        direct = {lo: 0, hi: 1}
        swapped = {lo: 1, hi: 0}
        acc_direct = float(np.mean(np.where(assign == lo, 0, 1) == truth))
        acc_swapped = float(np.mean(np.where(assign == lo, 1, 0) == truth))
        mapping = LabelMapping(
            mapping=direct if acc_direct >= acc_swapped else swapped,
            method="permutation",
        )
    else:
        table: dict[int, int] = {}
        for c in ids:
            member_truth = truth[assign == c]
            ones = int(member_truth.sum())
            zeros = member_truth.size - ones
            table[int(c)] = 1 if ones > zeros else 0
        mapping = LabelMapping(mapping=table, method="majority")
    return mapping, mapping.apply(assign)


def accuracy(mapped: np.ndarray, truth: np.ndarray) -> float:
    """Fraction of exact matches between mapped labels and ground truth."""
    mapped = np.asarray(mapped)
    truth = np.asarray(truth)
    _check_lengths(mapped, truth)
    return float(np.mean(mapped == truth))


def _first_appearance_form(u) -> list[int]:
    remap: dict = {}
    out = []
    for c in u:
        if c not in remap:
            remap[c] = len(remap)
        out.append(remap[c])
    return out


def adjusted_rand_index(u, v) -> float:
    """Chance-adjusted pair-counting agreement between two partitions.

    Exact integer arithmetic up to the final division.  When both
    partitions are trivial (the denominator vanishes) the result is 1.0
    for identical set partitions and 0.0 otherwise.
    """
    u = u.tolist() if isinstance(u, np.ndarray) else list(u)
    v = v.tolist() if isinstance(v, np.ndarray) else list(v)
    _check_lengths(u, v)

    cells: dict = {}
    rows: dict = {}
    cols: dict = {}
    for pair in zip(u, v):
        cells[pair] = cells.get(pair, 0) + 1
        rows[pair[0]] = rows.get(pair[0], 0) + 1
        cols[pair[1]] = cols.get(pair[1], 0) + 1

    index = sum(c * (c - 1) // 2 for c in cells.values())
    sum_rows = sum(c * (c - 1) // 2 for c in rows.values())
    sum_cols = sum(c * (c - 1) // 2 for c in cols.values())
    n = len(u)
    total = n * (n - 1) // 2

    # ARI = (index - expected) / (max_index - expected), cleared of fractions
    numerator = 2 * (total * index - sum_rows * sum_cols)
    denominator = total * (sum_rows + sum_cols) - 2 * sum_rows * sum_cols
    if denominator == 0:
        return 1.0 if _first_appearance_form(u) == _first_appearance_form(v) else 0.0
    return numerator / denominator


def silhouette(X: np.ndarray, assign: np.ndarray) -> SilhouetteReport:
    """Per-point silhouette values on Euclidean distances.

    a(x) is the mean distance to the rest of x's cluster, b(x) the
    smallest mean distance to any other cluster, s = (b - a)/max(a, b).
    Noise points (-1) are excluded from scoring and from the b(x)
    candidates; singleton clusters score 0 by convention.
    """
    X = np.asarray(X, dtype=np.float64)
    assign = np.asarray(assign, dtype=np.int64)
    _check_lengths(X, assign)

    scored = assign != NOISE
    ids = np.unique(assign[scored])
    if ids.size < 2:
        raise ValueError("silhouette needs at least 2 clusters among scored points")

    dist = pairwise_distances(X)
    sums = {int(c): dist[:, assign == c].sum(axis=1) for c in ids}
    sizes = {int(c): int(np.sum(assign == c)) for c in ids}

    n = X.shape[0]
    a = np.full(n, np.nan)
    b = np.full(n, np.nan)
    s = np.full(n, np.nan)
    for i in range(n):
        c = int(assign[i])
        if c == NOISE:
            continue
        b[i] = min(sums[o][i] / sizes[o] for o in sums if o != c)
        if sizes[c] == 1:
            a[i] = 0.0
            s[i] = 0.0
            continue
        a[i] = sums[c][i] / (sizes[c] - 1)
        denom = max(a[i], b[i])
        s[i] = (b[i] - a[i]) / denom if denom > 0 else 0.0

    return SilhouetteReport(s=s, a=a, b=b, mean=float(s[scored].mean()))


def confusion(mapped: np.ndarray, truth: np.ndarray) -> ConfusionMatrix2x2:
    """2x2 confusion counts of mapped labels against ground truth."""
    mapped = np.asarray(mapped, dtype=np.int64)
    truth = np.asarray(truth, dtype=np.int64)
    _check_lengths(mapped, truth)
    return ConfusionMatrix2x2(
        tn=int(np.sum((truth == 0) & (mapped == 0))),
        fp=int(np.sum((truth == 0) & (mapped == 1))),
        fn=int(np.sum((truth == 1) & (mapped == 0))),
        tp=int(np.sum((truth == 1) & (mapped == 1))),
    )


def score_assignment(X: np.ndarray, assign: np.ndarray, truth: np.ndarray) -> MetricBundle:
    """Map an assignment to labels and compute the full metric bundle.

    The silhouette is None (and the event logged by the caller) when the
    assignment has fewer than two non-noise clusters.
    """
    mapping, mapped = map_clusters_to_labels(assign, truth)
    try:
        sil = silhouette(X, assign).mean
    except ValueError:
        sil = None
    return MetricBundle(
        accuracy=accuracy(mapped, truth),
        ari=adjusted_rand_index(assign, truth),
        silhouette=sil,
        confusion=confusion(mapped, truth),
        mapping=mapping,
    )
