"""Synthetic datasets for the test suite."""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np


def two_blobs(n_per: int = 60, d: int = 3, sep: float = 20.0, std: float = 1.0, seed: int = 0):
    """Two spherical Gaussian blobs, labels 0/1, well separated by default."""
    rng = np.random.default_rng(seed)
    a = rng.normal(0.0, std, size=(n_per, d)) + sep / 2.0
    b = rng.normal(0.0, std, size=(n_per, d)) - sep / 2.0
    X = np.vstack([a, b])
    y = np.array([1] * n_per + [0] * n_per, dtype=np.int64)
    return X, y


ETHNICITIES = ["White-European", "Latino", "?", "Asian", "Black", "South Asian"]
COUNTRIES = ["United States", "Brazil", "Spain", "Egypt", "New Zealand", "Jordan"]
RELATIONS = ["Self", "Parent", "?", "Relative", "Health care professional"]

HEADER = [
    *(f"A{i}_Score" for i in range(1, 11)),
    "age",
    "gender",
    "ethnicity",
    "jundice",
    "austim",
    "contry_of_res",
    "used_app_before",
    "result",
    "age_desc",
    "relation",
    "Class/ASD",
]


def make_screening_rows(n: int = 160, seed: int = 7, missing_age: int = 2) -> list[list[str]]:
    """Rows in the screening-CSV schema with label-correlated item scores."""
    rng = np.random.default_rng(seed)
    rows = []
    for i in range(n):
        is_asd = rng.random() < 0.3
        p = 0.8 if is_asd else 0.25
        scores = (rng.random(10) < p).astype(int)
        age = "?" if i < missing_age else str(int(rng.integers(18, 60)))
        rows.append(
            [
                *(str(s) for s in scores),
                age,
                rng.choice(["f", "m"]),
                rng.choice(ETHNICITIES),
                rng.choice(["no", "yes"], p=[0.9, 0.1]),
                rng.choice(["no", "yes"], p=[0.85, 0.15]),
                rng.choice(COUNTRIES),
                rng.choice(["no", "yes"], p=[0.95, 0.05]),
                str(int(scores.sum())),
                "18 and more",
                rng.choice(RELATIONS),
                "YES" if is_asd else "NO",
            ]
        )
    return rows


def write_screening_csv(path: Path, n: int = 160, seed: int = 7, missing_age: int = 2) -> Path:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(HEADER)
        writer.writerows(make_screening_rows(n=n, seed=seed, missing_age=missing_age))
    return path
