"""CSV ingestion: cleaning, label encoding, and standardization.

The pipeline is load_csv -> clean -> encode -> fit_scaler/apply_scaler.
Every step is a pure function; no row is ever added or dropped, so the
feature matrix and the ground-truth labels stay aligned by row index.
"""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

LABEL_COLUMN = "Class/ASD"

# Fixed binary conventions; every other categorical column is coded in
# first-appearance order.
_FEMALE_MALE = {"f": 0, "female": 0, "m": 1, "male": 1}
_NO_YES = {"no": 0, "yes": 1}


class IngestError(ValueError):
    """Raised for malformed input data or misconfigured preprocessing."""


@dataclass(frozen=True)
class RawTable:
    """Parsed CSV: header plus rows of verbatim string cells."""

    header: list[str]
    rows: list[list[str]]

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    def column(self, name: str) -> list[str]:
        try:
            j = self.header.index(name)
        except ValueError:
            raise IngestError(f"column {name!r} not present") from None
        return [row[j] for row in self.rows]


@dataclass(frozen=True)
class CleanConfig:
    """Knobs for the cleaning pass; defaults match the screening dataset."""

    drop_columns: tuple[str, ...] = ("age_desc",)
    age_column: str = "age"
    ethnicity_column: str = "ethnicity"
    ethnicity_fill: str = "others"
    missing_markers: tuple[str, ...] = ("", "?")


@dataclass
class Codebook:
    """Per-column category -> integer code maps for the encoded columns."""

    mappings: dict[str, dict[str, int]] = field(default_factory=dict)
    encoded_columns: list[str] = field(default_factory=list)

    def decode_column(self, name: str, codes) -> list[str]:
        """Invert the mapping of one column (round-trip of encode)."""
        inverse = {code: cat for cat, code in self.mappings[name].items()}
        return [inverse[int(c)] for c in codes]

    def to_json_dict(self) -> dict:
        return {
            "encoded_columns": list(self.encoded_columns),
            "mappings": {c: dict(m) for c, m in self.mappings.items()},
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "Codebook":
        return cls(
            mappings={c: {k: int(v) for k, v in m.items()} for c, m in d["mappings"].items()},
            encoded_columns=list(d["encoded_columns"]),
        )


@dataclass
class ScalerParams:
    """Per-feature mean and population standard deviation."""

    mean: np.ndarray
    std: np.ndarray

    def to_json_dict(self) -> dict:
        return {"mean": self.mean.tolist(), "std": self.std.tolist()}

    @classmethod
    def from_json_dict(cls, d: dict) -> "ScalerParams":
        return cls(mean=np.asarray(d["mean"], dtype=float), std=np.asarray(d["std"], dtype=float))


def load_csv(path) -> RawTable:
    """Parse a UTF-8 CSV with header into a RawTable, cells kept verbatim.

    Raises IngestError on ragged rows or when the label column is absent.
    """
    path = Path(path)
    try:
        with path.open(newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise IngestError(f"{path}: empty file") from None
            rows = [row for row in reader]
    except OSError as exc:
        raise IngestError(f"cannot read {path}: {exc}") from exc

    width = len(header)
    for i, row in enumerate(rows):
        if len(row) != width:
            raise IngestError(
                f"{path}: row {i + 2} has {len(row)} cells, header has {width}"
            )
    if LABEL_COLUMN not in header:
        raise IngestError(f"{path}: missing label column {LABEL_COLUMN!r}")
    return RawTable(header=header, rows=rows)


def clean(table: RawTable, config: CleanConfig | None = None) -> RawTable:
    """Drop the constant descriptor column and impute missing cells.

    Missing ages become the dataset mean age rounded to the nearest
    integer; missing or "?" ethnicity cells become the fill category.
    Idempotent: a second pass finds nothing left to fill.
    """
    cfg = config or CleanConfig()
    missing = set(cfg.missing_markers)

    keep = [j for j, name in enumerate(table.header) if name not in cfg.drop_columns]
    header = [table.header[j] for j in keep]
    rows = [[row[j] for j in keep] for row in table.rows]

    if cfg.age_column not in header:
        raise IngestError(f"column {cfg.age_column!r} not present")
    age_j = header.index(cfg.age_column)
    present = []
    for row in rows:
        cell = row[age_j].strip()
        if cell in missing:
            continue
        try:
            present.append(float(cell))
        except ValueError:
            raise IngestError(f"non-numeric {cfg.age_column!r} cell {cell!r}") from None
    if rows and not present:
        raise IngestError(f"every {cfg.age_column!r} cell is missing; mean undefined")
    if present:
        fill_age = str(int(round(sum(present) / len(present))))
        for row in rows:
            if row[age_j].strip() in missing:
                row[age_j] = fill_age

    if cfg.ethnicity_column in header:
        eth_j = header.index(cfg.ethnicity_column)
        for row in rows:
            if row[eth_j].strip() in missing:
                row[eth_j] = cfg.ethnicity_fill

    return RawTable(header=header, rows=rows)


def _is_numeric_column(cells: list[str]) -> bool:
    for cell in cells:
        try:
            float(cell)
        except ValueError:
            return False
    return True


def _binary_convention(categories: set[str]) -> dict[str, int] | None:
    lowered = {c.lower() for c in categories}
    if lowered <= {"f", "m", "female", "male"}:
        return {c: _FEMALE_MALE[c.lower()] for c in categories}
    if lowered <= {"no", "yes"}:
        return {c: _NO_YES[c.lower()] for c in categories}
    return None


def encode(
    table: RawTable, codebook: Codebook | None = None
) -> tuple[np.ndarray, np.ndarray, Codebook]:
    """Turn a cleaned table into a numeric matrix plus 0/1 labels.

    The label column is stripped out (YES -> 1, NO -> 0).  Numeric columns
    pass through unchanged; every other column is label-encoded.  Without a
    supplied codebook, codes follow first-appearance order except for the
    fixed binary conventions (female/male -> 0/1, no/yes -> 0/1).
    """
    if LABEL_COLUMN not in table.header:
        raise IngestError(f"missing label column {LABEL_COLUMN!r}")
    label_j = table.header.index(LABEL_COLUMN)

    labels = np.empty(table.n_rows, dtype=np.int64)
    for i, row in enumerate(table.rows):
        value = row[label_j].strip().upper()
        if value == "YES":
            labels[i] = 1
        elif value == "NO":
            labels[i] = 0
        else:
            raise IngestError(f"label row {i + 1}: expected YES/NO, got {row[label_j]!r}")

    feature_names = [name for j, name in enumerate(table.header) if j != label_j]
    columns = {name: table.column(name) for name in feature_names}

    if codebook is None:
        book = Codebook()
        for name in feature_names:
            cells = columns[name]
            if _is_numeric_column(cells):
                continue
            seen: dict[str, int] = {}
            for cell in cells:
                if cell not in seen:
                    seen[cell] = len(seen)
            fixed = _binary_convention(set(seen))
            book.mappings[name] = fixed if fixed is not None else seen
            book.encoded_columns.append(name)
    else:
        book = codebook

    matrix = np.empty((table.n_rows, len(feature_names)), dtype=np.float64)
    for j, name in enumerate(feature_names):
        cells = columns[name]
        if name in book.mappings:
            mapping = book.mappings[name]
            for i, cell in enumerate(cells):
                if cell not in mapping:
                    raise IngestError(f"column {name!r}: unseen category {cell!r}")
                matrix[i, j] = mapping[cell]
        else:
            try:
                matrix[:, j] = [float(c) for c in cells]
            except ValueError:
                raise IngestError(
                    f"column {name!r}: non-numeric cell outside the codebook"
                ) from None
    return matrix, labels, book


def fit_scaler(matrix: np.ndarray) -> ScalerParams:
    """Per-column mean and population std over all rows (constant column = error)."""
    X = np.asarray(matrix, dtype=np.float64)
    if X.size == 0:
        raise IngestError("cannot fit a scaler on an empty matrix")
    mean = X.mean(axis=0)
    std = X.std(axis=0)  # population convention (divide by n)
    bad = np.nonzero(std == 0.0)[0]
    if bad.size:
        raise IngestError(f"constant column(s) at index {bad.tolist()}; std is zero")
    return ScalerParams(mean=mean, std=std)


def apply_scaler(matrix: np.ndarray, params: ScalerParams) -> np.ndarray:
    """Standardize: (x - mean) / std, column-wise, with the stored params."""
    X = np.asarray(matrix, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != params.mean.shape[0]:
        raise IngestError(
            f"matrix has {X.shape[1] if X.ndim == 2 else '?'} columns, "
            f"scaler expects {params.mean.shape[0]}"
        )
    return (X - params.mean) / params.std


@dataclass
class Dataset:
    """Everything the harness needs: scaled features, labels, and provenance."""

    X: np.ndarray          # standardized n x d feature matrix
    X_encoded: np.ndarray  # encoded but unscaled matrix (for per-fold scaling)
    y: np.ndarray          # 0/1 ground truth, length n
    feature_names: list[str]
    codebook: Codebook
    scaler: ScalerParams
    fingerprint: str


def dataset_fingerprint(matrix: np.ndarray, labels: np.ndarray) -> str:
    """SHA-256 over the encoded matrix and labels; stable run-to-run."""
    h = hashlib.sha256()
    h.update(json.dumps(list(matrix.shape)).encode())
    h.update(np.ascontiguousarray(matrix, dtype=np.float64).tobytes())
    h.update(np.ascontiguousarray(labels, dtype=np.int64).tobytes())
    return h.hexdigest()


def load_dataset(path, clean_config: CleanConfig | None = None) -> Dataset:
    """Run the whole ingest pipeline on one CSV file."""
    table = clean(load_csv(path), clean_config)
    encoded, y, codebook = encode(table)
    scaler = fit_scaler(encoded)
    X = apply_scaler(encoded, scaler)
    names = [name for name in table.header if name != LABEL_COLUMN]
    return Dataset(
        X=X,
        X_encoded=encoded,
        y=y,
        feature_names=names,
        codebook=codebook,
        scaler=scaler,
        fingerprint=dataset_fingerprint(encoded, y),
    )
