"""Command-line front end: run the benchmark, emit reports and plot data.

Commands:

  cluster-screen run --data screening.csv [--algorithms ...] [--folds 5]
                     [--seed 42] [--out DIR] [--scale-per-fold] [--grid JSON]
  cluster-screen figures --report DIR/report.json --out DIR

``run`` writes report.json, table1.csv, table2.csv, codebook.json,
scaler.json and the figure data CSVs.  Reports are byte-reproducible for
a fixed dataset and seed; only the "metadata" block (timestamps) varies.

Exit codes: 0 success, 1 invalid configuration, 2 input/ingest error,
3 internal error (with diagnostics).  CLUSTER_SCREEN_THREADS caps worker
parallelism for the grid search.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
import traceback
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .cluster import ALGORITHMS, config_from_dict
from .harness import default_grid, final_fit, grid_search, kfold_split
from .ingest import IngestError, load_dataset

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_INGEST = 2
EXIT_INTERNAL = 3


class ConfigError(ValueError):
    """Invalid run configuration (maps to exit code 1)."""


@dataclass
class RunConfig:
    data: Path
    out: Path
    algorithms: tuple[str, ...] = ALGORITHMS
    folds: int = 5
    seed: int = 42
    scale_per_fold: bool = False
    grid_overrides: dict | None = None
    n_workers: int = 1

    def __post_init__(self):
        if not self.algorithms:
            raise ConfigError("at least one algorithm is required")
        unknown = [a for a in self.algorithms if a not in ALGORITHMS]
        if unknown:
            raise ConfigError(f"unknown algorithm(s) {unknown}; choose from {list(ALGORITHMS)}")
        if self.folds < 2:
            raise ConfigError("folds must be >= 2")
        if self.n_workers < 1:
            raise ConfigError("worker count must be >= 1")


def _parse_grid_overrides(raw: dict | None) -> dict[str, list]:
    """Turn {"algorithm": [{param: value, ...}, ...]} into config lists."""
    if raw is None:
        return {}
    if not isinstance(raw, dict):
        raise ConfigError("grid overrides must be a JSON object keyed by algorithm")
    grids: dict[str, list] = {}
    for algorithm, cells in raw.items():
        if algorithm not in ALGORITHMS:
            raise ConfigError(f"grid override for unknown algorithm {algorithm!r}")
        if not isinstance(cells, list) or not cells:
            raise ConfigError(f"grid override for {algorithm!r} must be a non-empty list")
        try:
            grids[algorithm] = [
                config_from_dict({"algorithm": algorithm, **cell}) for cell in cells
            ]
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad grid cell for {algorithm!r}: {exc}") from exc
    return grids


def run_pipeline(config: RunConfig) -> dict:
    """ingest -> grid search per algorithm -> final refit -> report files."""
    dataset = load_dataset(config.data)
    n, d = dataset.X.shape
    logger.info("loaded %d rows, %d features from %s", n, d, config.data)

    plan = kfold_split(n, config.folds, config.seed)
    grids = _parse_grid_overrides(config.grid_overrides)

    table1: dict[str, dict] = {}
    table2: dict[str, dict] = {}
    for algorithm in config.algorithms:
        grid = grids.get(algorithm)
        grid_result = grid_search(
            dataset.X,
            dataset.y,
            algorithm,
            plan,
            config.seed,
            grid=grid,
            scale_per_fold=config.scale_per_fold,
            X_unscaled=dataset.X_encoded,
            n_workers=config.n_workers,
        )
        best_cfg = grid_result.best.config
        final = final_fit(dataset.X, dataset.y, best_cfg, config.seed)
        logger.info(
            "%s: best %s, cv accuracy %.4f, full-data accuracy %.4f",
            algorithm,
            json.dumps({k: v for k, v in grid_result.best.to_json_dict()["config"].items() if k != "algorithm"}),
            grid_result.best.mean_accuracy,
            final.bundle.accuracy,
        )
        table1[algorithm] = grid_result.to_json_dict()
        table2[algorithm] = final.to_json_dict()

    report = {
        "schema_version": SCHEMA_VERSION,
        "metadata": {
            "created_utc": datetime.now(timezone.utc).isoformat(),
            "data_path": str(config.data),
            "tool_version": __version__,
        },
        "config": {
            "algorithms": list(config.algorithms),
            "folds": config.folds,
            "seed": config.seed,
            "scale_per_fold": config.scale_per_fold,
            "grid_overrides": config.grid_overrides,
        },
        "dataset": {
            "n": int(n),
            "d": int(d),
            "feature_names": list(dataset.feature_names),
            "encoded_columns": list(dataset.codebook.encoded_columns),
            "fingerprint": dataset.fingerprint,
        },
        "table1": table1,
        "table2": table2,
    }

    config.out.mkdir(parents=True, exist_ok=True)
    figure_files = emit_figures(report, config.out)
    report["figures"] = [p.name for p in figure_files]

    _write_json(config.out / "report.json", report)
    _write_json(config.out / "codebook.json", dataset.codebook.to_json_dict())
    _write_json(config.out / "scaler.json", dataset.scaler.to_json_dict())
    _write_table1_csv(config.out / "table1.csv", report)
    _write_table2_csv(config.out / "table2.csv", report)
    logger.info("report written to %s", config.out / "report.json")
    return report


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _cell(value) -> str:
    return "" if value is None else str(value)


def _params_string(config_dict: dict) -> str:
    params = {k: v for k, v in config_dict.items() if k != "algorithm"}
    return json.dumps(params, sort_keys=True)


def _write_table1_csv(path: Path, report: dict) -> None:
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["algorithm", "best_params", "mean_accuracy", "mean_ari", "mean_silhouette"]
        )
        for algorithm in report["config"]["algorithms"]:
            best = report["table1"][algorithm]["best"]
            writer.writerow(
                [
                    algorithm,
                    _params_string(best["config"]),
                    _cell(best["mean_accuracy"]),
                    _cell(best["mean_ari"]),
                    _cell(best["mean_silhouette"]),
                ]
            )


def _write_table2_csv(path: Path, report: dict) -> None:
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["model", "accuracy", "ari", "silhouette"])
        for algorithm in report["config"]["algorithms"]:
            metrics = report["table2"][algorithm]["metrics"]
            writer.writerow(
                [
                    algorithm,
                    _cell(metrics["accuracy"]),
                    _cell(metrics["ari"]),
                    _cell(metrics["silhouette"]),
                ]
            )


def emit_figures(report: dict, outdir: Path) -> list[Path]:
    """Write the plot-data CSVs: accuracy bars, confusion grids, silhouette
    profiles (sorted within cluster).  Returns the written paths."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    path = outdir / "figure1_accuracy.csv"
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["model", "accuracy"])
        for algorithm in report["config"]["algorithms"]:
            writer.writerow([algorithm, _cell(report["table2"][algorithm]["metrics"]["accuracy"])])
    written.append(path)

    for algorithm in report["config"]["algorithms"]:
        final = report["table2"][algorithm]
        cm = final["metrics"]["confusion"]
        path = outdir / f"figure2_confusion_{algorithm}.csv"
        with path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["", "pred_no", "pred_asd"])
            writer.writerow(["actual_no", cm["tn"], cm["fp"]])
            writer.writerow(["actual_asd", cm["fn"], cm["tp"]])
        written.append(path)

        values = final["silhouette_values"]
        if values is None:
            continue
        rows = [
            (cluster, value)
            for cluster, value in zip(final["assignment"], values)
            if value is not None
        ]
        rows.sort(key=lambda cv: (cv[0], -cv[1]))
        path = outdir / f"figure3_silhouette_{algorithm}.csv"
        with path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["cluster", "silhouette"])
            writer.writerows(rows)
        written.append(path)
    return written


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 1 on bad usage, per the CLI contract
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="cluster-screen", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the full benchmark pipeline")
    run.add_argument("--data", required=True, type=Path, help="screening CSV path")
    run.add_argument(
        "--algorithms",
        default=",".join(ALGORITHMS),
        help=f"comma-separated subset of {','.join(ALGORITHMS)}",
    )
    run.add_argument("--folds", type=int, default=5)
    run.add_argument("--seed", type=int, default=42)
    run.add_argument("--out", type=Path, default=Path("reports"))
    run.add_argument(
        "--scale-per-fold",
        action="store_true",
        help="refit the scaler on each training fold (hygienic variant)",
    )
    run.add_argument("--grid", help="JSON grid overrides, inline or @file")

    figures = sub.add_parser("figures", help="emit figure data from a report")
    figures.add_argument("--report", required=True, type=Path)
    figures.add_argument("--out", required=True, type=Path)
    return parser


def _load_grid_argument(raw: str | None) -> dict | None:
    if raw is None:
        return None
    text = raw
    if raw.startswith("@"):
        try:
            text = Path(raw[1:]).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read grid file {raw[1:]!r}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"--grid is not valid JSON: {exc}") from exc


def _workers_from_env() -> int:
    raw = os.environ.get("CLUSTER_SCREEN_THREADS")
    if raw is None:
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"CLUSTER_SCREEN_THREADS must be an integer, got {raw!r}") from None
    if value < 1:
        raise ConfigError("CLUSTER_SCREEN_THREADS must be >= 1")
    return value


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            config = RunConfig(
                data=args.data,
                out=args.out,
                algorithms=tuple(a.strip() for a in args.algorithms.split(",") if a.strip()),
                folds=args.folds,
                seed=args.seed,
                scale_per_fold=args.scale_per_fold,
                grid_overrides=_load_grid_argument(args.grid),
                n_workers=_workers_from_env(),
            )
            _parse_grid_overrides(config.grid_overrides)  # validate before running
            run_pipeline(config)
        else:
            try:
                report = json.loads(args.report.read_text(encoding="utf-8"))
            except OSError as exc:
                raise IngestError(f"cannot read report {args.report}: {exc}") from exc
            except json.JSONDecodeError as exc:
                raise IngestError(f"report {args.report} is not valid JSON: {exc}") from exc
            emit_figures(report, args.out)
        return EXIT_OK
    except ConfigError as exc:
        print(f"cluster-screen: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except IngestError as exc:
        print(f"cluster-screen: input error: {exc}", file=sys.stderr)
        return EXIT_INGEST
    except OSError as exc:
        print(f"cluster-screen: i/o error: {exc}", file=sys.stderr)
        return EXIT_INGEST
    except Exception:
        print("cluster-screen: internal error", file=sys.stderr)
        traceback.print_exc()
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
