"""Experiment runner: CSV ingestion, simulation studies and report emission.

Every run inside a study gets its own generator seeded from the master seed
and the run index, so any single record can be regenerated in isolation and
a whole report is byte-identical across repeats.
"""

from __future__ import annotations

import csv
import json
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
from numpy.typing import NDArray

from . import cdtest, estimator, genmodel
from .errors import (
    BadDimensionsError,
    ConstantColumnError,
    MissingColumnError,
    NonNumericError,
    ParseError,
    SpecbetaError,
    ZeroSignalError,
)
from .spectral import DataMatrix

MODES = (
    "estimate",
    "test",
    "simulate",
    "rejection_study",
    "overfit_study",
    "shuffle_target",
)

DEFAULT_SAMPLE_SIZES = (20, 100, 1000, 10000)
REJECTION_BINS = 10
# A study aborts once more than this fraction of runs has failed.
MAX_FAILURE_FRACTION = 0.10


@dataclass(frozen=True)
class ExperimentConfig:
    """Parameters of a harness invocation."""

    mode: str = "simulate"
    d: int = 10
    latent: int | None = None  # defaults to d
    n: int = 10000
    runs: int = 1000
    seed: int = 0
    alpha: float = 0.05
    null_count: int = 1000
    normalize: bool = False
    method: str = cdtest.SPHERE_MONTE_CARLO
    noise_sd: float | None = None  # None: 0 for simulate, 1 for overfit
    sample_sizes: tuple[int, ...] = DEFAULT_SAMPLE_SIZES
    target: str | int | None = None
    input_path: str | None = None
    output_path: str | None = None
    fmt: str = "json"

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.d < 1 or self.n < 1 or self.runs < 1:
            raise ValueError("counts must be positive")
        if not (0.0 < self.alpha < 1.0):
            raise ValueError("alpha must be in (0, 1)")
        if self.mode == "simulate" and self.ell < self.d:
            raise BadDimensionsError("latent dimension must be >= d when simulating")

    @property
    def ell(self) -> int:
        return self.d if self.latent is None else self.latent


@dataclass
class Report:
    """Config echo, per-run records and summary statistics.

    ``timing_seconds`` is informational only and deliberately left out of the
    serialized form so that identical (config, seed) produce byte-identical
    output files.
    """

    config: dict
    records: list[dict]
    summary: dict
    timing_seconds: float = 0.0


def config_echo(config: ExperimentConfig) -> dict:
    """Config as a dict for report emission.

    The output path is dropped: where a report is written must not change
    its bytes.
    """
    d = asdict(config)
    d.pop("output_path")
    return d


def run_rng(master_seed: int, *index: int) -> np.random.Generator:
    """Independent, reproducible generator for one run of a study."""
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence((master_seed, *index)))
    )


# ---------------------------------------------------------------------------
# CSV ingestion


def _is_number(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


def read_numeric_csv(path: str | Path) -> tuple[NDArray[np.float64], list[str]]:
    """Parse a numeric CSV with an optional, auto-detected single header row.

    A first row whose cells are not all numeric is taken as the header;
    otherwise columns are named col0, col1, ...

    Raises
    ------
    ParseError
        On an empty file or ragged rows (coordinates reported).
    NonNumericError
        On a non-numeric cell outside the header (location reported).
    """
    path = Path(path)
    with path.open(newline="") as fh:
        rows = [row for row in csv.reader(fh) if row]
    if not rows:
        raise ParseError(f"{path}: empty file")
    ncols = len(rows[0])
    header: list[str] | None = None
    if not all(_is_number(cell) for cell in rows[0]):
        header = [cell.strip() for cell in rows[0]]
        rows = rows[1:]
        if not rows:
            raise ParseError(f"{path}: header but no data rows")
    data = np.empty((len(rows), ncols), dtype=np.float64)
    offset = 2 if header is not None else 1
    for i, row in enumerate(rows):
        if len(row) != ncols:
            raise ParseError(
                f"{path}: row {i + offset} has {len(row)} cells, expected {ncols}"
            )
        for j, cell in enumerate(row):
            try:
                data[i, j] = float(cell)
            except ValueError:
                raise NonNumericError(
                    f"{path}: non-numeric cell {cell!r} at row {i + offset}, "
                    f"column {j + 1}"
                ) from None
    names = header if header is not None else [f"col{j}" for j in range(ncols)]
    return data, names


def ingest_csv(
    path: str | Path,
    target_column: str | int,
    normalize: bool = False,
) -> DataMatrix:
    """Load a CSV and split off the designated target column.

    The remaining columns become the predictors in file order.  With
    ``normalize`` each predictor column is divided by its sample standard
    deviation (centering always happens downstream).

    Raises
    ------
    MissingColumnError
        If the target name or index does not exist.
    ConstantColumnError
        If ``normalize`` is set and a predictor column has zero variance.
    """
    data, names = read_numeric_csv(path)
    if isinstance(target_column, int):
        if not (0 <= target_column < len(names)):
            raise MissingColumnError(
                f"target index {target_column} out of range (have {len(names)} columns)"
            )
        idx = target_column
    else:
        try:
            idx = names.index(target_column)
        except ValueError:
            raise MissingColumnError(
                f"target column {target_column!r} not found in {names}"
            ) from None
    y = data[:, idx]
    x = np.delete(data, idx, axis=1)
    x_names = [nm for j, nm in enumerate(names) if j != idx]
    if normalize:
        x = normalize_columns(x, x_names)
    return DataMatrix(x=x, y=y, column_names=tuple(x_names))


def normalize_columns(x: NDArray[np.float64], names: list[str]) -> NDArray[np.float64]:
    """Scale each column to unit sample standard deviation."""
    sd = x.std(axis=0)
    zero = np.flatnonzero(sd == 0.0)
    if zero.size:
        raise ConstantColumnError(
            f"column {names[zero[0]]!r} has zero variance; cannot normalize"
        )
    return x / sd


# ---------------------------------------------------------------------------
# Studies


def run_simulation_study(config: ExperimentConfig) -> Report:
    """Draw random models, estimate beta on fresh samples, report (beta, beta_hat) pairs."""
    t0 = time.perf_counter()
    records: list[dict] = []
    failures = 0
    for i in range(config.runs):
        rng = run_rng(config.seed, i)
        try:
            truth = genmodel.sample_ground_truth(config.d, config.ell, rng)
            ds = genmodel.generate_samples(
                truth, config.n, noise_sd=config.noise_sd or 0.0, rng=rng
            )
            est = estimator.estimate_confounding(ds.data)
            records.append(
                {
                    "run": i,
                    "true_beta": ds.true_beta,
                    "beta_hat": est.beta_hat,
                    "theta_hat": est.theta_hat,
                    "boundary": est.boundary,
                }
            )
        except SpecbetaError as err:
            failures += 1
            records.append({"run": i, "error": str(err)})
            _check_failures(failures, i + 1)
    ok = [r for r in records if "error" not in r]
    betas = np.array([r["true_beta"] for r in ok])
    bhats = np.array([r["beta_hat"] for r in ok])
    corr = float(np.corrcoef(betas, bhats)[0, 1]) if len(ok) >= 2 else float("nan")
    summary = {
        "runs": config.runs,
        "failures": failures,
        "pearson_correlation": corr,
        "mean_true_beta": float(betas.mean()) if len(ok) else float("nan"),
        "mean_beta_hat": float(bhats.mean()) if len(ok) else float("nan"),
    }
    return Report(config_echo(config), records, summary, time.perf_counter() - t0)


def run_rejection_study(config: ExperimentConfig) -> Report:
    """Per run: true beta and test p-value; summarize rejection fractions per beta bin."""
    t0 = time.perf_counter()
    records: list[dict] = []
    failures = 0
    for i in range(config.runs):
        rng = run_rng(config.seed, i)
        try:
            truth = genmodel.sample_ground_truth(config.d, config.ell, rng)
            ds = genmodel.generate_samples(
                truth, config.n, noise_sd=config.noise_sd or 0.0, rng=rng
            )
            res = cdtest.test_nonconfounding(
                ds.data, config.null_count, config.method, rng
            )
            records.append(
                {
                    "run": i,
                    "true_beta": ds.true_beta,
                    "t_observed": res.t_observed,
                    "p_value": res.p_value,
                }
            )
        except SpecbetaError as err:
            failures += 1
            records.append({"run": i, "error": str(err)})
            _check_failures(failures, i + 1)
    ok = [r for r in records if "error" not in r]
    betas = np.array([r["true_beta"] for r in ok])
    pvals = np.array([r["p_value"] for r in ok])
    bins = np.linspace(0.0, 1.0, REJECTION_BINS + 1)
    per_bin = []
    for k in range(REJECTION_BINS):
        mask = (betas >= bins[k]) & (
            (betas < bins[k + 1]) if k < REJECTION_BINS - 1 else (betas <= bins[k + 1])
        )
        per_bin.append(
            {
                "bin_low": float(bins[k]),
                "bin_high": float(bins[k + 1]),
                "count": int(mask.sum()),
                "rejection_at_0.10": float(np.mean(pvals[mask] <= 0.10))
                if mask.any()
                else float("nan"),
                "rejection_at_0.05": float(np.mean(pvals[mask] <= 0.05))
                if mask.any()
                else float("nan"),
            }
        )
    summary = {
        "runs": config.runs,
        "failures": failures,
        "bins": per_bin,
        "overall_rejection_at_alpha": float(np.mean(pvals <= config.alpha))
        if len(ok)
        else float("nan"),
        "alpha": config.alpha,
    }
    return Report(config_echo(config), records, summary, time.perf_counter() - t0)


def run_overfit_study(config: ExperimentConfig) -> Report:
    """Causal-only data at several sample sizes; histogram the test p-values.

    Small n makes the regression overfit and the test reject despite the
    absence of structural confounding.
    """
    t0 = time.perf_counter()
    noise_sd = 1.0 if config.noise_sd is None else config.noise_sd
    records: list[dict] = []
    failures = 0
    total = 0
    for n in config.sample_sizes:
        for i in range(config.runs):
            rng = run_rng(config.seed, n, i)
            total += 1
            try:
                ds = genmodel.causal_dataset(config.d, n, noise_sd=noise_sd, rng=rng)
                res = cdtest.test_nonconfounding(
                    ds.data, config.null_count, config.method, rng
                )
                records.append({"n": n, "run": i, "p_value": res.p_value})
            except SpecbetaError as err:
                failures += 1
                records.append({"n": n, "run": i, "error": str(err)})
                _check_failures(failures, total)
    per_n = []
    edges = np.linspace(0.0, 1.0, 11)
    for n in config.sample_sizes:
        pv = np.array(
            [r["p_value"] for r in records if r.get("n") == n and "error" not in r]
        )
        hist = np.histogram(pv, bins=edges)[0] if pv.size else np.zeros(10, dtype=int)
        per_n.append(
            {
                "n": n,
                "count": int(pv.size),
                "fraction_below_alpha": float(np.mean(pv <= config.alpha))
                if pv.size
                else float("nan"),
                "histogram": [int(h) for h in hist],
            }
        )
    summary = {
        "failures": failures,
        "alpha": config.alpha,
        "per_sample_size": per_n,
    }
    return Report(config_echo(config), records, summary, time.perf_counter() - t0)


def shuffle_target_analysis(
    matrix: NDArray[np.float64],
    config: ExperimentConfig,
    column_names: list[str] | None = None,
) -> Report:
    """Treat each column in turn as the target and estimate confounding strength.

    Emits one record per column, in column order, with the estimate and the
    non-confounding test p-value.  A vanishing cross-covariance is reported
    as a ``zero_signal`` flag rather than a number.
    """
    t0 = time.perf_counter()
    matrix = np.asarray(matrix, dtype=np.float64)
    ncols = matrix.shape[1]
    if ncols < 3:
        raise BadDimensionsError("shuffle-target needs at least 3 columns")
    names = column_names or [f"col{j}" for j in range(ncols)]
    if config.normalize:
        matrix = normalize_columns(matrix, names)
    records: list[dict] = []
    for j in range(ncols):
        rng = run_rng(config.seed, j)
        y = matrix[:, j]
        x = np.delete(matrix, j, axis=1)
        record: dict = {"column": j, "name": names[j]}
        try:
            data = DataMatrix(x=x, y=y)
            est = estimator.estimate_confounding(data)
            record.update(
                beta_hat=est.beta_hat,
                theta_hat=est.theta_hat,
                boundary=est.boundary,
            )
            res = cdtest.test_nonconfounding(data, config.null_count, config.method, rng)
            record.update(t_observed=res.t_observed, p_value=res.p_value)
        except ZeroSignalError:
            record["zero_signal"] = True
        except SpecbetaError as err:
            record["error"] = str(err)
        records.append(record)
    ok = [r for r in records if "beta_hat" in r]
    summary = {
        "columns": ncols,
        "beta_hats": [r.get("beta_hat") for r in records],
        "estimated": len(ok),
    }
    return Report(config_echo(config), records, summary, time.perf_counter() - t0)


def _check_failures(failures: int, attempted: int) -> None:
    if failures > MAX_FAILURE_FRACTION * attempted:
        raise RuntimeError(
            f"{failures} of {attempted} runs failed (> {MAX_FAILURE_FRACTION:.0%})"
        )


# ---------------------------------------------------------------------------
# Report emission


def emit_report(report: Report, path: str | Path, fmt: str = "json") -> None:
    """Write a report to disk as JSON (single object) or CSV (+ summary sidecar).

    Floats are serialized with 17 significant digits, so re-parsing
    reproduces them exactly and identical reports yield identical bytes.
    """
    path = Path(path)
    if fmt == "json":
        payload = {
            "config": report.config,
            "records": report.records,
            "summary": report.summary,
        }
        path.write_text(stable_json(payload) + "\n")
    elif fmt == "csv":
        _write_records_csv(report.records, path)
        sidecar = path.with_name(
            path.stem + ".summary.csv" if path.suffix == ".csv" else path.name + ".summary.csv"
        )
        _write_summary_csv(report.summary, sidecar)
    else:
        raise ValueError(f"unknown format {fmt!r}")


def stable_json(obj) -> str:
    """Deterministic JSON with 17-significant-digit floats."""
    if isinstance(obj, dict):
        items = ",".join(f"{json.dumps(str(k))}:{stable_json(v)}" for k, v in obj.items())
        return "{" + items + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(stable_json(v) for v in obj) + "]"
    if isinstance(obj, (bool, np.bool_)) or obj is None:
        return json.dumps(bool(obj) if obj is not None else None)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if x != x or x in (float("inf"), float("-inf")):
            return json.dumps(str(x))
        return format(x, ".17g")
    return json.dumps(obj)


def _fmt_cell(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def _write_records_csv(records: list[dict], path: Path) -> None:
    fields: list[str] = []
    for rec in records:
        for k in rec:
            if k not in fields:
                fields.append(k)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(fields)
        for rec in records:
            writer.writerow([_fmt_cell(rec[k]) if k in rec else "" for k in fields])


def _write_summary_csv(summary: dict, path: Path) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["key", "value"])
        for k, v in summary.items():
            if isinstance(v, (list, dict)):
                writer.writerow([k, stable_json(v)])
            else:
                writer.writerow([k, _fmt_cell(v)])
