"""File ingestion and result serialization.

Design matrices are CSV with a header row of covariate names and one
numeric row per sample; responses are a single CSV column (optional
header).  Numeric CSV output uses 17 significant digits and JSON uses
Python's shortest-round-trip float form, so every written value parses
back to the identical double.
"""

from __future__ import annotations

import csv
import json

import numpy as np

from .data import Dataset
from .path import CvResult, PathResult
from .simbench import BenchmarkTable, SimulationTruth
from .solver import FitResult, reparameterize

__all__ = [
    "parse_design",
    "parse_matrix_csv",
    "parse_response_csv",
    "write_design_csv",
    "write_response_csv",
    "write_json",
    "fit_to_dict",
    "write_coefficients_csv",
    "write_path_csv",
    "write_cv_csv",
    "cv_to_dict",
    "write_bench_csv",
    "write_roc_csv",
    "write_truth_json",
]


def _fmt(x) -> str:
    return format(float(x), ".17g")


def parse_matrix_csv(path) -> tuple[np.ndarray, list[str]]:
    """Numeric matrix plus column names from a headed CSV file."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file") from None
        names = [h.strip() for h in header]
        p = len(names)
        rows = []
        for i, row in enumerate(reader, start=2):
            if len(row) != p:
                raise ValueError(
                    f"{path}: line {i}: expected {p} fields, found {len(row)}"
                )
            vals = np.empty(p)
            for j, cell in enumerate(row):
                try:
                    vals[j] = float(cell)
                except ValueError:
                    raise ValueError(
                        f"{path}: line {i}, column {j + 1} ({names[j]}): "
                        f"non-numeric value {cell!r}"
                    ) from None
            rows.append(vals)
    if not rows:
        raise ValueError(f"{path}: no samples (header only)")
    return np.vstack(rows), names


def parse_response_csv(path) -> np.ndarray:
    """Single numeric column; a leading non-numeric line is taken as a header."""
    values = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        for i, row in enumerate(reader, start=1):
            if not row:
                continue
            if len(row) != 1:
                raise ValueError(f"{path}: line {i}: expected a single column")
            cell = row[0].strip()
            try:
                values.append(float(cell))
            except ValueError:
                if i == 1:
                    continue  # header
                raise ValueError(
                    f"{path}: line {i}: non-numeric value {cell!r}"
                ) from None
    if not values:
        raise ValueError(f"{path}: no response values")
    return np.asarray(values)


def parse_design(design_path, response_path) -> Dataset:
    """Raw dataset from a design CSV and a single-column response CSV."""
    X, names = parse_matrix_csv(design_path)
    y = parse_response_csv(response_path)
    if y.shape[0] != X.shape[0]:
        raise ValueError(
            f"{design_path} has {X.shape[0]} samples but {response_path} has {y.shape[0]}"
        )
    return Dataset(X=X, y=y, names=names)


def write_design_csv(X: np.ndarray, names, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(names) + "\n")
        for row in X:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def write_response_csv(y: np.ndarray, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("y\n")
        for v in y:
            fh.write(_fmt(v) + "\n")


class _NumpyEncoder(json.JSONEncoder):
    def default(self, o):
        if isinstance(o, np.integer):
            return int(o)
        if isinstance(o, np.floating):
            return float(o)
        if isinstance(o, np.ndarray):
            return o.tolist()
        return super().default(o)


def write_json(obj, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True, cls=_NumpyEncoder)
        fh.write("\n")


def fit_to_dict(fit: FitResult, n: int, names=None) -> dict:
    """JSON-ready summary of a fit; echoes both penalty parameterizations."""
    if fit.lambda1 + fit.lambda2 > 0:
        lam, alpha = reparameterize(fit.lambda1, fit.lambda2, n)
    else:
        lam, alpha = 0.0, None
    out = {
        "lambda1": fit.lambda1,
        "lambda2": fit.lambda2,
        "lambda": lam,
        "alpha": alpha,
        "intercept": fit.intercept,
        "objective": fit.objective,
        "kkt_residual": fit.kkt_residual,
        "iterations": fit.iterations,
        "converged": fit.converged,
        "active_set": fit.active_set.tolist(),
        "beta": fit.beta.tolist(),
        "beta_original": fit.beta_original.tolist(),
    }
    if names is not None:
        out["names"] = list(names)
    if fit.signs is not None:
        out["signs"] = fit.signs.tolist()
    return out


def write_coefficients_csv(fit: FitResult, names, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("name,beta_standardized,beta_original\n")
        fh.write(f"(intercept),0,{_fmt(fit.intercept)}\n")
        for name, bs, bo in zip(names, fit.beta, fit.beta_original):
            fh.write(f"{name},{_fmt(bs)},{_fmt(bo)}\n")


def write_path_csv(path_result: PathResult, names, path) -> None:
    swept = "lambda" if path_result.mode == "lambda" else "lambda1"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        head = ["index", swept, "active_count", "objective", "converged", "intercept"]
        fh.write(",".join(head + list(names)) + "\n")
        for k in range(path_result.n_points):
            row = [
                str(k),
                _fmt(path_result.lambdas[k]),
                str(int(path_result.active_counts[k])),
                _fmt(path_result.objectives[k]),
                str(bool(path_result.converged[k])).lower(),
                _fmt(path_result.intercepts[k]),
            ]
            row.extend(_fmt(v) for v in path_result.betas_original[k])
            fh.write(",".join(row) + "\n")


def write_cv_csv(cv: CvResult, path) -> None:
    outer, inner = ("lambda2", "lambda1") if cv.policy == "lambda1" else ("alpha", "lambda")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{outer},{inner},mean_error,se\n")
        for (o, i), m, s in zip(cv.grid, cv.cv_mean, cv.cv_se):
            fh.write(f"{_fmt(o)},{_fmt(i)},{_fmt(m)},{_fmt(s)}\n")


def cv_to_dict(cv: CvResult) -> dict:
    outer, inner = ("lambda2", "lambda1") if cv.policy == "lambda1" else ("alpha", "lambda")
    return {
        "policy": cv.policy,
        "folds": cv.k,
        "seed": cv.seed,
        "best": {outer: cv.best[0], inner: cv.best[1]},
        "best_mean_error": float(cv.cv_mean[cv.best_index]),
        "best_se": float(cv.cv_se[cv.best_index]),
        "best_fold_errors": cv.fold_errors[cv.best_index].tolist(),
    }


def write_bench_csv(table: BenchmarkTable, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("method,model,correlation,mean_mse,se,replicates\n")
        for row in table.rows:
            fh.write(
                f"{row.method},{row.model},{_fmt(row.correlation)},"
                f"{_fmt(row.mean_mse)},{_fmt(row.se_mse)},{row.n_replicates}\n"
            )


def write_roc_csv(curves: dict, path) -> None:
    """curves maps method name to (points, auc) from roc_curve."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("method,fpr,tpr,lambda\n")
        for method, (points, _auc) in curves.items():
            for fpr, tpr, lam in points:
                fh.write(f"{method},{_fmt(fpr)},{_fmt(tpr)},{_fmt(lam)}\n")


def write_truth_json(truth: SimulationTruth, path) -> None:
    write_json(
        {
            "beta": truth.beta.tolist(),
            "support": truth.support.tolist(),
            "sigma": truth.sigma,
        },
        path,
    )
