"""Command-line interface.

Every command is deterministic given its flags and seed, writes its
artifacts under --out and exits 0 on success; failures emit a
machine-readable JSON object on stderr and a stable nonzero exit code.
All flags can also be set through environment variables prefixed with
GRACEREG (for example GRACEREG_FIT_LAMBDA1).
"""

from __future__ import annotations

import functools
import json
import os
import sys
from pathlib import Path

import click
import numpy as np

from . import io as gio
from . import svg
from .adaptive import fit_agrace
from .data import Dataset, standardize
from .diagnostics import TheoryInputs, theory_report
from .graph import build_graph, laplacian, read_edge_list, write_edge_list
from .path import (
    DEFAULT_LAMBDA2_GRID,
    fit_path,
    fit_path_lambda1,
    kfold_cv,
    lambda1_grid,
    lambda_grid,
)
from .simbench import SimulationSpec, run_benchmark, simulate_dataset
from .solver import PenaltyConfig, fit_grace

EXIT_CODES = {
    "invalid_input": 2,
    "missing_file": 3,
    "numeric_error": 4,
    "internal_error": 5,
}


def _fail(code: str, message: str):
    payload = {"error": {"code": code, "message": message}}
    click.echo(json.dumps(payload), err=True)
    sys.exit(EXIT_CODES[code])


def guarded(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except FileNotFoundError as exc:
            _fail("missing_file", str(exc))
        except (ValueError, click.UsageError) as exc:
            _fail("invalid_input", str(exc))
        except FloatingPointError as exc:
            _fail("numeric_error", str(exc))
        except Exception as exc:  # pragma: no cover - defensive
            _fail("internal_error", f"{type(exc).__name__}: {exc}")

    return wrapper


def _outdir(out) -> Path:
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _load(design, response, graph):
    ds = gio.parse_design(design, response)
    g = read_edge_list(graph, ds.p) if graph else build_graph([], ds.p)
    return ds, g


def _penalty(lambda1, lambda2, lam, alpha, n) -> PenaltyConfig:
    lam_form = lam is not None or alpha is not None
    raw_form = lambda1 is not None or lambda2 is not None
    if lam_form and raw_form:
        raise ValueError("give either --lambda1/--lambda2 or --lambda/--alpha, not both")
    if lam_form:
        if lam is None or alpha is None:
            raise ValueError("--lambda and --alpha must be given together")
        return PenaltyConfig.from_lam_alpha(lam, alpha, n)
    if not raw_form:
        raise ValueError("no penalty given; use --lambda1/--lambda2 or --lambda/--alpha")
    return PenaltyConfig(lambda1=lambda1 or 0.0, lambda2=lambda2 or 0.0)


def _csv_floats(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise ValueError(f"expected a comma-separated list of numbers, got {text!r}")


def _csv_ints(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise ValueError(f"expected a comma-separated list of integers, got {text!r}")


@click.group(context_settings={"auto_envvar_prefix": "GRACEREG"})
def main():
    """Graph-constrained sparse regression toolkit."""


in_opts = [
    click.option("--design", required=True, type=click.Path(), help="design matrix CSV"),
    click.option("--response", required=True, type=click.Path(), help="response CSV"),
    click.option("--graph", default=None, type=click.Path(), help="edge-list TSV"),
]


def add_options(opts):
    def deco(fn):
        for opt in reversed(opts):
            fn = opt(fn)
        return fn

    return deco


@main.command()
@add_options(in_opts)
@click.option("--lambda1", type=float, default=None)
@click.option("--lambda2", type=float, default=None)
@click.option("--lambda", "lam", type=float, default=None, help="per-observation penalty")
@click.option("--alpha", type=float, default=None, help="sparsity mixing weight")
@click.option("--adaptive", is_flag=True, help="sign-adjusted smoothness penalty")
@click.option("--tol", type=float, default=1e-7)
@click.option("--max-sweeps", type=int, default=10000)
@click.option("--seed", type=int, default=0)
@click.option("--out", default=".", type=click.Path())
@guarded
def fit(design, response, graph, lambda1, lambda2, lam, alpha, adaptive, tol, max_sweeps, seed, out):
    """Single penalized fit; writes fit.json and coefficients.csv."""
    ds, g = _load(design, response, graph)
    cfg = _penalty(lambda1, lambda2, lam, alpha, ds.n)
    std = standardize(ds)
    if adaptive:
        result = fit_agrace(std, g, cfg, tol=tol, max_sweeps=max_sweeps, seed=seed)
    else:
        result = fit_grace(std, laplacian(g), cfg, tol=tol, max_sweeps=max_sweeps)
    outdir = _outdir(out)
    gio.write_json(gio.fit_to_dict(result, ds.n, ds.names), outdir / "fit.json")
    gio.write_coefficients_csv(result, ds.names, outdir / "coefficients.csv")
    click.echo(
        f"fit: {result.active_set.size} active of {ds.p}, "
        f"objective {result.objective:.6g}, converged={result.converged}"
    )


@main.command()
@add_options(in_opts)
@click.option("--alpha", type=float, default=None, help="fixed mixing weight (lambda path)")
@click.option("--lambda2", type=float, default=None, help="fixed smoothness weight (lambda1 path)")
@click.option("--eps", type=float, default=1e-3, show_default=True)
@click.option("--nlambda", type=int, default=100, show_default=True)
@click.option("--tol", type=float, default=1e-7)
@click.option("--out", default=".", type=click.Path())
@guarded
def path(design, response, graph, alpha, lambda2, eps, nlambda, tol, out):
    """Warm-started regularization path; writes path.csv."""
    ds, g = _load(design, response, graph)
    std = standardize(ds)
    L = laplacian(g)
    if (alpha is None) == (lambda2 is None):
        raise ValueError("give exactly one of --alpha (lambda path) or --lambda2 (lambda1 path)")
    if alpha is not None:
        grid = lambda_grid(std, alpha, epsilon=eps, K=nlambda)
        result = fit_path(std, L, alpha, grid, tol=tol)
    else:
        grid = lambda1_grid(std, epsilon=eps, K=nlambda)
        result = fit_path_lambda1(std, L, lambda2, grid, tol=tol)
    outdir = _outdir(out)
    gio.write_path_csv(result, ds.names, outdir / "path.csv")
    click.echo(f"path: {result.n_points} points, final active {result.active_counts[-1]}")


@main.command()
@add_options(in_opts)
@click.option("--lambda2-grid", default="0.1,1,10,100,1000", show_default=True)
@click.option("--policy", type=click.Choice(["lambda1", "alpha"]), default="lambda1")
@click.option("--alpha-grid", default="0.1,0.5,0.9", show_default=True)
@click.option("--folds", type=int, default=5, show_default=True)
@click.option("--eps", type=float, default=1e-3, show_default=True)
@click.option("--nlambda", type=int, default=100, show_default=True)
@click.option("--seed", type=int, default=0)
@click.option("--tol", type=float, default=1e-7)
@click.option("--paper-standardize", is_flag=True, help="standardize once globally")
@click.option("--threads", type=int, default=lambda: os.cpu_count() or 1)
@click.option("--out", default=".", type=click.Path())
@guarded
def cv(design, response, graph, lambda2_grid, policy, alpha_grid, folds, eps, nlambda,
       seed, tol, paper_standardize, threads, out):
    """K-fold cross-validation; writes cv.csv and cv.json."""
    ds, g = _load(design, response, graph)
    result = kfold_cv(
        ds,
        laplacian(g),
        lambda2_grid=_csv_floats(lambda2_grid),
        policy=policy,
        k=folds,
        seed=seed,
        alpha_grid=_csv_floats(alpha_grid),
        epsilon=eps,
        K=nlambda,
        tol=tol,
        paper_standardize=paper_standardize,
        n_jobs=threads,
    )
    outdir = _outdir(out)
    gio.write_cv_csv(result, outdir / "cv.csv")
    gio.write_json(gio.cv_to_dict(result), outdir / "cv.json")
    click.echo(f"cv: best {result.best} mean error {result.cv_mean[result.best_index]:.6g}")


sim_opts = [
    click.option("--model", type=click.IntRange(1, 2), default=1, show_default=True),
    click.option("--cor", type=float, default=0.5, show_default=True),
    click.option("--modules", type=int, default=200, show_default=True),
    click.option("--genes-per-tf", type=int, default=10, show_default=True),
    click.option("--active-modules", type=int, default=4, show_default=True),
    click.option("--n-train", type=int, default=200, show_default=True),
    click.option("--n-valid", type=int, default=200, show_default=True),
    click.option("--n-test", type=int, default=200, show_default=True),
    click.option("--seed", type=int, default=0, show_default=True),
]


def _spec(model, cor, modules, genes_per_tf, active_modules, n_train, n_valid, n_test, seed):
    return SimulationSpec(
        n_modules=modules,
        genes_per_tf=genes_per_tf,
        n_active_modules=active_modules,
        correlation=cor,
        model=model,
        n_train=n_train,
        n_valid=n_valid,
        n_test=n_test,
        seed=seed,
    )


@main.command()
@add_options(sim_opts)
@click.option("--out", default=".", type=click.Path())
@guarded
def simulate(model, cor, modules, genes_per_tf, active_modules, n_train, n_valid, n_test, seed, out):
    """Draw one simulated scenario; writes datasets, graph and truth."""
    spec = _spec(model, cor, modules, genes_per_tf, active_modules, n_train, n_valid, n_test, seed)
    train, valid, test, truth = simulate_dataset(spec, seed)
    outdir = _outdir(out)
    for name, ds in (("train", train), ("valid", valid), ("test", test)):
        gio.write_design_csv(ds.X, ds.names, outdir / f"{name}_x.csv")
        gio.write_response_csv(ds.y, outdir / f"{name}_y.csv")
    from .simbench import build_module_graph

    write_edge_list(build_module_graph(spec), outdir / "graph.tsv")
    gio.write_truth_json(truth, outdir / "truth.json")
    click.echo(f"simulate: p={spec.p}, q={truth.support.size}, sigma={truth.sigma:.6g}")


@main.command()
@add_options(sim_opts)
@click.option("--reps", type=int, default=20, show_default=True)
@click.option("--methods", default="grace,agrace,enet,lasso", show_default=True)
@click.option("--nlambda", type=int, default=100, show_default=True)
@click.option("--eps", type=float, default=1e-3, show_default=True)
@click.option("--tol", type=float, default=1e-5, show_default=True)
@click.option("--threads", type=int, default=lambda: os.cpu_count() or 1)
@click.option("--svg", "make_svg", is_flag=True, help="also plot mean MSE per method")
@click.option("--out", default=".", type=click.Path())
@guarded
def bench(model, cor, modules, genes_per_tf, active_modules, n_train, n_valid, n_test,
          seed, reps, methods, nlambda, eps, tol, threads, make_svg, out):
    """Replicated method comparison; writes bench.csv (and bench.svg)."""
    spec = _spec(model, cor, modules, genes_per_tf, active_modules, n_train, n_valid, n_test, seed)
    method_list = [m.strip() for m in methods.split(",") if m.strip()]
    table = run_benchmark(
        spec, methods=method_list, replicates=reps, seed=seed,
        K=nlambda, epsilon=eps, tol=tol, n_jobs=threads,
    )
    outdir = _outdir(out)
    gio.write_bench_csv(table, outdir / "bench.csv")
    if make_svg:
        series = [
            (m, list(range(1, reps + 1)), list(table.replicate_mse[m]))
            for m in method_list
        ]
        svg.line_plot(
            series, outdir / "bench.svg",
            title=f"Prediction MSE by replicate (model {model}, cor {cor})",
            xlabel="replicate", ylabel="test MSE",
        )
    for row in table.rows:
        click.echo(f"{row.method}: {row.mean_mse:.2f} ({row.se_mse:.2f})")


@main.command()
@add_options(sim_opts)
@click.option("--reps", type=int, default=20, show_default=True)
@click.option("--methods", default="grace,agrace,enet,lasso", show_default=True)
@click.option("--nlambda", type=int, default=100, show_default=True)
@click.option("--eps", type=float, default=1e-3, show_default=True)
@click.option("--tol", type=float, default=1e-5, show_default=True)
@click.option("--threads", type=int, default=lambda: os.cpu_count() or 1)
@click.option("--svg", "make_svg", is_flag=True, help="also plot the mean ROC curves")
@click.option("--out", default=".", type=click.Path())
@guarded
def roc(model, cor, modules, genes_per_tf, active_modules, n_train, n_valid, n_test,
        seed, reps, methods, nlambda, eps, tol, threads, make_svg, out):
    """Selection ROC curves against the true support; writes roc.csv, roc.json."""
    spec = _spec(model, cor, modules, genes_per_tf, active_modules, n_train, n_valid, n_test, seed)
    method_list = [m.strip() for m in methods.split(",") if m.strip()]
    table = run_benchmark(
        spec, methods=method_list, replicates=reps, seed=seed,
        K=nlambda, epsilon=eps, tol=tol, n_jobs=threads, collect_roc=True,
    )
    curves = table.roc_curves
    outdir = _outdir(out)
    gio.write_roc_csv(curves, outdir / "roc.csv")
    gio.write_json(
        {
            "mean_auc": {m: float(np.nanmean(table.replicate_auc[m])) for m in method_list},
            "replicate_auc": {m: table.replicate_auc[m].tolist() for m in method_list},
            "first_replicate_auc": {m: curves[m][1] for m in method_list},
        },
        outdir / "roc.json",
    )
    if make_svg:
        series = [(m, list(curves[m][0][:, 0]), list(curves[m][0][:, 1])) for m in method_list]
        svg.line_plot(
            series, outdir / "roc.svg",
            title=f"Selection ROC (model {model}, cor {cor})",
            xlabel="false positive rate", ylabel="true positive rate",
        )
    for m in method_list:
        click.echo(f"{m}: mean AUC {np.nanmean(table.replicate_auc[m]):.4f}")


@main.command()
@click.option("--design", required=True, type=click.Path())
@click.option("--response", default=None, type=click.Path())
@click.option("--graph", default=None, type=click.Path())
@click.option("--support", required=True, help="comma-separated true-support indices")
@click.option("--beta1", required=True, help="comma-separated true nonzero coefficients")
@click.option("--sigma", type=float, required=True)
@click.option("--lambda1", type=float, required=True)
@click.option("--lambda2", type=float, required=True)
@click.option("--mc-reps", type=int, default=0, show_default=True)
@click.option("--seed", type=int, default=0)
@click.option("--out", default=".", type=click.Path())
@guarded
def diagnose(design, response, graph, support, beta1, sigma, lambda1, lambda2, mc_reps, seed, out):
    """Theory diagnostics at fixed n; writes theory.json."""
    X, names = gio.parse_matrix_csv(design)
    y = gio.parse_response_csv(response) if response else np.zeros(X.shape[0])
    ds = standardize(Dataset(X=X, y=y, names=names))
    g = read_edge_list(graph, ds.p) if graph else build_graph([], ds.p)
    inp = TheoryInputs.from_design(
        ds.X,
        laplacian(g),
        support=_csv_ints(support),
        beta1=_csv_floats(beta1),
        sigma=sigma,
        lambda1=lambda1,
        lambda2=lambda2,
        w_max=g.max_weight(),
    )
    report = theory_report(inp, mc_reps=mc_reps, mc_seed=seed)
    outdir = _outdir(out)
    gio.write_json(report.to_dict(), outdir / "theory.json")
    click.echo(f"diagnose: margin {report.gcic_margin:.4f}, bound {report.bound:.6g}")


if __name__ == "__main__":
    main()
