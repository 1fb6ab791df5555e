"""Regulatory-module simulation designs and the method comparison harness.

The simulated covariate graph consists of unconnected star modules, one
hub (a transcription factor) wired to a fixed number of regulated genes.
A handful of modules carry signal; gene expressions are drawn
conditionally on their hub with a chosen correlation.  The harness fits
Grace, adaptive Grace, elastic net and Lasso on a training sample, picks
tuning weights on a validation sample and scores prediction MSE on a test
sample, aggregating over replicates; it can also trace ROC curves of the
selection path against the true support.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .adaptive import fit_agrace
from .data import Dataset, standardize
from .graph import LaplacianMatrix, WeightedGraph, build_graph, laplacian, signed_laplacian
from .path import PathResult, fit_path_lambda1, lambda1_grid, prediction_mse
from .solver import PenaltyConfig

__all__ = [
    "SimulationSpec",
    "SimulationTruth",
    "BenchmarkTable",
    "build_module_graph",
    "model_coefficients",
    "simulate_dataset",
    "run_benchmark",
    "roc_curve",
]

METHODS = ("grace", "agrace", "enet", "lasso")
TF_COEF_CYCLE = (2.0, -2.0, 4.0, -4.0)
DEFAULT_LAMBDA2_GRID = (0.1, 1.0, 10.0, 100.0, 1000.0)


@dataclass
class SimulationSpec:
    """Design of one simulation scenario."""

    n_modules: int = 200
    genes_per_tf: int = 10
    n_active_modules: int = 4
    correlation: float = 0.5
    model: int = 1
    sign_flips_per_module: int = 3
    n_train: int = 200
    n_valid: int = 200
    n_test: int = 200
    seed: int = 0
    noiseless: bool = False

    def __post_init__(self):
        if self.model not in (1, 2):
            raise ValueError(f"model must be 1 or 2, got {self.model}")
        if not -1.0 < self.correlation < 1.0:
            raise ValueError(f"correlation must lie in (-1, 1), got {self.correlation}")
        if self.n_active_modules > self.n_modules:
            raise ValueError("more active modules than modules")
        if self.sign_flips_per_module > self.genes_per_tf:
            raise ValueError("cannot flip more genes than a module contains")

    @property
    def module_size(self) -> int:
        return 1 + self.genes_per_tf

    @property
    def p(self) -> int:
        return self.n_modules * self.module_size

    @property
    def q(self) -> int:
        return self.n_active_modules * self.module_size

    def names(self) -> list[str]:
        out = []
        for m in range(self.n_modules):
            out.append(f"tf{m}")
            out.extend(f"tf{m}_g{j}" for j in range(self.genes_per_tf))
        return out


@dataclass
class SimulationTruth:
    """Ground truth attached to a simulated draw."""

    beta: np.ndarray
    support: np.ndarray
    sigma: float


def build_module_graph(spec: SimulationSpec) -> WeightedGraph:
    """Star per module: the hub joined to each of its genes by a unit edge."""
    edges = []
    for m in range(spec.n_modules):
        hub = m * spec.module_size
        edges.extend((hub, hub + 1 + j, 1.0) for j in range(spec.genes_per_tf))
    return build_graph(edges, spec.p)


def model_coefficients(spec: SimulationSpec) -> np.ndarray:
    """True coefficient vector for the scenario.

    Active module hubs take magnitudes cycling through (2, -2, 4, -4) and
    each regulated gene inherits hub/sqrt(genes_per_tf).  Under model 2
    the first ``sign_flips_per_module`` genes of every active module flip
    sign, leaving all magnitudes unchanged.
    """
    beta = np.zeros(spec.p)
    root = np.sqrt(spec.genes_per_tf)
    for a in range(spec.n_active_modules):
        hub_coef = TF_COEF_CYCLE[a % len(TF_COEF_CYCLE)]
        base = a * spec.module_size
        beta[base] = hub_coef
        gene_coef = hub_coef / root
        for j in range(spec.genes_per_tf):
            flip = spec.model == 2 and j < spec.sign_flips_per_module
            beta[base + 1 + j] = -gene_coef if flip else gene_coef
    return beta


def noise_sd(spec: SimulationSpec) -> float:
    """Noise standard deviation, sigma^2 = sum(beta^2) / 4."""
    if spec.noiseless:
        return 0.0
    beta = model_coefficients(spec)
    return float(np.sqrt(beta @ beta / 4.0))


def simulate_dataset(
    spec: SimulationSpec, seed: int | None = None
) -> tuple[Dataset, Dataset, Dataset, SimulationTruth]:
    """Draw (train, valid, test) raw datasets and the underlying truth.

    Hubs are standard normal; each gene is r * hub + sqrt(1 - r^2) * z
    with independent z, so every column has unit variance in population
    and genes correlate r with their hub (r^2 with their siblings).
    Bitwise reproducible for a given (spec, seed).
    """
    if seed is None:
        seed = spec.seed
    rng = np.random.default_rng(seed)
    n_total = spec.n_train + spec.n_valid + spec.n_test
    M, g = spec.n_modules, spec.genes_per_tf
    r = spec.correlation
    hub_vals = rng.standard_normal((n_total, M))
    gene_noise = rng.standard_normal((n_total, M, g))
    X = np.empty((n_total, spec.p))
    mix = np.sqrt(1.0 - r * r)
    for m in range(M):
        base = m * spec.module_size
        X[:, base] = hub_vals[:, m]
        X[:, base + 1 : base + 1 + g] = r * hub_vals[:, m][:, None] + mix * gene_noise[:, m]
    beta = model_coefficients(spec)
    sigma = noise_sd(spec)
    y = X @ beta
    if sigma > 0:
        y = y + sigma * rng.standard_normal(n_total)
    names = spec.names()
    bounds = (spec.n_train, spec.n_train + spec.n_valid)
    truth = SimulationTruth(beta=beta, support=np.flatnonzero(beta), sigma=sigma)
    train = Dataset(X=X[: bounds[0]], y=y[: bounds[0]], names=names)
    valid = Dataset(X=X[bounds[0] : bounds[1]], y=y[bounds[0] : bounds[1]], names=names)
    test = Dataset(X=X[bounds[1] :], y=y[bounds[1] :], names=names)
    return train, valid, test, truth


def roc_curve(path: PathResult, truth, p: int | None = None) -> tuple[np.ndarray, float]:
    """Selection ROC of a path against the true support.

    Each path point contributes (FPR, TPR) of its active set.  Points are
    returned sorted by FPR as rows (fpr, tpr, swept penalty value); the
    AUC integrates the monotone upper envelope by the trapezoid rule,
    carried flat out to FPR = 1.
    """
    truth = np.asarray(truth, dtype=np.int64)
    if truth.size == 0:
        raise ValueError("the true support must be nonempty")
    if path.n_points == 0:
        raise ValueError("the path is empty")
    if p is None:
        p = path.betas.shape[1]
    q = truth.size
    if q >= p:
        raise ValueError("the true support must leave some irrelevant covariates")
    truth_mask = np.zeros(p, dtype=bool)
    truth_mask[truth] = True
    tpr = np.empty(path.n_points)
    fpr = np.empty(path.n_points)
    for k in range(path.n_points):
        active = path.betas[k] != 0
        tpr[k] = np.count_nonzero(active & truth_mask) / q
        fpr[k] = np.count_nonzero(active & ~truth_mask) / (p - q)
    order = np.lexsort((tpr, fpr))
    points = np.column_stack([fpr[order], tpr[order], path.lambdas[order]])

    xs: list[float] = []
    ys: list[float] = []
    run = 0.0
    for k in order:
        run = max(run, tpr[k])
        if xs and xs[-1] == fpr[k]:
            ys[-1] = run
        else:
            xs.append(float(fpr[k]))
            ys.append(run)
    if xs[0] > 0.0:
        xs.insert(0, 0.0)
        ys.insert(0, 0.0)
    if xs[-1] < 1.0:
        xs.append(1.0)
        ys.append(run)
    auc = float(np.trapezoid(ys, xs))
    return points, auc


@dataclass
class BenchmarkRow:
    method: str
    model: int
    correlation: float
    mean_mse: float
    se_mse: float
    n_replicates: int


@dataclass
class BenchmarkTable:
    """Aggregated benchmark results plus per-replicate detail."""

    rows: list[BenchmarkRow]
    replicate_mse: dict[str, np.ndarray]
    best_pairs: dict[str, list[tuple[float, float]]]
    replicate_auc: dict[str, np.ndarray] = field(default_factory=dict)
    roc_curves: dict[str, tuple[np.ndarray, float]] = field(default_factory=dict)
    failures: list[str] = field(default_factory=list)


def _validation_search(
    train: Dataset,
    Xv_std: np.ndarray,
    yv: np.ndarray,
    y_center: float,
    L: LaplacianMatrix,
    lambda2_values,
    l1_grid: np.ndarray,
    tol: float,
    max_sweeps: int,
    patience: int | None,
):
    """Best (lambda2, lambda1) by held-out MSE over warm-started paths.

    Returns (best_lambda2, best_lambda1, best_mse, best_beta_std,
    best_beta_orig, best_intercept, paths) where paths maps lambda2 to the
    fitted PathResult (possibly truncated by the patience rule).
    """
    best = None
    paths: dict[float, PathResult] = {}
    for lam2 in lambda2_values:
        state = {"best_k": 0, "best_mse": np.inf}

        def track(k: int, fit) -> bool:
            pred = y_center + Xv_std @ fit.beta
            mse = prediction_mse(pred, yv)
            if mse < state["best_mse"]:
                state["best_mse"] = mse
                state["best_k"] = k
            return patience is not None and (k - state["best_k"]) >= patience

        path = fit_path_lambda1(
            train, L, lam2, l1_grid, tol=tol, max_sweeps=max_sweeps, stop_after=track
        )
        paths[lam2] = path
        k = state["best_k"]
        cand = (
            state["best_mse"],
            -float(l1_grid[k]),
            -lam2,
            k,
            lam2,
        )
        if best is None or cand < best:
            best = cand
    mse, _, _, k, lam2 = best
    path = paths[lam2]
    return {
        "lambda2": lam2,
        "lambda1": float(path.lambdas[k]),
        "valid_mse": mse,
        "beta": path.betas[k],
        "beta_original": path.betas_original[k],
        "intercept": float(path.intercepts[k]),
        "paths": paths,
        "best_k": k,
    }


def _ridge_dual_beta(train: Dataset, gram_n: np.ndarray, lam2: float) -> np.ndarray:
    """Minimizer of ||y - X b||^2 + lam2 ||b||^2 via the n x n dual system."""
    w = np.linalg.solve(gram_n + lam2 * np.eye(train.n), train.y)
    return train.X.T @ w


def _one_replicate(
    spec: SimulationSpec,
    rep_seed: int,
    methods,
    graph: WeightedGraph,
    L: LaplacianMatrix,
    lambda2_grid,
    K: int,
    epsilon: float,
    tol: float,
    max_sweeps: int,
    patience: int | None,
    collect_roc: bool,
):
    train_raw, valid_raw, test_raw, truth = simulate_dataset(spec, rep_seed)
    train = standardize(train_raw)
    Xv_std = (valid_raw.X - train.x_center) / train.x_scale
    l1_grid = lambda1_grid(train, epsilon=epsilon, K=K)
    zeros_L = LaplacianMatrix(
        p=spec.p,
        diag=np.zeros(spec.p),
        indptr=np.zeros(spec.p + 1, dtype=np.int64),
        indices=np.zeros(0, dtype=np.int64),
        data=np.zeros(0, dtype=np.float64),
    )
    ident = LaplacianMatrix.identity(spec.p)

    mses: dict[str, float] = {}
    pairs: dict[str, tuple[float, float]] = {}
    aucs: dict[str, float] = {}
    curves: dict[str, tuple[np.ndarray, float]] = {}
    enet_sel = None

    def evaluate(sel, method):
        pred = sel["intercept"] + test_raw.X @ sel["beta_original"]
        mses[method] = prediction_mse(pred, test_raw.y)
        pairs[method] = (sel["lambda2"], sel["lambda1"])
        if collect_roc:
            curves[method] = roc_curve(sel["paths"][sel["lambda2"]], truth.support, spec.p)
            aucs[method] = curves[method][1]

    def search(Lmat, lambda2_values):
        return _validation_search(
            train, Xv_std, valid_raw.y, train.y_center, Lmat, lambda2_values,
            l1_grid, tol, max_sweeps, None if collect_roc else patience,
        )

    want_enet = "enet" in methods or "agrace" in methods
    if "lasso" in methods:
        sel = search(zeros_L, (0.0,))
        evaluate(sel, "lasso")
    if want_enet:
        enet_sel = search(ident, lambda2_grid)
        if "enet" in methods:
            evaluate(enet_sel, "enet")
    if "grace" in methods:
        sel = search(L, lambda2_grid)
        evaluate(sel, "grace")
    if "agrace" in methods:
        # two preliminary-sign candidates, resolved on the validation data:
        # the tuned elastic net and a dense ridge (no zero signs, so every
        # edge keeps a smoothing direction)
        gram_n = train.X @ train.X.T
        best_ridge = None
        for lam2 in lambda2_grid:
            b = _ridge_dual_beta(train, gram_n, lam2)
            mse = prediction_mse(train.y_center + Xv_std @ b, valid_raw.y)
            if best_ridge is None or mse < best_ridge[0]:
                best_ridge = (mse, b)
        candidates = (
            ("enet", np.sign(enet_sel["beta"]).astype(np.int8)),
            ("ridge", np.sign(best_ridge[1]).astype(np.int8)),
        )
        best_sel = None
        for _name, signs in candidates:
            sel = search(signed_laplacian(graph, signs), lambda2_grid)
            if best_sel is None or sel["valid_mse"] < best_sel["valid_mse"]:
                best_sel = sel
        evaluate(best_sel, "agrace")
    return mses, pairs, aucs, curves


def run_benchmark(
    spec: SimulationSpec,
    methods=METHODS,
    replicates: int = 20,
    seed: int | None = None,
    lambda2_grid=DEFAULT_LAMBDA2_GRID,
    K: int = 100,
    epsilon: float = 1e-3,
    tol: float = 1e-5,
    max_sweeps: int = 10000,
    patience: int | None = 10,
    collect_roc: bool = False,
    n_jobs: int = 1,
) -> BenchmarkTable:
    """Fit/tune/test comparison over independent replicates.

    Per replicate each method is fitted on the training sample over a
    warm-started sparsity path for every smoothness weight in
    ``lambda2_grid``, the pair with the smallest validation MSE is kept
    and its test MSE recorded.  The adaptive method takes its signs from
    the validation-tuned elastic net of the same replicate.  Replicate r
    uses seed ``seed + r``; failures are recorded and skipped.  With
    ``collect_roc`` the paths are run in full (no early stopping) and the
    selection AUC at the chosen smoothness weight is also recorded.
    """
    if replicates < 1:
        raise ValueError(f"replicates must be at least 1, got {replicates}")
    unknown = set(methods) - set(METHODS)
    if unknown:
        raise ValueError(f"unknown methods: {sorted(unknown)}")
    if seed is None:
        seed = spec.seed
    graph = build_module_graph(spec)
    L = laplacian(graph)

    def job(rep: int):
        try:
            return rep, _one_replicate(
                spec, seed + rep, methods, graph, L, lambda2_grid,
                K, epsilon, tol, max_sweeps, patience, collect_roc,
            ), None
        except Exception as exc:  # recorded, not fatal
            return rep, None, f"replicate {rep}: {type(exc).__name__}: {exc}"

    if n_jobs != 1:
        from joblib import Parallel, delayed

        outs = Parallel(n_jobs=n_jobs, backend="threading")(
            delayed(job)(rep) for rep in range(replicates)
        )
    else:
        outs = [job(rep) for rep in range(replicates)]

    mse = {m: np.full(replicates, np.nan) for m in methods}
    auc = {m: np.full(replicates, np.nan) for m in methods} if collect_roc else {}
    best_pairs = {m: [(np.nan, np.nan)] * replicates for m in methods}
    first_curves: dict[str, tuple[np.ndarray, float]] = {}
    failures = []
    for rep, result, err in outs:
        if err is not None:
            failures.append(err)
            continue
        mses, pairs, aucs, curves = result
        for m in methods:
            mse[m][rep] = mses[m]
            best_pairs[m][rep] = pairs[m]
            if collect_roc:
                auc[m][rep] = aucs[m]
        if rep == 0 and collect_roc:
            first_curves = curves

    rows = []
    for m in methods:
        vals = mse[m][~np.isnan(mse[m])]
        if vals.size == 0:
            raise RuntimeError(f"all replicates failed for method {m}: {failures}")
        se = float(vals.std(ddof=1) / np.sqrt(vals.size)) if vals.size > 1 else 0.0
        rows.append(
            BenchmarkRow(
                method=m,
                model=spec.model,
                correlation=spec.correlation,
                mean_mse=float(vals.mean()),
                se_mse=se,
                n_replicates=int(vals.size),
            )
        )
    return BenchmarkTable(
        rows=rows,
        replicate_mse=mse,
        best_pairs=best_pairs,
        replicate_auc=auc,
        roc_curves=first_curves,
        failures=failures,
    )
