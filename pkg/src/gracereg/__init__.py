"""Graph-constrained sparse regression (Grace / adaptive Grace).

Least squares with an L1 sparsity penalty plus a Laplacian smoothness
penalty over a covariate graph, solved by cyclical coordinate descent,
with regularization paths, cross-validation, theory diagnostics and a
simulation benchmark harness.
"""

from .adaptive import SignEstimate, fit_agrace, initial_estimate
from .data import Dataset, standardize
from .diagnostics import (
    SignConsistencySpec,
    TheoryInputs,
    TheoryReport,
    gc_ic_margin,
    monte_carlo_risk,
    regularity_check,
    risk_bound,
    sign_consistency_mc,
    theorem33_quantities,
    theory_report,
)
from .estimators import AdaptiveGraceRegressor, GraceCV, GraceRegressor
from .graph import (
    LaplacianMatrix,
    WeightedGraph,
    build_graph,
    extreme_eigenvalues,
    laplacian,
    quadratic_form,
    read_edge_list,
    signed_laplacian,
)
from .path import (
    CvResult,
    PathResult,
    fit_path,
    fit_path_lambda1,
    kfold_cv,
    lambda1_grid,
    lambda_grid,
    predict,
    prediction_mse,
)
from .simbench import (
    BenchmarkTable,
    SimulationSpec,
    SimulationTruth,
    build_module_graph,
    model_coefficients,
    roc_curve,
    run_benchmark,
    simulate_dataset,
)
from .solver import (
    FitResult,
    PenaltyConfig,
    coordinate_update,
    fit_grace,
    inverse_reparameterize,
    objective,
    reparameterize,
    soft_threshold,
)

__version__ = "0.1.0"

__all__ = [
    "AdaptiveGraceRegressor",
    "BenchmarkTable",
    "CvResult",
    "Dataset",
    "FitResult",
    "GraceCV",
    "GraceRegressor",
    "LaplacianMatrix",
    "PathResult",
    "PenaltyConfig",
    "SignConsistencySpec",
    "SignEstimate",
    "SimulationSpec",
    "SimulationTruth",
    "TheoryInputs",
    "TheoryReport",
    "WeightedGraph",
    "build_graph",
    "build_module_graph",
    "coordinate_update",
    "extreme_eigenvalues",
    "fit_agrace",
    "fit_grace",
    "fit_path",
    "fit_path_lambda1",
    "gc_ic_margin",
    "initial_estimate",
    "inverse_reparameterize",
    "kfold_cv",
    "lambda1_grid",
    "lambda_grid",
    "laplacian",
    "model_coefficients",
    "monte_carlo_risk",
    "objective",
    "predict",
    "prediction_mse",
    "quadratic_form",
    "read_edge_list",
    "regularity_check",
    "reparameterize",
    "risk_bound",
    "roc_curve",
    "run_benchmark",
    "sign_consistency_mc",
    "signed_laplacian",
    "simulate_dataset",
    "soft_threshold",
    "standardize",
    "theorem33_quantities",
    "theory_report",
]
