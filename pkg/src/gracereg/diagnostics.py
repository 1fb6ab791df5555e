"""Finite-sample evaluation of the estimator's theory.

Evaluates, at the given sample size, the nonasymptotic risk bound, the
graph-constrained irrepresentable condition (the matrix inequality that
governs sign-consistent selection), the design regularity constants, the
sign-recovery scaling quantities, and Monte Carlo estimates of risk and
sign-recovery frequency.  All matrix quantities are computed with the
column convention used by the solver: each column centered with mean
square 1, so the squared column norm equals n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .data import Dataset
from .graph import LaplacianMatrix
from .solver import PenaltyConfig, fit_grace

__all__ = [
    "TheoryInputs",
    "TheoryReport",
    "Theorem33Quantities",
    "SignConsistencySpec",
    "risk_bound",
    "gc_ic_margin",
    "regularity_check",
    "theorem33_quantities",
    "monte_carlo_risk",
    "sign_consistency_mc",
    "theory_report",
]

RCOND_FLOOR = 1e-12


def _check_solvable(M: np.ndarray, what: str) -> None:
    vals = np.linalg.eigvalsh(M)
    if vals[0] <= 0 or vals[0] / vals[-1] < RCOND_FLOOR:
        raise ValueError(f"{what} is singular or too ill conditioned to invert")


def _solve(M: np.ndarray, b: np.ndarray, what: str) -> np.ndarray:
    _check_solvable(M, what)
    return np.linalg.solve(M, b)


@dataclass
class TheoryInputs:
    """Quantities the theory formulas are evaluated on.

    ``support`` indexes the true nonzero coefficients (size q) and
    ``beta1`` holds their values; ``C`` is the scaled Gram matrix
    X'X / n.  ``w_max`` is the largest edge weight of the covariate
    graph; ``design`` optionally retains X for the Monte Carlo checks.
    """

    C: np.ndarray
    L: LaplacianMatrix
    support: np.ndarray
    beta1: np.ndarray
    sigma: float
    lambda1: float
    lambda2: float
    n: int
    p: int
    w_max: float = 0.0
    design: np.ndarray | None = None

    def __post_init__(self):
        self.support = np.asarray(self.support, dtype=np.int64)
        self.beta1 = np.asarray(self.beta1, dtype=np.float64)
        q = self.support.size
        if q == 0:
            raise ValueError("support must be nonempty")
        if np.unique(self.support).size != q:
            raise ValueError("support indices must be distinct")
        if self.support.min() < 0 or self.support.max() >= self.p:
            raise ValueError("support index out of range")
        if self.beta1.shape != (q,):
            raise ValueError(f"beta1 must have length {q}, got shape {self.beta1.shape}")
        if np.any(self.beta1 == 0):
            raise ValueError("beta1 entries must be nonzero (they define the support)")
        if self.C.shape != (self.p, self.p):
            raise ValueError("C must be p x p")
        if self.L.p != self.p:
            raise ValueError("Laplacian dimension does not match p")

    @classmethod
    def from_design(
        cls,
        X: np.ndarray,
        L: LaplacianMatrix,
        support,
        beta1,
        sigma: float,
        lambda1: float,
        lambda2: float,
        w_max: float = 0.0,
    ) -> "TheoryInputs":
        X = np.asarray(X, dtype=np.float64)
        n, p = X.shape
        return cls(
            C=X.T @ X / n,
            L=L,
            support=support,
            beta1=beta1,
            sigma=sigma,
            lambda1=lambda1,
            lambda2=lambda2,
            n=n,
            p=p,
            w_max=w_max,
            design=X,
        )

    @property
    def q(self) -> int:
        return int(self.support.size)

    def complement(self) -> np.ndarray:
        return np.setdiff1d(np.arange(self.p), self.support, assume_unique=False)

    def full_beta(self) -> np.ndarray:
        beta = np.zeros(self.p)
        beta[self.support] = self.beta1
        return beta


def _blocks(M: np.ndarray, idx1: np.ndarray, idx2: np.ndarray):
    return (
        M[np.ix_(idx1, idx1)],
        M[np.ix_(idx1, idx2)],
        M[np.ix_(idx2, idx1)],
        M[np.ix_(idx2, idx2)],
    )


def risk_bound(inp: TheoryInputs) -> float:
    """Finite-sample upper bound on E ||beta_hat - beta||^2.

    Valid for any nonnegative penalty weights provided the penalized Gram
    matrix C + (lambda2/n) L is positive definite.
    """
    M = inp.C + (inp.lambda2 / inp.n) * inp.L.entries
    vals = np.linalg.eigvalsh(M)
    if vals[0] <= 0 or vals[0] / vals[-1] < RCOND_FLOOR:
        raise ValueError("C + (lambda2/n) L is singular; the bound is undefined")
    lam_min = float(vals[0])
    l_max = float(np.linalg.eigvalsh(inp.L.entries)[-1])
    big_b = float(np.linalg.eigvalsh(inp.C)[-1])
    num = (
        4.0 * inp.lambda2**2 * l_max**2 * float(inp.beta1 @ inp.beta1)
        + 4.0 * inp.p * inp.n * big_b * inp.sigma**2
        + 2.0 * inp.lambda1**2 * inp.p
    )
    return num / (inp.n**2 * lam_min**2)


def gc_ic_margin(inp: TheoryInputs) -> tuple[np.ndarray, float]:
    """Irrepresentable-condition vector and its margin.

    Returns the elementwise left-hand side over the irrelevant block and
    ``1 - max(lhs)``; the condition holds (with slack eta = margin) when
    the margin is positive.  With lambda2 = 0 this reduces to the plain
    Lasso irrepresentable quantity |C21 C11^{-1} sign(beta1)|.
    """
    if inp.lambda1 <= 0:
        raise ValueError("the irrepresentable margin requires lambda1 > 0")
    if inp.q >= inp.p:
        raise ValueError("the irrelevant block is empty (q must be < p)")
    idx1 = np.sort(inp.support)
    idx2 = inp.complement()
    Ld = inp.L.entries
    C11, _, C21, _ = _blocks(inp.C, idx1, idx2)
    L11, _, L21, _ = _blocks(Ld, idx1, idx2)
    ratio = inp.lambda2 / inp.n
    A = C11 + ratio * L11
    order = np.argsort(inp.support)
    b1 = inp.beta1[order]  # beta1 aligned with sorted support
    rhs = np.sign(b1) + (2.0 * inp.lambda2 / inp.lambda1) * (L11 @ b1)
    t = _solve(A, rhs, "C11 + (lambda2/n) L11")
    lhs = np.abs((C21 + ratio * L21) @ t - (2.0 * inp.lambda2 / inp.lambda1) * (L21 @ b1))
    return lhs, float(1.0 - lhs.max())


def regularity_check(ds: Dataset) -> tuple[float, float, float]:
    """Design regularity constants (b, B, a2).

    b and B are the extreme eigenvalues of C = X'X/n; a2 is the largest
    per-row sum of squares divided by n, which should shrink as n grows
    for well-behaved designs.
    """
    if not ds.standardized:
        raise ValueError("regularity_check requires a standardized dataset")
    C = ds.X.T @ ds.X / ds.n
    vals = np.linalg.eigvalsh(C)
    a2 = float((ds.X**2).sum(axis=1).max() / ds.n)
    return float(vals[0]), float(vals[-1]), a2


class Theorem33Quantities(NamedTuple):
    rho: float
    c_min: float
    w_max: float
    condition_a: float
    condition_b: float


def theorem33_quantities(inp: TheoryInputs) -> Theorem33Quantities:
    """Sign-recovery scaling quantities at the given (n, p, q) and penalties.

    ``rho`` is the smallest magnitude of the penalized projection of the
    true signal, ``c_min`` the smallest eigenvalue of the relevant Gram
    block and ``w_max`` the largest edge weight.  ``condition_a`` and
    ``condition_b`` evaluate the two scaling expressions whose divergence
    (resp. vanishing) drives sign consistency; condition_a uses the
    cross-block form whenever the Laplacian couples the relevant and
    irrelevant blocks.
    """
    idx1 = np.sort(inp.support)
    idx2 = inp.complement()
    Ld = inp.L.entries
    C11 = inp.C[np.ix_(idx1, idx1)]
    L11 = Ld[np.ix_(idx1, idx1)]
    L12 = Ld[np.ix_(idx1, idx2)] if idx2.size else np.zeros((inp.q, 0))
    order = np.argsort(inp.support)
    b1 = inp.beta1[order]
    A = C11 + (inp.lambda2 / inp.n) * L11
    rho = float(np.min(np.abs(_solve(A, C11 @ b1, "C11 + (lambda2/n) L11"))))
    c_min = float(np.linalg.eigvalsh(C11)[0])

    pq = inp.p - inp.q
    log_pq = math.log(pq) if pq > 1 else 0.0
    if log_pq == 0.0:
        condition_a = math.inf
    elif idx2.size == 0 or not np.any(L12):
        condition_a = inp.lambda1**2 / (inp.n * log_pq)
    else:
        denom = log_pq * (inp.n + inp.lambda2**2 * inp.w_max**2 / (inp.n * c_min))
        condition_a = inp.lambda1**2 / denom

    sign_term = float(np.max(np.abs(_solve(A, np.sign(b1), "C11 + (lambda2/n) L11"))))
    log_q = math.log(inp.q) if inp.q > 1 else 0.0
    inner = math.sqrt(log_q / (inp.n * c_min)) + (inp.lambda1 / inp.n) * sign_term
    condition_b = inner / rho if rho > 0 else math.inf
    return Theorem33Quantities(rho, c_min, inp.w_max, condition_a, condition_b)


def _require_standardized_design(X: np.ndarray) -> None:
    means = X.mean(axis=0)
    sq = (X**2).mean(axis=0)
    if np.max(np.abs(means)) > 1e-8 or np.max(np.abs(sq - 1.0)) > 1e-8:
        raise ValueError(
            "design must be standardized (zero column means, mean square 1)"
        )


def monte_carlo_risk(
    X: np.ndarray,
    L: LaplacianMatrix,
    beta: np.ndarray,
    sigma: float,
    lambda1: float,
    lambda2: float,
    reps: int = 500,
    seed: int = 0,
    tol: float = 1e-7,
) -> float:
    """Monte Carlo estimate of E ||beta_hat - beta||^2 on a fixed design."""
    X = np.asarray(X, dtype=np.float64)
    beta = np.asarray(beta, dtype=np.float64)
    _require_standardized_design(X)
    cfg = PenaltyConfig(lambda1=lambda1, lambda2=lambda2)
    total = 0.0
    signal = X @ beta
    for r in range(reps):
        rng = np.random.default_rng(seed + r)
        y = signal + sigma * rng.standard_normal(X.shape[0])
        ds = Dataset(X=X, y=y - y.mean(), standardized=True)
        fit = fit_grace(ds, L, cfg, tol=tol)
        err = fit.beta - beta
        total += float(err @ err)
    return total / reps


@dataclass
class SignConsistencySpec:
    """Fixed-design simulation inputs for sign-recovery frequency.

    ``X`` must already be standardized; ``beta`` is the full coefficient
    vector whose signs (zeros included) define success.
    """

    X: np.ndarray
    beta: np.ndarray
    sigma: float
    L: LaplacianMatrix

    def __post_init__(self):
        self.X = np.asarray(self.X, dtype=np.float64)
        self.beta = np.asarray(self.beta, dtype=np.float64)
        _require_standardized_design(self.X)
        if self.beta.shape != (self.X.shape[1],):
            raise ValueError("beta length must match the number of columns")


def sign_consistency_mc(
    spec: SignConsistencySpec,
    lambda1: float,
    lambda2: float,
    reps: int,
    seed: int = 0,
    tol: float = 1e-7,
) -> float:
    """Fraction of replicates recovering sign(beta) exactly.

    The comparison is elementwise and exact: coordinate descent produces
    exact zeros, so no tolerance is applied to the fitted signs.
    """
    if reps < 1:
        raise ValueError(f"reps must be at least 1, got {reps}")
    cfg = PenaltyConfig(lambda1=lambda1, lambda2=lambda2)
    true_signs = np.sign(spec.beta)
    signal = spec.X @ spec.beta
    hits = 0
    for r in range(reps):
        rng = np.random.default_rng(seed + r)
        y = signal + spec.sigma * rng.standard_normal(spec.X.shape[0])
        ds = Dataset(X=spec.X, y=y - y.mean(), standardized=True)
        fit = fit_grace(ds, spec.L, cfg, tol=tol)
        if np.array_equal(np.sign(fit.beta), true_signs):
            hits += 1
    return hits / reps


@dataclass
class TheoryReport:
    """All theory diagnostics for one instance, JSON-serializable."""

    bound: float
    gcic_vector: np.ndarray
    gcic_margin: float
    b: float
    B: float
    a2: float | None
    rho: float
    c_min: float
    w_max: float
    condition_a: float
    condition_b: float
    mc_risk: float | None = None

    def to_dict(self) -> dict:
        return {
            "risk_bound": self.bound,
            "mc_risk": self.mc_risk,
            "gcic_vector": [float(v) for v in self.gcic_vector],
            "gcic_margin": self.gcic_margin,
            "eigen_min_C": self.b,
            "eigen_max_C": self.B,
            "row_mass_a2": self.a2,
            "rho": self.rho,
            "c_min": self.c_min,
            "w_max": self.w_max,
            "condition_a": self.condition_a,
            "condition_b": self.condition_b,
        }


def theory_report(
    inp: TheoryInputs,
    mc_reps: int = 0,
    mc_seed: int = 0,
) -> TheoryReport:
    """Assemble the full diagnostic report for one instance."""
    vals = np.linalg.eigvalsh(inp.C)
    lhs, margin = gc_ic_margin(inp)
    t33 = theorem33_quantities(inp)
    a2 = None
    mc = None
    if inp.design is not None:
        a2 = float((inp.design**2).sum(axis=1).max() / inp.n)
        if mc_reps > 0:
            mc = monte_carlo_risk(
                inp.design,
                inp.L,
                inp.full_beta(),
                inp.sigma,
                inp.lambda1,
                inp.lambda2,
                reps=mc_reps,
                seed=mc_seed,
            )
    return TheoryReport(
        bound=risk_bound(inp),
        gcic_vector=lhs,
        gcic_margin=margin,
        b=float(vals[0]),
        B=float(vals[-1]),
        a2=a2,
        rho=t33.rho,
        c_min=t33.c_min,
        w_max=t33.w_max,
        condition_a=t33.condition_a,
        condition_b=t33.condition_b,
        mc_risk=mc,
    )
