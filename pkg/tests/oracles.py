"""Independent reference computations for the test suite.

Everything here is deliberately built from plain dense linear algebra and
exhaustive enumeration, sharing no code path with the package solver.
"""

import itertools

import numpy as np


def objective_q(X, y, L, beta, lambda1, lambda2):
    """Penalized objective recomputed term by term from dense inputs."""
    r = y - X @ beta
    return float(r @ r) + lambda1 * float(np.abs(beta).sum()) + lambda2 * float(beta @ L @ beta)


def edge_sum_quadratic(edges, degrees, beta, signs=None):
    """beta' L beta via the explicit edge sum (standard or sign-adjusted)."""
    total = 0.0
    for u, v, w in edges:
        bu = beta[u] / np.sqrt(degrees[u])
        bv = beta[v] / np.sqrt(degrees[v])
        if signs is None:
            total += w * (bu - bv) ** 2
        else:
            su, sv = signs[u], signs[v]
            if su * sv != 0:
                total += w * (su * bu - sv * bv) ** 2
            else:
                total += w * (bu**2 + bv**2)
    return total


def kkt_enumeration(X, y, L, lambda1, lambda2, tol=1e-9):
    """Exact minimizer of the penalized objective by sign-pattern search.

    For every pattern in {-1, 0, +1}^p the stationarity system of the
    nonzero block is solved and the KKT conditions checked; the feasible
    candidate with the smallest objective is returned.  Only sensible for
    p <= ~6.
    """
    n, p = X.shape
    G = X.T @ X
    Xty = X.T @ y
    best_val = np.inf
    best_beta = None
    for pattern in itertools.product((-1, 0, 1), repeat=p):
        s = np.asarray(pattern, dtype=float)
        active = np.flatnonzero(s)
        beta = np.zeros(p)
        if active.size:
            A = 2.0 * (G[np.ix_(active, active)] + lambda2 * L[np.ix_(active, active)])
            b = 2.0 * Xty[active] - lambda1 * s[active]
            try:
                beta_a = np.linalg.solve(A, b)
            except np.linalg.LinAlgError:
                continue
            if np.any(s[active] * beta_a < -tol):
                continue
            beta[active] = beta_a
        grad = 2.0 * (G @ beta - Xty) + 2.0 * lambda2 * (L @ beta)
        ok = True
        for u in range(p):
            if s[u] == 0 and abs(grad[u]) > lambda1 + 1e-7:
                ok = False
                break
        if not ok:
            continue
        val = objective_q(X, y, L, beta, lambda1, lambda2)
        if val < best_val - 1e-12:
            best_val = val
            best_beta = beta
    assert best_beta is not None, "enumeration found no KKT point"
    return best_beta, best_val


def grid_minimize_coordinate(X, y, L, beta, u, lambda1, lambda2, span=5.0, iters=60):
    """1-d minimizer of the objective over beta_u by nested grid search."""
    lo, hi = beta[u] - span, beta[u] + span
    work = beta.copy()

    def f(t):
        work[u] = t
        return objective_q(X, y, L, work, lambda1, lambda2)

    for _ in range(iters):
        ts = np.linspace(lo, hi, 33)
        vals = [f(t) for t in ts]
        k = int(np.argmin(vals))
        lo = ts[max(0, k - 1)]
        hi = ts[min(len(ts) - 1, k + 1)]
    # the exact zero is always a candidate under the L1 kink
    t_star = 0.5 * (lo + hi)
    return 0.0 if f(0.0) <= f(t_star) else t_star


def orthonormal_lasso(X, y, lambda1):
    """Closed-form soft-thresholded solution for (1/n) X'X = I, lambda2 = 0."""
    n = X.shape[0]
    ols = X.T @ y / n
    thr = lambda1 / (2.0 * n)
    return np.sign(ols) * np.maximum(np.abs(ols) - thr, 0.0)


def random_graph_edges(rng, p, density=0.4, unit_weights=True):
    """Random undirected edge list over p vertices."""
    edges = []
    for u in range(p):
        for v in range(u + 1, p):
            if rng.uniform() < density:
                w = 1.0 if unit_weights else float(rng.uniform(0.2, 3.0))
                edges.append((u, v, w))
    return edges


def random_instance(rng, p, n, lam_hi, density=0.5, unit_weights=True):
    """Standardized design, response, graph and penalties for small tests."""
    X = rng.standard_normal((n, p))
    X -= X.mean(axis=0)
    X /= np.sqrt((X**2).mean(axis=0))
    y = rng.standard_normal(n)
    y -= y.mean()
    edges = random_graph_edges(rng, p, density=density, unit_weights=unit_weights)
    lambda1 = float(rng.uniform(0.0, lam_hi))
    lambda2 = float(rng.uniform(0.0, lam_hi))
    return X, y, edges, lambda1, lambda2
