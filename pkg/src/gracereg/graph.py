"""Weighted covariate graphs and their normalized Laplacian matrices.

A covariate graph links predictors that are expected to have similar
(degree-scaled) regression coefficients.  The smoothness penalty used by
the solver is the quadratic form ``beta' L beta`` of the normalized
Laplacian, which for the standard Laplacian equals the weighted sum of
squared differences ``sum_{u~v} w(u,v) (beta_u/sqrt(d_u) - beta_v/sqrt(d_v))^2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "WeightedGraph",
    "LaplacianMatrix",
    "build_graph",
    "laplacian",
    "signed_laplacian",
    "quadratic_form",
    "extreme_eigenvalues",
    "read_edge_list",
]


@dataclass
class WeightedGraph:
    """Undirected weighted graph on vertices 0..p-1.

    Edges are stored once with ``u < v``; ``degrees[u]`` is the sum of the
    weights of edges incident to ``u``.  Instances are immutable by
    convention and safe to share across workers.
    """

    p: int
    edge_u: np.ndarray  # int64, sorted lexicographically by (u, v)
    edge_v: np.ndarray  # int64, u < v
    edge_w: np.ndarray  # float64, strictly positive
    degrees: np.ndarray  # float64, length p

    @property
    def n_edges(self) -> int:
        return int(self.edge_u.shape[0])

    @property
    def edges(self) -> list[tuple[int, int, float]]:
        """Edge list as (u, v, weight) tuples with u < v."""
        return [
            (int(u), int(v), float(w))
            for u, v, w in zip(self.edge_u, self.edge_v, self.edge_w)
        ]

    def isolated(self) -> np.ndarray:
        """Boolean mask of vertices with degree zero."""
        return self.degrees == 0.0

    def max_weight(self) -> float:
        """Largest edge weight (0.0 for an edgeless graph)."""
        return float(self.edge_w.max()) if self.n_edges else 0.0


def build_graph(edge_list, p: int) -> WeightedGraph:
    """Construct a weighted undirected graph from an edge list.

    Parameters
    ----------
    edge_list : iterable of (u, v) or (u, v, weight)
        Vertex indices in [0, p).  A missing weight defaults to 1.0.
        Zero-weight edges are dropped; each unordered pair may appear
        at most once.
    p : int
        Number of vertices.

    Raises
    ------
    ValueError
        On self-loops, negative weights, out-of-range indices or
        duplicate edges.
    """
    if p < 0:
        raise ValueError(f"vertex count must be nonnegative, got {p}")
    us, vs, ws = [], [], []
    seen: set[tuple[int, int]] = set()
    for k, edge in enumerate(edge_list):
        if len(edge) == 2:
            u, v = edge
            w = 1.0
        else:
            u, v, w = edge
        u, v, w = int(u), int(v), float(w)
        if not (0 <= u < p and 0 <= v < p):
            raise ValueError(f"edge {k}: vertex index out of range for p={p}: ({u}, {v})")
        if u == v:
            raise ValueError(f"edge {k}: self-loop at vertex {u} is not allowed")
        if not np.isfinite(w) or w < 0:
            raise ValueError(f"edge {k}: weight must be finite and nonnegative, got {w}")
        if u > v:
            u, v = v, u
        if (u, v) in seen:
            raise ValueError(f"edge {k}: duplicate edge ({u}, {v})")
        seen.add((u, v))
        if w == 0.0:
            continue
        us.append(u)
        vs.append(v)
        ws.append(w)
    edge_u = np.asarray(us, dtype=np.int64)
    edge_v = np.asarray(vs, dtype=np.int64)
    edge_w = np.asarray(ws, dtype=np.float64)
    order = np.lexsort((edge_v, edge_u))
    edge_u, edge_v, edge_w = edge_u[order], edge_v[order], edge_w[order]
    degrees = np.zeros(p, dtype=np.float64)
    np.add.at(degrees, edge_u, edge_w)
    np.add.at(degrees, edge_v, edge_w)
    return WeightedGraph(p=p, edge_u=edge_u, edge_v=edge_v, edge_w=edge_w, degrees=degrees)


@dataclass
class LaplacianMatrix:
    """Symmetric p x p normalized Laplacian, stored sparsely.

    ``diag`` holds the diagonal (1 for non-isolated vertices, 0 for
    isolated ones, 1 everywhere for the identity penalty).  The strictly
    off-diagonal entries are held in CSR form (both (u,v) and (v,u) are
    stored).  ``kind`` is "standard" for the plain Laplacian and
    "sign_adjusted" when off-diagonals carry preliminary coefficient
    signs, in which case ``signs`` records the vector used.
    """

    p: int
    diag: np.ndarray
    indptr: np.ndarray
    indices: np.ndarray
    data: np.ndarray
    kind: str = "standard"
    signs: np.ndarray | None = None
    _dense: np.ndarray | None = field(default=None, repr=False)

    @property
    def entries(self) -> np.ndarray:
        """Dense matrix view (built on first access, then cached)."""
        if self._dense is None:
            m = np.zeros((self.p, self.p), dtype=np.float64)
            for u in range(self.p):
                m[u, u] = self.diag[u]
                lo, hi = self.indptr[u], self.indptr[u + 1]
                m[u, self.indices[lo:hi]] = self.data[lo:hi]
            self._dense = m
        return self._dense

    @classmethod
    def identity(cls, p: int) -> "LaplacianMatrix":
        """Identity penalty matrix; turns the smoothness term into a ridge."""
        return cls(
            p=p,
            diag=np.ones(p, dtype=np.float64),
            indptr=np.zeros(p + 1, dtype=np.int64),
            indices=np.zeros(0, dtype=np.int64),
            data=np.zeros(0, dtype=np.float64),
            kind="standard",
        )


def _build_csr(g: WeightedGraph, offdiag: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """CSR arrays for the symmetric off-diagonal part given per-edge values."""
    p = g.p
    counts = np.zeros(p, dtype=np.int64)
    np.add.at(counts, g.edge_u, 1)
    np.add.at(counts, g.edge_v, 1)
    indptr = np.zeros(p + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    indices = np.empty(indptr[-1], dtype=np.int64)
    data = np.empty(indptr[-1], dtype=np.float64)
    cursor = indptr[:-1].copy()
    for u, v, val in zip(g.edge_u, g.edge_v, offdiag):
        indices[cursor[u]] = v
        data[cursor[u]] = val
        cursor[u] += 1
        indices[cursor[v]] = u
        data[cursor[v]] = val
        cursor[v] += 1
    return indptr, indices, data


def laplacian(g: WeightedGraph) -> LaplacianMatrix:
    """Normalized Laplacian of a weighted graph.

    Diagonal is 1 at non-isolated vertices and 0 at isolated ones; the
    off-diagonal entry for an edge (u, v) is ``-w(u,v)/sqrt(d_u d_v)``.
    Rows and columns of isolated vertices are entirely zero, so isolated
    covariates receive no smoothness penalty.
    """
    dprod = g.degrees[g.edge_u] * g.degrees[g.edge_v]
    offdiag = -g.edge_w / np.sqrt(dprod)
    indptr, indices, data = _build_csr(g, offdiag)
    diag = (g.degrees > 0).astype(np.float64)
    return LaplacianMatrix(p=g.p, diag=diag, indptr=indptr, indices=indices, data=data)


def signed_laplacian(g: WeightedGraph, signs) -> LaplacianMatrix:
    """Sign-adjusted Laplacian built from preliminary coefficient signs.

    Off-diagonals become ``-sign_u sign_v w(u,v)/sqrt(d_u d_v)``; the
    diagonal is unchanged.  A zero sign zeroes the incident off-diagonals
    while keeping the unit diagonal, which preserves positive
    semi-definiteness (the corresponding edge terms degrade to
    ``w(u,v)(beta_u^2/d_u + beta_v^2/d_v)``).
    """
    signs = np.asarray(signs, dtype=np.float64)
    if signs.shape != (g.p,):
        raise ValueError(f"signs must have length {g.p}, got shape {signs.shape}")
    if not np.all(np.isin(signs, (-1.0, 0.0, 1.0))):
        raise ValueError("signs must take values in {-1, 0, +1}")
    dprod = g.degrees[g.edge_u] * g.degrees[g.edge_v]
    sprod = signs[g.edge_u] * signs[g.edge_v]
    offdiag = -sprod * g.edge_w / np.sqrt(dprod)
    indptr, indices, data = _build_csr(g, offdiag)
    diag = (g.degrees > 0).astype(np.float64)
    return LaplacianMatrix(
        p=g.p, diag=diag, indptr=indptr, indices=indices, data=data,
        kind="sign_adjusted", signs=signs.astype(np.int8),
    )


def quadratic_form(L: LaplacianMatrix, beta) -> float:
    """Smoothness value ``beta' L beta``.

    Evaluated from the sparse structure in O(p + edges), so large sparse
    graphs never touch a dense matrix.
    """
    beta = np.asarray(beta, dtype=np.float64)
    if beta.shape != (L.p,):
        raise ValueError(f"beta must have length {L.p}, got shape {beta.shape}")
    val = float(np.dot(beta * L.diag, beta))
    if L.data.size:
        rows = np.repeat(np.arange(L.p), np.diff(L.indptr))
        val += float(np.dot(L.data, beta[rows] * beta[L.indices]))
    return val


def extreme_eigenvalues(L: LaplacianMatrix) -> tuple[float, float]:
    """Smallest and largest eigenvalue of the (symmetric) matrix."""
    if L.p == 0:
        return (0.0, 0.0)
    vals = np.linalg.eigvalsh(L.entries)
    return float(vals[0]), float(vals[-1])


def read_edge_list(path, p: int) -> WeightedGraph:
    """Read a graph from a TSV edge-list file.

    One edge per line as ``u<TAB>v<TAB>weight`` with 0-based integer
    vertex ids; the weight column may be omitted (defaults to 1.0).
    Blank lines and lines starting with ``#`` are ignored.
    """
    edges = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) not in (2, 3):
                raise ValueError(f"{path}: line {lineno}: expected 2 or 3 tab-separated fields")
            try:
                u, v = int(parts[0]), int(parts[1])
                w = float(parts[2]) if len(parts) == 3 else 1.0
            except ValueError as exc:
                raise ValueError(f"{path}: line {lineno}: {exc}") from None
            edges.append((u, v, w))
    try:
        return build_graph(edges, p)
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from None


def write_edge_list(g: WeightedGraph, path) -> None:
    """Write a graph in the TSV edge-list format accepted by read_edge_list."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for u, v, w in zip(g.edge_u, g.edge_v, g.edge_w):
            fh.write(f"{u}\t{v}\t{w:.17g}\n")
