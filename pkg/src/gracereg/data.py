"""Design/response container and the centering/scaling contract.

The solver operates on standardized data: the response is centered and
every column of the design is centered and scaled so that the mean of its
squares is 1.  Centers and scales are retained so coefficients can be
mapped back to the original scale.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

__all__ = ["Dataset", "standardize"]


@dataclass
class Dataset:
    """An (X, y) pair with its standardization state.

    ``x_center``/``x_scale``/``y_center`` are the statistics applied to
    obtain the current values from the original data (identity statistics
    for a raw dataset).  Treat instances as immutable.
    """

    X: np.ndarray
    y: np.ndarray
    standardized: bool = False
    x_center: np.ndarray | None = None
    x_scale: np.ndarray | None = None
    y_center: float = 0.0
    names: list[str] | None = None

    def __post_init__(self):
        self.X = np.asarray(self.X, dtype=np.float64)
        self.y = np.asarray(self.y, dtype=np.float64)
        if self.X.ndim != 2:
            raise ValueError(f"X must be 2-dimensional, got ndim={self.X.ndim}")
        if self.y.ndim != 1:
            raise ValueError(f"y must be 1-dimensional, got ndim={self.y.ndim}")
        if self.X.shape[0] != self.y.shape[0]:
            raise ValueError(
                f"X has {self.X.shape[0]} rows but y has {self.y.shape[0]} entries"
            )
        if not np.all(np.isfinite(self.X)):
            i, j = np.argwhere(~np.isfinite(self.X))[0]
            raise ValueError(f"non-finite value in X at row {i}, column {j}")
        if not np.all(np.isfinite(self.y)):
            i = int(np.flatnonzero(~np.isfinite(self.y))[0])
            raise ValueError(f"non-finite value in y at row {i}")
        if self.names is not None and len(self.names) != self.X.shape[1]:
            raise ValueError("names length does not match number of columns")

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]

    @cached_property
    def xt(self) -> np.ndarray:
        """Row-contiguous transpose (one contiguous row per covariate)."""
        return np.ascontiguousarray(self.X.T)

    @cached_property
    def col_sq_means(self) -> np.ndarray:
        """Per-column (1/n) sum of squares; 1.0 everywhere when standardized."""
        return (self.X**2).mean(axis=0)

    def subset(self, rows) -> "Dataset":
        """Row subset carrying over names but not standardization state."""
        return Dataset(X=self.X[rows], y=self.y[rows], names=self.names)


def standardize(raw: Dataset) -> Dataset:
    """Center y and center/scale each column of X to mean-square 1.

    Scaling uses the population standard deviation ``sqrt(mean((x - xbar)^2))``.
    Applying this to already-standardized data is a no-op (up to floating
    point).  Columns with (numerically) zero variance are rejected.
    """
    if raw.n < 2:
        raise ValueError(f"need at least 2 samples to standardize, got {raw.n}")
    center = raw.X.mean(axis=0)
    Xc = raw.X - center
    scale = np.sqrt((Xc**2).mean(axis=0))
    bad = scale <= 1e-13 * np.maximum(1.0, np.abs(center))
    if np.any(bad):
        j = int(np.flatnonzero(bad)[0])
        name = f" ({raw.names[j]})" if raw.names else ""
        raise ValueError(f"column {j}{name} has zero variance and cannot be scaled")
    y_center = float(raw.y.mean())
    return Dataset(
        X=Xc / scale,
        y=raw.y - y_center,
        standardized=True,
        x_center=center,
        x_scale=scale,
        y_center=y_center,
        names=raw.names,
    )


def _as_standardized(ds: Dataset) -> Dataset:
    """Pass through a standardized dataset, standardize a raw one."""
    return ds if ds.standardized else standardize(ds)
