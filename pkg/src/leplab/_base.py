import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .lattice import Grid, GridFunction
from ._validation import GridMismatchError, check_is_fitted


def resolve_grid(X, half_width=None):
    """Grid carried by ``X``; raw arrays need ``half_width`` to be known."""
    if isinstance(X, Grid):
        return X
    if isinstance(X, GridFunction):
        return X.grid
    arr = np.asarray(X)
    if arr.ndim not in (1, 2):
        raise ValueError(f"expected a GridFunction, a Grid or a 1-D/2-D array, got shape {arr.shape}")
    if half_width is None:
        raise ValueError("half_width must be set to fit on raw arrays")
    return Grid(half_width, arr.shape[-1])


class GridTransformer(TransformerMixin, BaseEstimator):
    """Base for operators acting on grid functions.

    ``transform`` accepts a :class:`GridFunction` (returned as one) or an
    array of shape ``(N,)`` / ``(n_samples, N)`` of samples on the fitted
    grid, so operators chain in a :class:`sklearn.pipeline.Pipeline`.
    """

    def _check_grid(self, f):
        check_is_fitted(self, "grid_")
        if f.grid != self.grid_:
            raise GridMismatchError(f"function grid {f.grid} differs from fitted grid {self.grid_}")

    def _apply(self, f):
        raise NotImplementedError

    def transform(self, X):
        check_is_fitted(self, "grid_")
        if isinstance(X, GridFunction):
            self._check_grid(X)
            return self._apply(X)
        arr = np.asarray(X)
        if arr.ndim not in (1, 2) or arr.shape[-1] != self.grid_.num_points:
            raise ValueError(
                f"expected samples with last axis of length {self.grid_.num_points}, got shape {arr.shape}"
            )
        rows = np.atleast_2d(arr)
        out = np.stack([self._apply(GridFunction(self.grid_, r)).values for r in rows])
        return out[0] if arr.ndim == 1 else out
