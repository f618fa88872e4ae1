"""Input checking shared by the estimators and the lattice toolkit."""

import numbers

import numpy as np


class GridMismatchError(ValueError):
    """Two grid functions live on different discretizations."""


class LatticeKindError(TypeError):
    """A lattice operation received a complex-valued function."""


def check_scalar(value, name, *, min_val=None, max_val=None, strict=False, integer=False):
    """Validate a real scalar and return it as ``float`` (or ``int``)."""
    kind = numbers.Integral if integer else numbers.Real
    if isinstance(value, bool) or not isinstance(value, kind):
        raise TypeError(f"{name} must be {'an integer' if integer else 'a real number'}, got {value!r}")
    if not np.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    if min_val is not None:
        if strict and not value > min_val:
            raise ValueError(f"{name} must be > {min_val}, got {value!r}")
        if not strict and not value >= min_val:
            raise ValueError(f"{name} must be >= {min_val}, got {value!r}")
    if max_val is not None and not value <= max_val:
        raise ValueError(f"{name} must be <= {max_val}, got {value!r}")
    return int(value) if integer else float(value)


def check_values(values, num_points=None):
    """Coerce samples to a finite 1-D float or complex array."""
    arr = np.asarray(values)
    if arr.ndim != 1:
        raise ValueError(f"grid values must be one-dimensional, got shape {arr.shape}")
    if num_points is not None and arr.shape[0] != num_points:
        raise ValueError(f"expected {num_points} values, got {arr.shape[0]}")
    if np.iscomplexobj(arr):
        arr = arr.astype(np.complex128)
    else:
        arr = arr.astype(np.float64)
    if not np.all(np.isfinite(arr)):
        raise ValueError("grid values must be finite (no NaN/Inf)")
    return arr


def check_time_grid(times, name="t_grid"):
    t = np.asarray(times, dtype=np.float64)
    if t.ndim != 1 or t.size == 0:
        raise ValueError(f"{name} must be a nonempty 1-D sequence")
    if not np.all(np.isfinite(t)):
        raise ValueError(f"{name} must be finite")
    if t.size > 1 and not np.all(np.diff(t) > 0):
        raise ValueError(f"{name} must be strictly increasing")
    if t[0] < 0:
        raise ValueError(f"{name} must be nonnegative")
    return t


def check_same_grid(f, g):
    if f.grid != g.grid:
        raise GridMismatchError(f"incompatible discretizations: {f.grid} vs {g.grid}")


def check_real(f, op="lattice operation"):
    if f.kind != "real":
        raise LatticeKindError(f"{op} is defined for real-kind functions only")


def check_nonnegative(f, what="f"):
    check_real(f, "positivity check")
    if np.any(f.values < 0):
        raise ValueError(f"{what} must be nonnegative at every grid node")
    if not np.any(f.values > 0):
        raise ValueError(f"{what} must not vanish identically")


def check_is_fitted(estimator, attribute):
    # sklearn's own helper insists on a ``fit`` signature we do not always keep
    if not hasattr(estimator, attribute):
        from sklearn.exceptions import NotFittedError

        raise NotFittedError(
            f"This {type(estimator).__name__} instance is not fitted yet. "
            "Call 'fit' with a grid before using this estimator."
        )
