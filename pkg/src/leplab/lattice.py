"""Discretized lattice toolkit for E = L1(R) ∩ C0(R).

Functions are sampled on a uniform, symmetric grid over ``[-L, L]`` and are
taken to vanish outside it.  The norm on E is ``max(||f||_1, ||f||_inf)``;
``||f||_1`` is the composite trapezoid rule on the grid.
"""

import csv
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ._validation import check_real, check_same_grid, check_scalar, check_values

__all__ = [
    "Grid",
    "GridFunction",
    "NormReport",
    "LatticeParts",
    "norm_l1",
    "norm_sup",
    "norm_mixed",
    "norms",
    "trapezoid",
    "lattice_ops",
    "positive_part",
    "negative_part",
    "lattice_abs",
    "inf",
    "sup",
    "dist_to_positive_cone",
    "translate",
    "write_csv",
    "read_csv",
]


@dataclass(frozen=True)
class Grid:
    """Uniform grid ``x_k = -L + k h`` with ``h = 2L/(N-1)`` and odd ``N``.

    Nodes are built as ``L * (k - m) / m`` with ``m = (N-1)/2`` so that the
    endpoints are exactly ``-L`` and ``L``, ``x = 0`` is a node, and the grid
    is exactly symmetric about the origin.
    """

    half_width: float
    num_points: int

    def __post_init__(self):
        L = check_scalar(self.half_width, "half_width", min_val=0.0, strict=True)
        N = check_scalar(self.num_points, "num_points", min_val=3, integer=True)
        if N % 2 != 1:
            raise ValueError(f"num_points must be odd so that x = 0 is a node, got {N}")
        object.__setattr__(self, "half_width", L)
        object.__setattr__(self, "num_points", N)

    @classmethod
    def from_spacing(cls, half_width, h):
        """Smallest odd grid on ``[-L, L]`` whose spacing does not exceed ``h``."""
        m = int(np.ceil(half_width / h - 1e-9))
        return cls(half_width, 2 * m + 1)

    @property
    def h(self):
        return 2.0 * self.half_width / (self.num_points - 1)

    @cached_property
    def x(self):
        m = (self.num_points - 1) // 2
        x = self.half_width * ((np.arange(self.num_points) - m) / m)
        x.setflags(write=False)
        return x

    @property
    def center_index(self):
        return (self.num_points - 1) // 2

    def window(self, radius):
        """Boolean mask of the nodes with ``|x| <= radius``."""
        # a relative slack keeps nodes that are meant to sit on the boundary
        return np.abs(self.x) <= radius * (1.0 + 1e-12) + 1e-12 * self.h

    def sample(self, func, kind=None):
        return GridFunction(self, func(self.x), kind=kind)

    def zeros(self):
        return GridFunction(self, np.zeros(self.num_points))


class GridFunction:
    """Samples of a real or complex function on a :class:`Grid`.

    Values are stored read-only.  ``kind`` is ``"real"`` for float storage and
    ``"complex"`` otherwise; passing ``kind="real"`` with complex input is
    accepted only when every imaginary part is exactly zero.
    """

    __slots__ = ("grid", "values", "kind")

    def __init__(self, grid, values, kind=None):
        if not isinstance(grid, Grid):
            raise TypeError(f"grid must be a Grid, got {type(grid).__name__}")
        vals = check_values(values, grid.num_points)
        if kind is None:
            kind = "complex" if np.iscomplexobj(vals) else "real"
        if kind == "real":
            if np.iscomplexobj(vals):
                if np.any(vals.imag != 0):
                    raise ValueError("real-kind function has nonzero imaginary parts")
                vals = vals.real.copy()
        elif kind == "complex":
            vals = vals.astype(np.complex128)
        else:
            raise ValueError(f"kind must be 'real' or 'complex', got {kind!r}")
        vals.setflags(write=False)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "kind", kind)

    def __setattr__(self, name, value):
        raise AttributeError("GridFunction is immutable")

    @classmethod
    def sample(cls, func, grid, kind=None):
        return cls(grid, func(grid.x), kind=kind)

    @property
    def half_width(self):
        return self.grid.half_width

    @property
    def num_points(self):
        return self.grid.num_points

    @property
    def x(self):
        return self.grid.x

    @property
    def h(self):
        return self.grid.h

    def with_values(self, values, kind=None):
        return GridFunction(self.grid, values, kind=kind)

    def __repr__(self):
        return f"GridFunction(kind={self.kind!r}, L={self.half_width!r}, N={self.num_points})"

    def __eq__(self, other):
        if not isinstance(other, GridFunction):
            return NotImplemented
        return (
            self.grid == other.grid
            and self.kind == other.kind
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None

    def _binary(self, other, op):
        if isinstance(other, GridFunction):
            check_same_grid(self, other)
            other = other.values
        return GridFunction(self.grid, op(self.values, other))

    def __add__(self, other):
        return self._binary(other, np.add)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, np.subtract)

    def __rsub__(self, other):
        return self._binary(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._binary(other, np.multiply)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._binary(other, np.true_divide)

    def __neg__(self):
        return GridFunction(self.grid, -self.values)


@dataclass(frozen=True)
class NormReport:
    l1: float
    sup: float
    mixed: float


def trapezoid(values, h):
    """Composite trapezoid sum with a fixed summation order."""
    v = np.asarray(values)
    return h * (v.sum() - 0.5 * (v[0] + v[-1]))


def norm_l1(f):
    return float(trapezoid(np.abs(f.values), f.h))


def norm_sup(f):
    return float(np.max(np.abs(f.values)))


def norm_mixed(f):
    """The norm of E: ``max(||f||_1, ||f||_inf)``."""
    return max(norm_l1(f), norm_sup(f))


def norms(f):
    l1 = norm_l1(f)
    s = norm_sup(f)
    return NormReport(l1=l1, sup=s, mixed=max(l1, s))


@dataclass(frozen=True)
class LatticeParts:
    pos_part: GridFunction
    neg_part: GridFunction
    abs: GridFunction
    inf: GridFunction
    sup: GridFunction


def positive_part(f):
    check_real(f)
    return GridFunction(f.grid, np.maximum(f.values, 0.0))


def negative_part(f):
    check_real(f)
    return GridFunction(f.grid, np.maximum(-f.values, 0.0))


def lattice_abs(f):
    check_real(f)
    return GridFunction(f.grid, np.abs(f.values))


def inf(f, g):
    check_real(f)
    check_real(g)
    check_same_grid(f, g)
    return GridFunction(f.grid, np.minimum(f.values, g.values))


def sup(f, g):
    check_real(f)
    check_real(g)
    check_same_grid(f, g)
    return GridFunction(f.grid, np.maximum(f.values, g.values))


def lattice_ops(f, g):
    """Pointwise ``f+``, ``f-``, ``|f|``, ``f ∧ g`` and ``f ∨ g``.

    Raises
    ------
    GridMismatchError
        If ``f`` and ``g`` are sampled on different grids.
    LatticeKindError
        If either input is complex-kind.
    """
    return LatticeParts(
        pos_part=positive_part(f),
        neg_part=negative_part(f),
        abs=lattice_abs(f),
        inf=inf(f, g),
        sup=sup(f, g),
    )


def dist_to_positive_cone(f):
    """Distance from ``f`` to the positive cone, i.e. ``||f-||_E``.

    The nearest positive element is ``f+``; the identity is checked against
    a linear-programming oracle in the test suite.
    """
    check_real(f, "dist_to_positive_cone")
    return norm_mixed(negative_part(f))


def _shift_index(values, k):
    out = np.zeros_like(values)
    n = values.shape[-1]
    if k >= 0:
        if k < n:
            out[..., : n - k] = values[..., k:]
    else:
        if -k < n:
            out[..., -k:] = values[..., : n + k]
    return out


def _interp(x, xp, fp):
    if np.iscomplexobj(fp):
        return np.interp(x, xp, fp.real, left=0.0, right=0.0) + 1j * np.interp(
            x, xp, fp.imag, left=0.0, right=0.0
        )
    return np.interp(x, xp, fp, left=0.0, right=0.0)


def translate_values(grid, values, t):
    """Samples of ``x -> f(x + t)`` from samples of ``f`` (zero outside the grid)."""
    shift = t / grid.h
    k = round(shift)
    if abs(shift - k) <= 1e-9 * max(1.0, abs(shift)):
        return _shift_index(values, int(k))
    return _interp(grid.x + t, grid.x, values)


def translate(f, t):
    """Left translation ``(S_t f)(x) = f(x + t)``.

    Grid-aligned shifts move samples by whole indices; other shifts use
    linear interpolation, which is O(h^2) accurate for smooth ``f``.
    """
    t = check_scalar(t, "t")
    return GridFunction(f.grid, translate_values(f.grid, f.values, t), kind=f.kind)


def write_csv(f, path):
    """Write ``x,re,im`` rows; ``repr`` gives shortest round-trip decimals."""
    vals = f.values.astype(np.complex128)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "re", "im"])
        for xk, v in zip(f.x, vals):
            w.writerow([repr(float(xk)), repr(float(v.real)), repr(float(v.imag))])


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != ["x", "re", "im"]:
        raise ValueError(f"{path}: expected header 'x,re,im'")
    data = np.array([[float(c) for c in r] for r in rows[1:]], dtype=np.float64)
    if data.ndim != 2 or data.shape[0] < 3:
        raise ValueError(f"{path}: need at least 3 rows of samples")
    x = data[:, 0]
    grid = Grid(float(x[-1]), data.shape[0])
    if x[0] != -grid.half_width or not np.allclose(x, grid.x, rtol=0, atol=1e-12 * grid.half_width):
        raise ValueError(f"{path}: x column is not a uniform symmetric grid")
    re, im = data[:, 1], data[:, 2]
    if np.all(im == 0):
        return GridFunction(grid, re)
    return GridFunction(grid, re + 1j * im)
