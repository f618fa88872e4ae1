"""Approximate eigenvectors of the translation generator at ``i*alpha``.

The family

    w_n(x) = n^{-1/2} (1 + i x / n) exp(-alpha x^2 / (2n) + i alpha x)

has zero mean (so it lies in the domain of the generator, which acts as
``d/dx`` on mean-zero functions), ``||w_n||_1 >= sqrt(2 pi / alpha)`` and a
residual ``w_n' - i alpha w_n`` that tends to zero in the norm of E.

Differentiating gives the residual in closed form,

    w_n' - i alpha w_n = n^{-3/2} (i - alpha x - i alpha x^2 / n) E_n(x),
    E_n(x) = exp(-alpha x^2 / (2n) + i alpha x),

whose L1 norm behaves like ``2 / sqrt(n)`` for large ``n``.  The majorant
``(1/n) sqrt(2 pi / (alpha n)) + 2 n^{-3/2}`` is *not* an upper bound for
it; :func:`residual_l1_majorant` returns a valid one.
"""

from dataclasses import dataclass

import numpy as np

from ._fit import loglog_slope
from ._validation import check_scalar
from .lattice import Grid, GridFunction, norm_l1, norm_mixed, norm_sup, trapezoid

__all__ = [
    "WeylParams",
    "weyl_grid",
    "make_w",
    "residual",
    "residual_l1_majorant",
    "claimed_residual_l1_bound",
    "loglog_slope",
    "weyl_decay_fit",
    "weyl_table",
]

TAIL_TOL = 1e-12


@dataclass(frozen=True)
class WeylParams:
    alpha: float
    n: int

    def __post_init__(self):
        a = check_scalar(self.alpha, "alpha")
        if a == 0:
            raise ValueError("alpha must be nonzero")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "n", check_scalar(self.n, "n", min_val=1, integer=True))

    @property
    def beta(self):
        return abs(self.alpha)


def weyl_grid(params, h=0.02, base_half_width=20.0):
    """Grid wide enough that the Gaussian envelope is below 1e-14 at the edge."""
    L = max(base_half_width, 8.0 * np.sqrt(params.n / params.beta))
    return Grid.from_spacing(L, h)


def _check_tail(params, grid):
    edge = np.exp(-params.beta * grid.half_width**2 / (2 * params.n))
    if not edge < TAIL_TOL:
        need = np.sqrt(2 * params.n * np.log(1 / TAIL_TOL) / params.beta)
        raise ValueError(
            f"grid half-width {grid.half_width} too narrow for n={params.n}, alpha={params.alpha}: "
            f"envelope at the edge is {edge:.3e}; use L > {need:.2f}"
        )


def _envelope(params, x):
    b, n = params.beta, params.n
    return np.exp(-b * x * x / (2 * n) + 1j * b * x)


def make_w(params, grid):
    """Samples of ``w_n``; negative ``alpha`` uses the conjugate of the ``|alpha|`` family."""
    _check_tail(params, grid)
    x = grid.x
    n = params.n
    w = (1 + 1j * x / n) * _envelope(params, x) / np.sqrt(n)
    if params.alpha < 0:
        w = np.conj(w)
    return GridFunction(grid, w, kind="complex")


def residual(params, grid):
    """Samples of ``A w_n - i alpha w_n`` from the closed form (no differencing)."""
    _check_tail(params, grid)
    x = grid.x
    n, b = params.n, params.beta
    r = (1j - b * x - 1j * b * x * x / n) * _envelope(params, x) / n**1.5
    if params.alpha < 0:
        r = np.conj(r)
    return GridFunction(grid, r, kind="complex")


def residual_l1_majorant(alpha, n):
    """Upper bound ``2/sqrt(n) + (2/n) sqrt(2 pi / |alpha|)`` for ``||A w_n - i alpha w_n||_1``.

    From ``|i - a x - i a x^2/n| <= 1 + a|x| + a x^2/n`` and Gaussian moments.
    """
    b = abs(alpha)
    return 2.0 / np.sqrt(n) + (2.0 / n) * np.sqrt(2 * np.pi / b)


def claimed_residual_l1_bound(alpha, n):
    """The smaller majorant ``(1/n) sqrt(2 pi / (alpha n)) + 2 n^{-3/2}``.

    Kept for comparison only; the true residual exceeds it for every ``n``.
    """
    b = abs(alpha)
    return (1.0 / n) * np.sqrt(2 * np.pi / (b * n)) + 2.0 / n**1.5


def weyl_table(alpha, n_list, h=0.02, base_half_width=20.0):
    """Rows ``n, l1, sup, mixed, residual_l1, residual_sup, residual_mixed, integral``."""
    rows = []
    for n in sorted(int(k) for k in n_list):
        p = WeylParams(alpha, n)
        grid = weyl_grid(p, h, base_half_width)
        w = make_w(p, grid)
        r = residual(p, grid)
        integral = abs(trapezoid(w.values, grid.h))
        rows.append(
            (n, norm_l1(w), norm_sup(w), norm_mixed(w), norm_l1(r), norm_sup(r), norm_mixed(r), integral)
        )
    return np.array(rows, dtype=np.float64)


def weyl_decay_fit(alpha, n_list, h=0.02, base_half_width=20.0, norm="mixed"):
    """Fitted exponent of ``n`` in ``||A w_n - i alpha w_n||`` (``norm``: l1, sup or mixed)."""
    if len(n_list) < 3:
        raise ValueError("a slope fit needs at least 3 points")
    col = {"l1": 4, "sup": 5, "mixed": 6}[norm]
    table = weyl_table(alpha, n_list, h, base_half_width)
    return loglog_slope(table[:, 0], table[:, col])
