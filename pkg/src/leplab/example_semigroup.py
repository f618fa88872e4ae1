"""A locally eventually positive semigroup with purely imaginary spectrum.

For a fixed strictly positive profile ``f0`` with unit mass, the semigroup
keeps the component of ``f`` along ``f0`` and left-translates the rest:

    (T_t f)(x) = phi(f) f0(x) + [f(x + t) - phi(f) f0(x + t)],

where ``phi(f)`` is the integral of ``f``.  On any window ``[-R, R]`` a
positive orbit turns strictly positive once ``f0(x) > f0(x + t)`` there; for
the standard Gaussian that is exactly ``t > 2R``.  Globally the orbit keeps a
negative part that drifts off to ``-inf`` without shrinking.
"""

import numpy as np

from ._base import GridTransformer, resolve_grid
from ._validation import check_nonnegative, check_real, check_scalar, check_time_grid
from .lattice import (
    GridFunction,
    dist_to_positive_cone,
    negative_part,
    norm_mixed,
    translate_values,
    trapezoid,
)
from .profiles import standard_gaussian

__all__ = ["ExampleSemigroup", "phi"]

PROFILE_MASS_TOL = 1e-8


def phi(f):
    """Integral of ``f`` by the same trapezoid rule as ``norm_l1``."""
    val = trapezoid(f.values, f.h)
    return complex(val) if f.kind == "complex" else float(val)


class ExampleSemigroup(GridTransformer):
    """Closed-form semigroup ``T_t = I on span(f0)  ⊕  translation on ker(phi)``.

    Parameters
    ----------
    profile : callable, optional
        Vectorized ``x -> f0(x)``.  Defaults to the standard Gaussian.  Any
        profile with ``0 < f0 <= 1`` at every node and unit trapezoid mass
        (within 1e-8) is accepted.
    t : float, default=0.0
        Time used by :meth:`transform`.
    half_width : float, optional
        Needed only when fitting on raw arrays instead of grid objects.
    positivity_radius : float, optional
        Check ``f0 > 0`` only on ``|x| <= positivity_radius`` (and
        ``f0 >= 0`` elsewhere).  Needed on grids so wide that the profile
        underflows to 0.0 in double precision (the Gaussian does beyond
        ``|x| ~ 38.6``).  By default strict positivity is checked everywhere.

    Attributes
    ----------
    grid_ : Grid
    f0_ : GridFunction
    """

    def __init__(self, profile=None, t=0.0, half_width=None, positivity_radius=None):
        self.profile = profile
        self.t = t
        self.half_width = half_width
        self.positivity_radius = positivity_radius

    def fit(self, X, y=None):
        grid = resolve_grid(X, self.half_width)
        check_scalar(self.t, "t", min_val=0.0)
        func = standard_gaussian if self.profile is None else self.profile
        f0 = grid.sample(func, kind="real")
        v = f0.values
        strict = np.ones(grid.num_points, dtype=bool)
        if self.positivity_radius is not None:
            strict = grid.window(check_scalar(self.positivity_radius, "positivity_radius", min_val=0.0))
        if not (np.all(v[strict] > 0) and np.all(v >= 0) and np.all(v <= 1)):
            raise ValueError(
                "profile must satisfy 0 < f0 <= 1 at every grid node "
                "(set positivity_radius if it underflows on a very wide grid)"
            )
        mass = phi(f0)
        if abs(mass - 1.0) > PROFILE_MASS_TOL:
            raise ValueError(
                f"profile mass on the grid is {mass!r}, not 1 within {PROFILE_MASS_TOL}; "
                "widen the grid or renormalize the profile"
            )
        self.grid_ = grid
        self.f0_ = f0
        return self

    def _apply(self, f):
        return self.evolve(f, self.t)

    def _split(self, f):
        c = phi(f)
        return c, f.values - c * self.f0_.values

    def evolve(self, f, t):
        """``T_t f`` evaluated pointwise on the grid."""
        self._check_grid(f)
        t = check_scalar(t, "t", min_val=0.0)
        c, g = self._split(f)
        vals = c * self.f0_.values + translate_values(self.grid_, g, t)
        return GridFunction(self.grid_, vals, kind=f.kind)

    def orbit(self, f, times):
        """Array of shape ``(len(times), N)`` with rows ``T_t f``."""
        self._check_grid(f)
        times = check_time_grid(times, "times")
        c, g = self._split(f)
        base = c * self.f0_.values
        return np.stack([base + translate_values(self.grid_, g, t) for t in times])

    def orbit_bound(self, f):
        """Uniform bound ``sup_t ||T_t f||_E <= 3 ||f||_E``."""
        return 3.0 * norm_mixed(f)

    def onset_scan(self, f, R, t_grid):
        """Per-time minimum of ``T_t f`` on ``[-R, R]`` and distance to the cone.

        Returns a ``(len(t_grid), 3)`` array with columns
        ``t, min_on_window, dist_to_cone``.
        """
        self._check_grid(f)
        check_real(f, "onset scan")
        R = check_scalar(R, "R", min_val=0.0, strict=True, max_val=self.grid_.half_width)
        t_grid = check_time_grid(t_grid)
        mask = self.grid_.window(R)
        rows = []
        for t, u in zip(t_grid, self.orbit(f, t_grid)):
            neg = np.maximum(-u, 0.0)
            dist = max(trapezoid(neg, self.grid_.h), float(neg.max()))
            rows.append((t, float(u[mask].min()), dist))
        return np.array(rows, dtype=np.float64)

    def time_to_positivity(self, f, R, t_grid):
        """Smallest sampled ``tau`` with ``T_t f > 0`` on ``[-R, R]`` for all sampled ``t >= tau``.

        Only positive, nonzero data are accepted.  Returns ``None`` when the
        last sampled time still fails.  Positivity is strict; an exact zero
        at a node counts as failure.
        """
        check_nonnegative(f)
        scan = self.onset_scan(f, R, t_grid)
        return _onset_from_minima(scan[:, 0], scan[:, 1])

    def uniform_onset_bound(self, R, dt=0.01, t_max=None):
        """Smallest sampled ``tau`` with ``f0(x) > f0(x + t)`` on ``[-R, R]`` for all sampled ``t >= tau``.

        The bound does not depend on the datum.  Time samples are
        ``0, dt, 2 dt, ...`` up to ``t_max`` (default ``L + R + dt``, past which
        the translated profile has left the window).  For the Gaussian the
        result lies in ``(2R, 2R + dt]``.
        """
        if not hasattr(self, "grid_"):
            raise ValueError("fit the semigroup before computing onset bounds")
        L = self.grid_.half_width
        R = check_scalar(R, "R", min_val=0.0, strict=True, max_val=L)
        dt = check_scalar(dt, "dt", min_val=0.0, strict=True)
        if t_max is None:
            t_max = L + R + dt
        times = dt * np.arange(int(np.floor(t_max / dt + 1e-9)) + 1)
        mask = self.grid_.window(R)
        f0 = self.f0_.values
        mins = np.array([(f0 - translate_values(self.grid_, f0, t))[mask].min() for t in times])
        return _onset_from_minima(times, mins)

    def plateau_constant(self, f):
        """``||(f - phi(f) f0)-||_E``, the large-time limit of the distance to the cone."""
        check_real(f, "plateau_constant")
        self._check_grid(f)
        c, g = self._split(f)
        return norm_mixed(negative_part(GridFunction(self.grid_, g)))

    def orbit_noncompactness_witness(self, f, t_grid):
        """``(t, dist(T_t f, E+))`` pairs.

        When ``(f - phi(f) f0)-`` is nonzero the distances level off at
        :meth:`plateau_constant` instead of decaying: the orbit is not
        relatively compact, so asymptotic positivity may fail.  The grid
        must be wide enough to hold the translated negative part.
        """
        check_real(f, "orbit_noncompactness_witness")
        t_grid = check_time_grid(t_grid)
        dists = [dist_to_positive_cone(GridFunction(self.grid_, u)) for u in self.orbit(f, t_grid)]
        return np.column_stack([t_grid, dists])


def _onset_from_minima(times, minima):
    bad = np.flatnonzero(~(minima > 0))
    if bad.size == 0:
        return float(times[0])
    if bad[-1] == len(times) - 1:
        return None
    return float(times[bad[-1] + 1])
