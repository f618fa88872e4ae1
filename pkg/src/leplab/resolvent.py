"""Resolvents as truncated Laplace transforms of sampled orbits.

For a bounded semigroup and ``Re(lam) > 0``,

    R(lam) f = integral_0^inf exp(-lam t) T_t f dt,

which is approximated by the composite trapezoid rule on ``[0, t_max]``.
The truncation tail is bounded by ``B exp(-Re(lam) t_max) / Re(lam)`` with
``B`` the model's uniform orbit bound, and is required to stay below
``tail_tol``.

A *model* is any object with ``grid_``, ``orbit(f, times)`` (rows of
``T_t f``) and ``orbit_bound(f)``; a ``laplace_sum`` method, when present,
replaces the explicit orbit sum with an equivalent faster one.
"""

from dataclasses import dataclass, field

import numpy as np

from ._validation import check_real, check_scalar
from .lattice import GridFunction, lattice_abs, negative_part, norm_mixed, positive_part

__all__ = [
    "QuadratureSpec",
    "TailBudgetError",
    "LocalizedResolventReport",
    "laplace_orbit",
    "remainder_term",
    "localized_onset",
    "check_localized_resolvent_inequality",
    "spectral_bound_probe",
]

_CHUNK = 256


class TailBudgetError(ValueError):
    """The horizon is too short (or would exceed its cap) for the tail tolerance."""

    def __init__(self, message, required_t_max):
        super().__init__(message)
        self.required_t_max = required_t_max


def required_horizon(sigma, bound, tail_tol):
    if bound <= 0:
        return 0.0
    return max(0.0, float(np.log(bound / (sigma * tail_tol)) / sigma))


@dataclass(frozen=True)
class QuadratureSpec:
    """Trapezoid nodes ``0, dt, ..., n dt`` with ``n = ceil(t_max / dt)``."""

    t_max: float
    dt: float
    rule: str = "trapezoid"

    def __post_init__(self):
        t_max = check_scalar(self.t_max, "t_max", min_val=0.0, strict=True)
        dt = check_scalar(self.dt, "dt", min_val=0.0, strict=True)
        if not dt < t_max:
            raise ValueError(f"dt={dt} must be smaller than t_max={t_max}")
        if self.rule != "trapezoid":
            raise ValueError(f"unsupported quadrature rule {self.rule!r}")
        object.__setattr__(self, "t_max", t_max)
        object.__setattr__(self, "dt", dt)

    @classmethod
    def for_decay(cls, sigma, bound, dt, tail_tol=1e-10, t_max_cap=None):
        """Shortest horizon whose tail is below ``tail_tol`` for decay rate ``sigma``."""
        sigma = check_scalar(sigma, "sigma", min_val=0.0, strict=True)
        t_max = max(required_horizon(sigma, bound, tail_tol), 2.0 * dt)
        if t_max_cap is not None and t_max > t_max_cap:
            raise TailBudgetError(
                f"sigma={sigma}: tail tolerance {tail_tol} needs t_max={t_max:.4g} > cap {t_max_cap}",
                t_max,
            )
        return cls(t_max, dt)

    @property
    def num_steps(self):
        return int(np.ceil(self.t_max / self.dt - 1e-9))

    @property
    def horizon(self):
        """Last node; at least ``t_max``."""
        return self.num_steps * self.dt

    def nodes(self):
        n = self.num_steps
        times = self.dt * np.arange(n + 1)
        weights = np.full(n + 1, self.dt)
        weights[0] = weights[-1] = 0.5 * self.dt
        return times, weights

    def tail_bound(self, sigma, bound):
        return bound * np.exp(-sigma * self.horizon) / sigma

    def halved(self):
        return QuadratureSpec(self.t_max, self.dt / 2, self.rule)


def _orbit_sum(model, f, lam, times, weights):
    if hasattr(model, "laplace_sum"):
        return model.laplace_sum(f, lam, times, weights)
    acc = None
    for start in range(0, times.size, _CHUNK):
        tc = times[start : start + _CHUNK]
        coef = weights[start : start + _CHUNK] * np.exp(-lam * tc)
        part = np.tensordot(coef, model.orbit(f, tc), axes=(0, 0))
        acc = part if acc is None else acc + part
    return acc


def _as_output(grid, values, real):
    if real:
        return GridFunction(grid, np.real(values))
    return GridFunction(grid, values, kind="complex")


def laplace_orbit(model, f, lam, q, loc=None, tail_tol=1e-10):
    """Trapezoid approximation of ``loc(R(lam) f)``.

    Raises
    ------
    TailBudgetError
        If ``B exp(-Re(lam) t_max) / Re(lam) > tail_tol``; the exception
        carries the horizon that would be needed.
    """
    lam = complex(lam)
    sigma = lam.real
    if not sigma > 0:
        raise ValueError(f"Re(lambda) must be positive for bounded models, got {lam}")
    bound = model.orbit_bound(f)
    if q.tail_bound(sigma, bound) > tail_tol:
        need = required_horizon(sigma, bound, tail_tol)
        raise TailBudgetError(
            f"truncation tail {q.tail_bound(sigma, bound):.3e} exceeds {tail_tol}; need t_max >= {need:.4g}",
            need,
        )
    times, weights = q.nodes()
    lam_arg = lam.real if lam.imag == 0 else lam
    total = _orbit_sum(model, f, lam_arg, times, weights)
    if loc is not None:
        total = loc.apply_values(total)
    real = f.kind == "real" and lam.imag == 0
    return _as_output(model.grid_, total, real)


def _remainder_values(model, f, sigma, times, weights):
    af = lattice_abs(f)
    acc = np.zeros(f.num_points)
    for start in range(0, times.size, _CHUNK):
        tc = times[start : start + _CHUNK]
        coef = weights[start : start + _CHUNK] * np.exp(-sigma * tc)
        diff = np.abs(model.orbit(f, tc)) - model.orbit(af, tc)
        acc = acc + np.tensordot(coef, diff, axes=(0, 0))
    return acc


def remainder_term(model, f, sigma, tau_n, dt=0.01):
    """Trapezoid value of ``integral_0^tau_n exp(-sigma t) (|T_t f| - T_t |f|) dt``.

    The step is the largest value ``<= dt`` that divides ``tau_n``.
    """
    check_real(f, "remainder_term")
    sigma = check_scalar(sigma, "sigma")
    tau_n = check_scalar(tau_n, "tau_n", min_val=0.0)
    if tau_n == 0.0:
        return GridFunction(f.grid, np.zeros(f.num_points))
    n = int(np.ceil(tau_n / dt - 1e-9))
    step = tau_n / n
    times = step * np.arange(n + 1)
    weights = np.full(n + 1, step)
    weights[0] = weights[-1] = 0.5 * step
    return GridFunction(f.grid, _remainder_values(model, f, sigma, times, weights))


def localized_onset(model, P, f, times, start=None):
    """First node ``tau`` after which ``P T_t f+ >= 0`` and ``P T_t f- >= 0`` at every later node.

    When ``start`` is given, only that (snapped-up) node is verified and
    returned.  Returns ``None`` if the last node still fails.
    """
    fp, fm = positive_part(f), negative_part(f)
    ok = np.empty(times.size, dtype=bool)
    for start_i in range(0, times.size, _CHUNK):
        tc = times[start_i : start_i + _CHUNK]
        a = P.apply_values(model.orbit(fp, tc))
        b = P.apply_values(model.orbit(fm, tc))
        ok[start_i : start_i + _CHUNK] = (a.min(axis=1) >= 0) & (b.min(axis=1) >= 0)
    bad = np.flatnonzero(~ok)
    first_good = 0 if bad.size == 0 else bad[-1] + 1
    if first_good >= times.size:
        return None
    if start is None:
        return int(first_good)
    idx = int(np.searchsorted(times, start - 1e-12))
    if idx >= times.size or idx < first_good:
        return None
    return idx


@dataclass
class LocalizedResolventReport:
    lam: complex
    tau_n: float
    max_violation: float
    tol: float
    passed: bool
    lhs: GridFunction = field(repr=False)
    rhs_resolvent: GridFunction = field(repr=False)
    rhs_remainder: GridFunction = field(repr=False)

    def to_json(self):
        return {
            "lambda": [self.lam.real, self.lam.imag],
            "tau_n": self.tau_n,
            "max_violation": self.max_violation,
            "tol": self.tol,
            "pass": self.passed,
        }


def check_localized_resolvent_inequality(model, P, f, lam, q, tau_n=None, tol=1e-6, tail_tol=1e-10):
    """Compare ``|P R(lam) f|`` with ``P R(Re lam)|f| + P r(Re lam)`` node by node.

    ``r`` is :func:`remainder_term` over ``[0, tau_n]``.  The hypothesis that
    both localized orbits of ``f+`` and ``f-`` are positive from ``tau_n`` on
    is verified at every quadrature node; if ``tau_n`` is omitted the
    earliest such node is used.  ``tau_n`` is snapped up to a node.

    Raises
    ------
    ValueError
        If the positivity hypothesis cannot be verified within the horizon.
    """
    check_real(f, "localized resolvent inequality")
    lam = complex(lam)
    sigma = lam.real
    times, weights = q.nodes()
    idx = localized_onset(model, P, f, times, start=tau_n)
    if idx is None:
        raise ValueError(
            "could not verify P T_t f+ >= 0 and P T_t f- >= 0 from tau_n on within the horizon "
            f"t_max={q.horizon}"
        )
    tau = float(times[idx])
    lhs = np.abs(laplace_orbit(model, f, lam, q, loc=P, tail_tol=tail_tol).values)
    res = laplace_orbit(model, lattice_abs(f), sigma, q, loc=P, tail_tol=tail_tol).values
    w_tau = weights[: idx + 1].copy()
    if idx > 0:
        w_tau[-1] = 0.5 * q.dt
    else:
        w_tau[:] = 0.0
    rem = P.apply_values(_remainder_values(model, f, sigma, times[: idx + 1], w_tau))
    viol = float(np.max(lhs - (res + rem)))
    grid = model.grid_
    return LocalizedResolventReport(
        lam=lam,
        tau_n=tau,
        max_violation=viol,
        tol=tol,
        passed=bool(viol <= tol),
        lhs=GridFunction(grid, lhs),
        rhs_resolvent=GridFunction(grid, res),
        rhs_remainder=GridFunction(grid, rem),
    )


def spectral_bound_probe(model, f, sigma_list, dt=0.01, tail_tol=1e-10, t_max_cap=1e4):
    """``(sigma, ||R(sigma) f||_E)`` for decreasing positive ``sigma``.

    Growth like ``1/sigma`` signals a singularity of the resolvent at the
    spectral bound 0.  Each horizon is sized from the tail budget; a budget
    above ``t_max_cap`` raises :class:`TailBudgetError` rather than
    truncating silently.
    """
    sig = np.asarray(sigma_list, dtype=np.float64)
    if sig.ndim != 1 or sig.size == 0 or np.any(sig <= 0):
        raise ValueError("sigma_list must be a nonempty sequence of positive numbers")
    if sig.size > 1 and not np.all(np.diff(sig) < 0):
        raise ValueError("sigma_list must be strictly decreasing")
    bound = model.orbit_bound(f)
    rows = []
    for s in sig:
        q = QuadratureSpec.for_decay(float(s), bound, dt, tail_tol, t_max_cap)
        rows.append((float(s), norm_mixed(laplace_orbit(model, f, float(s), q, tail_tol=tail_tol))))
    return np.array(rows, dtype=np.float64)
