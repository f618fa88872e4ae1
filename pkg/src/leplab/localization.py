"""Positive multiplication operators that localize onto ``[-n, n]``.

``kind="indicator"`` multiplies by the indicator of the window (a band
projection); ``kind="urysohn"`` multiplies by a continuous piecewise-linear
profile equal to 1 on ``[-(n-1), n-1]`` and 0 outside ``[-n, n]`` (a lattice
homomorphism, not a projection).  Window endpoints are snapped to the
nearest grid node so the indicator algebra is exact.
"""

from dataclasses import asdict, dataclass

import numpy as np

from ._base import GridTransformer, resolve_grid
from ._validation import check_real, check_scalar
from .lattice import GridFunction, norm_mixed

__all__ = [
    "Localizer",
    "LawReport",
    "verify_band_projection_laws",
    "verify_lattice_homomorphism",
    "strong_convergence_to_identity",
]

KINDS = ("indicator", "urysohn")


def _snap(grid, r):
    return grid.h * np.round(r / grid.h)


def localizer_profile(grid, n, kind):
    """Multiplier values ``m_n(x_k)`` on ``grid``."""
    ax = np.abs(grid.x)
    outer = _snap(grid, n)
    # snapped radii are integer multiples of h; compare node indices, not floats
    idx = np.abs(np.arange(grid.num_points) - grid.center_index)
    k_out = int(round(outer / grid.h))
    if kind == "indicator":
        return (idx <= k_out).astype(np.float64)
    inner = _snap(grid, n - 1)
    k_in = int(round(inner / grid.h))
    m = np.zeros(grid.num_points)
    m[idx <= k_in] = 1.0
    ramp = (idx > k_in) & (idx < k_out)
    m[ramp] = (outer - ax[ramp]) / (outer - inner)
    return np.clip(m, 0.0, 1.0)


class Localizer(GridTransformer):
    """Multiplication by ``m_n`` on the fitted grid.

    Parameters
    ----------
    n : int, default=1
        Window index; the operator sees ``[-n, n]``.
    kind : {"indicator", "urysohn"}, default="indicator"
    half_width : float, optional
        Needed only when fitting on raw arrays.
    """

    def __init__(self, n=1, kind="indicator", half_width=None):
        self.n = n
        self.kind = kind
        self.half_width = half_width

    def fit(self, X, y=None):
        grid = resolve_grid(X, self.half_width)
        n = check_scalar(self.n, "n", min_val=1, integer=True)
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if n > grid.half_width:
            raise ValueError(f"window [-{n}, {n}] exceeds the grid half-width {grid.half_width}")
        self.grid_ = grid
        self.profile_ = localizer_profile(grid, n, self.kind)
        return self

    def _apply(self, f):
        return GridFunction(self.grid_, self.profile_ * f.values, kind=f.kind)

    def apply_values(self, values):
        """Multiply raw samples (any leading shape) by the profile."""
        return np.asarray(values) * self.profile_


@dataclass(frozen=True)
class LawReport:
    kind: str
    n: int
    law: str
    max_violation: float
    passed: bool

    def to_json(self):
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return d


def verify_band_projection_laws(n, m, battery):
    """Check ``P_n P_m = P_m P_n = P_n``, ``P_n^2 = P_n``, ``0 <= P_n f <= f`` and the complement.

    All identities are checked for exact equality on every battery member;
    ``max_violation`` is the largest absolute deviation seen.
    """
    if not n <= m:
        raise ValueError("need n <= m")
    grid = battery[0].grid
    Pn = Localizer(n, "indicator").fit(grid)
    Pm = Localizer(m, "indicator").fit(grid)
    viol = {"commute": 0.0, "absorb": 0.0, "idempotent": 0.0, "order": 0.0, "complement": 0.0}
    for f in battery:
        check_real(f, "band projection laws")
        v = f.values
        pn = Pn.apply_values(v)
        nm = Pn.apply_values(Pm.apply_values(v))
        mn = Pm.apply_values(Pn.apply_values(v))
        viol["commute"] = max(viol["commute"], float(np.max(np.abs(nm - mn))))
        viol["absorb"] = max(viol["absorb"], float(np.max(np.abs(nm - pn))))
        viol["idempotent"] = max(viol["idempotent"], float(np.max(np.abs(Pn.apply_values(pn) - pn))))
        fp = np.maximum(v, 0.0)
        pfp = Pn.apply_values(fp)
        viol["order"] = max(viol["order"], float(max(np.max(-pfp), np.max(pfp - fp), 0.0)))
        # (I - P_n) f must vanish on the window itself
        comp = v - pn
        viol["complement"] = max(viol["complement"], float(np.max(np.abs(comp[Pn.profile_ == 1.0]))))
    return [LawReport("indicator", n, law, val, val == 0.0) for law, val in viol.items()]


def verify_lattice_homomorphism(Q, battery):
    """Check ``|Qf| = Q|f|``, ``Q(f ∨ g) = Qf ∨ Qg`` and disjointness preservation.

    ``battery`` is a sequence of real grid functions; consecutive pairs are
    used for the two-argument laws.  For disjointness, the positive and
    negative parts of each member form a disjoint pair.
    """
    if not hasattr(Q, "profile_"):
        Q = Q.fit(battery[0].grid)
    viol = {"abs": 0.0, "sup": 0.0, "disjoint": 0.0, "positive": 0.0}
    for i, f in enumerate(battery):
        check_real(f, "lattice homomorphism check")
        g = battery[(i + 1) % len(battery)]
        a, b = f.values, g.values
        viol["abs"] = max(viol["abs"], float(np.max(np.abs(np.abs(Q.apply_values(a)) - Q.apply_values(np.abs(a))))))
        lhs = Q.apply_values(np.maximum(a, b))
        rhs = np.maximum(Q.apply_values(a), Q.apply_values(b))
        viol["sup"] = max(viol["sup"], float(np.max(np.abs(lhs - rhs))))
        qp, qm = Q.apply_values(np.maximum(a, 0.0)), Q.apply_values(np.maximum(-a, 0.0))
        viol["disjoint"] = max(viol["disjoint"], float(np.max(np.minimum(qp, qm))))
        viol["positive"] = max(viol["positive"], float(max(0.0, -np.min(Q.apply_values(np.abs(a))))))
    return [LawReport(Q.kind, int(Q.n), law, val, val == 0.0) for law, val in viol.items()]


def strong_convergence_to_identity(kind, f, n_list):
    """``(n, ||f - P_n f||_E)`` for each ``n``.

    Windows wider than the grid are allowed here: grid functions vanish
    outside ``[-L, L]``, so such a localizer acts as the identity there.
    """
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")
    out = []
    for n in n_list:
        n = check_scalar(n, "n", min_val=1, integer=True)
        m = localizer_profile(f.grid, n, kind)
        out.append((n, norm_mixed(f.with_values((1.0 - m) * f.values))))
    return np.array(out, dtype=np.float64)
