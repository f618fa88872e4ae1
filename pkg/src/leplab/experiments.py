"""Config-driven experiments behind the ``lep-lab`` command line.

Each experiment takes a fully resolved config (defaults merged in) and an
executor ``pmap(fn, items)`` that preserves input order, and returns an
:class:`ExperimentResult`.  Every record carries its own ``pass`` flag and
the run passes iff all records do.
"""

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ._fit import loglog_slope
from .approx_eigen import claimed_residual_l1_bound, residual_l1_majorant, weyl_table
from .example_semigroup import ExampleSemigroup, _onset_from_minima
from .lattice import Grid, GridFunction, norm_l1
from .localization import (
    Localizer,
    strong_convergence_to_identity,
    verify_band_projection_laws,
    verify_lattice_homomorphism,
)
from .polyharmonic import PolyharmonicFlow
from .profiles import random_positive_battery, random_signed_battery, smooth_bump, standard_gaussian
from .resolvent import (
    QuadratureSpec,
    check_localized_resolvent_inequality,
    laplace_orbit,
    spectral_bound_probe,
)


@dataclass
class ExperimentResult:
    records: list
    tables: dict = field(default_factory=dict)  # name -> (header, rows)
    metrics: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(bool(r["pass"]) for r in self.records)


@dataclass(frozen=True)
class Experiment:
    name: str
    description: str
    anchor: str
    blocks: tuple  # which of "grid", "model" the experiment reads
    defaults: dict
    sweep_schema: dict
    tol_schema: dict
    runner: Callable


def _grid(cfg):
    return Grid(cfg["grid"]["half_width"], cfg["grid"]["num_points"])


def _flow(cfg, **over):
    m = cfg["model"]
    return PolyharmonicFlow(
        alpha=m["alpha"], half_width=m["box_half_width"], num_points=m["num_points"], **over
    ).fit()


def _times(dt, t_max, start=0.0):
    n = int(np.floor((t_max - start) / dt + 1e-9))
    return start + dt * np.arange(n + 1)


# --------------------------------------------------------------------------- runners


def run_lep_onset_example(cfg, pmap):
    sw = cfg["sweep"]
    grid = _grid(cfg)
    T = ExampleSemigroup().fit(grid)
    rng = np.random.default_rng(cfg["seed"])
    battery = [grid.sample(p) for p in random_positive_battery(rng, sw["battery_size"])]
    times = _times(sw["dt"], sw["t_max"])
    records, tables = [], {}

    def onset(args):
        i, R = args
        return i, R, T.time_to_positivity(battery[i], R, times)

    jobs = [(i, R) for R in sw["R_list"] for i in range(len(battery))]
    summary_rows = []
    for i, R, tau in pmap(onset, jobs):
        limit = 2 * R + sw["dt"]
        ok = tau is not None and tau <= limit + 1e-12
        records.append({"check": "time_to_positivity", "datum": i, "R": R, "tau": tau, "limit": limit, "pass": ok})
        summary_rows.append((i, R, np.nan if tau is None else tau, limit))
    tables["onset_summary"] = ("datum,R,tau,limit", summary_rows)

    for R, tau in zip(sw["R_list"], pmap(lambda R: T.uniform_onset_bound(R, dt=sw["uniform_dt"]), sw["R_list"])):
        ok = tau is not None and 2 * R < tau <= 2 * R + sw["uniform_dt"] + 1e-12
        records.append({"check": "uniform_onset_bound", "R": R, "tau": tau, "pass": ok})
        scan = T.onset_scan(battery[0], R, times)
        tables[f"onset_scan_R{R:g}"] = ("t,min_on_window,dist_to_cone", scan.tolist())
    worst = max((r["tau"] - 2 * r["R"]) for r in records if r["tau"] is not None)
    return ExperimentResult(records, tables, {"max_tau_minus_2R": worst})


def run_lep_onset_polyharmonic(cfg, pmap):
    sw, tol = cfg["sweep"], cfg["tolerances"]
    flow = _flow(cfg)
    u0 = flow.grid_.sample(smooth_bump(0.0, sw["bump_radius"], 1.0))
    times = _times(sw["dt"], cfg["model"]["t_max"], start=sw["dt"])
    mass0 = norm_l1(u0)
    records, tables, onsets = [], {}, {}
    for K, rows in zip(sw["K_list"], pmap(lambda K: flow.scan(u0, K, times), sw["K_list"])):
        tau = _onset_from_minima(rows[:, 0], rows[:, 3])
        onsets[f"K={K:g}"] = tau
        records.append({"check": "lep_onset", "K_radius": K, "tau": tau, "pass": tau is not None})
        drift = float(np.max(np.abs(rows[:, 4] - mass0))) / mass0
        records.append({"check": "mass", "K_radius": K, "rel_drift": drift, "tol": tol["mass_rel"], "pass": drift <= tol["mass_rel"]})
        tables[f"scan_K{K:g}"] = ("t,sup_norm,l1_norm,min_on_K,mass", rows.tolist())
    kmin = float(flow.kernel(1.0).values.min())
    # sign-changing kernel for alpha > 1, the positive heat kernel for alpha = 1
    ok = kmin < 0 if flow.alpha > 1 else kmin >= -1e-10
    records.append({"check": "kernel_min_t1", "alpha": flow.alpha, "value": kmin, "pass": ok})
    return ExperimentResult(records, tables, {"onsets": onsets, "kernel_min_t1": kmin})


def run_weyl_residuals(cfg, pmap):
    sw, tol = cfg["sweep"], cfg["tolerances"]
    n_list = sorted(sw["n_list"])
    records, tables, slopes = [], {}, {}
    tabs = pmap(lambda a: weyl_table(a, n_list, sw["h"], sw["base_half_width"]), sw["alpha_list"])
    for alpha, tab in zip(sw["alpha_list"], tabs):
        lower = np.sqrt(2 * np.pi / abs(alpha))
        for row in tab:
            n = int(row[0])
            claimed = float(claimed_residual_l1_bound(alpha, n))
            records.append({
                "check": "weyl_row", "alpha": alpha, "n": n,
                "integral": row[7], "integral_ok": row[7] <= tol["integral"],
                "l1": row[1], "l1_lower_ok": row[1] >= lower - tol["l1_lower"],
                "residual_l1": row[4], "claimed_bound": claimed,
                "valid_majorant": float(residual_l1_majorant(alpha, n)),
                "bound_ok": row[4] <= claimed + tol["bound"],
            })
            r = records[-1]
            r["pass"] = bool(r["integral_ok"] and r["l1_lower_ok"] and r["bound_ok"])
        slope = loglog_slope(tab[:, 0], tab[:, 6])
        slopes[f"alpha={alpha:g}"] = slope
        ok = abs(slope - sw["target_slope"]) <= tol["slope"]
        records.append({"check": "residual_slope", "alpha": alpha, "slope": slope, "target": sw["target_slope"], "pass": ok})
        tables[f"weyl_alpha{alpha:g}"] = (
            "n,l1,sup,mixed,residual_l1,residual_sup,residual_mixed",
            [(int(r[0]),) + tuple(r[1:7]) for r in tab],
        )
    return ExperimentResult(records, tables, {"slope": slopes})


def run_decay_fit(cfg, pmap):
    sw, tol = cfg["sweep"], cfg["tolerances"]
    flow = _flow(cfg)
    u0 = flow.grid_.sample(smooth_bump(0.0, sw["bump_radius"], 1.0))
    t_list = np.geomspace(sw["t_min"], cfg["model"]["t_max"], sw["num_times"])
    states = flow.orbit(u0, t_list)
    sups = np.max(np.abs(states), axis=1)
    slope = loglog_slope(t_list, sups)
    target = -1.0 / (2.0 * flow.alpha)
    rec = {"check": "decay_slope", "slope": slope, "target": target, "tol": tol["slope"], "pass": abs(slope - target) <= tol["slope"]}
    return ExperimentResult([rec], {"decay": ("t,sup_norm", list(zip(t_list.tolist(), sups.tolist())))}, {"slope": slope})


def run_resolvent_audit(cfg, pmap):
    sw, tol = cfg["sweep"], cfg["tolerances"]
    records, tables = [], {}

    flow = _flow(cfg)
    xi0 = np.pi * sw["mode_index"] / flow.grid_.half_width
    mode = flow.grid_.sample(lambda x: np.cos(xi0 * x))
    bound = flow.orbit_bound(mode)

    def eig(lam_pair):
        lam = complex(*lam_pair)
        q = QuadratureSpec.for_decay(lam.real, bound, sw["eigen_dt"], tol["tail"])
        got = laplace_orbit(flow, mode, lam, q, tail_tol=tol["tail"])
        want = mode.values / (lam + xi0 ** (2 * flow.alpha))
        return lam, float(np.max(np.abs(got.values - want)))

    eig_rows = []
    for lam, err in pmap(eig, sw["eigen_lambdas"]):
        records.append({"check": "eigenmode", "lambda": [lam.real, lam.imag], "error": err, "tol": tol["eigen"], "pass": err <= tol["eigen"]})
        eig_rows.append((lam.real, lam.imag, err))
    tables["eigenmode"] = ("lambda_re,lambda_im,error", eig_rows)

    grid = _grid(cfg)
    T = ExampleSemigroup().fit(grid)
    P = Localizer(sw["window"], "indicator").fit(grid)
    rng = np.random.default_rng(cfg["seed"])
    battery = [grid.sample(p) for p in random_signed_battery(rng, sw["battery_size"])]
    lam = complex(*sw["inequality_lambda"])

    def ineq(f):
        q = QuadratureSpec.for_decay(lam.real, T.orbit_bound(f), sw["dt"], tol["tail"])
        return check_localized_resolvent_inequality(T, P, f, lam, q, tol=tol["inequality"], tail_tol=tol["tail"])

    ineq_rows = []
    for i, rep in enumerate(pmap(ineq, battery)):
        records.append(dict(check="localized_inequality", datum=i, **rep.to_json()))
        ineq_rows.append((i, rep.tau_n, rep.max_violation))
    tables["inequality"] = ("datum,tau_n,max_violation", ineq_rows)
    worst_eig = max(r[2] for r in eig_rows)
    worst_ineq = max(r[2] for r in ineq_rows)
    return ExperimentResult(records, tables, {"max_eigen_error": worst_eig, "max_violation": worst_ineq})


def run_spectral_bound_probe(cfg, pmap):
    sw, tol = cfg["sweep"], cfg["tolerances"]
    if sw["model"] == "example":
        grid = _grid(cfg)
        model = ExampleSemigroup().fit(grid)
    else:
        model = _flow(cfg)
        grid = model.grid_
    datum = sw["datum"]
    if datum == "f0":
        f = grid.sample(standard_gaussian)
    elif datum == "bump":
        f = grid.sample(smooth_bump(0.0, 1.0, 1.0))
    else:
        f = grid.sample(lambda x: smooth_bump(-1.0, 1.0)(x) - smooth_bump(1.0, 1.0)(x))
    expect = sw["expect"] or {"f0": "pole", "bump": "diverge", "zero-mean": "bounded"}[datum]
    sigmas = sorted(sw["sigma_list"], reverse=True)
    rows = np.vstack(pmap(lambda s: spectral_bound_probe(model, f, [s], sw["dt"], tol["tail"], sw["t_max_cap"]), sigmas))
    slope = loglog_slope(rows[:, 0], rows[:, 1])
    records = []
    if expect == "pole":
        for s, nv in rows:
            rel = abs(nv * s - 1.0)
            records.append({"check": "one_over_sigma", "sigma": s, "norm_E": nv, "rel_error": rel, "tol": tol["rel"], "pass": rel <= tol["rel"]})
    elif expect == "diverge":
        records.append({"check": "divergence_slope", "slope": slope, "max_slope": -0.7, "pass": slope <= -0.7})
    else:
        records.append({"check": "bounded", "slope": slope, "min_slope": -0.3, "pass": slope >= -0.3})
    return ExperimentResult(records, {"probe": ("sigma,norm_E", rows.tolist())}, {"slope": slope, "expect": expect})


def run_localizer_laws(cfg, pmap):
    sw = cfg["sweep"]
    grid = _grid(cfg)
    rng = np.random.default_rng(cfg["seed"])
    battery = [grid.sample(p) for p in random_signed_battery(rng, sw["battery_size"])]
    reports = verify_band_projection_laws(sw["n"], sw["m"], battery)
    reports += verify_band_projection_laws(sw["n"], sw["n"], battery)
    for kind in ("indicator", "urysohn"):
        reports += verify_lattice_homomorphism(Localizer(sw["urysohn_n"], kind).fit(grid), battery)
    records = [dict(check="law", **r.to_json()) for r in reports]
    tables = {}
    f0 = grid.sample(standard_gaussian)
    for kind, seq in zip(("indicator", "urysohn"), pmap(lambda k: strong_convergence_to_identity(k, f0, sw["n_list"]), ("indicator", "urysohn"))):
        err = seq[:, 1]
        ok = bool(np.all(np.diff(err) <= 0) and err[-1] == 0.0)
        records.append({"check": "strong_convergence", "kind": kind, "final_error": float(err[-1]), "pass": ok})
        tables[f"strong_convergence_{kind}"] = ("n,error", [(int(n), e) for n, e in seq])
    worst = max(r["max_violation"] for r in records if r["check"] == "law")
    return ExperimentResult(records, tables, {"max_law_violation": worst})


# --------------------------------------------------------------------------- registry

_NUM = {"type": "number"}
_POS = {"type": "number", "exclusiveMinimum": 0}
_POSINT = {"type": "integer", "minimum": 1}


def _list(item):
    return {"type": "array", "items": item, "minItems": 1}


_LAMBDA = {"type": "array", "items": _NUM, "minItems": 2, "maxItems": 2}

EXPERIMENTS = {
    e.name: e
    for e in [
        Experiment(
            "lep-onset-example",
            "time to positivity on [-R, R] for random positive data and the datum-free bound",
            "uniform onset: positive on [-R, R] for every t > 2R",
            ("grid",),
            {
                "grid": {"half_width": 30.0, "num_points": 3001},
                "sweep": {"R_list": [1, 3, 5], "t_max": 15.0, "dt": 0.1, "battery_size": 10, "uniform_dt": 0.01},
                "tolerances": {},
            },
            {"R_list": _list(_POS), "t_max": _POS, "dt": _POS, "battery_size": _POSINT, "uniform_dt": _POS},
            {},
            run_lep_onset_example,
        ),
        Experiment(
            "lep-onset-polyharmonic",
            "onset of positivity on [-K, K] for the polyharmonic flow of a centered bump",
            "local eventual positivity of the biharmonic heat flow; sign-changing kernel",
            ("model",),
            {
                "model": {"alpha": 2.0, "box_half_width": 200.0, "num_points": 16384, "t_max": 100.0},
                "sweep": {"K_list": [5, 10], "dt": 0.2, "bump_radius": 1.0},
                "tolerances": {"mass_rel": 1e-8},
            },
            {"K_list": _list(_POS), "dt": _POS, "bump_radius": _POS},
            {"mass_rel": _POS},
            run_lep_onset_polyharmonic,
        ),
        Experiment(
            "weyl-residuals",
            "norms and residuals of the approximate eigenvectors at i*alpha",
            "i*alpha lies in the spectrum: mean-zero Weyl family with vanishing residual",
            (),
            {
                "sweep": {
                    "alpha_list": [1.0],
                    "n_list": [4, 8, 16, 32, 64, 128, 256],
                    "h": 0.02,
                    "base_half_width": 20.0,
                    "target_slope": -1.5,
                },
                "tolerances": {"integral": 1e-8, "l1_lower": 1e-6, "bound": 1e-8, "slope": 0.1},
            },
            {
                "alpha_list": _list({"type": "number", "not": {"const": 0}}),
                "n_list": {"type": "array", "items": _POSINT, "minItems": 3},
                "h": _POS,
                "base_half_width": _POS,
                "target_slope": _NUM,
            },
            {"integral": _POS, "l1_lower": _POS, "bound": _POS, "slope": _POS},
            run_weyl_residuals,
        ),
        Experiment(
            "decay-fit",
            "sup-norm decay exponent of the polyharmonic flow over a decade of t",
            "sup-norm decay like t^(-N/(2 alpha)), t^(-1/4) for the biharmonic case",
            ("model",),
            {
                "model": {"alpha": 2.0, "box_half_width": 200.0, "num_points": 65536, "t_max": 1000.0},
                "sweep": {"t_min": 100.0, "num_times": 9, "bump_radius": 1.0},
                "tolerances": {"slope": 0.05},
            },
            {"t_min": _POS, "num_times": {"type": "integer", "minimum": 3}, "bump_radius": _POS},
            {"slope": _POS},
            run_decay_fit,
        ),
        Experiment(
            "resolvent-audit",
            "eigenmode resolvent oracle and the localized resolvent inequality",
            "resolvent as Laplace transform; |P R(lam) f| <= P R(Re lam)|f| + P r(Re lam)",
            ("grid", "model"),
            {
                "grid": {"half_width": 20.0, "num_points": 801},
                "model": {"alpha": 1.0, "box_half_width": 31.41592653589793, "num_points": 1024, "t_max": 1.0},
                "sweep": {
                    "mode_index": 3,
                    "eigen_lambdas": [[1.0, 0.0], [2.0, 3.0]],
                    "eigen_dt": 1e-3,
                    "battery_size": 10,
                    "window": 5,
                    "inequality_lambda": [0.5, 2.0],
                    "dt": 0.01,
                },
                "tolerances": {"eigen": 1e-6, "inequality": 1e-6, "tail": 1e-10},
            },
            {
                "mode_index": _POSINT,
                "eigen_lambdas": _list(_LAMBDA),
                "eigen_dt": _POS,
                "battery_size": _POSINT,
                "window": _POSINT,
                "inequality_lambda": _LAMBDA,
                "dt": _POS,
            },
            {"eigen": _POS, "inequality": _POS, "tail": _POS},
            run_resolvent_audit,
        ),
        Experiment(
            "spectral-bound-probe",
            "growth of ||R(sigma) f||_E as sigma decreases to 0",
            "the spectral bound 0 is a singularity of the resolvent",
            ("grid", "model"),
            {
                "grid": {"half_width": 20.0, "num_points": 801},
                "model": {"alpha": 2.0, "box_half_width": 200.0, "num_points": 8192, "t_max": 1.0},
                "sweep": {
                    "model": "example",
                    "datum": "f0",
                    "expect": None,
                    "sigma_list": [0.5, 0.25, 0.125],
                    "dt": 0.01,
                    "t_max_cap": 1e4,
                },
                "tolerances": {"rel": 0.02, "tail": 1e-10},
            },
            {
                "model": {"enum": ["example", "polyharmonic"]},
                "datum": {"enum": ["f0", "bump", "zero-mean"]},
                "expect": {"enum": [None, "pole", "diverge", "bounded"]},
                "sigma_list": _list(_POS),
                "dt": _POS,
                "t_max_cap": _POS,
            },
            {"rel": _POS, "tail": _POS},
            run_spectral_bound_probe,
        ),
        Experiment(
            "localizer-laws",
            "band-projection algebra, lattice-homomorphism laws and strong convergence",
            "localizing operators: band projections and Urysohn multipliers",
            ("grid",),
            {
                "grid": {"half_width": 20.0, "num_points": 4001},
                "sweep": {"n": 2, "m": 5, "urysohn_n": 3, "battery_size": 20, "n_list": list(range(1, 26))},
                "tolerances": {},
            },
            {"n": _POSINT, "m": _POSINT, "urysohn_n": _POSINT, "battery_size": _POSINT, "n_list": _list(_POSINT)},
            {},
            run_localizer_laws,
        ),
    ]
}
