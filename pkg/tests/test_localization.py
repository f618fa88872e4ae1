import json
from math import erfc, sqrt

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from leplab import Grid, GridFunction, Localizer
from leplab.lattice import norm_mixed
from leplab.localization import (
    localizer_profile,
    strong_convergence_to_identity,
    verify_band_projection_laws,
    verify_lattice_homomorphism,
)
from leplab.profiles import random_signed_battery, smooth_bump, standard_gaussian

G = Grid(20.0, 4001)
G_SMALL = Grid(6.0, 121)
signed = arrays(np.float64, 121, elements=st.floats(-3, 3, allow_nan=False))


def battery(rng, k=20):
    return [G.sample(p) for p in random_signed_battery(rng, k)]


class TestApply:
    def test_inside_unchanged(self):
        f = G.sample(smooth_bump(0.5, 1.0))
        P = Localizer(2).fit(G)
        np.testing.assert_array_equal(P.transform(f).values, f.values)

    def test_outside_killed(self):
        f = G.sample(smooth_bump(8.0, 1.0))
        np.testing.assert_array_equal(Localizer(5).fit(G).transform(f).values, 0.0)

    def test_urysohn_profile_closed_form(self):
        ones = G.sample(np.ones_like)
        got = Localizer(3, "urysohn").fit(G).transform(ones).values
        expected = np.clip(3.0 - np.abs(G.x), 0.0, 1.0)
        np.testing.assert_allclose(got, expected, rtol=0, atol=1e-12)

    def test_window_must_fit(self):
        with pytest.raises(ValueError, match="exceeds"):
            Localizer(21).fit(G)

    def test_bad_kind(self):
        with pytest.raises(ValueError):
            Localizer(2, "gaussian").fit(G)

    def test_indicator_endpoints_on_nodes(self):
        m = localizer_profile(G, 5, "indicator")
        assert m[np.isclose(G.x, 5.0)] == 1.0
        assert m[np.isclose(G.x, 5.0 + G.h)] == 0.0

    @pytest.mark.parametrize("kind", ["indicator", "urysohn"])
    def test_profile_bounds_and_monotone(self, kind):
        prev = np.zeros(G.num_points)
        for n in range(1, 21):
            m = localizer_profile(G, n, kind)
            assert np.all((0 <= m) & (m <= 1))
            assert np.all(m >= prev)
            prev = m


class TestLaws:
    def test_band_projection_laws(self, rng):
        reps = verify_band_projection_laws(2, 5, battery(rng))
        assert {r.law for r in reps} == {"commute", "absorb", "idempotent", "order", "complement"}
        assert all(r.passed and r.max_violation == 0.0 for r in reps)

    def test_idempotence_n_equals_m(self, rng):
        assert all(r.passed for r in verify_band_projection_laws(4, 4, battery(rng, 5)))

    def test_n_le_m_required(self, rng):
        with pytest.raises(ValueError):
            verify_band_projection_laws(5, 2, battery(rng, 2))

    @pytest.mark.parametrize("kind", ["indicator", "urysohn"])
    def test_lattice_homomorphism(self, rng, kind):
        reps = verify_lattice_homomorphism(Localizer(3, kind), battery(rng))
        assert all(r.passed for r in reps)

    def test_disjoint_pair(self):
        Q = Localizer(5, "urysohn").fit(G)
        f = G.sample(smooth_bump(-2.0, 1.0))
        g = G.sample(smooth_bump(2.0, 1.0))
        assert np.all(np.minimum(f.values, g.values) == 0)
        assert np.all(np.minimum(Q.transform(f).values, Q.transform(g).values) == 0)

    def test_report_json(self, rng):
        rep = verify_band_projection_laws(2, 5, battery(rng, 2))[0]
        d = json.loads(json.dumps(rep.to_json()))
        assert set(d) == {"kind", "n", "law", "max_violation", "pass"}

    @given(signed, st.integers(1, 5), st.integers(0, 5))
    def test_monotone_positive_property(self, v, n, extra):
        f = GridFunction(G_SMALL, np.abs(v))
        m = min(n + extra, 6)
        for kind in ("indicator", "urysohn"):
            pn = Localizer(n, kind).fit(G_SMALL).transform(f).values
            pm = Localizer(m, kind).fit(G_SMALL).transform(f).values
            assert np.all(0 <= pn) and np.all(pn <= pm) and np.all(pm <= f.values)

    @given(signed, st.integers(1, 6))
    def test_urysohn_not_idempotent_but_dominated(self, v, n):
        Q = Localizer(n, "urysohn").fit(G_SMALL)
        f = GridFunction(G_SMALL, np.abs(v))
        qf = Q.transform(f)
        assert np.all(Q.transform(qf).values <= qf.values)

    def test_urysohn_is_not_a_projection(self):
        Q = Localizer(3, "urysohn").fit(G)
        ones = G.sample(np.ones_like)
        assert norm_mixed(Q.transform(Q.transform(ones)) - Q.transform(ones)) > 0


class TestStrongConvergence:
    def test_compact_support_terminates(self):
        f = G.sample(smooth_bump(0.0, 3.0))
        seq = strong_convergence_to_identity("indicator", f, range(1, 8))
        assert np.all(seq[2:, 1] == 0.0)
        assert np.all(seq[:2, 1] > 0)

    def test_gaussian_strictly_decreasing(self):
        f0 = G.sample(standard_gaussian)
        seq = strong_convergence_to_identity("indicator", f0, range(1, 26))
        err = seq[:, 1]
        # until underflow stalls the tail norms, then exactly 0 at the grid edge
        assert np.all(np.diff(err[:8]) < 0)
        assert np.all(np.diff(err) <= 0)
        assert np.all(err[19:] == 0.0)
        # mass outside [-1, 1]; on the grid the cut falls across one cell on
        # each side, where the trapezoid rule drops about h * f0(1)
        assert err[0] == pytest.approx(erfc(1 / sqrt(2)) - G.h * standard_gaussian(1.0), rel=1e-4)

    def test_urysohn_error_dominates(self):
        f0 = G.sample(standard_gaussian)
        a = strong_convergence_to_identity("indicator", f0, range(1, 10))
        b = strong_convergence_to_identity("urysohn", f0, range(1, 10))
        assert np.all(b[:, 1] >= a[:, 1])
