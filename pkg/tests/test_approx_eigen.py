import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from leplab import WeylParams, make_w, residual, weyl_decay_fit
from leplab.approx_eigen import (
    claimed_residual_l1_bound,
    loglog_slope,
    residual_l1_majorant,
    weyl_grid,
    weyl_table,
)
from leplab.lattice import Grid, norm_l1, trapezoid

N_LIST = [4, 8, 16, 32, 64, 128, 256]


def w_exact(x, alpha, n):
    b = abs(alpha)
    w = (1 + 1j * x / n) * np.exp(-b * x * x / (2 * n) + 1j * b * x) / np.sqrt(n)
    return np.conj(w) if alpha < 0 else w


def fd_residual(x, alpha, n, d=1e-3):
    # fourth-order central difference of the closed-form family
    dw = (-w_exact(x + 2 * d, alpha, n) + 8 * w_exact(x + d, alpha, n) - 8 * w_exact(x - d, alpha, n) + w_exact(x - 2 * d, alpha, n)) / (12 * d)
    return dw - 1j * alpha * w_exact(x, alpha, n)


def quad_residual_l1(alpha, n):
    b = abs(alpha)
    L = max(20.0, 8 * np.sqrt(n / b))

    def absr(x):
        return abs((1j - b * x - 1j * b * x * x / n) * np.exp(-b * x * x / (2 * n))) / n**1.5

    # split at many points: the integrand is smooth but spread out for large n
    pts = np.linspace(-L, L, 65)
    return sum(quad(absr, a, c, epsabs=1e-14, epsrel=1e-12, limit=200)[0] for a, c in zip(pts[:-1], pts[1:]))


class TestParams:
    def test_validation(self):
        with pytest.raises(ValueError):
            WeylParams(0.0, 4)
        with pytest.raises(ValueError):
            WeylParams(1.0, 0)
        with pytest.raises(TypeError):
            WeylParams(1.0, 2.5)

    def test_narrow_grid_rejected_with_required_width(self):
        p = WeylParams(1.0, 256)
        with pytest.raises(ValueError, match="use L >"):
            make_w(p, Grid(20.0, 2001))

    def test_grid_widens_with_n(self):
        assert weyl_grid(WeylParams(0.5, 256)).half_width == pytest.approx(8 * np.sqrt(512))
        assert weyl_grid(WeylParams(2.0, 4)).half_width == 20.0


class TestResidualClosedForm:
    @pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0, -1.0])
    @pytest.mark.parametrize("n", [4, 32])
    def test_matches_finite_differences(self, alpha, n):
        p = WeylParams(alpha, n)
        g = weyl_grid(p, h=0.05)
        r = residual(p, g)
        assert np.max(np.abs(r.values - fd_residual(g.x, alpha, n))) < 1e-9

    def test_samples_match_closed_form(self):
        p = WeylParams(1.0, 8)
        g = weyl_grid(p)
        np.testing.assert_allclose(make_w(p, g).values, w_exact(g.x, 1.0, 8), rtol=0, atol=1e-15)

    def test_negative_alpha_is_conjugate(self):
        g = weyl_grid(WeylParams(1.5, 16))
        a = make_w(WeylParams(1.5, 16), g).values
        b = make_w(WeylParams(-1.5, 16), g).values
        np.testing.assert_array_equal(b, np.conj(a))


class TestNormsAndDecay:
    @pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
    def test_mean_zero_and_lower_bound(self, alpha):
        tab = weyl_table(alpha, N_LIST)
        assert np.all(tab[:, 7] <= 1e-8)
        assert np.all(tab[:, 1] >= np.sqrt(2 * np.pi / alpha) - 1e-6)

    @pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
    def test_residual_l1_matches_quadrature(self, alpha):
        tab = weyl_table(alpha, [4, 16, 64])
        for n, got in zip(tab[:, 0], tab[:, 4]):
            assert got == pytest.approx(quad_residual_l1(alpha, int(n)), rel=1e-6)

    def test_frozen_value(self):
        # quadrature oracle for alpha = 1, n = 4
        tab = weyl_table(1.0, [4, 8, 16])
        assert tab[0, 4] == pytest.approx(1.2533141373155, rel=1e-9)

    @pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
    def test_residual_decreases_and_is_majorized(self, alpha):
        tab = weyl_table(alpha, N_LIST)
        assert np.all(np.diff(tab[:, 6]) < 0)
        assert np.all(tab[:, 4] <= residual_l1_majorant(alpha, tab[:, 0]))

    def test_smaller_majorant_is_exceeded(self):
        # the residual decays like n^(-1/2), not n^(-3/2)
        tab = weyl_table(1.0, N_LIST)
        assert np.all(tab[:, 4] > claimed_residual_l1_bound(1.0, tab[:, 0]))

    @pytest.mark.parametrize(
        "alpha, expected",
        [(0.5, -0.5783), (1.0, -0.5492), (2.0, -0.5298)],
    )
    def test_fitted_slope_matches_quadrature_oracle(self, alpha, expected):
        oracle = loglog_slope(N_LIST, [quad_residual_l1(alpha, n) for n in N_LIST])
        assert oracle == pytest.approx(expected, abs=5e-4)
        assert weyl_decay_fit(alpha, N_LIST, norm="l1") == pytest.approx(oracle, abs=1e-6)
        # the l1 part dominates the mixed norm, so the E-norm slope agrees
        assert weyl_decay_fit(alpha, N_LIST) == pytest.approx(oracle, abs=1e-6)

    def test_slope_fit_needs_three_points(self):
        with pytest.raises(ValueError):
            weyl_decay_fit(1.0, [4, 8])

    @given(st.floats(0.25, 4.0), st.integers(1, 300))
    def test_integral_vanishes_property(self, alpha, n):
        p = WeylParams(alpha, n)
        g = weyl_grid(p, h=0.02)
        assert abs(trapezoid(make_w(p, g).values, g.h)) <= 1e-8
        assert norm_l1(make_w(p, g)) >= np.sqrt(2 * np.pi / alpha) - 1e-6
