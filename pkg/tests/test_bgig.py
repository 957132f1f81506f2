import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate as si

from bgig.distributions import (
    BgigParams,
    ModeSide,
    PdfDiagnostics,
    bgig_cgf_derivative,
    bgig_chf,
    bgig_chf_analytic,
    bgig_cumulants,
    bgig_levy_density,
    bgig_log_mgf,
    bgig_moment,
    bgig_pdf,
    gig_chf,
    gig_pdf,
    mode,
    mode_side,
    tail_constants,
)
from bgig.errors import DomainError

from .oracles import conv_pdf, mp_bgig_log_chf

side = st.tuples(st.floats(0.5, 10.0), st.floats(0.1, 6.0), st.floats(-3.0, 4.0))
bgig_params = st.builds(lambda s, t: BgigParams.of(*s, *t), side, side)


class TestChf:
    def test_at_zero(self, P_ref):
        assert bgig_chf(P_ref, 0.0) == 1.0 + 0.0j

    def test_symmetric_is_real(self):
        P = BgigParams.of(2, 3, 0.4, 2, 3, 0.4)
        vals = bgig_chf(P, np.linspace(-20, 20, 81))
        assert np.max(np.abs(vals.imag)) < 1e-15

    def test_product_of_sides(self, P_ref):
        u = 2.0
        ref = gig_chf(P_ref.plus, u) * np.conj(gig_chf(P_ref.minus, u))
        assert bgig_chf(P_ref, u) == pytest.approx(ref, rel=1e-14)

    def test_vs_convolution_quadrature(self, P_ref):
        u = 2.0
        re, _ = si.quad(lambda x: math.cos(u * x) * conv_pdf(P_ref, x), -60, 40, limit=400, points=[0])
        im, _ = si.quad(lambda x: math.sin(u * x) * conv_pdf(P_ref, x), -60, 40, limit=400, points=[0])
        assert abs(bgig_chf(P_ref, u) - complex(re, im)) < 1e-8

    @given(bgig_params, st.floats(0.0, 1e3))
    def test_hermitian_bounded(self, P, u):
        v = bgig_chf(P, u)
        assert bgig_chf(P, -u) == pytest.approx(np.conj(v), rel=1e-12, abs=1e-300)
        assert abs(v) <= 1.0 + 1e-12

    def test_large_u_decay(self, P_ref):
        pbar = P_ref.plus.p + P_ref.minus.p
        bbar = math.sqrt(P_ref.plus.b) + math.sqrt(P_ref.minus.b)
        us = np.geomspace(1e3, 1e5, 9)
        log_mod = np.real(bgig_log_mgf(P_ref, 1j * us))
        log_scaled = log_mod + 0.5 * (1 + pbar) * np.log(us) + np.sqrt(us) * bbar
        assert np.ptp(log_scaled) < math.log(1.5)

    def test_vg_limit(self):
        p, ap, am = 1.3, 3.0, 5.0
        P = BgigParams.of(ap, 1e-6, p, am, 1e-6, p)
        sigma2, theta, nu = 8 * p / (ap * am), 2 * p * (1 / ap - 1 / am), 1 / p
        u = np.linspace(-5, 5, 41)
        vg = (1 - 1j * theta * nu * u + 0.5 * sigma2 * nu * u**2) ** (-1 / nu)
        assert np.max(np.abs(bgig_chf(P, u) / vg - 1)) < 1e-3


class TestAnalytic:
    def test_zero(self, P_ref):
        assert bgig_chf_analytic(P_ref, 0.0) == pytest.approx(1.0)

    def test_real_axis(self, P_ref):
        u = np.linspace(-3, 3, 13)
        assert np.allclose(bgig_chf_analytic(P_ref, u), bgig_chf(P_ref, u), rtol=1e-14)

    def test_exp_moment(self):
        P = BgigParams.of(4, 2, 1, 3, 4, 5)
        val = bgig_chf_analytic(P, -1j)
        assert abs(val.imag) < 1e-15 and val.real > 0
        ref, _ = si.quad(lambda x: math.exp(x) * conv_pdf(P, x), -80, 60, limit=400, points=[0])
        assert val.real == pytest.approx(ref, rel=1e-8)

    def test_strip(self, P_ref):
        with pytest.raises(DomainError):
            bgig_chf_analytic(P_ref, -1j)

    def test_cgf_derivative(self, P_ref):
        s, h = 0.2, 1e-5
        fd = (bgig_log_mgf(P_ref, s + h) - bgig_log_mgf(P_ref, s - h)) / (2 * h)
        assert bgig_cgf_derivative(P_ref, s) == pytest.approx(float(fd), rel=1e-8)


class TestCumulants:
    def test_symmetric_odd_vanish(self):
        c = bgig_cumulants(BgigParams.of(2, 3, 0.4, 2, 3, 0.4))
        assert c.k1 == 0.0 and c.k3 == 0.0

    @given(bgig_params)
    def test_vs_mpmath_derivatives(self, P):
        mp.mp.dps = 40
        try:
            ref = [mp.diff(lambda u: mp_bgig_log_chf(P, u), 0, n) / (1j) ** n for n in range(1, 5)]
        finally:
            mp.mp.dps = 15
        got = bgig_cumulants(P).as_tuple()
        scale = float(mp.re(ref[1]))
        for n in range(4):
            assert got[n] == pytest.approx(float(mp.re(ref[n])), rel=1e-8, abs=1e-12 * scale ** ((n + 1) / 2))

    def test_calibrated_first_two(self, P_cal):
        # the published values; see the project notes for the size of the gap
        c = bgig_cumulants(P_cal)
        assert c.k2 == pytest.approx(9.29885e-05, rel=2e-3)
        assert c.k1 > 0


class TestMoments:
    def test_order_zero_one(self, P_ref):
        assert bgig_moment(P_ref, 0) == 1.0
        assert bgig_moment(P_ref, 1) == pytest.approx(bgig_cumulants(P_ref).k1, rel=1e-13)

    def test_third_vs_density(self, P_ref):
        pts = [-100, -20, -5, 0, 5, 20, 100]
        ref, _ = si.quad(lambda x: x**3 * conv_pdf(P_ref, x), -300, 300, limit=800, points=pts)
        assert bgig_moment(P_ref, 3) == pytest.approx(ref, rel=1e-8)

    def test_invalid(self, P_ref):
        with pytest.raises(DomainError):
            bgig_moment(P_ref, -1)

    @given(bgig_params)
    def test_consistent_with_cumulants(self, P):
        c = bgig_cumulants(P)
        m2 = bgig_moment(P, 2)
        assert m2 - c.k1**2 == pytest.approx(c.k2, rel=1e-9, abs=1e-12 * m2)


class TestDensity:
    @pytest.mark.parametrize("x", [-7.0, -1.3, -0.01, 0.0, 0.02, 0.9, 4.0])
    def test_vs_convolution(self, P_ref, x):
        assert bgig_pdf(P_ref, x) == pytest.approx(conv_pdf(P_ref, x), rel=1e-9, abs=1e-13)

    def test_integrates_to_one(self, P_cal):
        c = bgig_cumulants(P_cal)
        half = 20 * math.sqrt(c.k2)
        val, _ = si.quad(lambda x: bgig_pdf(P_cal, x), c.k1 - half, c.k1 + half, limit=200, epsrel=1e-11)
        assert val == pytest.approx(1.0, abs=1e-7)

    @given(bgig_params, st.floats(-3, 3))
    def test_reflection(self, P, x):
        assert bgig_pdf(P, x) == pytest.approx(bgig_pdf(P.swap(), -x), rel=1e-8, abs=1e-14)

    def test_diagnostics_and_nonnegative(self, P_ref):
        diag = PdfDiagnostics()
        vals = bgig_pdf(P_ref, np.linspace(-200, 150, 50), diagnostics=diag)
        assert diag.evaluations == 50
        assert np.all(vals >= 0.0)

    def test_time_must_be_positive(self, P_ref):
        with pytest.raises(DomainError):
            bgig_pdf(P_ref, 0.0, t=0.0)

    def test_tail_ratio(self, P_ref):
        # the ratio approaches 1 like 1 - b-/(2x) corrections; by x = 200 it is within 1%
        z = tail_constants(P_ref)
        g = P_ref.plus
        for x, tol in ((100.0, 0.02), (200.0, 0.01)):
            ratio = bgig_pdf(P_ref, x) / (z.z_plus * x ** (g.p - 1) * math.exp(-g.a * x / 2))
            assert ratio == pytest.approx(1.0, abs=tol)


class TestTailConstants:
    def test_swap(self, P_ref):
        z, zs = tail_constants(P_ref), tail_constants(P_ref.swap())
        assert z.z_plus == pytest.approx(zs.z_minus, rel=1e-14)
        assert z.z_minus == pytest.approx(zs.z_plus, rel=1e-14)

    def test_closed_form_laplace_factor(self, P_ref):
        # Z+ = alpha+ E[exp(-a+ Y / 2)] with Y ~ GIG(minus)
        gp, gm = P_ref.plus, P_ref.minus
        alpha = (gp.a / gp.b) ** (gp.p / 2) / (2 * float(mp.besselk(gp.p, gp.omega)))
        lap, _ = si.quad(lambda y: math.exp(-gp.a * y / 2) * gig_pdf(gm, y), 0, np.inf, epsrel=1e-12)
        assert tail_constants(P_ref).z_plus == pytest.approx(alpha * lap, rel=1e-10)

    @given(bgig_params)
    def test_positive(self, P):
        z = tail_constants(P)
        assert 0 < z.z_plus < math.inf and 0 < z.z_minus < math.inf


class TestLevyDensity:
    def test_inverse_gaussian_closed_form(self):
        P = BgigParams.of(2.0, 3.0, -0.5, 1, 1, 1)
        for x in (0.01, 0.5, 3.0):
            ref = math.sqrt(3.0 / (2 * math.pi * x**3)) * math.exp(-x)
            assert bgig_levy_density(P, x) == pytest.approx(ref, rel=1e-8)

    def test_small_x_constant(self, P_ref):
        x = 1e-8
        assert x**1.5 * bgig_levy_density(P_ref, x) == pytest.approx(math.sqrt(2 / (2 * math.pi)), rel=1e-2)

    def test_reflection(self, P_ref):
        xs = np.array([0.1, 1.0, 5.0])
        assert np.allclose(bgig_levy_density(P_ref, -xs), bgig_levy_density(P_ref.swap(), xs), rtol=1e-14)

    def test_zero(self, P_ref):
        with pytest.raises(DomainError):
            bgig_levy_density(P_ref, 0.0)


class TestMode:
    def test_symmetric(self):
        P = BgigParams.of(2, 3, 1.5, 2, 3, 1.5)
        assert mode_side(P) is ModeSide.ZERO
        assert abs(mode(P)) < 1e-6

    def test_reference(self, P_ref):
        m = mode(P_ref)
        expected = ModeSide.POSITIVE if m > 0 else ModeSide.NEGATIVE
        assert mode_side(P_ref) is expected
        f0 = bgig_pdf(P_ref, m)
        assert f0 >= bgig_pdf(P_ref, m - 0.01) and f0 >= bgig_pdf(P_ref, m + 0.01)

    def test_swap_flips(self, P_ref):
        flip = {ModeSide.POSITIVE: ModeSide.NEGATIVE, ModeSide.NEGATIVE: ModeSide.POSITIVE}
        assert mode_side(P_ref.swap()) is flip[mode_side(P_ref)]

    def test_random_consistency(self):
        rng = np.random.default_rng(11)
        checked = 0
        for _ in range(20):
            P = BgigParams.of(*rng.uniform(1, 6, 2), rng.uniform(0.2, 3), *rng.uniform(1, 6, 2), rng.uniform(0.2, 3))
            P = BgigParams.of(P.plus.a, P.plus.b, P.plus.p, P.minus.a, P.minus.b, P.minus.p)
            m = mode(P)
            if abs(m) < 1e-6:
                continue
            checked += 1
            assert mode_side(P) is (ModeSide.POSITIVE if m > 0 else ModeSide.NEGATIVE)
        assert checked >= 15
