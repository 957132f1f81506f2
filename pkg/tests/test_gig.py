import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate as si

from bgig.distributions import (
    GigParams,
    gig_chf,
    gig_cumulants,
    gig_log_mgf,
    gig_mellin,
    gig_pdf,
    gig_raw_moment,
)
from bgig.distributions.gig import gig_w_polys
from bgig.errors import DomainError

from .oracles import mp_log_mgf

gig_params = st.builds(
    GigParams,
    a=st.floats(0.2, 20.0),
    b=st.floats(0.05, 20.0),
    p=st.floats(-6.0, 6.0),
)


def quad_moment(g, f):
    val, _ = si.quad(lambda x: f(x) * gig_pdf(g, x), 0.0, np.inf, limit=400, epsabs=0, epsrel=1e-12)
    return val


class TestParams:
    @pytest.mark.parametrize("bad", [(0, 1, 1), (1, -1, 1), (1, 1, math.nan), (math.inf, 1, 0)])
    def test_rejects(self, bad):
        with pytest.raises(DomainError):
            GigParams(*bad)

    def test_omega_eta(self):
        g = GigParams(2.0, 8.0, 1.0)
        assert g.omega == 4.0
        assert g.eta == 2.0


class TestDensity:
    def test_zero_off_support(self):
        assert gig_pdf(GigParams(1, 2, 1), -1.0) == 0.0
        assert gig_pdf(GigParams(1, 2, 1), 0.0) == 0.0

    def test_normalized(self):
        assert quad_moment(GigParams(1, 2, 1), lambda x: 1.0) == pytest.approx(1.0, abs=1e-10)

    def test_mean_closed_form(self):
        g = GigParams(1, 2, 1)
        ref = math.sqrt(2.0) * mp.besselk(2, math.sqrt(2)) / mp.besselk(1, math.sqrt(2))
        assert quad_moment(g, lambda x: x) == pytest.approx(float(ref), rel=1e-10)

    @given(gig_params)
    def test_normalized_property(self, g):
        assert quad_moment(g, lambda x: 1.0) == pytest.approx(1.0, rel=1e-7)

    def test_large_order_no_overflow(self):
        g = GigParams(558.753, 0.0443139, 2.53084)
        assert np.isfinite(gig_pdf(g, 0.01))
        assert np.isfinite(gig_pdf(GigParams(1.0, 1.0, 400.0), 400.0))


class TestTransforms:
    def test_chf_at_zero(self):
        assert gig_chf(GigParams(1, 2, 1), 0.0) == 1.0 + 0.0j

    def test_chf_vs_quadrature(self):
        g = GigParams(1, 2, 1)
        re = quad_moment(g, lambda x: math.cos(x))
        im = quad_moment(g, lambda x: math.sin(x))
        assert abs(gig_chf(g, 1.0) - complex(re, im)) <= 1e-8 * abs(complex(re, im))

    @given(gig_params, st.floats(0.01, 50.0))
    def test_chf_hermitian_and_bounded(self, g, u):
        val = gig_chf(g, u)
        assert gig_chf(g, -u) == pytest.approx(np.conj(val), rel=1e-12, abs=1e-300)
        assert abs(val) <= 1.0 + 1e-12

    @given(gig_params, st.floats(-3.0, 0.09))
    def test_log_mgf_vs_mpmath(self, g, frac):
        w = frac * g.a
        assert float(np.real(gig_log_mgf(g, w))) == pytest.approx(float(mp_log_mgf(g, w)), rel=1e-10, abs=1e-12)

    def test_log_mgf_domain(self):
        with pytest.raises(DomainError):
            gig_log_mgf(GigParams(1, 1, 1), 0.6)

    def test_mellin_at_one(self):
        assert gig_mellin(GigParams(3, 4, 5), 1.0) == pytest.approx(1.0, rel=1e-12)

    def test_mellin_mean(self):
        g = GigParams(1, 2, 1)
        assert gig_mellin(g, 2.0).real == pytest.approx(quad_moment(g, lambda x: x), rel=1e-10)

    def test_mellin_complex(self):
        g = GigParams(3, 4, 5)
        s = 1.5 + 0.5j
        re = quad_moment(g, lambda x: (x ** (s - 1)).real)
        im = quad_moment(g, lambda x: (x ** (s - 1)).imag)
        assert gig_mellin(g, s) == pytest.approx(complex(re, im), rel=1e-9)

    @given(gig_params, st.floats(-2.0, 4.0))
    def test_raw_moment_matches_mellin(self, g, k):
        assert gig_raw_moment(g, k) == pytest.approx(gig_mellin(g, k + 1.0).real, rel=1e-8)


class TestCumulants:
    @given(gig_params)
    def test_vs_mpmath_derivatives(self, g):
        mp.mp.dps = 40
        try:
            ref = [mp.diff(lambda w: mp_log_mgf(g, w), 0, n) for n in range(1, 5)]
        finally:
            mp.mp.dps = 15
        got = gig_cumulants(g)
        for n in range(4):
            assert got[n] == pytest.approx(float(ref[n]), rel=1e-8, abs=1e-14 * abs(float(ref[1])) ** ((n + 1) / 2))

    def test_w_polys_unit_scale(self):
        # W_n are the cumulants of the law with a = b = omega
        w = gig_w_polys(1.3, 2.0)
        c = gig_cumulants(GigParams(2.0, 2.0, 1.3))
        assert w == pytest.approx(c, rel=1e-14)

    def test_moments_match_cumulants(self):
        g = GigParams(2.0, 3.0, -0.7)
        m = [gig_raw_moment(g, k) for k in range(5)]
        k1, k2, k3, k4 = gig_cumulants(g)
        assert m[1] == pytest.approx(k1, rel=1e-12)
        assert m[2] - m[1] ** 2 == pytest.approx(k2, rel=1e-11)
        c3 = m[3] - 3 * m[2] * m[1] + 2 * m[1] ** 3
        assert c3 == pytest.approx(k3, rel=1e-9)
        c4 = m[4] - 4 * m[3] * m[1] + 6 * m[2] * m[1] ** 2 - 3 * m[1] ** 4 - 3 * k2**2
        assert c4 == pytest.approx(k4, rel=1e-7)
