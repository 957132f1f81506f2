import math

import numpy as np
import pytest
from scipy import integrate as si
from scipy import stats

from bgig.distributions import (
    BgigParams,
    GigParams,
    bgig_chf,
    bgig_cumulants,
    bgig_sample,
    bgig_samples,
    gig_cumulants,
    gig_pdf,
    gig_sample,
    gig_samples,
)
from bgig.distributions import sampling
from bgig.errors import SamplingError
from bgig.rng import make_stream


def gig_cdf_table(g, n=4001):
    # CDF by quadrature of the density on a grid spanning essentially all mass
    k1, k2, _, _ = gig_cumulants(g)
    hi = k1 + 40 * math.sqrt(k2)
    xs = np.concatenate(([0.0], np.geomspace(1e-8 * hi, hi, n)))
    pieces = [si.quad(lambda x: gig_pdf(g, x), lo, up, epsabs=1e-14)[0] for lo, up in zip(xs[:-1], xs[1:])]
    F = np.concatenate(([0.0], np.cumsum(pieces)))
    return lambda x: np.interp(x, xs, F)


# one parameter set per rejection regime, plus negative index and large order
REGIMES = [
    GigParams(1.0, 2.0, 1.0),
    GigParams(3.0, 4.0, 5.0),
    GigParams(0.3, 0.4, 0.5),
    GigParams(0.01, 0.01, 0.2),
    GigParams(0.05, 0.02, 0.0),
    GigParams(2.0, 0.5, -2.5),
    GigParams(558.753, 0.0443139, 2.53084),
]


@pytest.mark.parametrize("g", REGIMES, ids=lambda g: f"a{g.a}-b{g.b}-p{g.p}")
def test_gig_ks(g):
    x = gig_samples(g, make_stream(5, 1), 10_000)
    assert np.all(x > 0.0)
    res = stats.kstest(x, gig_cdf_table(g, 1500))
    assert res.pvalue > 0.01


def test_gig_mean_million():
    g = GigParams(1.0, 2.0, 1.0)
    x = gig_samples(g, make_stream(1), 1_000_000)
    k1, k2, _, _ = gig_cumulants(g)
    assert abs(x.mean() - k1) < 4 * math.sqrt(k2 / x.size)


def test_gig_deterministic():
    g = GigParams(1.0, 2.0, 1.0)
    a = gig_samples(g, make_stream(3), 100)
    b = gig_samples(g, make_stream(3), 100)
    assert np.array_equal(a, b)
    assert gig_sample(g, make_stream(3)) == gig_sample(g, make_stream(3))


def test_gig_empty():
    assert gig_samples(GigParams(1, 1, 1), make_stream(0), 0).size == 0


def test_round_cap(monkeypatch):
    monkeypatch.setattr(sampling, "MAX_ROUNDS", 1)
    rejecting = lambda k: np.empty(0)  # noqa: E731
    with pytest.raises(SamplingError):
        sampling._collect(rejecting, 10)


class TestBgig:
    def test_mean(self, P_ref):
        x = bgig_samples(P_ref, make_stream(2), 1_000_000)
        c = bgig_cumulants(P_ref)
        assert abs(x.mean() - c.k1) < 4 * math.sqrt(c.k2 / x.size)

    @pytest.mark.parametrize("u", [0.5, 1.0, 2.0])
    def test_chf(self, P_ref, u):
        x = bgig_samples(P_ref, make_stream(4), 200_000)
        emp = np.exp(1j * u * x)
        se = math.sqrt((emp.real.var() + emp.imag.var()) / x.size)
        assert abs(emp.mean() - bgig_chf(P_ref, u)) < 4 * se

    def test_symmetric_skewness(self):
        P = BgigParams.of(2.0, 3.0, 0.7, 2.0, 3.0, 0.7)
        x = bgig_samples(P, make_stream(6), 400_000)
        z = (x - x.mean()) / x.std()
        skew = np.mean(z**3)
        assert abs(skew) < 4 * math.sqrt(np.var(z**3) / x.size)

    def test_single(self, P_ref):
        rng_a, rng_b = make_stream(8), make_stream(8)
        assert bgig_sample(P_ref, rng_a) == bgig_samples(P_ref, rng_b, 1)[0]
