"""One-sided GIG law: density, Laplace exponent, characteristic function, Mellin transform, cumulants."""

from __future__ import annotations

import math

import numpy as np
from scipy import special as sp

from ..errors import DomainError
from ..specfun import bessel_k, bessel_k_ratio, log_bessel_k
from .params import GigParams


def _log_norm(g: GigParams) -> float:
    # log of (a/b)^{p/2} / (2 K_p(sqrt(ab)))
    return 0.5 * g.p * math.log(g.a / g.b) - math.log(2.0) - float(log_bessel_k(g.p, g.omega))


def gig_logpdf(g: GigParams, x):
    x = np.asarray(x, dtype=float)
    out = np.full(x.shape, -np.inf)
    pos = x > 0.0
    xp = x[pos]
    out[pos] = _log_norm(g) + (g.p - 1.0) * np.log(xp) - 0.5 * (g.a * xp + g.b / xp)
    return out.item() if out.ndim == 0 else out


def gig_pdf(g: GigParams, x):
    """GIG density; zero for x <= 0."""
    out = np.exp(gig_logpdf(g, x))
    return out.item() if np.ndim(out) == 0 else out


def gig_log_mgf(g: GigParams, w):
    """log E[exp(w X)] for complex w with Re(a - 2w) > 0.

    Analytic in w on that half plane, real for real w, zero at w = 0.
    """
    w = np.asarray(w)
    shifted = g.a - 2.0 * w
    if np.any(np.real(shifted) <= 0.0):
        raise DomainError("GIG moment generating function needs Re(a - 2w) > 0")
    zarg = np.sqrt(g.b * shifted)
    log_ratio = np.log(g.a) - np.log(shifted)
    # normalise along the same (real or complex) code path so that w = 0 gives exactly 0
    z0 = np.sqrt(g.b * np.asarray(g.a, dtype=shifted.dtype))
    return 0.5 * g.p * log_ratio + log_bessel_k(g.p, zarg) - log_bessel_k(g.p, z0)


def gig_chf(g: GigParams, u):
    """Characteristic function E[exp(i u X)]."""
    u = np.asarray(u, dtype=float)
    out = np.exp(gig_log_mgf(g, 1j * u))
    return out.item() if out.ndim == 0 else out


def gig_mean_ratio(g: GigParams, w: float = 0.0) -> float:
    """d/dw log E[exp(w X)] for real w, i.e. the mean of the exponentially tilted law."""
    shifted = g.a - 2.0 * w
    z = math.sqrt(g.b * shifted)
    return math.sqrt(g.b / shifted) * float(bessel_k_ratio(g.p, z))


def gig_raw_moment(g: GigParams, k: float) -> float:
    """E[X^k] = (b/a)^{k/2} K_{p+k}(omega) / K_p(omega) for real k."""
    if k == 0:
        return 1.0
    log_val = 0.5 * k * math.log(g.b / g.a) + float(log_bessel_k(g.p + k, g.omega)) - float(
        log_bessel_k(g.p, g.omega)
    )
    return math.exp(log_val)


def _complex_order_k(nu, omega: float, h: float = 0.02, t_max: float | None = None):
    """K_nu(omega) for complex order and real omega > 0 by the trapezoid rule.

    Uses K_nu(omega) = int_0^inf exp(-omega cosh t) cosh(nu t) dt, whose
    integrand is entire and decays double-exponentially, so the trapezoid
    rule converges geometrically.
    """
    nu = np.atleast_1d(np.asarray(nu, dtype=complex))
    if t_max is None:
        re = float(np.max(np.abs(nu.real))) if nu.size else 0.0
        t_max = 1.0
        while omega * math.cosh(t_max) - re * t_max < 60.0 + math.log1p(re):
            t_max += 0.25
    t = np.arange(0.0, t_max + h, h)
    w = np.full(t.size, h)
    w[0] = 0.5 * h
    base = np.exp(-omega * np.cosh(t))
    return (np.cosh(np.outer(nu, t)) * (base * w)[None, :]).sum(axis=1)


def gig_mellin(g: GigParams, s):
    """Mellin transform E[X^{s-1}] = (a/b)^{(1-s)/2} K_{s+p-1}(omega) / K_p(omega), complex s."""
    s = np.asarray(s, dtype=complex)
    flat = s.ravel()
    kv = _complex_order_k(flat + g.p - 1.0, g.omega)
    kp = float(bessel_k(g.p, g.omega))
    out = np.exp(0.5 * (1.0 - flat) * math.log(g.a / g.b)) * kv / kp
    out = out.reshape(s.shape)
    return out.item() if out.ndim == 0 else out


def _w_from_ratio(p: float, omega: float) -> list[tuple[float, float]]:
    # W_n as polynomials in R = K_{p+1}/K_p; each entry is (value, sum of |terms|)
    r = float(bessel_k_ratio(p, omega))
    q = p + 1.0
    terms = (
        (r,),
        (-r * r, 2.0 * q / omega * r, 1.0),
        (
            2.0 * r**3,
            -6.0 * q / omega * r * r,
            (4.0 * q * (p + 2.0) / omega**2 - 2.0) * r,
            2.0 * (p + 2.0) / omega,
        ),
        (
            -6.0 * r**4,
            24.0 * q / omega * r**3,
            (8.0 - 4.0 * q * (7.0 * p + 11.0) / omega**2) * r * r,
            (8.0 * q * (p + 2.0) * (p + 3.0) / omega**3 - 4.0 * (4.0 * p + 5.0) / omega) * r,
            4.0 * (p + 2.0) * (p + 3.0) / omega**2,
            -2.0,
        ),
    )
    return [(math.fsum(t), math.fsum(abs(x) for x in t)) for t in terms]


def _w_from_moments(p: float, omega: float) -> list[tuple[float, float]]:
    # the same cumulants from raw moments m_k = R_p R_{p+1} ... R_{p+k-1};
    # each ratio is evaluated directly since the upward recurrence is unstable for p < 0
    m1, r1, r2, r3 = (float(bessel_k_ratio(p + j, omega)) for j in range(4))
    m2 = m1 * r1
    m3 = m2 * r2
    m4 = m3 * r3
    c2 = (m2, -m1 * m1)
    v = math.fsum(c2)
    terms = (
        (m1,),
        c2,
        (m3, -3.0 * m1 * m2, 2.0 * m1**3),
        (m4, -4.0 * m1 * m3, 6.0 * m1 * m1 * m2, -3.0 * m1**4, -3.0 * v * v),
    )
    return [(math.fsum(t), math.fsum(abs(x) for x in t)) for t in terms]


def gig_w_polys(p: float, omega: float) -> tuple[float, float, float, float]:
    """W_1..W_4: cumulants of the unit-scale GIG law.

    Two exact routes are evaluated: polynomials in R = K_{p+1}/K_p, and the
    moment-to-cumulant map on products of order ratios. Each W_n is taken
    from whichever route cancels less (smaller sum of absolute terms); the
    polynomials win for large omega, the moments for small omega and p < 0.
    """
    a, b = _w_from_ratio(p, omega), _w_from_moments(p, omega)
    return tuple(x[0] if x[1] <= y[1] else y[0] for x, y in zip(a, b))


def gig_cumulants(g: GigParams) -> tuple[float, float, float, float]:
    """First four cumulants W_n(omega) * eta^n with eta = sqrt(b/a)."""
    ws = gig_w_polys(g.p, g.omega)
    eta = g.eta
    return tuple(w * eta ** (n + 1) for n, w in enumerate(ws))
