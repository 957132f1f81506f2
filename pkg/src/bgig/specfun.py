"""Special functions: Bessel K, Hankel modulus, Jaeger integral, erfc, Γ(s, x).

Bessel and error-function kernels come from ``scipy.special`` (AMOS for
complex Bessel arguments). The package adds domain and overflow checks, a
branch-continuous ``log K`` and the Jaeger integral quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as sp

from .errors import BesselOverflowError, DomainError
from .quadrature import QuadConfig, integrate

EULER_GAMMA = 0.5772156649015329


@dataclass(frozen=True)
class JaegerConfig:
    rel_tol: float = 1e-10
    small_x_cutoff: float = 1e-8
    large_x_cutoff: float = 1e6
    max_subdivisions: int = 4000

    def __post_init__(self):
        if not 0.0 < self.rel_tol < 1.0:
            raise DomainError("rel_tol must lie in (0, 1)")
        if not 0.0 < self.small_x_cutoff < self.large_x_cutoff:
            raise DomainError("need 0 < small_x_cutoff < large_x_cutoff")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be positive")


def _check_finite(value, what):
    arr = np.asarray(value)
    if np.any(np.isinf(arr.real)) or np.any(np.isinf(getattr(arr, "imag", 0.0))):
        raise BesselOverflowError(f"{what} overflows double precision")
    if np.any(np.isnan(arr)):
        raise DomainError(f"{what} is undefined for the given arguments")
    return value


def _order(nu) -> float:
    # K is even and smooth in nu; scipy returns nan for subnormal orders
    nu = float(nu)
    return 0.0 if abs(nu) < 1e-300 else nu


def bessel_k(nu: float, z):
    """Modified Bessel function K_nu(z) on the principal branch.

    Accepts scalar or array ``z``, real or complex. Raises DomainError on the
    branch cut (real z <= 0) and BesselOverflowError when the value is not
    representable.
    """
    nu = _order(nu)
    zc = np.asarray(z, dtype=complex)
    on_cut = (zc.imag == 0.0) & (zc.real <= 0.0)
    if np.any(on_cut):
        raise DomainError("K_nu(z) is undefined for real z <= 0")
    if np.isrealobj(z):
        with np.errstate(over="ignore"):
            out = sp.kv(nu, np.asarray(z, dtype=float))
    else:
        with np.errstate(over="ignore"):
            out = sp.kv(nu, zc)
    out = _check_finite(out, "K_nu(z)")
    return out.item() if np.ndim(out) == 0 else out


def bessel_k_ratio(nu: float, z):
    """K_{nu+1}(z) / K_nu(z), stable for large |nu| and any Re z > 0.

    Forward recurrence r_{m+1} = 1/r_m + 2(m+1)/z from an order in [0, 1)
    cannot overflow, unlike the individual Bessel values.
    """
    nu = _order(nu)
    z = np.asarray(z)
    if nu < 0.0:
        if nu <= -1.0:
            return 1.0 / bessel_k_ratio(-nu - 1.0, z)
        with np.errstate(over="ignore", invalid="ignore"):
            return sp.kve(nu + 1.0, z) / sp.kve(-nu, z)
    base = nu % 1.0
    steps = int(round(nu - base))
    with np.errstate(over="ignore", invalid="ignore"):
        r = sp.kve(base + 1.0, z) / sp.kve(base, z)
    if z.ndim == 0 and np.isrealobj(z):
        # plain floats make the long recurrences several times faster
        r, zf = float(r), float(z)
        for j in range(1, steps + 1):
            r = 1.0 / r + 2.0 * (base + j) / zf
        return r
    for j in range(1, steps + 1):
        r = 1.0 / r + 2.0 * (base + j) / z
    return r


def log_bessel_k(nu: float, z):
    """Analytic logarithm of K_nu(z) for Re z > 0.

    The result is continuous in z across the right half plane and real on
    the positive axis, so ``exp(t * log_bessel_k)`` is the correct power of
    K for non-integer t. It is built as log K_{nu0} plus a sum of logs of
    order ratios; every factor has a phase inside (-pi/2, pi/2), so no
    principal-branch wrap can occur. Large orders never overflow.
    """
    nu = abs(_order(nu))
    z = np.asarray(z)
    if np.any(np.real(z) <= 0.0):
        raise DomainError("log_bessel_k requires Re z > 0")
    base = nu % 1.0
    steps = int(round(nu - base))
    cplx = np.iscomplexobj(z)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        k0 = sp.kve(base, z)
        out = (np.log(k0.astype(complex)) if cplx else np.log(k0)) - z
        if steps:
            r = sp.kve(base + 1.0, z) / k0
            out = out + (np.log(r.astype(complex)) if cplx else np.log(r))
            for j in range(1, steps):
                r = 1.0 / r + 2.0 * (base + j) / z
                out = out + np.log(r)
    return _check_finite(out, "log K_nu(z)")


def hankel_abs_sq(p: float, y):
    """|H_p^{(1)}(y)|^2 = J_p(y)^2 + Y_p(y)^2 for y > 0."""
    y = np.asarray(y, dtype=float)
    if np.any(y <= 0.0):
        raise DomainError("hankel_abs_sq requires y > 0")
    p = abs(_order(p))
    with np.errstate(over="ignore", invalid="ignore"):
        j = sp.jv(p, y)
        yy = sp.yv(p, y)
        out = j * j + yy * yy
    out = np.where(np.isnan(out), np.inf, out)
    return out.item() if out.ndim == 0 else out


def jaeger_small_x(x: float, p: float) -> float:
    """Two-term small-x expansion 1/(2 sqrt(pi x)) + (1 - 2|p|)/4."""
    return 1.0 / (2.0 * math.sqrt(math.pi * x)) + (1.0 - 2.0 * abs(p)) / 4.0


def jaeger_large_x(x: float, p: float) -> float:
    """Leading large-x term x^{-|p|} / (2^{2|p|} Gamma(|p|)), for p != 0."""
    nu = abs(p)
    if nu == 0.0:
        raise DomainError("large-x Jaeger asymptotic needs p != 0")
    return math.exp(-nu * math.log(x) - 2.0 * nu * math.log(2.0) - math.lgamma(nu))


def _small_y_tail(nu: float, y0: float) -> float:
    """Integral of dy / (y |H_nu(y)|^2) over (0, y0) from small-argument forms."""
    if nu < 1e-8:
        c = 2.0 / math.pi
        t0 = math.log(y0) - math.log(2.0) + EULER_GAMMA
        return (math.atan(c * t0) + math.pi / 2.0) / c
    if nu >= 0.5:
        # 1/|H|^2 ~ (pi / Gamma(nu))^2 (y/2)^{2 nu}
        log_val = (
            2.0 * (math.log(math.pi) - math.lgamma(nu))
            + 2.0 * nu * math.log(y0 / 2.0)
            - math.log(2.0 * nu)
        )
        return math.exp(log_val)
    # 0 < nu < 1/2: keep both J_nu and J_{-nu}, with w = (y/2)^{2 nu}
    s = math.sin(nu * math.pi)
    a = math.exp(-2.0 * math.lgamma(1.0 - nu))
    bq = math.sin(2.0 * nu * math.pi) / (nu * math.pi)
    c = math.exp(-2.0 * math.lgamma(1.0 + nu))
    w0 = (y0 / 2.0) ** (2.0 * nu)
    inner = integrate(lambda w: 1.0 / (a - bq * w + c * w * w), 0.0, w0, QuadConfig(rel_tol=1e-13))
    return s * s / (2.0 * nu) * inner


def jaeger(x: float, p: float, cfg: JaegerConfig = JaegerConfig()) -> float:
    """Jaeger integral I(x, p) = (2/pi^2) int_0^inf e^{-x y^2} / (y |H_|p|(y)|^2) dy.

    Outside ``[cfg.small_x_cutoff, cfg.large_x_cutoff]`` the small- or
    large-x asymptotic is returned. Inside, the integral is split at
    y* = min(1, 1/sqrt(x)): a log-substituted panel on (y0, y*), a linear
    panel on (y*, Y_max) and an analytic small-y tail below y0.
    """
    x = float(x)
    if not x > 0.0 or not math.isfinite(x):
        raise DomainError("jaeger requires finite x > 0")
    nu = abs(float(p))
    if x < cfg.small_x_cutoff:
        return jaeger_small_x(x, nu)
    if x > cfg.large_x_cutoff and nu > 0.0:
        return jaeger_large_x(x, nu)

    qc = QuadConfig(rel_tol=cfg.rel_tol * 0.1, max_panels=cfg.max_subdivisions)
    y_star = min(1.0, 1.0 / math.sqrt(x))
    y0 = min(1e-5, math.sqrt(1e-13 / x))
    y_max = math.sqrt((math.log(1.0 / cfg.rel_tol) + 12.0) / x)

    def in_log(t):
        y = np.exp(t)
        return np.exp(-x * y * y) / hankel_abs_sq(nu, y)

    def in_lin(y):
        return np.exp(-x * y * y) / (y * hankel_abs_sq(nu, y))

    tail = _small_y_tail(nu, y0)
    mid = integrate(in_log, math.log(y0), math.log(y_star), qc)
    top = integrate(in_lin, y_star, y_max, qc)
    return 2.0 / math.pi**2 * (tail + mid + top)


def erfc(x):
    """Complementary error function."""
    out = sp.erfc(x)
    return out.item() if np.ndim(out) == 0 else out


def erfcx(x):
    """Scaled complementary error function e^{x^2} erfc(x)."""
    out = sp.erfcx(x)
    return out.item() if np.ndim(out) == 0 else out


def upper_gamma(s: float, x: float) -> float:
    """Upper incomplete gamma Gamma(s, x) for x > 0 and any real s."""
    if x <= 0.0:
        raise DomainError("upper_gamma requires x > 0")
    if s > 0.0:
        return float(sp.gammaincc(s, x) * sp.gamma(s))
    # Gamma(s, x) = (Gamma(s+1, x) - x^s e^{-x}) / s
    if s == 0.0:
        return float(sp.exp1(x))
    return (upper_gamma(s + 1.0, x) - x**s * math.exp(-x)) / s
