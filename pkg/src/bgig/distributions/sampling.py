"""Exact GIG and BGIG random variates.

The unit-scale GIG(lam, omega) law has density proportional to
x^{lam-1} exp(-omega (x + 1/x) / 2); a GIG(a, b, p) variate is
sqrt(b/a) times a unit-scale variate with lam = p, omega = sqrt(ab), and
negative lam is handled through X -> 1/X.

Three rejection regimes cover the whole parameter plane with bounded
rejection rates: ratio-of-uniforms with mode shift, ratio-of-uniforms
without shift, and a three-piece dominating density for small omega and
lam < 1.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import SamplingError
from ..rng import RandomStream
from .params import BgigParams, GigParams

MAX_ROUNDS = 10_000


def _log_g(lam, omega, x):
    return (lam - 1.0) * np.log(x) - 0.5 * omega * (x + 1.0 / x)


def _mode(lam, omega):
    # stable form of ((lam-1) + sqrt((lam-1)^2 + omega^2)) / omega
    if lam >= 1.0:
        return ((lam - 1.0) + math.hypot(lam - 1.0, omega)) / omega
    return omega / (math.hypot(1.0 - lam, omega) + (1.0 - lam))


def _shift_bounds(lam, omega, m, log_gm):
    # extremes of (x - m) sqrt(g(x)/g(m)) solve a cubic in x
    coeffs = [-omega, omega * m + 2.0 * lam + 2.0, omega - 2.0 * (lam - 1.0) * m, -omega * m]
    roots = np.roots(coeffs)
    real = np.sort(roots[np.abs(roots.imag) < 1e-9 * (1.0 + np.abs(roots.real))].real)
    below = real[(real > 0.0) & (real < m)]
    above = real[real > m]
    if below.size == 0 or above.size == 0:
        raise SamplingError("ratio-of-uniforms bounds not found")
    xm, xp = below[0], above[-1]
    vm = (xm - m) * math.exp(0.5 * (_log_g(lam, omega, xm) - log_gm))
    vp = (xp - m) * math.exp(0.5 * (_log_g(lam, omega, xp) - log_gm))
    return vm, vp


def _rou_shift(lam, omega, rng, n):
    m = _mode(lam, omega)
    log_gm = _log_g(lam, omega, m)
    vm, vp = _shift_bounds(lam, omega, m, log_gm)

    def propose(k):
        u = rng.random(k)
        v = vm + (vp - vm) * rng.random(k)
        with np.errstate(divide="ignore"):
            x = v / u + m
        ok = x > 0.0
        xs = np.where(ok, x, 1.0)
        ok &= 2.0 * np.log(u) <= _log_g(lam, omega, xs) - log_gm
        return x[ok]

    return _collect(propose, n)


def _rou_noshift(lam, omega, rng, n):
    m = _mode(lam, omega)
    log_gm = _log_g(lam, omega, m)
    x0 = ((lam + 1.0) + math.hypot(lam + 1.0, omega)) / omega
    vmax = x0 * math.exp(0.5 * (_log_g(lam, omega, x0) - log_gm))

    def propose(k):
        u = rng.random(k)
        v = vmax * rng.random(k)
        with np.errstate(divide="ignore"):
            x = v / u
        ok = x > 0.0
        xs = np.where(ok, x, 1.0)
        ok &= 2.0 * np.log(u) <= _log_g(lam, omega, xs) - log_gm
        return x[ok]

    return _collect(propose, n)


def _small_omega(lam, omega, rng, n):
    # dominating function: constant on (0, x0), x^{lam-1} e^{-omega} on
    # (x0, x*), x*^{lam-1} e^{-omega x/2} on (x*, inf)
    m = _mode(lam, omega)
    x0 = omega / (1.0 - lam)
    xs = max(x0, 2.0 / omega)
    k1 = math.exp(_log_g(lam, omega, m))
    a1 = k1 * x0
    if x0 < 2.0 / omega:
        k2 = math.exp(-omega)
        if lam == 0.0:
            a2 = k2 * math.log(2.0 / omega**2)
        else:
            a2 = k2 * ((2.0 / omega) ** lam - x0**lam) / lam
    else:
        k2, a2 = 0.0, 0.0
    k3 = xs ** (lam - 1.0)
    a3 = 2.0 * k3 * math.exp(-xs * omega / 2.0) / omega
    total = a1 + a2 + a3

    def propose(k):
        u = rng.random(k)
        v = total * rng.random(k)
        x = np.empty(k)
        h = np.empty(k)
        p1 = v <= a1
        p2 = (~p1) & (v <= a1 + a2)
        p3 = ~(p1 | p2)
        x[p1] = x0 * v[p1] / a1
        h[p1] = k1
        if p2.any():
            v2 = v[p2] - a1
            if lam == 0.0:
                x[p2] = omega * np.exp(v2 * math.exp(omega))
            else:
                x[p2] = (x0**lam + v2 * lam / k2) ** (1.0 / lam)
            h[p2] = k2 * x[p2] ** (lam - 1.0)
        v3 = v[p3] - a1 - a2
        x[p3] = -2.0 / omega * np.log(math.exp(-xs * omega / 2.0) - v3 * omega / (2.0 * k3))
        h[p3] = k3 * np.exp(-x[p3] * omega / 2.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            ok = (x > 0.0) & np.isfinite(x)
            xsafe = np.where(ok, x, 1.0)
            ok &= u * h <= np.exp(_log_g(lam, omega, xsafe))
        return x[ok]

    return _collect(propose, n)


def _collect(propose, n):
    out = np.empty(n)
    filled = 0
    batch = n
    for _ in range(MAX_ROUNDS):
        if filled >= n:
            return out
        got = propose(max(batch, 16))
        take = min(got.size, n - filled)
        out[filled : filled + take] = got[:take]
        filled += take
        batch = int(1.3 * (n - filled)) + 1
    if filled >= n:
        return out
    raise SamplingError(f"rejection sampler exceeded {MAX_ROUNDS} rounds")


def _unit_gig(lam, omega, rng, n):
    if lam >= 1.0 or omega > 1.0:
        return _rou_shift(lam, omega, rng, n)
    if omega >= min(0.5, 2.0 / 3.0 * math.sqrt(1.0 - lam)):
        return _rou_noshift(lam, omega, rng, n)
    return _small_omega(lam, omega, rng, n)


def gig_samples(g: GigParams, rng: RandomStream, size: int) -> np.ndarray:
    """``size`` independent GIG(a, b, p) variates."""
    size = int(size)
    if size <= 0:
        return np.empty(0)
    lam = abs(g.p)
    x = _unit_gig(lam, g.omega, rng, size)
    if g.p < 0.0:
        x = 1.0 / x
    return g.eta * x


def gig_sample(g: GigParams, rng: RandomStream) -> float:
    return float(gig_samples(g, rng, 1)[0])


def bgig_samples(P: BgigParams, rng: RandomStream, size: int) -> np.ndarray:
    """``size`` BGIG variates as differences of independent GIG variates."""
    xp = gig_samples(P.plus, rng, size)
    xm = gig_samples(P.minus, rng, size)
    return xp - xm


def bgig_sample(P: BgigParams, rng: RandomStream) -> float:
    return float(bgig_samples(P, rng, 1)[0])
