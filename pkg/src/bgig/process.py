"""The BGIG Lévy process: transition laws, path simulation and truncated jumps."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.interpolate import PchipInterpolator

from .distributions import BgigParams, GigParams, bgig_chf_analytic, bgig_pdf
from .distributions.gig import gig_cumulants, gig_log_mgf
from .distributions.sampling import bgig_samples
from .errors import DomainError, PreconditionError, TabulationError
from .quadrature import QuadConfig, integrate
from .rng import RandomStream, make_stream
from .specfun import jaeger

# paths per independent substream in batch simulation
BLOCK_PATHS = 1024


@dataclass(frozen=True)
class PathGrid:
    times: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.times) != len(self.values):
            raise DomainError("times and values must have equal length")
        if any(b <= a for a, b in zip(self.times, self.times[1:])):
            raise DomainError("times must be strictly increasing")


@dataclass(frozen=True)
class JumpRecord:
    time: float
    size: float


def transition_chf(P: BgigParams, u, t: float):
    """E[exp(i u X_t)] = Phi(u)^t on the branch continuous from u = 0."""
    if not t > 0.0:
        raise DomainError("time must be positive")
    return bgig_chf_analytic(P, np.asarray(u, dtype=float), t)


def transition_pdf(P: BgigParams, x, t: float, **kw):
    """Density of X_t by Fourier inversion."""
    return bgig_pdf(P, x, t, **kw)


# ---------------------------------------------------------------- integer grid


def simulate_integer_grid(P: BgigParams, horizon: int, rng: RandomStream) -> PathGrid:
    """One path on times 0, 1, ..., horizon built from i.i.d. BGIG increments."""
    if horizon < 1 or int(horizon) != horizon:
        raise DomainError("horizon must be a positive integer")
    steps = bgig_samples(P, rng, int(horizon))
    values = np.concatenate(([0.0], np.cumsum(steps)))
    return PathGrid(tuple(float(t) for t in range(int(horizon) + 1)), tuple(values.tolist()))


def simulate_integer_paths(P: BgigParams, horizon: int, n_paths: int, seed: int) -> np.ndarray:
    """``n_paths`` paths on 0..horizon as an (n_paths, horizon + 1) array.

    Paths are generated in fixed blocks of BLOCK_PATHS, each from its own
    substream keyed by (seed, block index), so the output depends only on
    the seed and the path count.
    """
    if horizon < 1 or int(horizon) != horizon:
        raise DomainError("horizon must be a positive integer")
    horizon = int(horizon)
    out = np.zeros((n_paths, horizon + 1))
    for blk, start in enumerate(range(0, n_paths, BLOCK_PATHS)):
        stop = min(start + BLOCK_PATHS, n_paths)
        rng = make_stream(seed, blk)
        steps = bgig_samples(P, rng, (stop - start) * horizon).reshape(stop - start, horizon)
        np.cumsum(steps, axis=1, out=out[start:stop, 1:])
    return out


def terminal_values(
    P: BgigParams, horizon: float, n_paths: int, seed: int, stream_key: tuple[int, ...] = ()
) -> np.ndarray:
    """Samples of X_horizon in blocks keyed by (seed, *stream_key, block index)."""
    out = np.empty(n_paths)
    integer = float(horizon).is_integer()
    for blk, start in enumerate(range(0, n_paths, BLOCK_PATHS)):
        stop = min(start + BLOCK_PATHS, n_paths)
        rng = make_stream(seed, *stream_key, blk)
        k = stop - start
        if integer:
            steps = bgig_samples(P, rng, k * int(horizon)).reshape(k, int(horizon))
            out[start:stop] = steps.sum(axis=1)
        else:
            out[start:stop] = sample_increments(P, float(horizon), rng, k)
    return out


# --------------------------------------------------------- fractional grid

# Euler-accelerated Fourier-series Laplace inversion (discretisation error ~ e^{-A})
_EULER_A = 22.0
_EULER_N = 40
_EULER_M = 11


def _euler_cdf(g: GigParams, t: float, x: np.ndarray) -> np.ndarray:
    """CDF of the time-t GIG subordinator at points x > 0 by Laplace inversion."""
    x = np.asarray(x, dtype=float)
    k = np.arange(_EULER_N + _EULER_M + 1)
    s = (_EULER_A + 2j * math.pi * k[None, :]) / (2.0 * x[:, None])
    fhat = np.exp(t * gig_log_mgf(g, -s)) / s
    terms = np.real(fhat)
    terms[:, 0] *= 0.5
    signs = (-1.0) ** k
    partial = np.cumsum(terms * signs[None, :], axis=1)
    binom = np.array([math.comb(_EULER_M, j) for j in range(_EULER_M + 1)]) / 2.0**_EULER_M
    tail = partial[:, _EULER_N : _EULER_N + _EULER_M + 1] @ binom
    return math.exp(_EULER_A / 2.0) / x * tail


@dataclass(frozen=True)
class _QuantileTable:
    quantile: PchipInterpolator
    f_lo: float
    f_hi: float
    x_lo: float
    x_hi: float

    def __call__(self, u: np.ndarray) -> np.ndarray:
        uc = np.clip(u, self.f_lo, self.f_hi)
        return np.exp(self.quantile(uc))


@lru_cache(maxsize=64)
def _subordinator_table(g: GigParams, t: float, nodes: int = 4096) -> _QuantileTable:
    k1, k2, _, _ = gig_cumulants(g)
    mean, sd = t * k1, math.sqrt(t * k2)
    x_hi = mean + 12.0 * sd
    while 1.0 - _euler_cdf(g, t, np.array([x_hi]))[0] > 1e-11:
        x_hi *= 2.0
    x_lo = min(mean, sd) * 1e-2
    while _euler_cdf(g, t, np.array([x_lo]))[0] > 1e-11:
        x_lo *= 1e-2
        if x_lo < 1e-300:
            raise TabulationError("lower tail of the transition law not resolved")
    xs = np.geomspace(x_lo, x_hi, nodes)
    F = _euler_cdf(g, t, xs)
    if np.any(np.diff(F) < -1e-8):
        raise TabulationError("tabulated CDF is not monotone within tolerance")
    F = np.clip(np.maximum.accumulate(F), 0.0, 1.0)
    # values far below the inversion error are noise; start just under 1e-13
    start = max(int(np.searchsorted(F, 1e-13)) - 1, 0)
    F, xs = F[start:], xs[start:]
    keep = np.concatenate(([True], np.diff(F) > 0.0))
    F, lx = F[keep], np.log(xs[keep])
    return _QuantileTable(PchipInterpolator(F, lx), float(F[0]), float(F[-1]), x_lo, x_hi)


def sample_increments(P: BgigParams, dt: float, rng: RandomStream, size: int) -> np.ndarray:
    """Independent draws of X_dt by inverse transform of each one-sided law."""
    if not dt > 0.0:
        raise DomainError("time increments must be positive")
    tp = _subordinator_table(P.plus, float(dt))
    tm = _subordinator_table(P.minus, float(dt))
    up = rng.random(size)
    um = rng.random(size)
    return tp(up) - tm(um)


def simulate_grid(P: BgigParams, times, rng: RandomStream) -> PathGrid:
    """One path on arbitrary increasing times, starting from X = 0 at time 0."""
    ts = [float(t) for t in times]
    if not ts:
        raise DomainError("times must be nonempty")
    if ts[0] < 0.0 or any(b <= a for a, b in zip(ts, ts[1:])):
        raise DomainError("times must be strictly increasing and nonnegative")
    prev, x, values = 0.0, 0.0, []
    for t in ts:
        if t > prev:
            x += float(sample_increments(P, t - prev, rng, 1)[0])
        values.append(x)
        prev = t
    return PathGrid(tuple(ts), tuple(values))


# ------------------------------------------------------------------- jumps


def _side_integrand(g: GigParams, q: float):
    # x^{q} pi(x) dx in the variable v = log x, i.e. x^{q+1} pi(x) dv
    def f(v):
        x = np.exp(v)
        jv = np.array([jaeger(xi / (2.0 * g.b), g.p) for xi in x])
        return x**q * np.exp(-0.5 * g.a * x) * (jv + max(g.p, 0.0))

    return f


def _upper_cut(g: GigParams) -> float:
    # e^{-a x / 2} below ~1e-20 relative to the small-x scale
    return (2.0 / g.a) * (50.0 + max(abs(g.p), 1.0) * 5.0)


def levy_integral(P: BgigParams, lo: float, hi: float, q: float = 0.0, side: int = 1) -> float:
    """int_lo^hi x^q pi(dx) on the positive (side=1) or negative (side=-1) half line."""
    if not 0.0 < lo < hi:
        raise DomainError("need 0 < lo < hi")
    g = P.plus if side > 0 else P.minus
    hi = min(hi, _upper_cut(g))
    if hi <= lo:
        return 0.0
    cfg = QuadConfig(rel_tol=1e-10, order=12, initial_panels=4)
    return float(integrate(_side_integrand(g, q), math.log(lo), math.log(hi), cfg))


@dataclass(frozen=True)
class _JumpTable:
    mass: float
    quantile: PchipInterpolator


@lru_cache(maxsize=32)
def _jump_table(g: GigParams, eps: float, segments: int = 96, order: int = 10) -> _JumpTable:
    # the integrand is smooth in v = log x, so fixed Gauss-Legendre panels suffice
    v_lo, v_hi = math.log(eps), math.log(max(_upper_cut(g), 2.0 * eps))
    edges = np.linspace(v_lo, v_hi, segments + 1)
    nodes, weights = np.polynomial.legendre.leggauss(order)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    pts = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
    vals = _side_integrand(g, 0.0)(pts).reshape(segments, order)
    pieces = half * (vals @ weights)
    cum = np.concatenate(([0.0], np.cumsum(pieces)))
    mass = float(cum[-1])
    F = cum / mass if mass > 0 else cum
    keep = np.concatenate(([True], np.diff(F) > 0.0))
    return _JumpTable(mass, PchipInterpolator(F[keep], edges[keep]))


def levy_tail_mass(P: BgigParams, eps: float) -> tuple[float, float]:
    """(pi([eps, inf)), pi((-inf, -eps]))."""
    if not eps > 0.0:
        raise DomainError("eps must be positive")
    return _jump_table(P.plus, float(eps)).mass, _jump_table(P.minus, float(eps)).mass


def sample_levy_jumps(P: BgigParams, T: float, eps: float, rng: RandomStream) -> list[JumpRecord]:
    """Jumps of size |x| >= eps on [0, T], sorted by time."""
    if not T > 0.0:
        raise DomainError("T must be positive")
    if not eps > 0.0:
        raise DomainError("eps must be positive")
    out_t, out_x = [], []
    for g, sgn in ((P.plus, 1.0), (P.minus, -1.0)):
        tab = _jump_table(g, float(eps))
        n = rng.poisson(T * tab.mass)
        times = T * rng.random(n)
        sizes = np.maximum(np.exp(tab.quantile(rng.random(n))), eps)
        out_t.append(times)
        out_x.append(sgn * sizes)
    times = np.concatenate(out_t)
    sizes = np.concatenate(out_x)
    order = np.argsort(times, kind="stable")
    return [JumpRecord(float(times[i]), float(sizes[i])) for i in order]


def jump_count_estimator(jumps, T: float, n: int, eps: float | None = None) -> tuple[float, float]:
    """U_n+- = #{+-jump >= n^{-2}} / (n T)."""
    if n < 1 or not T > 0.0:
        raise DomainError("need n >= 1 and T > 0")
    thr = float(n) ** -2
    if eps is not None and eps > thr:
        raise PreconditionError(f"jumps truncated at {eps} exceed the threshold n^-2 = {thr}")
    up = sum(1 for j in jumps if j.size >= thr)
    dn = sum(1 for j in jumps if j.size <= -thr)
    return up / (n * T), dn / (n * T)


def levy_exponent(P: BgigParams, u: float, x_floor: float = 1e-14) -> complex:
    """int (e^{iux} - 1) pi(dx) over both half lines by direct quadrature of the Lévy density."""
    total = 0.0 + 0.0j
    cfg = QuadConfig(rel_tol=1e-9, order=12, initial_panels=8)
    for g, sgn in ((P.plus, 1.0), (P.minus, -1.0)):
        lev = _side_integrand(g, 0.0)

        def f(v, lev=lev, sgn=sgn):
            x = np.exp(v)
            return np.expm1(1j * u * sgn * x) * lev(v)

        total += integrate(f, math.log(x_floor), math.log(_upper_cut(g)), cfg)
        # below x_floor: (e^{iux} - 1) ~ iux and pi(x) ~ sqrt(b/2pi) x^{-3/2}
        total += 1j * u * sgn * math.sqrt(g.b / (2.0 * math.pi)) * 2.0 * math.sqrt(x_floor)
    return complex(total)
