"""Two-stage calibration from a price series.

Stage one estimates a+- from the sample extremes; stage two fits
(b+, p+, b-, p-) to the first four sample moments by least squares.
The result is converted to risk-neutral parameters by the Esscher transform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .distributions import BgigParams, CumulantSet, bgig_cumulants
from .errors import DegenerateSampleError, DomainError, OptimizationError, PreconditionError
from .risk_neutral import EsscherSolution, solve_esscher

DEFAULT_CEILING = 1e-2


@dataclass(frozen=True)
class ReturnSeries:
    values: tuple[float, ...]
    delta: float = 1.0

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if not vals:
            raise DomainError("return series is empty")
        if not all(math.isfinite(v) for v in vals):
            raise DomainError("return series contains non-finite values")
        if not (math.isfinite(self.delta) and self.delta > 0.0):
            raise DomainError("delta must be positive")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "delta", float(self.delta))

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class MomentTargets:
    """Mean, variance, standardized skewness and standardized kurtosis."""

    m1: float
    m2: float
    m3: float
    m4: float

    def __post_init__(self):
        if not self.m2 > 0.0:
            raise DomainError("variance target must be positive")
        # kurtosis >= 1 always holds; allow for rounding in the sample moments
        if not self.m4 >= 1.0 - 1e-12:
            raise DomainError("kurtosis target must be at least 1")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.m1, self.m2, self.m3, self.m4)


@dataclass(frozen=True)
class CalibrationResult:
    params: BgigParams
    targets: MomentTargets
    fitted: MomentTargets
    residual_norm: float
    n_used: int
    trimmed: int


def log_returns(prices, delta: float = 1.0) -> ReturnSeries:
    """Log-returns ln(S_{k+1} / S_k)."""
    arr = np.asarray(prices, dtype=float)
    if arr.ndim != 1 or arr.size < 2:
        raise DomainError("need at least two prices")
    if np.any(~np.isfinite(arr)) or np.any(arr <= 0.0):
        raise DomainError("prices must be finite and strictly positive")
    return ReturnSeries(tuple(np.diff(np.log(arr)).tolist()), delta)


def trim_outliers(s: ReturnSeries, q: float) -> ReturnSeries:
    """Drop the floor(q n) largest and floor(q n) smallest returns, keeping order."""
    if not 0.0 <= q < 0.5:
        raise DomainError("trim fraction must lie in [0, 0.5)")
    n = len(s)
    k = int(math.floor(q * n))
    if 2 * k >= n:
        raise DegenerateSampleError("trimming would remove every observation")
    if k == 0:
        return s
    vals = np.asarray(s.values)
    order = np.argsort(vals, kind="stable")
    drop = np.zeros(n, dtype=bool)
    drop[order[:k]] = True
    drop[order[n - k :]] = True
    return ReturnSeries(tuple(vals[~drop].tolist()), s.delta)


def estimate_a(s: ReturnSeries, allow_nonunit_delta: bool = False) -> tuple[float, float]:
    """Extreme-value estimates a+ = 2 ln n / max, a- = -2 ln n / min.

    The estimator is derived for unit-spacing returns; other spacings need
    ``allow_nonunit_delta`` and are then applied to the raw returns.
    """
    if s.delta != 1.0 and not allow_nonunit_delta:
        raise PreconditionError("estimate_a assumes unit spacing; pass allow_nonunit_delta=True")
    vals = np.asarray(s.values)
    n = vals.size
    hi, lo = float(vals.max()), float(vals.min())
    if n < 2 or hi <= 0.0 or lo >= 0.0:
        raise DegenerateSampleError("need both a positive maximum and a negative minimum")
    ln = math.log(n)
    return 2.0 * ln / hi, -2.0 * ln / lo


def moment_targets(s: ReturnSeries) -> MomentTargets:
    """Sample mean, variance, skewness and kurtosis, all with divisor n."""
    vals = np.asarray(s.values)
    if vals.size < 4:
        raise DegenerateSampleError("need at least four returns")
    mean = float(vals.mean())
    dev = vals - mean
    var = float(np.mean(dev**2))
    if not var > 0.0:
        raise DegenerateSampleError("sample variance is zero")
    skew = float(np.mean(dev**3)) / var**1.5
    kurt = float(np.mean(dev**4)) / var**2
    return MomentTargets(mean, var, skew, kurt)


def moments_from_cumulants(c: CumulantSet, delta: float = 1.0) -> MomentTargets:
    """Moments of X_delta: delta k1, delta k2, k3 / (k2^{3/2} sqrt delta), 3 + k4 / (k2^2 delta)."""
    return MomentTargets(
        delta * c.k1,
        delta * c.k2,
        c.k3 / (c.k2**1.5 * math.sqrt(delta)),
        3.0 + c.k4 / (c.k2**2 * delta),
    )


def model_moments(P: BgigParams, delta: float = 1.0) -> MomentTargets:
    return moments_from_cumulants(bgig_cumulants(P), delta)


def _relative_residuals(fitted, targets) -> np.ndarray:
    f = np.asarray(fitted)
    t = np.asarray(targets)
    return (f - t) / np.maximum(np.abs(t), 1e-12)


def _params_from(z, a_hat) -> BgigParams:
    return BgigParams.of(a_hat[0], math.exp(z[0]), z[1], a_hat[1], math.exp(z[2]), z[3])


def _residual_vector(z, a_hat, delta, targets) -> np.ndarray:
    try:
        P = _params_from(z, a_hat)
        c = bgig_cumulants(P)
        if not c.k2 > 0.0:
            raise ValueError
        m = moments_from_cumulants(c, delta)
    except (ValueError, ArithmeticError, OverflowError):
        return np.full(4, 1e6)
    r = _relative_residuals(m.as_tuple(), targets.as_tuple())
    return r if np.all(np.isfinite(r)) else np.full(4, 1e6)


def _seeds(targets: MomentTargets, a_hat, delta: float) -> list[np.ndarray]:
    """Starting points from the b -> 0 (gamma) limit, where k_n = p (n-1)! (2/a)^n."""
    ap, am = a_hat
    k1, k2 = targets.m1 / delta, targets.m2 / delta
    mat = np.array([[2.0 / ap, -2.0 / am], [4.0 / ap**2, 4.0 / am**2]])
    pp, pm = np.linalg.solve(mat, [k1, k2])
    bg = (max(pp, 0.5), max(pm, 0.5))
    p_sym = k2 / (4.0 / ap**2 + 4.0 / am**2)
    vg = (max(p_sym, 0.5), max(p_sym, 0.5))
    seeds = []
    for pair in (bg, vg):
        for omega in (0.5, 2.0, 5.0, 10.0):
            seeds.append(np.array([math.log(omega**2 / ap), pair[0], math.log(omega**2 / am), pair[1]]))
    return seeds


def fit_moments(
    targets: MomentTargets,
    a_hat: tuple[float, float],
    delta: float = 1.0,
    init: BgigParams | None = None,
    ceiling: float = DEFAULT_CEILING,
    n_used: int = 0,
    trimmed: int = 0,
) -> CalibrationResult:
    """Least-squares fit of (b+, p+, b-, p-) to four moment targets with a+- fixed.

    Nelder-Mead on (log b+, p+, log b-, p-) from eight deterministic seeds
    (plus ``init`` if given), each polished by a Levenberg-Marquardt step on
    the relative residuals. The best residual norm wins; ties go to the
    lexicographically smallest parameter vector.
    """
    if not (a_hat[0] > 0.0 and a_hat[1] > 0.0):
        raise DomainError("a estimates must be positive")
    starts = _seeds(targets, a_hat, delta)
    if init is not None:
        starts.insert(
            0, np.array([math.log(init.plus.b), init.plus.p, math.log(init.minus.b), init.minus.p])
        )
    res_fn = lambda z: _residual_vector(z, a_hat, delta, targets)  # noqa: E731
    obj = lambda z: float(np.sum(res_fn(z) ** 2))  # noqa: E731
    best = None
    for z0 in starts:
        nm = optimize.minimize(
            obj,
            z0,
            method="Nelder-Mead",
            options={"xatol": 1e-12, "fatol": 1e-24, "maxiter": 3000, "maxfev": 6000, "adaptive": True},
        )
        z = nm.x
        try:
            lm = optimize.least_squares(res_fn, z, method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=2000)
            if obj(lm.x) < obj(z):
                z = lm.x
        except (ValueError, ArithmeticError):
            pass
        norm = math.sqrt(obj(z))
        key = (norm, tuple(z))
        if best is None or key < best[0]:
            best = (key, z)
    (norm, _), z = best
    P = _params_from(z, a_hat)
    fitted = model_moments(P, delta)
    if not norm <= ceiling:
        raise OptimizationError(
            f"moment fit residual {norm:.3e} exceeds ceiling {ceiling:.1e} (best params {P.as_tuple()})"
        )
    return CalibrationResult(P, targets, fitted, norm, n_used, trimmed)


def calibrate(
    prices,
    delta: float = 1.0,
    trim_q: float = 0.01,
    r: float = 0.0,
    estimate_on_trimmed: bool = True,
    allow_nonunit_delta: bool = False,
    ceiling: float = DEFAULT_CEILING,
) -> tuple[CalibrationResult, EsscherSolution]:
    """Full pipeline: returns, trimming, a+- from extremes, moment fit, Esscher transform."""
    if len(prices) < 5:
        raise DomainError("need at least five prices")
    raw = log_returns(prices, delta)
    trimmed = trim_outliers(raw, trim_q)
    a_hat = estimate_a(trimmed if estimate_on_trimmed else raw, allow_nonunit_delta)
    targets = moment_targets(trimmed)
    fit = fit_moments(
        targets,
        a_hat,
        delta,
        ceiling=ceiling,
        n_used=len(trimmed),
        trimmed=len(raw) - len(trimmed),
    )
    return fit, solve_esscher(fit.params, r)
