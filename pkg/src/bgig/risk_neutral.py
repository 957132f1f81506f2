"""Martingale condition and Esscher transform for exp-BGIG prices."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .distributions import BgigParams, bgig_log_mgf
from .errors import DomainError, NoRootError

SCAN_POINTS = 64
EDGE_SHRINK = 1e-9


@dataclass(frozen=True)
class EsscherSolution:
    theta_star: float
    rn_params: BgigParams
    residual: float
    brackets: tuple[tuple[float, float], ...] = ()

    def to_dict(self) -> dict:
        ap, bp, pp, am, bm, pm = self.rn_params.as_tuple()
        return {
            "theta_star": self.theta_star,
            "rn_a_plus": ap,
            "rn_b_plus": bp,
            "rn_p_plus": pp,
            "rn_a_minus": am,
            "rn_b_minus": bm,
            "rn_p_minus": pm,
            "residual": self.residual,
        }


def log_mgf_real(P: BgigParams, s: float) -> float:
    """log E[exp(s X)] for real s in the strip."""
    return float(np.real(bgig_log_mgf(P, float(s))))


def martingale_gap(P: BgigParams, r: float) -> float:
    """E[exp(X_1)] - e^r; zero when e^{-rt} exp(X_t) is a martingale."""
    if not P.plus.a > 2.0:
        raise DomainError(f"martingale condition needs a+ > 2, got a+ = {P.plus.a}")
    return math.exp(log_mgf_real(P, 1.0)) - math.exp(r)


def esscher_params(P: BgigParams, theta: float) -> BgigParams:
    """Parameters of the law tilted by exp(theta x)."""
    return BgigParams.of(
        P.plus.a - 2.0 * theta, P.plus.b, P.plus.p, P.minus.a + 2.0 * theta, P.minus.b, P.minus.p
    )


def admissible_interval(P: BgigParams) -> tuple[float, float]:
    return -P.minus.a / 2.0, P.plus.a / 2.0 - 1.0


def esscher_equation(P: BgigParams, theta: float, r: float) -> float:
    """log E[e^{(theta+1) X}] - log E[e^{theta X}] - r."""
    return log_mgf_real(P, theta + 1.0) - log_mgf_real(P, theta) - r


def solve_esscher(P: BgigParams, r: float = 0.0, tol: float = 1e-12) -> EsscherSolution:
    """Solve for the Esscher parameter theta* and the induced risk-neutral law.

    The admissible interval is scanned on SCAN_POINTS equally spaced points
    (shrunk by EDGE_SHRINK at each end); a unique sign change is refined by
    Brent's method. More than one sign change is reported as an error since
    uniqueness is not guaranteed a priori.
    """
    lo, hi = admissible_interval(P)
    if not lo < hi:
        raise DomainError("empty admissible interval: a+/2 - 1 <= -a-/2")
    width = hi - lo
    grid = np.linspace(lo + EDGE_SHRINK * width, hi - EDGE_SHRINK * width, SCAN_POINTS)
    vals = np.array([esscher_equation(P, th, r) for th in grid])
    brackets = []
    for i in range(SCAN_POINTS - 1):
        if vals[i] == 0.0:
            brackets.append((grid[i], grid[i]))
        elif vals[i] * vals[i + 1] < 0.0:
            brackets.append((grid[i], grid[i + 1]))
    if vals[-1] == 0.0:
        brackets.append((grid[-1], grid[-1]))
    if not brackets:
        raise NoRootError("the Esscher equation has no sign change on the admissible interval")
    if len(brackets) > 1:
        raise NoRootError(f"the Esscher equation has {len(brackets)} roots: brackets {brackets}")
    a, b = brackets[0]
    if a == b:
        theta = a
    else:
        theta = optimize.brentq(lambda th: esscher_equation(P, th, r), a, b, xtol=tol, rtol=4 * np.finfo(float).eps)
    rn = esscher_params(P, theta)
    residual = esscher_equation(P, theta, r)
    if not rn.plus.a > 2.0:
        warnings.warn("risk-neutral a+ <= 2: the martingale condition cannot be checked", RuntimeWarning)
    return EsscherSolution(theta, rn, residual, tuple(brackets))


def esscher_chf(sol: EsscherSolution, P: BgigParams, u, t: float = 1.0):
    """Risk-neutral chf Phi(u - i theta*, t) / Phi(-i theta*, t) from the physical law."""
    u = np.asarray(u, dtype=float)
    th = sol.theta_star
    out = np.exp(bgig_log_mgf(P, th + 1j * u, t) - bgig_log_mgf(P, th, t))
    return out.item() if out.ndim == 0 else out
