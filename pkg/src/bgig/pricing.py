"""European option prices under a risk-neutral exp-BGIG model."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .distributions import BgigParams, bgig_log_mgf
from .errors import DomainError, PreconditionError
from .process import terminal_values
from .quadrature import QuadConfig, integrate
from .risk_neutral import martingale_gap


class OptionKind(Enum):
    CALL = "call"
    PUT = "put"


class Method(Enum):
    MONTE_CARLO = "mc"
    LEWIS_LIPTON = "lewis"


@dataclass(frozen=True)
class OptionSpec:
    spot: float
    strike: float
    maturity: float
    rate: float = 0.0
    kind: OptionKind = OptionKind.CALL

    def __post_init__(self):
        for name in ("spot", "strike", "maturity"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0.0):
                raise DomainError(f"{name} must be a positive finite number, got {v!r}")
        if not math.isfinite(self.rate):
            raise DomainError("rate must be finite")

    @property
    def discount(self) -> float:
        return math.exp(-self.rate * self.maturity)

    def parity(self) -> float:
        """Call minus put: S0 - K e^{-rT}."""
        return self.spot - self.strike * self.discount


@dataclass(frozen=True)
class PriceResult:
    value: float
    method: Method
    std_error: float | None = None
    n_paths: int | None = None


@dataclass(frozen=True)
class McConfig:
    n_paths: int = 50_000
    seed: int = 0
    itm_calls_via_parity: bool = True


def _check_martingale(rn: BgigParams, rate: float, tol: float = 1e-8):
    gap = martingale_gap(rn, rate)
    if abs(gap) > tol:
        raise PreconditionError(f"parameters are not risk neutral at rate {rate}: gap {gap:.3e}")


# ---------------------------------------------------------------- Lewis-Lipton


def _contour_ok(rn: BgigParams, v1: float) -> bool:
    # Phi(-z) with Im z = v1 needs E[exp(v1 X)] finite: v1 < a+/2
    return 1.0 < v1 < rn.plus.a / 2.0


def lewis_call(
    rn: BgigParams,
    opt: OptionSpec,
    v1: float = 1.1,
    quad: QuadConfig = QuadConfig(rel_tol=1e-12, initial_panels=4),
) -> float:
    """Call price -K e^{-rT}/(2 pi) int e^{-izk} Phi(-z, T) / (z^2 - iz) dz, Im z = v1.

    With z = x + i v1 the integrand at -x is the conjugate of the one at x,
    so the price is -K e^{-rT}/pi int_0^inf Re(...) dx.
    """
    if not _contour_ok(rn, v1):
        v_try = v1
        while not _contour_ok(rn, v_try) and v_try > 1.0 + 1e-6:
            v_try = 1.0 + 0.5 * (v_try - 1.0)
        if not _contour_ok(rn, v_try):
            raise DomainError(f"no contour Im z > 1 inside the strip (a+* = {rn.plus.a})")
        v1 = v_try
    T = opt.maturity
    k = math.log(opt.spot / opt.strike) + opt.rate * T

    def logpsi(x):
        z = x + 1j * v1
        # Phi(-z, T) = E[exp(-i z X_T)] = exp(T log E[exp(w X)]) with w = -iz
        return bgig_log_mgf(rn, -1j * z, T) - 1j * z * k - np.log(z * z - 1j * z)

    def integrand(x):
        return np.real(np.exp(logpsi(x)))

    x_max = 1.0
    while np.exp(np.real(logpsi(np.array([x_max]))))[0] * x_max > 1e-18:
        x_max *= 2.0
        if x_max > 1e14:
            raise DomainError("integrand of the Lewis formula does not decay")
    brk = np.geomspace(1e-2, x_max, max(4, int(math.log2(x_max / 1e-2)) + 1))
    val = integrate(integrand, 0.0, x_max, quad, breakpoints=brk)
    return -opt.strike * opt.discount / math.pi * float(val)


def price_lewis(
    rn: BgigParams,
    opt: OptionSpec,
    v1: float = 1.1,
    quad: QuadConfig = QuadConfig(rel_tol=1e-12, initial_panels=4),
) -> PriceResult:
    call = lewis_call(rn, opt, v1, quad)
    value = call if opt.kind is OptionKind.CALL else call - opt.parity()
    return PriceResult(max(value, 0.0), Method.LEWIS_LIPTON)


# ----------------------------------------------------------------- Monte Carlo


def _mc_stats(payoff: np.ndarray, discount: float) -> tuple[float, float]:
    n = payoff.size
    mean = float(payoff.mean())
    se = float(payoff.std(ddof=1) / math.sqrt(n)) if n > 1 else float("nan")
    return discount * mean, discount * se


def price_mc_from_terminal(opt: OptionSpec, x_t: np.ndarray, via_parity: bool = False) -> PriceResult:
    """Discounted payoff average over given terminal log-returns X_T.

    With ``via_parity`` a call is priced as MC put plus S0 - K e^{-rT}, which
    replaces the noisy sample mean of S_T by its exact expectation. When no
    draw finishes in the money for the put its sample variance is zero and
    says nothing about the error, so the direct call estimator is used.
    """
    s_t = opt.spot * np.exp(x_t)
    n = int(x_t.size)
    if opt.kind is OptionKind.PUT or via_parity:
        put_payoff = np.maximum(opt.strike - s_t, 0.0)
        put, se = _mc_stats(put_payoff, opt.discount)
        if opt.kind is OptionKind.PUT:
            return PriceResult(put, Method.MONTE_CARLO, se, n)
        if np.any(put_payoff > 0.0):
            return PriceResult(max(put + opt.parity(), 0.0), Method.MONTE_CARLO, se, n)
    call, se = _mc_stats(np.maximum(s_t - opt.strike, 0.0), opt.discount)
    return PriceResult(call, Method.MONTE_CARLO, se, n)


def price_mc(rn: BgigParams, opt: OptionSpec, n_paths: int = 50_000, seed: int = 0) -> PriceResult:
    """Plain Monte Carlo price from simulated X_T."""
    if n_paths < 100:
        raise DomainError("n_paths must be at least 100")
    _check_martingale(rn, opt.rate)
    x_t = terminal_values(rn, opt.maturity, n_paths, seed)
    return price_mc_from_terminal(opt, x_t)


@dataclass(frozen=True)
class PricePair:
    option: OptionSpec
    lewis: PriceResult | None
    mc: PriceResult | None

    @property
    def discrepancy(self) -> float | None:
        """|MC - Lewis| in units of the MC standard error."""
        if self.lewis is None or self.mc is None or not self.mc.std_error:
            return None
        return abs(self.mc.value - self.lewis.value) / self.mc.std_error


def price_table(
    rn: BgigParams,
    opts: list[OptionSpec],
    mc_cfg: McConfig | None = McConfig(),
    quad: QuadConfig | None = QuadConfig(rel_tol=1e-12, initial_panels=4),
    v1: float = 1.1,
) -> list[PricePair]:
    """Price every option by both methods (either may be disabled with None).

    Monte Carlo uses one set of terminal draws per (maturity, rate) group, so
    prices across strikes share random numbers. A repeated contract is priced
    on a fresh substream, giving an independent estimate. In-the-money calls are priced from the bounded put
    payoff plus parity unless disabled in ``mc_cfg``.
    """
    if not opts:
        return []
    draws: dict[tuple, np.ndarray] = {}
    seen: dict[OptionSpec, int] = {}
    out = []
    for opt in opts:
        lew = price_lewis(rn, opt, v1, quad) if quad is not None else None
        mc = None
        if mc_cfg is not None:
            rep = seen.get(opt, 0)
            seen[opt] = rep + 1
            key = (opt.maturity, opt.rate, rep)
            if key not in draws:
                if mc_cfg.n_paths < 100:
                    raise DomainError("n_paths must be at least 100")
                _check_martingale(rn, opt.rate)
                stream = (rep,) if rep else ()
                draws[key] = terminal_values(rn, opt.maturity, mc_cfg.n_paths, mc_cfg.seed, stream)
            via = (
                mc_cfg.itm_calls_via_parity
                and opt.kind is OptionKind.CALL
                and opt.strike < opt.spot
            )
            mc = price_mc_from_terminal(opt, draws[key], via_parity=via)
        out.append(PricePair(opt, lew, mc))
    return out
