"""Double Mellin-Barnes representation of the BGIG density.

Intended as a low-accuracy oracle independent of Fourier inversion.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import special as sp

from ..errors import ConvergenceError, DomainError
from ..specfun import bessel_k
from .gig import _complex_order_k
from .params import BgigParams


def bgig_pdf_mellin(
    P: BgigParams,
    x: float,
    c1: float = 1.0,
    c2: float = 0.5,
    t_max: float = 40.0,
    step: float = 0.1,
) -> float:
    """Density at x from the double contour integral over Re s1 = c1, Re s2 = c2.

    f(x) = (2 pi i)^{-2} iint G(s1, s2) M+(s1) M-(s2) x^{1-s1-s2} ds1 ds2 with
    G = Gamma(s1+s2-1) Gamma(1-s2) / Gamma(s1) and M+- the one-sided Mellin
    transforms. The contour must satisfy c1 > 0, c2 < 1 and c1 + c2 > 1.
    Negative x is handled through the reflected parameters.
    """
    if x == 0.0:
        raise DomainError("Mellin representation needs x != 0")
    if x < 0.0:
        return bgig_pdf_mellin(P.swap(), -x, c1, c2, t_max, step)
    if not (c1 > 0.0 and c2 < 1.0 and c1 + c2 > 1.0):
        raise DomainError("contour outside the admissible polyhedron")
    gp, gm = P.plus, P.minus
    t = np.arange(-t_max, t_max + 0.5 * step, step)
    s1 = c1 + 1j * t
    s2 = c2 + 1j * t
    # one-sided factors (a/b)^{(1-s)/2} K_{s+p-1}(omega) / K_p(omega)
    m_plus = np.exp(0.5 * (1.0 - s1) * math.log(gp.a / gp.b)) * _complex_order_k(
        s1 + gp.p - 1.0, gp.omega
    ) / bessel_k(gp.p, gp.omega)
    m_minus = np.exp(0.5 * (1.0 - s2) * math.log(gm.a / gm.b)) * _complex_order_k(
        s2 + gm.p - 1.0, gm.omega
    ) / bessel_k(gm.p, gm.omega)
    lx = math.log(x)
    a1 = m_plus * np.exp(-sp.loggamma(s1) - s1 * lx)
    a2 = m_minus * np.exp(sp.loggamma(1.0 - s2) - s2 * lx)
    S = s1[:, None] + s2[None, :]
    core = np.exp(sp.loggamma(S - 1.0))
    grid = core * a1[:, None] * a2[None, :]
    edge = max(np.abs(grid[0, :]).max(), np.abs(grid[-1, :]).max(), np.abs(grid[:, 0]).max(), np.abs(grid[:, -1]).max())
    if not np.isfinite(grid).all() or edge > 1e-10 * np.abs(grid).max():
        raise ConvergenceError("Mellin-Barnes integrand not negligible at the truncation boundary")
    total = grid.sum() * step * step * x
    return float(np.real(total)) / (4.0 * math.pi**2)
