"""Parameter containers for one- and two-sided GIG laws."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from ..errors import DomainError


@dataclass(frozen=True)
class GigParams:
    """GIG law on (0, inf) with density proportional to x^{p-1} e^{-(a x + b/x)/2}."""

    a: float
    b: float
    p: float

    def __post_init__(self):
        for name in ("a", "b", "p"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                raise DomainError(f"GIG parameter {name} must be a finite real, got {v!r}")
            object.__setattr__(self, name, float(v))
        if self.a <= 0.0 or self.b <= 0.0:
            raise DomainError(f"GIG parameters need a > 0 and b > 0, got a={self.a}, b={self.b}")

    @property
    def omega(self) -> float:
        return math.sqrt(self.a * self.b)

    @property
    def eta(self) -> float:
        """Scale sqrt(b/a): a GIG variate is eta times a unit-scale one."""
        return math.sqrt(self.b / self.a)


@dataclass(frozen=True)
class BgigParams:
    """Law of X+ - X- with independent X+ ~ GIG(plus) and X- ~ GIG(minus)."""

    plus: GigParams
    minus: GigParams

    @classmethod
    def of(cls, a_plus, b_plus, p_plus, a_minus, b_minus, p_minus) -> "BgigParams":
        return cls(GigParams(a_plus, b_plus, p_plus), GigParams(a_minus, b_minus, p_minus))

    def swap(self) -> "BgigParams":
        """Parameters of -X."""
        return BgigParams(self.minus, self.plus)

    def as_tuple(self) -> tuple[float, ...]:
        return (self.plus.a, self.plus.b, self.plus.p, self.minus.a, self.minus.b, self.minus.p)

    @property
    def strip(self) -> tuple[float, float]:
        """Open interval of real s with E[exp(s X)] finite."""
        return (-self.minus.a / 2.0, self.plus.a / 2.0)


@dataclass(frozen=True)
class CumulantSet:
    k1: float
    k2: float
    k3: float
    k4: float

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.k1, self.k2, self.k3, self.k4)


@dataclass(frozen=True)
class TailConstants:
    z_plus: float
    z_minus: float


class ModeSide(Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    ZERO = "zero"
