"""Point estimates of the population size from an observed serial sample."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Tuple, Union

from .distributions import Variable
from .errors import InvalidParameter


class Method(str, enum.Enum):
    KNOWN_MIN = "known-min"
    UNKNOWN_MIN = "unknown-min"


@dataclass(frozen=True)
class SerialSample:
    serials: Tuple[int, ...]
    k: int
    m_max: int
    m_min: int
    spread: int

    def __post_init__(self):
        if not self.serials:
            raise InvalidParameter("a sample needs at least one serial")
        if any(s < 1 for s in self.serials):
            raise InvalidParameter("serial numbers must be positive")
        if len(set(self.serials)) != len(self.serials):
            raise InvalidParameter("serials must be distinct (sampling without replacement)")
        if (
            self.k != len(self.serials)
            or self.m_max != max(self.serials)
            or self.m_min != min(self.serials)
            or self.spread != self.m_max - self.m_min
        ):
            raise InvalidParameter("derived statistics do not match the serials")

    @classmethod
    def from_serials(cls, serials: Iterable[int]) -> "SerialSample":
        serials = tuple(int(s) for s in serials)
        if not serials:
            raise InvalidParameter("a sample needs at least one serial")
        hi, lo = max(serials), min(serials)
        return cls(serials, len(serials), hi, lo, hi - lo)


@dataclass(frozen=True)
class Estimate:
    method: Method
    value: Fraction
    k_used: int
    statistic_used: int


def estimate_known_min(m: int, k: int) -> Estimate:
    """N_hat = m (1 + 1/k) - 1, for a sample whose labels start at 1."""
    if k < 1:
        raise InvalidParameter(f"k must be at least 1, got {k}")
    if m < k:
        raise InvalidParameter(f"a maximum of {m} is impossible with {k} distinct serials")
    value = m * (1 + Fraction(1, k)) - 1
    return Estimate(Method.KNOWN_MIN, value, k, m)


def estimate_unknown_min(s: int, k: int) -> Estimate:
    """N_hat = s (1 + 2/(k-1)) - 1, using only the spread of the sample."""
    if k < 2:
        raise InvalidParameter("the spread estimator needs k >= 2")
    if s < k - 1:
        raise InvalidParameter(f"a spread of {s} is impossible with {k} distinct serials")
    value = s * (1 + Fraction(2, k - 1)) - 1
    return Estimate(Method.UNKNOWN_MIN, value, k, s)


def estimate_from_sample(
    sample: SerialSample,
    method: Union[Method, str],
    known_min: Optional[int] = None,
) -> Estimate:
    method = Method(method)
    if method is Method.UNKNOWN_MIN:
        return estimate_unknown_min(sample.spread, sample.k)
    if known_min is None:
        raise InvalidParameter("known-min estimation needs the known minimum serial")
    if known_min > sample.m_min:
        raise InvalidParameter(
            f"known minimum {known_min} exceeds the smallest observed serial {sample.m_min}"
        )
    return estimate_known_min(sample.m_max - known_min + 1, sample.k)


def invert_expectation(observed, k: int, variable: Union[Variable, str]) -> Fraction:
    """Solve E[M] = k(N+1)/(k+1) or E[S] = (N+1)(k-1)/(k+1) for N."""
    variable = Variable(variable)
    observed = Fraction(observed)
    if variable is Variable.MAX:
        if k < 1:
            raise InvalidParameter(f"k must be at least 1, got {k}")
        return observed * (1 + Fraction(1, k)) - 1
    if k < 2:
        raise InvalidParameter("the spread estimator needs k >= 2")
    return observed * Fraction(k + 1, k - 1) - 1
