"""Exact distributions of the sample maximum and the sample spread.

A sample of ``k`` distinct serials is drawn uniformly from the consecutive
labels ``n1..n2``.  Both distributions depend on the labels only through the
population size ``N = n2 - n1 + 1``, so everything here is computed on the
normalized scale ``1..N``.
"""
from __future__ import annotations

import csv
import enum
import functools
import io
import itertools
import operator
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Tuple

from .combinatorics import binom
from .errors import EnumerationTooLarge, InvalidParameter

BRUTE_FORCE_LIMIT = 10**7


class Variable(str, enum.Enum):
    MAX = "max"
    SPREAD = "spread"


@dataclass(frozen=True)
class PopulationModel:
    """Ground truth: serials run from ``n1`` to ``n2`` inclusive, ``n`` of them."""

    n1: int
    n2: int
    n: int

    def __post_init__(self):
        if self.n1 < 1:
            raise InvalidParameter(f"n1 must be positive, got {self.n1}")
        if self.n2 < self.n1:
            raise InvalidParameter(f"n2={self.n2} is below n1={self.n1}")
        if self.n != self.n2 - self.n1 + 1:
            raise InvalidParameter(
                f"n={self.n} inconsistent with n2 - n1 + 1 = {self.n2 - self.n1 + 1}"
            )

    @classmethod
    def of_size(cls, n: int, n1: int = 1) -> "PopulationModel":
        if n < 1:
            raise InvalidParameter(f"population size must be positive, got {n}")
        return cls(n1=n1, n2=n1 + n - 1, n=n)


@dataclass(frozen=True)
class PmfTable:
    variable: Variable
    k: int
    support_lo: int
    support_hi: int
    probs: Tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.probs) != self.support_hi - self.support_lo + 1:
            raise InvalidParameter("probs length does not match the support")
        if any(p < 0 or p > 1 for p in self.probs):
            raise InvalidParameter("probabilities must lie in [0, 1]")
        if sum(self.probs) != 1:
            raise InvalidParameter("probabilities must sum to exactly 1")

    def values(self) -> range:
        return range(self.support_lo, self.support_hi + 1)

    def as_dict(self) -> Dict[int, Fraction]:
        return dict(zip(self.values(), self.probs))

    def __getitem__(self, value: int) -> Fraction:
        if self.support_lo <= value <= self.support_hi:
            return self.probs[value - self.support_lo]
        return Fraction(0)

    def mean(self) -> Fraction:
        return sum((v * p for v, p in zip(self.values(), self.probs)), Fraction(0))

    def rows(self) -> Iterable[Tuple[int, int, int, float]]:
        for v, p in zip(self.values(), self.probs):
            yield v, p.numerator, p.denominator, float(p)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["value", "numerator", "denominator", "float_approx"])
        writer.writerows(self.rows())
        return buf.getvalue()


def _check_k(pop: PopulationModel, k: int, variable: Variable) -> None:
    lo = 1 if variable is Variable.MAX else 2
    if k < lo or k > pop.n:
        if variable is Variable.SPREAD and k == 1:
            raise InvalidParameter("the spread needs at least two observations")
        raise InvalidParameter(f"k={k} outside [{lo}, {pop.n}] for {variable.value}")


def max_pmf(pop: PopulationModel, k: int, m: int) -> Fraction:
    """Prob(M = m) = C(m-1, k-1) / C(N, k), with m on the 1..N scale."""
    _check_k(pop, k, Variable.MAX)
    if m < k or m > pop.n:
        return Fraction(0)
    return Fraction(binom(m - 1, k - 1), binom(pop.n, k))


def max_pmf_via_cdf(pop: PopulationModel, k: int, m: int) -> Fraction:
    """Prob(M <= m) - Prob(M <= m-1), an independent route to :func:`max_pmf`."""
    _check_k(pop, k, Variable.MAX)
    if m < k or m > pop.n:
        return Fraction(0)
    return Fraction(binom(m, k) - binom(m - 1, k), binom(pop.n, k))


def expected_max(pop: PopulationModel, k: int) -> Fraction:
    _check_k(pop, k, Variable.MAX)
    return Fraction(k * (pop.n + 1), k + 1)


def spread_pmf(pop: PopulationModel, k: int, s: int) -> Fraction:
    """Prob(S = s) = (N - s) C(s-1, k-2) / C(N, k) for k-1 <= s <= N-1."""
    _check_k(pop, k, Variable.SPREAD)
    if s < k - 1 or s > pop.n - 1:
        return Fraction(0)
    return Fraction((pop.n - s) * binom(s - 1, k - 2), binom(pop.n, k))


def expected_spread(pop: PopulationModel, k: int) -> Fraction:
    _check_k(pop, k, Variable.SPREAD)
    return Fraction((pop.n + 1) * (k - 1), k + 1)


def _support(pop: PopulationModel, k: int, variable: Variable) -> Tuple[int, int]:
    if variable is Variable.MAX:
        return k, pop.n
    return k - 1, pop.n - 1


def pmf_table(pop: PopulationModel, k: int, variable: Variable) -> PmfTable:
    variable = Variable(variable)
    _check_k(pop, k, variable)
    point = max_pmf if variable is Variable.MAX else spread_pmf
    lo, hi = _support(pop, k, variable)
    probs = tuple(point(pop, k, v) for v in range(lo, hi + 1))
    return PmfTable(variable, k, lo, hi, probs)


@functools.lru_cache(maxsize=64)
def _endpoint_counts(n: int, k: int) -> Tuple[Tuple[Tuple[int, int], int], ...]:
    # combinations() yields sorted tuples, so (first, last) is (min, max).
    pairs = map(operator.itemgetter(0, -1), itertools.combinations(range(1, n + 1), k))
    return tuple(sorted(Counter(pairs).items()))


def brute_force_table(pop: PopulationModel, k: int, variable: Variable) -> PmfTable:
    """Enumerate every k-subset of 1..N and tally the max or the spread."""
    variable = Variable(variable)
    _check_k(pop, k, variable)
    total = binom(pop.n, k)
    if total > BRUTE_FORCE_LIMIT:
        raise EnumerationTooLarge(
            f"C({pop.n}, {k}) = {total} subsets exceeds the limit of {BRUTE_FORCE_LIMIT}"
        )
    tally: Counter = Counter()
    for (lo_v, hi_v), count in _endpoint_counts(pop.n, k):
        tally[hi_v if variable is Variable.MAX else hi_v - lo_v] += count
    lo, hi = _support(pop, k, variable)
    probs = tuple(Fraction(tally.get(v, 0), total) for v in range(lo, hi + 1))
    return PmfTable(variable, k, lo, hi, probs)
