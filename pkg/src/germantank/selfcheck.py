"""Exact-arithmetic invariant suite behind ``germantank selfcheck``."""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterator, List, Tuple

from .combinatorics import binom, hockey_stick, pascal_row
from .distributions import (
    PopulationModel,
    Variable,
    brute_force_table,
    expected_max,
    expected_spread,
    max_pmf,
    max_pmf_via_cdf,
    pmf_table,
)
from .estimators import estimate_known_min, estimate_unknown_min, invert_expectation


def _populations(max_n: int) -> Iterator[PopulationModel]:
    for n in range(1, max_n + 1):
        yield PopulationModel.of_size(n)


def check_identities(limit: int = 200) -> None:
    for n in range(limit + 1):
        row = pascal_row(n)
        for r in range(n + 1):
            assert binom(n, r) == row[r], (n, r)
            assert binom(n, r) == binom(n, n - r), (n, r)
            if r >= 1:
                assert binom(n + 1, r) == binom(n, r) + binom(n, r - 1), (n, r)
    for a in range(limit + 1):
        for b in range(a, limit + 1):
            assert hockey_stick(a, b) == binom(b + 1, a + 1), (a, b)


def check_pmfs(max_n: int, brute_force: bool = True) -> None:
    for pop in _populations(max_n):
        for k in range(1, pop.n + 1):
            table = pmf_table(pop, k, Variable.MAX)
            oracle = brute_force_table(pop, k, Variable.MAX) if brute_force else None
            for m in range(0, pop.n + 2):
                p = max_pmf(pop, k, m)
                assert p == max_pmf_via_cdf(pop, k, m), (pop.n, k, m)
                if oracle is not None:
                    assert p == oracle[m], (pop.n, k, m)
            assert sum(table.probs) == 1
            if k >= 2:
                spread = pmf_table(pop, k, Variable.SPREAD)
                assert sum(spread.probs) == 1
                if brute_force:
                    assert spread == brute_force_table(pop, k, Variable.SPREAD), (pop.n, k)


def check_expectations(max_n: int) -> None:
    for pop in _populations(max_n):
        for k in range(1, pop.n + 1):
            assert pmf_table(pop, k, Variable.MAX).mean() == expected_max(pop, k)
            if k >= 2:
                assert pmf_table(pop, k, Variable.SPREAD).mean() == expected_spread(pop, k)


def check_unbiasedness(max_n: int) -> None:
    for pop in _populations(max_n):
        for k in range(1, pop.n + 1):
            table = pmf_table(pop, k, Variable.MAX)
            mean = sum((estimate_known_min(m, k).value * p for m, p in table.as_dict().items()), Fraction(0))
            assert mean == pop.n, (pop.n, k)
            assert invert_expectation(expected_max(pop, k), k, Variable.MAX) == pop.n
            if k >= 2:
                table = pmf_table(pop, k, Variable.SPREAD)
                mean = sum((estimate_unknown_min(s, k).value * p for s, p in table.as_dict().items()), Fraction(0))
                assert mean == pop.n, (pop.n, k)
                assert invert_expectation(expected_spread(pop, k), k, Variable.SPREAD) == pop.n


def checks(max_n: int = 25, identity_limit: int = 200, brute_force: bool = True) -> List[Tuple[str, Callable[[], None]]]:
    return [
        ("binomial identities", lambda: check_identities(identity_limit)),
        ("pmf oracle equivalence", lambda: check_pmfs(max_n, brute_force)),
        ("closed-form expectations", lambda: check_expectations(max_n)),
        ("exact unbiasedness", lambda: check_unbiasedness(max_n)),
    ]
