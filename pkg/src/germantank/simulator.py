"""Seeded Monte-Carlo generation of serial samples and birthday trials.

Reproducibility contract
------------------------
Every random draw comes from a PCG64 generator seeded by
``numpy.random.SeedSequence(entropy=seed, spawn_key=(purpose, index))``
where ``purpose`` is one of the ``STREAM_*`` tags below and ``index`` is the
trial (or point) number.  Each trial therefore owns an independent stream
that depends only on ``(seed, purpose, index)``, so results do not depend on
execution order or on how trials are split between workers.

Subsets are drawn by a hash-set rejection loop when ``k / n <= 1/8`` and by
a sparse partial Fisher-Yates shuffle otherwise.  Both give every k-subset
probability ``1 / C(n, k)``; the threshold only affects speed.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import InvalidParameter
from .estimators import SerialSample, estimate_known_min, estimate_unknown_min

STREAM_TRIALS = 0
STREAM_BIRTHDAY = 1
STREAM_AVERAGED = 2
STREAM_DERIVED_SEED = 3

REJECTION_RATIO = 1 / 8


def stream(seed: int, purpose: int, index: int) -> np.random.Generator:
    if seed < 0 or seed >= 2**64:
        raise InvalidParameter(f"seed must be a 64-bit unsigned integer, got {seed}")
    seq = np.random.SeedSequence(entropy=seed, spawn_key=(purpose, index))
    return np.random.Generator(np.random.PCG64(seq))


def derive_seed(seed: int, index: int) -> int:
    """A child seed for running several sub-simulations off one master seed."""
    seq = np.random.SeedSequence(entropy=seed, spawn_key=(STREAM_DERIVED_SEED, index))
    return int(seq.generate_state(1, dtype=np.uint64)[0])


@dataclass(frozen=True)
class SimulationConfig:
    seed: int
    trials: int
    n_range: Tuple[int, int]
    k_range: Tuple[int, int]
    n1: int = 1

    def __post_init__(self):
        n_lo, n_hi = self.n_range
        k_lo, k_hi = self.k_range
        if self.trials < 1:
            raise InvalidParameter("trials must be at least 1")
        if not 0 <= self.seed < 2**64:
            raise InvalidParameter("seed must be a 64-bit unsigned integer")
        if not 1 <= n_lo <= n_hi:
            raise InvalidParameter(f"bad n_range {self.n_range}")
        if not 1 <= k_lo <= k_hi:
            raise InvalidParameter(f"bad k_range {self.k_range}")
        if k_hi > n_lo:
            raise InvalidParameter(
                f"k_range upper end {k_hi} exceeds the smallest population {n_lo}"
            )
        if self.n1 < 1:
            raise InvalidParameter("n1 must be positive")


@dataclass(frozen=True)
class TrialRecord:
    trial_index: int
    n_true: int
    k: int
    sample: SerialSample
    est_known: Fraction
    est_unknown: Optional[Fraction]
    n1: int = 1

    @property
    def m(self) -> int:
        """Sample maximum on the 1..N scale."""
        return self.sample.m_max - self.n1 + 1


@dataclass(frozen=True)
class RunSummary:
    config: SimulationConfig
    records: Tuple[TrialRecord, ...] = field(repr=False)
    mean_est_known: float
    mean_est_unknown: float
    mean_max: float
    mean_spread: float

    @classmethod
    def from_records(cls, config: SimulationConfig, records: Sequence[TrialRecord]) -> "RunSummary":
        records = tuple(records)
        n = len(records)
        unknown = [r.est_unknown for r in records if r.est_unknown is not None]
        return cls(
            config=config,
            records=records,
            mean_est_known=float(sum(r.est_known for r in records) / n),
            mean_est_unknown=float(sum(unknown) / len(unknown)) if unknown else math.nan,
            mean_max=float(Fraction(sum(r.sample.m_max for r in records), n)),
            mean_spread=float(Fraction(sum(r.sample.spread for r in records), n)),
        )


def _rejection_subset(n: int, k: int, rng: np.random.Generator) -> List[int]:
    seen = set()
    out = []
    while len(out) < k:
        for v in rng.integers(0, n, size=k - len(out)).tolist():
            if v not in seen:
                seen.add(v)
                out.append(v)
                if len(out) == k:
                    break
    return out


def _partial_shuffle(n: int, k: int, rng: np.random.Generator) -> List[int]:
    # Fisher-Yates over a virtual array 0..n-1, storing only displaced slots.
    targets = rng.integers(np.arange(k), n).tolist()
    swapped = {}
    out = []
    for i, j in enumerate(targets):
        vi = swapped.get(i, i)
        vj = swapped.get(j, j)
        swapped[j] = vi
        out.append(vj)
    return out


def draw_sample(n1: int, n: int, k: int, rng: np.random.Generator) -> SerialSample:
    """Draw k distinct serials uniformly from n1..n1+n-1."""
    if k < 1 or k > n:
        raise InvalidParameter(f"cannot draw {k} distinct serials from {n}")
    if k <= n * REJECTION_RATIO:
        picks = _rejection_subset(n, k, rng)
    else:
        picks = _partial_shuffle(n, k, rng)
    return SerialSample.from_serials(n1 + p for p in picks)


def _run_trial(config: SimulationConfig, index: int) -> TrialRecord:
    rng = stream(config.seed, STREAM_TRIALS, index)
    n = int(rng.integers(config.n_range[0], config.n_range[1], endpoint=True))
    k = int(rng.integers(config.k_range[0], config.k_range[1], endpoint=True))
    sample = draw_sample(config.n1, n, k, rng)
    m = sample.m_max - config.n1 + 1
    est_known = estimate_known_min(m, k).value
    est_unknown = estimate_unknown_min(sample.spread, k).value if k >= 2 else None
    return TrialRecord(index, n, k, sample, est_known, est_unknown, config.n1)


def _run_block(config: SimulationConfig, lo: int, hi: int) -> List[TrialRecord]:
    return [_run_trial(config, i) for i in range(lo, hi)]


def run_trials(config: SimulationConfig, workers: int = 1) -> RunSummary:
    """Run ``config.trials`` independent trials; output is independent of ``workers``."""
    if workers <= 1 or config.trials < 2 * workers:
        records = _run_block(config, 0, config.trials)
    else:
        edges = np.linspace(0, config.trials, workers + 1).astype(int).tolist()
        with ProcessPoolExecutor(max_workers=workers) as pool:
            blocks = pool.map(_run_block, [config] * workers, edges[:-1], edges[1:])
            records = [r for block in blocks for r in block]
    return RunSummary.from_records(config, records)


def birthday_trial(d: int, rng: np.random.Generator) -> int:
    """Number of people drawn (uniform birthdays in 1..d) up to and including the first repeat."""
    if d < 1:
        raise InvalidParameter(f"d must be positive, got {d}")
    chunk = max(8, int(3 * math.sqrt(d)))
    draws = np.empty(0, dtype=np.int64)
    while True:
        draws = np.concatenate([draws, rng.integers(1, d, size=chunk, endpoint=True)])
        order = np.argsort(draws, kind="stable")
        ordered = draws[order]
        repeat = ordered[1:] == ordered[:-1]
        if repeat.any():
            # stable sort: order[1:][repeat] are later occurrences of a seen value
            return int(order[1:][repeat].min()) + 1


def birthday_experiment(
    seed: int,
    d_range: Tuple[int, int],
    points: int = 10_000,
    trials_per_point: int = 1,
) -> List[Tuple[int, float]]:
    """For each point draw D uniformly from ``d_range`` and average birthday trials."""
    lo, hi = d_range
    if not 1 <= lo <= hi:
        raise InvalidParameter(f"bad d_range {d_range}")
    if points < 2 or trials_per_point < 1:
        raise InvalidParameter("need points >= 2 and trials_per_point >= 1")
    out = []
    for i in range(points):
        rng = stream(seed, STREAM_BIRTHDAY, i)
        d = int(rng.integers(lo, hi, endpoint=True))
        total = sum(birthday_trial(d, rng) for _ in range(trials_per_point))
        out.append((d, total / trials_per_point))
    return out


def averaged_max_experiment(
    seed: int,
    k: int,
    n_values: Sequence[int],
    trials_per_n: int = 100,
) -> List[Tuple[float, int]]:
    """Average the sample maximum over ``trials_per_n`` draws for each N; returns (mean_m, N)."""
    if not n_values:
        raise InvalidParameter("n_values is empty")
    if k < 1 or k > min(n_values):
        raise InvalidParameter(f"k={k} infeasible for the smallest N={min(n_values)}")
    if trials_per_n < 1:
        raise InvalidParameter("trials_per_n must be at least 1")
    out = []
    for i, n in enumerate(n_values):
        rng = stream(seed, STREAM_AVERAGED, i)
        total = sum(draw_sample(1, n, k, rng).m_max for _ in range(trials_per_n))
        out.append((total / trials_per_n, int(n)))
    return out
