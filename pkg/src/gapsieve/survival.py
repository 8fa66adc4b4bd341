"""How cycle gaps survive continued sieving.

Two models: the naive uniform-density estimate for how many copies of a gap
land in the fully-sieved window [P, P^2] (compared against true consecutive
prime gaps), and exact attrition of one fixed cycle under the closures of
all primes q with q^2 below the modulus.

Attrition convention: a sieving prime q strikes the candidates it divides,
except q itself, which is a confirmed prime and stays; the endpoints 1 and
N+1 (the wrap image of 1) are never struck.  The survivors of a primorial
cycle are then exactly 1 and the primes up to the modulus.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Sequence

import numpy as np

from .census import Constellation, as_constellation, population_count
from .cycle import GapCycle
from .primal import DEFAULT_SIEVE_BUDGET, CapacityError, next_prime, primes_in


def naive_estimate(cycle: GapCycle, target: Constellation | int) -> float:
    """Uniform-density estimate of the target's count in [P, P^2], P the next stage.

    (P^2 - P) / N times the target's population in the cycle, computed as an
    exact rational and returned as a float.
    """
    p_next = next_prime(cycle.prime)
    n = population_count(cycle, target)
    return float(Fraction(p_next * p_next - p_next, cycle.modulus) * n)


def actual_gap_count(
    a: int,
    b: int,
    target: Constellation | int,
    budget: int = DEFAULT_SIEVE_BUDGET,
) -> int:
    """Occurrences of the target among consecutive prime gaps inside [a, b].

    The whole constellation must lie inside the interval: its first and last
    primes are both in [a, b].  The degenerate gap 1 (from 2 to 3) is
    admitted so the one odd prime gap remains countable.
    """
    if isinstance(target, int) and target == 1:
        pattern = [1]
    else:
        pattern = list(as_constellation(target).gaps)
    if a > b:
        raise ValueError(f"inverted interval [{a}, {b}]")
    if b > budget:
        raise CapacityError(f"interval end {b} exceeds sieve budget {budget}")
    ps = primes_in(max(a, 2), b, budget=budget)
    if len(ps) < len(pattern) + 1:
        return 0
    diffs = [q - p for p, q in zip(ps, ps[1:])]
    k = len(pattern)
    return sum(1 for i in range(len(diffs) - k + 1) if diffs[i : i + k] == pattern)


@dataclass
class NaiveEstimateRow:
    p_k: int
    p_next: int
    target: str
    estimate: float
    actual: int
    rel_error: float | None  # None when the actual count is zero


def error_report(
    cycles: Sequence[GapCycle],
    targets: Sequence[Constellation | int],
    budget: int = DEFAULT_SIEVE_BUDGET,
) -> list[NaiveEstimateRow]:
    """Estimate-vs-actual rows for each (stage cycle, target) pair."""
    rows: list[NaiveEstimateRow] = []
    for cycle in cycles:
        p_next = next_prime(cycle.prime)
        for target in targets:
            est = naive_estimate(cycle, target)
            act = actual_gap_count(p_next, p_next * p_next, target, budget=budget)
            rel = (est - act) / act if act else None
            rows.append(
                NaiveEstimateRow(
                    cycle.prime, p_next, str(as_constellation(target)), est, act, rel
                )
            )
    return rows


def error_report_csv(rows: Sequence[NaiveEstimateRow]) -> str:
    buf = io.StringIO()
    buf.write("# naive estimate vs true prime gaps over [p_next, p_next^2]\n")
    buf.write("p_k,p_next,target,estimate,actual,rel_error\n")
    for r in rows:
        rel = "" if r.rel_error is None else f"{r.rel_error:.6f}"
        buf.write(f"{r.p_k},{r.p_next},{r.target},{r.estimate:.6f},{r.actual},{rel}\n")
    return buf.getvalue()


@dataclass
class AttritionStep:
    q: int
    closures: int
    histogram: dict[int, int]

    @property
    def gap_total(self) -> int:
        return sum(self.histogram.values())


@dataclass
class AttritionTrace:
    base_prime: int
    modulus: int
    sieve_primes: list[int]
    initial_histogram: dict[int, int]
    steps: list[AttritionStep]
    final_values: np.ndarray
    final_gaps: np.ndarray

    @property
    def final_gap_count(self) -> int:
        return len(self.final_gaps)

    @property
    def max_surviving_gap(self) -> int:
        return int(self.final_gaps.max())

    def first_stage_with_gap(self, g: int) -> int | None:
        """The first sieving prime whose closures create a gap of size g."""
        if self.initial_histogram.get(g):
            return None
        for s in self.steps:
            if s.histogram.get(g):
                return s.q
        return None


def _histogram(gaps: np.ndarray) -> dict[int, int]:
    vals, counts = np.unique(gaps, return_counts=True)
    return {int(v): int(c) for v, c in zip(vals, counts)}


def attrition(
    cycle: GapCycle, sieve_primes: Sequence[int] | None = None
) -> AttritionTrace:
    """Sieve a fixed cycle by every prime q with q^2 < N and trace the gaps.

    Each pass strikes the surviving composite candidates divisible by q (q
    itself stays; it is the prime being confirmed) and merges the gaps
    around them.  The gap total is conserved at N after every pass.
    """
    n = cycle.modulus
    pk = cycle.prime
    if sieve_primes is None:
        top = isqrt(n)
        sieve_primes = (
            [q for q in primes_in(pk + 1, top) if q * q < n] if top > pk else []
        )
    else:
        sieve_primes = list(sieve_primes)
    vals = cycle.values()
    initial = _histogram(np.diff(vals))
    steps: list[AttritionStep] = []
    for q in sieve_primes:
        struck = (vals % q == 0) & (vals != q)
        struck[0] = False
        struck[-1] = False
        closures = int(struck.sum())
        vals = vals[~struck]
        gaps = np.diff(vals)
        if int(gaps.sum()) != n:
            raise AssertionError(f"gap total broke conservation at q={q}")
        steps.append(AttritionStep(q, closures, _histogram(gaps)))
    return AttritionTrace(
        pk, n, sieve_primes, initial, steps, vals, np.diff(vals)
    )


def fold_confirmed_front(trace: AttritionTrace) -> np.ndarray:
    """Final gaps with the confirmed primes absorbed into the leading gap.

    Presentation form: candidates up to the last sieving prime are merged
    into one accumulated first gap, so the cycle starts at the first
    candidate past the sieved range.
    """
    if not trace.sieve_primes:
        return trace.final_gaps
    bound = trace.sieve_primes[-1]
    vals = trace.final_values
    idx = int(np.searchsorted(vals, bound, side="right"))
    folded = np.concatenate(([1], vals[idx:]))
    return np.diff(folded)


def attrition_histograms_csv(trace: AttritionTrace) -> str:
    """Long-format CSV of per-stage gap histograms, plus a gap-2 ratio column."""
    buf = io.StringIO()
    buf.write(
        f"# attrition of the stage-{trace.base_prime} cycle, modulus {trace.modulus}\n"
    )
    buf.write("prime,gap,count,ratio_to_gap2\n")

    def emit(label: str, hist: dict[int, int]) -> None:
        two = hist.get(2, 0)
        for g in sorted(hist):
            ratio = f"{hist[g] / two:.6f}" if two else ""
            buf.write(f"{label},{g},{hist[g]},{ratio}\n")

    emit("initial", trace.initial_histogram)
    for s in trace.steps:
        emit(str(s.q), s.histogram)
    return buf.getvalue()
