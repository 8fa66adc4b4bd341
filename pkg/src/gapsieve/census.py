"""Exact cyclic enumeration of gaps, constellations, and their driving terms.

All window counts here are cyclic: windows may wrap past the end of the
cycle (and around it more than once when the target sum exceeds the modulus).
Because every gap is positive, at most one window of a given start index can
sum to the target, which makes a single two-pointer sweep exact.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .cycle import GapCycle
from .primal import phi_i


@dataclass(frozen=True)
class Constellation:
    """A sequence of consecutive gaps; the length-1 case is a single gap."""

    gaps: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.gaps:
            raise ValueError("empty constellation")
        for g in self.gaps:
            if g <= 0 or g % 2 != 0:
                raise ValueError(f"gaps must be positive even integers: {self.gaps}")

    @classmethod
    def parse(cls, text: str) -> "Constellation":
        try:
            gaps = tuple(int(t) for t in text.split(",") if t.strip())
        except ValueError as exc:
            raise ValueError(f"malformed constellation {text!r}") from exc
        return cls(gaps)

    @property
    def length(self) -> int:
        return len(self.gaps)

    @property
    def span(self) -> int:
        return sum(self.gaps)

    def reversed_(self) -> "Constellation":
        return Constellation(self.gaps[::-1])

    def __str__(self) -> str:
        return ",".join(str(g) for g in self.gaps)


def as_constellation(target: Constellation | int) -> Constellation:
    return target if isinstance(target, Constellation) else Constellation((int(target),))


@dataclass
class Census:
    """Counts of driving terms by length for one target on one cycle.

    counts[j] is the number of cyclic windows of j consecutive gaps that
    collapse to the target; counts[j1] is the population of the target
    itself.  max_length is discovered by the scan, not assumed.
    """

    target: Constellation
    modulus: int
    counts: dict[int, int] = field(default_factory=dict)

    @property
    def j1(self) -> int:
        return self.target.length

    @property
    def max_length(self) -> int:
        nonzero = [j for j, c in self.counts.items() if c]
        return max(nonzero) if nonzero else self.j1

    @property
    def population(self) -> int:
        return self.counts.get(self.j1, 0)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def vector(self, max_length: int | None = None) -> list[int]:
        """Counts as a dense list for lengths j1..max_length."""
        top = self.max_length if max_length is None else max_length
        return [self.counts.get(j, 0) for j in range(self.j1, top + 1)]


def _extended(gaps: np.ndarray, span: int) -> list[int]:
    """Cycle linearized with enough wraparound copies for any window of sum span."""
    arr = gaps.astype(np.int64)
    m = len(arr)
    min_gap = int(arr.min())
    need = span // max(min_gap, 1) + 2
    if need <= m:
        ext = np.concatenate([arr, arr[:need]])
    else:
        reps = (m + need) // m + 1
        ext = np.tile(arr, reps)[: m + need]
    return ext.tolist()


def count_gap(cycle: GapCycle, g: int) -> int:
    """Number of indices whose gap equals g, over the whole cycle."""
    if g < 2 or g % 2 != 0:
        raise ValueError(f"gap must be a positive even integer: {g}")
    # direct u16 comparison keeps memory-mapped cycles streamable
    return int(np.count_nonzero(cycle.gaps == g))


def driving_terms_for_gap(cycle: GapCycle, g: int) -> Census:
    """Census of cyclic windows of consecutive gaps summing to g.

    Two-pointer sweep: gaps are positive, so per start index the window sum
    is strictly increasing and at most one window length can match.
    """
    if g < 2 or g % 2 != 0:
        raise ValueError(f"gap must be a positive even integer: {g}")
    m = cycle.gap_count
    ext = _extended(cycle.gaps, g)
    counts: dict[int, int] = {}
    s = 0
    r = 0
    for i in range(m):
        while s < g and r < len(ext):
            s += ext[r]
            r += 1
        if s == g:
            counts[r - i] = counts.get(r - i, 0) + 1
        s -= ext[i]
    return Census(Constellation((g,)), cycle.modulus, counts)


def count_constellation(cycle: GapCycle, s: Constellation) -> int:
    """Number of cyclic start positions where the next gaps equal s exactly."""
    arr = cycle.gaps.astype(np.int64)
    m = len(arr)
    j1 = s.length
    need = m + j1 - 1
    ext = arr if need <= m else np.tile(arr, need // m + 1)[:need]
    mask = np.ones(m, dtype=bool)
    for t, g in enumerate(s.gaps):
        mask &= ext[t : t + m] == g
    return int(mask.sum())


def population_count(cycle: GapCycle, target: Constellation | int) -> int:
    """The target's own population (no driving terms), vectorized."""
    t = as_constellation(target)
    if t.length == 1:
        return count_gap(cycle, t.gaps[0])
    return count_constellation(cycle, t)


def driving_terms_for_constellation(cycle: GapCycle, s: Constellation) -> Census:
    """Census of cyclic windows whose partial sums hit s's boundaries exactly.

    A window of j gaps is a driving term when its prefix sums pass through
    g1, g1+g2, ..., |s| without overshooting any boundary; interior closures
    then collapse it to s.  Positive gaps make the check deterministic.
    """
    boundaries = []
    acc = 0
    for g in s.gaps:
        acc += g
        boundaries.append(acc)
    m = cycle.gap_count
    ext = _extended(cycle.gaps, s.span)
    counts: dict[int, int] = {}
    nb = len(boundaries)
    for i in range(m):
        b = 0
        acc = 0
        k = 0
        while b < nb:
            acc += ext[i + k]
            k += 1
            if acc == boundaries[b]:
                b += 1
            elif acc > boundaries[b]:
                break
        if b == nb:
            counts[k] = counts.get(k, 0) + 1
    return Census(s, cycle.modulus, counts)


def census_for(cycle: GapCycle, target: Constellation | int) -> Census:
    """Driving-term census for a gap or a constellation."""
    t = as_constellation(target)
    if t.length == 1:
        return driving_terms_for_gap(cycle, t.gaps[0])
    return driving_terms_for_constellation(cycle, t)


@dataclass
class CensusTableRow:
    gap: int
    counts: list[int]  # lengths 1..max_len
    truncated: bool  # nonzero counts were dropped beyond max_len


@dataclass
class CensusTable:
    modulus: int
    max_len: int
    rows: list[CensusTableRow]

    def to_csv(self, normalize: bool = False) -> str:
        """Long-format CSV: target, j, count and optionally the ratio column."""
        buf = io.StringIO()
        buf.write(f"# census modulus={self.modulus} max_len={self.max_len}\n")
        header = "target,j,count"
        if normalize:
            header += ",normalized_ratio"
        buf.write(header + "\n")
        ref = phi_i(2, self.modulus) if normalize else None
        for row in self.rows:
            for j, c in enumerate(row.counts, start=1):
                line = f"{row.gap},{j},{c}"
                if normalize:
                    line += f",{Fraction(c, ref)}"
                buf.write(line + "\n")
        return buf.getvalue()


def census_table(cycle: GapCycle, gaps: list[int], max_len: int) -> CensusTable:
    """One census row per requested gap, truncated at max_len with a flag."""
    rows = []
    for g in gaps:
        census = driving_terms_for_gap(cycle, g)
        counts = [census.counts.get(j, 0) for j in range(1, max_len + 1)]
        truncated = any(c for j, c in census.counts.items() if j > max_len)
        rows.append(CensusTableRow(g, counts, truncated))
    return CensusTable(cycle.modulus, max_len, rows)
