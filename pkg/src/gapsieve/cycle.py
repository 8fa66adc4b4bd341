"""Cycles of gaps among the generators of Z mod N.

A cycle is the circular sequence of differences between consecutive integers
coprime to N, starting from 1; the first gap reaches the next generator and
the last one wraps from N-1 to N+1.  Cycles for larger moduli are built by a
one-pass merge over concatenated copies of the smaller cycle: while walking
the candidate values, any candidate divisible by the new prime is dropped and
its two neighboring gaps coalesce.  The walk keeps only the candidate value's
residue, so it streams.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from math import isqrt
from typing import Iterable, Iterator

import numpy as np

from .primal import (
    PRIME_FACTOR_CAP,
    CapacityError,
    SquarefreeModulus,
    is_prime,
    next_prime,
    prev_prime,
    primes_upto,
)

GAP_LIMIT = 0xFFFF  # gaps are stored as u16
DEFAULT_CHUNK_GAPS = 1 << 20

CACHE_MAGIC = b"GAPC"
CACHE_VERSION = 1


class CacheFormatError(ValueError):
    """A cycle cache file is malformed."""


def totient_from_factors(factors: Iterable[int]) -> int:
    """Euler totient from a prime factor list that may repeat."""
    seen: dict[int, int] = {}
    for q in factors:
        seen[q] = seen.get(q, 0) + 1
    v = 1
    for q, e in seen.items():
        v *= (q - 1) * q ** (e - 1)
    return v


@dataclass(frozen=True, eq=False)
class GapCycle:
    """The cycle of gaps for a modulus, as a u16 array plus its factor list.

    ``factors`` carries multiplicity (extending by a prime already dividing N
    is plain concatenation and leaves the modulus non-squarefree).
    """

    factors: tuple[int, ...]
    gaps: np.ndarray = field(repr=False)

    @property
    def modulus(self) -> int:
        v = 1
        for q in self.factors:
            v *= q
        return v

    @property
    def gap_count(self) -> int:
        return len(self.gaps)

    @property
    def is_primorial(self) -> bool:
        distinct = sorted(set(self.factors))
        return list(self.factors) == distinct and distinct == primes_upto(distinct[-1])

    @property
    def prime(self) -> int:
        """Largest prime factor (the sieve stage for primorial cycles)."""
        return max(self.factors)

    def values(self) -> np.ndarray:
        """Candidate values 1, g1+1, ..., N+1 as int64 (prefix sums)."""
        return np.concatenate(
            ([1], 1 + np.cumsum(self.gaps.astype(np.int64), dtype=np.int64))
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GapCycle):
            return NotImplemented
        return self.factors == other.factors and np.array_equal(self.gaps, other.gaps)


def _as_cycle(factors: tuple[int, ...], gaps: np.ndarray) -> GapCycle:
    mx = int(gaps.max()) if len(gaps) else 0
    if mx > GAP_LIMIT:
        raise CapacityError(f"gap {mx} exceeds u16 storage")
    return GapCycle(factors, np.ascontiguousarray(gaps, dtype=np.uint16))


def _base_cycle(p: int) -> GapCycle:
    # generators of Z mod p are 1..p-1, so the gaps are (p-2) ones and a 2
    if p == 2:
        return _as_cycle((2,), np.array([2], dtype=np.uint16))
    return _as_cycle((p,), np.array([1] * (p - 2) + [2], dtype=np.uint16))


def _merged_chunks(
    gaps: np.ndarray, q: int, chunk_gaps: int = DEFAULT_CHUNK_GAPS
) -> Iterator[np.ndarray]:
    """Yield the gaps of the extended cycle in int64 chunks.

    Walks q concatenated copies of ``gaps`` tracking the running candidate
    value; candidates divisible by q are dropped, which merges the pending
    gap into the next one.  The start value 1 and the end value qN+1 are
    congruent to 1 mod q, so the walk never merges across the wrap.
    """
    src = gaps.astype(np.int64)
    m = len(src)
    value = 1  # candidate value at the start of the pending chunk
    last_kept = 1
    for _rep in range(q):
        lo = 0
        while lo < m:
            part = src[lo : lo + chunk_gaps]
            vals = value + np.cumsum(part, dtype=np.int64)
            kept = vals[vals % q != 0]
            if len(kept):
                out = np.diff(np.concatenate(([last_kept], kept)))
                last_kept = int(kept[-1])
                yield out
            value = int(vals[-1])
            lo += len(part)


def extend_cycle(
    cycle: GapCycle, q: int, chunk_gaps: int = DEFAULT_CHUNK_GAPS
) -> GapCycle:
    """Cycle for q*N from the cycle for N.

    If q already divides N the result is q concatenated copies; otherwise one
    merge pass removes the multiples of q, performing exactly phi(N) merges.
    """
    if not is_prime(q):
        raise ValueError(f"{q} is not prime")
    factors = tuple(sorted(cycle.factors + (q,)))
    if cycle.modulus % q == 0:
        return _as_cycle(factors, np.tile(cycle.gaps, q))
    chunks = [c for c in _merged_chunks(cycle.gaps, q, chunk_gaps)]
    merged = np.concatenate(chunks) if chunks else np.empty(0, dtype=np.int64)
    return _as_cycle(factors, merged)


def build_primorial_cycle(p: int, chunk_gaps: int = DEFAULT_CHUNK_GAPS) -> GapCycle:
    """The cycle of gaps at sieve stage p, built recursively from [2]."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p > PRIME_FACTOR_CAP:
        raise CapacityError(f"stage {p} exceeds the construction cap {PRIME_FACTOR_CAP}")
    cycle = _base_cycle(2)
    for q in primes_upto(p)[1:]:
        cycle = extend_cycle(cycle, q, chunk_gaps)
    return cycle


def cycle_for_factors(factors: Iterable[int]) -> GapCycle:
    """Cycle for an arbitrary squarefree modulus, one prime at a time."""
    fs = sorted(factors)
    if not fs:
        raise ValueError("need at least one prime factor")
    cycle = _base_cycle(fs[0])
    for q in fs[1:]:
        if cycle.modulus % q == 0:
            raise ValueError(f"repeated factor {q}")
        cycle = extend_cycle(cycle, q)
    return cycle


def build_primorial_cycle_streaming(
    p: int, out_path: str, chunk_gaps: int = DEFAULT_CHUNK_GAPS
) -> GapCycle:
    """Stage-by-stage build that never holds more than one stage in memory.

    Produces a cache file identical byte-for-byte to writing the in-memory
    build.  The final stage is streamed to ``out_path`` chunk-wise; earlier
    stages are small enough to keep in RAM.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    ps = primes_upto(p)
    cycle = _base_cycle(2)
    for q in ps[1:-1] if len(ps) > 1 else []:
        cycle = extend_cycle(cycle, q, chunk_gaps)
    if len(ps) == 1:
        write_cache(out_path, cycle)
        return read_cache(out_path, mmap=True)
    q = ps[-1]
    factors = tuple(sorted(cycle.factors + (q,)))
    gap_count = cycle.gap_count * q - totient_from_factors(cycle.factors)
    with open(out_path, "wb") as fh:
        fh.write(_cache_header(factors, gap_count))
        written = 0
        for chunk in _merged_chunks(cycle.gaps, q, chunk_gaps):
            mx = int(chunk.max())
            if mx > GAP_LIMIT:
                raise CapacityError(f"gap {mx} exceeds u16 storage")
            fh.write(chunk.astype("<u2").tobytes())
            written += len(chunk)
    if written != gap_count:
        raise AssertionError(f"streamed {written} gaps, expected {gap_count}")
    return read_cache(out_path, mmap=True)


def oracle_cycle(modulus: SquarefreeModulus | int) -> GapCycle:
    """Independent construction by direct scan of [1, N+1] for coprimality.

    Used to cross-check the recursive builder; N is capped at 1e8.
    """
    if isinstance(modulus, SquarefreeModulus):
        factors = list(modulus.factors)
        n = modulus.value
    else:
        n = int(modulus)
        factors = [p for p in primes_upto(isqrt(n)) if n % p == 0]
        rem = n
        for p in factors:
            while rem % p == 0:
                rem //= p
        if rem > 1:
            factors.append(rem)
    if n > 10**8:
        raise CapacityError(f"oracle scan of {n} exceeds the 1e8 cap")
    coprime = np.ones(n + 2, dtype=bool)
    coprime[0] = False
    for q in factors:
        coprime[q::q] = False
    vals = np.flatnonzero(coprime)  # 1 .. N+1, both endpoints coprime
    gaps = np.diff(vals)
    fs: list[int] = []
    for q in sorted(set(factors)):
        v = n
        while v % q == 0:
            fs.append(q)
            v //= q
    return _as_cycle(tuple(fs), gaps)


def render_compact(gaps: np.ndarray | GapCycle) -> str:
    """Digit-string form: single-digit gaps concatenate, larger ones get commas."""
    if isinstance(gaps, GapCycle):
        gaps = gaps.gaps
    parts: list[str] = []
    prev_wide = False
    for g in gaps.tolist():
        wide = g >= 10
        if parts and (wide or prev_wide):
            parts.append(",")
        parts.append(str(g))
        prev_wide = wide
    return "".join(parts)


@dataclass
class CycleReport:
    """Outcome of verify_cycle, one entry per structural check."""

    checks: dict[str, bool]
    details: dict[str, str]

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def lines(self) -> list[str]:
        out = []
        for name, passed in self.checks.items():
            msg = self.details.get(name, "")
            out.append(f"{name}: {'ok' if passed else 'FAIL'}{' (' + msg + ')' if msg else ''}")
        return out


def expected_central_run(p: int) -> list[int]:
    """The palindromic power-of-two run at the middle of a primorial cycle.

    With P the next prime after p and j minimal with 2^(j+1) > P, the middle
    of the cycle reads 2^j, ..., 8, 4, 2, 4, 2, 4, 8, ..., 2^j.
    """
    nxt = next_prime(p)
    j = 2
    while 2 ** (j + 1) <= nxt:
        j += 1
    return [2**i for i in range(j, 2, -1)] + [4, 2, 4, 2, 4] + [2**i for i in range(3, j + 1)]


def verify_cycle(cycle: GapCycle, oracle: bool = False) -> CycleReport:
    """Structural validation: totient count, sum, symmetry, middle run.

    The primorial-only checks use the two generators nearest N/2 to anchor
    the central run; they are exercised for stages 5 and up.
    """
    checks: dict[str, bool] = {}
    details: dict[str, str] = {}
    n = cycle.modulus
    m = cycle.gap_count
    phi = totient_from_factors(cycle.factors)

    checks["count"] = m == phi
    if not checks["count"]:
        details["count"] = f"{m} gaps, totient {phi}"
    total = int(cycle.gaps.astype(np.int64).sum())
    checks["sum"] = total == n
    if not checks["sum"]:
        details["sum"] = f"gaps sum to {total}, modulus {n}"
    if n > 2:
        checks["last_gap"] = int(cycle.gaps[-1]) == 2
    if n % 2 == 0:
        checks["even_gaps"] = bool((cycle.gaps.astype(np.int64) % 2 == 0).all())
    body = cycle.gaps[:-1].astype(np.int64)
    checks["palindrome"] = bool(np.array_equal(body, body[::-1]))

    if cycle.is_primorial and cycle.prime >= 3:
        p = cycle.prime
        checks["first_gap"] = int(cycle.gaps[0]) + 1 == next_prime(p)
        if p >= 5:
            twice_prev = 2 * prev_prime(p)
            cnt = int((cycle.gaps.astype(np.int64) == twice_prev).sum())
            checks["two_widest_pairs"] = cnt >= 2
            if not checks["two_widest_pairs"]:
                details["two_widest_pairs"] = f"{cnt} gaps of {twice_prev}"
            run = expected_central_run(p)
            # the central gap straddles N/2; by symmetry it is gap m/2
            c = m // 2
            lo = (c - 1) - (len(run) - 1) // 2
            got = cycle.gaps[lo : lo + len(run)].astype(np.int64).tolist()
            checks["central_run"] = got == run
            if not checks["central_run"]:
                details["central_run"] = f"got {got}, expected {run}"

    if oracle:
        checks["oracle"] = cycle == oracle_cycle(cycle.modulus)
    return CycleReport(checks, details)


def _cache_header(factors: tuple[int, ...], gap_count: int) -> bytes:
    if len(factors) > 0xFF:
        raise CacheFormatError(f"{len(factors)} factors exceed the u8 header field")
    head = bytearray()
    head += CACHE_MAGIC
    head += struct.pack("<BB", CACHE_VERSION, len(factors))
    for q in factors:
        head += struct.pack("<Q", q)
    head += struct.pack("<Q", gap_count)
    return bytes(head)


def write_cache(path: str, cycle: GapCycle) -> None:
    """Write the binary cache: GAPC, version, factors, count, u16 gaps."""
    with open(path, "wb") as fh:
        fh.write(_cache_header(cycle.factors, cycle.gap_count))
        fh.write(cycle.gaps.astype("<u2").tobytes())


def read_cache(path: str, mmap: bool = False) -> GapCycle:
    """Read and validate a cycle cache file (bit-exact round trip)."""
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != CACHE_MAGIC:
            raise CacheFormatError(f"bad magic {magic!r}")
        vb = fh.read(2)
        if len(vb) != 2:
            raise CacheFormatError("truncated header")
        version, nfac = struct.unpack("<BB", vb)
        if version != CACHE_VERSION:
            raise CacheFormatError(f"unsupported version {version}")
        raw = fh.read(8 * nfac + 8)
        if len(raw) != 8 * nfac + 8:
            raise CacheFormatError("truncated header")
        factors = struct.unpack(f"<{nfac}Q", raw[: 8 * nfac])
        if list(factors) != sorted(factors):
            raise CacheFormatError(f"factors not ascending: {factors}")
        (gap_count,) = struct.unpack("<Q", raw[8 * nfac :])
        offset = fh.tell()
    if mmap:
        gaps = np.memmap(path, dtype="<u2", mode="r", offset=offset, shape=(gap_count,))
        with open(path, "rb") as fh:
            fh.seek(0, 2)
            end = fh.tell()
        if end != offset + 2 * gap_count:
            raise CacheFormatError("payload length does not match gap count")
    else:
        with open(path, "rb") as fh:
            fh.seek(offset)
            payload = fh.read()
        if len(payload) != 2 * gap_count:
            raise CacheFormatError(
                f"payload holds {len(payload) // 2} gaps, header says {gap_count}"
            )
        gaps = np.frombuffer(payload, dtype="<u2")
    cyc = GapCycle(tuple(int(f) for f in factors), gaps.astype(np.uint16))
    if totient_from_factors(cyc.factors) != gap_count:
        raise CacheFormatError("gap count inconsistent with factor list")
    return cyc
