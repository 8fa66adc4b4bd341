"""The discrete population model for a target and its driving terms.

State is the vector of driving-term counts by length (j1..J).  One sieve
stage at prime p multiplies by an upper-bidiagonal matrix whose diagonal is
(p - j - 1) and whose superdiagonal feeds j from j+1 with weight (j + 1 - j1).
The matrix factors exactly as R * Lambda * L with Pascal-triangular R and L
independent of p, so products across stages stay diagonal; asymptotics drop
out of the first left eigenvector, which is all ones.

Everything is exact rational except the long eigenvalue products, which
accumulate in log space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import comb, isqrt

import numpy as np

from .census import Census, Constellation, as_constellation
from .primal import (
    SquarefreeModulus,
    _primes_array_upto,
    factorize,
    is_prime,
    iter_primes,
    next_prime,
    phi_i,
    sieve_segment,
)

Rational = Fraction


@dataclass(frozen=True)
class PopulationVector:
    """Counts (raw) or ratios (normalized) of driving terms by length j1..J."""

    j1: int
    entries: tuple[Fraction, ...]
    basis: str = "raw"  # "raw" | "normalized"

    def __post_init__(self) -> None:
        if self.j1 < 1 or not self.entries:
            raise ValueError("need j1 >= 1 and at least one entry")
        if self.basis not in ("raw", "normalized"):
            raise ValueError(f"unknown basis {self.basis!r}")
        if any(e < 0 for e in self.entries):
            raise ValueError("negative population")

    @property
    def max_length(self) -> int:
        return self.j1 + len(self.entries) - 1

    @property
    def dim(self) -> int:
        return len(self.entries)

    @classmethod
    def from_census(cls, census: Census, max_length: int | None = None) -> "PopulationVector":
        top = census.max_length if max_length is None else max_length
        entries = tuple(Fraction(census.counts.get(j, 0)) for j in range(census.j1, top + 1))
        return cls(census.j1, entries, "raw")

    def padded(self, max_length: int) -> "PopulationVector":
        if max_length < self.max_length:
            raise ValueError("cannot shrink a population vector")
        extra = (Fraction(0),) * (max_length - self.max_length)
        return PopulationVector(self.j1, self.entries + extra, self.basis)


def normalize(v: PopulationVector, modulus: SquarefreeModulus | int) -> PopulationVector:
    """Divide raw counts by phi_{j1+1} of the modulus they were counted on.

    For gaps (j1 = 1) this is the ratio to the population of the gap 2.
    """
    if v.basis != "raw":
        return v
    ref = phi_i(v.j1 + 1, modulus)
    return PopulationVector(v.j1, tuple(e / ref for e in v.entries), "normalized")


@dataclass(frozen=True)
class SystemMatrices:
    """One stage's transfer matrix with its exact eigenstructure (raw basis)."""

    p: int
    j1: int
    max_length: int
    M: tuple[tuple[Fraction, ...], ...]
    R: tuple[tuple[int, ...], ...]
    L: tuple[tuple[int, ...], ...]
    eigenvalues: tuple[Fraction, ...]

    @property
    def dim(self) -> int:
        return self.max_length - self.j1 + 1


def eigendecompose(p: int, j1: int, max_length: int) -> SystemMatrices:
    """Build M, R, Lambda, L exactly; M == R @ diag(Lambda) @ L."""
    if max_length < j1:
        raise ValueError(f"max_length {max_length} below j1 {j1}")
    if p <= max_length + 1:
        raise ValueError(f"stage prime {p} must exceed max length {max_length} + 1")
    d = max_length - j1 + 1
    M = [[Fraction(0)] * d for _ in range(d)]
    for i, j in enumerate(range(j1, max_length + 1)):
        M[i][i] = Fraction(p - j - 1)
        if i + 1 < d:
            M[i][i + 1] = Fraction(j + 1 - j1)
    R = tuple(
        tuple((-1) ** (i + j) * comb(j, i) if i <= j else 0 for j in range(d))
        for i in range(d)
    )
    L = tuple(tuple(comb(j, i) if i <= j else 0 for j in range(d)) for i in range(d))
    eig = tuple(Fraction(p - j - 1) for j in range(j1, max_length + 1))
    return SystemMatrices(p, j1, max_length, tuple(tuple(r) for r in M), R, L, eig)


def step(v: PopulationVector, p: int) -> PopulationVector:
    """Apply one sieve stage at prime p in exact arithmetic."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p <= v.max_length + 1:
        raise ValueError(
            f"stage prime {p} gives a nonpositive eigenvalue for length {v.max_length}"
        )
    j1 = v.j1
    out = []
    for i, j in enumerate(range(j1, v.max_length + 1)):
        x = (p - j - 1) * v.entries[i]
        if i + 1 < v.dim:
            x += (j + 1 - j1) * v.entries[i + 1]
        if v.basis == "normalized":
            x /= p - j1 - 1
        out.append(Fraction(x))
    return PopulationVector(j1, tuple(out), v.basis)


def iterate(v: PopulationVector, p0: int, pk: int) -> PopulationVector:
    """Apply every stage prime in (p0, pk], ascending."""
    if p0 >= pk:
        raise ValueError(f"need p0 < pk, got {p0} >= {pk}")
    for p in iter_primes(p0 + 1):
        if p > pk:
            break
        v = step(v, p)
    return v


def asymptotic_ratio(v: PopulationVector) -> Fraction:
    """Limit of the normalized population: the sum of the initial ratios.

    The first left eigenvector is all ones and its eigenvalue is 1; every
    other mode decays, so the limit is just the entry sum.
    """
    if v.basis != "normalized":
        raise ValueError("asymptotic ratio needs a normalized vector")
    return sum(v.entries, Fraction(0))


def polynomial_approx(v: PopulationVector) -> tuple[Fraction, ...]:
    """Coefficients c_m = (row m of L) . v for the decay polynomial.

    The base-length population is approximately
    sum_m (-1)^(m+1) c_m x^(m-1) evaluated at x = the second eigenvalue
    product; at x = 0 it is the asymptotic ratio, at x = 1 the initial value.
    """
    if v.basis != "normalized":
        raise ValueError("polynomial approximation needs a normalized vector")
    d = v.dim
    return tuple(
        sum((comb(j, m) * v.entries[j] for j in range(m, d)), Fraction(0))
        for m in range(d)
    )


def evaluate_polynomial(coeffs: tuple[Fraction, ...], x: Fraction) -> Fraction:
    """sum_m (-1)^(m+1) c_m x^(m-1) with c_m = coeffs[m-1]."""
    acc = Fraction(0)
    for m in reversed(range(len(coeffs))):
        acc = acc * x + (-1) ** m * coeffs[m]
    return acc


class Validity(Enum):
    """How much of the model applies for a target seeded at a given stage."""

    FULL = "full"
    ASYMPTOTIC_ONLY = "asymptotic-only"
    INVALID = "invalid"


def validity(target: Constellation | int, p0: int) -> Validity:
    """FULL when the span is under twice the next stage prime; otherwise the
    asymptotic limit still applies if every interval sum of the target has
    all prime factors <= p0."""
    s = as_constellation(target)
    if s.span < 2 * next_prime(p0):
        return Validity.FULL
    n = s.length
    for i in range(n):
        acc = 0
        for j in range(i, n):
            acc += s.gaps[j]
            if max(q for q, _ in factorize(acc)) > p0:
                return Validity.INVALID
    return Validity.ASYMPTOTIC_ONLY


def eigenvalue_products(
    p0: int, pk: int, jmax: int, jmin: int = 2, block: int = 1 << 22
) -> dict[int, float]:
    """Products of (p - j - 1)/(p - 2) over stage primes in (p0, pk].

    Accumulated as compensated log sums over fixed-size prime blocks so the
    result is deterministic and keeps well over 12 significant digits.
    """
    if p0 < jmax + 1:
        raise ValueError(f"p0 {p0} must be at least jmax + 1 = {jmax + 1}")
    if pk <= p0:
        raise ValueError(f"need pk > p0, got {pk} <= {p0}")
    base = _primes_array_upto(isqrt(pk))
    sums = {j: [] for j in range(jmin, jmax + 1)}
    lo = p0 + 1
    while lo <= pk:
        hi = min(lo + block - 1, pk)
        ps = sieve_segment(lo, hi, base).astype(np.float64)
        if len(ps):
            for j in range(jmin, jmax + 1):
                logs = np.log((ps - (j + 1)) / (ps - 2.0))
                sums[j].append(math.fsum(logs.tolist()))
        lo = hi + 1
    return {j: math.exp(math.fsum(parts)) for j, parts in sums.items()}


@dataclass
class CrossoverResult:
    root: float  # second-eigenvalue-product value where the two targets tie
    bracket: tuple[Fraction, Fraction]
    sign_at_zero: int  # sign of (A - B) in the asymptotic limit


def crossover(
    va: PopulationVector, vb: PopulationVector, tol: float = 1e-6, grid: int = 1024
) -> CrossoverResult | None:
    """Smallest root in (0, 1) of the difference of decay polynomials.

    Returns None when the difference polynomial never changes sign on the
    grid (no crossover).  Sign evaluation is exact rational; only the final
    bracket is reported as a float.
    """
    if va.j1 != vb.j1:
        raise ValueError("crossover needs a common base length")
    top = max(va.max_length, vb.max_length)
    ca = polynomial_approx(va.padded(top))
    cb = polynomial_approx(vb.padded(top))
    diff = tuple(x - y for x, y in zip(ca, cb))
    if all(c == 0 for c in diff):
        return None

    def d(x: Fraction) -> Fraction:
        return evaluate_polynomial(diff, x)

    prev_x = Fraction(0)
    prev = d(prev_x)
    bracket = None
    for k in range(1, grid + 1):
        x = Fraction(k, grid)
        cur = d(x)
        if cur == 0:
            bracket = (x, x)
            break
        if prev != 0 and (prev < 0) != (cur < 0):
            bracket = (prev_x, x)
            break
        prev_x, prev = x, cur
    if bracket is None:
        return None
    lo, hi = bracket
    while float(hi - lo) > tol:
        mid = (lo + hi) / 2
        if d(mid) == 0:
            lo = hi = mid
            break
        if (d(lo) < 0) != (d(mid) < 0):
            hi = mid
        else:
            lo = mid
    s0 = d(Fraction(0))
    sign = 0 if s0 == 0 else (1 if s0 > 0 else -1)
    return CrossoverResult(float((lo + hi) / 2), (lo, hi), sign)


def approximate_prime_for_decay(a2_target: float, p0: int, anchor: int = 10**6) -> float:
    """Rough stage prime at which the second eigenvalue product reaches a2.

    First-order, the product decays like log(p0)/log(p), so one computed
    anchor point extrapolates:  log(p) ~ log(anchor) * a2(anchor)/a2.
    """
    if not 0 < a2_target < 1:
        raise ValueError("target must be in (0, 1)")
    a2_anchor = eigenvalue_products(p0, anchor, 2)[2]
    if a2_target >= a2_anchor:
        # target reached before the anchor: walk directly
        prod = 1.0
        for p in iter_primes(p0 + 1):
            prod *= (p - 3) / (p - 2)
            if prod <= a2_target:
                return float(p)
    return math.exp(math.log(anchor) * a2_anchor / a2_target)
