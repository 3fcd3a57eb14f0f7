"""Ω_P(n): prime factors counted with multiplicity, restricted to Q = primes \\ P.

Two routes to the same values: :func:`omega_single` is the trial-division
reference oracle, :func:`omega_segment` the vectorized segmented sieve used
for bulk work. The sieve must agree with the oracle pointwise; the tests
enforce that.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt

import numpy as np

from .prime_engine import PrimeSetSpec, PrimeTable

__all__ = ["OmegaBlock", "omega_single", "omega_segment", "DEFAULT_SEGMENT"]

# Segments of 2**20 keep the working arrays inside L2/L3 on commodity hardware.
DEFAULT_SEGMENT = 1 << 20


@dataclass(frozen=True)
class OmegaBlock:
    """Ω_P values over the half-open range [lo, hi); values[i] = Ω_P(lo + i)."""

    lo: int
    hi: int
    values: np.ndarray  # uint8; Ω(n) < 64 for all n < 2**64

    def __post_init__(self):
        self.values.setflags(write=False)

    def __len__(self) -> int:
        return self.hi - self.lo


def omega_single(n: int, spec: PrimeSetSpec) -> int:
    """Ω_P(n) by plain trial division; the reference oracle.

    Counts each prime factor of n with its exponent when the prime lies
    outside P.
    """
    if n < 1:
        raise ValueError(f"omega is defined for n >= 1, got {n}")
    total = 0
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            if not spec._member(p):
                total += e
        p += 1 if p == 2 else 2
    if m > 1 and not spec._member(m):
        total += 1
    return total


def omega_segment(lo: int, hi: int, spec: PrimeSetSpec, primes: PrimeTable) -> OmegaBlock:
    """Ω_P over [lo, hi) via a segmented strip-and-credit sieve.

    For each prime power p^e within range, the multiples of p^e in the
    segment get one more division by p and, when p is in Q, one more count.
    After all primes <= sqrt(hi) are processed, a remaining cofactor > 1 is
    itself a prime in (sqrt(hi), hi); it contributes 1 exactly when it lies
    in Q, decided by a vectorized membership test rather than by
    enumerating Q up to hi.

    The prime table must cover sqrt(hi - 1).
    """
    if not 1 <= lo < hi:
        raise ValueError(f"need 1 <= lo < hi, got [{lo}, {hi})")
    need = isqrt(hi - 1)
    if primes.limit < need:
        raise ValueError(
            f"prime table covers only {primes.limit}, segment [{lo}, {hi}) needs primes <= {need}"
        )
    n = hi - lo
    counts = np.zeros(n, dtype=np.uint8)
    remaining = np.arange(lo, hi, dtype=np.int64)

    top = hi - 1
    for p in primes.primes:
        p = int(p)
        if p > need:
            break
        in_q = not spec._member(p)
        pe = p
        while pe <= top:
            start = ((lo + pe - 1) // pe) * pe
            if start > top:
                break
            off = start - lo
            remaining[off::pe] //= p
            if in_q:
                counts[off::pe] += 1
            pe *= p

    # a cofactor still > 1 is a prime in (sqrt(hi), hi); credit it when it
    # lies outside P (membership test on the values, never an enumeration of
    # Q up to hi; entries reduced to 1 are masked off, so feeding the whole
    # array to member_mask is safe)
    in_q = ~spec.member_mask(remaining)
    in_q &= remaining > 1
    counts += in_q

    return OmegaBlock(lo, hi, counts)
