"""Base-b digit blocks a_n = Ω_P(n) mod b, constraint checks, and expansion files.

The digit stream itself is the number: a_1 is the first digit after the
radix point and the sequence satisfies a_n = a_{np} for every p in P, which
:func:`verify_toeplitz` checks mechanically.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from math import isqrt
from typing import Iterator

import numpy as np

from .additive_sieve import DEFAULT_SEGMENT, omega_segment
from .prime_engine import PrimeSetSpec, PrimeTable, sieve_primes

__all__ = [
    "DigitBlock",
    "ToeplitzReport",
    "digits_block",
    "stream_blocks",
    "digits_upto",
    "verify_toeplitz",
    "emit_expansion",
]


@dataclass(frozen=True)
class DigitBlock:
    """Digits a_n for n in [lo, hi); digits[i] = Ω_P(lo + i) mod base."""

    base: int
    lo: int
    hi: int
    digits: np.ndarray

    def __post_init__(self):
        self.digits.setflags(write=False)

    def __len__(self) -> int:
        return self.hi - self.lo


@dataclass(frozen=True)
class ToeplitzReport:
    """Outcome of checking a_n = a_{np} over n <= N/p for each tested p in P."""

    n: int
    p_limit: int
    pairs_checked: int
    violations: list[tuple[int, int, int, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def digits_block(
    lo: int, hi: int, base: int, spec: PrimeSetSpec, primes: PrimeTable | None = None
) -> DigitBlock:
    """Digits over [lo, hi): the Ω_P segment reduced mod base.

    A prime table covering sqrt(hi) is built on demand when not supplied.
    """
    if base < 2:
        raise ValueError(f"base must be >= 2, got {base}")
    if primes is None:
        primes = sieve_primes(max(2, isqrt(hi - 1)))
    block = omega_segment(lo, hi, spec, primes)
    dtype = np.uint8 if base <= 256 else np.uint32
    return DigitBlock(base, lo, hi, (block.values % base).astype(dtype))


def stream_blocks(
    n: int,
    base: int,
    spec: PrimeSetSpec,
    segment: int = DEFAULT_SEGMENT,
) -> Iterator[DigitBlock]:
    """Yield digit blocks covering n = 1..N in order, one segment at a time."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if segment < 1:
        raise ValueError(f"segment length must be positive, got {segment}")
    primes = sieve_primes(max(2, isqrt(n)))
    lo = 1
    while lo <= n:
        hi = min(lo + segment, n + 1)
        yield digits_block(lo, hi, base, spec, primes)
        lo = hi


def digits_upto(n: int, base: int, spec: PrimeSetSpec, segment: int = DEFAULT_SEGMENT) -> np.ndarray:
    """The digits a_1..a_N as one array (index i holds a_{i+1})."""
    return np.concatenate([b.digits for b in stream_blocks(n, base, spec, segment)])


def verify_toeplitz(
    n: int,
    base: int,
    spec: PrimeSetSpec,
    p_limit: int,
    digits: np.ndarray | None = None,
    segment: int = DEFAULT_SEGMENT,
) -> ToeplitzReport:
    """Check a_m = a_{mp} for every p in P with p <= p_limit and m <= n/p.

    ``digits`` may supply an externally produced stream (index i = a_{i+1});
    by default the stream is generated from the spec. Every mismatch is
    reported as (m, p, a_m, a_mp).
    """
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if digits is None:
        digits = digits_upto(n, base, spec, segment)
    elif len(digits) < n:
        raise ValueError(f"digit array holds {len(digits)} digits, need {n}")

    p_list: list[int] = []
    if p_limit >= 2:
        for p in sieve_primes(p_limit).primes:
            if spec.contains(int(p)):
                p_list.append(int(p))

    pairs = 0
    violations: list[tuple[int, int, int, int]] = []
    for p in p_list:
        m = n // p
        if m < 1:
            continue
        a_m = digits[:m]
        a_mp = digits[p - 1 : p * m : p]
        bad = np.flatnonzero(a_m != a_mp)
        pairs += m
        for i in bad:
            i = int(i)
            violations.append((i + 1, p, int(a_m[i]), int(a_mp[i])))
    return ToeplitzReport(n, p_limit, pairs, violations)


def _encode_text(block: np.ndarray, base: int, first: bool) -> bytes:
    if base <= 10:
        return (block + ord("0")).astype(np.uint8).tobytes()
    body = ",".join(map(str, block.tolist()))
    return body.encode() if first else ("," + body).encode()


def emit_expansion(
    n: int,
    base: int,
    spec: PrimeSetSpec,
    fmt: str = "text",
    out: io.IOBase | None = None,
    segment: int = DEFAULT_SEGMENT,
    blocks: Iterator[DigitBlock] | None = None,
) -> int:
    """Write the first n digits of the expansion to a binary stream.

    ``text`` writes a one-line header ``# base=<b> spec=<spec> n=<N>`` and
    then one ASCII digit per a_n (comma-separated decimal values when the
    base exceeds 10), ending with a newline. ``raw`` writes one headerless
    byte per digit value and requires base <= 255. Returns the digit count.

    ``blocks`` may inject an alternative in-order block source (the parallel
    driver in the CLI uses this); digits still come out byte-identical.
    """
    if fmt not in ("text", "raw"):
        raise ValueError(f"unknown format {fmt!r}")
    if fmt == "raw" and base > 255:
        raise ValueError(f"raw format holds one byte per digit; base {base} > 255")
    if out is None:
        raise ValueError("an output stream is required")
    if blocks is None:
        blocks = stream_blocks(n, base, spec, segment)

    if fmt == "text":
        out.write(f"# base={base} spec={spec} n={n}\n".encode())
    written = 0
    for block in blocks:
        if fmt == "raw":
            out.write(block.digits.astype(np.uint8, copy=False).tobytes())
        else:
            out.write(_encode_text(block.digits, base, first=written == 0))
        written += len(block)
    if fmt == "text":
        out.write(b"\n")
    return written
