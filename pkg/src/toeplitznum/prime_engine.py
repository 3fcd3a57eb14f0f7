"""Prime sets and prime tables.

A prime set P is described symbolically by a :class:`PrimeSetSpec`; its
complement Q (within the primes) is always derived on demand, never stored.
The module also provides the shared prime table used by the segmented
sieves downstream.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd, isqrt

import numpy as np

__all__ = [
    "PrimeSetSpec",
    "PrimeTable",
    "is_prime",
    "sieve_primes",
    "enumerate_Q",
    "parse_spec",
]

# Finite/Cofinite lists beyond this are the wrong tool; use residue or all/empty.
LIST_CAP = 10_000


def is_prime(n: int) -> bool:
    """Deterministic trial-division primality test."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    for d in range(3, isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


@dataclass(frozen=True)
class PrimeTable:
    """All primes up to ``limit``, ascending, as an int64 array."""

    limit: int
    primes: np.ndarray

    def __post_init__(self):
        self.primes.setflags(write=False)

    def __len__(self) -> int:
        return int(self.primes.size)


def sieve_primes(limit: int) -> PrimeTable:
    """Sieve of Eratosthenes over a flat odd-only array.

    Returns every prime <= limit, ascending. Memory is one byte per odd
    integer below the limit, so tables for segment work (limit ~ sqrt(hi))
    stay small.
    """
    if limit < 2:
        raise ValueError(f"sieve limit must be >= 2, got {limit}")
    # index i represents the odd number 2*i + 1
    half = (limit + 1) // 2
    odd = np.ones(half, dtype=bool)
    odd[0] = False  # 1 is not prime
    for p in range(3, isqrt(limit) + 1, 2):
        if odd[p // 2]:
            odd[p * p // 2 :: p] = False
    primes = np.concatenate(([2], 2 * np.flatnonzero(odd) + 1)).astype(np.int64)
    return PrimeTable(limit, primes)


@dataclass(frozen=True)
class PrimeSetSpec:
    """Symbolic description of a set P of primes.

    Variants (field ``kind``):

    - ``"all"``      P = all primes
    - ``"empty"``    P = no primes
    - ``"finite"``   P = the listed primes
    - ``"cofinite"`` P = all primes except the listed ones
    - ``"residue"``  P = primes p with p mod modulus in residues

    Instances are immutable and safe to share across workers. Use the
    classmethod constructors or :func:`parse_spec`.
    """

    kind: str
    listed: tuple[int, ...] = ()
    modulus: int = 0
    residues: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.kind in ("all", "empty"):
            return
        if self.kind in ("finite", "cofinite"):
            if len(self.listed) > LIST_CAP:
                raise ValueError(
                    f"{self.kind} list capped at {LIST_CAP} entries, got {len(self.listed)}"
                )
            if any(b <= a for a, b in zip(self.listed, self.listed[1:])):
                raise ValueError(f"{self.kind} list must be strictly increasing: {self.listed}")
            for p in self.listed:
                if not is_prime(p):
                    raise ValueError(f"{p} is not prime")
            object.__setattr__(self, "_listed_set", frozenset(self.listed))
            return
        if self.kind == "residue":
            if self.modulus < 2:
                raise ValueError(f"residue modulus must be >= 2, got {self.modulus}")
            if not self.residues:
                raise ValueError("residue set must be nonempty")
            for r in self.residues:
                if not 0 <= r < self.modulus:
                    raise ValueError(f"residue {r} outside [0, {self.modulus})")
            return
        raise ValueError(f"unknown prime set kind {self.kind!r}")

    # -- constructors ------------------------------------------------------

    @classmethod
    def all_primes(cls) -> "PrimeSetSpec":
        return cls("all")

    @classmethod
    def empty(cls) -> "PrimeSetSpec":
        return cls("empty")

    @classmethod
    def finite(cls, primes) -> "PrimeSetSpec":
        return cls("finite", listed=tuple(primes))

    @classmethod
    def cofinite(cls, excluded) -> "PrimeSetSpec":
        return cls("cofinite", listed=tuple(excluded))

    @classmethod
    def residue(cls, modulus: int, residues) -> "PrimeSetSpec":
        return cls("residue", modulus=modulus, residues=frozenset(residues))

    # -- membership --------------------------------------------------------

    def _member(self, p: int) -> bool:
        # membership for a p already known to be prime
        if self.kind == "all":
            return True
        if self.kind == "empty":
            return False
        if self.kind == "finite":
            return p in self._listed_set
        if self.kind == "cofinite":
            return p not in self._listed_set
        return (p % self.modulus) in self.residues

    def contains(self, p: int) -> bool:
        """True iff the prime p belongs to P. Raises if p is not prime."""
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        return self._member(p)

    def member_mask(self, primes: np.ndarray) -> np.ndarray:
        """Vectorized membership: mask[i] iff primes[i] in P.

        The input must consist of primes; no validation is performed.
        """
        if self.kind == "all":
            return np.ones(primes.shape, dtype=bool)
        if self.kind == "empty":
            return np.zeros(primes.shape, dtype=bool)
        if self.kind == "finite":
            return np.isin(primes, np.asarray(self.listed, dtype=np.int64))
        if self.kind == "cofinite":
            return ~np.isin(primes, np.asarray(self.listed, dtype=np.int64))
        return np.isin(primes % self.modulus, np.fromiter(self.residues, dtype=np.int64))

    # -- structure of Q = primes \ P ---------------------------------------

    def q_is_finite(self) -> bool:
        """Whether the complement Q is a finite set.

        For residue specs this holds exactly when every residue class
        coprime to the modulus is included: the remaining Q-candidates all
        divide the modulus (Dirichlet gives infinitely many primes in any
        missing coprime class).
        """
        if self.kind in ("all", "cofinite"):
            return True
        if self.kind in ("empty", "finite"):
            return False
        units = {r for r in range(self.modulus) if gcd(r, self.modulus) == 1}
        return units <= self.residues

    def finite_Q(self) -> tuple[int, ...]:
        """The full complement Q when it is finite; raises otherwise."""
        if not self.q_is_finite():
            raise ValueError(f"Q is infinite for spec {self}")
        if self.kind == "all":
            return ()
        if self.kind == "cofinite":
            return self.listed
        qs = [
            p
            for p in range(2, self.modulus + 1)
            if self.modulus % p == 0 and is_prime(p) and (p % self.modulus) not in self.residues
        ]
        return tuple(qs)

    # -- canonical grammar string -------------------------------------------

    def __str__(self) -> str:
        if self.kind in ("all", "empty"):
            return self.kind
        if self.kind in ("finite", "cofinite"):
            return f"{self.kind}:{','.join(map(str, self.listed))}"
        rs = ",".join(map(str, sorted(self.residues)))
        return f"residue:{self.modulus}:{rs}"


def _parse_int(token: str, text: str) -> int:
    try:
        return int(token, 10)
    except ValueError:
        raise ValueError(f"invalid token {token!r} in prime set spec {text!r}") from None


def _parse_int_list(body: str, text: str) -> list[int]:
    if not body:
        raise ValueError(f"empty list in prime set spec {text!r}")
    return [_parse_int(tok, text) for tok in body.split(",")]


def parse_spec(text: str) -> PrimeSetSpec:
    """Parse the spec grammar: ``all``, ``empty``, ``finite:2,3,5``,
    ``cofinite:2``, ``residue:4:1,3``. Parsing is strict; the offending
    token is reported on failure.
    """
    s = text.strip()
    if s == "all":
        return PrimeSetSpec.all_primes()
    if s == "empty":
        return PrimeSetSpec.empty()
    head, sep, rest = s.partition(":")
    if head in ("finite", "cofinite"):
        if not sep:
            raise ValueError(f"missing prime list in prime set spec {text!r}")
        return PrimeSetSpec(head, listed=tuple(_parse_int_list(rest, text)))
    if head == "residue":
        parts = rest.split(":")
        if len(parts) != 2:
            raise ValueError(f"residue spec needs modulus and residue list: {text!r}")
        modulus = _parse_int(parts[0], text)
        residues = _parse_int_list(parts[1], text)
        if len(set(residues)) != len(residues):
            raise ValueError(f"duplicate residue in prime set spec {text!r}")
        return PrimeSetSpec.residue(modulus, residues)
    raise ValueError(f"invalid token {head!r} in prime set spec {text!r}")


def enumerate_Q(spec: PrimeSetSpec, limit: int) -> np.ndarray:
    """All primes q <= limit lying outside P, ascending."""
    if limit < 2:
        raise ValueError(f"limit must be >= 2, got {limit}")
    table = sieve_primes(limit)
    return table.primes[~spec.member_mask(table.primes)]
