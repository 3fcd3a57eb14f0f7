"""Digit statistics and the analytic quantities behind the normality criterion.

Covers the full chain: per-digit censuses and discrepancies eps_{N,k}, the
prime-reciprocal sum E(N) over Q, exponential sums S(N; a/b) with their decay
envelope N*exp(-2a^2 E(N)/(9b^2)), the finite Fourier inversion identity
linking the two, the majorant eta_N, the Euler-type product sigma_N, and the
exact limiting digit frequencies when Q is finite (the non-equidistributed
case).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .additive_sieve import DEFAULT_SEGMENT
from .digit_stream import DigitBlock, stream_blocks
from .prime_engine import PrimeSetSpec, enumerate_Q, sieve_primes

__all__ = [
    "DigitCensus",
    "ExpSumPoint",
    "ExpSumSeries",
    "DiscrepancyRow",
    "DiscrepancyReport",
    "EtaResult",
    "SigmaResult",
    "census",
    "census_upto",
    "epsilon",
    "E_of_N",
    "default_grid",
    "exp_sum",
    "fourier_check",
    "bound_report",
    "eta_N",
    "sigma_N",
    "limiting_frequencies",
]


# ----------------------------------------------------------------------------
# censuses and discrepancy


@dataclass(frozen=True)
class DigitCensus:
    """Mergeable per-digit counts over the first n digits."""

    base: int
    n: int
    counts: np.ndarray  # int64, length base, sums to n

    def __post_init__(self):
        object.__setattr__(self, "counts", np.asarray(self.counts, dtype=np.int64))
        if len(self.counts) != self.base:
            raise ValueError(f"need {self.base} counters, got {len(self.counts)}")
        if int(self.counts.sum()) != self.n:
            raise ValueError(f"counts sum to {int(self.counts.sum())}, not n={self.n}")
        self.counts.setflags(write=False)

    def __add__(self, other: "DigitCensus") -> "DigitCensus":
        if self.base != other.base:
            raise ValueError(f"cannot merge censuses of bases {self.base} and {other.base}")
        return DigitCensus(self.base, self.n + other.n, self.counts + other.counts)

    merge = __add__

    @classmethod
    def from_block(cls, block: DigitBlock) -> "DigitCensus":
        """Partial census of one block; merge these across disjoint ranges."""
        return cls(block.base, len(block), np.bincount(block.digits, minlength=block.base))

    def frequencies(self) -> np.ndarray:
        return self.counts / self.n

    def epsilon_max(self) -> float:
        return float(np.max(np.abs(self.frequencies() - 1.0 / self.base)))


def census(blocks) -> DigitCensus:
    """Count digits over blocks that must tile [1, N] exactly once."""
    blocks = sorted(blocks, key=lambda b: b.lo)
    if not blocks:
        raise ValueError("census needs at least one block")
    base = blocks[0].base
    expected_lo = 1
    counts = np.zeros(base, dtype=np.int64)
    for b in blocks:
        if b.base != base:
            raise ValueError(f"mixed bases in census: {base} and {b.base}")
        if b.lo != expected_lo:
            kind = "overlap" if b.lo < expected_lo else "gap"
            raise ValueError(f"{kind} at n={min(b.lo, expected_lo)}: blocks must tile [1, N]")
        counts += np.bincount(b.digits, minlength=base)
        expected_lo = b.hi
    return DigitCensus(base, expected_lo - 1, counts)


def census_upto(
    spec: PrimeSetSpec, base: int, n: int, segment: int = DEFAULT_SEGMENT
) -> DigitCensus:
    """Census of the first n digits, streamed segment by segment."""
    (_, counts), = _counts_at_checkpoints(spec, base, [n], segment)
    return DigitCensus(base, n, counts)


def epsilon(cen: DigitCensus, k: int) -> float:
    """eps_{N,k} = |count_k/N - 1/b|, the digit-k discrepancy."""
    if cen.n < 1:
        raise ValueError("census is empty")
    if not 0 <= k < cen.base:
        raise ValueError(f"digit {k} outside [0, {cen.base})")
    return float(abs(cen.counts[k] / cen.n - 1.0 / cen.base))


# ----------------------------------------------------------------------------
# E(N) and checkpoint plumbing


def _e_from_qs(qs: np.ndarray) -> float:
    # descending prime order: smallest reciprocals accumulate first
    if qs.size == 0:
        return 0.0
    return float(np.sum(1.0 / qs[::-1]))


def E_of_N(spec: PrimeSetSpec, n: int) -> float:
    """E(N) = sum of 1/q over primes q <= N outside P."""
    if n < 2:
        return 0.0
    return _e_from_qs(enumerate_Q(spec, n))


def _e_grid(spec: PrimeSetSpec, ns: list[int]) -> list[float]:
    # one sieve, then per-checkpoint sums identical to E_of_N's
    top = max(ns)
    if top < 2:
        return [0.0] * len(ns)
    qs = enumerate_Q(spec, top)
    return [_e_from_qs(qs[: np.searchsorted(qs, n, side="right")]) for n in ns]


def default_grid(n: int) -> list[int]:
    """Geometric checkpoints x10 from 10^3, closed with n itself."""
    grid = []
    c = 1000
    while c < n:
        grid.append(c)
        c *= 10
    grid.append(n)
    return grid


def _validated_grid(checkpoints, n: int) -> list[int]:
    grid = [int(c) for c in checkpoints]
    if not grid:
        raise ValueError("checkpoint grid is empty")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError(f"checkpoints must be strictly increasing: {grid}")
    if grid[0] < 1 or grid[-1] > n:
        raise ValueError(f"checkpoints must lie in [1, {n}]: {grid}")
    if grid[-1] != n:
        grid.append(n)
    return grid


def _counts_at_checkpoints(
    spec: PrimeSetSpec, base: int, checkpoints: list[int], segment: int = DEFAULT_SEGMENT
) -> list[tuple[int, np.ndarray]]:
    """Cumulative digit counts at each checkpoint, in one streaming pass."""
    top = checkpoints[-1]
    acc = np.zeros(base, dtype=np.int64)
    out: list[tuple[int, np.ndarray]] = []
    ci = 0
    for block in stream_blocks(top, base, spec, segment):
        lo, hi = block.lo, block.hi
        prev = lo
        while ci < len(checkpoints) and lo <= checkpoints[ci] < hi:
            c = checkpoints[ci]
            acc += np.bincount(block.digits[prev - lo : c + 1 - lo], minlength=base)
            out.append((c, acc.copy()))
            prev = c + 1
            ci += 1
        if prev < hi:
            acc += np.bincount(block.digits[prev - lo :], minlength=base)
    return out


# ----------------------------------------------------------------------------
# exponential sums


def _roots(a: int, base: int) -> np.ndarray:
    # e(a*k/b) for k = 0..b-1, each from its reduced angle (no phase drift)
    k = np.arange(base, dtype=np.int64)
    return np.exp(2j * np.pi * ((a * k) % base) / base)


@dataclass(frozen=True)
class ExpSumPoint:
    n: int
    value: complex
    e_n: float
    bound: float  # N * exp(-2 a^2 E(N) / (9 b^2))


@dataclass(frozen=True)
class ExpSumSeries:
    """Checkpointed S(N; a/b) values with the E(N)-based envelope."""

    base: int
    a: int
    spec_str: str
    points: list[ExpSumPoint] = field(default_factory=list)

    def to_csv(self) -> str:
        lines = ["N,S_re,S_im,S_abs,E_N,bound,ratio"]
        for p in self.points:
            s_abs = abs(p.value)
            ratio = s_abs / p.bound if p.bound > 0 else math.inf
            lines.append(
                f"{p.n},{p.value.real:.12g},{p.value.imag:.12g},{s_abs:.12g},"
                f"{p.e_n:.12g},{p.bound:.12g},{ratio:.12g}"
            )
        return "\n".join(lines) + "\n"

    def to_json_obj(self) -> dict:
        rows = []
        for p in self.points:
            s_abs = abs(p.value)
            rows.append(
                {
                    "N": p.n,
                    "S_re": p.value.real,
                    "S_im": p.value.imag,
                    "S_abs": s_abs,
                    "E_N": p.e_n,
                    "bound": p.bound,
                    "ratio": s_abs / p.bound if p.bound > 0 else None,
                }
            )
        return {"base": self.base, "a": self.a, "spec": self.spec_str, "rows": rows}


def exp_sum(
    n: int,
    a: int,
    base: int,
    spec: PrimeSetSpec,
    checkpoints=None,
    segment: int = DEFAULT_SEGMENT,
) -> ExpSumSeries:
    """S(N; a/b) = sum over n <= N of e(a*Omega_P(n)/b) at each checkpoint.

    Accumulation is exact: digits are tallied into b integer counters and
    the roots of unity enter only in the final b multiplications per
    checkpoint. The grid gets the endpoint n appended when missing.
    """
    if base < 2:
        raise ValueError(f"base must be >= 2, got {base}")
    if a % base == 0:
        raise ValueError(f"a = {a} is 0 mod {base}: the sum is trivially N")
    if not 1 <= a < base:
        raise ValueError(f"need 1 <= a < base, got a={a}, base={base}")
    grid = default_grid(n) if checkpoints is None else _validated_grid(checkpoints, n)

    tallies = _counts_at_checkpoints(spec, base, grid, segment)
    e_vals = _e_grid(spec, grid)
    roots = _roots(a, base)
    scale = -2.0 * a * a / (9.0 * base * base)
    points = []
    for (cn, counts), e in zip(tallies, e_vals):
        value = complex(np.dot(counts.astype(np.float64), roots))
        points.append(ExpSumPoint(cn, value, e, cn * math.exp(scale * e)))
    return ExpSumSeries(base, a, str(spec), points)


def fourier_check(n: int, base: int, spec: PrimeSetSpec, segment: int = DEFAULT_SEGMENT) -> float:
    """Max deviation in the finite Fourier inversion of the digit counts.

    Left side: empirical frequency of each digit k among the first n.
    Right side: (1/(bN)) sum over a of e(-ak/b) S(N; a/b), with a = 0
    contributing exactly N. The identity is exact, so anything beyond
    rounding error signals a broken sum or census.
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    (_, counts), = _counts_at_checkpoints(spec, base, [n], segment)
    lhs = counts / n
    m = np.vstack([_roots(a, base) for a in range(base)])  # m[a, k] = e(ak/b)
    s = m @ counts.astype(np.float64)  # S(n; a/b) for every a
    rhs = (np.conj(m).T @ s) / (base * n)
    return float(np.max(np.abs(lhs - rhs)))


# ----------------------------------------------------------------------------
# discrepancy report


@dataclass(frozen=True)
class DiscrepancyRow:
    n: int
    eps: tuple[float, ...]
    eps_max: float
    e_n: float
    envelope: float  # exp(-2 E(N) / (9 b^2))
    ratio: float


@dataclass(frozen=True)
class DiscrepancyReport:
    base: int
    spec_str: str
    rows: list[DiscrepancyRow] = field(default_factory=list)

    def to_csv(self) -> str:
        eps_cols = ",".join(f"eps_{k}" for k in range(self.base))
        lines = [f"N,{eps_cols},eps_max,E_N,envelope,ratio"]
        for r in self.rows:
            eps = ",".join(f"{e:.12g}" for e in r.eps)
            lines.append(
                f"{r.n},{eps},{r.eps_max:.12g},{r.e_n:.12g},{r.envelope:.12g},{r.ratio:.12g}"
            )
        return "\n".join(lines) + "\n"

    def to_json_obj(self) -> dict:
        rows = []
        for r in self.rows:
            row = {"N": r.n}
            row.update({f"eps_{k}": e for k, e in enumerate(r.eps)})
            row.update(
                {"eps_max": r.eps_max, "E_N": r.e_n, "envelope": r.envelope, "ratio": r.ratio}
            )
            rows.append(row)
        return {"base": self.base, "spec": self.spec_str, "rows": rows}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=2) + "\n"


def bound_report(
    spec: PrimeSetSpec,
    base: int,
    checkpoints,
    segment: int = DEFAULT_SEGMENT,
) -> DiscrepancyReport:
    """Discrepancies against the envelope exp(-2E(N)/(9b^2)) on a grid.

    The decay bound carries an unspecified constant, so each row reports
    the raw ratio eps_max/envelope for empirical inspection instead of
    asserting anything.
    """
    if base < 2:
        raise ValueError(f"base must be >= 2, got {base}")
    grid = [int(c) for c in checkpoints]
    if not grid or any(b <= a for a, b in zip(grid, grid[1:])) or grid[0] < 1:
        raise ValueError(f"checkpoints must be strictly increasing and >= 1: {grid}")
    tallies = _counts_at_checkpoints(spec, base, grid, segment)
    e_vals = _e_grid(spec, grid)
    rows = []
    for (cn, counts), e in zip(tallies, e_vals):
        eps = np.abs(counts / cn - 1.0 / base)
        eps_max = float(eps.max())
        envelope = math.exp(-2.0 * e / (9.0 * base * base))
        rows.append(DiscrepancyRow(cn, tuple(eps.tolist()), eps_max, e, envelope, eps_max / envelope))
    return DiscrepancyReport(base, str(spec), rows)


# ----------------------------------------------------------------------------
# eta_N majorant


@dataclass(frozen=True)
class EtaResult:
    """Minimized majorant value; a lower bound when the Q-tail is truncated."""

    value: float
    z: int
    truncated: bool

    def __float__(self) -> float:
        return self.value


def eta_N(
    spec: PrimeSetSpec,
    n: int,
    z_grid=None,
    tail_limit: int | None = None,
) -> EtaResult:
    """min over z of log(z)/log(N) + sum of 1/q over Q-primes q > z.

    For finite Q the tail sum is exact. Otherwise it is truncated at
    ``tail_limit`` (default N; smaller values are rejected since the tail
    must at least cover [z, N]), making the result a lower bound for the
    true minimum; the ``truncated`` flag records that.
    """
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if tail_limit is None:
        tail_limit = n
    if tail_limit < n:
        raise ValueError(f"tail_limit {tail_limit} must cover at least [z, N={n}]")
    if z_grid is None:
        z_grid = []
        z = 1
        while z <= n:
            z_grid.append(z)
            z *= 2
    zs = sorted(int(z) for z in z_grid)
    if not zs or zs[0] < 1 or zs[-1] > n:
        raise ValueError(f"z grid must lie within [1, {n}]")

    if spec.q_is_finite():
        qs = np.asarray(spec.finite_Q(), dtype=np.int64)
        truncated = False
    else:
        qs = enumerate_Q(spec, tail_limit)
        truncated = True
    # suffix sums of 1/q: tail(z) = sum of reciprocals of Q-primes > z
    if qs.size:
        suffix = np.concatenate([np.cumsum((1.0 / qs)[::-1])[::-1], [0.0]])
    else:
        suffix = np.zeros(1)

    log_n = math.log(n)
    best_val, best_z = math.inf, zs[0]
    for z in zs:
        tail = float(suffix[np.searchsorted(qs, z, side="right")])
        val = math.log(z) / log_n + tail
        if val < best_val:
            best_val, best_z = val, z
    return EtaResult(best_val, best_z, truncated)


# ----------------------------------------------------------------------------
# sigma_N product and limiting frequencies


@dataclass(frozen=True)
class SigmaResult:
    """Value of the Euler-type product, with sigma_N / log N alongside."""

    value: complex
    over_log: complex
    n: int
    truncated: bool


def sigma_N(spec: PrimeSetSpec, base: int, a: int, n: int) -> SigmaResult:
    """Product over p <= N of 1/(1-1/p), times over Q of (1-1/p)/(1-e(a/b)/p).

    With Q finite the second product runs over all of Q and sigma_N/log N
    should settle at a nonzero constant. For infinite Q the Q-product is
    truncated at N and flagged.
    """
    if base < 2:
        raise ValueError(f"base must be >= 2, got {base}")
    if not 1 <= a < base:
        raise ValueError(f"need 1 <= a < base, got a={a}, base={base}")
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    ps = sieve_primes(n).primes.astype(np.float64)
    log_mertens = -np.sum(np.log1p(-1.0 / ps))

    if spec.q_is_finite():
        qs = np.asarray(spec.finite_Q(), dtype=np.float64)
        truncated = False
    else:
        qs = enumerate_Q(spec, n).astype(np.float64)
        truncated = True
    if qs.size:
        z = complex(np.exp(2j * np.pi * a / base))
        log_q = np.sum(np.log1p(-1.0 / qs) - np.log(1.0 - z / qs))
    else:
        log_q = 0.0
    value = complex(np.exp(log_mertens + log_q))
    return SigmaResult(value, value / math.log(n), n, truncated)


def limiting_frequencies(spec: PrimeSetSpec, base: int) -> np.ndarray:
    """Exact asymptotic digit frequencies when Q is finite.

    freq_k = (1/b) sum over a of e(-ak/b) * prod over q in Q of
    (1-1/q)/(1-e(a/b)/q). Requires finite Q: when the reciprocal sum over
    Q diverges every frequency is 1/b and the census reports are the right
    tool instead.
    """
    if base < 2:
        raise ValueError(f"base must be >= 2, got {base}")
    if not spec.q_is_finite():
        raise ValueError(
            f"Q is infinite for spec {spec}: the reciprocal sum over Q diverges, "
            "digit frequencies are all 1/b; use bound_report"
        )
    qs = np.asarray(spec.finite_Q(), dtype=np.float64)
    densities = np.empty(base, dtype=np.complex128)
    for a in range(base):
        if qs.size:
            z = complex(np.exp(2j * np.pi * a / base))
            densities[a] = np.prod((1.0 - 1.0 / qs) / (1.0 - z / qs))
        else:
            densities[a] = 1.0
    m = np.vstack([_roots(a, base) for a in range(base)])  # m[a, k] = e(ak/b)
    freq = (np.conj(m).T @ densities) / base
    if np.max(np.abs(freq.imag)) > 1e-9:
        raise AssertionError("limiting frequencies came out non-real")
    # frequencies are densities; shave the rounding residue off [0, 1]
    return np.clip(freq.real, 0.0, 1.0)
