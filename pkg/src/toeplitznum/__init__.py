"""Toeplitz digit streams from additive prime-factor counts.

For a set P of primes, the digits a_n = Omega_P(n) mod b (prime factors
counted with multiplicity, P-primes ignored) satisfy a_n = a_{np} for every
p in P. This package generates those digit streams at scale and measures
how evenly the digits distribute: the census/discrepancy machinery, the
exponential sums S(N; a/b) with their decay envelope, and the exact
limiting frequencies in the non-equidistributed (finite-Q) case.
"""

from .additive_sieve import DEFAULT_SEGMENT, OmegaBlock, omega_segment, omega_single
from .analytics import (
    DigitCensus,
    DiscrepancyReport,
    EtaResult,
    ExpSumSeries,
    SigmaResult,
    E_of_N,
    bound_report,
    census,
    census_upto,
    epsilon,
    eta_N,
    exp_sum,
    fourier_check,
    limiting_frequencies,
    sigma_N,
)
from .digit_stream import (
    DigitBlock,
    ToeplitzReport,
    digits_block,
    digits_upto,
    emit_expansion,
    stream_blocks,
    verify_toeplitz,
)
from .prime_engine import (
    PrimeSetSpec,
    PrimeTable,
    enumerate_Q,
    is_prime,
    parse_spec,
    sieve_primes,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_SEGMENT",
    "DigitBlock",
    "DigitCensus",
    "DiscrepancyReport",
    "EtaResult",
    "ExpSumSeries",
    "OmegaBlock",
    "PrimeSetSpec",
    "PrimeTable",
    "SigmaResult",
    "ToeplitzReport",
    "E_of_N",
    "bound_report",
    "census",
    "census_upto",
    "digits_block",
    "digits_upto",
    "emit_expansion",
    "enumerate_Q",
    "epsilon",
    "eta_N",
    "exp_sum",
    "fourier_check",
    "is_prime",
    "limiting_frequencies",
    "omega_segment",
    "omega_single",
    "parse_spec",
    "sieve_primes",
    "sigma_N",
    "stream_blocks",
    "verify_toeplitz",
    "__version__",
]
