import numpy as np
import pytest

from toeplitznum import PrimeSetSpec, omega_segment, omega_single, sieve_primes

from conftest import FIVE_SPECS

F23 = FIVE_SPECS["finite:2,3"]
EMPTY = FIVE_SPECS["empty"]
ALL = FIVE_SPECS["all"]


class TestOmegaSingle:
    def test_all_factors_in_p(self):
        assert omega_single(12, F23) == 0  # 12 = 2^2 * 3

    def test_one(self, any_spec):
        assert omega_single(1, any_spec) == 0

    def test_single_outside_factor(self):
        assert omega_single(60, F23) == 1  # 60 = 2^2 * 3 * 5, only 5 counts

    def test_empty_counts_everything(self):
        assert omega_single(8, EMPTY) == 3

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            omega_single(0, EMPTY)

    def test_large_prime_cofactor(self):
        assert omega_single(2 * 99991, EMPTY) == 2  # 99991 is prime
        assert omega_single(2 * 99991, PrimeSetSpec.finite([99991])) == 1


class TestOmegaSegment:
    def test_first_dozen(self):
        block = omega_segment(1, 13, F23, sieve_primes(4))
        assert block.values.tolist() == [0, 0, 0, 0, 1, 0, 1, 0, 0, 1, 1, 0]

    def test_all_spec_is_zero(self):
        block = omega_segment(1, 6, ALL, sieve_primes(3))
        assert block.values.tolist() == [0, 0, 0, 0, 0]

    def test_high_segment_matches_oracle(self):
        lo, hi = 10**6, 10**6 + 10**4
        block = omega_segment(lo, hi, EMPTY, sieve_primes(1005))
        oracle = np.array([omega_single(n, EMPTY) for n in range(lo, hi)])
        assert np.array_equal(block.values, oracle)

    def test_matches_oracle_low_range(self, any_spec):
        hi = 2 * 10**4
        block = omega_segment(1, hi, any_spec, sieve_primes(200))
        expected = np.array([omega_single(n, any_spec) for n in range(1, hi)])
        assert np.array_equal(block.values, expected)

    def test_range_validation(self):
        with pytest.raises(ValueError):
            omega_segment(0, 10, EMPTY, sieve_primes(10))
        with pytest.raises(ValueError):
            omega_segment(10, 10, EMPTY, sieve_primes(10))

    def test_insufficient_table_names_limit(self):
        with pytest.raises(ValueError, match="317"):
            omega_segment(1, 100_489 + 1, EMPTY, sieve_primes(300))  # 317^2 = 100489

    def test_value_bound(self, any_spec):
        # no n < 2^(k+1) has k+1 prime factors with multiplicity
        block = omega_segment(1, 5000, any_spec, sieve_primes(71))
        ns = np.arange(1, 5000)
        assert np.all(block.values <= np.log2(ns + 0.0) + 1e-9)


LIMIT = 10**5


@pytest.fixture(scope="module")
def omega_by_spec():
    primes = sieve_primes(317)
    return {
        name: omega_segment(1, LIMIT + 1, spec, primes).values.astype(np.int64)
        for name, spec in FIVE_SPECS.items()
    }


class TestAdditivity:
    LIMIT = LIMIT

    def test_complete_additivity(self, omega_by_spec):
        # Omega(m*n) = Omega(m) + Omega(n) for every m <= n with m*n <= LIMIT;
        # symmetry makes that exhaustive over all ordered pairs
        for values in omega_by_spec.values():
            for m in range(1, int(self.LIMIT**0.5) + 1):
                ns = np.arange(m, self.LIMIT // m + 1)
                assert np.array_equal(values[m * ns - 1], values[m - 1] + values[ns - 1])

    def test_p_factors_are_free(self, omega_by_spec):
        # multiplying by p in P never changes the count
        for name, spec in FIVE_SPECS.items():
            values = omega_by_spec[name]
            p_primes = [p for p in sieve_primes(100).primes.tolist() if spec.contains(p)]
            for p in p_primes:
                ns = np.arange(1, self.LIMIT // p + 1)
                assert np.array_equal(values[p * ns - 1], values[ns - 1]), (name, p)

    def test_q_factors_add_one(self, omega_by_spec):
        for name, spec in FIVE_SPECS.items():
            values = omega_by_spec[name]
            q_primes = [q for q in sieve_primes(100).primes.tolist() if not spec.contains(q)]
            for q in q_primes:
                ns = np.arange(1, self.LIMIT // q + 1)
                assert np.array_equal(values[q * ns - 1], values[ns - 1] + 1), (name, q)

    def test_omega_of_one_is_zero(self, omega_by_spec):
        for values in omega_by_spec.values():
            assert values[0] == 0
