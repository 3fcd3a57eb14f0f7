import pytest

from toeplitznum import PrimeSetSpec

# the five reference prime sets used throughout the spec checks
FIVE_SPECS = {
    "empty": PrimeSetSpec.empty(),
    "all": PrimeSetSpec.all_primes(),
    "finite:2,3": PrimeSetSpec.finite([2, 3]),
    "cofinite:2": PrimeSetSpec.cofinite([2]),
    "residue:4:1": PrimeSetSpec.residue(4, [1]),
}


@pytest.fixture(params=sorted(FIVE_SPECS), ids=sorted(FIVE_SPECS))
def any_spec(request):
    return FIVE_SPECS[request.param]
