import pytest

from partpow.series import build_coeff_table, builtin_spec


@pytest.fixture(scope="session")
def p_table_2000():
    return build_coeff_table(builtin_spec("p"), 2000)


@pytest.fixture(scope="session")
def p_table_100k():
    # ~6 s to build; shared by the scan, equidistribution and acceptance tests
    return build_coeff_table(builtin_spec("p"), 100_000)
