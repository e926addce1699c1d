import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from partpow.powers import (
    SIDE_ABOVE,
    SIDE_BELOW,
    SIDE_EXACT,
    count_perfect_powers_upto,
    delta_k,
    delta_tilde,
    iroot,
    iroot_ceil,
    is_perfect_power,
    mobius,
)


def test_iroot_examples():
    assert iroot(27, 3) == 3
    assert iroot(26, 3) == 2
    assert iroot(0, 5) == 0
    with pytest.raises(ValueError):
        iroot(5, 0)
    with pytest.raises(ValueError):
        iroot(-1, 2)


def test_iroot_ceil():
    assert iroot_ceil(27, 3) == 3
    assert iroot_ceil(28, 3) == 4
    assert iroot_ceil(0, 2) == 0
    assert iroot_ceil(1, 7) == 1


@given(st.integers(min_value=0, max_value=10**6), st.integers(min_value=1, max_value=20))
def test_iroot_bracketing(x, k):
    r = iroot(x, k)
    assert r**k <= x < (r + 1) ** k


@given(st.integers(min_value=0, max_value=10**300), st.integers(min_value=2, max_value=40))
@settings(max_examples=200)
def test_iroot_bracketing_big(x, k):
    r = iroot(x, k)
    assert r**k <= x < (r + 1) ** k


def test_delta_k_examples():
    d = delta_k(42, 2)
    assert (d.delta, d.nearest, d.side) == (6, 36, SIDE_BELOW)
    d = delta_k(627, 2)
    assert (d.delta, d.nearest) == (2, 625)
    d = delta_k(8, 3)
    assert d.delta == 0 and d.side == SIDE_EXACT
    # 4 is closer to 1 than to 8 for cubes
    d = delta_k(4, 3)
    assert d.delta == 3 and d.nearest == 1
    # ties resolve toward the lower power
    d = delta_k(10, 2)  # 9 and 16: below wins at distance 1
    assert d.nearest == 9
    d = delta_k(12, 2)  # equidistant-ish: 9 at 3, 16 at 4
    assert d.nearest == 9 and d.side == SIDE_BELOW


@given(st.integers(min_value=1, max_value=10**6), st.integers(min_value=2, max_value=20))
def test_delta_k_invariants(x, k):
    d = delta_k(x, k)
    assert d.floor_root**k <= x < (d.floor_root + 1) ** k
    below = x - d.floor_root**k
    above = (d.floor_root + 1) ** k - x
    assert d.delta == min(below, above)
    assert (d.delta == 0) == (d.side == SIDE_EXACT)
    assert abs(x - d.nearest) == d.delta


@given(st.integers(min_value=1, max_value=10**9))
def test_delta_stabilizes_at_value_minus_one(x):
    # once 2^(k-1) >= x, the nearest k-th power is 1
    k = max(2, x.bit_length() + 1)
    assert 2 ** (k - 1) >= x
    assert delta_k(x, k).delta == x - 1


@given(
    st.integers(min_value=1, max_value=10**8),
    st.integers(min_value=2, max_value=6),
    st.integers(min_value=1, max_value=3),
    st.integers(min_value=0, max_value=50),
)
def test_delta_k_divisor_consistency(x, k, j, m):
    # any (jk)-th power is a k-th power, so delta_k is a lower bound
    assert abs(x - m ** (j * k)) >= delta_k(x, k).delta


def test_delta_tilde_examples():
    assert delta_tilde(42, 2) == (10, 5, 32)
    assert delta_tilde(627, 5) == (2, 4, 625)
    assert delta_tilde(5604, 3) == (957, 8, 6561)
    # power 0 is a candidate
    assert delta_tilde(2, 9) == (1, 0, 1)
    with pytest.raises(ValueError):
        delta_tilde(5, 1)
    with pytest.raises(ValueError):
        delta_tilde(0, 2)


@given(st.integers(min_value=1, max_value=10**30), st.integers(min_value=2, max_value=12))
def test_delta_tilde_is_minimum(x, a):
    delta, k, power = delta_tilde(x, a)
    assert power == a**k
    assert abs(x - power) == delta
    klim = 1
    best = abs(x - 1)
    p = 1
    while p <= 2 * x + 1:
        p *= a
        best = min(best, abs(x - p))
    assert delta == best


def test_mobius_small():
    assert [mobius(n) for n in range(1, 13)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0]


def _pp_sieve(limit):
    flags = bytearray(limit + 1)
    flags[1] = 1
    for t in range(2, int(limit**0.5) + 1):
        v = t * t
        while v <= limit:
            flags[v] = 1
            v *= t
    return flags


def test_count_perfect_powers_examples():
    assert count_perfect_powers_upto(1) == 1
    assert count_perfect_powers_upto(100) == 13


def test_count_perfect_powers_vs_sieve_small():
    flags = _pp_sieve(10**4)
    running = 0
    for x in range(1, 10**4 + 1):
        running += flags[x]
        assert count_perfect_powers_upto(x) == running


def test_is_perfect_power_examples():
    assert is_perfect_power(64) == (2, 6)
    assert is_perfect_power(36) == (6, 2)
    assert is_perfect_power(7) is None
    assert is_perfect_power(1) == (1, 2)
    assert is_perfect_power(2**12 * 3**18) == (2**2 * 3**3, 6)


@given(st.integers(min_value=2, max_value=10**5))
def test_is_perfect_power_vs_delta(x):
    found = is_perfect_power(x)
    has_zero_delta = any(
        delta_k(x, k).delta == 0 for k in range(2, x.bit_length() + 1)
    )
    assert (found is not None) == has_zero_delta
    if found is not None:
        m, k = found
        assert m**k == x and k >= 2
        # maximal exponent: no larger exponent representation exists
        for kk in range(k + 1, x.bit_length() + 1):
            assert delta_k(x, kk).delta != 0
