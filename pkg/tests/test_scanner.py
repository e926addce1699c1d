import warnings

import pytest

from partpow.asymptotics import builtin_params
from partpow.powers import delta_k, delta_tilde
from partpow.scanner import (
    bound_formulas,
    delta_series,
    delta_tilde_series,
    estimate_nd,
    half_gap_lower_scan,
    l_of,
    log_big,
    scan_half_gap,
    scan_m,
    scan_m_tilde,
)
from partpow.series import build_coeff_table, builtin_spec

import math


@pytest.fixture(scope="module")
def p300():
    return build_coeff_table(builtin_spec("p"), 300)


def brute_scan_m(table, k, d, bound):
    best = None
    for n in range(1, bound + 1):
        if delta_k(table.values[n], k).delta <= d:
            best = n
    return best


def test_scan_m_trivial(p300):
    rows = scan_m(p300, 2, [0], 1)
    assert rows[0].m == 1 and rows[0].witness_delta == 0
    rows = scan_m(p300, 2, [0], 300)
    assert rows[0].m == 1  # no square p(n) for 2 <= n <= 300


def test_scan_m_matches_brute(p300):
    d_grid = [0, 1, 2, 5, 10, 100, 10**4]
    for k in (2, 3, 5):
        rows = scan_m(p300, k, d_grid, 120)
        for row in rows:
            assert row.m == brute_scan_m(p300, k, row.d, 120)
            if row.m is not None:
                assert row.witness_delta == delta_k(p300.values[row.m], k).delta


def test_scan_m_monotone_in_d(p300):
    d_grid = [2**j for j in range(11)]
    rows = scan_m(p300, 3, d_grid, 100)
    ms = [row.m if row.m is not None else 0 for row in rows]
    assert ms == sorted(ms)


def test_scan_m_errors(p300):
    with pytest.raises(ValueError):
        scan_m(p300, 2, [], 100)
    with pytest.raises(ValueError):
        scan_m(p300, 2, [1], 10**6)


def test_delta_tilde_series_matches_pointwise(p300):
    for base in (2, 5, 10):
        series = delta_tilde_series(p300, base, 200)
        for n in range(1, 201):
            assert series[n] == delta_tilde(p300.values[n], base).delta


def test_delta_tilde_series_nonmonotone_table():
    sc = build_coeff_table(builtin_spec("selfconj"), 100)
    series = delta_tilde_series(sc, 3, 100)
    for n in range(1, 101):
        v = sc.values[n]
        expect = 1 if v == 0 else delta_tilde(v, 3).delta
        assert series[n] == expect


def test_scan_m_tilde_excludes_exact_hits_by_default(p300):
    # p(4) = 5 = 5^1 is an exact hit: not a near miss for d = 1
    rows = scan_m_tilde(p300, 5, [1], 300)
    assert rows[0].m == 2
    rows = scan_m_tilde(p300, 5, [1], 300, include_exact=True)
    assert rows[0].m == 4


def test_l_of_examples(p300):
    assert l_of(p300, 0) == 1
    assert l_of(p300, 1) == 2
    assert l_of(p300, 4) == 4
    with pytest.raises(ValueError):
        l_of(build_coeff_table(builtin_spec("p"), 3), 10**9)


def test_l_of_nonmonotone_warns():
    sc = build_coeff_table(builtin_spec("selfconj"), 60)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        val = l_of(sc, 0)
    assert any("monotone" in str(w.message) for w in caught)
    # running max of sc stays at 1 through n = 7; sc(8) = 2
    assert val == 7


def test_l_repetition_property(p300):
    # number of d values with L(d) = n equals f(n+1) - f(n)
    import collections

    counts = collections.Counter()
    for d in range(p300.values[60] - 1):
        counts[l_of(p300, d)] += 1
    for n in range(1, 40):
        assert counts[n] == p300.values[n + 1] - p300.values[n]


def test_estimate_nd(p300):
    est = estimate_nd(p300, 0, 20, 300)
    assert est.k0 == 2 and est.stable and est.l_value == 1
    est = estimate_nd(p300, 10, 12, 300)
    assert est.l_value == l_of(p300, 10)
    if est.stable:
        assert est.k0 is not None
        assert all(est.m_by_k[k] == est.l_value for k in range(est.k0, 13))
        # below k0 the scan exceeds L
        if est.k0 > 2:
            assert est.m_by_k[est.k0 - 1] != est.l_value


def test_half_gap_examples(p300):
    # d = 0: the sum is at least (1/2)(2 sqrt(f)+1) > 0, so nothing qualifies
    assert half_gap_lower_scan(p300, 2, 0, 100) is None
    # d = 10: condition sqrt(p(n)) <= 9.5 holds through p(12) = 77
    assert half_gap_lower_scan(p300, 2, 10, 100) == 12
    # saturated bound
    big_d = p300.values[50] ** 2
    assert half_gap_lower_scan(p300, 2, big_d, 50) == 50


def test_half_gap_below_scan_m(p300):
    d_grid = [2**j for j in range(0, 40, 3)]
    for k in (2, 3, 4):
        half = scan_half_gap(p300, k, d_grid, 250)
        full = scan_m(p300, k, d_grid, 250)
        for h, f in zip(half, full):
            if h.m is not None:
                assert f.m is not None and f.m >= h.m


def test_half_gap_scan_consistency(p300):
    d_grid = [10, 100, 1000]
    rows = scan_half_gap(p300, 2, d_grid, 200)
    for row in rows:
        assert row.m == half_gap_lower_scan(p300, 2, row.d, 200)


def test_bound_formulas_p():
    params = builtin_params("p")
    bf = bound_formulas(params, 2, 1024)
    # leading constant for squares: (3/(2 pi^2)) * (k/(k-1))^2 = 6/pi^2
    assert bf.m_lower_leading == pytest.approx(
        (6 / math.pi**2) * math.log(1024) ** 2, rel=1e-12
    )
    assert bf.m_heuristic_upper == pytest.approx(4 * bf.m_lower_leading, rel=1e-12)
    assert bf.nd_lower1 == 11
    assert bf.nd_lower2 == pytest.approx(10 + 0.5 / math.log(2) * math.log(math.log(1024)), rel=1e-9)
    # half-gap approximation: (k/2) A(n)^((k-1)/k)
    a100 = params.a_value_float(100)
    assert bf.half_gap_approx(100) == pytest.approx(math.sqrt(a100), rel=1e-9)


def test_bound_formulas_overpartition():
    params = builtin_params("overpartition")
    bf = bound_formulas(params, 2, 10**10)
    assert bf.m_lower_leading == pytest.approx(
        (4 / math.pi**2) * math.log(10**10) ** 2, rel=1e-12
    )


def test_bound_formulas_validation():
    params = builtin_params("p")
    with pytest.raises(ValueError):
        bound_formulas(params, 1, 10)
    with pytest.raises(ValueError):
        bound_formulas(params, 2, 1)
    with pytest.raises(ValueError):
        bound_formulas(params, 2, 100, a_const=5.0)


def test_log_big():
    assert log_big(10**400) == pytest.approx(400 * math.log(10), rel=1e-12)
    assert log_big(7) == pytest.approx(math.log(7), rel=1e-15)
    with pytest.raises(ValueError):
        log_big(0)
