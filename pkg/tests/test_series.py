import io

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from partpow.series import (
    BUILTIN_NAMES,
    CoeffTable,
    NonCountingSpecError,
    ProductSpec,
    Rule,
    _coeffs_from_g,
    brute_force_count,
    build_coeff_table,
    builtin_spec,
    load_values_csv,
    parts_from_set_spec,
    write_values_csv,
)

P_FIRST = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]


def test_builtin_exponents():
    p = builtin_spec("p")
    assert [p.exponent(a) for a in range(1, 6)] == [1, 1, 1, 1, 1]
    plane = builtin_spec("plane")
    assert [plane.exponent(a) for a in range(1, 6)] == [1, 2, 3, 4, 5]
    over = builtin_spec("overpartition")
    assert [over.exponent(a) for a in range(1, 6)] == [2, 1, 2, 1, 2]
    sc = builtin_spec("selfconj")
    assert [sc.exponent(a) for a in range(1, 7)] == [1, -1, 1, 0, 1, -1]
    strict = builtin_spec("strict")
    assert [strict.exponent(a) for a in range(1, 6)] == [1, 0, 1, 0, 1]
    nonu = builtin_spec("nonunitary")
    assert [nonu.exponent(a) for a in range(1, 4)] == [0, 1, 1]
    col3 = builtin_spec("colored3")
    assert col3.exponent(17) == 3
    parts = builtin_spec("parts:1,2,5")
    assert [parts.exponent(a) for a in range(1, 7)] == [1, 1, 0, 0, 1, 0]


def test_builtin_spec_errors():
    with pytest.raises(ValueError):
        builtin_spec("nope")
    with pytest.raises(ValueError):
        builtin_spec("colored0")
    with pytest.raises(ValueError):
        parts_from_set_spec([])
    with pytest.raises(ValueError):
        parts_from_set_spec([0, 2])


def test_build_table_known_values():
    t = build_coeff_table(builtin_spec("p"), 50)
    assert list(t.values[:11]) == P_FIRST
    assert t[10] == 42
    assert t[50] == 204226
    assert build_coeff_table(builtin_spec("plane"), 4).values == (1, 1, 3, 6, 13)
    assert build_coeff_table(builtin_spec("overpartition"), 4)[4] == 14
    assert build_coeff_table(builtin_spec("p"), 0).values == (1,)


def test_table_immutability_and_invariants():
    t = build_coeff_table(builtin_spec("strict"), 20)
    assert t.values[0] == 1
    with pytest.raises(AttributeError):
        t.values = ()
    with pytest.raises(ValueError):
        CoeffTable(t.spec, 3, (2, 1, 1, 1))  # constant term must be 1
    with pytest.raises(ValueError):
        CoeffTable(t.spec, 5, (1, 1))  # wrong length


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_tables_match_enumeration_to_15(name):
    t = build_coeff_table(builtin_spec(name), 15)
    for n in range(16):
        assert t[n] == brute_force_count(name, n), (name, n)


def test_pentagonal_matches_generic(p_table_2000):
    # force the generic recurrence with an equivalent rule pair
    generic_spec = ProductSpec("p-generic", (Rule(2, 0, 1, 0), Rule(2, 1, 1, 0)))
    generic = build_coeff_table(generic_spec, 2000)
    assert generic.values == p_table_2000.values


def test_nonunitary_identity(p_table_2000):
    r = build_coeff_table(builtin_spec("nonunitary"), 600)
    for n in range(1, 601):
        assert r[n] == p_table_2000[n] - p_table_2000[n - 1]


def test_colored2_identity(p_table_2000):
    c2 = build_coeff_table(builtin_spec("colored2"), 500)
    p = p_table_2000.values
    for n in range(501):
        assert c2[n] == sum(p[j] * p[n - j] for j in range(n + 1))


def test_monotone_and_nonnegative():
    for name in ("p", "overpartition", "plane", "colored2"):
        t = build_coeff_table(builtin_spec(name), 200)
        assert all(t[n] <= t[n + 1] for n in range(1, 200)), name
    for name in ("strict", "selfconj"):
        t = build_coeff_table(builtin_spec(name), 200)
        assert all(v >= 0 for v in t.values), name


def test_negative_coefficient_aborts():
    bad = ProductSpec("negative", (Rule(1, 0, -1, 0),))
    with pytest.raises(NonCountingSpecError):
        build_coeff_table(bad, 5)


def test_inexact_division_aborts():
    # corrupt log-derivative series: at n=2 the sum is 1, not divisible by 2
    with pytest.raises(ArithmeticError):
        _coeffs_from_g([0, 1, 0], 2)


def test_json_round_trip():
    spec = ProductSpec("custom", (Rule(3, 1, 2, -1),), {4: 7})
    again = ProductSpec.from_json(spec.to_json())
    assert again == spec
    # overrides add on top of rule contributions: e_4 = (2 - 4) + 7
    assert [again.exponent(a) for a in (1, 4, 7)] == [1, 5, -5]


def test_values_csv_round_trip():
    t = build_coeff_table(builtin_spec("p"), 30)
    buf = io.StringIO()
    write_values_csv(t, buf)
    loaded = load_values_csv(buf.getvalue().splitlines())
    assert loaded.values == t.values


def _naive_product_coeffs(exponents, n_max):
    # multiply out prod (1 - x^a)^(-e_a) term by term, e_a >= 0
    coeffs = [1] + [0] * n_max
    for a, e in enumerate(exponents):
        if a == 0 or e == 0:
            continue
        for _ in range(e):
            # multiply by 1/(1-x^a): prefix-sum along stride a
            for n in range(a, n_max + 1):
                coeffs[n] += coeffs[n - a]
    return coeffs


@given(
    st.lists(st.integers(min_value=0, max_value=3), min_size=1, max_size=8),
    st.integers(min_value=0, max_value=25),
)
@settings(max_examples=60, deadline=None)
def test_generic_recurrence_matches_naive_product(exps, n_max):
    overrides = {a + 1: e for a, e in enumerate(exps) if e}
    if not overrides:
        overrides = {1: 1}
    spec = ProductSpec("hyp", (), overrides)
    table = build_coeff_table(spec, n_max)
    full = [0] * (n_max + 1)
    for a, e in overrides.items():
        if a <= n_max:
            full[a] = e
    assert list(table.values) == _naive_product_coeffs(full, n_max)


def test_rule_validation():
    with pytest.raises(ValueError):
        Rule(0, 0, 1, 0)
    with pytest.raises(ValueError):
        Rule(3, 3, 1, 0)
    with pytest.raises(ValueError):
        ProductSpec("bad", (), {0: 1})
