import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gradedpi.ff import (
    FieldError,
    FieldSpec,
    field_enumerate,
    field_make,
    field_of_order,
    prime_power,
    smallest_irreducible,
)
from oracles import GF, is_irreducible_bruteforce

ORDERS = [2, 3, 4, 5, 7, 8, 9]


def oracle_for(spec: FieldSpec) -> GF:
    return GF(spec.p, spec.modulus)


@pytest.mark.parametrize("q", ORDERS)
def test_tables_match_polynomial_arithmetic(q):
    spec = field_of_order(q)
    ref = oracle_for(spec)
    for a in range(q):
        for b in range(q):
            assert spec.add_table[a, b] == ref.add(a, b)
            assert spec.mul_table[a, b] == ref.mul(a, b)
            assert spec.sub_table[a, b] == ref.sub(a, b)


@pytest.mark.parametrize("q", ORDERS)
def test_every_element_satisfies_a_to_the_q(q):
    spec = field_of_order(q)
    for a in spec.elements():
        assert a**q == a


@pytest.mark.parametrize("q", ORDERS)
def test_inverses(q):
    spec = field_of_order(q)
    for a in spec.elements():
        if a:
            assert a * a.inverse() == spec.one
    with pytest.raises(ZeroDivisionError):
        spec.zero.inverse()


@pytest.mark.parametrize("p,k", [(2, 2), (2, 3), (3, 2), (5, 1), (2, 1)])
def test_modulus_is_smallest_monic_irreducible(p, k):
    mod = smallest_irreducible(p, k)
    assert mod[-1] == 1 and len(mod) == k + 1
    if k > 1:
        assert is_irreducible_bruteforce(p, mod)
        # every smaller monic candidate, comparing low coefficients first, is reducible
        smaller = [tuple(low) + (1,) for low in itertools.product(range(p), repeat=k) if tuple(low) < mod[:-1]]
        assert not any(is_irreducible_bruteforce(p, c) for c in smaller)


def test_known_moduli():
    assert field_of_order(4).modulus == (1, 1, 1)
    assert field_of_order(8).modulus == (1, 0, 1, 1)
    assert field_of_order(9).modulus == (1, 0, 1)


@pytest.mark.parametrize("q", ORDERS)
def test_enumeration_order(q):
    spec = field_of_order(q)
    elems = field_enumerate(spec)
    assert len({e.code for e in elems}) == q
    assert elems[0].code == 0
    # c0 is the most significant coordinate
    coords = [e.coords for e in elems]
    assert coords == sorted(coords)


def test_errors():
    with pytest.raises(FieldError):
        field_make(6)
    with pytest.raises(FieldError):
        field_make(2, 0)
    with pytest.raises(FieldError):
        field_of_order(16)
    with pytest.raises(FieldError):
        prime_power(12)
    assert field_of_order(16, max_q=None).q == 16
    assert prime_power(9) == (3, 2)


@pytest.mark.parametrize("q", [4, 8, 9])
def test_literal_round_trip(q):
    spec = field_of_order(q)
    for a in spec.elements():
        assert spec.parse_literal(spec.format_code(a.code)) == a.code
    with pytest.raises(FieldError):
        spec.parse_literal("{1}")


@pytest.mark.parametrize("q", [3, 4, 9])
def test_matmul_matches_scalar_loop(q):
    spec = field_of_order(q)
    ref = oracle_for(spec)
    rng = np.random.default_rng(q)
    a = rng.integers(0, q, size=(4, 5))
    b = rng.integers(0, q, size=(5, 3))
    got = spec.matmul(a, b)
    for i in range(4):
        for j in range(3):
            acc = 0
            for k in range(5):
                acc = ref.add(acc, ref.mul(int(a[i, k]), int(b[k, j])))
            assert got[i, j] == acc


field_and_elems = st.sampled_from(ORDERS).flatmap(
    lambda q: st.tuples(st.just(field_of_order(q)), st.integers(0, q - 1), st.integers(0, q - 1), st.integers(0, q - 1))
)


@settings(max_examples=300, deadline=None)
@given(field_and_elems)
def test_field_axioms(data):
    spec, a, b, c = data
    a, b, c = (spec.elements()[x] for x in (a, b, c))
    assert a + b == b + a and a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + spec.zero == a and a * spec.one == a
    assert a - a == spec.zero and -a + a == spec.zero
    if b:
        assert (a / b) * b == a
