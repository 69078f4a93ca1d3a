from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from lrcc import linalg, poly
from lrcc.field import (
    ExtField,
    FactorizationError,
    FieldElement,
    PrimeField,
    field_build,
    find_primitive_normal,
    frobenius,
    is_normal,
    matrix_representation,
    prime_factors,
    split_prime_power,
)

FIELDS = [(2, 1, 1), (2, 1, 8), (3, 1, 2), (2, 2, 3), (3, 2, 2), (5, 1, 3), (2, 1, 13)]


def test_gf2_is_prime_field_identity():
    F = field_build(2, 1, 1)
    assert F.f_ext == (1, 1)
    assert F.order == 2
    assert F.mul(1, 1) == 1 and F.add(1, 1) == 0


def test_gf256_modulus_matches_trial_division_oracle():
    # x^8 + x^4 + x^3 + x + 1, from scripts/derive_oracles.py
    F = field_build(2, 1, 8)
    assert F.f_ext == (1, 1, 0, 1, 1, 0, 0, 0, 1)


def test_gf9_cardinality():
    F = field_build(3, 1, 2)
    assert F.order == 9 == len(list(F.elements()))


@pytest.mark.parametrize("args", [(4, 1, 1), (1, 1, 1), (2, 0, 1), (2, 1, 0)])
def test_field_build_rejects_bad_input(args):
    with pytest.raises(ValueError):
        field_build(*args)


@pytest.mark.parametrize("p,a,m", FIELDS)
def test_moduli_irreducible_and_sizes(p, a, m):
    F = field_build(p, a, m)
    assert poly.is_irreducible(PrimeField(p), F.f_sub)
    assert poly.is_irreducible(F.subfield, F.f_ext)
    assert F.order == p ** (a * m)
    assert F.q == p**a


def test_modulus_is_first_in_integer_order():
    F = field_build(2, 1, 5)
    f_int = sum(c << i for i, c in enumerate(F.f_ext))
    for g in range(32 + 1, f_int, 2):
        assert not poly.is_irreducible(field_build(2, 1, 1), tuple((g >> i) & 1 for i in range(6)))


@pytest.mark.parametrize("p,a,m", FIELDS)
def test_field_axioms_random(p, a, m):
    F = field_build(p, a, m)
    rng = random.Random(p * 100 + a * 10 + m)
    for _ in range(1500):
        x, y, z = (rng.randrange(F.order) for _ in range(3))
        assert F.mul(F.mul(x, y), z) == F.mul(x, F.mul(y, z))
        assert F.add(F.add(x, y), z) == F.add(x, F.add(y, z))
        assert F.mul(x, F.add(y, z)) == F.add(F.mul(x, y), F.mul(x, z))
        assert F.sub(F.add(x, y), y) == x
        if x:
            assert F.mul(x, F.inv(x)) == 1


def test_large_binary_field_inverse():
    F = field_build(2, 1, 127)
    x = (1 << 126) + 12345
    assert F.mul(x, F.inv(x)) == 1


@pytest.mark.parametrize("p,a,m", [(2, 1, 4), (3, 1, 2), (2, 2, 3), (3, 2, 2)])
def test_frobenius_identity_and_period(p, a, m):
    F = field_build(p, a, m)
    for x in F.elements():
        e = F.element(x)
        assert frobenius(e, 0) == e
        assert frobenius(e, m) == e
        assert frobenius(e, m + 1) == frobenius(e, 1)


def test_frobenius_matches_repeated_multiplication():
    F = field_build(2, 2, 3)
    alpha = find_primitive_normal(F)
    direct = 1
    for _ in range(F.q):
        direct = F.mul(direct, alpha.value)
    assert frobenius(alpha, 1).value == direct


@given(st.integers(0, 63), st.integers(0, 63), st.integers(0, 5))
def test_frobenius_is_ring_homomorphism(x, y, i):
    F = field_build(2, 2, 3)
    X, Y = F.element(x), F.element(y)
    assert frobenius(X + Y, i) == frobenius(X, i) + frobenius(Y, i)
    assert frobenius(X * Y, i) == frobenius(X, i) * frobenius(Y, i)


@pytest.mark.parametrize("p,a,m,expected", [
    (2, 1, 2, 2),    # root of x^2+x+1
    (2, 1, 1, 1),
    (3, 1, 2, 4),    # exhaustive scan oracle
    (2, 1, 8, 33),   # exhaustive scan oracle
])
def test_first_primitive_normal(p, a, m, expected):
    assert find_primitive_normal(field_build(p, a, m)).value == expected


@pytest.mark.parametrize("p,a,m", [(2, 1, 8), (2, 2, 3), (3, 2, 2), (5, 1, 3)])
def test_primitive_normal_properties(p, a, m):
    F = field_build(p, a, m)
    alpha = find_primitive_normal(F).value
    n = F.order - 1
    for ell in prime_factors(n):
        assert F.pow(alpha, n // ell) != 1
    conj = [F.frobenius(alpha, i) for i in range(m)]
    assert linalg.rank(F.subfield, matrix_representation(conj, F)) == m
    assert is_normal(F, alpha)


def test_factor_cutoff_is_explicit():
    big = 1000003 * 1000033
    with pytest.raises(FactorizationError):
        prime_factors(big, cutoff=1000)
    assert prime_factors(2 * 1000003) == [2, 1000003]


def test_matrix_representation_basics():
    F = field_build(2, 2, 3)
    assert matrix_representation([0, 0], F) == [[0, 0]] * 3
    assert matrix_representation([1], F) == [[1], [0], [0]]
    with pytest.raises(ValueError):
        matrix_representation([F.element(1), field_build(2, 1, 3).element(1)])


@given(st.lists(st.integers(0, 80), min_size=1, max_size=5))
def test_matrix_representation_round_trip(vals):
    F = field_build(3, 2, 2)
    M = matrix_representation(vals, F)
    back = []
    for j in range(len(vals)):
        acc = 0
        for i, b in enumerate(F.basis):
            acc = F.add(acc, F.mul(M[i][j], b))
        back.append(acc)
    assert back == vals


@given(st.integers(0, 63), st.integers(0, 63), st.integers(0, 3))
def test_matrix_representation_is_subfield_linear(x, y, c):
    F = field_build(2, 2, 3)
    lhs = matrix_representation([F.add(F.mul(c, x), y)], F)
    Mx, My = matrix_representation([x], F), matrix_representation([y], F)
    S = F.subfield
    assert lhs == [[S.add(S.mul(c, a[0]), b[0])] for a, b in zip(Mx, My)]


def test_custom_basis_coordinates():
    P = field_build(2, 1, 3)
    alpha = find_primitive_normal(P).value
    basis = [P.frobenius(alpha, i) for i in range(3)]
    F = ExtField(2, 1, 3, basis=basis)
    assert matrix_representation([basis[1]], F) == [[0], [1], [0]]
    with pytest.raises(ValueError):
        ExtField(2, 1, 3, basis=[1, 1, 2])


def test_element_digits_in_range():
    F = field_build(3, 2, 2)
    for x in F.elements():
        e = FieldElement(F, x)
        assert len(e.coeffs) == 2
        assert all(0 <= d < 3 for c in e.coeffs for d in c)
    assert F.element(0).coeffs == [[0, 0], [0, 0]]


def test_element_operators():
    F = field_build(2, 1, 8)
    a, b = F.element(7), F.element(200)
    assert (a * b) / b == a
    assert a - a == F.element(0)
    assert a * a.inverse() == F.element(1)
    assert a**255 == F.element(1)


def test_split_prime_power():
    assert split_prime_power(9) == (3, 2)
    with pytest.raises(ValueError):
        split_prime_power(12)
