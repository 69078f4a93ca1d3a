from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from lrcc import linalg
from lrcc.convcode import SumRankLayout, column_distance_rank, is_j_MDS
from lrcc.field import field_build, is_primitive, prime_factors
from lrcc.msrd import (
    ConstructionError,
    MsrdParams,
    _series_inverse,
    all_layouts,
    build_T,
    build_msrd_outer,
    empirical_min_m,
    msrd_field_bound,
    verify_msrd,
)
from lrcc.polymat import PolyMatrix

GF256 = field_build(2, 1, 8)


def test_field_bound_values():
    assert msrd_field_bound(2, 1, 2) == 8
    assert msrd_field_bound(2, 1, 1) == 4


@given(st.integers(2, 5), st.integers(1, 3), st.integers(0, 3))
def test_field_bound_monotone(q, M, L):
    b = msrd_field_bound(q, M, L)
    assert msrd_field_bound(q + 1, M, L) > b
    assert msrd_field_bound(q, M + 1, L) > b
    assert msrd_field_bound(q, M, L + 1) > b


def test_params_derived_fields():
    P = MsrdParams(2, 1, 1, 2, 8)
    assert (P.nu, P.M, P.L) == (1, 1, 2)
    P = MsrdParams(5, 2, 6, 2)
    assert (P.nu, P.M, P.L) == (2, 3, 5)


def test_params_reject_indivisible_degree():
    with pytest.raises(ValueError):
        MsrdParams(5, 2, 4, 2, 8)
    with pytest.raises(ValueError):
        MsrdParams(2, 2, 0, 2, 8)


def test_T_scalar_case():
    alpha = 33
    for j in range(4):
        assert build_T(GF256, alpha, 1, j) == [[GF256.frobenius(alpha, j)]]


@given(st.integers(1, 255), st.integers(1, 3), st.integers(0, 3))
def test_T_hankel_and_index(alpha, M, j):
    T = build_T(GF256, alpha, M, j)
    for u in range(M):
        for w in range(M):
            assert T[u][w] == GF256.frobenius(alpha, M * j + u + w)
            if u + 1 < M and w >= 1:
                assert T[u][w] == T[u + 1][w - 1]


def test_T_entries_nonzero_for_primitive():
    alpha = 33
    assert is_primitive(GF256, alpha, prime_factors(255))
    for j in range(3):
        assert all(x for row in build_T(GF256, alpha, 3, j) for x in row)


def test_tiny_construction_values(tiny_outer):
    C, man = tiny_outer
    # values fixed by scripts/derive_oracles.py (independent bit-level arithmetic)
    assert man["alpha"] == 33
    assert man["A"].entries == (((1, 109),),)
    assert man["B"].entries == (((33, 15),),)
    assert C.degree == 1 and C.memory == 1 and C.basic


def test_tiny_power_series_prefix(tiny_outer):
    C, man = tiny_outer
    F = C.field
    A = man["A"].coeffs()
    B = man["B"].coeffs()
    L = man["params"]["delta"] // 1 + 1
    inv = _series_inverse(F, A, L, 1)
    for j in range(L + 1):
        acc = 0
        for i in range(j + 1):
            if j - i < len(B):
                acc = F.add(acc, F.mul(inv[i][0][0], B[j - i][0][0]))
        assert acc == F.frobenius(33, j)


def test_no_constraint_branch():
    P = MsrdParams(3, 2, 1, 2, 4)
    assert P.L == P.nu == 1
    C, man = build_msrd_outer(P, override_m=True)
    F = C.field
    assert man["A"] == PolyMatrix.identity(F, 1)
    B = man["B"].coeffs()
    for j in range(2):
        T = build_T(F, man["alpha"], P.M, j)
        assert B[j] == [T[0][:2]]
    assert C.degree == 1


@pytest.mark.parametrize("P", [MsrdParams(2, 1, 1, 2, 8), MsrdParams(3, 2, 1, 2, 4),
                               MsrdParams(3, 1, 2, 2, 6)])
def test_generator_annihilated_by_parity(P):
    C, man = build_msrd_outer(P, override_m=True)
    H = PolyMatrix(C.field, tuple(a + b for a, b in zip(man["A"].entries, man["B"].entries)))
    assert (C.G @ H.transpose()).is_zero
    assert (C.G @ C.H.transpose()).is_zero
    assert C.basic and C.degree == P.delta


def test_A0_is_identity():
    C, man = build_msrd_outer(MsrdParams(3, 1, 2, 2, 6), override_m=True)
    A = man["A"].coeffs()
    assert A[0] == linalg.identity(2)
    assert man["A"].degree <= 1 and man["B"].degree <= 1


def test_tiny_msrd_all_layouts(tiny_outer):
    C, _ = tiny_outer
    layouts = all_layouts(2)
    assert {(l.g, l.r) for l in layouts} == {(2, 1), (1, 2)}
    for lay in layouts:
        for j in range(3):
            assert verify_msrd(C, lay, j)


def test_tiny_fails_beyond_L(tiny_outer):
    C, _ = tiny_outer
    assert not verify_msrd(C, SumRankLayout(2, 1), 3)


def test_r1_layout_matches_mds(tiny_outer):
    C, _ = tiny_outer
    for j in range(4):
        assert verify_msrd(C, SumRankLayout(2, 1), j) == is_j_MDS(C, j)


def test_tiny_column_distances(tiny_outer):
    C, _ = tiny_outer
    assert [column_distance_rank(C, j) for j in range(3)] == [2, 3, 4]


def test_below_bound_requires_override():
    with pytest.raises(ValueError, match="override"):
        build_msrd_outer(MsrdParams(2, 1, 1, 2, 4))
    with pytest.raises(ValueError):
        build_msrd_outer(MsrdParams(2, 1, 1, 2, None))


def test_zero_retries_raise():
    with pytest.raises(ConstructionError):
        build_msrd_outer(MsrdParams(2, 1, 1, 2, 8), retries=0)


def test_prime_field_builds_but_is_not_msrd():
    C, _ = build_msrd_outer(MsrdParams(2, 1, 1, 2, 1), override_m=True)
    assert C.degree == 1 and C.basic
    assert not any(verify_msrd(C, lay, 2) for lay in all_layouts(2))


def test_empirical_min_m():
    m = empirical_min_m(2, 1, 1, 2, m_max=8)
    assert m is not None and m <= 8
    C, _ = build_msrd_outer(MsrdParams(2, 1, 1, 2, m), override_m=True)
    assert all(verify_msrd(C, lay, 2) for lay in all_layouts(2))
    # the sweep starting at m keeps the same answer; starting above it gives a value >= start
    assert empirical_min_m(2, 1, 1, 2, m_max=8, m_min=m) == m
    assert empirical_min_m(2, 1, 1, 2, m_max=m - 1) is None
