from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, strategies as st

from lrcc import linalg
from lrcc.convcode import (
    associated_block_code,
    code_from_generator,
    column_distance_rank,
    is_j_MDS,
)
from lrcc.field import ExtField, field_build
from lrcc.lrcc import (
    LocalStructure,
    LrccCode,
    UnsupportedLocality,
    attainment_check,
    build_construction1,
    delta_choices,
    find_information_local_groups,
    is_partial_MDP,
    is_partial_j_MDS,
    lrcc_bound,
    lrcc_bound_j0,
    mds_local_generator,
    partial_L,
    partial_mds_verdict,
    restrict_code,
    verify_locality,
)
from lrcc.polymat import PolyMatrix, RankDeficientError

GF2 = field_build(2, 1, 1)
GF4_1 = ExtField(2, 2, 1)


def gen(F, rows):
    return PolyMatrix(F, tuple(tuple(tuple(e) for e in r) for r in rows))


def fig3_code():
    """(6,3) code, groups {0,1,2} and {3,4,5}, each last symbol the XOR of the others."""
    G = gen(GF2, [
        [(1,), (), (1,), (), (0, 1), (0, 1)],
        [(), (1,), (1,), (1,), (), (1,)],
        [(), (), (), (), (1,), (1,)],
    ])
    return code_from_generator(GF2, G), LocalStructure.consecutive(2, 2, 2)


def test_repetition_locality():
    C = code_from_generator(GF2, gen(GF2, [[(1,), (1,), (1, 1), (1, 1)]]))
    assert verify_locality(C, LocalStructure.consecutive(2, 1, 2))


def test_pd1_locality_trivial():
    C = code_from_generator(GF2, gen(GF2, [[(1,), (0, 1), (1, 1)]]))
    S = LocalStructure(((0,), (1,), (2,)), 1, 1)
    assert verify_locality(C, S)


def test_fig3_layout_locality():
    C, S = fig3_code()
    assert verify_locality(C, S)
    broken = code_from_generator(GF2, gen(GF2, [
        [(1,), (), (1,), (), (0, 1), (1,)],
        [(), (1,), (1,), (1,), (), (1,)],
        [(), (), (), (), (1,), (1,)],
    ]))
    assert not verify_locality(broken, S)


def test_structure_validation():
    with pytest.raises(ValueError):
        LocalStructure(((0, 1, 2),), 1, 2)
    S = LocalStructure(((0, 1), (1, 2)), 1, 2)
    assert not S.disjoint and S.full_size
    with pytest.raises(UnsupportedLocality):
        LocalStructure(((0, 1),), 1, 2, per_group=((1, 2),)).require_uniform()


def test_lrcc_bound_j0_examples():
    assert lrcc_bound_j0(6, 3, 5, 2) == 4
    assert lrcc_bound_j0(7, 3, 2, 1) == 5
    assert lrcc_bound_j0(4, 1, 1, 2) == 4


def test_lrcc_bound_worked_example_counts():
    assert lrcc_bound(6, 4, 5, 2, 25, "ceiling") - 1 == 32
    assert lrcc_bound(6, 4, 5, 2, 2, "ceiling") - 1 == 4


@pytest.mark.parametrize("j", range(6))
def test_lrcc_bound_tiny_exact(j):
    assert lrcc_bound(4, 1, 1, 2, j, "exact") == 2 * j + 4


def test_lrcc_bound_exact_mode_needs_divisibility():
    with pytest.raises(ValueError):
        lrcc_bound(6, 4, 5, 2, 2, "exact")
    assert lrcc_bound(6, 4, 2, 1, 0, "exact") == 3


def _all_minors_nonzero(F, A):
    r = len(A)
    cols = linalg.transpose(A)
    return all(linalg.rank(F, [cols[c] for c in S]) == r
               for S in itertools.combinations(range(len(A[0])), r))


def test_mds_local_generator_examples():
    assert mds_local_generator(1, 2, 2) == [[1, 1]]
    A = mds_local_generator(2, 2, 3)
    assert A == [[1, 0, 1], [0, 1, 1]]
    assert _all_minors_nonzero(field_build(3, 1, 1), A)
    assert mds_local_generator(3, 1, 3) == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    with pytest.raises(ValueError):
        mds_local_generator(2, 2, 2)


@given(st.sampled_from([3, 4, 5, 7, 8, 9]), st.integers(1, 4), st.integers(1, 4))
def test_mds_local_generator_is_mds(q, r, pd):
    if r + pd - 1 > q:
        return
    from lrcc.lrcc import _subfield_of_order
    F = _subfield_of_order(q)
    A = mds_local_generator(r, pd, q)
    assert [row[:r] for row in A] == [[int(i == j) for j in range(r)] for i in range(r)]
    assert _all_minors_nonzero(F, A)
    if pd == 2:
        assert all(row[r] == 1 for row in A)


def test_construction1_repetition_duplicates(tiny_outer, tiny):
    outer = tiny_outer[0]
    for h in range(outer.memory + 1):
        Go, Gg = outer.G.coeff(h), tiny.code.G.coeff(h)
        assert Gg[0] == [Go[0][0], Go[0][0], Go[0][1], Go[0][1]]
    assert (tiny.code.memory, tiny.code.degree) == (outer.memory, outer.degree)
    assert verify_locality(tiny.code, tiny.structure)
    assert tiny.code.G == outer.G @ PolyMatrix.constant(outer.field, [[1, 1, 0, 0], [0, 0, 1, 1]])


def test_construction1_pd1_is_outer(tiny_outer):
    outer = tiny_outer[0]
    X = build_construction1(outer, 1, 1, 2)
    assert X.code.G == outer.G


def test_construction1_errors(tiny_outer):
    outer = tiny_outer[0]
    with pytest.raises(ValueError):
        build_construction1(outer, 1, 2, 3)
    small = code_from_generator(GF2, gen(GF2, [[(1,), (1,)]]))
    with pytest.raises(ValueError):
        build_construction1(small, 1, 3, 2)


def _rs_outer_times_local(F, n_out, k, r, pd):
    pts = list(range(1, n_out + 1))
    outer = [[F.pow(x, i) for x in pts] for i in range(k)]
    A = mds_local_generator(r, pd, F.order, F)
    g, size = n_out // r, r + pd - 1
    D = [[0] * (g * size) for _ in range(n_out)]
    for b in range(g):
        for i in range(r):
            D[r * b + i][size * b:size * (b + 1)] = A[i]
    return linalg.matmul(F, outer, D), LocalStructure.consecutive(g, r, pd)


def test_info_groups_single_group():
    F = field_build(2, 1, 3)
    G, S = _rs_outer_times_local(F, 4, 2, 2, 2)
    assert linalg.rank(F, G) == 2
    I, _ = find_information_local_groups(G, S, F)
    assert I == [0]


def test_info_groups_tiny_block_layer(tiny):
    G0 = tiny.code.G.coeff(0)
    I, _ = find_information_local_groups(G0, tiny.structure, tiny.code.field)
    assert len(I) == 1
    cols = [c for i in I for c in tiny.structure.groups[i]]
    assert linalg.rank(tiny.code.field, linalg.select_columns(G0, cols)) == 1


def test_info_groups_cartesian_product():
    F = field_build(2, 1, 3)
    A = mds_local_generator(2, 2, 8, F)
    g = 3
    G = []
    for b in range(g):
        for row in A:
            G.append([0] * (3 * b) + row + [0] * (3 * (g - b - 1)))
    I, _ = find_information_local_groups(G, LocalStructure.consecutive(g, 2, 2), F)
    assert I == [0, 1, 2]


def test_info_groups_mds_outer():
    F = field_build(2, 1, 3)
    G, S = _rs_outer_times_local(F, 6, 4, 2, 2)
    I, _ = find_information_local_groups(G, S, F)
    assert I == [0, 1]
    cols = [c for i in I for c in S.groups[i]]
    assert linalg.rank(F, linalg.select_columns(G, cols)) == 4


def test_restrict_identity_and_outer(tiny, tiny_outer):
    full = [list(g) for g in tiny.structure.groups]
    assert restrict_code(tiny, full).G == tiny.code.G
    first = [[g[0]] for g in tiny.structure.groups]
    assert restrict_code(tiny, first).G == tiny_outer[0].G


def test_restrict_too_many_removed(tiny):
    with pytest.raises(ValueError):
        restrict_code(tiny, [[], [2, 3]])


@pytest.mark.parametrize("seed", range(4))
def test_restricted_rank_random_delta(tiny, seed):
    rng = random.Random(seed)
    delta = [rng.sample(list(g), 1) for g in tiny.structure.groups]
    R = restrict_code(tiny, delta)
    assert R.k == 1 and R.n == 2


def test_tiny_restrictions_are_j_mds(tiny):
    choices = list(delta_choices(tiny.structure))
    assert len(choices) == 4
    for delta in choices:
        R = restrict_code(tiny, delta)
        assert R.basic
        assert [column_distance_rank(R, j) for j in range(3)] == [2, 3, 4]


def test_partial_mds_tiny(tiny):
    assert partial_L(tiny) == 2
    for j in range(3):
        assert is_partial_j_MDS(tiny, j)
    assert is_partial_MDP(tiny)
    v = partial_mds_verdict(tiny, 3)
    assert not v.result and v.witness["j"] == 3 and v.witness["pattern"]


def test_partial_mds_pd1_reduces_to_j_mds(tiny_outer):
    outer = tiny_outer[0]
    X = build_construction1(outer, 1, 1, 2)
    for j in range(4):
        assert is_partial_j_MDS(X, j) == is_j_MDS(outer, j)


def test_partial_mdp_zero_degree():
    F = ExtField(2, 2, 1)
    outer = code_from_generator(F, PolyMatrix.constant(F, [[1, 1]]))
    X = build_construction1(outer, 1, 2, 2)
    assert partial_L(X) == 0 and is_partial_MDP(X)


def test_partial_mds_fails_after_mutation(tiny):
    F = tiny.code.field
    coeffs = tiny.code.G.coeffs()
    coeffs[0][0][3] = 0
    G = PolyMatrix.from_coeffs(F, coeffs)
    mutated = LrccCode(code_from_generator(F, G), tiny.structure)
    v = partial_mds_verdict(mutated, 2, all_windows=True)
    assert not v.result
    assert v.witness["j"] == 0 and 3 in [c for sel in v.witness["delta"] for c in sel]
    assert v.witness["pattern"]


@pytest.mark.parametrize("j", range(3))
def test_attainment_tiny(tiny, j):
    assert column_distance_rank(tiny.code, j) == 2 * j + 4
    assert attainment_check(tiny, j, "exact")
    assert attainment_check(tiny, j, "ceiling")


def test_attainment_pd1_is_j_mds(tiny_outer):
    outer = tiny_outer[0]
    X = build_construction1(outer, 1, 1, 2)
    for j in range(4):
        assert attainment_check(X, j) == is_j_MDS(outer, j)
