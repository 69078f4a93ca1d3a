from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from lrcc import linalg, poly
from lrcc.budget import BudgetExceeded
from lrcc.convcode import (
    CatastrophicCodeError,
    DistanceProfile,
    SumRankLayout,
    L_parameter,
    associated_block_code,
    block_min_distance,
    code_from_generator,
    column_distance_bruteforce,
    column_distance_rank,
    distance_profile,
    encode_stream,
    free_distance_lower,
    is_j_MDS,
    is_j_MSRD,
    is_MDP,
    singleton_column_bound,
    sum_rank_column_distance,
    sum_rank_weight,
)
from lrcc.field import field_build
from lrcc.polymat import PolyMatrix, RankDeficientError, row_degrees
from lrcc.sampling import random_code

GF2 = field_build(2, 1, 1)
GF4 = field_build(2, 1, 2)
GF8 = field_build(2, 1, 3)
GF3 = field_build(3, 1, 1)


def gen(F, rows):
    return PolyMatrix(F, tuple(tuple(tuple(e) for e in r) for r in rows))


def test_zero_memory_code_is_block_code():
    C = code_from_generator(GF2, gen(GF2, [[(1,), (), ()], [(), (1,), ()]]))
    assert (C.memory, C.degree) == (0, 0)
    assert C.basic and C.G0_fullrank
    u = [[1, 0], [0, 1], [1, 1]]
    assert encode_stream(C, u) == [[1, 0, 0], [0, 1, 0], [1, 1, 0]]


def test_single_row_degree_readoff():
    C = code_from_generator(GF2, gen(GF2, [[(1,), (0, 1)]]))
    assert (C.memory, C.degree, C.basic) == (1, 1, True)


def test_rank_deficient_generator_rejected():
    with pytest.raises(RankDeficientError):
        code_from_generator(GF2, gen(GF2, [[(1,), (0, 1)], [(0, 1), (0, 0, 1)]]))


def test_catastrophic_code_is_flagged():
    C = code_from_generator(GF2, gen(GF2, [[(1, 1), (1, 0, 1)]]))
    assert not C.basic and C.H is None
    with pytest.raises(CatastrophicCodeError):
        is_j_MDS(C, 0)


@pytest.mark.parametrize("seed", range(6))
def test_memory_and_degree_invariant_under_unimodular_regeneration(seed):
    rng = random.Random(seed)
    C = random_code(GF3, 3, 2, 1, rng)
    U = gen(GF3, [[(1,), (rng.randrange(3), rng.randrange(3))], [(), (1,)]])
    C2 = code_from_generator(GF3, U @ C.G)
    assert (C2.memory, C2.degree) == (C.memory, C.degree)


def test_encode_zero_and_impulse():
    C = code_from_generator(GF4, gen(GF4, [[(1, 2), (3, 0, 1)]]))
    assert encode_stream(C, [[0]] * 4) == [[0, 0]] * 4
    v = encode_stream(C, [[1], [0], [0], [0]])
    assert v == [[1, 3], [2, 0], [0, 1], [0, 0]]
    with pytest.raises(ValueError):
        encode_stream(C, [[1, 1]])


@pytest.mark.parametrize("seed", range(10))
def test_encoded_stream_satisfies_parity(seed):
    rng = random.Random(seed)
    C = random_code(GF4, 4, 2, 2, rng)
    u = [[rng.randrange(4) for _ in range(2)] for _ in range(6)]
    v = encode_stream(C, u)
    Hs = C.parity_sliding(5).data
    flat = [x for b in v for x in b]
    assert not any(linalg.vecmat(GF4, flat, Hs))


def test_associated_block_code():
    C = code_from_generator(GF2, gen(GF2, [[(1,), (1,)]]))
    assert associated_block_code(C) == [[1, 1]]
    rng = random.Random(3)
    D = random_code(GF4, 4, 2, 2, rng)
    C0 = associated_block_code(D)
    assert len(C0) == (D.memory + 1) * D.k
    assert linalg.rank(GF4, C0) <= min(D.n, (D.memory + 1) * D.k)
    u = [[rng.randrange(4) for _ in range(2)] for _ in range(5)]
    v = encode_stream(D, u)
    assert linalg.solve(GF4, linalg.transpose(C0), v[D.memory]) is not None


def test_column_distance_parity_code():
    C = code_from_generator(GF2, gen(GF2, [[(1,), (1,)]]))
    assert column_distance_rank(C, 0) == 2 == column_distance_bruteforce(C, 0)


def test_column_distance_1_Dplus1():
    C = code_from_generator(GF2, gen(GF2, [[(1,), (1, 1)]]))
    assert column_distance_bruteforce(C, 0) == 2
    assert column_distance_rank(C, 0) == 2


def test_free_distance_classic_7_5_code():
    # (1+D+D^2, 1+D^2): the standard free distance 5 example
    C = code_from_generator(GF2, gen(GF2, [[(1, 1, 1), (1, 0, 1)]]))
    val, exact = free_distance_lower(C, 6)
    assert (val, exact) == (5, True)
    for j in range(4):
        assert val >= column_distance_rank(C, j)


def test_free_distance_zero_memory_is_block_distance():
    C = code_from_generator(GF3, gen(GF3, [[(1,), (), (1,), (1,)], [(), (1,), (1,), (2,)]]))
    val, exact = free_distance_lower(C, 2)
    assert val == block_min_distance(GF3, C.G.coeff(0)) == 3


@pytest.mark.parametrize("seed", range(6))
def test_free_distance_stable_in_cutoff(seed):
    C = random_code(GF2, 3, 1, 2, random.Random(seed))
    vals = [free_distance_lower(C, c)[0] for c in range(1, 6)]
    assert all(a >= b for a, b in zip(vals, vals[1:]))
    assert vals[-1] >= column_distance_rank(C, 3)


def test_L_parameter():
    assert L_parameter(20, 4, 1) == 25
    assert L_parameter(0, 3, 2) == 0
    assert L_parameter(1, 2, 1) == 1
    with pytest.raises(ValueError):
        L_parameter(1, 0, 1)


def test_j_mds_parity_code():
    C = code_from_generator(GF2, gen(GF2, [[(1,), (1,)]]))
    assert is_j_MDS(C, 0) and is_MDP(C)


@pytest.mark.parametrize("seed", range(12))
def test_oracles_agree_and_monotone(seed):
    rng = random.Random(seed)
    F = [GF2, GF3, GF4][seed % 3]
    n, k, mu = rng.randint(2, 4), 1, rng.randint(0, 2)
    C = random_code(F, n, k, mu, rng)
    prev = 0
    L = L_parameter(C.degree, C.k, C.n - C.k)
    mds = []
    for j in range(3):
        d = column_distance_rank(C, j)
        if F.order ** (k * (j + 1)) <= 2**10:
            assert d == column_distance_bruteforce(C, j)
        assert prev <= d <= singleton_column_bound(n, k, j)
        prev = d
        mds.append(d == singleton_column_bound(n, k, j))
        if j > L:
            assert not mds[-1]
    for a, b in zip(mds, mds[1:]):
        assert a or not b


def test_bruteforce_budget():
    C = code_from_generator(GF8, gen(GF8, [[(1, 2), (3, 4)]]))
    with pytest.raises(BudgetExceeded):
        column_distance_bruteforce(C, 3, budget=100)


def test_rank_budget_reports_interval():
    rng = random.Random(5)
    C = random_code(GF8, 4, 1, 2, rng)
    with pytest.raises(BudgetExceeded) as ei:
        column_distance_rank(C, 3, budget=5)
    assert ei.value.lower >= 1 and ei.value.upper == singleton_column_bound(4, 1, 3)
    prof = distance_profile(C, 3, "rank-pattern", budget=5)
    assert not prof.is_exact


def test_profile_csv_columns():
    C = code_from_generator(GF2, gen(GF2, [[(1,), (1, 1)]]))
    prof = distance_profile(C, 2)
    lines = prof.to_csv().splitlines()
    assert lines[0] == "j,d_jc,bound_classical,bound_locality,method,exact"
    assert lines[1].startswith("0,2,2,")
    vals = [prof.values[j] for j in range(3)]
    assert vals == sorted(vals)


@given(st.lists(st.integers(0, 63), min_size=6, max_size=6))
def test_sum_rank_weight_r1_equals_hamming(v):
    F = GF8
    vals = [x % 8 for x in v]
    assert sum_rank_weight(vals, SumRankLayout(6, 1), F) == sum(1 for x in vals if x)


@given(st.lists(st.integers(0, 255), min_size=6, max_size=6), st.sampled_from([(3, 2), (2, 3), (1, 6)]))
def test_sum_rank_weight_bounded_by_hamming(v, lay):
    F = field_build(2, 1, 8)
    w = sum_rank_weight(v, SumRankLayout(*lay), F)
    assert 0 <= w <= sum(1 for x in v if x)
    assert (w == 0) == (not any(v))


def test_sum_rank_layout_mismatch():
    with pytest.raises(ValueError):
        sum_rank_weight([1, 2, 3], SumRankLayout(1, 2), GF4)


@pytest.mark.parametrize("seed", range(6))
def test_sum_rank_routes_agree(seed):
    rng = random.Random(seed)
    F = GF4 if seed % 2 else GF8
    n = 4 if seed < 4 else 3
    C = random_code(F, n, 1, 1, rng)
    layouts = [SumRankLayout(n // r, r) for r in (1, 2, 3) if n % r == 0]
    for j in range(2):
        for lay in layouts:
            direct = sum_rank_column_distance(C, j, lay, "direct")
            lemma = sum_rank_column_distance(C, j, lay, "lemma")
            assert direct == lemma
            assert direct <= column_distance_rank(C, j) <= singleton_column_bound(n, 1, j)
        assert sum_rank_column_distance(C, j, SumRankLayout(n, 1)) == column_distance_rank(C, j)


def test_msrd_not_beyond_L(tiny_outer):
    C, _ = tiny_outer
    lay = SumRankLayout(1, 2)
    assert is_j_MSRD(C, 2, lay) and is_j_MSRD(C, 1, lay)
    assert not is_j_MSRD(C, 3, lay)
