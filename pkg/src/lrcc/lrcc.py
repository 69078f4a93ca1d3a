"""Locality layer: local groups and their bounds, the outer-times-local-MDS construction, partial MDS checks."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from math import ceil, comb, prod
from typing import Any, Sequence

from . import linalg
from .budget import BudgetExceeded, Meter
from .convcode import (
    ConvCode,
    L_parameter,
    associated_block_code,
    block_min_distance,
    code_from_generator,
    column_distance_rank,
    singleton_column_bound,
)
from .field import ExtensionField, PrimeField, _first_irreducible, split_prime_power
from .polymat import PolyMatrix, RankDeficientError


class UnsupportedLocality(ValueError):
    pass


@dataclass(frozen=True)
class LocalStructure:
    """Local groups over [n] with locality r and local distance pd.

    ``per_group`` is reserved for unequal (r_i, pd_i); any use of it is
    rejected by the bound and verification code.
    """

    groups: tuple
    r: int
    pd: int
    per_group: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "groups", tuple(tuple(g) for g in self.groups))
        if self.r < 1 or self.pd < 1:
            raise ValueError("locality and local distance must be positive")
        if any(len(g) == 0 for g in self.groups):
            raise ValueError("empty local group")
        if any(len(g) > self.r + self.pd - 1 for g in self.groups):
            raise ValueError("local group larger than r + pd - 1")

    @classmethod
    def consecutive(cls, g: int, r: int, pd: int) -> "LocalStructure":
        size = r + pd - 1
        return cls(tuple(tuple(range(i * size, (i + 1) * size)) for i in range(g)), r, pd)

    @property
    def g(self) -> int:
        return len(self.groups)

    @property
    def n(self) -> int:
        return max(c for grp in self.groups for c in grp) + 1

    @property
    def disjoint(self) -> bool:
        flat = [c for grp in self.groups for c in grp]
        return len(flat) == len(set(flat))

    @property
    def full_size(self) -> bool:
        return all(len(grp) == self.r + self.pd - 1 for grp in self.groups)

    def covers(self, n: int) -> bool:
        return {c for grp in self.groups for c in grp} == set(range(n))

    def require_uniform(self) -> None:
        if self.per_group is not None:
            raise UnsupportedLocality("unsupported: unequal localities")

    def require_theorem_layout(self) -> None:
        self.require_uniform()
        if not (self.disjoint and self.full_size):
            raise ValueError("needs pairwise disjoint local groups of size r + pd - 1")


@dataclass(frozen=True, eq=False)
class LrccCode:
    code: ConvCode
    structure: LocalStructure
    local_gen: tuple | None = None
    outer: ConvCode | None = None

    @property
    def n(self) -> int:
        return self.code.n

    @property
    def k(self) -> int:
        return self.code.k

    @property
    def N(self) -> int:
        s = self.structure
        return self.code.n - s.g * (s.pd - 1)


def verify_locality(C: ConvCode, S: LocalStructure) -> bool:
    """Size cap, coverage, and d(C^0 restricted to each group) >= pd."""
    S.require_uniform()
    if not S.covers(C.n):
        return False
    C0 = associated_block_code(C)
    for grp in S.groups:
        if len(grp) > S.r + S.pd - 1:
            return False
        if block_min_distance(C.field, linalg.select_columns(C0, grp)) < S.pd:
            return False
    return True


def lrcc_bound_j0(n: int, k: int, r: int, pd: int) -> int:
    return (n - k) - (ceil(k / r) - 1) * (pd - 1) + 1


def lrcc_bound(n: int, k: int, r: int, pd: int, j: int, mode: str = "exact") -> int:
    """Column-distance upper bound with (r, pd)-localities at window j.

    ``exact`` needs r | k(j+1); ``ceiling`` rounds k(j+1)/r up.
    """
    kj = k * (j + 1)
    if mode == "exact":
        if kj % r:
            raise ValueError(f"exact mode needs r | k(j+1); got r={r}, k(j+1)={kj}")
        groups = kj // r
    elif mode == "ceiling":
        groups = -(-kj // r)
    else:
        raise ValueError(f"unknown bound mode {mode!r}")
    return (n - k) * (j + 1) - (groups - 1) * (pd - 1) + 1


def _subfield_of_order(q: int):
    p, a = split_prime_power(q)
    prime = PrimeField(p)
    return prime if a == 1 else ExtensionField(prime, _first_irreducible(prime, a))


def mds_local_generator(r: int, pd: int, q: int, field=None) -> list[list[int]]:
    """Systematic [I_r | P] generating an (r+pd-1, r) MDS code over GF(q).

    P is a Cauchy matrix rescaled so its first row and column are all ones.
    """
    if q < r + pd - 1:
        raise ValueError(f"field of size {q} too small for an MDS ({r + pd - 1}, {r}) code")
    F = field or _subfield_of_order(q)
    c = pd - 1
    xs = list(range(r))
    ys = list(range(r, r + c))
    P = [[F.inv(F.sub(x, y)) for y in ys] for x in xs]
    if c:
        P = [[F.div(F.mul(P[i][j], P[0][0]), F.mul(P[i][0], P[0][j])) for j in range(c)]
             for i in range(r)]
    return [[1 if i == t else 0 for t in range(r)] + P[i] for i in range(r)]


def build_construction1(outer: ConvCode, r: int, pd: int, g: int) -> LrccCode:
    """G_glob(D) = G_out(D) diag_g(A) with A a systematic local MDS generator."""
    F = outer.field
    if outer.n != g * r:
        raise ValueError(f"outer length {outer.n} != g*r = {g * r}")
    q = getattr(F, "q", F.order)
    if q < r + pd - 1:
        raise ValueError(f"q = {q} < r + pd - 1 = {r + pd - 1}")
    A = mds_local_generator(r, pd, q, F.subfield if hasattr(F, "subfield") else F)
    size = r + pd - 1
    D = [[0] * (g * size) for _ in range(g * r)]
    for b in range(g):
        for i in range(r):
            D[b * r + i][b * size:(b + 1) * size] = A[i]
    Gg = outer.G @ PolyMatrix.constant(F, D)
    code = code_from_generator(F, Gg)
    return LrccCode(code, LocalStructure.consecutive(g, r, pd),
                    tuple(tuple(row) for row in A), outer)


def find_information_local_groups(C0_gen: Sequence[Sequence[int]], S: LocalStructure,
                                  F=None) -> tuple[list[int], list[int]]:
    """Greedy search for local groups whose union carries the full dimension.

    Returns (I, A): chosen group indices and the accumulated coordinate set.
    """
    S.require_theorem_layout()
    if F is None:
        raise ValueError("field required")
    M = [list(r) for r in C0_gen]
    k = linalg.rank(F, M)

    def dim(coords) -> int:
        return linalg.rank(F, linalg.select_columns(M, sorted(coords))) if coords else 0

    I: list[int] = []
    A: set = set()
    stalled = None
    while dim(A) < k:
        remaining = [i for i in range(S.g) if i not in I]
        if not remaining:
            break
        i = remaining[0]
        grp = S.groups[i]
        if dim(A | set(grp)) < k:
            I.append(i)
            A |= set(grp)
            continue
        delta = None
        for size in range(len(grp) - 1, 0, -1):
            delta = next((set(d) for d in itertools.combinations(grp, size)
                          if dim(A | set(d)) < k), None)
            if delta is not None:
                break
        if delta is not None:
            I.append(i)
            A |= delta
        else:
            stalled = i
            break
    covered = set(c for i in I for c in S.groups[i])
    if dim(covered) < k:
        # the unfinished group completes the information set
        extra = stalled if stalled is not None else next(
            (i for i in range(S.g) if i not in I), None)
        if extra is not None:
            I.append(extra)
    return I, sorted(A)


def restrict_code(C: LrccCode | ConvCode, delta: Sequence[Sequence[int]],
                  structure: LocalStructure | None = None) -> ConvCode:
    """Restriction to the union of per-group selections delta[i] subset of groups[i]."""
    if isinstance(C, LrccCode):
        structure = C.structure
        code = C.code
    else:
        code = C
    if structure is None:
        raise ValueError("local structure required")
    if len(delta) != structure.g:
        raise ValueError("one selection per local group is required")
    cols = []
    for grp, sel in zip(structure.groups, delta):
        sel = list(sel)
        if not set(sel) <= set(grp):
            raise ValueError("selection outside its local group")
        if len(grp) - len(set(sel)) > structure.pd - 1:
            raise ValueError("selection removes pd or more coordinates from a group")
        cols.extend(sel)
    G = code.G.select_columns(cols)
    try:
        return code_from_generator(code.field, G)
    except RankDeficientError as exc:
        raise RankDeficientError("restricted generator lost rank") from exc


def delta_choices(S: LocalStructure):
    """Lexicographic product of per-group selections leaving r coordinates."""
    per = [list(itertools.combinations(grp, len(grp) - (S.pd - 1))) for grp in S.groups]
    return itertools.product(*per)


@dataclass
class Verdict:
    predicate: str
    result: bool
    witness: dict | None = None
    details: dict = dc_field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"predicate": self.predicate, "result": self.result}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.details:
            out["details"] = self.details
        return out


def partial_mds_verdict(C: LrccCode, j: int, budget: int | None = None,
                        all_windows: bool = False) -> Verdict:
    """Check every maximal puncturing of local parities for j-MDS.

    With ``all_windows`` every h <= j is checked as well.
    """
    S = C.structure
    S.require_theorem_layout()
    n_choices = prod(comb(len(g), S.pd - 1) for g in S.groups)
    meter = Meter(budget)
    if n_choices > meter.limit:
        raise BudgetExceeded(f"{n_choices} restrictions exceed budget")
    windows = range(j + 1) if all_windows else (j,)
    for delta in delta_choices(S):
        dl = [list(d) for d in delta]
        try:
            R = restrict_code(C, dl)
        except RankDeficientError:
            return Verdict("partial-j-MDS", False, {"delta": dl, "j": j, "reason": "rank"})
        if not R.basic:
            return Verdict("partial-j-MDS", False, {"delta": dl, "j": j, "reason": "catastrophic"})
        for h in windows:
            d, supp = column_distance_rank(R, h, meter=meter, witness=True)
            if d != singleton_column_bound(R.n, R.k, h):
                cols = [c for sel in dl for c in sel]
                pattern = [[s // R.n, cols[s % R.n]] for s in supp]
                return Verdict("partial-j-MDS", False,
                               {"delta": dl, "j": h, "pattern": pattern, "distance": d})
    return Verdict("partial-j-MDS", True, details={"restrictions": n_choices, "j": j})


def is_partial_j_MDS(C: LrccCode, j: int, budget: int | None = None) -> bool:
    return partial_mds_verdict(C, j, budget).result


def partial_L(C: LrccCode) -> int:
    N = C.N
    if N == C.k:
        return 0
    return L_parameter(C.code.degree, C.k, N - C.k)


def is_partial_MDP(C: LrccCode, budget: int | None = None) -> bool:
    return is_partial_j_MDS(C, partial_L(C), budget)


def attainment_check(C: LrccCode, j: int, mode: str = "ceiling",
                     budget: int | None = None) -> bool:
    S = C.structure
    S.require_uniform()
    d = column_distance_rank(C.code, j, budget)
    return d == lrcc_bound(C.n, C.k, S.r, S.pd, j, mode)
