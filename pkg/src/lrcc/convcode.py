"""Convolutional codes: encoding, column distances, sum-rank distances, MDP predicates."""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Any, Iterable, Sequence

from . import linalg
from .budget import BudgetExceeded, Meter
from .field import matrix_representation
from .polymat import (
    PolyMatrix,
    RankDeficientError,
    SlidingMatrix,
    is_basic,
    make_reduced,
    parity_check_from_generator,
    poly_rank,
    row_degrees,
    truncated_sliding,
)


class CatastrophicCodeError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ConvCode:
    """An (n, k) convolutional code held through a reduced generator G(D)."""

    field: Any
    n: int
    k: int
    G: PolyMatrix
    H: PolyMatrix | None
    memory: int
    degree: int
    G0_fullrank: bool
    basic: bool

    @property
    def non_catastrophic(self) -> bool:
        return self.basic

    @cached_property
    def coeffs(self) -> list[list[list[int]]]:
        return [self.G.coeff(h) for h in range(self.memory + 1)]

    @cached_property
    def parity_coeffs(self) -> list[list[list[int]]]:
        if self.H is None:
            raise CatastrophicCodeError("catastrophic code has no polynomial parity check")
        return [self.H.coeff(h) for h in range(max(self.H.degree, 0) + 1)]

    def sliding(self, j: int) -> SlidingMatrix:
        return truncated_sliding(self.coeffs, j, (self.k, self.n))

    def parity_sliding(self, j: int) -> SlidingMatrix:
        """Truncated sliding matrix of H^T: block (s, t) is H_{t-s}^T."""
        Ht = [linalg.transpose(Hh) for Hh in self.parity_coeffs]
        return truncated_sliding(Ht, j, (self.n, self.n - self.k))

    def require_non_catastrophic(self) -> None:
        if not self.basic:
            raise CatastrophicCodeError("operation needs a non-catastrophic code")

    def __eq__(self, other) -> bool:
        return (isinstance(other, ConvCode) and self.field == other.field
                and self.G == other.G)

    def __hash__(self) -> int:
        return hash((self.n, self.k, self.G.entries))


def code_from_generator(F, G_raw: PolyMatrix | Sequence, derive_parity: bool = True) -> ConvCode:
    """Reduce ``G_raw`` and collect degree, memory, basicness and a parity check."""
    if not isinstance(G_raw, PolyMatrix):
        G_raw = PolyMatrix(F, tuple(tuple(tuple(p) for p in row) for row in G_raw))
    k, n = G_raw.shape
    if k == 0 or k > n or poly_rank(G_raw) < k:
        raise RankDeficientError("generator matrix must have full row rank")
    G = make_reduced(G_raw)
    degs = row_degrees(G)
    basic = is_basic(G)
    H = parity_check_from_generator(G) if (basic and derive_parity and k < n) else None
    if basic and k == n:
        H = PolyMatrix(F, ())
    g0 = linalg.rank(F, G.coeff(0)) == k
    return ConvCode(F, n, k, G, H, max(degs), sum(degs), g0, basic)


def encode_stream(C: ConvCode, u: Sequence[Sequence[int]]) -> list[list[int]]:
    """v_t = sum_i u_{t-i} G_i with u_s = 0 for s < 0; output has len(u) blocks."""
    F = C.field
    for msg in u:
        if len(msg) != C.k:
            raise ValueError(f"message blocks must have length {C.k}")
    out = []
    for t in range(len(u)):
        acc = [0] * C.n
        for i, Gi in enumerate(C.coeffs):
            if t - i < 0:
                break
            part = linalg.vecmat(F, u[t - i], Gi)
            acc = [F.add(a, b) for a, b in zip(acc, part)]
        out.append(acc)
    return out


def associated_block_code(C: ConvCode) -> list[list[int]]:
    """Stacked [G_0; ...; G_mu]; its row space is the block code C^0."""
    return [list(row) for Gi in C.coeffs for row in Gi]


def L_parameter(delta: int, k: int, c: int) -> int:
    if k < 1 or c < 1:
        raise ValueError("k and the corank must be positive")
    return delta // k + delta // c


def singleton_column_bound(n: int, k: int, j: int) -> int:
    return (n - k) * (j + 1) + 1


# --- Hamming column distances ---------------------------------------------

def _min_window_support(F, data: list[list[int]], k: int, width: int,
                        meter: Meter, upper: int, block: int | None = None):
    """Smallest support S admitting u with u_0 != 0 and u M zero outside S.

    ``data`` is the sliding matrix; the first ``k`` rows carry u_0.  Support S
    works iff rank(M_out) < rank(M_out restricted to rows >= k) + k.
    Returns (size, S) or raises BudgetExceeded with bounds.
    """
    cols = linalg.transpose(data)
    positions = range(width)
    bottom = data[k:]
    bottom_cols = linalg.transpose(bottom) if bottom else [[] for _ in positions]
    for e in range(1, width + 1):
        for S in itertools.combinations(positions, e):
            if block is not None and S[0] >= block:
                # v_0 != 0 forces a support point in the first block
                break
            try:
                meter.spend()
            except BudgetExceeded:
                raise BudgetExceeded("column distance search over budget", lower=e, upper=upper)
            Sset = set(S)
            out = [c for c in positions if c not in Sset]
            if not out:
                return e, S
            full = linalg.rank(F, [cols[c] for c in out])
            bot = linalg.rank(F, [bottom_cols[c] for c in out]) if bottom else 0
            if full < bot + k:
                return e, S
    raise ValueError("no codeword with nonzero first block (G_0 not of full rank?)")


def column_distance_rank(C: ConvCode, j: int, budget: int | None = None,
                         meter: Meter | None = None, witness: bool = False):
    """d_j^c by increasing support search on the sliding generator matrix."""
    if not C.G0_fullrank:
        raise ValueError("G_0 must have full rank")
    meter = meter or Meter(budget)
    Gc = C.sliding(j)
    d, S = _min_window_support(C.field, Gc.data, C.k, C.n * (j + 1), meter,
                               singleton_column_bound(C.n, C.k, j), block=C.n)
    return (d, S) if witness else d


def _enumerate_window_codewords(F, data: list[list[int]], k: int, meter: Meter):
    """Yield u M for all u with u_0 != 0 (DFS with partial sums)."""
    rows = len(data)
    width = len(data[0]) if data else 0
    elems = list(range(F.order))
    fadd, fmul = F.add, F.mul

    def rec(level: int, acc: list[int], nz: bool):
        if level == rows:
            if nz:
                meter.spend()
                yield acc
            return
        row = data[level]
        for c in elems:
            if level == k - 1 and c == 0 and not nz:
                continue
            if c == 0:
                new = acc
            else:
                new = [fadd(a, fmul(c, b)) if b else a for a, b in zip(acc, row)]
            yield from rec(level + 1, new, nz or (level < k and c != 0))

    yield from rec(0, [0] * width, False)


def column_distance_bruteforce(C: ConvCode, j: int, budget: int | None = None) -> int:
    """d_j^c by enumerating all message windows (u_0, ..., u_j) with u_0 != 0."""
    meter = Meter(budget)
    size = C.field.order ** (C.k * (j + 1))
    if size > meter.limit:
        raise BudgetExceeded(f"{size} messages exceed budget {meter.limit}")
    best = None
    for v in _enumerate_window_codewords(C.field, C.sliding(j).data, C.k, meter):
        w = sum(1 for x in v if x)
        if best is None or w < best:
            best = w
    return best


def free_distance_lower(C: ConvCode, degree_cutoff: int, budget: int | None = None) -> tuple[int, bool]:
    """Min weight over codewords u(D)G(D), u_0 != 0, deg u <= cutoff.

    The second value is True when every message path reaching the cutoff
    already weighs at least the best value, so longer messages cannot win.
    """
    F, n, k, mu = C.field, C.n, C.k, C.memory
    meter = Meter(budget)
    Gs = C.coeffs
    elems = list(range(F.order))
    msgs = [m for m in itertools.product(elems, repeat=k)]
    nonzero = [m for m in msgs if any(m)]
    best = [None]
    exact = [True]

    def block(history: list, t: int) -> list[int]:
        acc = [0] * n
        for i in range(mu + 1):
            if 0 <= t - i < len(history):
                part = linalg.vecmat(F, history[t - i], Gs[i])
                acc = [F.add(a, b) for a, b in zip(acc, part)]
        return acc

    def tail_weight(history: list) -> int:
        T = len(history)
        return sum(sum(1 for x in block(history, t) if x) for t in range(T, T + mu))

    def rec(history: list, w: int):
        meter.spend()
        total = w + tail_weight(history)
        if best[0] is None or total < best[0]:
            best[0] = total
        if len(history) > degree_cutoff:
            if w < best[0]:
                exact[0] = False
            return
        for m in msgs:
            history.append(m)
            w2 = w + sum(1 for x in block(history, len(history) - 1) if x)
            if best[0] is None or w2 < best[0]:
                rec(history, w2)
            history.pop()

    try:
        for m0 in nonzero:
            hist = [m0]
            rec(hist, sum(1 for x in block(hist, 0) if x))
    except BudgetExceeded:
        return best[0], False
    return best[0], exact[0]


def is_j_MDS(C: ConvCode, j: int, budget: int | None = None) -> bool:
    C.require_non_catastrophic()
    return column_distance_rank(C, j, budget) == singleton_column_bound(C.n, C.k, j)


def is_MDP(C: ConvCode, budget: int | None = None) -> bool:
    C.require_non_catastrophic()
    if C.k == C.n:
        return True
    return is_j_MDS(C, L_parameter(C.degree, C.k, C.n - C.k), budget)


# --- profiles -------------------------------------------------------------

@dataclass
class DistanceProfile:
    """Column distances by window index, with method and exactness per entry.

    Inexact entries store the proven lower bound.
    """

    n: int
    k: int
    values: dict = dc_field(default_factory=dict)
    methods: dict = dc_field(default_factory=dict)
    exact: dict = dc_field(default_factory=dict)
    upper: dict = dc_field(default_factory=dict)

    def record(self, j: int, value: int, method: str, exact: bool = True,
               upper: int | None = None) -> None:
        self.values[j] = value
        self.methods[j] = method
        self.exact[j] = exact
        self.upper[j] = value if exact else upper

    @property
    def is_exact(self) -> bool:
        return all(self.exact.values())

    def to_csv(self, locality: dict | None = None) -> str:
        """CSV with columns j, d_jc, bound_classical, bound_locality, method, exact."""
        from .lrcc import lrcc_bound

        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["j", "d_jc", "bound_classical", "bound_locality", "method", "exact"])
        for j in sorted(self.values):
            loc = ""
            if locality is not None:
                loc = lrcc_bound(self.n, self.k, locality["r"], locality["pd"], j, mode="ceiling")
            w.writerow([j, self.values[j], singleton_column_bound(self.n, self.k, j), loc,
                        self.methods[j], str(self.exact[j]).lower()])
        return buf.getvalue()


def distance_profile(C: ConvCode, j_max: int, method: str = "auto",
                     budget: int | None = None) -> DistanceProfile:
    prof = DistanceProfile(C.n, C.k)
    for j in range(j_max + 1):
        use = method
        if use == "auto":
            use = "brute-force" if C.field.order ** (C.k * (j + 1)) <= 2**12 else "rank-pattern"
        try:
            if use == "brute-force":
                prof.record(j, column_distance_bruteforce(C, j, budget), use)
            else:
                prof.record(j, column_distance_rank(C, j, budget), use)
        except BudgetExceeded as exc:
            lo = exc.lower if exc.lower is not None else 1
            prof.record(j, lo, use, exact=False, upper=exc.upper)
    return prof


# --- sum-rank metric ------------------------------------------------------

@dataclass(frozen=True)
class SumRankLayout:
    g: int
    r: int

    def check(self, length: int) -> None:
        if self.g * self.r != length:
            raise ValueError(f"layout {self.g}x{self.r} does not match length {length}")


def sum_rank_weight(v: Sequence, layout: SumRankLayout, field=None) -> int:
    """Sum over the length-r blocks of the GF(q)-rank of their matrix representation."""
    vals = [int(x) for x in v]
    if field is None:
        field = v[0].field
    if len(vals) % layout.r or (layout.g and len(vals) % (layout.g * layout.r)):
        raise ValueError(f"length {len(vals)} does not fit layout {layout}")
    total = 0
    for s in range(0, len(vals), layout.r):
        blk = vals[s:s + layout.r]
        if any(blk):
            total += linalg.rank(field.subfield, matrix_representation(blk, field))
    return total


def _gl_coset_reps(q_field, r: int) -> list[list[list[int]]]:
    """Representatives of GL(r, q) modulo right multiplication by monomial matrices."""
    F = q_field
    q = F.order
    seen = {}
    for entries in itertools.product(range(q), repeat=r * r):
        B = [list(entries[i * r:(i + 1) * r]) for i in range(r)]
        if linalg.rank(F, B) < r:
            continue
        cols = []
        for c in range(r):
            col = [B[i][c] for i in range(r)]
            lead = next(x for x in col if x)
            il = F.inv(lead)
            cols.append(tuple(F.mul(il, x) for x in col))
        key = tuple(sorted(cols))
        if key not in seen:
            seen[key] = [[key[c][i] for c in range(r)] for i in range(r)]
    return list(seen.values())


def _block_diag_transform(F, data: list[list[int]], blocks: Sequence[list[list[int]]], r: int):
    out = [list(row) for row in data]
    for b, B in enumerate(blocks):
        s = b * r
        for row_o, row_i in zip(out, data):
            seg = row_i[s:s + r]
            row_o[s:s + r] = linalg.vecmat(F, seg, B)
    return out


def sum_rank_column_distance(C: ConvCode, j: int, layout: SumRankLayout,
                             route: str = "auto", budget: int | None = None) -> int:
    """d_{SR,j}^c by message enumeration ("direct") or via minimum Hamming
    column distance over block-diagonal GF(q)-transforms ("lemma")."""
    layout.check(C.n)
    F = C.field
    data = C.sliding(j).data
    nblocks = layout.g * (j + 1)
    meter = Meter(budget)
    if route == "auto":
        route = "direct" if F.order ** (C.k * (j + 1)) <= min(meter.limit, 2**14) else "lemma"
    if route == "direct":
        size = F.order ** (C.k * (j + 1))
        if size > meter.limit:
            raise BudgetExceeded(f"{size} messages exceed budget {meter.limit}")
        win = SumRankLayout(nblocks, layout.r)
        return min(sum_rank_weight(v, win, F)
                   for v in _enumerate_window_codewords(F, data, C.k, meter))
    if route != "lemma":
        raise ValueError(f"unknown route {route!r}")
    reps = _gl_coset_reps(F.subfield, layout.r)
    if len(reps) ** nblocks > meter.limit:
        raise BudgetExceeded(f"{len(reps)}^{nblocks} transforms exceed budget")
    upper = singleton_column_bound(C.n, C.k, j)
    best = None
    for combo in itertools.product(reps, repeat=nblocks):
        M = _block_diag_transform(F, data, combo, layout.r) if layout.r > 1 else data
        d, _ = _min_window_support(F, M, C.k, C.n * (j + 1), meter, upper, block=C.n)
        if best is None or d < best:
            best = d
        if layout.r == 1:
            break
    return best


def is_j_MSRD(C: ConvCode, j: int, layout: SumRankLayout, route: str = "auto",
              budget: int | None = None) -> bool:
    C.require_non_catastrophic()
    return sum_rank_column_distance(C, j, layout, route, budget) == singleton_column_bound(C.n, C.k, j)


def block_min_distance(F, M: Sequence[Sequence[int]], budget: int | None = None) -> int:
    """Minimum distance of the block code spanned by the rows of M (0 if zero code)."""
    M = [list(r) for r in M]
    if not M or linalg.rank(F, M) == 0:
        return 0
    n = len(M[0])
    full = linalg.rank(F, M)
    cols = linalg.transpose(M)
    meter = Meter(budget)
    for e in range(1, n + 1):
        for S in itertools.combinations(range(n), e):
            meter.spend()
            out = [cols[c] for c in range(n) if c not in S]
            if not out or linalg.rank(F, out) < full:
                return e
    return n


def iter_codewords_window(C: ConvCode, j: int, budget: int | None = None) -> Iterable[list[int]]:
    return _enumerate_window_codewords(C.field, C.sliding(j).data, C.k, Meter(budget))
