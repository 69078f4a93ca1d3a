"""Matrices over F[D]: row degrees, reduction, Smith form, kernels, sliding matrices."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

from . import linalg
from . import poly
from .poly import Poly


class RankDeficientError(ValueError):
    pass


@dataclass(frozen=True)
class PolyMatrix:
    """Rectangular matrix of polynomials (tuples of ints, low degree first)."""

    field: Any
    entries: tuple

    def __post_init__(self):
        ents = tuple(tuple(poly.trim(e) for e in row) for row in self.entries)
        if ents and len({len(r) for r in ents}) != 1:
            raise ValueError("ragged polynomial matrix")
        object.__setattr__(self, "entries", ents)

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def degree(self) -> int:
        return max((poly.deg(e) for row in self.entries for e in row), default=-1)

    @classmethod
    def from_coeffs(cls, field, coeffs: Sequence[Sequence[Sequence[int]]],
                    shape: tuple[int, int] | None = None) -> "PolyMatrix":
        """Build sum_h coeffs[h] D^h from constant matrices."""
        if shape is None:
            shape = (len(coeffs[0]), len(coeffs[0][0]) if coeffs[0] else 0)
        r, c = shape
        ents = [[tuple(coeffs[h][i][j] for h in range(len(coeffs))) for j in range(c)]
                for i in range(r)]
        return cls(field, tuple(tuple(row) for row in ents))

    @classmethod
    def constant(cls, field, M: Sequence[Sequence[int]]) -> "PolyMatrix":
        return cls(field, tuple(tuple(poly.const(x) for x in row) for row in M))

    @classmethod
    def identity(cls, field, n: int) -> "PolyMatrix":
        return cls.constant(field, linalg.identity(n))

    def coeff(self, h: int) -> list[list[int]]:
        return [[poly.coeff(e, h) for e in row] for row in self.entries]

    def coeffs(self) -> list[list[list[int]]]:
        """Constant coefficient matrices M_0, ..., M_deg."""
        return [self.coeff(h) for h in range(max(self.degree, 0) + 1)]

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix(self.field, tuple(zip(*self.entries)) if self.entries else ())

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        F = self.field
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        out = []
        for row in self.entries:
            new = []
            for j in range(other.cols):
                acc = poly.ZERO
                for t, a in enumerate(row):
                    if a:
                        b = other.entries[t][j]
                        if b:
                            acc = poly.add(F, acc, poly.mul(F, a, b))
                new.append(acc)
            out.append(tuple(new))
        return PolyMatrix(F, tuple(out))

    def select_columns(self, cols: Sequence[int]) -> "PolyMatrix":
        return PolyMatrix(self.field, tuple(tuple(row[c] for c in cols) for row in self.entries))

    def select_rows(self, rows: Sequence[int]) -> "PolyMatrix":
        return PolyMatrix(self.field, tuple(self.entries[r] for r in rows))

    def is_zero(self) -> bool:
        return all(not e for row in self.entries for e in row)


def row_degrees(G: PolyMatrix) -> list[int]:
    return [max((poly.deg(e) for e in row), default=-1) for row in G.entries]


def leading_row_matrix(G: PolyMatrix) -> list[list[int]]:
    """Coefficient of D^{d_i} in row i, for row degrees d_i."""
    return [[poly.coeff(e, d) for e in row] for row, d in zip(G.entries, row_degrees(G))]


def is_reduced(G: PolyMatrix) -> bool:
    if any(d < 0 for d in row_degrees(G)):
        return False
    return linalg.rank(G.field, leading_row_matrix(G)) == G.rows


def make_reduced(G: PolyMatrix) -> PolyMatrix:
    """Row-equivalent generator whose leading row coefficient matrix has full rank."""
    F = G.field
    rows = [list(r) for r in G.entries]
    while True:
        degs = [max((poly.deg(e) for e in row), default=-1) for row in rows]
        if any(d < 0 for d in degs):
            raise RankDeficientError("generator matrix is not of full rank")
        lead = [[poly.coeff(e, d) for e in row] for row, d in zip(rows, degs)]
        null = linalg.left_nullspace(F, lead)
        if not null:
            return PolyMatrix(F, tuple(tuple(r) for r in rows))
        c = null[0]
        i0 = max((i for i in range(len(rows)) if c[i]), key=lambda i: (degs[i], -i))
        inv = F.inv(c[i0])
        new = list(rows[i0])
        for i, ci in enumerate(c):
            if i == i0 or ci == 0:
                continue
            f = poly.monomial(F.mul(ci, inv), degs[i0] - degs[i])
            new = [poly.add(F, a, poly.mul(F, f, b)) for a, b in zip(new, rows[i])]
        rows[i0] = new


@dataclass
class _SmithState:
    F: Any
    S: list
    U: list
    Ui: list
    V: list
    Vi: list

    def row_add(self, i: int, j: int, p: Poly) -> None:
        """row_i += p * row_j."""
        F = self.F
        if not p:
            return
        for M in (self.S, self.Ui):
            M[i] = [poly.add(F, a, poly.mul(F, p, b)) for a, b in zip(M[i], M[j])]
        for row in self.U:
            row[j] = poly.sub(F, row[j], poly.mul(F, p, row[i]))

    def col_add(self, i: int, j: int, p: Poly) -> None:
        """col_i += p * col_j."""
        F = self.F
        if not p:
            return
        for M in (self.S, self.Vi):
            for row in M:
                row[i] = poly.add(F, row[i], poly.mul(F, p, row[j]))
        self.V[j] = [poly.sub(F, a, poly.mul(F, p, b)) for a, b in zip(self.V[j], self.V[i])]

    def row_swap(self, i: int, j: int) -> None:
        if i == j:
            return
        for M in (self.S, self.Ui):
            M[i], M[j] = M[j], M[i]
        for row in self.U:
            row[i], row[j] = row[j], row[i]

    def col_swap(self, i: int, j: int) -> None:
        if i == j:
            return
        for M in (self.S, self.Vi):
            for row in M:
                row[i], row[j] = row[j], row[i]
        self.V[i], self.V[j] = self.V[j], self.V[i]

    def row_scale(self, i: int, c: int) -> None:
        F = self.F
        ic = F.inv(c)
        for M in (self.S, self.Ui):
            M[i] = [poly.scale(F, c, a) for a in M[i]]
        for row in self.U:
            row[i] = poly.scale(F, ic, row[i])


def _ident(n: int) -> list:
    return [[(1,) if i == j else () for j in range(n)] for i in range(n)]


def _smith(M: PolyMatrix) -> _SmithState:
    F = M.field
    r, c = M.shape
    st = _SmithState(F, [list(row) for row in M.entries], _ident(r), _ident(r), _ident(c), _ident(c))
    S = st.S
    for t in range(min(r, c)):
        cand = [(poly.deg(S[i][j]), i, j) for i in range(t, r) for j in range(t, c) if S[i][j]]
        if not cand:
            break
        _, i, j = min(cand)
        st.row_swap(t, i)
        st.col_swap(t, j)
        while True:
            dirty = False
            for i in range(t + 1, r):
                if S[i][t]:
                    q, rem = poly.divmod_(F, S[i][t], S[t][t])
                    st.row_add(i, t, poly.neg(F, q))
                    dirty |= bool(rem)
            for j in range(t + 1, c):
                if S[t][j]:
                    q, rem = poly.divmod_(F, S[t][j], S[t][t])
                    st.col_add(j, t, poly.neg(F, q))
                    dirty |= bool(rem)
            if dirty:
                cand = [(poly.deg(S[i][t]), 0, i) for i in range(t + 1, r) if S[i][t]]
                cand += [(poly.deg(S[t][j]), 1, j) for j in range(t + 1, c) if S[t][j]]
                _, kind, idx = min(cand)
                if kind == 0:
                    st.row_swap(t, idx)
                else:
                    st.col_swap(t, idx)
                continue
            bad = next(((i, j) for i in range(t + 1, r) for j in range(t + 1, c)
                        if S[i][j] and not poly.divides(F, S[t][t], S[i][j])), None)
            if bad is None:
                break
            st.row_add(t, bad[0], (1,))
        if S[t][t][-1] != 1:
            st.row_scale(t, F.inv(S[t][t][-1]))
    return st


def smith_form(M: PolyMatrix) -> tuple[PolyMatrix, PolyMatrix, PolyMatrix]:
    """(U, Sigma, V) with M = U Sigma V, U and V unimodular, Sigma diagonal with
    monic invariant factors each dividing the next."""
    st = _smith(M)
    F = M.field
    pm = lambda X: PolyMatrix(F, tuple(tuple(r) for r in X))  # noqa: E731
    return pm(st.U), pm(st.S), pm(st.V)


def invariant_factors(M: PolyMatrix) -> list[Poly]:
    S = _smith(M).S
    return [S[i][i] for i in range(min(M.shape))]


def poly_rank(M: PolyMatrix) -> int:
    """Rank over the fraction field F(D)."""
    return sum(1 for f in invariant_factors(M) if f)


def basic_right_inverse(G: PolyMatrix) -> PolyMatrix | None:
    """A polynomial F(D) with G F = I, or None if G is not basic."""
    k, n = G.shape
    if k > n:
        raise ValueError("basic test needs k <= n")
    st = _smith(G)
    if any(st.S[i][i] != (1,) for i in range(k)):
        return None
    F = G.field
    Vi = PolyMatrix(F, tuple(tuple(r[:k]) for r in st.Vi))
    Ui = PolyMatrix(F, tuple(tuple(r) for r in st.Ui))
    return Vi @ Ui


def is_basic(G: PolyMatrix) -> bool:
    return basic_right_inverse(G) is not None


def right_kernel(M: PolyMatrix) -> PolyMatrix:
    """Columns form a basic basis of {x in F[D]^cols : M x = 0}."""
    st = _smith(M)
    rho = sum(1 for i in range(min(M.shape)) if st.S[i][i])
    return PolyMatrix(M.field, tuple(tuple(row[rho:]) for row in st.Vi))


def parity_check_from_generator(G: PolyMatrix, reduce: bool = True) -> PolyMatrix:
    """Full-rank basic H with {v : v H^T = 0} equal to the row module of G."""
    if not is_basic(G):
        raise ValueError("generator is not basic (catastrophic code); no polynomial parity check")
    H = right_kernel(G).transpose()
    if H.rows and reduce:
        H = make_reduced(H)
    return H


@dataclass(frozen=True)
class SlidingMatrix:
    j: int
    block_rows: int
    block_cols: int
    data: list

    def block(self, s: int, t: int) -> list[list[int]]:
        br, bc = self.block_rows, self.block_cols
        return [row[t * bc:(t + 1) * bc] for row in self.data[s * br:(s + 1) * br]]


def truncated_sliding(coeffs: Sequence[Sequence[Sequence[int]]], j: int,
                      shape: tuple[int, int] | None = None) -> SlidingMatrix:
    """Block upper-triangular Toeplitz matrix with block (s, t) = coeffs[t - s]."""
    if j < 0:
        raise ValueError("window index must be non-negative")
    if shape is None:
        shape = (len(coeffs[0]), len(coeffs[0][0]))
    br, bc = shape
    data = [[0] * ((j + 1) * bc) for _ in range((j + 1) * br)]
    for s in range(j + 1):
        for t in range(s, j + 1):
            h = t - s
            if h >= len(coeffs):
                continue
            Ch = coeffs[h]
            for a in range(br):
                row = data[s * br + a]
                src = Ch[a]
                for b in range(bc):
                    row[t * bc + b] = src[b]
    return SlidingMatrix(j, br, bc, data)


def restrict_columns(G: PolyMatrix, cols: Sequence[int]) -> PolyMatrix:
    cols = list(cols)
    if not cols:
        raise ValueError("empty coordinate set")
    if any(c < 0 or c >= G.cols for c in cols) or len(set(cols)) != len(cols):
        raise ValueError("coordinate set out of range or repeated")
    return G.select_columns(cols)
