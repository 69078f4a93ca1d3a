"""Exact dense linear algebra over a finite field.

Matrices are lists of rows of ints (field elements in the integer encoding of
``F``).  Nothing here is specific to one field class: ``F`` supplies
``add/sub/mul/inv/neg``.
"""

from __future__ import annotations

from typing import Sequence

Matrix = list


def zeros(r: int, c: int) -> Matrix:
    return [[0] * c for _ in range(r)]


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def transpose(M: Sequence[Sequence[int]]) -> Matrix:
    if not M:
        return []
    return [list(col) for col in zip(*M)]


def matmul(F, A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> Matrix:
    if not A:
        return []
    inner = len(B)
    cols = len(B[0]) if B else 0
    fadd, fmul = F.add, F.mul
    out = []
    for row in A:
        acc = [0] * cols
        for t in range(inner):
            a = row[t]
            if a == 0:
                continue
            brow = B[t]
            for c in range(cols):
                b = brow[c]
                if b:
                    acc[c] = fadd(acc[c], fmul(a, b))
        out.append(acc)
    return out


def vecmat(F, v: Sequence[int], M: Sequence[Sequence[int]]) -> list[int]:
    """Row vector times matrix."""
    cols = len(M[0]) if M else 0
    acc = [0] * cols
    fadd, fmul = F.add, F.mul
    for a, row in zip(v, M):
        if a == 0:
            continue
        for c in range(cols):
            b = row[c]
            if b:
                acc[c] = fadd(acc[c], fmul(a, b))
    return acc


def matvec(F, M: Sequence[Sequence[int]], v: Sequence[int]) -> list[int]:
    fadd, fmul = F.add, F.mul
    out = []
    for row in M:
        acc = 0
        for a, b in zip(row, v):
            if a and b:
                acc = fadd(acc, fmul(a, b))
        out.append(acc)
    return out


def rref(F, M: Sequence[Sequence[int]], ncols: int | None = None) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form.

    Pivots are searched only among the first ``ncols`` columns (default: all),
    which makes augmented systems convenient.  Returns ``(R, pivot_columns)``.
    """
    R = [list(r) for r in M]
    if not R:
        return R, []
    width = len(R[0])
    if ncols is None:
        ncols = width
    fsub, fmul, finv = F.sub, F.mul, F.inv
    pivots: list[int] = []
    prow = 0
    nrows = len(R)
    for col in range(ncols):
        if prow == nrows:
            break
        piv = next((i for i in range(prow, nrows) if R[i][col]), None)
        if piv is None:
            continue
        R[prow], R[piv] = R[piv], R[prow]
        row = R[prow]
        c = row[col]
        if c != 1:
            ic = finv(c)
            row = [fmul(ic, x) if x else 0 for x in row]
            R[prow] = row
        for i in range(nrows):
            if i != prow:
                f = R[i][col]
                if f:
                    other = R[i]
                    R[i] = [fsub(x, fmul(f, y)) if y else x for x, y in zip(other, row)]
        pivots.append(col)
        prow += 1
    return R, pivots


def rank(F, M: Sequence[Sequence[int]]) -> int:
    rows = [list(r) for r in M if any(r)]
    if not rows:
        return 0
    width = len(rows[0])
    fsub, fmul, finv = F.sub, F.mul, F.inv
    r = 0
    n = len(rows)
    for col in range(width):
        if r == n:
            break
        piv = next((i for i in range(r, n) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        ic = finv(prow[col])
        for i in range(r + 1, n):
            f = rows[i][col]
            if f:
                f = fmul(f, ic)
                other = rows[i]
                rows[i] = [fsub(x, fmul(f, y)) if y else x for x, y in zip(other, prow)]
        r += 1
    return r


def solve(F, A: Sequence[Sequence[int]], b: Sequence[int]) -> list[int] | None:
    """A particular solution of ``A x = b`` (free variables zero), or None."""
    ncols = len(A[0]) if A else 0
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    R, pivots = rref(F, aug, ncols)
    for row in R[len(pivots):]:
        if row[ncols]:
            return None
    x = [0] * ncols
    for i, col in enumerate(pivots):
        x[col] = R[i][ncols]
    return x


def nullspace(F, A: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    """Basis (as rows) of the right nullspace {x : A x = 0}."""
    if ncols is None:
        ncols = len(A[0]) if A else 0
    if not A:
        return identity(ncols)
    R, pivots = rref(F, A)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [0] * ncols
        x[f] = 1
        for i, col in enumerate(pivots):
            x[col] = F.neg(R[i][f])
        basis.append(x)
    return basis


def left_nullspace(F, A: Sequence[Sequence[int]]) -> Matrix:
    """Basis (as rows) of {y : y A = 0}."""
    return nullspace(F, transpose(A), len(A))


def inverse(F, A: Sequence[Sequence[int]]) -> Matrix:
    n = len(A)
    aug = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(A)]
    R, pivots = rref(F, aug, n)
    if len(pivots) < n:
        raise ValueError("matrix is singular")
    return [row[n:] for row in R]


def det(F, A: Sequence[Sequence[int]]) -> int:
    M = [list(r) for r in A]
    n = len(M)
    d = 1
    for col in range(n):
        piv = next((i for i in range(col, n) if M[i][col]), None)
        if piv is None:
            return 0
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            d = F.neg(d)
        d = F.mul(d, M[col][col])
        ic = F.inv(M[col][col])
        for i in range(col + 1, n):
            f = M[i][col]
            if f:
                f = F.mul(f, ic)
                M[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(M[i], M[col])]
    return d


def select_columns(M: Sequence[Sequence[int]], cols: Sequence[int]) -> Matrix:
    return [[row[c] for c in cols] for row in M]
