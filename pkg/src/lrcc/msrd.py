"""MSRD outer convolutional codes from Hankel matrices of Frobenius powers."""

from __future__ import annotations

from dataclasses import asdict, dataclass

from . import linalg
from .convcode import (
    ConvCode,
    L_parameter,
    SumRankLayout,
    code_from_generator,
    is_j_MSRD,
)
from .field import ExtField, find_primitive_normal, split_prime_power
from .polymat import PolyMatrix, right_kernel

DEFAULT_RETRIES = 8


class ConstructionError(ValueError):
    """Construction failed; ``residual`` carries diagnostic data."""

    def __init__(self, msg: str, residual=None):
        super().__init__(msg)
        self.residual = residual


@dataclass(frozen=True)
class MsrdParams:
    N: int
    k: int
    delta: int
    q: int
    m: int | None = None

    def __post_init__(self):
        if not 1 <= self.k < self.N:
            raise ValueError("need 1 <= k < N")
        if self.delta < 0 or self.delta % (self.N - self.k):
            raise ValueError("(N - k) must divide the degree")

    @property
    def nu(self) -> int:
        return self.delta // (self.N - self.k)

    @property
    def M(self) -> int:
        return max(self.N - self.k, self.k)

    @property
    def L(self) -> int:
        return L_parameter(self.delta, self.k, self.N - self.k)


def msrd_field_bound(q: int, M: int, L: int) -> int:
    """q^(M(L+2) - 1): extension degree that guarantees the construction."""
    return q ** (M * (L + 2) - 1)


def build_T(F: ExtField, alpha: int, M: int, j: int) -> list[list[int]]:
    """M x M Hankel matrix with entry (u, w) = alpha^(q^(Mj + u + w))."""
    base = F.frobenius(int(alpha), M * j)
    powers = [base]
    for _ in range(2 * M - 2):
        powers.append(F.frobenius(powers[-1], 1))
    return [[powers[u + w] for w in range(M)] for u in range(M)]


def _series_inverse(F, A: list, L: int, c: int) -> list:
    """Coefficients 0..L of A(D)^-1 for A_0 = I."""
    inv = [linalg.identity(c)]
    for j in range(1, L + 1):
        acc = linalg.zeros(c, c)
        for i in range(1, min(j, len(A) - 1) + 1):
            prod = linalg.matmul(F, A[i], inv[j - i])
            acc = [[F.sub(x, y) for x, y in zip(ra, rp)] for ra, rp in zip(acc, prod)]
        inv.append(acc)
    return inv


def _madd(F, X, Y):
    return [[F.add(a, b) for a, b in zip(rx, ry)] for rx, ry in zip(X, Y)]


def _solve_pade(F, T: list, nu: int, L: int, c: int, k: int):
    """Find A_1..A_nu with sum_{i=0}^{nu} A_i T_{j-i} = 0 for j = nu+1..L."""
    if L <= nu or nu == 0:
        return [linalg.identity(c)] + [linalg.zeros(c, c) for _ in range(nu)], None
    # row x of [A_1 .. A_nu] satisfies x . [T_{j-1}; ...; T_{j-nu}] = -(row of T_j)
    cols_blocks = []
    rhs_blocks = []
    for j in range(nu + 1, L + 1):
        stack = [row for i in range(1, nu + 1) for row in T[j - i]]
        cols_blocks.append(stack)
        rhs_blocks.append(T[j])
    Mbig = [sum((blk[r] for blk in cols_blocks), []) for r in range(c * nu)]
    system = linalg.transpose(Mbig)
    A = [linalg.identity(c)] + [linalg.zeros(c, c) for _ in range(nu)]
    for row in range(c):
        rhs = [F.neg(x) for blk in rhs_blocks for x in blk[row]]
        x = linalg.solve(F, system, rhs)
        if x is None:
            return None, {"row": row, "rhs": rhs}
        for i in range(nu):
            A[i + 1][row] = x[i * c:(i + 1) * c]
    return A, None


def build_msrd_outer(P: MsrdParams, override_m: bool = False,
                     retries: int = DEFAULT_RETRIES, alpha_start: int = 1):
    """Construct the outer code; returns (ConvCode, manifest dict).

    H(D) = (A(D), B(D)) with A_0 = I and A^-1 B matching sum_j T_j D^j
    through degree L.  The generator is a basic basis of the right kernel of H.
    """
    if P.m is None:
        raise ValueError("extension degree m must be set")
    bound = msrd_field_bound(P.q, P.M, P.L)
    if P.m < bound and not override_m:
        raise ValueError(f"m = {P.m} below the guaranteed bound {bound}; use override_m")
    p, a = split_prime_power(P.q)
    F = ExtField(p, a, P.m)
    c, k, nu, L, M = P.N - P.k, P.k, P.nu, P.L, P.M
    start = alpha_start
    last_residual = None
    for _ in range(retries):
        try:
            alpha = find_primitive_normal(F, start=start).value
        except ValueError as exc:
            raise ConstructionError(str(exc), last_residual) from exc
        start = alpha + 1
        T = [[row[:k] for row in build_T(F, alpha, M, j)[:c]] for j in range(L + 1)]
        A, residual = _solve_pade(F, T, nu, L, c, k)
        if A is None:
            last_residual = {"alpha": alpha, **residual}
            continue
        B = []
        for j in range(nu + 1):
            acc = linalg.zeros(c, k)
            for i in range(min(j, nu) + 1):
                acc = _madd(F, acc, linalg.matmul(F, A[i], T[j - i]))
            B.append(acc)
        # series check A^-1 B == sum T_j D^j mod D^(L+1)
        Ainv = _series_inverse(F, A, L, c)
        for j in range(L + 1):
            acc = linalg.zeros(c, k)
            for i in range(j + 1):
                if j - i <= nu:
                    acc = _madd(F, acc, linalg.matmul(F, Ainv[i], B[j - i]))
            if acc != T[j]:
                raise ConstructionError("power-series identity failed", {"alpha": alpha, "j": j})
        Apm = PolyMatrix.from_coeffs(F, A, (c, c))
        Bpm = PolyMatrix.from_coeffs(F, B, (c, k))
        H = PolyMatrix(F, tuple(ra + rb for ra, rb in zip(Apm.entries, Bpm.entries)))
        G = right_kernel(H).transpose()
        code = code_from_generator(F, G)
        if code.degree != P.delta or not code.basic:
            last_residual = {"alpha": alpha, "degree": code.degree, "basic": code.basic}
            continue
        manifest = {
            "params": asdict(P),
            "alpha": alpha,
            "A": Apm,
            "B": Bpm,
            "verified_up_to_j": None,
        }
        return code, manifest
    raise ConstructionError("no primitive normal element gave a valid construction",
                            last_residual)


def all_layouts(N: int) -> list[SumRankLayout]:
    """Every (g, r) with g * r = N, in decreasing g."""
    return [SumRankLayout(N // r, r) for r in range(1, N + 1) if N % r == 0]


def verify_msrd(C: ConvCode, layout: SumRankLayout, j: int, budget: int | None = None) -> bool:
    return is_j_MSRD(C, j, layout, budget=budget)


def empirical_min_m(N: int, k: int, delta: int, q: int, m_max: int,
                    m_min: int = 1, budget: int | None = None) -> int | None:
    """Smallest m in [m_min, m_max] where the construction is L-MSRD for all layouts."""
    for m in range(m_min, m_max + 1):
        P = MsrdParams(N, k, delta, q, m)
        try:
            code, _ = build_msrd_outer(P, override_m=True)
        except (ConstructionError, ValueError):
            continue
        if all(verify_msrd(code, lay, P.L, budget) for lay in all_layouts(N)):
            return m
    return None
