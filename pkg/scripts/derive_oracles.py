"""Independent oracles for the constants frozen into the test suite.

Each value is recomputed here by a method that shares no code with the
package's arithmetic (bit-level GF(2^8) products, trial division,
exhaustive enumeration).  Run: python scripts/derive_oracles.py
"""

from __future__ import annotations

import argparse
import itertools

import numpy as np


def gf2_polymod(a: int, m: int) -> int:
    dm = m.bit_length() - 1
    while a and a.bit_length() - 1 >= dm:
        a ^= m << (a.bit_length() - 1 - dm)
    return a


def gf2_irreducible_trial(f: int) -> bool:
    d = f.bit_length() - 1
    return all(gf2_polymod(f, g) for g in range(2, 1 << (d // 2 + 1)))


def smallest_binary_irreducible(d: int) -> int:
    # low-to-high coefficient order == integer order of the reversed word; compare by tuple
    cands = [f for f in range(1 << d, 1 << (d + 1)) if f & 1 or d == 1]
    key = lambda f: tuple((f >> i) & 1 for i in range(d + 1))[::-1]  # noqa: E731
    cands.sort(key=lambda f: [(f >> i) & 1 for i in reversed(range(d))])
    for f in cands:
        if gf2_irreducible_trial(f):
            return f
    raise RuntimeError


def mul256(a: int, b: int, mod: int = 0x11B) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a & 0x100:
            a ^= mod
    return r


def small_field(p: int, mod: tuple):
    """GF(p^d) elements as coefficient tuples with naive multiplication."""
    d = len(mod) - 1
    elems = list(itertools.product(range(p), repeat=d))

    def mul(x, y):
        prod = [0] * (2 * d - 1)
        for i, a in enumerate(x):
            for j, b in enumerate(y):
                prod[i + j] = (prod[i + j] + a * b) % p
        for i in range(2 * d - 2, d - 1, -1):
            c = prod[i]
            if c:
                for j in range(d + 1):
                    prod[i - d + j] = (prod[i - d + j] - c * mod[j]) % p
        return tuple(prod[:d])

    return elems, mul


def first_primitive_normal(p: int, mod: tuple):
    elems, mul = small_field(p, mod)
    d = len(mod) - 1
    one = (1,) + (0,) * (d - 1)
    order = p**d - 1

    def enc(x):
        return sum(c * p**i for i, c in enumerate(x))

    for x in sorted(elems, key=enc):
        if not any(x):
            continue
        y, k = x, 1
        while y != one:
            y, k = mul(y, x), k + 1
        if k != order:
            continue
        conj = [x]
        for _ in range(d - 1):
            z = one
            for _ in range(p):
                z = mul(z, conj[-1])
            conj.append(z)
        # independence over GF(p): no nontrivial combination vanishes
        dep = any(any(c) and not any(sum(ci * v[t] for ci, v in zip(c, conj)) % p for t in range(d))
                  for c in itertools.product(range(p), repeat=d))
        if not dep:
            return enc(x)


def sliding_min_weight_gf256(coeffs, n: int, j: int) -> int:
    """Min window weight over all messages (k = 1) by vectorized enumeration."""
    table = np.array([[mul256(a, b) for b in range(256)] for a in range(256)], dtype=np.uint8)
    best = None
    u0 = np.arange(1, 256)
    for rest in itertools.product(range(256), repeat=j):
        us = [u0] + [np.full_like(u0, x) for x in rest]
        w = np.zeros(len(u0), dtype=np.int64)
        for t in range(j + 1):
            for c in range(n):
                acc = np.zeros(len(u0), dtype=np.uint8)
                for h in range(t + 1):
                    if h < len(coeffs):
                        acc ^= table[us[t - h], coeffs[h][c]]
                w += acc != 0
        m = int(w.min())
        best = m if best is None else min(best, m)
    return best


if __name__ == "__main__":
    argparse.ArgumentParser(description=__doc__.splitlines()[0]).parse_args()
    print("smallest degree-8 binary irreducible:", hex(smallest_binary_irreducible(8)))
    print("first primitive normal GF(4):", first_primitive_normal(2, (1, 1, 1)))
    print("first primitive normal GF(9):", first_primitive_normal(3, (1, 0, 1)))
    print("first primitive normal GF(256):", first_primitive_normal(2, tuple((0x11B >> i) & 1 for i in range(9))))
    # tiny MSRD seed: alpha = 33, T_j = alpha^(2^j); A_1 = T_2 / T_1 in char 2
    a = 33
    T = [a, mul256(a, a), mul256(mul256(a, a), mul256(a, a))]
    inv = {x: y for x in range(1, 256) for y in range(1, 256) if mul256(x, y) == 1}
    A1 = mul256(T[2], inv[T[1]])
    print("T0..T2:", T, "A1:", A1, "B0:", T[0], "B1:", T[1] ^ mul256(A1, T[0]))
    try:
        from lrcc.lrcc import build_construction1
        from lrcc.msrd import MsrdParams, build_msrd_outer
        C, _ = build_msrd_outer(MsrdParams(2, 1, 1, 2, 8))
        X = build_construction1(C, 1, 2, 2)
        co = [[row[0] for row in X.code.G.coeff(h)] for h in range(X.code.memory + 1)]
        co = [[X.code.G.coeff(h)[0][c] for c in range(4)] for h in range(X.code.memory + 1)]
        for j in range(3):
            print(f"global d_{j}^c by enumeration:", sliding_min_weight_gf256(co, 4, j))
    except ImportError:
        pass
