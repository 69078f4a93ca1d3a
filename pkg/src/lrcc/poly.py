"""Univariate polynomials over a finite field.

A polynomial is a tuple of field elements (ints), lowest degree first, with
no trailing zeros.  The zero polynomial is the empty tuple.  Every function
takes the coefficient field ``F`` as its first argument; ``F`` only needs
the integer-level arithmetic interface shared by all field classes
(``add``, ``sub``, ``neg``, ``mul``, ``inv``).
"""

from __future__ import annotations

from typing import Sequence

Poly = tuple

ZERO: Poly = ()


def trim(coeffs: Sequence[int]) -> Poly:
    end = len(coeffs)
    while end and coeffs[end - 1] == 0:
        end -= 1
    return tuple(coeffs[:end])


def const(c: int) -> Poly:
    return (c,) if c else ZERO


def monomial(c: int, d: int) -> Poly:
    """c * D^d."""
    return (0,) * d + (c,) if c else ZERO


def deg(a: Poly) -> int:
    """Degree, with -1 for the zero polynomial."""
    return len(a) - 1


def lead(a: Poly) -> int:
    return a[-1] if a else 0


def coeff(a: Poly, i: int) -> int:
    return a[i] if 0 <= i < len(a) else 0


def add(F, a: Poly, b: Poly) -> Poly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = F.add(out[i], c)
    return trim(out)


def sub(F, a: Poly, b: Poly) -> Poly:
    out = list(a) + [0] * max(0, len(b) - len(a))
    for i, c in enumerate(b):
        out[i] = F.sub(out[i], c)
    return trim(out)


def neg(F, a: Poly) -> Poly:
    return tuple(F.neg(c) for c in a)


def scale(F, c: int, a: Poly) -> Poly:
    if c == 0:
        return ZERO
    return tuple(F.mul(c, x) for x in a)


def shift(a: Poly, d: int) -> Poly:
    """Multiply by D^d."""
    return (0,) * d + a if a else ZERO


def mul(F, a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return ZERO
    out = [0] * (len(a) + len(b) - 1)
    fadd, fmul = F.add, F.mul
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] = fadd(out[i + j], fmul(x, y))
    return trim(out)


def divmod_(F, a: Poly, b: Poly) -> tuple[Poly, Poly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return ZERO, a
    rem = list(a)
    db = len(b) - 1
    inv_lead = F.inv(b[-1])
    quo = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = rem[i]
        if c == 0:
            continue
        f = F.mul(c, inv_lead)
        quo[i - db] = f
        for j, y in enumerate(b):
            if y:
                rem[i - db + j] = F.sub(rem[i - db + j], F.mul(f, y))
    return trim(quo), trim(rem[:db])


def mod(F, a: Poly, b: Poly) -> Poly:
    return divmod_(F, a, b)[1]


def monic(F, a: Poly) -> Poly:
    if not a or a[-1] == 1:
        return a
    return scale(F, F.inv(a[-1]), a)


def gcd(F, a: Poly, b: Poly) -> Poly:
    """Monic greatest common divisor (zero only if both inputs are zero)."""
    while b:
        a, b = b, mod(F, a, b)
    return monic(F, a)


def divides(F, a: Poly, b: Poly) -> bool:
    """True when ``a`` divides ``b``."""
    if not a:
        return not b
    return not mod(F, b, a)


def powmod(F, a: Poly, e: int, m: Poly) -> Poly:
    result = mod(F, const(1), m)
    base = mod(F, a, m)
    while e:
        if e & 1:
            result = mod(F, mul(F, result, base), m)
        e >>= 1
        if e:
            base = mod(F, mul(F, base, base), m)
    return result


def evaluate(F, a: Poly, x: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = F.add(F.mul(acc, x), c)
    return acc


def is_irreducible(F, f: Poly) -> bool:
    """Ben-Or test: f is irreducible iff gcd(x^(Q^i) - x, f) = 1 for i <= deg/2."""
    d = deg(f)
    if d < 1:
        return False
    if d == 1:
        return True
    x = (0, 1)
    h = x
    for _ in range(d // 2):
        h = powmod(F, h, F.order, f)
        if deg(gcd(F, sub(F, h, x), f)) > 0:
            return False
    return True
