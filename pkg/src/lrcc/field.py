"""Finite fields GF(p) -> GF(q) -> GF(q^m) built as an explicit tower.

Elements are plain ints.  An element of an extension of degree ``d`` over a
base field of order ``Q`` is ``sum(c_i * Q**i)`` where ``c_i`` are its
coordinates (base-field ints) in the power basis of the extension generator.
For the tower this is the little-endian base-p digit string with the
subfield digit varying fastest, which is also the serialization format.

Heavy code (linear algebra, polynomial matrices, distance searches) works on
ints directly through the ``add/sub/mul/inv`` methods; ``FieldElement`` is a
thin operator-overloading wrapper for interactive use.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import sympy

from . import linalg
from . import poly

TABLE_LIMIT_BINARY = 1 << 16
TABLE_LIMIT_GENERIC = 1 << 12
ADD_TABLE_LIMIT = 256
DEFAULT_FACTOR_CUTOFF = 10**6


class FactorizationError(ValueError):
    """Trial division could not fully factor a group order."""


def prime_factors(n: int, cutoff: int = DEFAULT_FACTOR_CUTOFF) -> list[int]:
    """Distinct prime factors of ``n`` by trial division up to ``cutoff``.

    A leftover cofactor is accepted only if it is prime; otherwise the
    factorization is declared out of reach.
    """
    out = []
    d = 2
    while d * d <= n:
        if d > cutoff:
            break
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        if not sympy.isprime(n):
            raise FactorizationError(
                f"cofactor {n} left after trial division up to {cutoff}")
        out.append(n)
    return out


class PrimeField:
    """GF(p) on the ints 0..p-1."""

    degree = 1

    def __init__(self, p: int):
        if not isinstance(p, int) or p < 2 or not sympy.isprime(p):
            raise ValueError(f"characteristic must be prime, got {p!r}")
        self.p = p
        self.order = p
        self.char = p

    def __repr__(self) -> str:
        return f"GF({self.p})"

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def neg(self, a: int) -> int:
        return -a % self.p

    def mul(self, a: int, b: int) -> int:
        return a * b % self.p

    def inv(self, a: int) -> int:
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.p - 2, self.p)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return pow(self.inv(a), -e, self.p)
        return pow(a, e, self.p)

    def elements(self) -> range:
        return range(self.p)


def _clmul_mod(a: int, b: int, modulus: int, d: int) -> int:
    r = 0
    top = 1 << d
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a & top:
            a ^= modulus
    return r


class ExtensionField:
    """base[x] / (modulus) for a monic irreducible ``modulus`` (low-first)."""

    def __init__(self, base, modulus: Sequence[int]):
        modulus = tuple(modulus)
        if len(modulus) < 2 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree >= 1")
        self.base = base
        self.modulus = modulus
        self.degree = len(modulus) - 1
        self.char = base.char
        self.order = base.order ** self.degree
        self._bq = base.order
        self._exp = self._log = None
        self._add_table = self._neg_table = None
        binary = isinstance(base, PrimeField) and base.p == 2
        if binary:
            self._modint = sum(c << i for i, c in enumerate(modulus))
        self._mul_impl = self._mul_binary if binary else self._mul_generic
        limit = TABLE_LIMIT_BINARY if binary else TABLE_LIMIT_GENERIC
        if self.order <= limit:
            self._build_log_tables()
        if self.char != 2 and self.order <= ADD_TABLE_LIMIT:
            self._add_table = [[self._add_digits(a, b) for b in range(self.order)]
                               for a in range(self.order)]
            self._neg_table = [self._neg_digits(a) for a in range(self.order)]

    def __repr__(self) -> str:
        return f"GF({self.order})"

    # -- coordinates -----------------------------------------------------
    def digits(self, x: int) -> list[int]:
        """Coordinates over the base field, lowest power first."""
        Q = self._bq
        out = []
        for _ in range(self.degree):
            x, r = divmod(x, Q)
            out.append(r)
        return out

    def from_digits(self, ds: Sequence[int]) -> int:
        x = 0
        for c in reversed(ds):
            x = x * self._bq + c
        return x

    def elements(self) -> range:
        return range(self.order)

    # -- additive structure ------------------------------------------------
    def _add_digits(self, a: int, b: int) -> int:
        p = self.char
        out, place = 0, 1
        while a or b:
            a, da = divmod(a, p)
            b, db = divmod(b, p)
            out += ((da + db) % p) * place
            place *= p
        return out

    def _neg_digits(self, a: int) -> int:
        p = self.char
        out, place = 0, 1
        while a:
            a, da = divmod(a, p)
            out += (-da % p) * place
            place *= p
        return out

    def add(self, a: int, b: int) -> int:
        if self.char == 2:
            return a ^ b
        if self._add_table is not None:
            return self._add_table[a][b]
        return self._add_digits(a, b)

    def neg(self, a: int) -> int:
        if self.char == 2:
            return a
        if self._neg_table is not None:
            return self._neg_table[a]
        return self._neg_digits(a)

    def sub(self, a: int, b: int) -> int:
        if self.char == 2:
            return a ^ b
        return self.add(a, self.neg(b))

    # -- multiplicative structure -----------------------------------------
    def _mul_binary(self, a: int, b: int) -> int:
        return _clmul_mod(a, b, self._modint, self.degree)

    def _mul_generic(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        B = self.base
        prod = poly.mul(B, poly.trim(self.digits(a)), poly.trim(self.digits(b)))
        r = poly.mod(B, prod, self.modulus)
        return self.from_digits(list(r) + [0] * (self.degree - len(r)))

    def _build_log_tables(self) -> None:
        n = self.order - 1
        factors = prime_factors(n) if n > 1 else []
        mul = self._mul_impl

        def slow_pow(x: int, e: int) -> int:
            r = 1
            while e:
                if e & 1:
                    r = mul(r, x)
                x = mul(x, x)
                e >>= 1
            return r

        gen = 1
        if n > 1:
            gen = next(x for x in range(2, self.order)
                       if all(slow_pow(x, n // l) != 1 for l in factors))
        exp = [0] * (2 * n)
        log = [0] * self.order
        x = 1
        for i in range(n):
            exp[i] = x
            log[x] = i
            x = mul(x, gen)
        for i in range(n, 2 * n):
            exp[i] = exp[i - n]
        self._exp, self._log = exp, log

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self._exp is not None:
            return self._exp[self._log[a] + self._log[b]]
        return self._mul_impl(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self._exp is not None:
            n = self.order - 1
            return self._exp[(n - self._log[a]) % n]
        return self.pow(a, self.order - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        if a == 0:
            return 0 if e else 1
        if self._exp is not None:
            n = self.order - 1
            return self._exp[(self._log[a] * e) % n]
        r = 1
        while e:
            if e & 1:
                r = self._mul_impl(r, a)
            a = self._mul_impl(a, a)
            e >>= 1
        return r


def _first_irreducible(base, d: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree d over ``base``.

    Candidates are ordered by the integer sum(c_i * Q**i) of their non-leading
    coefficients; polynomials with zero constant term are skipped (for d = 1
    this excludes ``x`` itself, so GF(p) is presented as GF(p)[x]/(x+1)).
    """
    Q = base.order
    for code in range(Q**d):
        low = []
        c = code
        for _ in range(d):
            c, r = divmod(c, Q)
            low.append(r)
        if low[0] == 0:
            continue
        f = tuple(low) + (1,)
        if poly.is_irreducible(base, f):
            return f
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


class ExtField(ExtensionField):
    """GF(q^m) over GF(q), q = p^a, with an ordered GF(q)-basis.

    ``subfield`` is GF(q); its elements embed as the ints 0..q-1.  ``basis``
    defaults to the power basis 1, x, ..., x^(m-1).
    """

    def __init__(self, p: int, a: int, m: int,
                 f_sub: Sequence[int] | None = None,
                 f_ext: Sequence[int] | None = None,
                 basis: Sequence[int] | None = None):
        if a < 1 or m < 1:
            raise ValueError("field degrees must be positive")
        prime = PrimeField(p)
        self.p, self.a, self.m = p, a, m
        self.q = p**a
        self.f_sub = tuple(f_sub) if f_sub is not None else _first_irreducible(prime, a)
        if a == 1:
            sub = prime
        else:
            sub = ExtensionField(prime, self.f_sub)
        if not poly.is_irreducible(prime, self.f_sub) or len(self.f_sub) != a + 1:
            raise ValueError("f_sub must be irreducible of degree a")
        self.subfield = sub
        f_ext = tuple(f_ext) if f_ext is not None else _first_irreducible(sub, m)
        if len(f_ext) != m + 1 or not poly.is_irreducible(sub, f_ext):
            raise ValueError("f_ext must be irreducible of degree m over GF(q)")
        super().__init__(sub, f_ext)
        self.f_ext = f_ext
        if basis is None:
            self.basis = tuple(self.q**i for i in range(m))
            self._coord_inv = None
        else:
            self.basis = tuple(basis)
            C = [self.digits(b) for b in self.basis]
            if len(C) != m or linalg.rank(sub, C) != m:
                raise ValueError("basis is not GF(q)-linearly independent")
            self._coord_inv = linalg.inverse(sub, C)

    def __repr__(self) -> str:
        return f"GF({self.q}^{self.m})"

    @property
    def descriptor(self) -> tuple:
        return (self.p, self.a, self.m, self.f_sub, self.f_ext, self.basis)

    def __eq__(self, other) -> bool:
        return isinstance(other, ExtField) and self.descriptor == other.descriptor

    def __hash__(self) -> int:
        return hash(self.descriptor)

    def coordinates(self, x: int) -> list[int]:
        """GF(q)-coordinates of ``x`` in the ordered basis."""
        ds = self.digits(x)
        if self._coord_inv is None:
            return ds
        return linalg.vecmat(self.subfield, ds, self._coord_inv)

    def frobenius(self, x: int, i: int = 1) -> int:
        """x^(q^i), by i applications of y -> y^q."""
        for _ in range(i):
            x = self.pow(x, self.q)
        return x

    def element(self, value: int) -> "FieldElement":
        return FieldElement(self, value)

    @cached_property
    def power_basis(self) -> bool:
        return self._coord_inv is None


def field_build(p: int, a: int = 1, m: int = 1) -> ExtField:
    """Deterministic GF((p^a)^m) with lexicographically first moduli."""
    if not isinstance(p, int) or not sympy.isprime(p):
        raise ValueError(f"characteristic must be prime, got {p!r}")
    if a < 1 or m < 1:
        raise ValueError("degree must be at least 1")
    return ExtField(p, a, m)


def split_prime_power(q: int) -> tuple[int, int]:
    """q = p^a -> (p, a); ValueError if q is not a prime power."""
    f = sympy.factorint(q)
    if q < 2 or len(f) != 1:
        raise ValueError(f"{q} is not a prime power")
    (p, a), = f.items()
    return int(p), int(a)


@dataclass(frozen=True)
class FieldElement:
    field: ExtField
    value: int

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError("elements from different fields")
            return other.value
        if isinstance(other, int) and 0 <= other < self.field.order:
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return FieldElement(self.field, self.field.add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return FieldElement(self.field, self.field.sub(self.value, o))

    def __rsub__(self, other):
        o = self._coerce(other)
        return FieldElement(self.field, self.field.sub(o, self.value))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __mul__(self, other):
        o = self._coerce(other)
        return FieldElement(self.field, self.field.mul(self.value, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        return FieldElement(self.field, self.field.div(self.value, o))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.value, e))

    def __int__(self) -> int:
        return self.value

    def __bool__(self) -> bool:
        return self.value != 0

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.value))

    @property
    def coeffs(self) -> list[list[int]]:
        """m GF(q) coordinates, each as its a GF(p) digits."""
        F = self.field
        return [F.subfield.digits(c) if F.a > 1 else [c] for c in F.digits(self.value)]

    def __repr__(self) -> str:
        return f"{self.value}@{self.field!r}"


def frobenius(x: FieldElement, i: int) -> FieldElement:
    return FieldElement(x.field, x.field.frobenius(x.value, i))


def is_primitive(F: ExtField, x: int, factors: Iterable[int]) -> bool:
    n = F.order - 1
    return x != 0 and all(F.pow(x, n // l) != 1 for l in factors)


def is_normal(F: ExtField, x: int) -> bool:
    conj = [x]
    for _ in range(F.m - 1):
        conj.append(F.frobenius(conj[-1]))
    return linalg.rank(F.subfield, matrix_representation(conj, F)) == F.m


def find_primitive_normal(F: ExtField, cutoff: int = DEFAULT_FACTOR_CUTOFF,
                          start: int = 1) -> FieldElement:
    """First element (ascending integer order, from ``start``) that is primitive and normal."""
    n = F.order - 1
    factors = prime_factors(n, cutoff) if n > 1 else []
    for x in range(max(start, 1), F.order):
        if is_primitive(F, x, factors) and is_normal(F, x):
            return FieldElement(F, x)
    raise ValueError("no primitive normal element at or after start")


def matrix_representation(c: Sequence, field: ExtField | None = None) -> list[list[int]]:
    """m x s matrix over GF(q): column j holds the basis coordinates of c_j."""
    if field is None:
        fields = {e.field for e in c if isinstance(e, FieldElement)}
        if len(fields) != 1 or not all(isinstance(e, FieldElement) for e in c):
            raise ValueError("matrix_representation needs elements of one field")
        field = fields.pop()
    vals = []
    for e in c:
        if isinstance(e, FieldElement):
            if e.field != field:
                raise ValueError("mixed fields in matrix_representation")
            vals.append(e.value)
        else:
            vals.append(e)
    cols = [field.coordinates(v) for v in vals]
    return [[col[i] for col in cols] for i in range(field.m)]
