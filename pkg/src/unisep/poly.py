"""Univariate polynomials over GF(q) and their factorization.

Factorization runs square-free decomposition, distinct-degree splitting and
Cantor-Zassenhaus equal-degree splitting (trace map in characteristic 2).
The equal-degree step draws from a ``random.Random`` seeded per call, so
results are reproducible.  Over GF(2) the arithmetic works on Python ints
used as coefficient bit masks, which is much faster than coefficient lists.
"""

from __future__ import annotations

import random
from typing import Iterable

from .fields import GF, field


# ---------------------------------------------------------------------------
# GF(2)[x] on ints: bit i is the coefficient of x^i


def _x2_mul(a: int, b: int) -> int:
    if a.bit_length() < b.bit_length():
        a, b = b, a
    r = 0
    while b:
        low = b & -b
        r ^= a << (low.bit_length() - 1)
        b ^= low
    return r


def _x2_divmod(a: int, b: int) -> tuple[int, int]:
    if b == 0:
        raise ZeroDivisionError("polynomial division by zero")
    db = b.bit_length()
    q = 0
    while a.bit_length() >= db:
        s = a.bit_length() - db
        q ^= 1 << s
        a ^= b << s
    return q, a


def _x2_mod(a: int, b: int) -> int:
    db = b.bit_length()
    while a.bit_length() >= db:
        a ^= b << (a.bit_length() - db)
    return a


def _x2_sqr(a: int) -> int:
    # spread bits: squaring is linear in characteristic 2
    r, i = 0, 0
    while a:
        if a & 1:
            r |= 1 << (2 * i)
        a >>= 1
        i += 1
    return r


def _x2_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, _x2_mod(a, b)
    return a


# ---------------------------------------------------------------------------


class Poly:
    """Polynomial with coefficients (low -> high) in ``field``; immutable."""

    __slots__ = ("field", "coeffs", "_bits")

    def __init__(self, fld: GF, coeffs: Iterable[int]):
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        self.field = fld
        self.coeffs: tuple[int, ...] = tuple(int(c) for c in cs)
        self._bits = None

    # -- constructors --------------------------------------------------------

    @classmethod
    def x(cls, fld: GF) -> "Poly":
        return cls(fld, (0, 1))

    @classmethod
    def one(cls, fld: GF) -> "Poly":
        return cls(fld, (1,))

    @classmethod
    def zero(cls, fld: GF) -> "Poly":
        return cls(fld, ())

    @classmethod
    def from_bits(cls, bits: int) -> "Poly":
        p = cls(field(2), [(bits >> i) & 1 for i in range(bits.bit_length())])
        p._bits = bits
        return p

    @property
    def bits(self) -> int:
        if self.field.q != 2:
            raise ValueError("bit form only exists over GF(2)")
        if self._bits is None:
            b = 0
            for i, c in enumerate(self.coeffs):
                if c:
                    b |= 1 << i
            self._bits = b
        return self._bits

    # -- basic properties ------------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def monic(self) -> "Poly":
        if self.is_zero() or self.leading == 1:
            return self
        inv = self.field.inv(self.leading)
        return self.scale(inv)

    def scale(self, c: int) -> "Poly":
        F = self.field
        return Poly(F, [F.mul(a, c) for a in self.coeffs])

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.field.q, self.coeffs))

    def __lt__(self, other: "Poly") -> bool:
        return (self.degree, self.coeffs[::-1]) < (other.degree, other.coeffs[::-1])

    def __repr__(self) -> str:
        return f"Poly(GF({self.field.q}), {list(self.coeffs)})"

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        F = self.field
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            cs = "" if (c == 1 and i > 0) else (str(c) if F.degree == 1 else ("1" if c == 1 else f"g^{F.log[c]}"))
            if i == 0:
                terms.append(cs or "1")
            elif i == 1:
                terms.append(f"{cs}*x" if cs else "x")
            else:
                terms.append(f"{cs}*x^{i}" if cs else f"x^{i}")
        return " + ".join(terms)

    # -- arithmetic ----------------------------------------------------------

    def _check(self, other: "Poly") -> None:
        if self.field != other.field:
            raise ValueError("polynomials over different fields")

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        if self.field.q == 2:
            return Poly.from_bits(self.bits ^ other.bits)
        F = self.field
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        a = a + (0,) * (n - len(a))
        b = b + (0,) * (n - len(b))
        return Poly(F, [F.add(x, y) for x, y in zip(a, b)])

    def __neg__(self) -> "Poly":
        F = self.field
        return Poly(F, [F.neg(c) for c in self.coeffs])

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        self._check(other)
        if self.field.q == 2:
            return Poly.from_bits(_x2_mul(self.bits, other.bits))
        F = self.field
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly.zero(F)
        out = [0] * (len(a) + len(b) - 1)
        mul, add = F._mul, F._add
        for i, x in enumerate(a):
            if x == 0:
                continue
            row = mul[x]
            for j, y in enumerate(b):
                if y:
                    out[i + j] = add[out[i + j]][row[y]]
        return Poly(F, out)

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if self.field.q == 2:
            q, r = _x2_divmod(self.bits, other.bits)
            return Poly.from_bits(q), Poly.from_bits(r)
        F = self.field
        r = list(self.coeffs)
        db = other.degree
        inv = F.inv(other.leading)
        bc = other.coeffs
        quot = [0] * max(0, len(r) - db)
        mul, sub = F._mul, F.sub
        for s in range(len(r) - 1 - db, -1, -1):
            c = r[s + db]
            if c == 0:
                continue
            f = mul[c][inv]
            quot[s] = f
            row = mul[f]
            for j, y in enumerate(bc):
                if y:
                    r[s + j] = sub(r[s + j], row[y])
        return Poly(F, quot), Poly(F, r[:db] if db > 0 else [])

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        if self.field.q == 2:
            return Poly.from_bits(_x2_mod(self.bits, other.bits))
        return divmod(self, other)[1]

    def __pow__(self, n: int) -> "Poly":
        out = Poly.one(self.field)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def pow_mod(self, n: int, modulus: "Poly") -> "Poly":
        if self.field.q == 2:
            m = modulus.bits
            out, base = 1, _x2_mod(self.bits, m)
            while n:
                if n & 1:
                    out = _x2_mod(_x2_mul(out, base), m)
                base = _x2_mod(_x2_sqr(base), m)
                n >>= 1
            return Poly.from_bits(out)
        out = Poly.one(self.field)
        base = self % modulus
        while n:
            if n & 1:
                out = (out * base) % modulus
            base = (base * base) % modulus
            n >>= 1
        return out

    def derivative(self) -> "Poly":
        F = self.field
        return Poly(F, [F.mul(F.from_int(i), c) for i, c in enumerate(self.coeffs)][1:])

    def __call__(self, x: int) -> int:
        F = self.field
        acc = 0
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, x), c)
        return acc

    def coefficient_sum(self) -> int:
        F = self.field
        s = 0
        for c in self.coeffs:
            s = F.add(s, c)
        return s

    def evaluate_matrix(self, m):
        """p(m) by Horner's rule; ``m`` is any square matrix type of this package."""
        n = m.nrows
        acc = m.zeros_like()
        ident = m.identity_like()
        for c in reversed(self.coeffs):
            acc = acc @ m
            if c:
                acc = acc + ident.scale(c)
        return acc

    def pth_root(self) -> "Poly":
        """g with g^p = self; requires every exponent to be a multiple of p."""
        F = self.field
        p = F.p
        cs = self.coeffs
        if any(c for i, c in enumerate(cs) if i % p):
            raise ValueError("not a p-th power")
        # a^(1/p) = a^(p^(k-1)) in GF(p^k)
        return Poly(F, [F.frobenius(c, F.degree - 1) for c in cs[::p]])


def gcd(a: Poly, b: Poly) -> Poly:
    if a.field.q == 2:
        return Poly.from_bits(_x2_gcd(a.bits, b.bits))
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


# ---------------------------------------------------------------------------
# factorization


def squarefree_decomposition(f: Poly) -> list[tuple[Poly, int]]:
    """Pairs (g, m), g square-free, pairwise coprime, f = lead * prod g^m."""
    F = f.field
    f = f.monic()
    out: list[tuple[Poly, int]] = []
    if f.degree < 1:
        return out
    df = f.derivative()
    if df.is_zero():
        for g, m in squarefree_decomposition(f.pth_root()):
            out.append((g, m * F.p))
        return out
    c = gcd(f, df)
    w = f // c
    i = 1
    one = Poly.one(F)
    while w != one:
        y = gcd(w, c)
        z = w // y
        if z != one:
            out.append((z.monic(), i))
        i += 1
        w = y
        c = c // y
    if c != one:
        for g, m in squarefree_decomposition(c.monic().pth_root()):
            out.append((g, m * F.p))
    return out


def distinct_degree(f: Poly, max_degree: int | None = None) -> list[tuple[Poly, int]]:
    """Split square-free monic f into products of equal-degree irreducibles.

    With ``max_degree`` the search stops early and the unsplit remainder is
    returned with degree tag 0.
    """
    F = f.field
    out = []
    x = Poly.x(F)
    h = x
    d = 0
    one = Poly.one(F)
    while f.degree >= 2 * (d + 1):
        d += 1
        if max_degree is not None and d > max_degree:
            out.append((f, 0))
            return out
        h = h.pow_mod(F.q, f)
        g = gcd(f, h - x)
        if g != one:
            out.append((g, d))
            f = f // g
            h = h % f
    if f.degree >= 1:
        if max_degree is not None and f.degree > max_degree:
            out.append((f, 0))
        else:
            out.append((f, f.degree))
    return out


def _random_poly(F: GF, deg: int, rng: random.Random) -> Poly:
    return Poly(F, [rng.randrange(F.q) for _ in range(deg)])


def equal_degree(f: Poly, d: int, rng: random.Random) -> list[Poly]:
    """Factor monic square-free f whose irreducible factors all have degree d."""
    F = f.field
    if f.degree == d:
        return [f]
    one = Poly.one(F)
    while True:
        a = _random_poly(F, f.degree, rng)
        if a.degree < 1:
            continue
        if F.p == 2:
            # absolute trace to GF(2): a + a^2 + ... + a^(2^(k d - 1))
            t = a % f
            acc = t
            for _ in range(F.degree * d - 1):
                t = (t * t) % f
                acc = acc + t
            b = acc
        else:
            b = a.pow_mod((F.q ** d - 1) // 2, f) - one
        g = gcd(f, b)
        if 0 < g.degree < f.degree:
            return equal_degree(g, d, rng) + equal_degree(f // g, d, rng)


def factor(p: Poly, seed: int = 0) -> list[tuple[Poly, int]]:
    """Monic irreducible factors with multiplicities, sorted by degree then coefficients."""
    if p.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    rng = random.Random(seed)
    out: dict[Poly, int] = {}
    for g, m in squarefree_decomposition(p):
        for h, d in distinct_degree(g):
            for irr in equal_degree(h.monic(), d, rng):
                out[irr] = out.get(irr, 0) + m
    return sorted(out.items(), key=lambda t: t[0])


def is_irreducible(p: Poly) -> bool:
    if p.degree < 1:
        return False
    f = p.monic()
    if gcd(f, f.derivative()).degree > 0:
        return False
    parts = distinct_degree(f)
    return len(parts) == 1 and parts[0][1] == f.degree


def product(factors: Iterable[tuple[Poly, int]], fld: GF) -> Poly:
    out = Poly.one(fld)
    for g, m in factors:
        out = out * g ** m
    return out
