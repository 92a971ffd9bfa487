"""Finite fields of order at most 16.

Elements are small integers.  For q = p^k the integer ``sum(c_i * p**i)``
encodes the polynomial ``sum(c_i * g**i)`` in the fixed generator ``g`` (a root
of the Conway polynomial listed in ``CONWAY``).  For prime q the code is the
residue itself.  In characteristic 2 addition is therefore plain XOR.

The text format used by matrix files indexes extension-field elements by
powers of the generator: digit 0 is zero and digit ``k >= 1`` is ``g**(k-1)``.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

SUPPORTED_ORDERS = (2, 3, 4, 5, 7, 8, 9, 11, 13, 16)

# Conway polynomials, coefficients low -> high, monic.  Degree-1 entries are
# x - (least primitive root).
CONWAY: dict[int, tuple[int, ...]] = {
    2: (1, 1),
    3: (1, 1),
    5: (3, 1),
    7: (4, 1),
    11: (9, 1),
    13: (11, 1),
    4: (1, 1, 1),
    8: (1, 1, 0, 1),
    9: (2, 2, 1),
    16: (1, 1, 0, 0, 1),
}

_DIGITS = "0123456789abcdef"


class FieldError(ValueError):
    pass


def _factor_prime_power(q: int) -> tuple[int, int]:
    for p in (2, 3, 5, 7, 11, 13):
        if q % p == 0:
            k, r = 0, q
            while r % p == 0:
                r //= p
                k += 1
            if r != 1:
                break
            return p, k
    raise FieldError(f"unsupported field order {q}")


class GF:
    """The field with ``q`` elements (use :func:`field` to get the shared instance)."""

    def __init__(self, q: int):
        if q not in SUPPORTED_ORDERS:
            raise FieldError(f"unsupported field order {q}; expected one of {SUPPORTED_ORDERS}")
        p, k = _factor_prime_power(q)
        self.q = q
        self.p = p
        self.degree = k
        self.conway = CONWAY[q]
        self._build_tables()
        self._verify_axioms()

    # -- construction -------------------------------------------------------

    def _digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.degree):
            out.append(a % self.p)
            a //= self.p
        return out

    def _undigits(self, ds) -> int:
        a = 0
        for c in reversed(ds):
            a = a * self.p + c
        return a

    def _build_tables(self) -> None:
        q, p, k = self.q, self.p, self.degree
        add = np.zeros((q, q), dtype=np.uint8)
        for a in range(q):
            da = self._digits(a)
            for b in range(q):
                db = self._digits(b)
                add[a, b] = self._undigits([(x + y) % p for x, y in zip(da, db)])
        # multiplication by the generator, then powers
        if k == 1:
            gen = (-self.conway[0]) % p
            exp = [1]
            for _ in range(q - 2):
                exp.append(exp[-1] * gen % p)
        else:
            low = [(-c) % p for c in self.conway[:-1]]  # g^k = sum low[i] g^i
            exp = [1]
            cur = [1] + [0] * (k - 1)
            for _ in range(q - 2):
                carry = cur[-1]
                cur = [0] + cur[:-1]
                cur = [(c + carry * l) % p for c, l in zip(cur, low)]
                exp.append(self._undigits(cur))
        if len(set(exp)) != q - 1:
            raise FieldError(f"defining polynomial for q={q} is not primitive")
        log = [0] * q
        for i, e in enumerate(exp):
            log[e] = i
        mul = np.zeros((q, q), dtype=np.uint8)
        for a in range(1, q):
            for b in range(1, q):
                mul[a, b] = exp[(log[a] + log[b]) % (q - 1)]
        self.add_table = add
        self.mul_table = mul
        self.neg_table = np.array([int(np.nonzero(add[a] == 0)[0][0]) for a in range(q)], dtype=np.uint8)
        self.sub_table = add[:, self.neg_table]
        inv = np.zeros(q, dtype=np.uint8)
        for a in range(1, q):
            inv[a] = exp[(-log[a]) % (q - 1)]
        self.inv_table = inv
        self.exp = tuple(exp)
        self.log = tuple(log)
        self.generator = exp[1] if q > 2 else 1
        # python-level copies for scalar loops
        self._add = add.tolist()
        self._mul = mul.tolist()
        self._neg = self.neg_table.tolist()
        self._inv = inv.tolist()

    def _verify_axioms(self) -> None:
        q = self.q
        add, mul = self.add_table, self.mul_table
        r = np.arange(q)
        if not (np.array_equal(add, add.T) and np.array_equal(mul, mul.T)):
            raise FieldError("tables not commutative")
        if not (np.array_equal(add[0], r) and np.array_equal(mul[1], r)):
            raise FieldError("identity elements wrong")
        for a in range(q):
            # associativity and distributivity, exhaustive over pairs with a fixed third element
            if not np.array_equal(add[add[a][:, None], r[None, :]], add[a][add]):
                raise FieldError("addition not associative")
            if not np.array_equal(mul[mul[a][:, None], r[None, :]], mul[a][mul]):
                raise FieldError("multiplication not associative")
            if not np.array_equal(mul[a][add], add[mul[a][:, None], mul[a][None, :]]):
                raise FieldError("distributivity fails")
        if any(mul[a, self.inv_table[a]] != 1 for a in range(1, q)):
            raise FieldError("inverse table wrong")

    # -- scalar arithmetic --------------------------------------------------

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def add(self, a: int, b: int) -> int:
        return self._add[a][b]

    def sub(self, a: int, b: int) -> int:
        return self._add[a][self._neg[b]]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def mul(self, a: int, b: int) -> int:
        return self._mul[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return self._inv[a]

    def div(self, a: int, b: int) -> int:
        return self._mul[a][self.inv(b)]

    def pow(self, a: int, n: int) -> int:
        if a == 0:
            return 0 if n > 0 else 1
        return self.exp[(self.log[a] * n) % (self.q - 1)]

    def frobenius(self, a: int, times: int = 1) -> int:
        """a -> a^(p^times)."""
        return self.pow(a, self.p ** times)

    def elements(self) -> range:
        return range(self.q)

    def from_int(self, n: int) -> int:
        """Image of an integer under Z -> F_q."""
        n %= self.p
        return n  # prime-field codes coincide with residues

    # -- text encoding ------------------------------------------------------

    def to_digit(self, a: int) -> str:
        if self.degree == 1:
            return _DIGITS[a]
        return _DIGITS[0 if a == 0 else self.log[a] + 1]

    def from_digit(self, ch: str) -> int:
        try:
            d = _DIGITS.index(ch.lower())
        except ValueError:
            raise FieldError(f"bad field digit {ch!r}") from None
        if d >= self.q:
            raise FieldError(f"digit {ch!r} out of range for GF({self.q})")
        if self.degree == 1:
            return d
        return 0 if d == 0 else self.exp[d - 1]

    def __repr__(self) -> str:
        return f"GF({self.q})"

    def __eq__(self, other) -> bool:
        return isinstance(other, GF) and other.q == self.q

    def __hash__(self) -> int:
        return hash(("GF", self.q))

    def __reduce__(self):
        return (field, (self.q,))


@lru_cache(maxsize=None)
def field(q: int) -> GF:
    return GF(q)


GF2 = field(2)
