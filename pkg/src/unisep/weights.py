"""Weight combinatorics for root systems of types A, C and D.

Weights are integer vectors in the basis of fundamental weights.  The
epsilon-basis uses the Bourbaki conventions: omega_i = e_1 + ... + e_i, except
for the two spin weights of D_n which carry halves.  For A_n the epsilon
vector has n+1 entries and is only defined up to adding a constant vector.

Torus restriction works with integer exponents only: a maximal torus of
SL_{n+1}(q) labelled by a partition [n_1, ..., n_k] is a product of cyclic
groups of orders q^{n_j} - 1 cut down by the determinant condition, and a
weight restricts to an integer vector of exponents modulo those orders.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

TYPES = ("A", "C", "D")
MAX_RANK = 8
ORBIT_GUARD = math.factorial(8) * 2 ** 8


class PreconditionError(ValueError):
    pass


class OrbitTooLarge(ValueError):
    pass


class CoprimalityViolated(ValueError):
    pass


class RadicalSigma(ValueError):
    """sigma_q lies in the root lattice, so the dominance chain is not claimed."""


# -- root systems -----------------------------------------------------------------------------------


@dataclass(frozen=True)
class RootSystem:
    type: str
    n: int

    def __post_init__(self):
        if self.type not in TYPES:
            raise ValueError(f"unsupported type {self.type!r}")
        low = {"A": 1, "C": 2, "D": 4}[self.type]
        if not low <= self.n <= MAX_RANK:
            raise PreconditionError(f"{self.type}{self.n}: rank must be in {low}..{MAX_RANK}")

    @property
    def cartan(self) -> np.ndarray:
        return _cartan(self.type, self.n)

    @property
    def eps_len(self) -> int:
        return self.n + 1 if self.type == "A" else self.n

    def simple_root(self, i: int) -> "Weight":
        """alpha_i (1-based) in omega-coordinates: row i of the Cartan matrix."""
        return Weight(self, tuple(int(a) for a in self.cartan[i - 1]))

    def weight(self, *omega: int) -> "Weight":
        return Weight(self, tuple(omega))

    def zero(self) -> "Weight":
        return Weight(self, (0,) * self.n)

    def fundamental(self, i: int, k: int = 1) -> "Weight":
        v = [0] * self.n
        v[i - 1] = k
        return Weight(self, tuple(v))

    def sigma(self, q: int) -> "Weight":
        """(q-1)(omega_1 + ... + omega_n), the highest weight of the Steinberg module."""
        return Weight(self, (q - 1,) * self.n)

    def weyl_order(self) -> int:
        n = self.n
        return {"A": math.factorial(n + 1), "C": 2 ** n * math.factorial(n),
                "D": 2 ** (n - 1) * math.factorial(n)}[self.type]

    def to_eps(self, omega) -> tuple:
        n = self.n
        lam = list(omega)
        if self.type == "A":
            return tuple(sum(lam[k:]) for k in range(n)) + (0,)
        if self.type == "C":
            return tuple(sum(lam[k:]) for k in range(n))
        # D_n: omega_{n-1} = (1/2)(e_1+..+e_{n-1}-e_n), omega_n = (1/2)(e_1+..+e_n)
        half = Fraction(lam[n - 2] + lam[n - 1], 2)
        out = [Fraction(sum(lam[k:n - 2])) + half for k in range(n - 1)]
        out.append(Fraction(lam[n - 1] - lam[n - 2], 2))
        return tuple(_simplify(a) for a in out)

    def from_eps(self, eps) -> tuple[int, ...]:
        a = [Fraction(x) for x in eps]
        n = self.n
        if len(a) != self.eps_len:
            raise ValueError(f"expected {self.eps_len} epsilon coordinates")
        if self.type in ("A", "C"):
            lam = [a[i] - a[i + 1] for i in range(n - 1)]
            lam.append(a[n - 1] - a[n] if self.type == "A" else a[n - 1])
        else:
            lam = [a[i] - a[i + 1] for i in range(n - 1)]
            lam.append(a[n - 2] + a[n - 1])
        if any(x.denominator != 1 for x in lam):
            raise ValueError(f"{tuple(eps)} is not an integral weight")
        return tuple(int(x) for x in lam)


def _simplify(a: Fraction):
    return int(a) if a.denominator == 1 else a


@lru_cache(maxsize=None)
def _cartan(t: str, n: int) -> np.ndarray:
    """Bourbaki Cartan matrix, entry (i, j) = <alpha_i, alpha_j^vee>."""
    c = 2 * np.eye(n, dtype=np.int64)
    for i in range(n - 1):
        c[i, i + 1] = c[i + 1, i] = -1
    if t == "C":
        c[n - 1, n - 2] = -2
    elif t == "D":
        c[n - 2, n - 1] = c[n - 1, n - 2] = 0
        c[n - 3, n - 1] = c[n - 1, n - 3] = -1
    c.setflags(write=False)
    return c


@lru_cache(maxsize=None)
def _cartan_inverse(t: str, n: int) -> tuple[tuple[Fraction, ...], ...]:
    a = [[Fraction(int(x)) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(_cartan(t, n))]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return tuple(tuple(row[n:]) for row in a)


@dataclass(frozen=True)
class Weight:
    rs: RootSystem
    omega: tuple[int, ...]

    def __post_init__(self):
        if len(self.omega) != self.rs.n:
            raise ValueError(f"expected {self.rs.n} omega-coordinates, got {len(self.omega)}")
        object.__setattr__(self, "omega", tuple(int(x) for x in self.omega))

    @classmethod
    def from_eps(cls, rs: RootSystem, eps) -> "Weight":
        return cls(rs, rs.from_eps(eps))

    @property
    def eps(self) -> tuple:
        return self.rs.to_eps(self.omega)

    def _check(self, other: "Weight"):
        if other.rs != self.rs:
            raise ValueError("weights from different root systems")

    def __add__(self, other: "Weight") -> "Weight":
        self._check(other)
        return Weight(self.rs, tuple(a + b for a, b in zip(self.omega, other.omega)))

    def __sub__(self, other: "Weight") -> "Weight":
        self._check(other)
        return Weight(self.rs, tuple(a - b for a, b in zip(self.omega, other.omega)))

    def __mul__(self, k: int) -> "Weight":
        return Weight(self.rs, tuple(k * a for a in self.omega))

    __rmul__ = __mul__

    def is_dominant(self) -> bool:
        return all(a >= 0 for a in self.omega)

    def __repr__(self) -> str:
        return f"Weight({self.rs.type}{self.rs.n}, {list(self.omega)})"


# -- dominance and the root lattice -------------------------------------------------------------------


def root_coefficients(lam: Weight) -> tuple[Fraction, ...]:
    """c with lam = sum c_i alpha_i, i.e. c = lam . C^{-1}."""
    inv = _cartan_inverse(lam.rs.type, lam.rs.n)
    n = lam.rs.n
    return tuple(sum((lam.omega[i] * inv[i][j] for i in range(n)), Fraction(0)) for j in range(n))


def is_radical(lam: Weight) -> bool:
    return all(c.denominator == 1 for c in root_coefficients(lam))


def dominance(lam: Weight, mu: Weight) -> bool:
    """lam >= mu: the difference is a nonnegative integer combination of simple roots."""
    lam._check(mu)
    return all(c.denominator == 1 and c >= 0 for c in root_coefficients(lam - mu))


def strictly_dominates(lam: Weight, mu: Weight) -> bool:
    return lam != mu and dominance(lam, mu)


# -- Weyl orbits -----------------------------------------------------------------------------------


def _distinct_permutations(vals):
    """Distinct permutations of a multiset, in lexicographic order."""
    items = sorted(vals)
    n = len(items)
    out = [tuple(items)]
    a = items[:]
    while True:
        i = n - 2
        while i >= 0 and a[i] >= a[i + 1]:
            i -= 1
        if i < 0:
            return out
        j = n - 1
        while a[j] <= a[i]:
            j -= 1
        a[i], a[j] = a[j], a[i]
        a[i + 1:] = reversed(a[i + 1:])
        out.append(tuple(a))


def weyl_orbit_eps(rs: RootSystem, eps) -> list[tuple]:
    """The W-orbit of an epsilon-vector: permutations (A), signed permutations (C),
    permutations with an even number of sign changes (D)."""
    if rs.weyl_order() > ORBIT_GUARD:
        raise OrbitTooLarge(f"|W({rs.type}{rs.n})| = {rs.weyl_order()} exceeds the guard")
    if rs.type == "A":
        return _distinct_permutations(eps)
    out = set()
    for p in _distinct_permutations([abs(x) for x in eps]):
        nz = [k for k, x in enumerate(p) if x != 0]
        for signs in itertools.product((1, -1), repeat=len(nz)):
            if rs.type == "D" and len(nz) == rs.n and signs.count(-1) % 2:
                continue
            v = list(p)
            for k, s in zip(nz, signs):
                v[k] = s * v[k]
            out.add(tuple(v))
    return sorted(out)


def weyl_orbit(lam: Weight) -> list[Weight]:
    rs = lam.rs
    return sorted((Weight.from_eps(rs, e) for e in weyl_orbit_eps(rs, lam.eps)), key=lambda w: w.omega)


def dominant_representative(lam: Weight) -> Weight:
    rs = lam.rs
    e = list(lam.eps)
    if rs.type == "A":
        return Weight.from_eps(rs, sorted(e, reverse=True))
    neg = sum(1 for x in e if x < 0)
    d = sorted((abs(x) for x in e), reverse=True)
    if rs.type == "D" and neg % 2 and d[-1] != 0:
        d[-1] = -d[-1]
    return Weight.from_eps(rs, d)


def is_module_weight(highest: Weight, mu: Weight) -> bool:
    """Characteristic-zero rule: mu is a weight of the irreducible module with
    highest weight ``highest`` iff its dominant W-conjugate is dominated by it."""
    if not highest.is_dominant():
        raise PreconditionError("highest weight must be dominant")
    return dominance(highest, dominant_representative(mu))


# -- maximal tori of SL_{n+1}(q) ---------------------------------------------------------------------


@dataclass(frozen=True)
class TorusLabel:
    partition: tuple[int, ...]
    q: int

    def __post_init__(self):
        p = tuple(int(x) for x in self.partition)
        if not p or any(x < 1 for x in p):
            raise ValueError("partition parts must be positive")
        if self.q < 2:
            raise ValueError("q must be at least 2")
        object.__setattr__(self, "partition", p)

    @property
    def size(self) -> int:
        return sum(self.partition)

    def blocks(self) -> list[range]:
        out, s = [], 0
        for part in self.partition:
            out.append(range(s, s + part))
            s += part
        return out


def partitions(n: int, largest: int | None = None):
    """Partitions of n with parts in nonincreasing order."""
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in partitions(n - k, k):
            yield (k,) + rest


def block_exponents(eps, label: TorusLabel) -> list[tuple[int, int]]:
    """(exponent, modulus) per block: mu(d_j) = zeta_j^exponent with zeta_j of order q^{n_j}-1."""
    a = [Fraction(x) for x in eps]
    if len(a) != label.size:
        raise ValueError(f"weight has {len(a)} epsilon-coordinates, torus acts on {label.size}")
    if any(x.denominator != 1 for x in a):
        raise ValueError("torus evaluation needs integral epsilon-coordinates")
    q = label.q
    out = []
    for blk in label.blocks():
        mod = q ** len(blk) - 1
        out.append((sum(int(a[pos]) * q ** k for k, pos in enumerate(blk)) % mod, mod))
    return out


def torus_restriction_trivial(eps, label: TorusLabel, per_block: bool = False) -> bool:
    """Whether the character with epsilon-coordinates ``eps`` is trivial on the
    determinant-one torus labelled by ``label``.

    The full torus is a product of cyclic groups F_{q^{n_j}}^*; its determinant-one
    part is the kernel of the product of norms.  A character of the product is
    trivial on that kernel iff it is a power of the norm character, i.e. each
    block exponent equals m (q^{n_j}-1)/(q-1) for one common m mod q-1.  With
    ``per_block`` each block exponent must vanish on its own (the full torus).
    """
    ex = block_exponents(eps, label)
    if per_block:
        return all(e == 0 for e, _ in ex)
    q = label.q
    return any(all(e == (m * (mod // (q - 1))) % mod for e, mod in ex) for m in range(q - 1))


def n10_count(i: int, label: TorusLabel) -> int:
    """Number of W-conjugates of (q-1) omega_i that restrict trivially to the torus."""
    n = label.size - 1
    if not 1 <= i <= n:
        raise PreconditionError(f"i must be in 1..{n}")
    rs = RootSystem("A", n)
    lam = rs.fundamental(i, label.q - 1)
    return sum(torus_restriction_trivial(e, label) for e in weyl_orbit_eps(rs, lam.eps))


def induced_char_value(i: int, partition, N: int) -> int:
    """Value of the permutation character of S_N on the cosets of S_i x S_{N-i}
    at an element of cycle type ``partition``: fixed i-subsets, counted by brute force."""
    partition = tuple(partition)
    if sum(partition) != N:
        raise ValueError("partition must sum to N")
    if N > MAX_RANK:
        raise PreconditionError("brute force limited to N <= 8")
    perm = list(range(N))
    s = 0
    for part in partition:
        for k in range(part):
            perm[s + k] = s + (k + 1) % part
        s += part
    count = 0
    for sub in itertools.combinations(range(N), i):
        ss = set(sub)
        if all(perm[x] in ss for x in sub):
            count += 1
    return count


@dataclass(frozen=True)
class WeightCheck:
    holds: bool
    witness: Weight | None = None
    source: str = ""


def n16_check(n: int, q: int, i: int, label: TorusLabel) -> WeightCheck:
    """Look for a conjugate of kappa_i = (q-1)omega_i + omega_1 + omega_n or of
    lambda_i = (q-1)omega_i that restricts trivially to the torus."""
    if n < 2:
        raise PreconditionError("n must be at least 2")
    if label.size != n + 1 or label.q != q:
        raise ValueError("torus label does not match (n, q)")
    rs = RootSystem("A", n)
    lam = rs.fundamental(i, q - 1)
    kappa = lam + rs.fundamental(1) + rs.fundamental(n)
    for name, w in (("kappa", kappa), ("lambda", lam)):
        for e in weyl_orbit_eps(rs, w.eps):
            if torus_restriction_trivial(e, label):
                return WeightCheck(True, Weight.from_eps(rs, e), name)
    return WeightCheck(False)


def _smallest_prime(m: int) -> int:
    return next(p for p in range(2, m + 1) if m % p == 0)


def p31_check(n: int, m: int, i: int, char: int | None = None) -> WeightCheck:
    """Some W-conjugate of omega_1 + (m-1)omega_i + omega_n is trivial on
    t_m = diag(zeta, zeta^m, ..., zeta^{m^n}) with zeta of order (m^{n+1}-1)/(m-1)."""
    if not 1 <= i <= n:
        raise PreconditionError(f"i must be in 1..{n}")
    if m < 2:
        raise PreconditionError("m must be at least 2")
    r = (m ** (n + 1) - 1) // (m - 1)
    p = _smallest_prime(m) if char is None else char
    if math.gcd(r, p) != 1:
        raise CoprimalityViolated(f"order {r} of t_m is divisible by the characteristic {p}")
    rs = RootSystem("A", n)
    mu = rs.fundamental(1) + rs.fundamental(i, m - 1) + rs.fundamental(n)
    for e in weyl_orbit_eps(rs, mu.eps):
        if sum(a * m ** u for u, a in enumerate(e)) % r == 0:
            return WeightCheck(True, Weight.from_eps(rs, e), "mu")
    return WeightCheck(False)


def _cd_system(t: str, n: int) -> RootSystem:
    if t == "C" and n < 2:
        raise PreconditionError("type C needs n > 1")
    if t == "D" and n < 4:
        raise PreconditionError("type D needs n > 3")
    if t not in ("C", "D"):
        raise PreconditionError("only types C and D")
    return RootSystem(t, n)


def aa1_check(t: str, n: int, q: int, max_multiple: int = 64) -> dict[str, int | None]:
    """Least m >= 1 with m(q+1)omega_1, m(q-1)omega_1 and m((q-1)omega_1 + omega_2)
    weights of the sigma_q module; None when no multiple up to the bound works."""
    rs = _cd_system(t, n)
    if t == "C" and (n, q) == (2, 2):
        raise PreconditionError("(n, q) = (2, 2) excluded for type C")
    sig = rs.sigma(q)
    fams = {
        "(q+1)w1": rs.fundamental(1, q + 1),
        "(q-1)w1": rs.fundamental(1, q - 1),
        "(q-1)w1+w2": rs.fundamental(1, q - 1) + rs.fundamental(2),
    }
    out: dict[str, int | None] = {}
    for name, w in fams.items():
        out[name] = next((m for m in range(1, max_multiple + 1) if is_module_weight(sig, m * w)), None)
    return out


def aa1_holds(t: str, n: int, q: int) -> bool:
    return all(m is not None for m in aa1_check(t, n, q).values())


def rr1_chain(t: str, n: int, q: int) -> bool:
    """sigma_q > (q+1)omega_1 > (q-1)omega_1 + omega_2 > (q-1)omega_1, strictly."""
    rs = _cd_system(t, n)
    if t == "C" and (n, q) == (2, 2):
        raise PreconditionError("(n, q) = (2, 2) excluded for type C")
    if q % 2:
        raise PreconditionError("q must be even")
    sig = rs.sigma(q)
    if is_radical(sig):
        raise RadicalSigma(f"sigma_{q} is radical for {t}{n}")
    chain = [sig, rs.fundamental(1, q + 1), rs.fundamental(1, q - 1) + rs.fundamental(2), rs.fundamental(1, q - 1)]
    return all(strictly_dominates(a, b) for a, b in zip(chain, chain[1:]))
