"""Generator-defined groups: exhaustive enumeration, element orders, centers.

Permutations are tuples ``p`` with ``p[i]`` the image of point ``i``; they act
on the right, so the product ``x * y`` is ``i -> y[x[i]]``.  This matches the
row-vector convention of the matrix code: the permutation matrix of ``p`` sends
``e_i`` to ``e_p[i]`` and ``P(x) @ P(y) = P(x * y)``.

Enumeration is breadth first from the identity.  Inside a BFS layer elements
are ordered by the least generator index that reaches them, then by their
canonical bytes; each element remembers its parent and generator, so images in
any other representation can be computed one matrix product per element.
"""

from __future__ import annotations

import hashlib
import math
import random
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import batch as B
from .bitmatrix import BitMatrix
from .fields import GF, field as get_field
from .fqmatrix import SmallFieldMatrix

DEFAULT_CAP = 1 << 22
DEFAULT_ORDER_CAP = 10_000


class CapExceeded(RuntimeError):
    def __init__(self, cap: int, what: str = "group"):
        super().__init__(f"{what} exceeds cap {cap}")
        self.cap = cap


# -- permutations -------------------------------------------------------------------------


def perm_mul(x, y) -> tuple[int, ...]:
    return tuple(y[i] for i in x)


def perm_inverse(x) -> tuple[int, ...]:
    out = [0] * len(x)
    for i, j in enumerate(x):
        out[j] = i
    return tuple(out)


def perm_identity(n: int) -> tuple[int, ...]:
    return tuple(range(n))


def perm_from_cycles(n: int, *cycles, base: int = 0) -> tuple[int, ...]:
    """Permutation of ``range(n)`` from cycles given in ``base``-indexed points."""
    p = list(range(n))
    for cyc in cycles:
        cyc = [c - base for c in cyc]
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            p[a] = b
    return tuple(p)


def perm_cycles(x) -> list[list[int]]:
    seen = [False] * len(x)
    out = []
    for i in range(len(x)):
        if not seen[i]:
            cyc = []
            j = i
            while not seen[j]:
                seen[j] = True
                cyc.append(j)
                j = x[j]
            out.append(cyc)
    return out


def orbit_count(h, points: int | None = None) -> int:
    """Number of orbits of <h> on the points (cycles of h, fixed points included)."""
    h = tuple(int(v) for v in h)
    if points is not None and points != len(h):
        raise ValueError(f"permutation on {len(h)} points, expected {points}")
    return len(perm_cycles(h))


# -- domains: batched element layouts --------------------------------------------------------


class PermDomain:
    kind = "perm"

    def __init__(self, n: int):
        self.n = n
        self.degree = n
        self.dtype = np.uint8 if n <= 256 else np.uint16
        self.width = n * np.dtype(self.dtype).itemsize

    def encode(self, g) -> np.ndarray:
        return np.asarray(g, dtype=self.dtype)

    def decode(self, row) -> tuple[int, ...]:
        return tuple(int(v) for v in row)

    def identity(self) -> np.ndarray:
        return np.arange(self.n, dtype=self.dtype)[None, :]

    def mul_fixed(self, x, g):
        return B.perm_mul_fixed(x, g)

    def left_mul_fixed(self, g, x):
        return B.perm_left_mul_fixed(g, x)

    def mul(self, x, y):
        return B.perm_mul(x, y)

    def is_identity(self, x):
        return B.perm_is_identity(x)

    def canonical_bytes(self, x) -> np.ndarray:
        return np.ascontiguousarray(x).view(np.uint8).reshape(x.shape[0], self.width)

    def from_bytes(self, b: np.ndarray) -> np.ndarray:
        return np.ascontiguousarray(b).view(self.dtype).reshape(b.shape[0], self.n)


class F2Domain:
    kind = "matrix"

    def __init__(self, d: int):
        if d > 64:
            raise ValueError("batched GF(2) layout supports dimension <= 64")
        self.d = d
        self.degree = d
        self.field = get_field(2)
        self.width = d * ((d + 7) // 8)
        self._tables: dict[int, np.ndarray] = {}

    def encode(self, g: BitMatrix) -> np.ndarray:
        return g.rows[:, 0].copy()

    def decode(self, row) -> BitMatrix:
        return BitMatrix(np.asarray(row, dtype=np.uint64)[:, None], self.d)

    def identity(self) -> np.ndarray:
        return B.f2_identity_rows(self.d)[None, :]

    def _table(self, g):
        key = g.tobytes()
        t = self._tables.get(key)
        if t is None:
            t = B.f2_byte_tables(g)
            self._tables[key] = t
        return t

    def mul_fixed(self, x, g):
        return B.f2_mul_fixed(x, self._table(g))

    def left_mul_fixed(self, g, x):
        return B.f2_left_mul_fixed(g, x)

    def mul(self, x, y):
        return B.f2_mul(x, y)

    def is_identity(self, x):
        return B.f2_is_identity(x)

    def canonical_bytes(self, x):
        return B.f2_canonical_bytes(x, self.d)

    def from_bytes(self, b):
        return B.f2_from_canonical_bytes(b, self.d)

    def singular_minus_identity(self, x):
        return B.f2_singular(B.f2_minus_identity(x), self.d)


class FqDomain:
    kind = "matrix"

    def __init__(self, fld: GF, d: int):
        self.field = fld
        self.d = d
        self.degree = d
        self.width = d * d

    def encode(self, g: SmallFieldMatrix) -> np.ndarray:
        return g.data.copy()

    def decode(self, row) -> SmallFieldMatrix:
        return SmallFieldMatrix(self.field, np.asarray(row, dtype=np.uint8).copy())

    def identity(self):
        return np.eye(self.d, dtype=np.uint8)[None]

    def mul_fixed(self, x, g):
        return B.fq_mul_fixed(self.field, x, g)

    def left_mul_fixed(self, g, x):
        return B.fq_left_mul_fixed(self.field, g, x)

    def mul(self, x, y):
        return B.fq_mul(self.field, x, y)

    def is_identity(self, x):
        return B.fq_is_identity(x)

    def canonical_bytes(self, x):
        return np.ascontiguousarray(x).reshape(x.shape[0], self.width)

    def from_bytes(self, b):
        return np.ascontiguousarray(b).reshape(b.shape[0], self.d, self.d)

    def singular_minus_identity(self, x):
        return B.fq_singular(self.field, B.fq_minus_identity(self.field, x))


def domain_for(element) -> object:
    """Batched layout matching a sample element (matrix or permutation)."""
    if isinstance(element, BitMatrix):
        return F2Domain(element.nrows)
    if isinstance(element, SmallFieldMatrix):
        return FqDomain(element.field, element.nrows)
    return PermDomain(len(element))


# -- group specification ------------------------------------------------------------------------


@dataclass
class GroupSpec:
    name: str
    generators: list
    kind: str = dc_field(default="")
    meta: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        if not self.generators:
            raise ValueError("a group needs at least one generator")
        g0 = self.generators[0]
        kind = "perm" if isinstance(g0, (tuple, list, np.ndarray)) else "matrix"
        if self.kind and self.kind != kind:
            raise ValueError(f"generator type does not match kind {self.kind!r}")
        self.kind = kind
        if kind == "perm":
            self.generators = [tuple(int(v) for v in g) for g in self.generators]
            n = len(self.generators[0])
            for g in self.generators:
                if len(g) != n or sorted(g) != list(range(n)):
                    raise ValueError(f"{self.name}: generator is not a permutation of {n} points")
        else:
            d = g0.nrows
            for g in self.generators:
                if g.shape != (d, d) or g.field != g0.field:
                    raise ValueError(f"{self.name}: inconsistent generator shapes or fields")
                if not g.is_invertible():
                    raise ValueError(f"{self.name}: generator is not invertible")

    @property
    def degree(self) -> int:
        g = self.generators[0]
        return len(g) if self.kind == "perm" else g.nrows

    @property
    def q(self) -> int | None:
        return None if self.kind == "perm" else self.generators[0].field.q

    def identity(self):
        g = self.generators[0]
        return perm_identity(len(g)) if self.kind == "perm" else g.identity_like()

    def mul(self, x, y):
        return perm_mul(x, y) if self.kind == "perm" else x @ y

    def inverse(self, x):
        return perm_inverse(x) if self.kind == "perm" else x.inverse()

    def element_bytes(self, x) -> bytes:
        if self.kind == "perm":
            return bytes(PermDomain(len(x)).encode(x).tobytes())
        return x.tobytes()

    def spec_hash(self) -> str:
        h = hashlib.sha256()
        h.update(f"{self.name}|{self.kind}|{self.degree}|{self.q}|{len(self.generators)}".encode())
        for g in self.generators:
            h.update(self.element_bytes(g))
        return h.hexdigest()

    def domain(self):
        return domain_for(self.generators[0])


# -- enumeration -----------------------------------------------------------------------------------


def _keys(b: np.ndarray) -> np.ndarray:
    """Sortable keys whose order is the lexicographic order of the byte rows."""
    w = b.shape[1]
    if w <= 8:
        k = np.zeros(b.shape[0], dtype=np.uint64)
        for i in range(w):
            k = (k << np.uint64(8)) | b[:, i].astype(np.uint64)
        return k
    return np.ascontiguousarray(b).view(np.dtype((np.void, w))).ravel()


class ElementStore:
    """Fully enumerated group in canonical order, with its BFS spanning tree."""

    def __init__(self, spec: GroupSpec, domain, data, parent, gen, layer_starts):
        self.spec = spec
        self.domain = domain
        self.data = data
        self.parent = parent
        self.gen = gen
        self.layer_starts = layer_starts
        self._sorted_keys = None
        self._sorted_idx = None

    @property
    def order(self) -> int:
        return int(self.data.shape[0])

    def __len__(self) -> int:
        return self.order

    def element(self, i: int):
        return self.domain.decode(self.data[i])

    def __iter__(self):
        for i in range(self.order):
            yield self.element(i)

    def canonical_bytes(self) -> np.ndarray:
        return self.domain.canonical_bytes(self.data)

    def _lookup(self):
        if self._sorted_keys is None:
            keys = _keys(self.canonical_bytes())
            idx = np.argsort(keys, kind="stable")
            self._sorted_keys = keys[idx]
            self._sorted_idx = idx
        return self._sorted_keys, self._sorted_idx

    def index_batch(self, x: np.ndarray) -> np.ndarray:
        """Indices of batch elements in the store, -1 where absent."""
        sk, si = self._lookup()
        k = _keys(self.domain.canonical_bytes(x))
        pos = np.searchsorted(sk, k)
        pos_c = np.minimum(pos, len(sk) - 1)
        hit = (pos < len(sk)) & (sk[pos_c] == k)
        return np.where(hit, si[pos_c], -1)

    def index(self, element) -> int:
        return int(self.index_batch(self.domain.encode(element)[None])[0])

    def contains(self, element) -> bool:
        return self.index(element) >= 0

    def word(self, i: int) -> list[int]:
        """Generator indices spelling element i along the BFS tree."""
        out = []
        while self.parent[i] >= 0:
            out.append(int(self.gen[i]))
            i = int(self.parent[i])
        return out[::-1]

    def images(self, gen_images: list, domain=None) -> np.ndarray:
        """Batch of images of every element under the homomorphism fixed by generator images."""
        if len(gen_images) != len(self.spec.generators):
            raise ValueError("one image per generator required")
        dom = domain or domain_for(gen_images[0])
        enc = [dom.encode(g) for g in gen_images]
        first = dom.identity()
        out = np.empty((self.order,) + first.shape[1:], dtype=first.dtype)
        out[0] = first[0]
        for a, b in zip(self.layer_starts[:-1], self.layer_starts[1:]):
            if a == 0:
                continue
            gens = self.gen[a:b]
            par = self.parent[a:b]
            for gi in np.unique(gens):
                sel = np.flatnonzero(gens == gi) + a
                out[sel] = dom.mul_fixed(out[self.parent[sel]], enc[gi])
        return out

    def element_orders(self, cap: int = DEFAULT_ORDER_CAP) -> np.ndarray:
        return batch_orders(self.domain, self.data, cap)

    def max_element_order(self, cap: int = DEFAULT_ORDER_CAP) -> int:
        return int(self.element_orders(cap).max())

    def center(self) -> list:
        """Elements commuting with every generator."""
        dom = self.domain
        mask = np.ones(self.order, dtype=bool)
        for g in self.spec.generators:
            e = dom.encode(g)
            xg = dom.mul_fixed(self.data, e)
            gx = dom.left_mul_fixed(e, self.data)
            same = (xg.reshape(self.order, -1) == gx.reshape(self.order, -1)).all(axis=1)
            mask &= same
        return [self.element(int(i)) for i in np.flatnonzero(mask)]

    def check_closure(self, pairs: int = 100, seed: int = 0) -> bool:
        rng = np.random.default_rng(seed)
        i = rng.integers(0, self.order, size=pairs)
        j = rng.integers(0, self.order, size=pairs)
        prod = self.domain.mul(self.data[i], self.data[j])
        return bool((self.index_batch(prod) >= 0).all())


def enumerate_group(spec: GroupSpec, cap: int = DEFAULT_CAP) -> ElementStore:
    """Breadth-first closure of the generators, in canonical order."""
    if cap < 1:
        raise ValueError("cap must be >= 1")
    dom = spec.domain()
    gens = [dom.encode(g) for g in spec.generators]
    ident = dom.identity()
    layers = [ident]
    parents = [np.array([-1], dtype=np.int64)]
    gen_idx = [np.array([-1], dtype=np.int16)]
    visited = _keys(dom.canonical_bytes(ident))
    frontier = ident
    frontier_start = 0
    total = 1
    layer_starts = [0]
    while frontier.shape[0]:
        prods = []
        cpar = []
        cgen = []
        fidx = np.arange(frontier_start, frontier_start + frontier.shape[0], dtype=np.int64)
        for gi, g in enumerate(gens):
            prods.append(dom.mul_fixed(frontier, g))
            cpar.append(fidx)
            cgen.append(np.full(frontier.shape[0], gi, dtype=np.int16))
        cand = np.concatenate(prods)
        cpar = np.concatenate(cpar)
        cgen = np.concatenate(cgen)
        cbytes = dom.canonical_bytes(cand)
        ckeys = _keys(cbytes)
        # drop already visited
        pos = np.searchsorted(visited, ckeys)
        pos_c = np.minimum(pos, len(visited) - 1)
        seen = (pos < len(visited)) & (visited[pos_c] == ckeys)
        keep = np.flatnonzero(~seen)
        if keep.size == 0:
            break
        ckeys = ckeys[keep]
        # first occurrence per key: candidates are already in (generator, parent) order
        order = np.argsort(ckeys, kind="stable")
        sk = ckeys[order]
        first = np.ones(len(sk), dtype=bool)
        first[1:] = sk[1:] != sk[:-1]
        chosen = keep[order[first]]  # sorted by key
        # canonical layer order: generator index, then bytes
        chosen = chosen[np.argsort(cgen[chosen], kind="stable")]
        total += len(chosen)
        if total > cap:
            raise CapExceeded(cap, spec.name)
        new = cand[chosen]
        layer_starts.append(total - len(chosen))
        layers.append(new)
        parents.append(cpar[chosen])
        gen_idx.append(cgen[chosen])
        newkeys = sk[first]
        ins = np.searchsorted(visited, newkeys)
        visited = np.insert(visited, ins, newkeys)
        frontier = new
        frontier_start = total - len(chosen)
    layer_starts.append(total)
    data = np.concatenate(layers)
    return ElementStore(spec, dom, data, np.concatenate(parents), np.concatenate(gen_idx), layer_starts)


def group_order(spec: GroupSpec, cap: int = DEFAULT_CAP) -> int:
    return enumerate_group(spec, cap).order


# -- element orders ------------------------------------------------------------------------------


def batch_orders(dom, x: np.ndarray, cap: int = DEFAULT_ORDER_CAP) -> np.ndarray:
    if isinstance(dom, PermDomain):
        orders = B.perm_orders(x)
        if (orders > cap).any():
            raise CapExceeded(cap, "element order")
        return orders
    n = x.shape[0]
    orders = np.zeros(n, dtype=np.int64)
    cur = x.copy()
    live = np.arange(n)
    k = 1
    while live.size:
        done = dom.is_identity(cur)
        orders[live[done]] = k
        live = live[~done]
        cur = cur[~done]
        if not live.size:
            break
        k += 1
        if k > cap:
            raise CapExceeded(cap, "element order")
        cur = dom.mul(cur, x[live])
    return orders


def element_order(x, cap: int = DEFAULT_ORDER_CAP) -> int:
    """Least k >= 1 with x^k = 1, for a matrix or a permutation."""
    if isinstance(x, (BitMatrix, SmallFieldMatrix)):
        if not x.is_invertible():
            raise ValueError("element is not invertible")
        ident = x.identity_like()
        cur = x
        mul = lambda a, b: a @ b
    else:
        x = tuple(int(v) for v in x)
        return _perm_order(x, cap)
    k = 1
    while cur != ident:
        k += 1
        if k > cap:
            raise CapExceeded(cap, "element order")
        cur = mul(cur, x)
    return k


def _perm_order(x, cap: int) -> int:
    k = 1
    for c in perm_cycles(x):
        k = math.lcm(k, len(c))
    if k > cap:
        raise CapExceeded(cap, "element order")
    return k


def max_element_order(store: ElementStore, cap: int = DEFAULT_ORDER_CAP) -> int:
    return store.max_element_order(cap)


def center(store: ElementStore) -> list:
    return store.center()


# -- random elements ------------------------------------------------------------------------------


class ProductReplacement:
    """Product replacement walk; deterministic for a fixed seed."""

    def __init__(self, spec: GroupSpec, seed: int = 0, slots: int = 10, warmup: int = 50):
        self.spec = spec
        self.rng = random.Random(seed)
        gens = list(spec.generators)
        while len(gens) < 2:
            gens.append(spec.identity())
        state = [gens[i % len(gens)] for i in range(max(slots, len(gens)))]
        self.state = state
        self.acc = spec.identity()
        for _ in range(warmup):
            self.next()

    def next(self):
        s = self.state
        i, j = self.rng.sample(range(len(s)), 2)
        if self.rng.random() < 0.5:
            s[i] = self.spec.mul(s[i], s[j])
        else:
            s[i] = self.spec.mul(s[j], s[i])
        self.acc = self.spec.mul(self.acc, s[i])
        return self.acc


def random_element(spec: GroupSpec, seed: int = 0):
    return ProductReplacement(spec, seed).next()


def batch_orbit_counts(x: np.ndarray) -> np.ndarray:
    """Number of <h>-orbits for each row h of an (N, n) permutation batch."""
    p = np.asarray(x, dtype=np.int64)
    lab = np.broadcast_to(np.arange(p.shape[1]), p.shape).copy()
    rows = np.arange(p.shape[0])[:, None]
    # pointer doubling: after k rounds each label is the minimum over 2^k steps of its cycle
    for _ in range(max(1, int(p.shape[1]).bit_length())):
        lab = np.minimum(lab, lab[rows, p])
        p = p[rows, p]
    return (lab == np.arange(p.shape[1])).sum(axis=1)


def conjugating_element(parent: ElementStore, a: ElementStore, b: ElementStore):
    """Some p in the parent permutation group with p^-1 A p = B, or None."""
    if parent.spec.kind != "perm":
        raise ValueError("conjugacy search is implemented for permutation groups")
    if a.order != b.order:
        return None
    target = np.sort(_keys(b.canonical_bytes()))
    adata = a.data.astype(np.int64)
    for i in range(parent.order):
        p = parent.data[i].astype(np.int64)
        pinv = np.argsort(p)
        # (p^-1 a p)[k] = p[a[pinv[k]]]
        conj = p[adata[:, pinv]].astype(a.data.dtype)
        if np.array_equal(np.sort(_keys(a.domain.canonical_bytes(conj))), target):
            return parent.element(i)
    return None
