"""Field-generic linear algebra on top of the two matrix classes.

Vectors are Python ints over GF(2) (bit j = coordinate j) and uint8 arrays
of element codes over the other fields.  :class:`Echelon` keeps a basis in
reduced row echelon form so that reduction is a single pass, and optionally
carries a polynomial tag with each row (used for Krylov characteristic
polynomials and for minimal polynomials of vectors).
"""

from __future__ import annotations

from typing import Union

import numpy as np

from .bitmatrix import BitMatrix
from .fields import GF, GF2, field as get_field
from .fqmatrix import SmallFieldMatrix, field_sum
from .poly import Poly, _x2_mul

Matrix = Union[BitMatrix, SmallFieldMatrix]


# -- construction helpers ---------------------------------------------------------


def from_dense(fld: GF | int, arr) -> Matrix:
    fld = get_field(fld) if isinstance(fld, int) else fld
    if fld.q == 2:
        return BitMatrix.from_dense(arr)
    return SmallFieldMatrix(fld, arr)


def identity(fld: GF | int, n: int) -> Matrix:
    fld = get_field(fld) if isinstance(fld, int) else fld
    return BitMatrix.identity(n) if fld.q == 2 else SmallFieldMatrix.identity(fld, n)


def zeros(fld: GF | int, nrows: int, ncols: int | None = None) -> Matrix:
    fld = get_field(fld) if isinstance(fld, int) else fld
    if fld.q == 2:
        return BitMatrix.zeros(nrows, ncols)
    return SmallFieldMatrix.zeros(fld, nrows, ncols)


def permutation_matrix(fld: GF | int, perm) -> Matrix:
    fld = get_field(fld) if isinstance(fld, int) else fld
    if fld.q == 2:
        return BitMatrix.permutation(perm)
    return SmallFieldMatrix.permutation(fld, perm)


def random_matrix(fld: GF | int, n: int, rng=None) -> Matrix:
    fld = get_field(fld) if isinstance(fld, int) else fld
    if fld.q == 2:
        return BitMatrix.random(n, rng=rng)
    return SmallFieldMatrix.random(fld, n, rng=rng)


def random_invertible(fld: GF | int, n: int, rng=None) -> Matrix:
    rng = np.random.default_rng(rng)
    while True:
        m = random_matrix(fld, n, rng)
        if m.is_invertible():
            return m


# -- vectors ------------------------------------------------------------------------


class VectorOps:
    """Row-vector helpers for one field and length."""

    def __init__(self, fld: GF, n: int):
        self.field = fld
        self.n = n
        self.binary = fld.q == 2

    def zero(self):
        return 0 if self.binary else np.zeros(self.n, dtype=np.uint8)

    def unit(self, i: int):
        if self.binary:
            return 1 << i
        v = np.zeros(self.n, dtype=np.uint8)
        v[i] = 1
        return v

    def is_zero(self, v) -> bool:
        return v == 0 if self.binary else not v.any()

    def add(self, u, v):
        return u ^ v if self.binary else self.field.add_table[u, v]

    def scale(self, c: int, v):
        if self.binary:
            return v if c else 0
        return self.field.mul_table[c][v]

    def rows(self, m: Matrix) -> list:
        if self.binary:
            return list(m.row_ints())
        return [r.copy() for r in m.data]

    def matrix(self, vecs) -> Matrix:
        vecs = list(vecs)
        if self.binary:
            return BitMatrix.from_ints(vecs, self.n)
        if not vecs:
            return SmallFieldMatrix.zeros(self.field, 0, self.n)
        return SmallFieldMatrix(self.field, np.vstack(vecs))

    def key(self, v):
        return v if self.binary else v.tobytes()

    def random(self, rng):
        if self.binary:
            return rng.getrandbits(self.n) if self.n else 0
        return np.array([rng.randrange(self.field.q) for _ in range(self.n)], dtype=np.uint8)


def vec_mul(v, m: Matrix):
    return m.vec_mul(v)


# -- echelon basis ----------------------------------------------------------------------


class Echelon:
    """Subspace basis kept in reduced row echelon form.

    Tags are polynomials in bit form over GF(2) and :class:`Poly` otherwise;
    each row's tag records the combination that produced it.
    """

    def __init__(self, fld: GF, n: int, tagged: bool = False):
        self.field = fld
        self.n = n
        self.ops = VectorOps(fld, n)
        self.tagged = tagged
        self.rows: dict[int, object] = {}
        self.tags: dict[int, object] = {}

    @property
    def dim(self) -> int:
        return len(self.rows)

    def pivots(self) -> list[int]:
        return sorted(self.rows)

    def _lead(self, v) -> int:
        if self.ops.binary:
            return (v & -v).bit_length() - 1
        nz = np.flatnonzero(v)
        return int(nz[0]) if nz.size else -1

    # tag arithmetic
    def tag_zero(self):
        return 0 if self.ops.binary else Poly.zero(self.field)

    def tag_one(self):
        return 1 if self.ops.binary else Poly.one(self.field)

    def tag_shift(self, t):
        return t << 1 if self.ops.binary else t * Poly.x(self.field)

    def tag_axpy(self, t, c, s):
        """t - c*s."""
        if self.ops.binary:
            return t ^ s
        return t - s.scale(c)

    def tag_poly(self, t) -> Poly:
        return Poly.from_bits(t) if self.ops.binary else t

    def reduce(self, v, tag=None):
        """Reduce ``v`` modulo the span; returns the residue (and tag when given)."""
        if self.ops.binary:
            rows, tags = self.rows, self.tags
            hits = v & self._pivmask
            while hits:
                low = hits & -hits
                p = low.bit_length() - 1
                v ^= rows[p]
                if tag is not None:
                    tag ^= tags[p]
                hits ^= low
            return (v, tag) if tag is not None else v
        if self.rows:
            piv = self._piv_array
            coeffs = v[piv]
            nz = np.flatnonzero(coeffs)
            if nz.size:
                F = self.field
                mat = self._row_matrix[nz]
                c = coeffs[nz]
                contrib = F.mul_table[c[:, None], mat]
                v = F.sub_table[v, field_sum(F, contrib, axis=0)]
                if tag is not None:
                    for k in nz:
                        p = int(piv[k])
                        tag = self.tag_axpy(tag, int(coeffs[k]), self.tags[p])
        return (v, tag) if tag is not None else v

    @property
    def _pivmask(self) -> int:
        m = getattr(self, "_pm", None)
        if m is None:
            m = 0
            for p in self.rows:
                m |= 1 << p
            self._pm = m
        return m

    @property
    def _piv_array(self) -> np.ndarray:
        a = getattr(self, "_pa", None)
        if a is None:
            a = np.array(sorted(self.rows), dtype=np.int64)
            self._pa = a
            self._rm = np.vstack([self.rows[int(p)] for p in a])
        return a

    @property
    def _row_matrix(self) -> np.ndarray:
        self._piv_array
        return self._rm

    def _invalidate(self) -> None:
        self._pm = None
        self._pa = None
        self._rm = None

    def add(self, v, tag=None, reduced: bool = False):
        """Insert ``v``; returns the reduced residue (zero if v was already in the span).

        With tags, returns ``(residue, residue_tag)``.
        """
        if not reduced:
            out = self.reduce(v, tag)
            v, tag = out if tag is not None else (out, None)
        if self.ops.is_zero(v):
            return (v, tag) if tag is not None else v
        p = self._lead(v)
        F = self.field
        if not self.ops.binary:
            lead = int(v[p])
            if lead != 1:
                s = F.inv(lead)
                v = F.mul_table[s][v]
                if tag is not None:
                    tag = tag.scale(s)
        # clear the new pivot from existing rows
        if self.ops.binary:
            for q_, r in self.rows.items():
                if (r >> p) & 1:
                    self.rows[q_] = r ^ v
                    if self.tagged:
                        self.tags[q_] ^= tag
        else:
            for q_, r in list(self.rows.items()):
                c = int(r[p])
                if c:
                    self.rows[q_] = F.sub_table[r, F.mul_table[c][v]]
                    if self.tagged:
                        self.tags[q_] = self.tag_axpy(self.tags[q_], c, tag)
        self.rows[p] = v
        if self.tagged:
            self.tags[p] = tag
        self._invalidate()
        return (v, tag) if tag is not None else v

    def contains(self, v) -> bool:
        return self.ops.is_zero(self.reduce(v))

    def clear_tags(self) -> None:
        z = self.tag_zero()
        for p in self.tags:
            self.tags[p] = z

    def basis(self) -> list:
        return [self.rows[p] for p in sorted(self.rows)]

    def matrix(self) -> Matrix:
        return self.ops.matrix(self.basis())

    def coords(self, v) -> list[int]:
        """Coordinates of ``v`` (assumed in the span) in the basis order."""
        if self.ops.binary:
            return [(v >> p) & 1 for p in sorted(self.rows)]
        return [int(v[p]) for p in sorted(self.rows)]


# -- standard operations ------------------------------------------------------------------


def rank(m: Matrix) -> int:
    return m.rank()


def nullspace(m: Matrix) -> Matrix:
    """Left null space basis {v : v m = 0}."""
    return m.nullspace()


def det_one_minus(m: Matrix) -> int:
    """det(m - I); over GF(2) this is the coefficient sum of the characteristic polynomial."""
    if not m.is_square():
        raise ValueError("det_one_minus needs a square matrix")
    return m.det_one_minus()


def char_poly(m: Matrix) -> Poly:
    """det(xI - m) via cyclic (Krylov) blocks of an echelonized spin."""
    if not m.is_square():
        raise ValueError("characteristic polynomial of a non-square matrix")
    fld = m.field
    n = m.nrows
    ech = Echelon(fld, n, tagged=True)
    ops = ech.ops
    result = Poly.one(fld)
    if fld.q == 2:
        acc = 1
    for j in range(n):
        if ech.dim == n:
            break
        v = ops.unit(j)
        if ech.contains(v):
            continue
        ech.clear_tags()
        tag = ech.tag_one()
        while True:
            r, t = ech.reduce(v, tag)
            if ops.is_zero(r):
                # t(m) maps the block generator into the earlier span
                if fld.q == 2:
                    acc = _x2_mul(acc, t)
                else:
                    result = result * t.monic()
                break
            ech.add(r, t, reduced=True)
            v = m.vec_mul(v)
            tag = ech.tag_shift(tag)
    if fld.q == 2:
        return Poly.from_bits(acc)
    return result


def min_poly_of_vector(m: Matrix, v) -> Poly:
    """Monic polynomial f of least degree with v f(m) = 0."""
    fld = m.field
    ech = Echelon(fld, m.nrows, tagged=True)
    tag = ech.tag_one()
    while True:
        r, t = ech.reduce(v, tag)
        if ech.ops.is_zero(r):
            return ech.tag_poly(t).monic() if fld.q != 2 else Poly.from_bits(t)
        ech.add(r, t, reduced=True)
        v = m.vec_mul(v)
        tag = ech.tag_shift(tag)


def solve_invariant_system(pairs, shape: tuple[int, int]) -> list[Matrix]:
    """Basis of {X (r x c) : A X = X B for every (A, B) in pairs}.

    Direct linear solve on the r*c unknowns (row-major vec).  Used for small
    modules and non-cyclic cases; see :func:`unisep.meataxe.hom_space` for the
    spin-based method on large modules.
    """
    pairs = list(pairs)
    r, c = shape
    if not pairs:
        raise ValueError("no equations supplied")
    fld = pairs[0][0].field
    for a, b in pairs:
        if a.shape != (r, r) or b.shape != (c, c):
            raise ValueError(f"dimension mismatch: {a.shape}, {b.shape} vs unknown {shape}")
    Ir = identity(fld, r)
    Ic = identity(fld, c)
    blocks = []
    for a, b in pairs:
        # vec(A X) = (A kron I_c) vec(X); vec(X B) = (I_r kron B^T) vec(X), with
        # vec as a column; we collect the transposed system so unknowns index rows.
        lhs = a.kron(Ic) - Ir.kron(b.transpose())
        blocks.append(lhs.transpose())
    # stack horizontally: unknowns are rows, equations are columns
    dense = np.hstack([bl.to_dense() for bl in blocks])
    sol = from_dense(fld, dense).nullspace()
    out = []
    ops = VectorOps(fld, r * c)
    for row in ops.rows(sol):
        if fld.q == 2:
            bits = [(row >> i) & 1 for i in range(r * c)]
            out.append(from_dense(fld, np.array(bits, dtype=np.uint8).reshape(r, c)))
        else:
            out.append(from_dense(fld, row.reshape(r, c)))
    return out


def change_basis(m: Matrix, p: Matrix, p_inv: Matrix | None = None) -> Matrix:
    """p m p^-1: the action written in the basis given by the rows of p."""
    if p_inv is None:
        p_inv = p.inverse()
    return p @ m @ p_inv


__all__ = [
    "Matrix",
    "Echelon",
    "VectorOps",
    "char_poly",
    "det_one_minus",
    "from_dense",
    "identity",
    "zeros",
    "min_poly_of_vector",
    "nullspace",
    "permutation_matrix",
    "random_invertible",
    "random_matrix",
    "rank",
    "solve_invariant_system",
    "change_basis",
    "GF2",
]
