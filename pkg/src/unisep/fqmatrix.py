"""Dense matrices over the small fields of :mod:`unisep.fields`.

Entries are uint8 element codes; arithmetic goes through the field tables.
Prime fields use integer matmul followed by a reduction, which is exact for
the dimensions used here (dim * (p-1)^2 stays far below 2^63).
"""

from __future__ import annotations

import numpy as np

from .fields import GF, field as get_field


class SmallFieldMatrix:
    __slots__ = ("field", "data", "_hash")

    def __init__(self, fld: GF, data):
        data = np.asarray(data, dtype=np.uint8)
        if data.ndim != 2:
            raise ValueError("expected a 2-d array of element codes")
        if data.size and int(data.max()) >= fld.q:
            raise ValueError(f"entry out of range for GF({fld.q})")
        self.field = fld
        self.data = data
        self._hash = None

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zeros(cls, fld: GF, nrows: int, ncols: int | None = None) -> "SmallFieldMatrix":
        return cls(fld, np.zeros((nrows, nrows if ncols is None else ncols), dtype=np.uint8))

    @classmethod
    def identity(cls, fld: GF, n: int) -> "SmallFieldMatrix":
        return cls(fld, np.eye(n, dtype=np.uint8))

    @classmethod
    def from_dense(cls, fld: GF | int, arr) -> "SmallFieldMatrix":
        fld = get_field(fld) if isinstance(fld, int) else fld
        return cls(fld, arr)

    @classmethod
    def random(cls, fld: GF, nrows: int, ncols: int | None = None, rng=None) -> "SmallFieldMatrix":
        rng = np.random.default_rng(rng)
        ncols = nrows if ncols is None else ncols
        return cls(fld, rng.integers(0, fld.q, size=(nrows, ncols), dtype=np.uint8))

    @classmethod
    def permutation(cls, fld: GF, perm) -> "SmallFieldMatrix":
        n = len(perm)
        d = np.zeros((n, n), dtype=np.uint8)
        d[np.arange(n), np.asarray(perm)] = 1
        return cls(fld, d)

    # -- views ----------------------------------------------------------------

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def nrows(self) -> int:
        return self.data.shape[0]

    @property
    def ncols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def to_dense(self) -> np.ndarray:
        return self.data.copy()

    def __getitem__(self, ij) -> int:
        return int(self.data[ij])

    def tobytes(self) -> bytes:
        return np.ascontiguousarray(self.data).tobytes()

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SmallFieldMatrix)
            and other.field == self.field
            and self.shape == other.shape
            and bool(np.array_equal(self.data, other.data))
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.field.q, self.shape, self.data.tobytes()))
        return self._hash

    def __repr__(self) -> str:
        if self.nrows <= 16:
            body = "\n".join(" ".join(str(int(x)) for x in r) for r in self.data)
            return f"SmallFieldMatrix(GF({self.q}), {self.nrows}x{self.ncols})\n{body}"
        return f"SmallFieldMatrix(GF({self.q}), {self.nrows}x{self.ncols})"

    # -- arithmetic -----------------------------------------------------------

    def _check(self, other) -> None:
        if not isinstance(other, SmallFieldMatrix) or other.field != self.field:
            raise ValueError("field mismatch")

    def zeros_like(self) -> "SmallFieldMatrix":
        return SmallFieldMatrix.zeros(self.field, self.nrows, self.ncols)

    def identity_like(self) -> "SmallFieldMatrix":
        return SmallFieldMatrix.identity(self.field, self.nrows)

    def __add__(self, other: "SmallFieldMatrix") -> "SmallFieldMatrix":
        self._check(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        return SmallFieldMatrix(self.field, self.field.add_table[self.data, other.data])

    def __sub__(self, other: "SmallFieldMatrix") -> "SmallFieldMatrix":
        self._check(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} - {other.shape}")
        return SmallFieldMatrix(self.field, self.field.sub_table[self.data, other.data])

    def __neg__(self) -> "SmallFieldMatrix":
        return SmallFieldMatrix(self.field, self.field.neg_table[self.data])

    def scale(self, c: int) -> "SmallFieldMatrix":
        return SmallFieldMatrix(self.field, self.field.mul_table[c][self.data])

    def __matmul__(self, other: "SmallFieldMatrix") -> "SmallFieldMatrix":
        self._check(other)
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        return SmallFieldMatrix(self.field, matmul_codes(self.field, self.data, other.data))

    def __pow__(self, n: int) -> "SmallFieldMatrix":
        if n < 0:
            return self.inverse() ** (-n)
        out = self.identity_like()
        base = self
        while n:
            if n & 1:
                out = out @ base
            base = base @ base
            n >>= 1
        return out

    def vec_mul(self, v: np.ndarray) -> np.ndarray:
        return matmul_codes(self.field, np.asarray(v, dtype=np.uint8)[None, :], self.data)[0]

    def transpose(self) -> "SmallFieldMatrix":
        return SmallFieldMatrix(self.field, np.ascontiguousarray(self.data.T))

    @property
    def T(self) -> "SmallFieldMatrix":
        return self.transpose()

    def kron(self, other: "SmallFieldMatrix") -> "SmallFieldMatrix":
        self._check(other)
        a, b = self.data, other.data
        prod = self.field.mul_table[a[:, None, :, None], b[None, :, None, :]]
        return SmallFieldMatrix(self.field, prod.reshape(a.shape[0] * b.shape[0], a.shape[1] * b.shape[1]))

    def direct_sum(self, other: "SmallFieldMatrix") -> "SmallFieldMatrix":
        self._check(other)
        a, b = self.data, other.data
        out = np.zeros((a.shape[0] + b.shape[0], a.shape[1] + b.shape[1]), dtype=np.uint8)
        out[: a.shape[0], : a.shape[1]] = a
        out[a.shape[0]:, a.shape[1]:] = b
        return SmallFieldMatrix(self.field, out)

    def select(self, rows=None, cols=None) -> "SmallFieldMatrix":
        d = self.data
        if rows is not None:
            d = d[list(rows)]
        if cols is not None:
            d = d[:, list(cols)]
        return SmallFieldMatrix(self.field, d)

    def stack(self, other: "SmallFieldMatrix") -> "SmallFieldMatrix":
        self._check(other)
        return SmallFieldMatrix(self.field, np.vstack([self.data, other.data]))

    def map_entries(self, fn) -> "SmallFieldMatrix":
        table = np.array([fn(a) for a in range(self.q)], dtype=np.uint8)
        return SmallFieldMatrix(self.field, table[self.data])

    def is_identity(self) -> bool:
        return self.is_square() and bool(np.array_equal(self.data, np.eye(self.nrows, dtype=np.uint8)))

    def is_zero(self) -> bool:
        return not self.data.any()

    def trace(self) -> int:
        t = 0
        for i in range(min(self.shape)):
            t = self.field.add(t, int(self.data[i, i]))
        return t

    # -- elimination ----------------------------------------------------------

    def echelon_form(self) -> tuple["SmallFieldMatrix", list[int]]:
        a, piv, _, _ = _eliminate(self.field, self.data.copy(), None)
        return SmallFieldMatrix(self.field, a[: len(piv)]), piv

    def rank(self) -> int:
        return len(_eliminate(self.field, self.data.copy(), None)[1])

    def nullspace(self) -> "SmallFieldMatrix":
        """Basis (as rows) of the left null space {v : v @ self = 0}."""
        track = np.eye(self.nrows, dtype=np.uint8)
        a, piv, t, _ = _eliminate(self.field, self.data.copy(), track)
        return SmallFieldMatrix(self.field, t[len(piv):]).echelon_form()[0]

    def right_nullspace(self) -> "SmallFieldMatrix":
        return self.transpose().nullspace()

    def det(self) -> int:
        if not self.is_square():
            raise ValueError("determinant of a non-square matrix")
        _, piv, _, d = _eliminate(self.field, self.data.copy(), None)
        return d if len(piv) == self.nrows else 0

    def is_invertible(self) -> bool:
        return self.is_square() and self.rank() == self.nrows

    def inverse(self) -> "SmallFieldMatrix":
        if not self.is_square():
            raise ValueError("inverse of a non-square matrix")
        track = np.eye(self.nrows, dtype=np.uint8)
        _, piv, t, _ = _eliminate(self.field, self.data.copy(), track)
        if len(piv) != self.nrows:
            raise ZeroDivisionError("matrix is singular")
        return SmallFieldMatrix(self.field, t)

    def det_one_minus(self) -> int:
        return (self - self.identity_like()).det()


def field_sum(fld: GF, prod: np.ndarray, axis: int) -> np.ndarray:
    """Sum element codes along an axis using the field's additive structure."""
    if fld.p == 2:
        return np.bitwise_xor.reduce(prod, axis=axis)
    if fld.degree == 1:
        return (prod.sum(axis=axis, dtype=np.int64) % fld.p).astype(np.uint8)
    p = fld.p
    out = np.zeros(np.delete(prod.shape, axis), dtype=np.int64)
    rest = prod.astype(np.int64)
    scale = 1
    for _ in range(fld.degree):
        out += (((rest % p).sum(axis=axis)) % p) * scale
        rest //= p
        scale *= p
    return out.astype(np.uint8)


def matmul_codes(fld: GF, a: np.ndarray, b: np.ndarray, chunk: int = 1 << 22) -> np.ndarray:
    if fld.degree == 1:
        return ((a.astype(np.int64) @ b.astype(np.int64)) % fld.p).astype(np.uint8)
    n, k = a.shape
    m = b.shape[1]
    out = np.empty((n, m), dtype=np.uint8)
    step = max(1, chunk // max(1, k * m))
    mul = fld.mul_table
    for s in range(0, n, step):
        prod = mul[a[s: s + step, :, None], b[None, :, :]]
        out[s: s + step] = field_sum(fld, prod, axis=1)
    return out


def _eliminate(fld: GF, a: np.ndarray, track: np.ndarray | None):
    """Gauss-Jordan with normalized pivots.  Returns (a, pivots, track, det)."""
    nrows, ncols = a.shape
    mul, sub, inv, neg = fld.mul_table, fld.sub_table, fld.inv_table, fld.neg_table
    det = 1
    r = 0
    piv: list[int] = []
    for c in range(ncols):
        if r == nrows:
            break
        hits = np.flatnonzero(a[r:, c])
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
            if track is not None:
                track[[r, p]] = track[[p, r]]
            det = int(neg[det])
        pv = int(a[r, c])
        det = int(mul[det, pv])
        if pv != 1:
            s = inv[pv]
            a[r] = mul[s][a[r]]
            if track is not None:
                track[r] = mul[s][track[r]]
        f = a[:, c].copy()
        f[r] = 0
        rows = np.flatnonzero(f)
        if rows.size:
            fr = f[rows][:, None]
            a[rows] = sub[a[rows], mul[fr, a[r][None, :]]]
            if track is not None:
                track[rows] = sub[track[rows], mul[fr, track[r][None, :]]]
        piv.append(c)
        r += 1
    return a, piv, track, det
