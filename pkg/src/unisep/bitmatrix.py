"""Bit-packed matrices over GF(2).

Row ``i`` is stored as ``nw = ceil(ncols / 64)`` little-endian uint64 words;
column ``j`` is bit ``j % 64`` of word ``j // 64``.  The same layout is used
for single vectors held as Python ints (bit ``j`` = coordinate ``j``), which is
what the echelon and spinning code works with.
"""

from __future__ import annotations

import sys

import numpy as np

from .fields import GF2

if sys.byteorder != "little":  # pragma: no cover
    raise ImportError("bit packing assumes a little-endian host")

_U64 = np.uint64


def nwords(ncols: int) -> int:
    return max(1, (ncols + 63) // 64)


def words_to_int(words: np.ndarray) -> int:
    return int.from_bytes(np.ascontiguousarray(words, dtype="<u8").tobytes(), "little")


def int_to_words(v: int, nw: int) -> np.ndarray:
    return np.frombuffer(v.to_bytes(nw * 8, "little"), dtype="<u8").astype(_U64)


def _bits_of(v: int):
    while v:
        low = v & -v
        yield low.bit_length() - 1
        v ^= low


class BitMatrix:
    """Matrix over GF(2); immutable by convention (do not mutate ``rows``)."""

    __slots__ = ("rows", "nrows", "ncols", "_hash", "_ints")
    field = GF2

    def __init__(self, rows: np.ndarray, ncols: int):
        rows = np.asarray(rows, dtype=_U64)
        if rows.ndim != 2 or rows.shape[1] != nwords(ncols):
            raise ValueError(f"row array shape {rows.shape} does not fit {ncols} columns")
        self.rows = rows
        self.nrows = rows.shape[0]
        self.ncols = ncols
        self._hash = None
        self._ints = None

    # -- constructors -----------------------------------------------------------

    @classmethod
    def zeros(cls, nrows: int, ncols: int | None = None) -> "BitMatrix":
        ncols = nrows if ncols is None else ncols
        return cls(np.zeros((nrows, nwords(ncols)), dtype=_U64), ncols)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        rows = np.zeros((n, nwords(n)), dtype=_U64)
        idx = np.arange(n)
        rows[idx, idx // 64] = _U64(1) << (idx % 64).astype(_U64)
        return cls(rows, n)

    @classmethod
    def from_ints(cls, ints, ncols: int) -> "BitMatrix":
        nw = nwords(ncols)
        ints = list(ints)
        if not ints:
            return cls(np.zeros((0, nw), dtype=_U64), ncols)
        data = b"".join(v.to_bytes(nw * 8, "little") for v in ints)
        m = cls(np.frombuffer(data, dtype="<u8").astype(_U64).reshape(len(ints), nw), ncols)
        m._ints = tuple(ints)
        return m

    @classmethod
    def from_dense(cls, arr) -> "BitMatrix":
        a = np.asarray(arr, dtype=np.uint8) & 1
        if a.ndim != 2:
            raise ValueError("expected a 2-d array")
        nrows, ncols = a.shape
        nw = nwords(ncols)
        packed = np.packbits(a, axis=1, bitorder="little")
        buf = np.zeros((nrows, nw * 8), dtype=np.uint8)
        buf[:, : packed.shape[1]] = packed
        return cls(buf.view("<u8").astype(_U64), ncols)

    @classmethod
    def random(cls, nrows: int, ncols: int | None = None, rng=None) -> "BitMatrix":
        ncols = nrows if ncols is None else ncols
        rng = np.random.default_rng(rng)
        return cls.from_dense(rng.integers(0, 2, size=(nrows, ncols), dtype=np.uint8))

    @classmethod
    def permutation(cls, perm) -> "BitMatrix":
        """Matrix sending e_i to e_perm[i] (row-vector convention)."""
        n = len(perm)
        return cls.from_ints([1 << int(j) for j in perm], n)

    # -- views --------------------------------------------------------------------

    @property
    def q(self) -> int:
        return 2

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def row_ints(self) -> tuple[int, ...]:
        if self._ints is None:
            nw = self.rows.shape[1]
            raw = np.ascontiguousarray(self.rows, dtype="<u8").tobytes()
            step = nw * 8
            self._ints = tuple(int.from_bytes(raw[i * step:(i + 1) * step], "little") for i in range(self.nrows))
        return self._ints

    def to_dense(self) -> np.ndarray:
        if self.nrows == 0:
            return np.zeros((0, self.ncols), dtype=np.uint8)
        bits = np.unpackbits(np.ascontiguousarray(self.rows).view(np.uint8), axis=1, bitorder="little")
        return bits[:, : self.ncols].copy()

    def __getitem__(self, ij) -> int:
        i, j = ij
        return int((int(self.rows[i, j // 64]) >> (j % 64)) & 1)

    def tobytes(self) -> bytes:
        """Canonical serialization: each row little-endian in ceil(ncols/8) bytes."""
        nb = (self.ncols + 7) // 8
        return b"".join(v.to_bytes(nb, "little") for v in self.row_ints())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BitMatrix)
            and self.shape == other.shape
            and bool(np.array_equal(self.rows, other.rows))
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nrows, self.ncols, self.rows.tobytes()))
        return self._hash

    def __repr__(self) -> str:
        if self.nrows <= 16 and self.ncols <= 64:
            body = "\n".join("".join(str(b) for b in r) for r in self.to_dense())
            return f"BitMatrix({self.nrows}x{self.ncols})\n{body}"
        return f"BitMatrix({self.nrows}x{self.ncols})"

    # -- arithmetic ---------------------------------------------------------------

    def zeros_like(self) -> "BitMatrix":
        return BitMatrix.zeros(self.nrows, self.ncols)

    def identity_like(self) -> "BitMatrix":
        return BitMatrix.identity(self.nrows)

    def __add__(self, other: "BitMatrix") -> "BitMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        return BitMatrix(self.rows ^ other.rows, self.ncols)

    __sub__ = __add__

    def scale(self, c: int) -> "BitMatrix":
        return self if c & 1 else self.zeros_like()

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        return BitMatrix(_m4rm(self.rows, other.rows, self.ncols, other.rows.shape[1]), other.ncols)

    def __pow__(self, n: int) -> "BitMatrix":
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

    def vec_mul(self, v: int) -> int:
        """Row vector (as int) times this matrix."""
        if v == 0:
            return 0
        if self.nrows <= 64:
            ints = self.row_ints()
            out = 0
            for b in _bits_of(v):
                out ^= ints[b]
            return out
        idx = list(_bits_of(v))
        return words_to_int(np.bitwise_xor.reduce(self.rows[idx], axis=0))

    def transpose(self) -> "BitMatrix":
        return BitMatrix.from_dense(self.to_dense().T)

    @property
    def T(self) -> "BitMatrix":
        return self.transpose()

    def kron(self, other: "BitMatrix") -> "BitMatrix":
        return BitMatrix.from_dense(np.kron(self.to_dense(), other.to_dense()))

    def direct_sum(self, other: "BitMatrix") -> "BitMatrix":
        a, b = self.to_dense(), other.to_dense()
        out = np.zeros((a.shape[0] + b.shape[0], a.shape[1] + b.shape[1]), dtype=np.uint8)
        out[: a.shape[0], : a.shape[1]] = a
        out[a.shape[0]:, a.shape[1]:] = b
        return BitMatrix.from_dense(out)

    def select(self, rows=None, cols=None) -> "BitMatrix":
        d = self.to_dense()
        if rows is not None:
            d = d[list(rows)]
        if cols is not None:
            d = d[:, list(cols)]
        return BitMatrix.from_dense(d)

    def stack(self, other: "BitMatrix") -> "BitMatrix":
        if self.ncols != other.ncols:
            raise ValueError("column mismatch")
        return BitMatrix(np.vstack([self.rows, other.rows]), self.ncols)

    def is_identity(self) -> bool:
        return self.is_square() and self == BitMatrix.identity(self.nrows)

    def is_zero(self) -> bool:
        return not self.rows.any()

    def trace(self) -> int:
        return sum(self[i, i] for i in range(min(self.nrows, self.ncols))) & 1

    # -- elimination --------------------------------------------------------------

    def echelon_form(self) -> tuple["BitMatrix", list[int]]:
        """Reduced row echelon form and pivot columns."""
        a, piv, _ = _eliminate(self.rows.copy(), self.ncols, None)
        return BitMatrix(a[: len(piv)], self.ncols), piv

    def rank(self) -> int:
        return len(_eliminate(self.rows.copy(), self.ncols, None, reduce_above=False)[1])

    def nullspace(self) -> "BitMatrix":
        """Basis (as rows) of the left null space {v : v @ self = 0}."""
        track = BitMatrix.identity(self.nrows).rows
        a, piv, t = _eliminate(self.rows.copy(), self.ncols, track.copy(), reduce_above=False)
        r = len(piv)
        return BitMatrix(t[r:], self.nrows).echelon_form()[0]

    def right_nullspace(self) -> "BitMatrix":
        """Basis (as rows) of {v : self @ v^T = 0}."""
        return self.transpose().nullspace()

    def det(self) -> int:
        if not self.is_square():
            raise ValueError("determinant of a non-square matrix")
        return 1 if self.rank() == self.nrows else 0

    def is_invertible(self) -> bool:
        return self.is_square() and self.rank() == self.nrows

    def inverse(self) -> "BitMatrix":
        if not self.is_square():
            raise ValueError("inverse of a non-square matrix")
        track = BitMatrix.identity(self.nrows).rows
        a, piv, t = _eliminate(self.rows.copy(), self.ncols, track.copy())
        if len(piv) != self.nrows:
            raise ZeroDivisionError("matrix is singular")
        return BitMatrix(t, self.ncols)

    def det_one_minus(self) -> int:
        """det(self - I); zero iff 1 is an eigenvalue."""
        return (self + self.identity_like()).det()


def _m4rm(a: np.ndarray, b: np.ndarray, k: int, nwb: int) -> np.ndarray:
    """Method of four Russians with 8-bit tables: rows of a (k columns) times b."""
    n = a.shape[0]
    out = np.zeros((n, nwb), dtype=_U64)
    if n == 0 or k == 0:
        return out
    abytes = np.ascontiguousarray(a).view(np.uint8)
    table = np.zeros((256, nwb), dtype=_U64)
    for kb in range((k + 7) // 8):
        block = b[8 * kb: min(8 * kb + 8, k)]
        table[:] = 0
        for t in range(block.shape[0]):
            w = 1 << t
            table[w: 2 * w] = table[:w] ^ block[t]
        sel = abytes[:, kb]
        if block.shape[0] < 8:
            sel = sel & ((1 << block.shape[0]) - 1)
        out ^= table[sel]
    return out


def _eliminate(a: np.ndarray, ncols: int, track: np.ndarray | None, reduce_above: bool = True):
    """In-place Gauss-Jordan on packed rows; returns (a, pivots, track)."""
    nrows = a.shape[0]
    r = 0
    piv: list[int] = []
    for c in range(ncols):
        if r == nrows:
            break
        w = c >> 6
        bit = _U64(1) << _U64(c & 63)
        col = (a[r:, w] & bit) != 0
        hits = np.flatnonzero(col)
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
            if track is not None:
                track[[r, p]] = track[[p, r]]
        if reduce_above:
            mask = (a[:, w] & bit) != 0
            mask[r] = False
        else:
            mask = np.zeros(nrows, dtype=bool)
            mask[r + 1:] = (a[r + 1:, w] & bit) != 0
        if mask.any():
            a[mask] ^= a[r]
            if track is not None:
                track[mask] ^= track[r]
        piv.append(c)
        r += 1
    return a, piv, track
