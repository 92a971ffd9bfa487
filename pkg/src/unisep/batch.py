"""Vectorized kernels over many group elements at once.

Three layouts:

* GF(2) matrices of dimension <= 64 as ``(N, d)`` uint64 arrays (row ``i`` of
  element ``k`` is ``a[k, i]``, column j = bit j);
* matrices over any small field as ``(N, d, d)`` uint8 code arrays;
* permutations of ``n`` points as ``(N, n)`` uint8/uint16 arrays, acting on
  the right: ``(x * g)[i] = g[x[i]]``.
"""

from __future__ import annotations

import numpy as np

from .fields import GF
from .fqmatrix import field_sum, matmul_codes

_U64 = np.uint64

# -- GF(2), dim <= 64 ---------------------------------------------------------------------


def f2_byte_tables(g_rows: np.ndarray) -> np.ndarray:
    """Lookup tables for right multiplication by a fixed matrix with rows ``g_rows``."""
    g_rows = np.asarray(g_rows, dtype=_U64)
    d = g_rows.shape[0]
    nb = (d + 7) // 8
    t = np.zeros((nb, 256), dtype=_U64)
    for b in range(nb):
        block = g_rows[8 * b: 8 * b + 8]
        for j, r in enumerate(block):
            w = 1 << j
            t[b, w: 2 * w] = t[b, :w] ^ r
    return t


def f2_mul_fixed(x: np.ndarray, tables: np.ndarray) -> np.ndarray:
    """x @ g for every x in the batch (tables from :func:`f2_byte_tables`)."""
    out = np.zeros_like(x)
    for b in range(tables.shape[0]):
        idx = (x >> _U64(8 * b)) & _U64(0xFF)
        out ^= tables[b][idx]
    return out


def f2_left_mul_fixed(g_rows: np.ndarray, x: np.ndarray) -> np.ndarray:
    """g @ x for every x in the batch."""
    d = x.shape[1]
    out = np.zeros_like(x)
    for i, r in enumerate(np.asarray(g_rows, dtype=_U64)):
        r = int(r)
        j = 0
        while r:
            if r & 1:
                out[:, i] ^= x[:, j]
            r >>= 1
            j += 1
    return out


def f2_mul(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Elementwise batch product x[k] @ y[k]."""
    d = x.shape[1]
    out = np.zeros_like(x)
    for j in range(d):
        bit = (x >> _U64(j)) & _U64(1)  # (N, d)
        out ^= bit * y[:, j][:, None]
    return out


def f2_identity_rows(d: int) -> np.ndarray:
    return (_U64(1) << np.arange(d, dtype=_U64)).astype(_U64)


def f2_singular(a: np.ndarray, d: int, chunk: int = 1 << 16) -> np.ndarray:
    """Boolean mask: which d x d matrices in the batch are singular."""
    n = a.shape[0]
    out = np.zeros(n, dtype=bool)
    for s in range(0, n, chunk):
        out[s: s + chunk] = _f2_singular_chunk(a[s: s + chunk].copy(), d)
    return out


def _f2_singular_chunk(a: np.ndarray, d: int) -> np.ndarray:
    n = a.shape[0]
    ar = np.arange(n)
    singular = np.zeros(n, dtype=bool)
    used = np.zeros((n, d), dtype=bool)
    for c in range(d):
        bit = _U64(1) << _U64(c)
        hasbit = (a & bit) != 0
        cand = hasbit & ~used
        found = cand.any(axis=1)
        singular |= ~found
        p = cand.argmax(axis=1)
        prow = a[ar, p]
        used[ar[found], p[found]] = True
        hasbit[ar, p] = False
        hasbit &= found[:, None]
        a ^= np.where(hasbit, prow[:, None], _U64(0))
    return singular


def f2_minus_identity(x: np.ndarray) -> np.ndarray:
    return x ^ f2_identity_rows(x.shape[1])[None, :]


def f2_is_identity(x: np.ndarray) -> np.ndarray:
    return (x == f2_identity_rows(x.shape[1])[None, :]).all(axis=1)


def f2_canonical_bytes(x: np.ndarray, d: int) -> np.ndarray:
    """(N, d * ceil(d/8)) uint8 canonical serialization (row-major, little-endian rows)."""
    nb = (d + 7) // 8
    raw = np.ascontiguousarray(x, dtype="<u8").view(np.uint8).reshape(x.shape[0], d, 8)
    return np.ascontiguousarray(raw[:, :, :nb]).reshape(x.shape[0], d * nb)


def f2_from_canonical_bytes(b: np.ndarray, d: int) -> np.ndarray:
    nb = (d + 7) // 8
    n = b.shape[0]
    raw = np.zeros((n, d, 8), dtype=np.uint8)
    raw[:, :, :nb] = b.reshape(n, d, nb)
    return raw.view("<u8").reshape(n, d).astype(_U64)


# -- small fields ---------------------------------------------------------------------------


def fq_mul_fixed(fld: GF, x: np.ndarray, g: np.ndarray) -> np.ndarray:
    n, d, _ = x.shape
    return matmul_codes(fld, x.reshape(n * d, d), g).reshape(n, d, g.shape[1])


def fq_left_mul_fixed(fld: GF, g: np.ndarray, x: np.ndarray) -> np.ndarray:
    xt = np.ascontiguousarray(np.swapaxes(x, 1, 2))
    return np.ascontiguousarray(np.swapaxes(fq_mul_fixed(fld, xt, np.ascontiguousarray(g.T)), 1, 2))


def fq_mul(fld: GF, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    if fld.degree == 1:
        return (np.einsum("nij,njk->nik", x.astype(np.int64), y.astype(np.int64)) % fld.p).astype(np.uint8)
    prod = fld.mul_table[x[:, :, :, None], y[:, None, :, :]]
    return field_sum(fld, prod, axis=2)


def fq_singular(fld: GF, a: np.ndarray) -> np.ndarray:
    """Boolean mask of singular matrices in an (N, d, d) batch."""
    a = a.copy()
    n, d, _ = a.shape
    ar = np.arange(n)
    mul, sub, inv = fld.mul_table, fld.sub_table, fld.inv_table
    singular = np.zeros(n, dtype=bool)
    used = np.zeros((n, d), dtype=bool)
    for c in range(d):
        col = a[:, :, c]
        cand = (col != 0) & ~used
        found = cand.any(axis=1)
        singular |= ~found
        p = cand.argmax(axis=1)
        used[ar[found], p[found]] = True
        prow = a[ar, p]  # (N, d)
        scale = inv[a[ar, p, c]]  # inverse of pivot (0 where not found)
        prow = mul[scale[:, None], prow]
        f = col.copy()
        f[ar, p] = 0
        f[~found] = 0
        a = sub[a, mul[f[:, :, None], prow[:, None, :]]]
    return singular


def fq_minus_identity(fld: GF, x: np.ndarray) -> np.ndarray:
    d = x.shape[1]
    eye = np.eye(d, dtype=np.uint8)
    return fld.sub_table[x, eye[None, :, :]]


def fq_is_identity(x: np.ndarray) -> np.ndarray:
    d = x.shape[1]
    return (x == np.eye(d, dtype=np.uint8)[None]).all(axis=(1, 2))


# -- permutations -----------------------------------------------------------------------------


def perm_mul_fixed(x: np.ndarray, g: np.ndarray) -> np.ndarray:
    return np.asarray(g)[x]


def perm_left_mul_fixed(g: np.ndarray, x: np.ndarray) -> np.ndarray:
    return x[:, np.asarray(g)]


def perm_mul(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.take_along_axis(y, x.astype(np.intp), axis=1)


def perm_is_identity(x: np.ndarray) -> np.ndarray:
    return (x == np.arange(x.shape[1], dtype=x.dtype)[None]).all(axis=1)


def perm_orders(x: np.ndarray) -> np.ndarray:
    """Element orders of a batch of permutations (lcm of cycle lengths)."""
    n, npts = x.shape
    # cycle length of each point: iterate the permutation until every point returns
    lengths = np.zeros((n, npts), dtype=np.int64)
    cur = x.astype(np.intp)
    start = np.arange(npts)[None, :]
    for k in range(1, npts + 1):
        back = (cur == start) & (lengths == 0)
        lengths[back] = k
        if k < npts:
            cur = np.take_along_axis(x.astype(np.intp), cur, axis=1)
    return np.lcm.reduce(lengths, axis=1)
