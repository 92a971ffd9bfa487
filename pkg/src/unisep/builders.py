"""Constructions of groups, modules and invariant forms.

Every builder returns a :class:`Built` bundle: a :class:`GroupSpec` in a small
faithful representation (permutations or a natural matrix group), the module
whose action matrices correspond generator by generator, and an invariant
symplectic form when one is part of the construction.
"""

from __future__ import annotations

import configparser
import itertools
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from importlib import resources

import numpy as np

from .bitmatrix import BitMatrix
from .fields import GF, GF2, field as get_field
from .fqmatrix import SmallFieldMatrix
from .groups import GroupSpec, enumerate_group, perm_from_cycles
from .linalg import Echelon, VectorOps, from_dense, identity
from .matio import parse_matrices
from .meataxe import (
    BilinearForm,
    ModuleRep,
    chop,
    direct_sum as module_direct_sum,
    frobenius_twist,
    is_absolutely_irreducible,
    tensor,
)


class UnknownRecipe(KeyError):
    pass


class DegenerateForm(ValueError):
    pass


class NotFound(RuntimeError):
    pass


@dataclass
class Built:
    spec: GroupSpec
    module: ModuleRep
    form: BilinearForm | None = None
    recipe: "Recipe | None" = None
    extra: dict = dc_field(default_factory=dict)


# -- permutation modules ------------------------------------------------------------------------


def sum_zero_matrix(perm, n: int | None = None) -> BitMatrix:
    """Action of a permutation on the sum-zero module (odd N) or its quotient by all-ones (even N).

    Odd N: basis b_i = e_i + e_{N-1} (i < N-1).  Even N: images of b_0..b_{N-3}
    in the quotient, where b_{N-2} = b_0 + ... + b_{N-3}.
    """
    perm = [int(v) for v in perm]
    N = len(perm)
    last = perm[N - 1]
    if N % 2 == 1:
        rows = []
        for i in range(N - 1):
            v = (1 << perm[i]) ^ (1 << last)
            rows.append(v & ((1 << (N - 1)) - 1))
        return BitMatrix.from_ints(rows, N - 1)
    rows = []
    m = N - 2
    for i in range(m):
        v = (1 << perm[i]) ^ (1 << last)
        t = (v >> (N - 2)) & 1
        low = v & ((1 << m) - 1)
        rows.append(low ^ (((1 << m) - 1) if t else 0))
    return BitMatrix.from_ints(rows, m)


def sum_zero_form(N: int) -> BitMatrix:
    m = N - 1 if N % 2 else N - 2
    d = np.ones((m, m), dtype=np.uint8) ^ np.eye(m, dtype=np.uint8)
    return BitMatrix.from_dense(d)


def perm_to_symplectic(spec: GroupSpec, tag: str | None = None) -> tuple[ModuleRep, BilinearForm]:
    if spec.kind != "perm":
        raise ValueError("expected a permutation group")
    N = spec.degree
    if N < 3:
        raise ValueError("need at least 3 points")
    mats = [sum_zero_matrix(g) for g in spec.generators]
    rep = ModuleRep(GF2, mats[0].nrows, mats, tag or f"{spec.name}:sum-zero")
    form = BilinearForm(sum_zero_form(N))
    if not (form.is_alternating and form.is_nondegenerate):
        raise DegenerateForm(f"induced form on {N} points is degenerate")
    if not form.is_invariant(rep):
        raise DegenerateForm("induced form is not invariant")
    return rep, form


def permutation_module(spec: GroupSpec) -> ModuleRep:
    return ModuleRep(GF2, spec.degree, [BitMatrix.permutation(g) for g in spec.generators], f"{spec.name}:perm")


# -- affine groups ------------------------------------------------------------------------------


@dataclass
class AffineSpec:
    n: int
    q: int
    h_gens: list = dc_field(default_factory=list)
    semilinear: bool = False  # add the Frobenius map of F_q acting coordinatewise

    def __post_init__(self):
        fld = get_field(self.q)
        if fld.p == 2:
            raise ValueError("affine construction needs odd q")
        for h in self.h_gens:
            if h.shape != (self.n, self.n) or h.field != fld or not h.is_invertible():
                raise ValueError("H generators must be invertible n x n matrices over F_q")


def _points(n: int, q: int) -> np.ndarray:
    """Coordinates (element codes) of all points; index = sum c_k q^k."""
    idx = np.arange(q ** n)
    return np.stack([(idx // q ** k) % q for k in range(n)], axis=1).astype(np.uint8)


def _point_index(coords: np.ndarray, q: int) -> np.ndarray:
    w = q ** np.arange(coords.shape[1])
    return (coords.astype(np.int64) * w).sum(axis=1)


def affine_group(spec: AffineSpec, name: str | None = None) -> GroupSpec:
    """Permutation group on F_q^n generated by H and translations spanning A."""
    fld = get_field(spec.q)
    n, q = spec.n, spec.q
    pts = _points(n, q)
    gens = []
    for h in spec.h_gens:
        img = h.vec_mul_batch(pts) if hasattr(h, "vec_mul_batch") else _rows_times(fld, pts, h)
        gens.append(tuple(int(v) for v in _point_index(img, q)))
    if spec.semilinear:
        frob = np.array([fld.frobenius(a) for a in range(q)], dtype=np.uint8)
        gens.append(tuple(int(v) for v in _point_index(frob[pts], q)))
    # translations by c * e_k, c running over an F_p-basis of F_q (codes p^i)
    for k in range(n):
        for i in range(fld.degree):
            t = np.zeros(n, dtype=np.uint8)
            t[k] = fld.p ** i
            img = fld.add_table[pts, t[None, :]]
            gens.append(tuple(int(v) for v in _point_index(img, q)))
    return GroupSpec(name or f"AGL{n}({q})-sub", gens)


def _rows_times(fld: GF, pts: np.ndarray, h: SmallFieldMatrix) -> np.ndarray:
    from .fqmatrix import matmul_codes

    return matmul_codes(fld, pts, h.data)


def h_order(spec: AffineSpec) -> int:
    if not spec.h_gens:
        return 1
    return enumerate_group(GroupSpec("H", list(spec.h_gens))).order


# -- classical groups ----------------------------------------------------------------------------


def gl_generators(n: int, q: int) -> list[SmallFieldMatrix]:
    """diag(g,1,..,1), the transvection I+E_01, and permutation matrices of (0 1) and (0 1 .. n-1)."""
    fld = get_field(q)
    gens = []
    if q > 2:
        d = np.eye(n, dtype=np.uint8)
        d[0, 0] = fld.generator
        gens.append(SmallFieldMatrix(fld, d))
    t = np.eye(n, dtype=np.uint8)
    if n > 1:
        t[0, 1] = 1
    gens.append(SmallFieldMatrix(fld, t))
    if n > 1:
        gens.append(SmallFieldMatrix.permutation(fld, perm_from_cycles(n, [0, 1])))
    if n > 2:
        gens.append(SmallFieldMatrix.permutation(fld, perm_from_cycles(n, list(range(n)))))
    return gens


def sl2_generators(q: int) -> list[SmallFieldMatrix]:
    fld = get_field(q)
    gens = [from_dense(fld, [[1, 1], [0, 1]]), from_dense(fld, [[0, 1], [fld.neg(1), 0]])]
    if q > 3:
        g = fld.generator
        gens.insert(0, from_dense(fld, [[g, 0], [0, fld.inv(g)]]))
    return gens


def symplectic_gram(n2: int) -> BitMatrix:
    """Standard alternating form on F_2^(2n) pairing e_i with e_{n+i}."""
    n = n2 // 2
    d = np.zeros((n2, n2), dtype=np.uint8)
    d[:n, n:] = np.eye(n, dtype=np.uint8)
    d[n:, :n] = np.eye(n, dtype=np.uint8)
    return BitMatrix.from_dense(d)


def transvection(gram: BitMatrix, v) -> BitMatrix:
    """x -> x + (x, v) v, i.e. I + (B v^T) v in the row convention."""
    v = np.asarray(v, dtype=np.uint8)
    col = (gram.to_dense().astype(np.int64) @ v) % 2
    n = len(v)
    return BitMatrix.from_dense((np.eye(n, dtype=np.uint8) + np.outer(col, v)) % 2)


def sp_transvection_generators(n2: int) -> list[BitMatrix]:
    """Transvections for e_0..e_{2n-1} and e_i + e_{i+1} (i < n-1)."""
    gram = symplectic_gram(n2)
    n = n2 // 2
    vs = []
    for i in range(n2):
        v = np.zeros(n2, dtype=np.uint8)
        v[i] = 1
        vs.append(v)
    for i in range(n - 1):
        v = np.zeros(n2, dtype=np.uint8)
        v[i] = v[i + 1] = 1
        vs.append(v)
    return [transvection(gram, v) for v in vs]


def exterior_square(g) -> object:
    """Action on the basis e_i ^ e_j (i < j, lexicographic)."""
    fld = g.field
    d = g.to_dense().astype(np.int64)
    n = d.shape[0]
    pairs = list(itertools.combinations(range(n), 2))
    out = np.zeros((len(pairs), len(pairs)), dtype=np.uint8)
    for r, (i, j) in enumerate(pairs):
        for c, (k, l) in enumerate(pairs):
            a = fld.mul(int(d[i, k]), int(d[j, l]))
            b = fld.mul(int(d[i, l]), int(d[j, k]))
            out[r, c] = fld.sub(a, b)
    return from_dense(fld, out)


def natural_module(mats, tag: str) -> ModuleRep:
    return ModuleRep.from_matrices(mats, tag)


# -- Steinberg modules -------------------------------------------------------------------------------


SL3_ADJOINT_BASIS = [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1), "d01", "d12"]


def _sl3_basis_mats() -> list[np.ndarray]:
    out = []
    for b in SL3_ADJOINT_BASIS:
        m = np.zeros((3, 3), dtype=np.uint8)
        if b == "d01":
            m[0, 0] = m[1, 1] = 1
        elif b == "d12":
            m[1, 1] = m[2, 2] = 1
        else:
            m[b] = 1
        out.append(m)
    return out


def _sl3_coords(x: np.ndarray) -> int:
    """Coordinates of a trace-zero 3x3 matrix over F_2 in the fixed basis, as bits."""
    v = 0
    for k, (i, j) in enumerate(SL3_ADJOINT_BASIS[:6]):
        if x[i, j] & 1:
            v |= 1 << k
    # diag(a, b, c) with a+b+c=0 equals a*diag(1,1,0) + c*diag(0,1,1)
    if x[0, 0] & 1:
        v |= 1 << 6
    if x[2, 2] & 1:
        v |= 1 << 7
    return v


def sl3_linear_map(fn) -> BitMatrix:
    rows = []
    for m in _sl3_basis_mats():
        y = fn(m) % 2
        if (y[0, 0] + y[1, 1] + y[2, 2]) % 2:
            raise ValueError("map leaves the trace-zero matrices")
        rows.append(_sl3_coords(y))
    return BitMatrix.from_ints(rows, 8)


def sl3_adjoint_matrix(g: BitMatrix) -> BitMatrix:
    """X -> g^-1 X g on trace-zero matrices."""
    gd = g.to_dense().astype(np.int64)
    gi = g.inverse().to_dense().astype(np.int64)
    return sl3_linear_map(lambda x: gi @ x.astype(np.int64) @ gd)


def transpose_map_sl3() -> BitMatrix:
    return sl3_linear_map(lambda x: x.T.copy())


def tensor_chain(mods: list[ModuleRep]) -> ModuleRep:
    out = mods[0]
    for m in mods[1:]:
        out = tensor(out, m)
    return out


def find_factor(rep: ModuleRep, dim: int, seed: int = 0, absolute: bool = True) -> ModuleRep:
    for f in chop(rep, seed + 1):
        if f.dim == dim and (not absolute or is_absolutely_irreducible(f)):
            return f
    raise NotFound(f"no composition factor of dimension {dim} in {rep.tag}")


def steinberg_sl2(q: int) -> Built:
    """Natural module of SL_2(q) tensored with its Frobenius twists (dim q)."""
    gens = sl2_generators(q)
    fld = get_field(q)
    nat = natural_module(gens, f"SL2({q}):natural")
    mods = [nat] + [frobenius_twist(nat, t) for t in range(1, fld.degree)]
    st = tensor_chain(mods)
    st.tag = f"SL2({q}):St"
    return Built(GroupSpec(f"sl2_{q}", gens), st)


def steinberg_sl4() -> Built:
    gens = gl_generators(4, 2)
    gens = [BitMatrix.from_dense(g.data) for g in gens]
    nat = natural_module(gens, "SL4(2):natural")
    ext = ModuleRep(GF2, 6, [exterior_square(g) for g in gens], "SL4(2):wedge2")
    dual = ModuleRep(GF2, 4, [g.inverse().transpose() for g in gens], "SL4(2):dual")
    big = tensor_chain([nat, ext, dual])
    st = find_factor(big, 64)
    st.tag = "SL4(2):St"
    return Built(GroupSpec("sl4_2", gens), st)


def steinberg_sp4() -> Built:
    gens = sp_transvection_generators(4)
    nat = natural_module(gens, "Sp4(2):natural")
    ext = ModuleRep(GF2, 6, [exterior_square(g) for g in gens], "Sp4(2):wedge2")
    l2 = find_factor(ext, 4)
    big = tensor(nat, l2)
    st = find_factor(big, 16)
    st.tag = "Sp4(2):St"
    return Built(GroupSpec("sp4_2", gens), st)


# -- flags and the Sp_6(2) Steinberg module ---------------------------------------------------------------


def _span_key(vecs: list[int], n: int) -> tuple[int, ...]:
    e = Echelon(GF2, n)
    for v in vecs:
        e.add(v)
    return tuple(e.basis())


def _flag_key(flag_vecs: list[int], n: int) -> tuple:
    return tuple(_span_key(flag_vecs[: k + 1], n) for k in range(len(flag_vecs)))


def isotropic_flag_action(gens: list[BitMatrix], n2: int):
    """Orbit of the standard isotropic flag <e0> < <e0,e1> < ... and the generators as permutations of it."""
    base = [1 << i for i in range(n2 // 2)]
    start = _flag_key(base, n2)
    index = {start: 0}
    reps = [base]
    perms = [[] for _ in gens]
    i = 0
    while i < len(reps):
        for gi, g in enumerate(gens):
            img = [g.vec_mul(v) for v in reps[i]]
            key = _flag_key(img, n2)
            j = index.get(key)
            if j is None:
                j = len(reps)
                index[key] = j
                reps.append(img)
            perms[gi].append(j)
        i += 1
    return reps, [tuple(p) for p in perms], index


def _monomial_symplectic(n2: int) -> list[np.ndarray]:
    """Permutation matrices preserving the standard form: the hyperoctahedral group."""
    n = n2 // 2
    out = []
    for sigma in itertools.permutations(range(n)):
        for swaps in itertools.product((0, 1), repeat=n):
            p = [0] * n2
            for i in range(n):
                a, b = sigma[i], sigma[i] + n
                if swaps[i]:
                    a, b = b, a
                p[i], p[i + n] = a, b
            out.append(np.array(p))
    return out


def steinberg_sp_flags(n2: int = 6, gens: list[BitMatrix] | None = None) -> Built:
    """Submodule of the flag permutation module spun from the sum of the Weyl translates of the base flag."""
    gens = gens or sp_transvection_generators(n2)
    reps, perms, index = isotropic_flag_action(gens, n2)
    nflags = len(reps)
    e = 0
    for p in _monomial_symplectic(n2):
        pm = BitMatrix.permutation(p)
        img = [pm.vec_mul(v) for v in reps[0]]
        e ^= 1 << index[_flag_key(img, n2)]
    perm_arrays = [np.array(p, dtype=np.int64) for p in perms]
    ech = Echelon(GF2, nflags)

    def act(v: int, p: np.ndarray) -> int:
        bits = np.zeros(nflags, dtype=np.uint8)
        src = _int_bits(v, nflags)
        bits[p[src]] = 1
        return _bits_int(bits)

    queue = [ech.add(e)]
    while queue:
        v = queue.pop()
        for p in perm_arrays:
            r = ech.add(act(v, p))
            if r:
                queue.append(r)
    basis = ech.basis()
    mats = []
    for p in perm_arrays:
        rows = []
        for b in basis:
            w = act(b, p)
            rows.append(_coords_int(ech, w))
        mats.append(BitMatrix.from_ints(rows, len(basis)))
    rep = ModuleRep(GF2, len(basis), mats, f"Sp{n2}(2):St")
    return Built(GroupSpec(f"sp{n2}_2", gens), rep, extra={"flags": nflags})


def _int_bits(v: int, n: int) -> np.ndarray:
    b = np.frombuffer(v.to_bytes((n + 7) // 8, "little"), dtype=np.uint8)
    return np.flatnonzero(np.unpackbits(b, bitorder="little")[:n])


def _bits_int(bits: np.ndarray) -> int:
    return int.from_bytes(np.packbits(bits, bitorder="little").tobytes(), "little")


def _coords_int(ech: Echelon, v: int) -> int:
    out = 0
    for k, p in enumerate(ech.pivots()):
        if (v >> p) & 1:
            out |= 1 << k
    return out


# -- sums -----------------------------------------------------------------------------------------------------


def diagonal_sum(a: Built, b: Built, pairing: str = "direct-product", name: str | None = None) -> Built:
    """Orthogonal sum of two form-carrying modules.

    ``direct-product``: the group G1 x G2 (generators (g, 1) then (1, h)).
    ``shared-group``: both modules for the same generator list.
    """
    if a.form is None or b.form is None:
        raise ValueError("both summands need an invariant form")
    fa, fb = a.module.field, b.module.field
    if fa != fb:
        raise ValueError("summands over different fields")
    gram = a.form.gram.direct_sum(b.form.gram)
    ia = identity(fa, a.module.dim)
    ib = identity(fb, b.module.dim)
    if pairing == "direct-product":
        mats = [g.direct_sum(ib) for g in a.module.action] + [ia.direct_sum(h) for h in b.module.action]
        gens = [("L", i) for i in range(a.module.ngens)] + [("R", j) for j in range(b.module.ngens)]
        spec = GroupSpec(name or f"{a.spec.name}x{b.spec.name}", mats)
        rep = ModuleRep(fa, a.module.dim + b.module.dim, mats, spec.name)
    elif pairing == "shared-group":
        rep = module_direct_sum(a.module, b.module)
        spec = a.spec
        gens = None
    else:
        raise ValueError(f"unknown pairing {pairing!r}")
    return Built(spec, rep, BilinearForm(gram), extra={"pairing": pairing, "gens": gens})


# -- recipes ----------------------------------------------------------------------------------------------------


@dataclass
class Recipe:
    id: str
    kind: str
    order: int
    dim: int
    params: dict
    note: str = ""


def _data_text(name: str) -> str:
    return resources.files("unisep").joinpath("data").joinpath(name).read_text()


def _data_matrices(name: str):
    return parse_matrices(_data_text(name), name)


@lru_cache(maxsize=None)
def catalog() -> tuple[Recipe, ...]:
    cp = configparser.ConfigParser()
    cp.read_string(_data_text("recipes.ini"))
    out = []
    for sec in cp.sections():
        p = dict(cp[sec])
        out.append(Recipe(sec, p.pop("kind"), int(p.pop("order")), int(p.pop("dim")), p, p.pop("note", "")))
    return tuple(out)


def recipe(rid: str) -> Recipe:
    for r in catalog():
        if r.id == rid:
            return r
    raise UnknownRecipe(rid)


def _parse_cycles(n: int, text: str) -> tuple[int, ...]:
    cycles = []
    for part in text.replace(" ", "").split(")"):
        part = part.strip("(")
        if part:
            cycles.append([int(x) for x in part.split(",")])
    return perm_from_cycles(n, *cycles)


def _affine_from_params(r: Recipe) -> AffineSpec:
    n, q = int(r.params["n"]), int(r.params["q"])
    h = r.params.get("hgens", "none")
    hg = [] if h == "none" else _data_matrices(h)
    return AffineSpec(n, q, hg, semilinear=r.params.get("semilinear", "no") == "frobenius")


_BUILDERS = {}


def _builder(kind):
    def deco(fn):
        _BUILDERS[kind] = fn
        return fn

    return deco


@_builder("affine")
def _b_affine(r: Recipe) -> Built:
    aspec = _affine_from_params(r)
    spec = affine_group(aspec, r.id)
    rep, form = perm_to_symplectic(spec, f"{r.id}:sum-zero")
    return Built(spec, rep, form, r, {"affine": aspec})


@_builder("perm")
def _b_perm(r: Recipe) -> Built:
    n = int(r.params["points"])
    gens = [_parse_cycles(n, g) for g in r.params["gens"].split(";")]
    spec = GroupSpec(r.id, gens)
    rep, form = perm_to_symplectic(spec, f"{r.id}:sum-zero")
    return Built(spec, rep, form, r)


@_builder("natural")
def _b_natural(r: Recipe) -> Built:
    gens = _data_matrices(r.params["gens"])
    spec = GroupSpec(r.id, gens)
    rep = natural_module(gens, f"{r.id}:natural")
    form = None
    if r.params.get("form") == "standard":
        form = BilinearForm(symplectic_gram(gens[0].nrows))
    return Built(spec, rep, form, r)


@_builder("sl3_adjoint")
def _b_sl3(r: Recipe) -> Built:
    gens = _data_matrices(r.params["gens"])
    spec = GroupSpec(r.id, gens)
    rep = ModuleRep(GF2, 8, [sl3_adjoint_matrix(g) for g in gens], f"{r.id}:adjoint")
    return Built(spec, rep, None, r)


@_builder("l32_2")
def _b_l32_2(r: Recipe) -> Built:
    gens = _data_matrices(r.params["gens"])
    mats = [sl3_adjoint_matrix(g) for g in gens] + [transpose_map_sl3()]
    spec = GroupSpec(r.id, mats)
    rep = ModuleRep(GF2, 8, mats, f"{r.id}:adjoint")
    return Built(spec, rep, None, r)


@_builder("sl2_steinberg")
def _b_sl2(r: Recipe) -> Built:
    b = steinberg_sl2(int(r.params["q"]))
    b.recipe = r
    b.spec.name = r.id
    return b


@_builder("steinberg_chop")
def _b_stchop(r: Recipe) -> Built:
    b = {"sl4_2": steinberg_sl4, "sp4_2": steinberg_sp4}[r.params["group"]]()
    b.recipe = r
    b.spec.name = r.id
    return b


@_builder("steinberg_flags")
def _b_stflags(r: Recipe) -> Built:
    gens = _data_matrices(r.params["gens"])
    b = steinberg_sp_flags(gens[0].nrows, gens)
    b.recipe = r
    b.spec.name = r.id
    return b


@_builder("wreath2")
def _b_wreath(r: Recipe) -> Built:
    base = _data_matrices(r.params["gens"])
    d = base[0].nrows
    I = BitMatrix.identity(d)
    mats = [g.direct_sum(I) for g in base] + [I.direct_sum(g) for g in base]
    swap = [d + i for i in range(d)] + list(range(d))
    mats.append(BitMatrix.permutation(swap))
    gram = symplectic_gram(d).direct_sum(symplectic_gram(d))
    spec = GroupSpec(r.id, mats)
    rep = ModuleRep(GF2, 2 * d, mats, f"{r.id}:natural")
    return Built(spec, rep, BilinearForm(gram), r)


@_builder("sum")
def _b_sum(r: Recipe) -> Built:
    parts = [build(p.strip()) for p in r.params["parts"].split("+")]
    out = parts[0]
    for p in parts[1:]:
        out = diagonal_sum(out, p, r.params.get("pairing", "direct-product"), r.id)
    out.recipe = r
    out.spec.name = r.id
    return out


def build(rid: str) -> Built:
    r = recipe(rid)
    try:
        fn = _BUILDERS[r.kind]
    except KeyError:
        raise UnknownRecipe(f"{rid}: unknown construction kind {r.kind!r}") from None
    b = fn(r)
    if b.module.dim != r.dim:
        raise AssertionError(f"{rid}: module dimension {b.module.dim}, expected {r.dim}")
    return b


def recipe_ids() -> list[str]:
    return [r.id for r in catalog()]
