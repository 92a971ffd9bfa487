"""Module-theoretic analysis of linear group actions.

Row-vector convention throughout: a generator matrix ``g`` acts by ``v -> v g``.
A bilinear form with Gram matrix ``B`` is ``(u, v) = u B v^T`` and is invariant
when ``g B g^T = B`` for every generator.

Irreducibility follows the Holt-Rees variant of Norton's criterion: pick a
random algebra element ``a``, an irreducible factor ``f`` of its characteristic
polynomial and a vector ``v`` with ``v f(a) = 0``.  If ``v`` spins to a proper
subspace we have a submodule; if ``dim ker f(a) = deg f`` and both ``v`` and a
null vector of ``f(a)^T`` spin to everything (in the module and in its
transpose), the module is irreducible.  Randomness only affects how fast a
certificate is found, never the verdict.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dc_field

import numpy as np

from .bitmatrix import BitMatrix
from .fields import GF
from .fqmatrix import SmallFieldMatrix, matmul_codes
from .groups import ElementStore, GroupSpec, ProductReplacement, domain_for
from .linalg import Echelon, Matrix, VectorOps, char_poly, from_dense, identity, solve_invariant_system
from .poly import Poly, distinct_degree, equal_degree, squarefree_decomposition

NORTON_ATTEMPTS = 64
DEFAULT_SEED = 20240501


class RandomBudgetExhausted(RuntimeError):
    pass


class NotSymplectic(ValueError):
    pass


class FieldMismatch(ValueError):
    pass


# -- module representations ----------------------------------------------------------------


@dataclass
class ModuleRep:
    field: GF
    dim: int
    action: list
    tag: str = ""

    def __post_init__(self):
        if not self.action:
            raise ValueError("a module needs at least one action matrix")
        if self.field.q == 2:
            # F2 actions always use the bit-packed carrier
            self.action = [g if isinstance(g, BitMatrix) else BitMatrix.from_dense(g.to_dense()) for g in self.action]
        for g in self.action:
            if g.shape != (self.dim, self.dim):
                raise ValueError(f"action matrix of shape {g.shape}, expected {self.dim}x{self.dim}")
            if g.field != self.field:
                raise FieldMismatch("action matrices over different fields")

    @classmethod
    def from_matrices(cls, mats, tag: str = "") -> "ModuleRep":
        mats = list(mats)
        return cls(mats[0].field, mats[0].nrows, mats, tag)

    @property
    def ngens(self) -> int:
        return len(self.action)

    def check_invertible(self) -> bool:
        return all(g.is_invertible() for g in self.action)

    def transposed(self) -> list:
        return [g.transpose() for g in self.action]

    def conjugate(self, p: Matrix) -> "ModuleRep":
        """Same module written in the basis given by the rows of p."""
        pi = p.inverse()
        return ModuleRep(self.field, self.dim, [p @ g @ pi for g in self.action], self.tag)

    def group_spec(self, name: str | None = None) -> GroupSpec:
        return GroupSpec(name or self.tag or "module image", list(self.action))

    def __repr__(self) -> str:
        return f"ModuleRep(GF({self.field.q}), dim={self.dim}, gens={self.ngens}, tag={self.tag!r})"


def trivial_module(fld: GF, dim: int, ngens: int = 1) -> ModuleRep:
    return ModuleRep(fld, dim, [identity(fld, dim) for _ in range(ngens)], "trivial")


# -- spinning ---------------------------------------------------------------------------------


def spin(rep: ModuleRep, seeds, mats=None) -> Echelon:
    """Smallest invariant subspace containing the seeds, as an echelon basis."""
    mats = rep.action if mats is None else mats
    ech = Echelon(rep.field, rep.dim)
    ops = ech.ops
    queue = []
    for s in seeds:
        r = ech.add(s)
        if not ops.is_zero(r):
            queue.append(r)
    while queue:
        v = queue.pop()
        for g in mats:
            r = ech.add(g.vec_mul(v))
            if not ops.is_zero(r):
                queue.append(r)
    return ech


def spin_basis(rep: ModuleRep, seeds) -> Matrix:
    return spin(rep, seeds).matrix()


def _spin_tree(mats, v, fld: GF, dim: int):
    """Spin one vector, recording each new basis vector as (parent, generator)."""
    ech = Echelon(fld, dim)
    ops = ech.ops
    vecs = [v]
    parent = [-1]
    gen = [-1]
    ech.add(v)
    i = 0
    while i < len(vecs):
        for gi, g in enumerate(mats):
            w = g.vec_mul(vecs[i])
            if not ops.is_zero(ech.add(w)):
                vecs.append(w)
                parent.append(i)
                gen.append(gi)
        i += 1
    return vecs, parent, gen


def submodule_and_quotient(rep: ModuleRep, sub: Matrix) -> tuple[ModuleRep, ModuleRep, Matrix]:
    """Actions on an invariant subspace (rows of ``sub``, echelonized) and on the quotient.

    Returns (sub_rep, quotient_rep, P) where P stacks the submodule basis over
    unit vectors completing it.
    """
    fld = rep.field
    k = sub.nrows
    basis, piv = sub.echelon_form()
    free = [j for j in range(rep.dim) if j not in set(piv)]
    ops = VectorOps(fld, rep.dim)
    rows = ops.rows(basis) + [ops.unit(j) for j in free]
    p = ops.matrix(rows)
    pinv = p.inverse()
    subs, quots = [], []
    for g in rep.action:
        c = p @ g @ pinv
        d = c.to_dense()
        if d[:k, k:].any():
            raise ValueError("subspace is not invariant")
        subs.append(from_dense(fld, d[:k, :k]))
        quots.append(from_dense(fld, d[k:, k:]))
    return ModuleRep(fld, k, subs, rep.tag + "/sub"), ModuleRep(fld, rep.dim - k, quots, rep.tag + "/quot"), p


# -- irreducibility ----------------------------------------------------------------------------------


@dataclass
class IrreducibilityResult:
    irreducible: bool
    submodule: Matrix | None = None
    attempts: int = 0

    def __bool__(self) -> bool:
        return self.irreducible


def _algebra_elements(rep: ModuleRep, rng: random.Random):
    """Random linear combinations of two product-replacement group elements."""
    fld = rep.field
    ident = rep.action[0].identity_like()
    walk = _PairWalk(rep.action, ident, lambda a, b: a @ b, rng.randrange(1 << 30))
    while True:
        a = walk.next().scale(rng.randrange(1, fld.q))
        yield a + walk.next().scale(rng.randrange(1, fld.q))


def _small_irreducible_factors(cp: Poly, max_degree: int, rng: random.Random) -> list[Poly]:
    out = []
    for sq, _ in squarefree_decomposition(cp):
        for part, d in distinct_degree(sq, max_degree):
            if d == 0 or d > max_degree:
                continue
            if part.degree == d:
                out.append(part.monic())
            else:
                out.extend(f.monic() for f in equal_degree(part, d, rng))
    uniq = sorted(set(out), key=lambda f: (f.degree, f.coeffs))
    return uniq


def _annihilator(rep: ModuleRep, dual_sub: Matrix) -> Matrix:
    """{v : v w^T = 0 for all rows w of dual_sub}."""
    return dual_sub.transpose().nullspace()


def is_irreducible(rep: ModuleRep, seed: int = DEFAULT_SEED, attempts: int = NORTON_ATTEMPTS,
                   max_factor_degree: int = 12) -> IrreducibilityResult:
    d = rep.dim
    if d < 1:
        raise ValueError("dimension must be positive")
    if d == 1:
        return IrreducibilityResult(True, None, 0)
    rng = random.Random(seed)
    gen = _algebra_elements(rep, rng)
    transposed = None
    for attempt in range(1, attempts + 1):
        a = next(gen)
        cp = char_poly(a)
        for f in _small_irreducible_factors(cp, min(max_factor_degree, d), rng):
            fa = f.evaluate_matrix(a)
            null = fa.nullspace()
            if null.nrows == 0:
                continue
            v = VectorOps(rep.field, d).rows(null)[0]
            sub = spin(rep, [v])
            if sub.dim < d:
                return IrreducibilityResult(False, sub.matrix(), attempt)
            if null.nrows != f.degree:
                continue
            if transposed is None:
                transposed = rep.transposed()
            tnull = fa.transpose().nullspace()
            w = VectorOps(rep.field, d).rows(tnull)[0]
            dsub = spin(rep, [w], transposed)
            if dsub.dim < d:
                ann = _annihilator(rep, dsub.matrix())
                return IrreducibilityResult(False, ann.echelon_form()[0], attempt)
            return IrreducibilityResult(True, None, attempt)
    raise RandomBudgetExhausted(f"no Norton certificate after {attempts} attempts (dim {d})")


# -- fingerprints and composition factors ----------------------------------------------------------


@dataclass(frozen=True, order=True)
class FactorFingerprint:
    dim: int
    signature: tuple

    def short(self) -> str:
        return f"{self.dim}:" + "/".join(str(len(s)) for s in self.signature)


def fingerprint(rep: ModuleRep) -> FactorFingerprint:
    """Dimension plus characteristic polynomials of g1+g2, g1 g2 and g1 g2 g1."""
    g1 = rep.action[0]
    g2 = rep.action[1 % rep.ngens]
    words = [g1 + g2, g1 @ g2, g1 @ g2 @ g1]
    sig = tuple(char_poly(w).coeffs for w in words)
    return FactorFingerprint(rep.dim, sig)


def chop(rep: ModuleRep, seed: int = DEFAULT_SEED) -> list[ModuleRep]:
    """Composition factors (in the order of a composition series from the bottom)."""
    res = is_irreducible(rep, seed)
    if res.irreducible:
        return [rep]
    sub, quot, _ = submodule_and_quotient(rep, res.submodule)
    return chop(sub, seed + 1) + chop(quot, seed + 2)


def composition_factors(rep: ModuleRep, seed: int = DEFAULT_SEED) -> list[tuple[FactorFingerprint, ModuleRep]]:
    out = [(fingerprint(f), f) for f in chop(rep, seed)]
    if sum(f.dim for _, f in out) != rep.dim:
        raise AssertionError("composition factor dimensions do not add up")
    return out


def composition_factor_dims(rep: ModuleRep, seed: int = DEFAULT_SEED) -> list[tuple[int, FactorFingerprint]]:
    return sorted((fp.dim, fp) for fp, _ in composition_factors(rep, seed))


def has_trivial_composition_factor(rep: ModuleRep, seed: int = DEFAULT_SEED) -> bool:
    return any(f.dim == 1 and all(g.is_identity() for g in f.action) for f in chop(rep, seed))


# -- homomorphisms, endomorphisms, forms ---------------------------------------------------------------


def _dense_mul(fld: GF, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if fld.q == 2:
        return ((a.astype(np.float32) @ b.astype(np.float32)).astype(np.int64) % 2).astype(np.uint8)
    return matmul_codes(fld, a, b)


def _dense_sub(fld: GF, a, b):
    return (a ^ b) if fld.q == 2 else fld.sub_table[a, b]


def _cyclic_vector(rep: ModuleRep, rng: random.Random, tries: int = 8):
    ops = VectorOps(rep.field, rep.dim)
    cands = [ops.unit(0)] + [ops.random(rng) for _ in range(tries)]
    for v in cands:
        if ops.is_zero(v):
            continue
        if spin(rep, [v]).dim == rep.dim:
            return v
    return None


def hom_space(m: ModuleRep, n: ModuleRep, seed: int = DEFAULT_SEED) -> list[Matrix]:
    """Basis of Hom_G(M, N): matrices X with g_M X = X g_N for every generator."""
    if m.field != n.field:
        raise FieldMismatch("modules over different fields")
    if m.ngens != n.ngens:
        raise ValueError("modules for different generator lists")
    fld = m.field
    rng = random.Random(seed)
    v = _cyclic_vector(m, rng)
    if v is None:
        return solve_invariant_system(list(zip(m.action, n.action)), (m.dim, n.dim))
    return _hom_space_cyclic(m, n, v)


def _hom_space_cyclic(m: ModuleRep, n: ModuleRep, v) -> list[Matrix]:
    fld = m.field
    dm, dn = m.dim, n.dim
    vecs, parent, gen = _spin_tree(m.action, v, fld, dm)
    ops = VectorOps(fld, dm)
    bm = ops.matrix(vecs)  # rows b_i = v * word_i
    bm_inv = bm.inverse()
    # images of the words in N
    hn = [g.to_dense() for g in n.action]
    w = np.zeros((dm, dn, dn), dtype=np.uint8)
    w[0] = np.eye(dn, dtype=np.uint8)
    for i in range(1, dm):
        w[i] = _dense_mul(fld, w[parent[i]], hn[gen[i]])
    wflat = w.reshape(dm, dn * dn)
    blocks = []
    for gi, g in enumerate(m.action):
        c = (bm @ g @ bm_inv).to_dense()  # coordinates of b_i g in the b basis
        lhs = _dense_mul(fld, w.reshape(dm * dn, dn), hn[gi]).reshape(dm, dn, dn)
        rhs = _dense_mul(fld, c, wflat).reshape(dm, dn, dn)
        r = _dense_sub(fld, lhs.astype(np.uint8), rhs.astype(np.uint8))
        # skip tree edges, whose constraint is identically zero
        nz = np.flatnonzero(r.reshape(dm, -1).any(axis=1))
        if nz.size:
            blocks.append(np.transpose(r[nz], (1, 0, 2)).reshape(dn, -1))
    if blocks:
        sysm = from_dense(fld, np.hstack(blocks))
        sols = VectorOps(fld, dn).rows(sysm.nullspace())
    else:
        sols = VectorOps(fld, dn).rows(identity(fld, dn))
    out = []
    for y in sols:
        ydense = VectorOps(fld, dn).matrix([y]).to_dense()[0]
        rows = np.stack([_dense_mul(fld, ydense[None, :], w[i])[0] for i in range(dm)]).astype(np.uint8)
        out.append(bm_inv @ from_dense(fld, rows))
    return out


def endomorphism_dim(rep: ModuleRep, seed: int = DEFAULT_SEED) -> int:
    return len(hom_space(rep, rep, seed))


def is_absolutely_irreducible(rep: ModuleRep, seed: int = DEFAULT_SEED) -> bool:
    """For an irreducible module: the endomorphism algebra is the base field."""
    return endomorphism_dim(rep, seed) == 1


def is_isomorphic(a: ModuleRep, b: ModuleRep, seed: int = DEFAULT_SEED) -> bool:
    """Isomorphism of irreducible modules (any nonzero homomorphism is invertible)."""
    if a.dim != b.dim or a.field != b.field:
        return False
    if fingerprint(a) != fingerprint(b):
        return False
    for x in hom_space(a, b, seed):
        if x.is_invertible():
            return True
    return False


@dataclass
class BilinearForm:
    gram: Matrix

    @property
    def dim(self) -> int:
        return self.gram.nrows

    @property
    def is_symmetric(self) -> bool:
        return self.gram == self.gram.transpose()

    @property
    def is_alternating(self) -> bool:
        g = self.gram
        diag_zero = all(g[i, i] == 0 for i in range(g.nrows))
        return diag_zero and (g + g.transpose()).is_zero()

    @property
    def is_nondegenerate(self) -> bool:
        return self.gram.rank() == self.gram.nrows

    def is_invariant(self, rep: ModuleRep) -> bool:
        return all(g @ self.gram @ g.transpose() == self.gram for g in rep.action)

    def is_symplectic_for(self, rep: ModuleRep) -> bool:
        return self.is_alternating and self.is_nondegenerate and self.is_invariant(rep)


def dual(rep: ModuleRep) -> ModuleRep:
    return ModuleRep(rep.field, rep.dim, [g.inverse().transpose() for g in rep.action], rep.tag + "*")


def invariant_forms(rep: ModuleRep, seed: int = DEFAULT_SEED) -> list[Matrix]:
    """Basis of invariant bilinear forms (Gram matrices B with g B g^T = B)."""
    return hom_space(rep, dual(rep), seed)


def _alternating_subspace(fld: GF, forms: list[Matrix]) -> list[Matrix]:
    """Basis of the alternating forms inside span(forms)."""
    if not forms:
        return []
    d = forms[0].nrows
    iu = np.triu_indices(d, 1)
    di = np.arange(d)
    cols = []
    for b in forms:
        x = b.to_dense()
        s = (b + b.transpose()).to_dense() if fld.p == 2 else (b + b.transpose()).to_dense()
        cols.append(np.concatenate([s[iu], s[di, di], x[di, di]]))
    sysm = from_dense(fld, np.array(cols, dtype=np.uint8))
    comb = VectorOps(fld, len(forms)).rows(sysm.nullspace())
    out = []
    for c in comb:
        coeffs = _coeff_list(fld, c, len(forms))
        acc = None
        for k, b in zip(coeffs, forms):
            if k:
                t = b.scale(k)
                acc = t if acc is None else acc + t
        if acc is not None:
            out.append(acc)
    return out


def _coeff_list(fld: GF, v, n: int) -> list[int]:
    if fld.q == 2:
        return [(v >> i) & 1 for i in range(n)]
    return [int(x) for x in v]


def symplectic_certificate(rep: ModuleRep, seed: int = DEFAULT_SEED, trials: int = 256) -> BilinearForm:
    """A nondegenerate alternating invariant form, or NotSymplectic."""
    fld = rep.field
    alts = _alternating_subspace(fld, invariant_forms(rep, seed))
    if not alts:
        raise NotSymplectic("no invariant alternating form")
    k = len(alts)
    if fld.q ** k <= 4096:
        combos = itertools.product(range(fld.q), repeat=k)
    else:
        rng = random.Random(seed)
        combos = (tuple(rng.randrange(fld.q) for _ in range(k)) for _ in range(trials))
    for c in combos:
        acc = None
        for coef, b in zip(c, alts):
            if coef:
                t = b.scale(coef)
                acc = t if acc is None else acc + t
        if acc is not None and acc.rank() == rep.dim:
            form = BilinearForm(acc)
            if form.is_symplectic_for(rep):
                return form
    raise NotSymplectic("invariant alternating forms are all degenerate")


# -- unisingularity ----------------------------------------------------------------------------------------


@dataclass
class UnisingularVerdict:
    status: str  # "true", "false" or "sampled-true"
    checked: int
    mode: str  # "exhaustive" or "sampled"
    witness_index: int | None = None
    witness: object = None
    witness_image: Matrix | None = None

    @property
    def holds(self) -> bool:
        return self.status in ("true", "sampled-true")

    def __bool__(self) -> bool:
        return self.holds


def _batchable(rep: ModuleRep) -> bool:
    return rep.field.q != 2 or rep.dim <= 64


def is_unisingular(rep: ModuleRep, store: ElementStore | None = None, *, samples: int | None = None,
                   spec: GroupSpec | None = None, seed: int = 0, chunk: int = 1 << 15) -> UnisingularVerdict:
    """Every group element has eigenvalue 1 on the module.

    Exhaustive mode walks an enumerated store whose generators correspond to
    ``rep.action``; the witness is the least element in store order.  Sampling
    mode draws ``samples`` product-replacement elements from ``spec`` (or the
    module image) and can only refute.
    """
    if store is not None:
        if len(store.spec.generators) != rep.ngens:
            raise ValueError("store generators do not match the module action")
        if _batchable(rep):
            dom = domain_for(rep.action[0])
            imgs = store.images(rep.action, dom)
            for s in range(0, store.order, chunk):
                sing = dom.singular_minus_identity(imgs[s: s + chunk])
                bad = np.flatnonzero(~sing)
                if bad.size:
                    i = s + int(bad[0])
                    return UnisingularVerdict("false", i + 1, "exhaustive", i, store.element(i), dom.decode(imgs[i]))
            return UnisingularVerdict("true", store.order, "exhaustive")
        imgs = _images_slow(store, rep)
        for i, x in enumerate(imgs):
            if x.det_one_minus() != 0:
                return UnisingularVerdict("false", i + 1, "exhaustive", i, store.element(i), x)
        return UnisingularVerdict("true", store.order, "exhaustive")
    if samples is None:
        raise ValueError("need an enumerated store or a sample budget")
    small = spec.generators if spec is not None else rep.action
    if len(small) != rep.ngens:
        raise ValueError("group generators do not match the module action")
    mul = (lambda a, b: (_mul_any(a[0], b[0], spec), a[1] @ b[1]))
    pairs = [(s, g) for s, g in zip(small, rep.action)]
    ident = (spec.identity() if spec is not None else rep.action[0].identity_like(), rep.action[0].identity_like())
    walker = _PairWalk(pairs, ident, mul, seed)
    for k in range(samples):
        elt, img = walker.next()
        if img.det_one_minus() != 0:
            return UnisingularVerdict("false", k + 1, "sampled", k, elt, img)
    return UnisingularVerdict("sampled-true", samples, "sampled")


def _mul_any(a, b, spec):
    if spec is not None:
        return spec.mul(a, b)
    return a @ b


class _PairWalk(ProductReplacement):
    def __init__(self, gens, ident, mul, seed, slots: int = 10, warmup: int = 50):
        self.rng = random.Random(seed)
        self._mul = mul
        gens = list(gens)
        while len(gens) < 2:
            gens.append(ident)
        self.state = [gens[i % len(gens)] for i in range(max(slots, len(gens)))]
        self.acc = ident
        self.spec = self
        for _ in range(warmup):
            self.next()

    def mul(self, a, b):
        return self._mul(a, b)


def _images_slow(store: ElementStore, rep: ModuleRep) -> list:
    out = [rep.action[0].identity_like()]
    for i in range(1, store.order):
        out.append(out[int(store.parent[i])] @ rep.action[int(store.gen[i])])
    return out


def fixed_space_dim(rep: ModuleRep) -> int:
    """Dimension of the subspace fixed by every generator."""
    fld = rep.field
    blocks = [(g - g.identity_like()).to_dense() for g in rep.action]
    return from_dense(fld, np.hstack(blocks)).nullspace().nrows


# -- constructions on modules ---------------------------------------------------------------------------------


def tensor(a: ModuleRep, b: ModuleRep) -> ModuleRep:
    if a.field != b.field:
        raise FieldMismatch("tensor of modules over different fields")
    if a.ngens != b.ngens:
        raise ValueError("tensor needs matching generator lists")
    return ModuleRep(a.field, a.dim * b.dim, [x.kron(y) for x, y in zip(a.action, b.action)], f"({a.tag}x{b.tag})")


def direct_sum(a: ModuleRep, b: ModuleRep) -> ModuleRep:
    if a.field != b.field:
        raise FieldMismatch("direct sum of modules over different fields")
    if a.ngens != b.ngens:
        raise ValueError("direct sum needs matching generator lists")
    return ModuleRep(a.field, a.dim + b.dim, [x.direct_sum(y) for x, y in zip(a.action, b.action)], f"({a.tag}+{b.tag})")


def restrict(rep: ModuleRep, words: list[list[int]], tag: str | None = None) -> ModuleRep:
    """Restriction to the subgroup generated by the given generator words (indices into rep.action)."""
    mats = []
    for w in words:
        x = rep.action[0].identity_like()
        for i in w:
            x = x @ rep.action[i]
        mats.append(x)
    return ModuleRep(rep.field, rep.dim, mats, tag or rep.tag + "|res")


def frobenius_twist(rep: ModuleRep, times: int = 1) -> ModuleRep:
    fld = rep.field
    if fld.degree == 1:
        raise FieldMismatch("Frobenius twist needs an extension field")
    mats = []
    for g in rep.action:
        mats.append(g.map_entries(lambda a: fld.frobenius(a, times)))
    return ModuleRep(fld, rep.dim, mats, f"{rep.tag}^(F{times})")


def tensor_closure(mods: list[ModuleRep], seed: int = DEFAULT_SEED, max_dim: int = 256,
                   include_trivial: bool = True) -> list[ModuleRep]:
    """Irreducibles reachable by chopping tensor products with the given modules."""
    base = mods
    found: list[ModuleRep] = []

    def add(f: ModuleRep) -> bool:
        for g in found:
            if is_isomorphic(f, g, seed):
                return False
        found.append(f)
        return True

    if include_trivial:
        add(trivial_module(base[0].field, 1, base[0].ngens))
    todo = []
    for m in base:
        for f in chop(m, seed):
            if add(f):
                todo.append(f)
    while todo:
        x = todo.pop(0)
        for m in base:
            if x.dim * m.dim > max_dim:
                continue
            for f in chop(tensor(x, m), seed):
                if add(f):
                    todo.append(f)
    return found
