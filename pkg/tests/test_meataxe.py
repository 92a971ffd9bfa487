import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unisep.bitmatrix import BitMatrix
from unisep.builders import build, natural_module, permutation_module, sl2_generators, steinberg_sl2
from unisep.fields import field
from unisep.groups import GroupSpec, element_order, enumerate_group, perm_from_cycles
from unisep.linalg import identity, random_invertible, rank
from unisep.meataxe import (
    FieldMismatch, ModuleRep, NotSymplectic, composition_factor_dims, direct_sum, dual, endomorphism_dim,
    fingerprint, fixed_space_dim, frobenius_twist, has_trivial_composition_factor, invariant_forms,
    is_absolutely_irreducible, is_irreducible, is_isomorphic, is_unisingular, restrict, spin, symplectic_certificate,
    tensor, trivial_module,
)


@pytest.fixture(scope="module")
def agl():
    b = build("agl2_3")
    return b, enumerate_group(b.spec)


def _sym9():
    return GroupSpec("S9", [perm_from_cycles(9, (0, 1)), perm_from_cycles(9, tuple(range(9)))])


# -- spinning and irreducibility ------------------------------------------------------------------------------


def test_spin_examples(agl):
    perm = permutation_module(_sym9())
    ones = (1 << 9) - 1
    assert spin(perm, [ones]).dim == 1
    b, _ = agl
    assert spin(b.module, [1]).dim == 8
    assert spin(b.module, [0]).dim == 0


def test_irreducibility_examples(agl):
    b, _ = agl
    res = is_irreducible(b.module)
    assert res.irreducible and res.submodule is None
    d8 = build("3^2:D8")
    res = is_irreducible(d8.module)
    assert not res.irreducible
    sub = res.submodule
    assert 0 < sub.nrows < 8
    # the witness really is invariant
    for g in d8.module.action:
        assert rank(sub.stack(sub @ g)) == sub.nrows
    one = ModuleRep(field(4), 1, [identity(4, 1).scale(2)])
    assert is_irreducible(one).irreducible


def test_composition_factor_examples(agl):
    b, _ = agl
    perm = permutation_module(b.spec)
    assert [d for d, _ in composition_factor_dims(perm)] == [1, 8]
    assert [d for d, _ in composition_factor_dims(build("3^2:D8").module)] == [4, 4]
    assert [d for d, _ in composition_factor_dims(permutation_module(build("3^2:D8").spec))] == [1, 4, 4]


def test_chop_is_seed_independent():
    for rid in ("3^2:D8", "e9_sp8", "agl2_3_plus_sp2"):
        m = build(rid).module
        ref = composition_factor_dims(m, seed=1)
        assert sum(d for d, _ in ref) == m.dim
        for s in (2, 17, 99):
            assert composition_factor_dims(m, seed=s) == ref


def test_absolute_irreducibility(agl):
    b, _ = agl
    assert is_absolutely_irreducible(b.module)
    assert is_absolutely_irreducible(trivial_module(field(2), 1))
    # over GF(2) a 2-dim module of C3 is irreducible but splits over GF(4)
    c3 = ModuleRep(field(2), 2, [BitMatrix.from_dense([[0, 1], [1, 1]])])
    assert is_irreducible(c3).irreducible
    assert endomorphism_dim(c3) == 2 and not is_absolutely_irreducible(c3)


# -- forms ---------------------------------------------------------------------------------------------------


@pytest.mark.parametrize("rid", ["agl2_3", "l3_2_2", "sl3_2", "s9", "psu3_2", "sp4_2"])
def test_symplectic_certificate_properties(rid):
    rep = build(rid).module
    cert = symplectic_certificate(rep)
    B = cert.gram
    for g in rep.action:
        assert g @ B @ g.transpose() == B
    assert all(B[i, i] == 0 for i in range(B.nrows))
    assert B == B.transpose()
    assert B.rank() == rep.dim
    assert cert.is_symplectic_for(rep)


def test_trivial_group_forms():
    rep = trivial_module(field(2), 4)
    assert len(invariant_forms(rep)) == 16
    assert symplectic_certificate(rep).is_nondegenerate
    with pytest.raises(NotSymplectic):
        symplectic_certificate(trivial_module(field(2), 3))


def test_dual_of_symplectic_module_is_isomorphic(agl):
    b, _ = agl
    d = dual(b.module)
    assert fingerprint(d) == fingerprint(b.module)
    assert is_isomorphic(d, b.module)


# -- unisingularity --------------------------------------------------------------------------------------


def test_unisingular_examples(agl):
    b, store = agl
    v = is_unisingular(b.module, store)
    assert v.status == "true" and v.checked == 432 and v.mode == "exhaustive"
    st4 = steinberg_sl2(4)
    v = is_unisingular(st4.module, enumerate_group(st4.spec))
    assert v.status == "false"
    assert v.witness_image.det_one_minus() != 0
    assert element_order(v.witness_image) == 5
    triv = trivial_module(field(2), 5, 2)
    spec = GroupSpec("C2xC2", [perm_from_cycles(4, (0, 1)), perm_from_cycles(4, (2, 3))])
    assert is_unisingular(triv, enumerate_group(spec)).status == "true"


def test_sampled_mode_never_claims_proof(agl):
    b, _ = agl
    v = is_unisingular(b.module, samples=500, spec=b.spec, seed=3)
    assert v.status == "sampled-true" and v.mode == "sampled"
    neg = build("sl2_8")
    v = is_unisingular(neg.module, samples=500, spec=neg.spec, seed=3)
    assert v.status == "false" and v.witness_image.det_one_minus() != 0
    with pytest.raises(ValueError):
        is_unisingular(b.module)


def test_trivial_factor_examples(agl):
    assert not has_trivial_composition_factor(build("e9_sp8").module)
    b, _ = agl
    assert has_trivial_composition_factor(permutation_module(b.spec))
    assert has_trivial_composition_factor(trivial_module(field(2), 3))
    # a nontrivial 1-dim action over GF(4) is not a trivial factor
    w = ModuleRep(field(4), 1, [identity(4, 1).scale(2)])
    assert not has_trivial_composition_factor(w)


def test_fixed_space(agl):
    b, _ = agl
    assert fixed_space_dim(b.module) == 0
    assert fixed_space_dim(permutation_module(b.spec)) == 1


# -- constructions ---------------------------------------------------------------------------------------


def test_tensor_dual_twist():
    nat = natural_module(sl2_generators(4), "nat")
    tw = frobenius_twist(nat)
    prod = tensor(nat, tw)
    assert prod.dim == 4
    assert is_irreducible(prod).irreducible and is_absolutely_irreducible(prod)
    for g, h in zip(nat.action, tw.action):
        assert h == g.map_entries(lambda a: field(4).mul(a, a))
    with pytest.raises(FieldMismatch):
        frobenius_twist(build("agl2_3").module)
    with pytest.raises(FieldMismatch):
        tensor(nat, build("agl2_3").module)
    a = trivial_module(field(3), 4)
    b = trivial_module(field(3), 6)
    assert tensor(a, b).dim == 24


def test_restriction_of_extension_to_sl3_is_irreducible():
    ext = build("l3_2_2")
    # all generators but the last (the graph automorphism) generate the SL3(2) image
    res = restrict(ext.module, [[i] for i in range(ext.module.ngens - 1)])
    assert res.action == build("sl3_2").module.action
    assert is_irreducible(res).irreducible
    assert enumerate_group(res.group_spec()).order == 168


def test_direct_sum_law_small():
    # a unisingular summand forces unisingularity of the sum with anything
    c3 = ModuleRep(field(2), 2, [BitMatrix.from_dense([[0, 1], [1, 1]])])
    spec = GroupSpec("C3", [perm_from_cycles(3, (0, 1, 2))])
    store = enumerate_group(spec)
    assert is_unisingular(c3, store).status == "false"
    triv = trivial_module(field(2), 1)
    assert is_unisingular(direct_sum(c3, triv), store).status == "true"


# -- basis independence ----------------------------------------------------------------------------------------


@settings(max_examples=25)
@given(st.sampled_from(["agl2_3", "3^2:D8", "psu3_2", "sl3_2"]), st.integers(0, 2**32))
def test_basis_change_invariance(rid, s):
    b = build(rid)
    store = enumerate_group(b.spec)
    p = random_invertible(2, b.module.dim, s)
    m2 = b.module.conjugate(p)
    assert is_unisingular(m2, store).status == is_unisingular(b.module, store).status
    assert is_irreducible(m2, seed=s % 1000).irreducible == is_irreducible(b.module).irreducible
    assert composition_factor_dims(m2, seed=s % 1000) == composition_factor_dims(b.module)
    if is_irreducible(b.module).irreducible:
        assert is_absolutely_irreducible(m2) == is_absolutely_irreducible(b.module)
