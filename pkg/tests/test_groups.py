import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unisep.bitmatrix import BitMatrix
from unisep.builders import build, gl_generators, sp_transvection_generators
from unisep.groups import (
    CapExceeded, GroupSpec, ProductReplacement, batch_orbit_counts, center, conjugating_element, element_order,
    enumerate_group, group_order, max_element_order, orbit_count, perm_from_cycles, perm_inverse, perm_mul,
    random_element,
)
from unisep.linalg import from_dense


def _s3():
    return GroupSpec("S3", [perm_from_cycles(3, (0, 1)), perm_from_cycles(3, (0, 1, 2))])


def _gl_order(n: int, q: int) -> int:
    return math.prod(q**n - q**i for i in range(n))


def test_orders_of_small_groups():
    assert enumerate_group(_s3()).order == 6
    sl32 = GroupSpec("SL3(2)", gl_generators(3, 2))
    assert group_order(sl32) == _gl_order(3, 2) == 168
    assert group_order(GroupSpec("GL2(3)", gl_generators(2, 3))) == _gl_order(2, 3)
    assert group_order(build("agl2_3").spec) == 9 * _gl_order(2, 3) == 432


def test_cap_exceeded():
    with pytest.raises(CapExceeded):
        enumerate_group(GroupSpec("GL3(2)", gl_generators(3, 2)), cap=100)


def test_enumeration_is_deterministic_and_generator_order_independent_as_a_set():
    spec = build("agl2_3").spec
    a, b = enumerate_group(spec), enumerate_group(spec)
    assert np.array_equal(a.canonical_bytes(), b.canonical_bytes())
    rev = enumerate_group(GroupSpec("rev", list(reversed(spec.generators))))
    key = lambda s: sorted(map(bytes, s.canonical_bytes()))
    assert rev.order == a.order and key(rev) == key(a)


@pytest.mark.parametrize("rid", ["agl2_3", "sl3_2", "psu3_2", "agl1_9"])
def test_store_invariants(rid):
    store = enumerate_group(build(rid).spec)
    spec = store.spec
    assert store.index(spec.identity()) == 0
    assert store.check_closure(pairs=100, seed=1)
    rng = random.Random(0)
    for _ in range(100):
        x, y = store.element(rng.randrange(store.order)), store.element(rng.randrange(store.order))
        assert store.contains(spec.mul(x, y))
        assert store.contains(spec.inverse(x))
    orders = store.element_orders()
    assert all(store.order % int(o) == 0 for o in orders)
    # words replay to the stored element
    i = store.order - 1
    w = spec.identity()
    for g in store.word(i):
        w = spec.mul(w, spec.generators[g])
    assert store.index(w) == i


def test_element_order_examples():
    assert element_order(BitMatrix.identity(4)) == 1
    assert element_order(from_dense(2, [[0, 1], [1, 1]])) == 3
    assert element_order(perm_from_cycles(7, (0, 1, 2, 3, 4))) == 5
    with pytest.raises(CapExceeded):
        element_order(perm_from_cycles(7, (0, 1, 2, 3, 4)), cap=4)


def test_max_element_order_examples():
    assert max_element_order(enumerate_group(GroupSpec("GL3(2)", gl_generators(3, 2)))) == 7
    assert max_element_order(enumerate_group(build("agl2_3").spec)) < 9
    assert max_element_order(enumerate_group(GroupSpec("1", [BitMatrix.identity(3)]))) == 1


def test_orbit_count_examples():
    assert orbit_count(perm_from_cycles(9, tuple(range(9)))) == 1
    store = enumerate_group(build("agl2_3").spec)
    counts = batch_orbit_counts(store.data)
    assert counts.min() >= 2
    rng = random.Random(3)
    for i in rng.sample(range(store.order), 50):
        assert counts[i] == orbit_count(store.element(i))


@settings(max_examples=300)
@given(st.permutations(list(range(12))))
def test_orbit_sizes_sum_to_degree(p):
    p = tuple(p)
    seen, sizes = set(), []
    for s in range(len(p)):
        if s in seen:
            continue
        k, x = 0, s
        while x not in seen:
            seen.add(x)
            x = p[x]
            k += 1
        sizes.append(k)
    assert sum(sizes) == len(p) and len(sizes) == orbit_count(p)
    assert batch_orbit_counts(np.array([p]))[0] == orbit_count(p)


def test_perm_product_convention():
    x, y = perm_from_cycles(3, (0, 1)), perm_from_cycles(3, (1, 2))
    # x then y: 0 -> 1 -> 2
    assert perm_mul(x, y)[0] == 2
    assert perm_mul(x, perm_inverse(x)) == (0, 1, 2)


def test_center_examples():
    c6 = GroupSpec("C6", [perm_from_cycles(6, (0, 1, 2, 3, 4, 5))])
    assert len(center(enumerate_group(c6))) == 6
    assert len(center(enumerate_group(_s3()))) == 1
    b = build("agl2_3")
    img = enumerate_group(b.module.group_spec("img"))
    assert img.order == 432 and len(center(img)) == 1


def test_random_element_membership_and_determinism():
    store = enumerate_group(_s3())
    for s in range(20):
        x = random_element(_s3(), s)
        assert store.contains(x)
        assert x == random_element(_s3(), s)


def test_sp8_samples_are_invertible():
    spec = GroupSpec("Sp8(2)", sp_transvection_generators(8))
    walk = ProductReplacement(spec, seed=5)
    for _ in range(10_000):
        assert walk.next().is_invertible()


def test_sp6_samples_have_no_element_of_order_21():
    spec = GroupSpec("Sp6(2)", sp_transvection_generators(6))
    walk = ProductReplacement(spec, seed=11)
    assert all(element_order(walk.next()) != 21 for _ in range(10_000))


def test_conjugating_element():
    parent = enumerate_group(build("agl2_3").spec)
    a = enumerate_group(build("agl1_9").spec)
    rng = random.Random(2)
    g = parent.element(rng.randrange(parent.order))
    gi = perm_inverse(g)
    conj = GroupSpec("conj", [perm_mul(perm_mul(gi, x), g) for x in a.spec.generators])
    b = enumerate_group(conj)
    p = conjugating_element(parent, a, b)
    assert p is not None
    pi = perm_inverse(p)
    images = {perm_mul(perm_mul(pi, a.element(i)), p) for i in range(a.order)}
    assert images == {b.element(i) for i in range(b.order)}
