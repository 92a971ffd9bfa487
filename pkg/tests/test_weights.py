import itertools
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unisep.weights import (
    CoprimalityViolated, OrbitTooLarge, PreconditionError, RadicalSigma, RootSystem, TorusLabel, aa1_check,
    aa1_holds, dominance, induced_char_value, is_module_weight, is_radical, n10_count, n16_check, p31_check,
    partitions, rr1_chain, strictly_dominates, torus_restriction_trivial, weyl_orbit, weyl_orbit_eps,
)

# Cartan matrices written out by hand, entry (i, j) = <alpha_i, alpha_j^vee>
CARTAN = {
    ("A", 3): [[2, -1, 0], [-1, 2, -1], [0, -1, 2]],
    ("C", 3): [[2, -1, 0], [-1, 2, -1], [0, -2, 2]],
    ("D", 4): [[2, -1, 0, 0], [-1, 2, -1, -1], [0, -1, 2, 0], [0, -1, 0, 2]],
}

TYPES = [("A", n) for n in range(1, 9)] + [("C", n) for n in range(2, 9)] + [("D", n) for n in range(4, 9)]


@pytest.mark.parametrize("key", list(CARTAN))
def test_cartan_tables(key):
    rs = RootSystem(*key)
    assert rs.cartan.tolist() == CARTAN[key]
    for i in range(rs.n):
        assert list(rs.simple_root(i + 1).omega) == list(rs.cartan[i])


def test_unknown_types_rejected():
    for bad in (("B", 3), ("D", 3), ("C", 1), ("A", 0)):
        with pytest.raises(ValueError):
            RootSystem(*bad)


def test_epsilon_coordinates_of_roots():
    a3 = RootSystem("A", 3)
    assert a3.to_eps(a3.simple_root(1).omega) == (1, -1, 0, 0)
    c3 = RootSystem("C", 3)
    assert c3.to_eps(c3.simple_root(3).omega) == (0, 0, 2)
    d4 = RootSystem("D", 4)
    assert d4.to_eps(d4.simple_root(4).omega) == (0, 0, 1, 1)
    assert d4.to_eps(d4.fundamental(4).omega) == tuple(Fraction(1, 2) for _ in range(4))


@pytest.mark.parametrize("key", TYPES)
def test_epsilon_round_trip(key):
    rs = RootSystem(*key)
    rng = random.Random(hash(key) & 0xFFFF)
    for _ in range(1000):
        w = tuple(rng.randint(-6, 6) for _ in range(rs.n))
        assert rs.from_eps(rs.to_eps(w)) == w
        if key[0] == "A":
            # epsilon-coordinates are defined up to the constant vector
            assert rs.from_eps(tuple(x + 3 for x in rs.to_eps(w))) == w


# -- dominance and radical weights ----------------------------------------------------------------------------


def test_dominance_examples():
    a2 = RootSystem("A", 2)
    w1, w2 = a2.fundamental(1), a2.fundamental(2)
    assert dominance(w1, w1)
    assert not dominance(w1, w2)
    c5 = RootSystem("C", 5)
    assert strictly_dominates(c5.sigma(4), c5.fundamental(1, 5))


def test_radical_examples():
    a2 = RootSystem("A", 2)
    assert is_radical(a2.weight(1, 1))
    assert is_radical(a2.zero())
    assert not is_radical(a2.fundamental(1))
    for n in (3, 4):
        for q in (2, 4, 8):
            assert is_radical(RootSystem("C", n).sigma(q))


def _dominant_grid(rs, bound):
    return [rs.weight(*w) for w in itertools.product(range(bound + 1), repeat=rs.n)]


@pytest.mark.parametrize("key", [("A", 2), ("C", 2), ("A", 3), ("D", 4)])
def test_dominance_is_a_partial_order_on_small_grids(key):
    rs = RootSystem(*key)
    grid = _dominant_grid(rs, 2 if rs.n <= 3 else 1)
    rel = {(a.omega, b.omega): dominance(a, b) for a in grid for b in grid}
    for a in grid:
        assert rel[a.omega, a.omega]
    for a, b in itertools.product(grid, grid):
        if a != b and rel[a.omega, b.omega]:
            assert not rel[b.omega, a.omega]
    for a, b, c in itertools.product(grid, repeat=3):
        if rel[a.omega, b.omega] and rel[b.omega, c.omega]:
            assert rel[a.omega, c.omega]


@settings(max_examples=300)
@given(st.sampled_from(TYPES), st.integers(0, 2**32))
def test_dominance_transitive_on_random_triples(key, s):
    rs = RootSystem(*key)
    rng = random.Random(s)
    a = rs.weight(*(rng.randint(0, 4) for _ in range(rs.n)))
    # build b <= a and c <= b by subtracting nonnegative root combinations
    b = a
    for _ in range(rng.randint(0, 3)):
        b = b - rs.simple_root(rng.randint(1, rs.n))
    c = b
    for _ in range(rng.randint(0, 3)):
        c = c - rs.simple_root(rng.randint(1, rs.n))
    assert dominance(a, b) and dominance(b, c) and dominance(a, c)
    if a != b:
        assert not dominance(b, a)


# -- Weyl orbits -----------------------------------------------------------------------------------------


def test_orbit_examples():
    a2 = RootSystem("A", 2)
    assert weyl_orbit(a2.zero()) == [a2.zero()]
    assert len(weyl_orbit(a2.fundamental(1))) == 3
    assert len(weyl_orbit(RootSystem("C", 2).fundamental(1))) == 4
    # D_n: even sign changes, so the orbit of omega_1 = eps_1 has 2n elements
    assert len(weyl_orbit(RootSystem("D", 5).fundamental(1))) == 10
    assert all(w.is_dominant() == (w == RootSystem("C", 3).fundamental(2))
               for w in weyl_orbit(RootSystem("C", 3).fundamental(2)))


def test_orbit_guard():
    with pytest.raises((OrbitTooLarge, ValueError)):
        weyl_orbit_eps(RootSystem("A", 9), tuple(range(10)))


def test_module_weight_examples():
    c5 = RootSystem("C", 5)
    for q in (2, 4, 8):
        assert is_module_weight(c5.sigma(q), c5.fundamental(1, q + 1))
    lam = c5.weight(1, 0, 2, 0, 1)
    assert is_module_weight(lam, lam)
    a3 = RootSystem("A", 3)
    for q in (2, 4):
        top = a3.fundamental(2, q - 1) + a3.fundamental(1) + a3.fundamental(3)
        assert is_module_weight(top, a3.fundamental(2, q - 1))


# -- torus restriction -----------------------------------------------------------------------------------------


def test_torus_restriction_examples():
    for n, q in [(2, 2), (3, 3), (4, 4)]:
        rs = RootSystem("A", n)
        split = TorusLabel((1,) * (n + 1), q)
        for i in range(1, n + 1):
            assert torus_restriction_trivial(rs.fundamental(i, q - 1).eps, split)
        singer = TorusLabel((n + 1,), q)
        e1 = (1,) + (0,) * n
        assert not torus_restriction_trivial(e1, singer)


@settings(max_examples=500)
@given(st.sampled_from(list(itertools.chain.from_iterable(partitions(k) for k in range(2, 7)))),
       st.sampled_from([2, 3, 4, 5]), st.integers(0, 2**32))
def test_constant_vector_never_changes_restriction(part, q, s):
    rng = random.Random(s)
    label = TorusLabel(part, q)
    eps = [rng.randint(-8, 8) for _ in range(label.size)]
    c = rng.randint(-5, 5)
    assert torus_restriction_trivial(eps, label) == torus_restriction_trivial([x + c for x in eps], label)


@pytest.mark.parametrize("N", [2, 3, 4, 5, 6])
def test_trivial_count_independent_of_block_order(N):
    for part in partitions(N):
        for q in (2, 3, 4):
            rs = RootSystem("A", N - 1)
            for i in range(1, N):
                orbit = weyl_orbit_eps(rs, rs.fundamental(i, q - 1).eps)
                counts = {sum(torus_restriction_trivial(e, TorusLabel(order, q)) for e in orbit)
                          for order in set(itertools.permutations(part))}
                assert len(counts) == 1


def test_induced_character_examples():
    assert induced_char_value(1, (1, 1, 1), 3) == 3
    assert induced_char_value(1, (2, 1), 3) == 1
    assert induced_char_value(1, (3,), 3) == 0
    assert induced_char_value(2, (2, 2), 4) == 2


@pytest.mark.parametrize("N", range(2, 8))
def test_trivial_count_equals_induced_character(N):
    for part in partitions(N):
        for i in range(1, N):
            want = induced_char_value(i, part, N)
            for q in (2, 3, 4):
                assert n10_count(i, TorusLabel(part, q)) == want


def test_fixed_subset_count_against_formula():
    # number of i-subsets fixed by a permutation of the given cycle type, via generating functions
    for N in range(2, 8):
        for part in partitions(N):
            poly = np.array([1])
            for c in part:
                f = np.zeros(c + 1, dtype=int)
                f[0] = f[c] = 1
                poly = np.convolve(poly, f)
            for i in range(1, N):
                assert induced_char_value(i, part, N) == poly[i]


# -- weight existence checks ----------------------------------------------------------------------------


def test_kappa_lambda_examples():
    r = n16_check(2, 2, 1, TorusLabel((3,), 2))
    assert r.holds and r.witness is not None
    assert torus_restriction_trivial(r.witness.eps, TorusLabel((3,), 2))
    assert n16_check(3, 3, 2, TorusLabel((4,), 3)).holds
    for i in (1, 2, 3):
        assert n16_check(3, 4, i, TorusLabel((1, 1, 1, 1), 4)).holds
    with pytest.raises(PreconditionError):
        n16_check(1, 2, 1, TorusLabel((2,), 2))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_kappa_lambda_witness_everywhere(n):
    for q in (2, 3, 4):
        for part in partitions(n + 1):
            for i in range(1, n + 1):
                r = n16_check(n, q, i, TorusLabel(part, q))
                assert r.holds
                assert r.source in ("kappa", "lambda") and r.witness.rs.n == n
                assert torus_restriction_trivial(r.witness.eps, TorusLabel(part, q))


def test_cyclic_torus_examples():
    assert p31_check(2, 2, 1).holds
    assert p31_check(3, 3, 2).holds
    with pytest.raises(CoprimalityViolated):
        # (m^3 - 1)/(m - 1) = 7 for m = 2, and characteristic 7 divides it
        p31_check(2, 2, 1, char=7)
    for n in (1, 2, 3):
        for m in (2, 3, 4):
            for i in range(1, n + 1):
                r = p31_check(n, m, i)
                assert r.holds
                e = r.witness.eps
                order = (m ** (n + 1) - 1) // (m - 1)
                assert sum(int(a) * m ** u for u, a in enumerate(e)) % order == 0


def test_dominance_chain_examples():
    assert rr1_chain("C", 5, 2)
    assert rr1_chain("D", 7, 4)
    assert rr1_chain("C", 2, 4)
    with pytest.raises(RadicalSigma):
        rr1_chain("C", 4, 2)
    with pytest.raises(PreconditionError):
        rr1_chain("C", 2, 2)
    with pytest.raises(PreconditionError):
        rr1_chain("D", 3, 2)
    with pytest.raises(PreconditionError):
        rr1_chain("C", 5, 3)


def test_weight_family_examples():
    assert aa1_holds("C", 5, 4)
    # for D5, q=2 sigma is radical and no multiple of 3 omega_1 lies below it with radical difference
    res = aa1_check("D", 5, 2)
    assert res["(q+1)w1"] is None
    assert is_radical(RootSystem("D", 5).sigma(2))
    for t, ns in (("C", (2, 5, 6, 7)), ("D", (5, 6, 7))):
        for n in ns:
            for q in (2, 4, 8):
                if (t, n, q) == ("C", 2, 2):
                    continue
                if not is_radical(RootSystem(t, n).sigma(q)):
                    assert aa1_holds(t, n, q)
