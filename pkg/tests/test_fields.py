import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unisep.fields import CONWAY, SUPPORTED_ORDERS, FieldError, field
from unisep.poly import Poly, factor, is_irreducible, product


@pytest.mark.parametrize("q", SUPPORTED_ORDERS)
def test_field_axioms(q):
    F = field(q)
    els = list(F.elements())
    assert len(els) == q
    for a, b in itertools.product(els, els):
        assert F.add(a, b) == F.add(b, a)
        assert F.mul(a, b) == F.mul(b, a)
        assert F.sub(F.add(a, b), b) == a
        if b:
            assert F.mul(F.div(a, b), b) == a
    nonzero = [a for a in els if a]
    # the multiplicative group is cyclic of order q - 1
    orders = {a: next(k for k in range(1, q) if F.pow(a, k) == F.one) for a in nonzero}
    assert max(orders.values()) == q - 1


@pytest.mark.parametrize("q", SUPPORTED_ORDERS)
def test_generator_is_root_of_conway_polynomial(q):
    F = field(q)
    # extension fields encode g as the integer p; prime fields use the least primitive root
    g = F.p if F.p != q else (-CONWAY[q][0]) % q
    value = 0
    for k, c in enumerate(CONWAY[q]):
        value = F.add(value, F.mul(F.from_int(c), F.pow(g, k)))
    assert value == 0
    assert next(k for k in range(1, q) if F.pow(g, k) == F.one) == q - 1


@pytest.mark.parametrize("q", SUPPORTED_ORDERS)
def test_digit_round_trip(q):
    F = field(q)
    assert [F.from_digit(F.to_digit(a)) for a in F.elements()] == list(F.elements())
    assert F.to_digit(F.zero) == "0" and F.to_digit(F.one) == "1"


@pytest.mark.parametrize("q", [1, 6, 10, 12, 17, 32])
def test_unsupported_orders(q):
    with pytest.raises(FieldError):
        field(q)


def test_frobenius_is_additive_automorphism():
    for q in (4, 8, 9, 16):
        F = field(q)
        for a, b in itertools.product(F.elements(), F.elements()):
            assert F.frobenius(F.add(a, b)) == F.add(F.frobenius(a), F.frobenius(b))
            assert F.frobenius(F.mul(a, b)) == F.mul(F.frobenius(a), F.frobenius(b))


# -- polynomials -------------------------------------------------------------------------------------


def test_factor_examples():
    F = field(2)
    x3p1 = Poly(F, [1, 0, 0, 1])
    assert sorted(factor(x3p1)) == sorted([(Poly(F, [1, 1]), 1), (Poly(F, [1, 1, 1]), 1)])
    assert factor(Poly(F, [1, 1])) == [(Poly(F, [1, 1]), 1)]
    x4x2 = Poly(F, [0, 0, 1, 0, 1])
    assert sorted(factor(x4x2)) == sorted([(Poly(F, [0, 1]), 2), (Poly(F, [1, 1]), 2)])
    with pytest.raises(ValueError):
        factor(Poly.zero(F))


def test_factor_reassembly_exhaustive_f2():
    F = field(2)
    for bits in range(2, 1 << 13):
        p = Poly.from_bits(bits)
        fs = factor(p)
        assert product(fs, F) == p
        assert all(is_irreducible(f) for f, _ in fs)


def _irreducible_by_trial_division(p: Poly) -> bool:
    F = p.field
    for d in range(1, p.degree // 2 + 1):
        for tail in itertools.product(range(F.q), repeat=d):
            if (p % Poly(F, list(tail) + [1])).is_zero():
                return False
    return True


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_irreducibility_agrees_with_trial_division(q):
    F = field(q)
    rng = random.Random(q)
    for _ in range(150):
        d = rng.randint(1, 5)
        p = Poly(F, [rng.randrange(q) for _ in range(d)] + [1])
        assert is_irreducible(p) == _irreducible_by_trial_division(p)


@pytest.mark.parametrize("q", SUPPORTED_ORDERS)
def test_factor_reassembly_random(q):
    F = field(q)
    rng = random.Random(1000 + q)
    for _ in range(1000):
        d = rng.randint(1, 12)
        p = Poly(F, [rng.randrange(q) for _ in range(d)] + [rng.randrange(1, q)])
        fs = factor(p, seed=rng.randrange(100))
        assert product(fs, F) == p.monic()
        assert all(f.leading == F.one for f, _ in fs)


@settings(max_examples=200)
@given(st.sampled_from(SUPPORTED_ORDERS), st.lists(st.integers(0, 15), min_size=1, max_size=8),
       st.lists(st.integers(0, 15), min_size=1, max_size=8))
def test_poly_ring_laws(q, a, b):
    F = field(q)
    pa, pb = Poly(F, [c % q for c in a]), Poly(F, [c % q for c in b])
    assert pa * pb == pb * pa
    assert (pa + pb) - pb == pa
    if not pb.is_zero():
        quo, rem = divmod(pa, pb)
        assert quo * pb + rem == pa
        assert rem.is_zero() or rem.degree < pb.degree
