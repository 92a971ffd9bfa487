import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unisep.bitmatrix import BitMatrix
from unisep.fields import SUPPORTED_ORDERS, field
from unisep.linalg import (
    char_poly, det_one_minus, from_dense, identity, min_poly_of_vector, nullspace, permutation_matrix, random_invertible,
    random_matrix, rank, solve_invariant_system,
)
from unisep.matio import ParseError, format_matrices, parse_matrices
from unisep.poly import Poly


def _leibniz_det(fld, a: np.ndarray) -> int:
    """Determinant by the permutation expansion; independent of any elimination code."""
    n = a.shape[0]
    total = fld.zero
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = fld.one
        for i in range(n):
            term = fld.mul(term, int(a[i, perm[i]]))
        total = fld.sub(total, term) if inv % 2 else fld.add(total, term)
    return total


bit_matrices = st.builds(lambda n, s: BitMatrix.random(n, rng=np.random.default_rng(s)),
                         st.integers(2, 64), st.integers(0, 2**32))


# -- fixed examples --------------------------------------------------------------------------------------


def test_char_poly_examples():
    F = field(2)
    assert char_poly(identity(F, 3)) == Poly(F, [1, 1]) ** 3
    comp = from_dense(F, [[0, 1], [1, 1]])
    assert char_poly(comp) == Poly(F, [1, 1, 1])
    cyc = permutation_matrix(F, (1, 2, 0))
    assert char_poly(cyc) == Poly(F, [1, 0, 0, 1])


def test_det_one_minus_examples():
    F = field(2)
    for n in (1, 5, 40):
        assert det_one_minus(identity(F, n)) == 0
    assert det_one_minus(from_dense(F, [[0, 1], [1, 1]])) == 1
    assert det_one_minus(permutation_matrix(F, (1, 2, 0))) == 0


def test_nullspace_examples():
    F = field(2)
    assert nullspace(BitMatrix.zeros(6, 6)).nrows == 6
    assert nullspace(identity(F, 6)).nrows == 0
    cyc = permutation_matrix(F, (1, 2, 0)) + identity(F, 3)
    ns = nullspace(cyc)
    assert ns.nrows == 1 and ns.to_dense().tolist() == [[1, 1, 1]]


def test_dimension_mismatch_errors():
    with pytest.raises(ValueError):
        BitMatrix.identity(3) @ BitMatrix.identity(4)
    with pytest.raises(ValueError):
        char_poly(BitMatrix.zeros(2, 3))


# -- properties over GF(2) -----------------------------------------------------------------------------------


@settings(max_examples=1000)
@given(bit_matrices)
def test_det_one_minus_equals_char_poly_at_one(m):
    cp = char_poly(m)
    assert cp.degree == m.nrows and cp.leading == 1
    d = det_one_minus(m)
    assert d == cp(1) == cp.coefficient_sum() % 2


@settings(max_examples=200)
@given(bit_matrices, st.integers(0, 2**32))
def test_char_poly_conjugation_invariant(m, s):
    p = random_invertible(2, m.nrows, s)
    assert char_poly(p @ m @ p.inverse()) == char_poly(m)


@settings(max_examples=300)
@given(st.integers(1, 80), st.integers(1, 80), st.integers(0, 2**32))
def test_rank_nullity_f2(r, c, s):
    m = BitMatrix.from_dense(np.random.default_rng(s).integers(0, 2, (r, c), dtype=np.uint8))
    ns = nullspace(m)
    assert rank(m) + ns.nrows == r
    if ns.nrows:
        assert (ns @ m).is_zero()


@settings(max_examples=200)
@given(st.integers(1, 70), st.integers(0, 2**32))
def test_bitmatrix_group_laws(n, s):
    rng = np.random.default_rng(s)
    a, b, c = (BitMatrix.random(n, rng=rng) for _ in range(3))
    assert (a @ b) @ c == a @ (b @ c)
    dense = (a.to_dense().astype(int) @ b.to_dense().astype(int)) % 2
    assert np.array_equal((a @ b).to_dense(), dense)
    if a.is_invertible():
        assert a @ a.inverse() == BitMatrix.identity(n)


# -- properties over small fields ------------------------------------------------------------------------------


@pytest.mark.parametrize("q", SUPPORTED_ORDERS)
def test_small_field_det_against_permutation_expansion(q):
    F = field(q)
    rng = np.random.default_rng(q)
    for _ in range(25):
        n = int(rng.integers(1, 5))
        m = random_matrix(F, n, rng)
        a = m.to_dense()
        assert m.det() == _leibniz_det(F, a)
        minus = np.array([[F.sub(int(a[i, j]), F.one if i == j else 0) for j in range(n)] for i in range(n)])
        assert det_one_minus(m) == _leibniz_det(F, minus)
        # det(xI - m) at x = 1 is (-1)^n det(m - I)
        sign = F.one if n % 2 == 0 else F.neg(F.one)
        assert char_poly(m)(F.one) == F.mul(sign, det_one_minus(m))


@pytest.mark.parametrize("q", SUPPORTED_ORDERS)
def test_small_field_properties(q):
    F = field(q)
    rng = np.random.default_rng(100 + q)
    for _ in range(20):
        n = int(rng.integers(2, 9))
        m = random_matrix(F, n, rng)
        p = random_invertible(F, n, rng)
        assert char_poly(p @ m @ p.inverse()) == char_poly(m)
        assert rank(m) + nullspace(m).nrows == n
        assert p @ p.inverse() == identity(F, n)
        # Cayley-Hamilton and the vector minimal polynomial divides the characteristic polynomial
        assert char_poly(m).evaluate_matrix(m).is_zero()
        # vectors are ints over GF(2) and code arrays otherwise
        v = 1 if q == 2 else np.eye(n, dtype=np.uint8)[0]
        assert (char_poly(m) % min_poly_of_vector(m, v)).is_zero()


def test_solve_invariant_system_commutant():
    F = field(3)
    rng = np.random.default_rng(7)
    a = random_invertible(F, 4, rng)
    sols = solve_invariant_system([(a, a)], (4, 4))
    for x in sols:
        assert a @ x == x @ a
    # a generic matrix has a cyclic commutant of dimension n
    if char_poly(a) == min_poly_of_vector(a, np.array([1, 0, 0, 0], dtype=np.uint8)):
        assert len(sols) == 4
    with pytest.raises(ValueError):
        solve_invariant_system([(a, identity(F, 3))], (4, 4))


# -- matrix text format ------------------------------------------------------------------------------------


@pytest.mark.parametrize("q", SUPPORTED_ORDERS)
def test_matrix_text_round_trip(q):
    rng = np.random.default_rng(q)
    ms = [random_matrix(q, 5, rng) for _ in range(3)]
    text = format_matrices(ms)
    back = parse_matrices(text)
    assert back == ms
    assert format_matrices(back) == text


def test_parse_errors_name_lines():
    with pytest.raises(ParseError) as e:
        parse_matrices("feld 2\ndim 2\n10\n01\n")
    assert e.value.line == 1
    with pytest.raises(ParseError) as e:
        parse_matrices("field 6\ndim 2\n10\n01\n")
    assert e.value.line == 1
    with pytest.raises(ParseError) as e:
        parse_matrices("field 2\ndim 2\n10\n012\n")
    assert e.value.line == 4
    with pytest.raises(ParseError) as e:
        parse_matrices("field 3\ndim 1\n3\n")
    assert e.value.line == 3
