import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from pqlab import polyring as pr
from pqlab.errors import DomainError, ParameterMismatch

from oracles import schoolbook_mul

X = sympy.Symbol("x")


def _sym_rem(coeffs_p, coeffs_f, q=None):
    kw = {"modulus": q} if q else {}
    p = sympy.Poly(list(reversed(coeffs_p)) or [0], X, **kw)
    f = sympy.Poly(list(reversed(coeffs_f)), X, **kw)
    quo, rem = sympy.div(p, f)
    return quo, rem


def test_long_division_example():
    p = pr.PolyZq.parse("4x^5 - x^4 + 2x^3 + x^2 - 1", None)
    f = pr.PolyZq.parse("x^2 + 1", None)
    quot, rem = pr.poly_divmod(p, f)
    assert str(quot) == "4x^3-x^2-2x+2"
    assert str(rem) == "2x-3"
    assert quot * f + rem == p


@given(st.lists(st.integers(-50, 50), max_size=12), st.lists(st.integers(-50, 50), max_size=5))
def test_division_over_integers_matches_sympy(pc, fc):
    fc = list(fc) + [1]
    quot, rem = pr.poly_divmod(pr.PolyZq(None, tuple(pc)), pr.PolyZq(None, tuple(fc)))
    squo, srem = _sym_rem(pc, fc)
    assert list(reversed(quot.coeffs)) == ([int(c) for c in squo.all_coeffs()] if not squo.is_zero else [])
    assert list(reversed(rem.coeffs)) == ([int(c) for c in srem.all_coeffs()] if not srem.is_zero else [])


@given(st.lists(st.integers(0, 12), max_size=12), st.lists(st.integers(0, 12), min_size=2, max_size=5))
def test_division_mod_prime_identity(pc, fc):
    q = 13
    if fc[-1] % q == 0:
        fc[-1] = 1
    p, f = pr.PolyZq(q, tuple(pc)), pr.PolyZq(q, tuple(fc))
    quot, rem = pr.poly_divmod(p, f)
    assert rem.degree < f.degree
    assert quot * f + rem == p


def test_division_needs_unit_leading_coefficient():
    with pytest.raises(DomainError):
        pr.poly_divmod(pr.PolyZq(None, (1, 2, 3)), pr.PolyZq(None, (1, 2)))
    with pytest.raises(DomainError):
        pr.poly_divmod(pr.PolyZq(None, (1,)), pr.PolyZq(None, ()))


@pytest.mark.parametrize("text,coeffs", [
    ("3x^3+6x^2+6x+3", [3, 6, 6, 3]),
    ("6x^2 - 3x - 5", [-5, -3, 6]),
    ("x^3 + 1", [1, 0, 0, 1]),
    ("-x", [0, -1]),
    ("0", []),
    ("7", [7]),
])
def test_parse(text, coeffs):
    assert pr.parse_coeffs(text) == coeffs


def test_parse_rejects_garbage():
    with pytest.raises(DomainError):
        pr.parse_coeffs("3y^2")


@given(st.lists(st.integers(-9, 9), max_size=8))
def test_render_parse_round_trip(cs):
    trimmed = list(pr.PolyZq(None, tuple(cs)).coeffs)
    assert pr.parse_coeffs(pr.render(trimmed)) == trimmed


@pytest.mark.parametrize("n,q", [(4, 7), (8, 257), (16, 3329), (32, 3329), (64, 8380417), (256, 3329)])
def test_ring_product_matches_schoolbook(n, q):
    rng = random.Random(n * q)
    for _ in range(10):
        a = [rng.randrange(q) for _ in range(n)]
        b = [rng.randrange(q) for _ in range(n)]
        got = pr.RingElem(n, q, tuple(a)) * pr.RingElem(n, q, tuple(b))
        assert list(got.coeffs) == schoolbook_mul(a, b, n, q)


def test_ring_product_matches_sympy_remainder():
    n, q = 8, 17
    rng = random.Random(2)
    a = [rng.randrange(q) for _ in range(n)]
    b = [rng.randrange(q) for _ in range(n)]
    prod = sympy.Poly(list(reversed(a)), X, modulus=q) * sympy.Poly(list(reversed(b)), X, modulus=q)
    rem = sympy.rem(prod, sympy.Poly(X**n + 1, X, modulus=q))
    expected = [int(c) % q for c in reversed(rem.all_coeffs())]
    expected += [0] * (n - len(expected))
    got = pr.RingElem(n, q, tuple(a)) * pr.RingElem(n, q, tuple(b))
    assert list(got.coeffs) == expected


def test_x_to_the_n_is_minus_one():
    n, q = 8, 17
    x = pr.RingElem.from_coeffs([0, 1], n, q)
    acc = pr.RingElem.one(n, q)
    for _ in range(n):
        acc = acc * x
    assert acc == -pr.RingElem.one(n, q)


def test_reduce_negacyclic_agrees_with_division():
    n, q = 4, 7
    p = pr.PolyZq.parse("4x^5 - x^4 + 2x^3 + x^2 - 1", q)
    _, rem = pr.poly_divmod(p, pr.x_pow_n_plus_one(n, q))
    assert pr.reduce_negacyclic(p, n) == pr.RingElem(n, q, tuple(rem.coeffs) + (0,) * (n - len(rem.coeffs)))


ring_elems = st.lists(st.integers(0, 6), min_size=3, max_size=3).map(lambda c: pr.RingElem(3, 7, tuple(c)))


@settings(max_examples=200)
@given(ring_elems, ring_elems, ring_elems)
def test_ring_axioms(a, b, c):
    zero, one = pr.RingElem.zero(3, 7), pr.RingElem.one(3, 7)
    assert a + b == b + a and a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + zero == a and a * one == a and a - a == zero


def test_ring_has_q_to_the_n_elements():
    assert len(set(pr.enumerate_ring(2, 5))) == 25
    assert len(set(pr.enumerate_ring(3, 3))) == 27


def test_mismatched_rings_refused():
    with pytest.raises(ParameterMismatch):
        pr.RingElem.one(4, 7) + pr.RingElem.one(4, 11)
    with pytest.raises(ParameterMismatch):
        pr.RingElem.one(4, 7) * pr.RingElem.one(8, 7)


def test_wrong_length_refused():
    with pytest.raises(DomainError):
        pr.RingElem(4, 7, (1, 2, 3))


def test_centered_representatives():
    assert [pr.centered(c, 7) for c in range(7)] == [0, 1, 2, 3, -3, -2, -1]
    assert [pr.centered(c, 8) for c in range(8)] == [0, 1, 2, 3, 4, -3, -2, -1]
    assert pr.RingElem(4, 7, (6, 0, 3, 4)).inf_norm() == 3


def test_module_operations():
    n, q = 4, 7
    rng = random.Random(1)
    elem = lambda: pr.RingElem(n, q, tuple(rng.randrange(q) for _ in range(n)))
    A = pr.RingMat(((elem(), elem()), (elem(), elem())))
    v = pr.RingVec((elem(), elem()))
    w = A @ v
    for i in range(2):
        assert w[i] == A.rows[i][0] * v[0] + A.rows[i][1] * v[1]
    assert (A.T).rows[0][1] == A.rows[1][0]
    I = pr.RingMat.identity(2, n, q)
    assert I @ v == v and (A @ I).rows == A.rows
    assert v.dot(v) == v[0] * v[0] + v[1] * v[1]


def test_bit_order_highest_degree_first():
    p = pr.bits_to_poly("1001", 4, 7)
    assert str(p) == "x^3+1"
    assert str(pr.scale_half_q(p)) == "4x^3+4"
    assert pr.poly_to_bits(p) == "1001"
    assert pr.poly_to_bits(pr.bits_to_poly("1", 4, 7)) == "0001"


@given(st.text(alphabet="01", max_size=16))
def test_bits_round_trip(bits):
    assert pr.poly_to_bits(pr.bits_to_poly(bits, 16, 3329)) == bits.rjust(16, "0")


@given(st.binary(max_size=32))
def test_bytes_bits_round_trip(data):
    assert pr.bits_to_bytes(pr.bytes_to_bits(data)) == data


@pytest.mark.parametrize("q", [7, 17, 257, 3329, 8380417])
def test_rounding_is_nearest_of_zero_and_half(q):
    h = pr.round_half_up_half(q)
    lo, hi = pr.one_interval(q)
    sample = range(q) if q < 5000 else [*range(2000), *range(q // 4 - 50, q // 4 + 50),
                                          *range(3 * q // 4 - 50, 3 * q // 4 + 50), *range(q - 2000, q)]
    for c in sample:
        d_half = min(abs(c - h), q - abs(c - h))
        d_zero = min(c, q - c)
        assert (lo <= c <= hi) == (d_half <= d_zero)
        assert pr.round_coefficient(c, q) == (1 if d_half <= d_zero else 0)


def test_rounding_at_toy_modulus():
    assert pr.one_interval(7) == (2, 5)
    assert [pr.round_coefficient(c, 7) for c in range(7)] == [0, 0, 1, 1, 1, 1, 0]


@pytest.mark.parametrize("n,q", [(4, 7), (256, 3329), (8, 8380417)])
def test_packing_round_trip(n, q):
    rng = random.Random(q)
    p = pr.RingElem(n, q, tuple(rng.randrange(q) for _ in range(n)))
    data = pr.pack_elem(p)
    assert len(data) == pr.packed_size(n, q)
    assert pr.unpack_elem(data, n, q) == p


def test_unpack_rejects_out_of_range():
    bad = (7).to_bytes(2, "little")  # coefficient 7 with q = 7
    with pytest.raises(DomainError):
        pr.unpack_elem(bad, 4, 7)
    with pytest.raises(DomainError):
        pr.unpack_elem(b"\x00", 4, 7)
