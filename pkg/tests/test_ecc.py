import hashlib
import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from pqlab import ecc
from pqlab.errors import DomainError, NoLogarithm

from oracles import chord_tangent, curve_points, repeated_add

SMALL_CURVES = [(97, 1, 4), (23, 1, 1), (31, 2, 3), (13, 0, 7), (101, 7, 5)]


def _pt(t):
    return ecc.INFINITY if t is None else ecc.CurvePoint(*t)


def _tuple(P):
    return None if P.is_infinity else (P.x, P.y)


@pytest.mark.parametrize("p,a,b", SMALL_CURVES)
def test_point_set_matches_oracle(p, a, b):
    c = ecc.CurveParams(p, a, b)
    assert sorted(map(_tuple, ecc.enumerate_points(c)), key=str) == sorted(curve_points(p, a, b), key=str)


@pytest.mark.parametrize("p,a,b", SMALL_CURVES)
def test_full_group_table_matches_oracle(p, a, b):
    c = ecc.CurveParams(p, a, b)
    pts = curve_points(p, a, b)
    for P in pts:
        for Q in pts:
            assert _tuple(ecc.compose(_pt(P), _pt(Q), c)) == chord_tangent(P, Q, p, a)


@pytest.mark.parametrize("p,a,b", SMALL_CURVES)
def test_group_axioms(p, a, b):
    c = ecc.CurveParams(p, a, b)
    pts = ecc.enumerate_points(c)
    rng = random.Random(p)
    for _ in range(200):
        P, Q, R = (rng.choice(pts) for _ in range(3))
        assert ecc.compose(P, Q, c) == ecc.compose(Q, P, c)
        assert ecc.compose(ecc.compose(P, Q, c), R, c) == ecc.compose(P, ecc.compose(Q, R, c), c)
        assert ecc.compose(P, ecc.INFINITY, c) == P
        assert ecc.compose(P, ecc.inverse(P, c), c).is_infinity
        assert ecc.on_curve(ecc.compose(P, Q, c), c)


@pytest.mark.parametrize("p,a,b", SMALL_CURVES)
def test_point_pow_matches_repeated_addition(p, a, b):
    c = ecc.CurveParams(p, a, b)
    pts = curve_points(p, a, b)
    for P in pts[1:6]:
        for k in range(0, 40):
            assert _tuple(ecc.point_pow(_pt(P), k, c)) == repeated_add(P, k, p, a)


def test_order_divides_group_size():
    c = ecc.CurveParams(101, 7, 5)
    size = len(ecc.enumerate_points(c))
    for P in ecc.enumerate_points(c)[1:]:
        assert size % ecc.point_order(P, c) == 0


@pytest.mark.parametrize("name", sorted(ecc.PRESETS))
def test_presets_have_prime_order(name):
    c, G, order = ecc.preset(name)
    assert sympy.isprime(order)
    assert ecc.on_curve(G, c)
    assert ecc.point_pow(G, order, c).is_infinity
    assert not ecc.point_pow(G, 1, c).is_infinity


def test_small_preset_group_size():
    c, _, order = ecc.preset("f97")
    assert len(ecc.enumerate_points(c)) == order


@pytest.mark.parametrize("a,b", [(0, 0), (-3, 2)])
def test_singular_curves_rejected(a, b):
    with pytest.raises(DomainError):
        ecc.CurveParams(97, a, b)


def test_composite_field_rejected():
    with pytest.raises(DomainError):
        ecc.CurveParams(91, 1, 1)


def test_dlog_bruteforce():
    c, G, order = ecc.preset("f97")
    for s in (1, 2, 17, order - 1):
        assert ecc.ec_dlog_bruteforce(G, ecc.point_pow(G, s, c), c) == s


def test_dlog_outside_subgroup():
    c = ecc.CurveParams(101, 7, 5)
    pts = ecc.enumerate_points(c)
    small = min(pts[1:], key=lambda P: ecc.point_order(P, c))
    other = next(P for P in pts[1:] if ecc.point_order(P, c) > ecc.point_order(small, c))
    with pytest.raises(NoLogarithm):
        ecc.ec_dlog_bruteforce(small, other, c)


@settings(max_examples=50)
@given(st.integers(0, 2**32))
def test_ecdh_agreement(seed):
    rng = random.Random(seed)
    c, G, order = ecc.preset("f65521")
    sa, Pa = ecc.ecdh_keypair(G, order, c, rng)
    sb, Pb = ecc.ecdh_keypair(G, order, c, rng)
    assert ecc.ecdh_shared(sa, Pb, c) == ecc.ecdh_shared(sb, Pa, c) == ecc.point_pow(G, sa * sb % order, c)


def test_ecdh_rejects_off_curve_key():
    c, G, order = ecc.preset("f97")
    with pytest.raises(DomainError):
        ecc.ecdh_shared(3, ecc.CurvePoint(1, 1), c)


@settings(max_examples=50)
@given(st.binary(max_size=64), st.integers(0, 2**32))
def test_ecdsa_sign_verify(msg, seed):
    rng = random.Random(seed)
    c, G, order = ecc.preset("f65521")
    s, P = ecc.ecdh_keypair(G, order, c, rng)
    z = int.from_bytes(hashlib.sha3_256(msg).digest(), "big")
    sig = ecc.ecdsa_sign(z, s, G, order, c, rng)
    assert ecc.ecdsa_verify(z, sig, P, G, order, c)
    assert not ecc.ecdsa_verify(z + 1, sig, P, G, order, c)
    assert not ecc.ecdsa_verify(z, (sig[0], (sig[1] + 1) % order or 1), P, G, order, c)


def test_ecdsa_skips_degenerate_nonce():
    c, G, order = ecc.preset("f97")
    assert G.x % order == 0  # nonce 1 gives r = 0 and must be skipped
    sig = ecc.ecdsa_sign(5, 3, G, order, c, None, _nonce=[1, 7])
    assert sig == ecc.ecdsa_sign(5, 3, G, order, c, None, _nonce=[7])
    assert ecc.ecdsa_verify(5, sig, ecc.point_pow(G, 3, c), G, order, c)


def test_ecdsa_rejects_out_of_range_signature():
    c, G, order = ecc.preset("f97")
    P = ecc.point_pow(G, 3, c)
    assert not ecc.ecdsa_verify(5, (0, 1), P, G, order, c)
    assert not ecc.ecdsa_verify(5, (1, order), P, G, order, c)


@pytest.mark.parametrize("name", sorted(ecc.PRESETS))
def test_elgamal_round_trip(name):
    c, G, order = ecc.preset(name)
    rng = random.Random(3)
    s, P = ecc.ecdh_keypair(G, order, c, rng)
    for m in range(c.p // 64):
        M = ecc.embed_message(m, c)
        x = ecc.elgamal_decrypt(ecc.elgamal_encrypt(M, P, G, order, c, rng), s, c)
        assert x == M.x and x // 64 == m
        if m > 20:
            break
