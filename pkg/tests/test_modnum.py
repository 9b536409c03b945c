import math

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from pqlab import modnum
from pqlab.errors import DomainError, NoLogarithm, NotInvertible, NotPeriodic

from oracles import naive_inverse, naive_order, naive_pow


def test_worked_values():
    cert = modnum.bezout(63, 17)
    assert cert.g == 1 and cert.holds()
    assert cert.satisfied_by(-7, 26)
    assert modnum.mod_inverse(157, 2668) == 17
    assert modnum.mod_reduce(39 * 99 + 95 * 64, 19) == 4
    assert modnum.mod_reduce(129537, 9) == 0
    assert modnum.period(2, 5) == 4
    assert modnum.discrete_log(2, 5, 11) == 4


def test_reduce_negative_lands_in_range():
    assert modnum.mod_reduce(-3, 7) == 4
    assert modnum.mod_reduce(-14, 7) == 0
    assert int(modnum.mod_reduce(-1, 1)) == 0


def test_residue_rejects_unreduced_value():
    with pytest.raises(DomainError):
        modnum.Residue(7, 7)


@pytest.mark.parametrize("bad", [0, -5])
def test_nonpositive_modulus_rejected(bad):
    with pytest.raises(DomainError):
        modnum.mod_reduce(3, bad)


def test_gcd_zero_zero_rejected():
    with pytest.raises(DomainError):
        modnum.gcd(0, 0)


@given(st.integers(-10**12, 10**12), st.integers(1, 10**6))
def test_reduce_matches_python_mod(a, n):
    r = modnum.mod_reduce(a, n)
    assert 0 <= int(r) < n and (a - int(r)) % n == 0


@given(st.integers(0, 10**9), st.integers(0, 10**9))
def test_bezout_certificate(a, b):
    if a == b == 0:
        return
    cert = modnum.bezout(a, b)
    assert cert.g == math.gcd(a, b)
    assert a * cert.x + b * cert.y == cert.g


@given(st.integers(1, 3000), st.integers(2, 3000))
def test_inverse_against_exhaustive_search(a, n):
    expected = naive_inverse(a, n)
    if expected is None:
        with pytest.raises(NotInvertible):
            modnum.mod_inverse(a, n)
    else:
        assert modnum.mod_inverse(a, n) == expected


@given(st.integers(-100, 100), st.integers(0, 300), st.integers(1, 500))
def test_pow_against_repeated_multiplication(a, x, n):
    assert modnum.mod_pow(a, x, n) == naive_pow(a, x, n)


@given(st.integers(2, 400).flatmap(lambda n: st.tuples(st.integers(1, n - 1), st.just(n))))
def test_period_against_oracle(an):
    a, n = an
    if math.gcd(a, n) != 1:
        with pytest.raises(NotPeriodic):
            modnum.period(a, n)
    else:
        assert modnum.period(a, n) == naive_order(a, n) == sympy.n_order(a, n)


@settings(max_examples=200)
@given(st.integers(2, 200).flatmap(lambda n: st.tuples(st.integers(1, n - 1), st.integers(0, 3 * n), st.just(n))))
def test_discrete_log_is_smallest_exponent(args):
    a, x, n = args
    powers = [naive_pow(a, y, n) for y in range(2 * n + 2)]
    if x % n in powers:
        assert modnum.discrete_log(a, x, n) == powers.index(x % n)
    else:
        with pytest.raises(NoLogarithm):
            modnum.discrete_log(a, x, n)


def test_discrete_log_of_one_is_zero():
    assert modnum.discrete_log(3, 1, 7) == 0


@given(st.integers(2, 10**6))
def test_factorize_against_sympy(n):
    f = modnum.factorize(n)
    assert dict(f.factors) == sympy.factorint(n)
    assert f.value() == n


@given(st.integers(-5, 5000))
def test_is_prime_against_sympy(n):
    assert modnum.is_prime(n) == sympy.isprime(n)


def test_factorization_renders():
    assert str(modnum.factorize(2668)) == "2^2 * 23 * 29"
