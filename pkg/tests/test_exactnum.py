from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import PRIMES, nonzero_rationals, primes, rationals
from ultradyn.errors import PrecisionError, PreconditionError
from ultradyn.exactnum import (
    INF,
    PAdicApprox,
    fmt_q,
    hensel_lift,
    mod_pk,
    parse_point,
    prime_factors,
    val,
)
from ultradyn.poly import Poly


def test_val_examples():
    assert val(45, 5) == 1
    assert val(0, 7) is INF
    assert val(Fraction(-9, 4), 3) == 2
    assert val(Fraction(-9, 4), 2) == -2


def test_val_rejects_composite():
    with pytest.raises(PreconditionError):
        val(12, 6)


def test_inf_behaviour():
    assert INF > 10**100 and not INF < 5
    assert INF + 3 is INF and 3 + INF is INF
    assert fmt_q(INF) == "inf" and str(INF) == "inf"
    assert parse_point("inf") is INF and parse_point(" -3/6 ") == Fraction(-1, 2)
    assert max(Fraction(1), INF) is INF and min(Fraction(1), INF) == 1


@settings(max_examples=300)
@given(rationals, rationals, primes)
def test_ultrametric(x, y, p):
    vs = val(x + y, p)
    vx, vy = val(x, p), val(y, p)
    assert vs >= min(vx, vy)
    if vx != vy:
        assert vs == min(vx, vy)


@given(nonzero_rationals, nonzero_rationals, primes)
def test_val_multiplicative(x, y, p):
    assert val(x * y, p) == val(x, p) + val(y, p)


@given(nonzero_rationals)
def test_product_formula(x):
    # |x| * prod_p |x|_p == 1 exactly, with |x|_p = p**-v_p(x)
    ps = set(prime_factors(x.numerator)) | set(prime_factors(x.denominator))
    acc = abs(x)
    for p in ps:
        acc *= Fraction(p) ** -val(x, p)
    assert acc == 1


def test_hensel_examples():
    x = hensel_lift(Poly((1, 0, 1)), 2, 5, 4)
    assert x.to_fraction() % 625 == 182
    roots = [r for r in range(625) if (r * r + 1) % 625 == 0 and r % 5 == 2]  # exhaustive oracle
    assert roots == [182]
    assert hensel_lift(Poly((-3, 1)), 3, 7, 10).to_fraction() == 3


def test_hensel_rescaled_quartic():
    # z^4 - 9z^3 + 135z + 225 with z = 5u, divided by 225
    f = Poly((225, 135, 0, -9, 1)).compose(Poly((0, 5))).scale(Fraction(1, 225))
    assert f.coeffs == tuple(map(Fraction, (1, 3, 0, -5, Fraction(25, 9))))
    assert val(f(Fraction(3)), 5) >= 1 and val(f.derivative()(Fraction(3)), 5) == 0
    u = hensel_lift(f, 3, 5, 12)
    assert val(u.to_fraction() - 3, 5) >= 1
    assert val(f(u.to_fraction()), 5) >= 12


def test_hensel_errors_name_the_condition():
    with pytest.raises(PreconditionError, match="not 0 mod"):
        hensel_lift(Poly((1, 0, 1)), 1, 5, 3)
    with pytest.raises(PreconditionError, match="not simple"):
        hensel_lift(Poly((0, 0, 1)), 0, 5, 3)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([3, 5, 7]), st.lists(st.integers(-20, 20), min_size=2, max_size=5), st.integers(1, 6))
def test_hensel_soundness_against_exhaustive_search(p, cs, N):
    f = Poly(cs)
    if f.deg < 1:
        return
    simple = [x for x in range(p) if f(Fraction(x)) % p == 0 and f.derivative()(Fraction(x)) % p != 0]
    for x0 in simple:
        x = hensel_lift(f, x0, p, N)
        r = int(x.to_fraction()) % p**N
        assert f(Fraction(r)) % p**N == 0
        lifts = [y for y in range(x0, p**N, p) if f(Fraction(y)) % p**N == 0]
        assert lifts == [r]


@settings(max_examples=200)
@given(rationals, rationals, primes, st.integers(1, 8))
def test_padic_arithmetic_is_sound(x, y, p, n):
    if val(x, p) is not INF and val(x, p) < 0 or val(y, p) is not INF and val(y, p) < 0:
        shift = min(v for v in (val(x, p), val(y, p)) if v is not INF)
    else:
        shift = 0
    prec = shift + n
    a = PAdicApprox.from_rational(x, p, prec)
    b = PAdicApprox.from_rational(y, p, prec)
    assert a.congruent(x) and b.congruent(y)
    assert (a + b).congruent(x + y)
    assert (a - b).congruent(x - y)
    assert (a * b).congruent(x * y)
    if not b.is_known_zero:
        assert (a / b).congruent(x / y)


def test_padic_known_zero():
    z = PAdicApprox.from_rational(Fraction(125), 5, 3)
    assert z.is_known_zero
    with pytest.raises(PrecisionError):
        z.valuation()
    with pytest.raises(PrecisionError):
        z.inverse()


def test_mod_pk():
    assert mod_pk(Fraction(1, 2), 5, 2) * 2 % 25 == 1
    with pytest.raises(PreconditionError):
        mod_pk(Fraction(1, 5), 5, 2)


def test_prime_list():
    assert all(prime_factors(p) == [p] for p in PRIMES)
    assert prime_factors(360) == [2, 3, 5]
