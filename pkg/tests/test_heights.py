import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import nonzero_rationals, rationals
from ultradyn.errors import PreconditionError
from ultradyn.heights import (
    HeightValue,
    quadratic_pcf_height_check,
    height_algebraic,
    height_rational,
    mahler_measure_log,
    multiplier_heights,
    pcf_bound_from_thresholds,
    pcf_fixed_multiplier_bound,
)
from ultradyn.parser import parse_map
from ultradyn.poly import Poly
from ultradyn.ratfunc import Mobius, conjugate


def test_rational_heights():
    assert height_rational(0).render() == "0"
    assert height_rational(2).render() == "log(2)"
    assert height_rational(Fraction(-9, 4)).render() == "log(9)"
    assert height_rational(4).render() == "log(4)"
    assert height_rational(Fraction(1, 8)).same_as(HeightValue.log_of(2, 3))


@given(nonzero_rationals)
def test_rational_height_inverse(x):
    assert height_rational(x).same_as(height_rational(1 / x))
    assert height_rational(x).same_as(height_rational(-x))


@given(rationals)
def test_rational_height_matches_float(x):
    h = height_rational(x)
    assert math.isclose(h.approx, math.log(max(abs(x.numerator), x.denominator, 1)), abs_tol=1e-12)


def test_log_of_normalizes():
    h = HeightValue.log_of(64, Fraction(1, 2))
    assert h.render() == "log(8)"
    assert h.exact_arg() == (8, 1)
    assert HeightValue.log_of(Fraction(1, 4)).render() == "log(1/4)"
    assert HeightValue.log_of(4).le_log(4) and not HeightValue.log_of(5).le_log(4)
    with pytest.raises(ValueError):
        HeightValue.log_of(0)


def test_algebraic_examples():
    assert height_algebraic(Poly((-4, -2, 1))).render() == "log(2)"  # 1 +- sqrt 5
    assert height_algebraic(Poly((1, 0, 1))).render() == "0"
    assert height_algebraic(Poly((-2, 0, 1))).render() == "log(2)/2"
    golden = height_algebraic(Poly((-1, -1, 1)))
    assert abs(golden.approx - math.log((1 + math.sqrt(5)) / 2) / 2) <= 1e-12 + golden.err
    assert golden.err <= 1e-9


def test_algebraic_preconditions():
    with pytest.raises(PreconditionError):
        height_algebraic(Poly((-1, 0, 1)))
    with pytest.raises(PreconditionError):
        height_algebraic(Poly((2, 0, 1)) * Poly((2, 0, 1)))


@settings(max_examples=40, deadline=None)
@given(st.integers(-9, 9), st.integers(-9, 9), st.integers(1, 5))
def test_height_of_reciprocal(b, c, a):
    f = Poly((c, b, a))
    if c == 0 or f.deg < 2:
        return
    disc = b * b - 4 * a * c
    if disc >= 0 and math.isqrt(disc) ** 2 == disc:
        return
    rev = Poly((a, b, c))
    h1, h2 = height_algebraic(f), height_algebraic(rev)
    assert abs(h1.approx - h2.approx) <= h1.err + h2.err + 1e-12


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(-20, 20), st.integers(1, 20)), min_size=1, max_size=4))
def test_mahler_of_split_polynomial(pairs):
    # oracle: M(prod (b z - a)) = prod max(|a|, |b|) for coprime a, b
    f = Poly.const(1)
    want = 0.0
    for a, b in pairs:
        g = math.gcd(a, b)
        a, b = a // g, b // g
        f = f * Poly((-a, b))
        want += math.log(max(abs(a), b))
    exact, approx, err = mahler_measure_log(f)
    assert abs(approx - want) <= err + 1e-9
    if exact is not None:
        assert math.isclose(math.log(exact), want, abs_tol=1e-9)


def test_mahler_cyclotomic():
    exact, approx, err = mahler_measure_log(Poly((1, 1, 1)) * Poly((1, 0, 1)))
    assert exact == 1 and approx == 0.0


def test_multiplier_heights_quadratic():
    rep = multiplier_heights(parse_map("z^2-1"))
    got = sorted(h.render() for h in rep.heights)
    assert got == ["0", "log(2)", "log(2)"]
    rep2 = multiplier_heights(parse_map("z^2+1/4"), 2)
    assert [h.render() for h in rep2.heights] == ["log(5)"]


@pytest.mark.parametrize("m", ["z^2-1", "z^2+3*z", "(z^2+1)/(2*z)", "z^3-3/2*z+1"])
def test_multiplier_heights_conjugation_invariant(m):
    phi = parse_map(m)
    psi = conjugate(phi, Mobius(2, 1, 1, 3))
    a = sorted(h.approx for h in multiplier_heights(phi).heights)
    b = sorted(h.approx for h in multiplier_heights(psi).heights)
    assert len(a) == len(b) == phi.degree + 1
    assert all(math.isclose(x, y, abs_tol=1e-9) for x, y in zip(a, b))


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
def test_pcf_bound_matches_thresholds(d):
    assert pcf_fixed_multiplier_bound(d).same_as(pcf_bound_from_thresholds(d))


def test_pcf_bound_values():
    assert pcf_fixed_multiplier_bound(2).render() == "log(4)"
    assert pcf_fixed_multiplier_bound(3).render() == "log(216)"


def test_quadratic_pcf_bound():
    for m in ["z^2", "z^2-1", "z^2-2"]:
        rep = quadratic_pcf_height_check(parse_map(m))
        assert rep.passed
        assert rep.equality == (m == "z^2-2")
    with pytest.raises(PreconditionError):
        quadratic_pcf_height_check(parse_map("z^2+1"))
    with pytest.raises(PreconditionError):
        quadratic_pcf_height_check(parse_map("z^3"))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-30, 30), min_size=3, max_size=7).filter(lambda cs: cs[-1] != 0 and cs[0] != 0))
def test_mahler_enclosure_contains_reference(cs):
    # oracle: high-precision roots through a different path (eigenvalues of the companion matrix)
    import mpmath

    f = Poly(cs)
    exact, approx, err = mahler_measure_log(f)
    with mpmath.workdps(80):
        n = len(cs) - 1
        comp = mpmath.zeros(n, n)
        for i in range(1, n):
            comp[i, i - 1] = 1
        for i in range(n):
            comp[i, n - 1] = -mpmath.mpf(cs[i]) / cs[-1]
        eig = mpmath.eig(comp, left=False, right=False)
        ref = mpmath.log(abs(cs[-1])) + sum(mpmath.log(max(1, abs(z))) for z in eig)
    g = math.gcd(*cs)
    ref -= mpmath.log(abs(g)) if g else 0
    assert abs(approx - float(ref)) <= err + 1e-12
    if exact is not None:
        assert abs(math.log(exact) - float(ref)) <= 1e-12
