from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_lower_hull, polys, primes, ratmaps, rationals
from ultradyn.exactnum import INF, val
from ultradyn.newton import (
    DiskSpec,
    PiecewiseLinear,
    copolygon,
    count_in_disk,
    lower_hull,
    newton_polygon,
    vp_value,
    weierstrass_degree,
)
from ultradyn.parser import parse_map
from ultradyn.poly import Poly

QUARTIC = Poly((225, 135, 0, -9, 1))
TWO_REPELLING = parse_map("-45*(3*z+5)/(z^2*(z-9))")
rhos = st.builds(Fraction, st.integers(-8, 8), st.sampled_from([1, 2, 3]))


def test_quartic_polygon():
    np_ = newton_polygon(QUARTIC, 5)
    assert [(i, v) for i, v in np_.vertices] == [(0, 2), (1, 1), (3, 0), (4, 0)]
    assert sorted(np_.root_valuation_multiset()) == [0, Fraction(1, 2), Fraction(1, 2), 1]


def test_ord0_and_negative_valuation():
    np_ = newton_polygon(Poly((0, -1, 1)), 7)
    assert np_.ord0 == 1 and dict(np_.root_valuations()) == {0: 1}
    np_ = newton_polygon(Poly((0, Fraction(1, 3), 1)), 3)
    assert np_.ord0 == 1 and dict(np_.root_valuations()) == {-1: 1}


@settings(max_examples=200)
@given(polys(0, 6), primes)
def test_hull_matches_brute_force(f, p):
    pts = [(i, Fraction(val(c, p))) for i, c in enumerate(f.coeffs) if c != 0]
    assert [tuple(v) for v in lower_hull(pts)] == brute_lower_hull(pts)


@settings(max_examples=200)
@given(st.lists(rationals, min_size=1, max_size=6), primes)
def test_root_valuations_of_products(roots, p):
    f = Poly.from_roots(roots)
    np_ = newton_polygon(f, p)
    got = sorted(sum(([v] * m for v, m in np_.root_valuations()), []))
    want = sorted(val(r, p) for r in roots if r != 0)
    assert got == want
    assert np_.ord0 == sum(1 for r in roots if r == 0)


def test_copolygon_examples():
    pl = copolygon(Poly((0, -1, 1)), 0, 5)
    assert pl.breakpoints == ((0, 0),) and pl.slopes == (2, 1)
    pl = copolygon(Poly((0, 0, 1)), 0, 5)
    assert pl(3) == 6 and pl.slope_left(0) == 2 and pl.slope_right(0) == 2
    pl = copolygon(TWO_REPELLING, 0, 5)
    assert pl(0) == 1
    for r in (Fraction(-3), Fraction(1, 2), Fraction(4)):
        assert pl(r) == min(1 + r, 2) - min(3 * r, 2 * r)


def test_count_in_disk_examples():
    h = parse_map("z^2+3*z")
    assert count_in_disk(h, DiskSpec(0, 1, False), 3) == 2
    assert count_in_disk(h, DiskSpec(0, 1, True), 3) == 1
    assert count_in_disk(TWO_REPELLING, DiskSpec(0, 0, False), 5, INF) == 3


def test_weierstrass_examples():
    z2 = parse_map("z^2")
    for side in ("inner", "outer"):
        assert weierstrass_degree(z2, DiskSpec(0, 0), 5, side) == 2
    h = parse_map("z^2+3*z")
    assert weierstrass_degree(h, DiskSpec(0, 1), 3, "inner") == 1
    assert weierstrass_degree(h, DiskSpec(0, 1), 3, "outer") == 2
    assert weierstrass_degree(TWO_REPELLING, DiskSpec(0, 0), 5, "outer") == -2


@settings(max_examples=200, deadline=None)
@given(ratmaps(1, 3), rationals, rhos, primes)
def test_slope_count_consistency(h, a, rho, p):
    for side, open_ in (("inner", True), ("outer", False)):
        d = DiskSpec(a, rho, open_)
        w = weierstrass_degree(h, DiskSpec(a, rho), p, side)
        assert w == count_in_disk(h, d, p, 0) - count_in_disk(h, d, p, INF)


@settings(max_examples=150)
@given(polys(0, 4), polys(0, 4), rationals, rhos, primes)
def test_multiplicativity(f, g, a, rho, p):
    assert copolygon(f * g, a, p)(rho) == copolygon(f, a, p)(rho) + copolygon(g, a, p)(rho)


@settings(max_examples=150)
@given(polys(0, 5), rationals, rhos, primes)
def test_polygon_is_direct_min(f, a, rho, p):
    assert copolygon(f, a, p)(rho) == vp_value(f, a, rho, p)
    shifted = f.taylor_shift(a)
    assert vp_value(f, a, rho, p) == min(val(c, p) + i * rho for i, c in enumerate(shifted.coeffs) if c)


@settings(max_examples=150)
@given(polys(0, 5), rationals, primes)
def test_polynomial_concavity(f, a, p):
    pl = copolygon(f, a, p)
    assert list(pl.slopes) == sorted(pl.slopes, reverse=True)


@settings(max_examples=150)
@given(ratmaps(1, 3), rationals, primes)
def test_total_counts(h, a, p):
    pl = copolygon(h, a, p)
    assert pl.slopes[0] == h.num.deg - h.den.deg
    sa = h.num.taylor_shift(a).ord0() - h.den.taylor_shift(a).ord0()
    assert pl.slopes[-1] == sa


def test_piecewise_arithmetic():
    f = PiecewiseLinear.linear(1, 2)
    g = PiecewiseLinear(((Fraction(0), Fraction(0)),), (3, 1))
    s = f + g
    assert s(-1) == -1 - 3 and s(2) == 5 + 2
    assert (s - g)(7) == f(7)
