"""Shared strategies and independent oracles."""

import itertools
from fractions import Fraction

from hypothesis import strategies as st

from ultradyn.poly import Poly
from ultradyn.ratfunc import RatMap

PRIMES = [2, 3, 5, 7]

small_ints = st.integers(min_value=-12, max_value=12)
rationals = st.builds(Fraction, small_ints, st.sampled_from([1, 1, 2, 3, 4, 5, 7, 9]))
nonzero_rationals = rationals.filter(lambda q: q != 0)
primes = st.sampled_from(PRIMES)


@st.composite
def polys(draw, min_deg=0, max_deg=4):
    d = draw(st.integers(min_value=min_deg, max_value=max_deg))
    cs = [draw(rationals) for _ in range(d)] + [draw(nonzero_rationals)]
    return Poly(cs)


@st.composite
def ratmaps(draw, min_deg=1, max_deg=3):
    while True:
        num = draw(polys(0, max_deg))
        den = draw(polys(0, max_deg)) if draw(st.booleans()) else Poly.const(1)
        phi = RatMap(num, den)
        if min_deg <= phi.degree <= max_deg:
            return phi


def det(rows):
    """Determinant by fraction-exact Gaussian elimination."""
    m = [list(map(Fraction, r)) for r in rows]
    n = len(m)
    out = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            out = -out
        out *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            for k in range(c, n):
                m[r][k] -= f * m[c][k]
    return out


def sylvester_resultant(a, b):
    """Res(a, b) from the Sylvester matrix."""
    m, n = a.deg, b.deg
    if m == 0:
        return a.lc**n
    if n == 0:
        return b.lc**m
    ac = list(reversed(a.coeffs))
    bc = list(reversed(b.coeffs))
    size = m + n
    rows = []
    for i in range(n):
        rows.append([0] * i + ac + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + bc + [0] * (size - n - 1 - i))
    return det(rows)


def brute_lower_hull(points):
    """Vertices of the lower hull by checking every pair of points."""
    pts = sorted(set(points))
    if len(pts) == 1:
        return pts
    edges = set()
    for (x1, y1), (x2, y2) in itertools.combinations(pts, 2):
        if x1 == x2:
            continue
        ok = all(
            (y - y1) * (x2 - x1) >= (y2 - y1) * (x - x1) for x, y in pts
        )
        if ok:
            edges.add((x1, y1))
            edges.add((x2, y2))
    # keep only corners: drop points in the interior of a hull segment
    hull = sorted(edges)
    out = []
    for pt in hull:
        while len(out) >= 2:
            (xa, ya), (xb, yb) = out[-2], out[-1]
            if (yb - ya) * (pt[0] - xa) == (pt[1] - ya) * (xb - xa):
                out.pop()
            else:
                break
        out.append(pt)
    # points at equal x: lowest only
    best = {}
    for x, y in out:
        best[x] = min(y, best.get(x, y))
    return sorted(best.items())


def orbit(phi, x, n):
    out = [x]
    for _ in range(n):
        x = phi.evaluate(x)
        out.append(x)
    return out
