"""Newton polygons and valuation polygons (copolygons) over Q_p.

Conventions: a radius r = p**(-rho) is stored as the valuation radius rho.
The valuation polygon of h at center a is

    VP(h, a, rho) = v(||h||_{zeta(a, p**-rho)}),

and for a polynomial with Taylor coefficients c_i at a it equals
min_i (v(c_i) + i*rho).  The slope of VP just left of rho (rho - eps)
counts zeros minus poles in the closed disk; the slope just right of rho
counts them in the open disk.
"""

from bisect import bisect_left
from dataclasses import dataclass, field
from fractions import Fraction

from ultradyn.errors import PreconditionError
from ultradyn.exactnum import INF, as_q, val
from ultradyn.poly import Poly, taylor_shift
from ultradyn.ratfunc import RatMap


@dataclass(frozen=True)
class NewtonPolygon:
    """Lower convex hull of the points (i, v_p(c_i)) with c_i != 0."""

    p: int
    vertices: tuple
    ord0: int
    degree: int

    def slopes(self):
        vs = self.vertices
        return [
            Fraction(vs[k + 1][1] - vs[k][1]) / (vs[k + 1][0] - vs[k][0])
            for k in range(len(vs) - 1)
        ]

    def root_valuations(self):
        """[(valuation, multiplicity)] for the nonzero roots, increasing valuation
        order reversed (largest valuation first)."""
        vs = self.vertices
        out = []
        for k in range(len(vs) - 1):
            length = vs[k + 1][0] - vs[k][0]
            s = Fraction(vs[k + 1][1] - vs[k][1]) / length
            out.append((-s, length))
        return out

    def root_valuation_multiset(self):
        out = []
        for v, n in self.root_valuations():
            out.extend([v] * n)
        return out

    def count_roots(self, rho, strict=False):
        """Roots (with multiplicity, including zero) of valuation >= rho (> rho if strict)."""
        n = self.ord0
        for v, m in self.root_valuations():
            if v > rho or (not strict and v == rho):
                n += m
        return n

    def to_json(self):
        return {
            "prime": self.p,
            "vertices": [[i, str(v)] for i, v in self.vertices],
            "ord0": self.ord0,
            "root_valuations": [[str(v), m] for v, m in self.root_valuations()],
        }


def lower_hull(points):
    """Monotone-chain lower hull of points sorted by x (exact arithmetic)."""
    hull = []
    for pt in sorted(points):
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop hull[-1] unless it lies strictly below the chord
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def newton_polygon(f, p):
    if f.is_zero():
        raise PreconditionError("the zero polynomial has no Newton polygon")
    pts = [(i, Fraction(val(c, p))) for i, c in enumerate(f.coeffs) if c != 0]
    return NewtonPolygon(p, tuple(lower_hull(pts)), f.ord0(), f.deg)


@dataclass(frozen=True)
class PiecewiseLinear:
    """Continuous piecewise-linear function of rho on the whole line.

    ``slopes[0]`` applies left of the first breakpoint, ``slopes[k]`` between
    breakpoints k-1 and k, and ``slopes[-1]`` to the right of the last.
    """

    breakpoints: tuple
    slopes: tuple = field(default=())

    def __post_init__(self):
        if len(self.slopes) != len(self.breakpoints) + 1:
            raise ValueError("need exactly one more slope than breakpoints")
        if not self.breakpoints:
            raise ValueError("at least one breakpoint is required")

    @classmethod
    def linear(cls, value_at_0, slope):
        return cls(((Fraction(0), as_q(value_at_0)),), (slope, slope))

    def __call__(self, rho):
        rho = as_q(rho)
        bps = self.breakpoints
        k = bisect_left([b[0] for b in bps], rho)
        if k < len(bps) and bps[k][0] == rho:
            return bps[k][1]
        if k == 0:
            x0, y0 = bps[0]
            return y0 + self.slopes[0] * (rho - x0)
        x0, y0 = bps[k - 1]
        return y0 + self.slopes[k] * (rho - x0)

    def slope_left(self, rho):
        """Slope on (rho - eps, rho)."""
        rho = as_q(rho)
        xs = [b[0] for b in self.breakpoints]
        return self.slopes[bisect_left(xs, rho)]

    def slope_right(self, rho):
        """Slope on (rho, rho + eps)."""
        rho = as_q(rho)
        xs = [b[0] for b in self.breakpoints]
        k = bisect_left(xs, rho)
        if k < len(xs) and xs[k] == rho:
            return self.slopes[k + 1]
        return self.slopes[k]

    def _combine(self, other, sign):
        xs = sorted({b[0] for b in self.breakpoints} | {b[0] for b in other.breakpoints})
        bps = [(x, self(x) + sign * other(x)) for x in xs]
        slopes = [self.slopes[0] + sign * other.slopes[0]]
        for i in range(len(xs) - 1):
            mid = (xs[i] + xs[i + 1]) / 2
            slopes.append(self.slope_right(mid) + sign * other.slope_right(mid))
        slopes.append(self.slopes[-1] + sign * other.slopes[-1])
        return PiecewiseLinear(tuple(bps), tuple(slopes)).simplified()

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def simplified(self):
        """Drop breakpoints where the slope does not change (keep at least one)."""
        bps, slopes = [], [self.slopes[0]]
        for k, b in enumerate(self.breakpoints):
            if self.slopes[k + 1] != slopes[-1]:
                bps.append(b)
                slopes.append(self.slopes[k + 1])
        if not bps:
            return PiecewiseLinear.linear(self(0), self.slopes[0])
        return PiecewiseLinear(tuple(bps), tuple(slopes))

    def to_json(self):
        return {
            "breakpoints": [[str(x), str(y)] for x, y in self.breakpoints],
            "slopes": list(self.slopes),
        }


@dataclass(frozen=True)
class DiskSpec:
    """Closed disk {x : v(x - a) >= rho} or open disk {x : v(x - a) > rho}."""

    center: Fraction
    rho: Fraction
    open: bool = False

    def __post_init__(self):
        object.__setattr__(self, "center", as_q(self.center))
        object.__setattr__(self, "rho", as_q(self.rho))

    def contains(self, x, p):
        if x is INF:
            return False
        v = val(as_q(x) - self.center, p)
        return v > self.rho if self.open else v >= self.rho


def taylor_valuations(f, a, p):
    """[(i, v_p(c_i))] for the nonzero Taylor coefficients of f at a."""
    g = taylor_shift(f, a)
    return [(i, Fraction(val(c, p))) for i, c in enumerate(g.coeffs) if c != 0]


def vp_value(f, a, rho, p):
    """min_i (v(c_i) + i*rho) over Taylor coefficients at a; INF for f = 0."""
    if f.is_zero():
        return INF
    rho = as_q(rho)
    return min(v + i * rho for i, v in taylor_valuations(f, a, p))


def vp_from_points(points):
    """The concave function rho -> min_i (v_i + i*rho)."""
    hull = lower_hull(points)
    if len(hull) == 1:
        i, v = hull[0]
        return PiecewiseLinear.linear(v, i)
    bps = []
    slopes = [hull[-1][0]]
    # right-most hull segment gives the left-most breakpoint
    for k in range(len(hull) - 2, -1, -1):
        (i0, v0), (i1, v1) = hull[k], hull[k + 1]
        rho = -Fraction(v1 - v0) / (i1 - i0)
        bps.append((rho, v0 + i0 * rho))
        slopes.append(i0)
    return PiecewiseLinear(tuple(bps), tuple(slopes))


def poly_copolygon(f, a, p):
    if f.is_zero():
        raise PreconditionError("the zero polynomial has no valuation polygon")
    return vp_from_points(taylor_valuations(f, as_q(a), p))


def copolygon(h, a, p):
    """VP(h, a, .) = VP(num) - VP(den) as a PiecewiseLinear."""
    if isinstance(h, Poly):
        return poly_copolygon(h, a, p)
    return poly_copolygon(h.num, a, p) - poly_copolygon(h.den, a, p)


def count_in_disk(h, disk, p, target=0):
    """Solutions of h(z) = target in the disk, with multiplicity.

    ``target`` is 0, INF (poles) or any rational b (zeros of h - b).
    """
    if isinstance(h, Poly):
        h = RatMap(h)
    if target is INF:
        f = h.den
    else:
        f = h.num - h.den.scale(as_q(target))
    if f.is_zero():
        raise PreconditionError("h is constant equal to the target")
    if f.deg == 0:
        return 0
    g = taylor_shift(f, disk.center)
    return newton_polygon(g, p).count_roots(disk.rho, strict=disk.open)


def weierstrass_degree(h, disk, p, side):
    """Copolygon slope next to rho: 'inner' is rho+eps, 'outer' is rho-eps."""
    vp = copolygon(h, disk.center, p)
    if side == "inner":
        return vp.slope_right(disk.rho)
    if side == "outer":
        return vp.slope_left(disk.rho)
    raise ValueError("side must be 'inner' or 'outer'")
