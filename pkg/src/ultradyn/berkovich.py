"""Type II points zeta(a, p**-rho) with rational center, and the local
behaviour of rational maps at them: images, tangent directions,
multiplicities and distortion.

Everything is computed from valuation polygons.  The key fact used for
directions: at zeta with image zeta', moving from zeta into a direction v,
the one-sided slope of rho -> VP(phi - e) is +-m or 0 for every e, where
m = deg_{zeta,v}(phi), and it is nonzero exactly when e lies in the image
direction phi_*(v) or phi_*(v) points to infinity.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import ceil

from ultradyn.errors import UnsupportedConfiguration
from ultradyn.exactnum import INF, as_q, mod_pk, val
from ultradyn.newton import DiskSpec, count_in_disk, vp_from_points
from ultradyn.poly import Poly, taylor_shift
from ultradyn.ratfunc import RatMap

# digit-search steps when locating an image center
MAX_CENTER_STEPS = 512


def _canonical_center(a, rho, p):
    k = ceil(rho)
    s = min(val(a, p), 0) if a != 0 else 0
    if k - s <= 0 or a == 0:
        return Fraction(0)
    b = a / Fraction(p) ** s
    return Fraction(mod_pk(b, p, k - s)) * Fraction(p) ** s


@dataclass(frozen=True, eq=False)
class DiskPoint:
    """zeta(a, p**-rho): sup-seminorm on the closed disk v(x - a) >= rho."""

    center: Fraction
    rho: Fraction
    p: int

    def __post_init__(self):
        object.__setattr__(self, "center", as_q(self.center))
        object.__setattr__(self, "rho", as_q(self.rho))

    def contains(self, b):
        return b is not INF and val(as_q(b) - self.center, self.p) >= self.rho

    def __eq__(self, other):
        if not isinstance(other, DiskPoint):
            return NotImplemented
        return (
            self.p == other.p
            and self.rho == other.rho
            and val(self.center - other.center, self.p) >= self.rho
        )

    def __hash__(self):
        return hash((self.p, self.rho, _canonical_center(self.center, self.rho, self.p)))

    def recenter(self, b):
        if not self.contains(b):
            raise ValueError(f"{b} is not in the closed disk of {self}")
        return DiskPoint(as_q(b), self.rho, self.p)

    def disk(self, open_=False):
        return DiskSpec(self.center, self.rho, open_)

    def to_json(self):
        return {"center": str(self.center), "rho": str(self.rho), "prime": self.p}

    def __repr__(self):
        return f"zeta({self.center}, {self.p}^-({self.rho}))"


@dataclass(frozen=True)
class TangentDirection:
    """Direction at a disk point: toward a rational b, or toward infinity (b is None)."""

    toward: Fraction = None

    @classmethod
    def infinity(cls):
        return cls(None)

    @property
    def is_infinity(self):
        return self.toward is None

    def valid_at(self, zeta):
        return self.is_infinity or zeta.contains(self.toward)

    def same_as(self, other, zeta):
        if self.is_infinity or other.is_infinity:
            return self.is_infinity and other.is_infinity
        return val(self.toward - other.toward, zeta.p) > zeta.rho

    def to_json(self):
        return {"toward": "inf" if self.is_infinity else str(self.toward)}

    def __repr__(self):
        return "toward inf" if self.is_infinity else f"toward {self.toward}"


class _Local:
    """Taylor data of num and den of phi at a fixed center."""

    def __init__(self, phi, a, p):
        self.p = p
        self.a = as_q(a)
        self.num = taylor_shift(phi.num, self.a)
        self.den = taylor_shift(phi.den, self.a)

    def _points(self, f):
        return [(i, Fraction(val(c, self.p))) for i, c in enumerate(f.coeffs) if c != 0]

    def minus(self, e):
        """Taylor polynomial (at a) of num - e*den."""
        return self.num - self.den.scale(e)

    def vp(self, e=0):
        """Copolygon of phi - e."""
        top = vp_from_points(self._points(self.minus(e)))
        return top - vp_from_points(self._points(self.den))

    def value(self, e, rho):
        f = self.minus(e)
        if f.is_zero():
            return INF
        t = min(v + i * rho for i, v in self._points(f))
        b = min(v + i * rho for i, v in self._points(self.den))
        return t - b


def seminorm(h, zeta):
    """v(||h||_zeta) for a polynomial or rational function h."""
    if isinstance(h, Poly):
        h = RatMap(h)
    return _Local(h, zeta.center, zeta.p).value(0, zeta.rho)


def _has_pole(phi, zeta):
    return count_in_disk(phi, zeta.disk(), zeta.p, INF) > 0


def image(phi, zeta):
    """phi(zeta) as a DiskPoint with rational center."""
    p, rho = zeta.p, zeta.rho
    if phi.degree == 0:
        raise UnsupportedConfiguration("constant maps send disks to type I points")
    loc = _Local(phi, zeta.center, p)
    if not _has_pole(phi, zeta):
        c = phi.evaluate(zeta.center)
        return DiskPoint(c, loc.value(c, rho), p)
    # sigma(x) = v||phi - x||_zeta = min(v(c - x), s) for the image zeta(c, s);
    # walk p-adic digits toward c starting from the best of a few guesses
    starts = [Fraction(0)]
    c0 = phi.evaluate(zeta.center)
    if c0 is not INF:
        starts.append(c0)
    x = max(starts, key=lambda y: loc.value(y, rho))
    t = loc.value(x, rho)
    for _ in range(MAX_CENTER_STEPS):
        if t.denominator != 1:
            if t.denominator % p == 0:
                raise UnsupportedConfiguration(
                    f"image of {zeta} has a wildly ramified radius {t}; center not certified"
                )
            # tame non-integral radius: the only Galois-stable direction is x's
            return DiskPoint(x, t, p)
        step = Fraction(p) ** int(t)
        better = None
        for u in range(1, p):
            y = x + u * step
            ty = loc.value(y, rho)
            if ty > t:
                better = (y, ty)
                break
        if better is None:
            # integral radius: a Galois-stable direction is F_p-rational, so
            # no improving digit means x already lies in the image disk
            return DiskPoint(x, t, p)
        x, t = better
    raise UnsupportedConfiguration("image center search did not terminate")


def _side_slope(loc, e, zeta, direction):
    vp = loc.vp(e)
    if direction.is_infinity:
        return vp.slope_left(zeta.rho)
    return vp.slope_right(zeta.rho)


def _candidates(img):
    p = img.p
    out = [img.center]
    if img.rho.denominator == 1:
        step = Fraction(p) ** int(img.rho)
        out += [img.center + u * step for u in range(1, p)]
    return out


def _local_for(phi, zeta, direction):
    if not direction.valid_at(zeta):
        raise ValueError(f"{direction} is not a direction at {zeta}")
    center = zeta.center if direction.is_infinity else direction.toward
    return _Local(phi, center, zeta.p)


def _direction_scan(phi, zeta, direction):
    """(multiplicity, image point, image direction) by scanning candidate targets."""
    img = image(phi, zeta)
    loc = _local_for(phi, zeta, direction)
    m = None
    found = None
    for e in _candidates(img):
        s = _side_slope(loc, e, zeta, direction)
        if s == 0:
            continue
        if m is None:
            m = abs(s)
        elif abs(s) != m:
            raise AssertionError("inconsistent one-sided slopes")
        toward_e = s > 0 if not direction.is_infinity else s < 0
        if toward_e:
            found = TangentDirection(e)
            break
        found = TangentDirection.infinity()
    if m is None:
        raise UnsupportedConfiguration(
            f"image direction of {direction} at {zeta} contains no rational point"
        )
    return m, img, found


def tangent_multiplicity(phi, zeta, direction):
    """deg_{zeta,v}(phi), an integer in [1, deg phi]."""
    return _direction_scan(phi, zeta, direction)[0]


def pushforward(phi, zeta, direction):
    """(phi(zeta), phi_*(v))."""
    _, img, d = _direction_scan(phi, zeta, direction)
    return img, d


def distortion(phi, zeta):
    """rho + VP(phi') - VP(phi) at zeta, always >= 0."""
    d = phi.derivative()
    return zeta.rho + seminorm(d, zeta) - seminorm(phi, zeta)


def G_diag(phi, zeta, m):
    """m * distortion + VP(phi) at zeta, in valuation form."""
    if not 1 <= m <= phi.degree:
        raise ValueError("m must be between 1 and deg phi")
    return m * distortion(phi, zeta) + seminorm(phi, zeta)


def weierstrass_difference(phi, zeta, side):
    """N difference at the center of zeta: 'inner' (open disk) or 'outer' (closed)."""
    loc = _Local(phi, zeta.center, zeta.p)
    vp = loc.vp(0)
    return vp.slope_right(zeta.rho) if side == "inner" else vp.slope_left(zeta.rho)


__all__ = [
    "DiskPoint",
    "TangentDirection",
    "G_diag",
    "distortion",
    "image",
    "pushforward",
    "seminorm",
    "tangent_multiplicity",
    "weierstrass_difference",
]
