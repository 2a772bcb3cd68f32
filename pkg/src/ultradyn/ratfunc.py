"""Rational maps over Q: normal form, evaluation, composition and the
polynomials attached to critical and periodic points."""

import os
from dataclasses import dataclass
from fractions import Fraction

from ultradyn.errors import DegeneracyError, DegreeError, PreconditionError, ResourceError
from ultradyn.exactnum import INF, as_q
from ultradyn.poly import (
    Poly,
    is_squarefree,
    poly_gcd,
    poly_nth_root,
    resultant_pencil,
)

DEFAULT_DEGREE_CAP = 4096


def degree_cap() -> int:
    return int(os.environ.get("ULTRADYN_DEGREE_CAP", DEFAULT_DEGREE_CAP))


def _check_cap(d):
    cap = degree_cap()
    if d > cap:
        raise ResourceError(f"degree {d} exceeds the configured cap {cap}")


def mobius_mu(n):
    """Moebius function by trial division."""
    out = 1
    f = 2
    while f * f <= n:
        if n % f == 0:
            n //= f
            if n % f == 0:
                return 0
            out = -out
        f += 1
    if n > 1:
        out = -out
    return out


class RatMap:
    """phi = num/den with gcd(num, den) = 1 and den monic."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = num if isinstance(num, Poly) else Poly.const(num)
        den = Poly.const(1) if den is None else (den if isinstance(den, Poly) else Poly.const(den))
        if den.is_zero():
            raise ZeroDivisionError("rational map with zero denominator")
        if num.is_zero():
            num, den = Poly(), Poly.const(1)
        else:
            g = poly_gcd(num, den)
            if g.deg > 0:
                num, den = num // g, den // g
            lc = den.lc
            num, den = num.scale(1 / lc), den.scale(1 / lc)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RatMap is immutable")

    def __reduce__(self):
        return (RatMap, (self.num, self.den))

    @classmethod
    def poly(cls, coeffs):
        return cls(Poly(coeffs))

    @classmethod
    def identity(cls):
        return cls(Poly.z())

    @property
    def degree(self) -> int:
        return max(self.num.deg, self.den.deg, 0)

    def is_polynomial(self):
        return self.den.deg == 0

    def __eq__(self, other):
        return isinstance(other, RatMap) and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RatMap({self.render()!r})"

    def render(self):
        if self.is_polynomial():
            return self.num.render()
        return f"({self.num.render()})/({self.den.render()})"

    def __call__(self, x):
        return self.evaluate(x)

    def evaluate(self, x):
        """Projective evaluation on P^1(Q); poles go to INF."""
        if x is INF:
            dn, dd = self.num.deg, self.den.deg
            if dn > dd:
                return INF
            if dn < dd:
                return Fraction(0)
            return self.num.lc / self.den.lc
        x = as_q(x)
        d = self.den(x)
        if d == 0:
            return INF
        return self.num(x) / d

    def __add__(self, other):
        o = _as_map(other)
        return RatMap(self.num * o.den + o.num * self.den, self.den * o.den)

    def __sub__(self, other):
        o = _as_map(other)
        return RatMap(self.num * o.den - o.num * self.den, self.den * o.den)

    def __mul__(self, other):
        o = _as_map(other)
        return RatMap(self.num * o.num, self.den * o.den)

    def __truediv__(self, other):
        o = _as_map(other)
        if o.num.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatMap(self.num * o.den, self.den * o.num)

    def __neg__(self):
        return RatMap(-self.num, self.den)

    def __pow__(self, k):
        if k < 0:
            return RatMap(Poly.const(1)) / (self ** (-k))
        return RatMap(self.num**k, self.den**k)

    def wronskian(self):
        return self.num.derivative() * self.den - self.num * self.den.derivative()

    def derivative(self):
        return RatMap(self.wronskian(), self.den * self.den)

    def compose(self, inner):
        return compose(self, inner)

    def iterate(self, n):
        return iterate(self, n)


def _as_map(x):
    if isinstance(x, RatMap):
        return x
    if isinstance(x, Poly):
        return RatMap(x)
    return RatMap(Poly.const(x))


def _homogenize(f, e, num, den):
    """Sum f_i num^i den^(e-i)."""
    out = Poly()
    npow = [Poly.const(1)]
    for _ in range(e):
        npow.append(npow[-1] * num)
    dpow = Poly.const(1)
    for i in range(e, -1, -1):
        c = f.coeff(i)
        if c:
            out = out + npow[i] * dpow * c
        dpow = dpow * den
    return out


def compose(psi, phi):
    """psi(phi(z)); the degree is deg psi * deg phi."""
    _check_cap(psi.degree * phi.degree)
    e = psi.degree
    return RatMap(_homogenize(psi.num, e, phi.num, phi.den), _homogenize(psi.den, e, phi.num, phi.den))


def iterate(phi, n):
    if n < 1:
        raise PreconditionError("iteration count must be at least 1")
    _check_cap(phi.degree**n)
    out = phi
    for _ in range(n - 1):
        out = compose(phi, out)
    return out


@dataclass(frozen=True)
class Mobius:
    """z -> (a z + b)/(c z + d)."""

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    def __post_init__(self):
        for k in "abcd":
            object.__setattr__(self, k, as_q(getattr(self, k)))
        if self.a * self.d - self.b * self.c == 0:
            raise PreconditionError("Mobius transformation is not invertible")

    @classmethod
    def affine(cls, scale, shift=0):
        return cls(scale, shift, 0, 1)

    @classmethod
    def inversion(cls):
        return cls(0, 1, 1, 0)

    def as_map(self):
        return RatMap(Poly((self.b, self.a)), Poly((self.d, self.c)))

    def inverse(self):
        return Mobius(self.d, -self.b, -self.c, self.a)

    def compose(self, other):
        """self o other."""
        return Mobius(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __call__(self, x):
        return self.as_map().evaluate(x)


def conjugate(phi, m):
    """m^-1 o phi o m."""
    return compose(m.inverse().as_map(), compose(phi, m.as_map()))


def taylor_shift(f, a):
    return f.taylor_shift(a)


# critical points


def critical_poly(phi):
    if phi.degree < 2:
        raise DegreeError("critical points need degree at least 2")
    w = phi.wronskian()
    if w.is_zero():
        raise DegeneracyError("map is inseparable-like/degenerate: zero Wronskian")
    return w


def critical_multiplicity_at_infinity(phi):
    w = critical_poly(phi)
    return 2 * phi.degree - 2 - w.deg


def critical_values_poly(phi):
    """Primitive polynomial in w whose roots are the affine critical values."""
    w = critical_poly(phi)
    r = resultant_pencil(w, phi.den, phi.num)
    if r.is_zero():
        raise DegeneracyError("critical-value resultant vanished identically")
    return r.integer_primitive()


# periodic points


def periodic_poly(phi, n):
    """Numerator of phi^n(z) - z, made monic."""
    f = iterate(phi, n)
    return (f.num - Poly.z() * f.den).monic()


def dynatomic_poly(phi, n):
    """Prod over k | n of periodic_poly(phi, k)^mu(n/k), by exact division."""
    if n < 1:
        raise PreconditionError("period must be at least 1")
    num, den = Poly.const(1), Poly.const(1)
    for k in range(1, n + 1):
        if n % k:
            continue
        mu = mobius_mu(n // k)
        if mu == 0:
            continue
        pk = periodic_poly(phi, k)
        if mu > 0:
            num = num * pk
        else:
            den = den * pk
    q, r = num.divmod(den)
    if r:
        raise DegeneracyError(f"degenerate dynatomic case: division inexact for period {n}")
    return q


def infinity_chart(phi):
    """The conjugate 1/phi(1/z), which moves infinity to 0."""
    return conjugate(phi, Mobius.inversion())


def multiplier_at_infinity(phi, n=1):
    """Multiplier of phi^n at infinity, which must be fixed by phi^n."""
    if n == 1 and phi.evaluate(INF) is INF:
        dn, dd = phi.num.deg, phi.den.deg
        if dn >= dd + 2:
            return Fraction(0)
        return phi.den.lc / phi.num.lc
    psi = iterate(infinity_chart(phi), n)
    if psi.evaluate(0) != 0:
        raise PreconditionError("infinity is not fixed by this iterate")
    return psi.derivative().evaluate(0)


def exact_period_of_infinity(phi, nmax):
    """Smallest k <= nmax with phi^k(INF) = INF, else None."""
    x = INF
    for k in range(1, nmax + 1):
        x = phi.evaluate(x)
        if x is INF:
            return k
    return None


def multiplier_poly(phi, n):
    """Monic polynomial whose roots are (phi^n)'(g) over affine g of exact period n,
    one root per point."""
    dyn = dynatomic_poly(phi, n)
    if not is_squarefree(dyn):
        raise DegeneracyError(f"dynatomic polynomial of period {n} is not squarefree")
    dn = iterate(phi, n).derivative()
    r = resultant_pencil(dyn, dn.den, dn.num)
    if r.is_zero():
        raise DegeneracyError("multiplier resultant vanished identically")
    if r.deg != dyn.deg:
        raise DegeneracyError("a periodic point of exact period n has a pole of the multiplier")
    return r.monic()


def cycle_multiplier_poly(phi, n):
    """Monic polynomial with one root per cycle of exact period n, including
    a cycle through infinity."""
    per_point = multiplier_poly(phi, n)
    lam_inf = None
    if exact_period_of_infinity(phi, n) == n:
        lam_inf = multiplier_at_infinity(phi, n)
        lin = Poly((-lam_inf, 1))
        per_point = per_point.exact_div(lin ** (n - 1))
    out = poly_nth_root(per_point, n)
    if lam_inf is not None:
        out = out * Poly((-lam_inf, 1))
    return out.monic()


def fixed_point_multipliers_poly(phi):
    """Monic polynomial over all d + 1 fixed points, with multiplicity, including INF."""
    fpoly = periodic_poly(phi, 1)
    dn = phi.derivative()
    out = resultant_pencil(fpoly, dn.den, dn.num)
    if out.is_zero() or out.deg != fpoly.deg:
        raise DegeneracyError("fixed-point multiplier resultant degenerate")
    out = out.monic()
    k = phi.degree + 1 - fpoly.deg
    if k:
        out = out * Poly((-multiplier_at_infinity(phi), 1)) ** k
    return out


def parse_map(text):
    from ultradyn.parser import parse_map as _parse

    return _parse(text)
