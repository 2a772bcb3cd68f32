"""Weil heights over Q: exact for rationals, Mahler measure for algebraic numbers,
plus multiplier-height reports and the PCF fixed-multiplier bound."""

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from ultradyn.errors import DegeneracyError, PreconditionError
from ultradyn.exactnum import INF, as_q, fmt_q, is_prime
from ultradyn.poly import (
    Poly,
    _iroot,
    poly_gcd,
    resultant_pencil,
    squarefree_decomposition,
    squarefree_part,
    strip_rational_roots,
)
from ultradyn.ratfunc import (
    cycle_multiplier_poly,
    dynatomic_poly,
    exact_period_of_infinity,
    iterate,
    multiplier_at_infinity,
)

DEFAULT_ERR = Fraction(1, 10**9)
LOG4_SLACK = 1e-9


def _perfect_power(n):
    """(b, e) with n = b**e and e maximal, for an integer n >= 1."""
    if n <= 1:
        return n, 1
    for e in range(n.bit_length(), 1, -1):
        b = _iroot(n, e)
        if b > 1 and b**e == n:
            return b, e
    return n, 1


def _rational_power(q):
    """(b, e) with q = b**e, b rational > 0 and e maximal."""
    a, c = q.numerator, q.denominator
    if c == 1:
        b, e = _perfect_power(a)
        return Fraction(b), e
    if a == 1:
        b, e = _perfect_power(c)
        return Fraction(1, b), e
    ba, ea = _perfect_power(a)
    bc, ec = _perfect_power(c)
    e = math.gcd(ea, ec)
    return Fraction(ba ** (ea // e), bc ** (ec // e)), e


@dataclass(frozen=True)
class HeightValue:
    """coef * log(base) when exact (base rational, not a perfect power), else numeric only."""

    approx: float
    err: float = 0.0
    coef: Fraction = None
    base: Fraction = None

    @classmethod
    def log_of(cls, arg, coef=1):
        arg = as_q(arg)
        if arg <= 0:
            raise ValueError("log of a non-positive rational")
        coef = as_q(coef)
        if arg == 1 or coef == 0:
            return cls(0.0, 0.0, Fraction(0), Fraction(1))
        b, e = _rational_power(arg)
        coef = coef * e
        if b < 1:
            b, coef = 1 / b, -coef
        approx = float(coef) * (math.log(b.numerator) - math.log(b.denominator))
        return cls(approx, 0.0, coef, b)

    @classmethod
    def zero(cls):
        return cls.log_of(1)

    @property
    def is_exact(self):
        return self.coef is not None

    def exact_arg(self):
        """(B, k) with value = log(B)/k and k >= 1."""
        n, k = self.coef.numerator, self.coef.denominator
        return self.base**n, k

    def render(self):
        if not self.is_exact:
            return None
        if self.coef == 0:
            return "0"
        arg, k = self.exact_arg()
        s = f"log({arg})"
        return s if k == 1 else f"{s}/{k}"

    def le_log(self, bound, slack=LOG4_SLACK):
        """self <= log(bound); exact comparison when possible."""
        bound = as_q(bound)
        if self.is_exact:
            arg, k = self.exact_arg()
            return arg <= bound**k
        return self.approx <= math.log(bound) + slack + self.err

    def same_as(self, other):
        if self.is_exact and other.is_exact:
            return self.coef == other.coef and (self.coef == 0 or self.base == other.base)
        return abs(self.approx - other.approx) <= self.err + other.err + 1e-12

    def to_json(self):
        return {"exact": self.render(), "approx": self.approx, "err": self.err}

    def __repr__(self):
        return f"HeightValue({self.render() or self.approx!r})"


def height_rational(x):
    x = as_q(x)
    if x == 0:
        return HeightValue.zero()
    return HeightValue.log_of(max(abs(x.numerator), x.denominator))


def _powmod_z(n, m):
    """z**n mod m by repeated squaring."""
    out, base = Poly.const(1), Poly.monomial(1) % m
    while n:
        if n & 1:
            out = (out * base) % m
        base = (base * base) % m
        n >>= 1
    return out


def _is_cyclotomic_product(f):
    """True if f is a unit times a product of cyclotomic polynomials.

    Each Phi_N has degree phi(N) >= sqrt(N/2), so only N <= 2 deg**2 can occur;
    the gcd with z**N - 1 peels those factors off.
    """
    g = squarefree_part(f).monic()
    if f.integer_primitive().lc not in (1, -1) or g.deg > 64:
        return False
    rest = g
    for n in range(1, 2 * g.deg * g.deg + 2):
        if rest.deg <= 0:
            break
        h = poly_gcd(rest, _powmod_z(n, rest) - Poly.const(1))
        if h.deg > 0:
            rest = rest // h
    return rest.deg <= 0


def _enclose_roots(ints, dps):
    """Certified disks (center, radius) around the roots of a squarefree integer
    polynomial, or None if the disks from this precision overlap.

    Inclusion rule: with Weierstrass corrections W_i = f(z_i) / (lc prod (z_i - z_j)),
    every root lies in some disk D(z_i, n |W_i|) and a connected union of k disks
    holds exactly k roots; disjoint disks therefore hold one root each.
    Corrections are evaluated in interval arithmetic.
    """
    n = len(ints) - 1
    with mpmath.workdps(dps):
        cs = [mpmath.mpf(c) for c in reversed(ints)]
        try:
            zs = mpmath.polyroots(cs, maxsteps=50 + 10 * n, extraprec=2 * mpmath.mp.prec)
        except mpmath.libmp.libhyper.NoConvergence:
            return None
    iv = mpmath.iv
    old = iv.prec
    iv.prec = mpmath.mp.prec + int(dps * 3.33) + 16
    try:
        pts = [iv.mpc(mpmath.re(z), mpmath.im(z)) for z in zs]
        lc = iv.mpf(ints[-1])
        radii = []
        for i, z in enumerate(pts):
            acc = iv.mpc(0)
            for c in reversed(ints):
                acc = acc * z + c
            den = lc
            for j, w in enumerate(pts):
                if j != i:
                    den = den * (z - w)
            if 0 in abs(den):
                return None
            radii.append((n * abs(acc / den)).b)
        for i in range(n):
            for j in range(i + 1, n):
                if abs(pts[i] - pts[j]).a <= radii[i] + radii[j]:
                    return None
        return [(abs(z), r) for z, r in zip(pts, radii)]
    finally:
        iv.prec = old


def _mahler_numeric(ints, target):
    """log Mahler measure of a squarefree integer polynomial, low to high.

    Returns (value, err, bounds) with the true value within err of value;
    bounds lists (lower, upper) floats enclosing each root modulus.
    """
    iv = mpmath.iv
    dps = 30
    while dps <= 2560:
        disks = _enclose_roots(ints, dps)
        if disks is not None:
            old = iv.prec
            iv.prec = int(dps * 3.33) + 32
            try:
                lo = hi = iv.log(iv.mpf(abs(ints[-1])))
                bounds = []
                for mag, r in disks:
                    down = iv.mpf(mag.a) - iv.mpf(r)
                    up = iv.mpf(mag.b) + iv.mpf(r)
                    bounds.append((float(down.a), float(up.b)))
                    if down.a > 1:
                        lo = lo + iv.log(down)
                    if up.b > 1:
                        hi = hi + iv.log(up)
                lo_v, hi_v = mpmath.mpf(lo.a), mpmath.mpf(hi.b)
            finally:
                iv.prec = old
            err = (hi_v - lo_v) / 2
            if err <= target:
                mid = (lo_v + hi_v) / 2
                # covers the rounding of the midpoint to a float
                err += abs(mid) * mpmath.mpf(2) ** -50
                return float(mid), float(err), bounds
        dps *= 2
    raise DegeneracyError("Mahler measure did not reach the requested accuracy")


def mahler_measure_log(f, target=DEFAULT_ERR):
    """(exact M as a Fraction or None, approx, err) for log M(f); err is a certified bound."""
    g = f.integer_primitive()
    parts = [(h, k) for h, k in squarefree_decomposition(g) if h.deg > 0]
    if len(parts) > 1 or (parts and parts[0][1] > 1):
        # M is multiplicative; the inclusion disks need simple roots
        exact, approx, err = Fraction(1), 0.0, 0.0
        for h, k in parts:
            e, a, r = mahler_measure_log(h, Fraction(target) / (k * len(parts)))
            exact = None if exact is None or e is None else exact * e**k
            approx += k * a
            err += k * r
        return exact, approx, err
    ints = g.int_coeffs()
    lc, a0 = abs(ints[-1]), abs(ints[g.ord0()])
    if g.deg == 0:
        return Fraction(lc), math.log(lc), 0.0
    if _is_cyclotomic_product(Poly(g.coeffs[g.ord0():])):
        return Fraction(1), 0.0, 0.0
    approx, err, disks = _mahler_numeric(ints, float(target) / 2)
    # exact cases: every root strictly inside the unit circle (M = |lc|) or strictly outside (M = |a0|)
    if all(up < 1 for _, up in disks):
        return Fraction(lc), math.log(lc), 0.0
    if g.ord0() == 0 and all(down > 1 for down, _ in disks):
        return Fraction(a0), math.log(a0), 0.0
    return None, approx, err


def height_algebraic(minpoly, target=DEFAULT_ERR):
    """h(alpha) = log M(f)/deg f for the primitive integral minimal polynomial f."""
    f = minpoly if isinstance(minpoly, Poly) else Poly(minpoly)
    if f.deg < 1:
        raise PreconditionError("minimal polynomial must be nonconstant")
    if f.deg == 1:
        return height_rational(-f.coeffs[0] / f.coeffs[1])
    roots, _ = strip_rational_roots(f)
    if roots:
        raise PreconditionError("polynomial is reducible over Q (rational root); factor it first")
    if poly_gcd(f, f.derivative()).deg > 0:
        raise PreconditionError("polynomial is not squarefree; factor it first")
    exact, approx, err = mahler_measure_log(f, target)
    if exact is not None:
        return HeightValue.log_of(exact, Fraction(1, f.deg))
    return HeightValue(approx / f.deg, err / f.deg)


@dataclass
class FactorHeight:
    factor: Poly
    multiplicity: int
    height: HeightValue
    flags: tuple = ()

    def to_json(self):
        out = {
            "factor": self.factor.render("w"),
            "multiplicity": self.multiplicity,
            "height": self.height.to_json(),
        }
        if self.flags:
            out["flags"] = list(self.flags)
        return out


@dataclass
class MultiplierHeightReport:
    period: int
    factors: list
    flags: list = field(default_factory=list)

    @property
    def heights(self):
        """One height per cycle, with multiplicity."""
        out = []
        for f in self.factors:
            out += [f.height] * (f.multiplicity * max(f.factor.deg, 1))
        return out

    def max_height(self):
        return max(self.heights, key=lambda h: h.approx)

    def to_json(self):
        out = {"period": self.period, "factors": [f.to_json() for f in self.factors]}
        if self.flags:
            out["flags"] = self.flags
        return out


def _cycle_poly_fallback(phi, n):
    """Per-point multipliers over the squarefree dynatomic part, plus infinity."""
    dyn = squarefree_part(dynatomic_poly(phi, n))
    dn = iterate(phi, n).derivative()
    out = resultant_pencil(dyn, dn.den, dn.num).monic() if dyn.deg > 0 else Poly.const(1)
    if exact_period_of_infinity(phi, n) == n:
        out = out * Poly((-multiplier_at_infinity(phi, n), 1))
    return out


def multiplier_heights(phi, n=1):
    flags = []
    try:
        mp = cycle_multiplier_poly(phi, n)
    except DegeneracyError as exc:
        mp = _cycle_poly_fallback(phi, n)
        flags.append(f"degenerate cycle structure ({exc}); one multiplier per distinct point")
    factors = []
    roots, rest = strip_rational_roots(mp)
    for r in sorted(set(roots)):
        factors.append(FactorHeight(Poly((-r, 1)), roots.count(r), height_rational(r)))
    for g, mult in squarefree_decomposition(rest):
        if g.deg <= 0:
            continue
        g = g.integer_primitive()
        fl = ()
        if g.deg >= 4:
            fl = ("irreducibility not verified; height of the whole factor",)
            exact, approx, err = mahler_measure_log(g)
            h = (
                HeightValue.log_of(exact, Fraction(1, g.deg))
                if exact is not None
                else HeightValue(approx / g.deg, err / g.deg)
            )
        else:
            h = height_algebraic(g)
        factors.append(FactorHeight(g, mult, h, fl))
    return MultiplierHeightReport(n, factors, flags)


def _lcm_upto(d):
    out = 1
    for k in range(2, d + 1):
        out = out * k // math.gcd(out, k)
    return out


def pcf_fixed_multiplier_bound(d):
    """d * sum_{n <= d} Lambda(n) = d * log lcm(1..d)."""
    if d < 2:
        raise PreconditionError("degree must be at least 2")
    return HeightValue.log_of(_lcm_upto(d), d)


def pcf_bound_from_thresholds(d):
    """Sum over primes p <= d of log(1/eps_{p,d}) with the general threshold."""
    from ultradyn.dynamics.thresholds import epsilon

    total = Fraction(1)
    for p in range(2, d + 1):
        if is_prime(p):
            eps = epsilon(p, d).epsilon
            total /= eps
    return HeightValue.log_of(total)


@dataclass
class QuadraticPCFHeightReport:
    passed: bool
    bound: HeightValue
    report: MultiplierHeightReport
    equality: bool

    def to_json(self):
        return {
            "passed": self.passed,
            "bound": self.bound.to_json(),
            "equality_attained": self.equality,
            "fixed_multipliers": self.report.to_json(),
        }


def quadratic_pcf_height_check(phi, pcf_certificate=None):
    """Fixed-multiplier heights of a quadratic PCF map are at most log 4."""
    from ultradyn.dynamics.pcf import PCF, pcf_check

    if phi.degree != 2:
        raise PreconditionError(f"quadratic map required (degree {phi.degree})")
    cert = pcf_certificate or pcf_check(phi)
    if cert.verdict != PCF:
        raise PreconditionError(f"map is not certified PCF (verdict {cert.verdict})")
    rep = multiplier_heights(phi, 1)
    bound = HeightValue.log_of(4)
    passed = all(h.le_log(4) for h in rep.heights)
    equality = any(h.is_exact and h.same_as(bound) for h in rep.heights)
    return QuadraticPCFHeightReport(passed, bound, rep, equality)


__all__ = [
    "HeightValue",
    "quadratic_pcf_height_check",
    "height_algebraic",
    "height_rational",
    "multiplier_heights",
    "pcf_fixed_multiplier_bound",
]
