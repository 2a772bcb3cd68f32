"""Dense univariate polynomials over Q and the resultant machinery."""

import math
from fractions import Fraction
from math import lcm

import mpmath

from ultradyn.errors import DegeneracyError
from ultradyn.exactnum import as_q, gcd_list

_ZERO = Fraction(0)
_ONE = Fraction(1)


class Poly:
    """Immutable dense polynomial; ``coeffs[i]`` multiplies z**i.

    The zero polynomial has empty coefficients and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [as_q(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    def __reduce__(self):
        return (Poly, (self.coeffs,))

    @classmethod
    def const(cls, c):
        return cls((c,))

    @classmethod
    def z(cls):
        return cls((0, 1))

    @classmethod
    def monomial(cls, k, c=1):
        return cls([0] * k + [c])

    @classmethod
    def from_roots(cls, roots):
        out = cls.const(1)
        for r in roots:
            out = out * cls((-as_q(r), 1))
        return out

    @property
    def deg(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else _ZERO

    def is_zero(self):
        return not self.coeffs

    def is_const(self):
        return len(self.coeffs) <= 1

    def coeff(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else _ZERO

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly({self.render()!r})"

    def __bool__(self):
        return bool(self.coeffs)

    @staticmethod
    def _lift(x):
        return x if isinstance(x, Poly) else Poly.const(x)

    def __add__(self, other):
        o = Poly._lift(other)
        n = max(len(self.coeffs), len(o.coeffs))
        return Poly(self.coeff(i) + o.coeff(i) for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-Poly._lift(other))

    def __rsub__(self, other):
        return Poly._lift(other) - self

    def __mul__(self, other):
        o = Poly._lift(other)
        if not self.coeffs or not o.coeffs:
            return Poly()
        out = [_ZERO] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(o.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative polynomial power")
        out = Poly.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def scale(self, c):
        c = as_q(c)
        return Poly(c * a for a in self.coeffs)

    def divmod(self, other):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Poly(), self
        q = [_ZERO] * (dq + 1)
        lc = other.lc
        m = len(other.coeffs)
        for k in range(dq, -1, -1):
            c = rem[k + m - 1] / lc
            q[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return Poly(q), Poly(rem[: m - 1])

    def __floordiv__(self, other):
        return self.divmod(Poly._lift(other))[0]

    def __mod__(self, other):
        return self.divmod(Poly._lift(other))[1]

    def exact_div(self, other):
        q, r = self.divmod(Poly._lift(other))
        if r:
            raise DegeneracyError("polynomial division is not exact")
        return q

    def divides(self, other):
        return not (other % self)

    def __call__(self, x):
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * x + c
        if acc is None:
            return _ZERO
        return acc

    def eval_mp(self, x):
        acc = mpmath.mpf(0)
        for c in reversed(self.coeffs):
            acc = acc * x + mpmath.mpf(c.numerator) / c.denominator
        return acc

    def derivative(self):
        return Poly(i * c for i, c in enumerate(self.coeffs) if i)

    def monic(self):
        if not self.coeffs:
            return self
        return self.scale(1 / self.lc)

    def integer_primitive(self):
        """Scalar multiple with coprime integer coefficients and positive lc."""
        if not self.coeffs:
            return self
        den = lcm(*(c.denominator for c in self.coeffs))
        ints = [c.numerator * (den // c.denominator) for c in self.coeffs]
        g = gcd_list(ints)
        if ints[-1] < 0:
            g = -g
        return Poly(Fraction(a // g) for a in ints)

    def int_coeffs(self):
        for c in self.coeffs:
            if c.denominator != 1:
                raise ValueError("polynomial has non-integer coefficients")
        return [c.numerator for c in self.coeffs]

    def compose(self, g):
        """self(g(z))."""
        out = Poly()
        for c in reversed(self.coeffs):
            out = out * g + c
        return out

    def taylor_shift(self, a):
        """Coefficients of self(z + a)."""
        return taylor_shift(self, a)

    def reverse(self, n=None):
        """z**n * self(1/z) for formal degree n (default deg)."""
        n = self.deg if n is None else n
        cs = list(self.coeffs) + [_ZERO] * (n + 1 - len(self.coeffs))
        return Poly(reversed(cs[: n + 1]))

    def ord0(self):
        """Multiplicity of 0 as a root."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        raise ValueError("zero polynomial")

    def render(self, var="z"):
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(self.deg, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if i == 0:
                body = str(a)
            else:
                mono = var if i == 1 else f"{var}^{i}"
                body = mono if a == 1 else f"{a}*{mono}"
            parts.append((sign, body))
        s0, b0 = parts[0]
        text = ("-" if s0 == "-" else "") + b0
        for s, b in parts[1:]:
            text += f" {s} {b}"
        return text


def taylor_shift(f, a):
    a = as_q(a)
    cs = list(f.coeffs)
    n = len(cs)
    # repeated synthetic division
    for i in range(n):
        for j in range(n - 2, i - 1, -1):
            cs[j] += a * cs[j + 1]
    return Poly(cs)


def poly_gcd(a, b):
    """Monic gcd (zero if both are zero)."""
    while b:
        a, b = b, a % b
    return a.monic()


def squarefree_part(f):
    if f.is_const():
        return f.monic() if f else f
    g = poly_gcd(f, f.derivative())
    return (f // g).monic()


def is_squarefree(f):
    if f.is_const():
        return True
    return poly_gcd(f, f.derivative()).deg == 0


def squarefree_decomposition(f):
    """Yun's algorithm: list of (factor, multiplicity) with monic factors."""
    out = []
    if f.deg <= 0:
        return out
    f = f.monic()
    fp = f.derivative()
    a = poly_gcd(f, fp)
    b = f // a
    c = fp // a
    d = c - b.derivative()
    i = 1
    while b.deg > 0:
        a = poly_gcd(b, d)
        b = b // a
        c = d // a
        d = c - b.derivative()
        if a.deg > 0:
            out.append((a, i))
        i += 1
    return out


def resultant(a, b):
    """Res(a, b) by the Euclidean remainder sequence over Q.

    Uses Res(a, b) = (-1)^(deg a deg b) Res(b, a) and
    Res(b, a) = lc(b)^(deg a - deg r) Res(b, r) for r = a mod b.
    """
    if a.is_zero() or b.is_zero():
        return _ZERO
    res = _ONE
    while True:
        da, db = a.deg, b.deg
        if db == 0:
            return res * b.lc**da
        if da == 0:
            return res * a.lc**db
        if da < db:
            a, b = b, a
            if (da * db) % 2:
                res = -res
            continue
        r = a % b
        if r.is_zero():
            return _ZERO
        # Res(a, b) = (-1)^(da db) Res(b, a) = (-1)^(da db) lc(b)^(da - dr) Res(b, r)
        if (da * db) % 2:
            res = -res
        res *= b.lc ** (da - r.deg)
        a, b = b, r


def resultant_formal(a, b, nb):
    """Res(a, b) with b regarded as having formal degree nb >= deg b."""
    if b.is_zero():
        return _ZERO
    return a.lc ** (nb - b.deg) * resultant(a, b)


def interpolate(xs, ys):
    """Lagrange interpolation over Q (Newton divided differences)."""
    n = len(xs)
    coef = [as_q(y) for y in ys]
    xs = [as_q(x) for x in xs]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    out = Poly.const(coef[-1]) if n else Poly()
    for i in range(n - 2, -1, -1):
        out = out * Poly((-xs[i], 1)) + coef[i]
    return out


def resultant_pencil(a, b, c):
    """Res_z(a(z), w*b(z) - c(z)) as a polynomial in w.

    The second argument is treated with formal degree max(deg b, deg c),
    so specialization at any w agrees with the polynomial.
    """
    if a.is_zero():
        return Poly()
    n = max(b.deg, c.deg)
    k = a.deg
    xs = list(range(k + 1))
    ys = [resultant_formal(a, b.scale(w) - c, n) for w in xs]
    return interpolate(xs, ys)


def pushforward_poly(s, num, den):
    """Polynomial whose roots are num/den evaluated at the roots of s.

    Roots of s where den vanishes contribute nothing (they map to infinity);
    callers split those off beforehand when it matters.
    """
    return resultant_pencil(s, den, num)


def poly_nth_root(f, n):
    """Exact g with g**n == f, or raise DegeneracyError."""
    if n == 1:
        return f
    if f.is_zero():
        return f
    if f.deg % n:
        raise DegeneracyError(f"degree {f.deg} is not divisible by {n}")
    m = f.deg // n
    lead = _nth_root_q(f.lc, n)
    # leading-term recursion on reversed coefficients
    g = [_ZERO] * (m + 1)
    g[m] = lead
    for k in range(1, m + 1):
        partial = Poly(g) ** n
        target = f.coeff(f.deg - k) - partial.coeff(f.deg - k)
        g[m - k] = target / (n * lead ** (n - 1))
    out = Poly(g)
    if out**n != f:
        raise DegeneracyError(f"polynomial is not an exact {n}-th power")
    return out


def _iroot(x, n):
    """Floor of the n-th root of a non-negative integer."""
    if x < 2:
        return x
    r = 1 << ((x.bit_length() + n - 1) // n)
    while True:
        nr = ((n - 1) * r + x // r ** (n - 1)) // n
        if nr >= r:
            return r
        r = nr


def _nth_root_q(q, n):
    q = as_q(q)
    sign = 1
    num = q.numerator
    if num < 0:
        if n % 2 == 0:
            raise DegeneracyError("even root of a negative number")
        sign, num = -1, -num
    a, b = _iroot(num, n), _iroot(q.denominator, n)
    if a**n != num or b**n != q.denominator:
        raise DegeneracyError(f"{q} is not a perfect {n}-th power")
    return Fraction(sign * a, b)


def _root_digits(f):
    return max(abs(c).bit_length() for c in f.int_coeffs()) * 30103 // 100000 + 1


_SIEVE_PRIMES = (3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97)


def _no_roots_mod_small_prime(ints):
    """True if f has no root mod some small p not dividing lc, hence no rational root."""
    lc = ints[-1]
    for p in _SIEVE_PRIMES:
        if lc % p == 0:
            continue
        cs = [c % p for c in reversed(ints)]
        has_root = False
        for x in range(p):
            acc = 0
            for c in cs:
                acc = (acc * x + c) % p
            if acc == 0:
                has_root = True
                break
        if not has_root:
            return True
    return False


def rational_roots(f):
    """Distinct rational roots of f (zero polynomial rejected).

    A rational root a/b of a primitive integer polynomial has b | lc, so
    lc * root is an integer; numerical real roots give the candidates and
    every candidate is confirmed by exact evaluation.
    """
    if f.is_zero():
        raise ValueError("zero polynomial has every root")
    if f.deg <= 0:
        return []
    out = []
    g = squarefree_part(f)
    k = g.ord0()
    if k:
        out.append(_ZERO)
        g = Poly(g.coeffs[k:])
    g = g.integer_primitive()
    if g.deg == 0:
        return out
    if g.deg == 1:
        out.append(-g.coeffs[0] / g.coeffs[1])
        return sorted(out)
    ints = g.int_coeffs()
    if g.deg == 2:
        c, b, a = ints
        disc = b * b - 4 * a * c
        if disc >= 0 and math.isqrt(disc) ** 2 == disc:
            s = math.isqrt(disc)
            out += [Fraction(-b + s, 2 * a), Fraction(-b - s, 2 * a)]
        return sorted(set(out))
    if _no_roots_mod_small_prime(ints):
        return sorted(out)
    lc = g.lc
    digits = _root_digits(g)
    dps = 30 + 2 * digits + 2 * g.deg
    cands = set()
    with mpmath.workdps(dps):
        roots = _mp_roots(g)
        for r in roots:
            if abs(mpmath.im(r)) > mpmath.mpf(10) ** (-(dps // 3)) * (1 + abs(r)):
                continue
            t = mpmath.re(r) * int(lc)
            base = int(mpmath.nint(t))
            for off in (-1, 0, 1):
                cands.add(Fraction(base + off, int(lc)))
    for c in cands:
        if g(c) == 0:
            out.append(c)
    return sorted(set(out))


def _mp_roots(g):
    cs = [mpmath.mpf(int(c)) for c in reversed(g.int_coeffs())]
    steps = 100
    for _ in range(6):
        try:
            return mpmath.polyroots(cs, maxsteps=steps, extraprec=4 * mpmath.mp.prec)
        except mpmath.libmp.libhyper.NoConvergence:
            steps *= 4
    raise DegeneracyError("numerical root isolation did not converge")


def complex_roots(f, dps=60):
    """Approximate complex roots (with multiplicity) of a nonconstant f."""
    g = f.integer_primitive()
    with mpmath.workdps(dps):
        k = g.ord0()
        h = Poly(g.coeffs[k:])
        roots = [mpmath.mpc(0)] * k
        if h.deg >= 1:
            roots += list(_mp_roots(h))
        return roots


def strip_rational_roots(f):
    """Split f as (rational roots with multiplicity, cofactor without rational roots)."""
    roots = []
    g = f
    for r in rational_roots(f):
        lin = Poly((-r, 1))
        while g.deg > 0:
            q, rem = g.divmod(lin)
            if rem:
                break
            g = q
            roots.append(r)
    return roots, g
