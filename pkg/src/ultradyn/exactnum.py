"""Exact rationals, p-adic valuations and finite-precision p-adic numbers.

Rationals are :class:`fractions.Fraction`.  Non-archimedean sizes are always
carried as valuations: ``|x| < |y|`` is written ``val(x) > val(y)``.  The
valuation of zero is the singleton :data:`INF`.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, total_ordering
from math import gcd

from ultradyn.errors import PrecisionError, PreconditionError


@total_ordering
class _Infinity:
    """The valuation of zero.  Larger than every rational, absorbs addition."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("ultradyn.INF")

    def __lt__(self, other):
        return False

    def __gt__(self, other):
        return other is not self

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __sub__(self, other):
        if other is self:
            raise ArithmeticError("INF - INF is undefined")
        return self

    def __mul__(self, other):
        if other is self or other > 0:
            return self
        raise ArithmeticError("INF times a non-positive number is undefined")

    __rmul__ = __mul__

    def __neg__(self):
        raise ArithmeticError("negative infinity is not a valuation")

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()


def as_q(x):
    """Coerce ints, Fractions and "p/q" strings to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def fmt_q(x):
    """Serialize a rational (or INF) for JSON output."""
    if x is INF:
        return "inf"
    return str(as_q(x))


def parse_point(text):
    """Parse a point of P^1(Q): a rational string or 'inf'."""
    t = text.strip().lower()
    if t in ("inf", "infinity", "oo"):
        return INF
    return Fraction(t)


@lru_cache(maxsize=4096)
def is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def primes_upto(n):
    return [q for q in range(2, n + 1) if is_prime(q)]


def prime_factors(n):
    """Distinct prime factors of a nonzero integer, by trial division."""
    n = abs(n)
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out.append(n)
    return out


def _check_prime(p):
    if not isinstance(p, int) or not is_prime(p):
        raise PreconditionError(f"{p!r} is not a prime")


def _vint(n, p):
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def val(x, p):
    """p-adic valuation of a rational; INF for zero."""
    _check_prime(p)
    x = as_q(x)
    if x == 0:
        return INF
    return _vint(x.numerator, p) - _vint(x.denominator, p)


def unit_part(x, p):
    """x / p**val(x) as a Fraction."""
    x = as_q(x)
    v = val(x, p)
    return x / Fraction(p) ** v


def mod_pk(x, p, k):
    """Reduce a p-integral rational to an integer in [0, p**k)."""
    x = as_q(x)
    m = p**k
    if x.denominator % p == 0:
        raise PreconditionError(f"{x} is not {p}-integral")
    return x.numerator * pow(x.denominator, -1, m) % m


def naive_height_log_args(x):
    """(|a|, |b|) for x = a/b reduced; the height is log max of the pair."""
    x = as_q(x)
    return abs(x.numerator), x.denominator


@dataclass(frozen=True)
class PAdicApprox:
    """A p-adic number known to finite precision.

    Represents some x with ``val(x - p**shift * unit) >= shift + precision``.
    ``unit`` is prime to p, or 0 when all that is known is
    ``val(x) >= shift`` (then ``precision`` is 0).

    Precision is propagated pessimistically: sums keep the smaller absolute
    precision, products keep the smaller relative precision.
    """

    p: int
    unit: int
    shift: int
    precision: int

    @property
    def abs_precision(self):
        return self.shift + self.precision

    @property
    def is_known_zero(self):
        """True when the approximation cannot be told apart from 0."""
        return self.unit == 0

    def valuation(self):
        if self.unit == 0:
            raise PrecisionError(
                f"valuation unknown: value is 0 modulo {self.p}^{self.shift}"
            )
        return self.shift

    def valuation_lower_bound(self):
        return self.shift

    def to_fraction(self):
        return Fraction(self.unit) * Fraction(self.p) ** self.shift

    @classmethod
    def zero(cls, p, abs_precision):
        return cls(p, 0, abs_precision, 0)

    @classmethod
    def from_rational(cls, x, p, abs_precision):
        x = as_q(x)
        v = val(x, p)
        if v is INF or v >= abs_precision:
            return cls.zero(p, abs_precision)
        n = abs_precision - v
        u = mod_pk(unit_part(x, p), p, n)
        return cls(p, u, v, n)

    def _coerce(self, other):
        if isinstance(other, PAdicApprox):
            if other.p != self.p:
                raise ValueError("mixed primes")
            return other
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return PAdicApprox.from_rational(
                self.to_fraction() + as_q(other), self.p, self.abs_precision
            )
        prec = min(self.abs_precision, o.abs_precision)
        return PAdicApprox.from_rational(self.to_fraction() + o.to_fraction(), self.p, prec)

    __radd__ = __add__

    def __neg__(self):
        return PAdicApprox.from_rational(-self.to_fraction(), self.p, self.abs_precision)

    def __sub__(self, other):
        return self + (-other if isinstance(other, PAdicApprox) else -as_q(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            c = as_q(other)
            if c == 0:
                raise PrecisionError("multiplying an approximation by exact 0")
            vc = val(c, self.p)
            return PAdicApprox.from_rational(
                self.to_fraction() * c, self.p, self.abs_precision + vc
            )
        if self.unit == 0 or o.unit == 0:
            # only a lower bound on val(xy) survives
            return PAdicApprox.zero(self.p, self.shift + o.shift)
        rel = min(self.precision, o.precision)
        shift = self.shift + o.shift
        return PAdicApprox.from_rational(self.to_fraction() * o.to_fraction(), self.p, shift + rel)

    __rmul__ = __mul__

    def inverse(self):
        if self.unit == 0:
            raise PrecisionError("cannot invert an approximation indistinguishable from 0")
        m = self.p**self.precision
        return PAdicApprox(self.p, pow(self.unit, -1, m), -self.shift, self.precision)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return self * (1 / as_q(other))
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * as_q(other)

    def __pow__(self, k):
        out = PAdicApprox.from_rational(1, self.p, self.abs_precision - self.shift)
        for _ in range(k):
            out = out * self
        return out

    def congruent(self, x):
        """Whether the exact rational x is consistent with this approximation."""
        d = as_q(x) - self.to_fraction()
        return val(d, self.p) >= self.abs_precision

    def __repr__(self):
        return (
            f"PAdicApprox(p={self.p}, {self.to_fraction()} + O({self.p}^{self.abs_precision}))"
        )


def eval_poly_approx(coeffs, x, margin=64):
    """Horner evaluation of exact rational coefficients at an approximation."""
    prec = x.abs_precision + margin
    acc = None
    for c in reversed(coeffs):
        if acc is None:
            acc = PAdicApprox.from_rational(c, x.p, prec)
        else:
            acc = acc * x + PAdicApprox.from_rational(c, x.p, prec)
    if acc is None:
        return PAdicApprox.zero(x.p, prec)
    return acc


def hensel_lift(f, x0, p, N):
    """Lift a simple root of f modulo p to a root modulo p**N.

    ``f`` is a Poly with p-integral coefficients.  Returns a PAdicApprox x
    with x = x0 mod p and val(f(x)) >= N.
    """
    _check_prime(p)
    if N < 1:
        raise PreconditionError("precision N must be positive")
    coeffs = list(f.coeffs)
    if not coeffs:
        raise PreconditionError("cannot lift a root of the zero polynomial")
    for c in coeffs:
        if c != 0 and val(c, p) < 0:
            raise PreconditionError(f"coefficient {c} is not {p}-integral")
    df = f.derivative()
    fx0 = f(Fraction(x0))
    dfx0 = df(Fraction(x0))
    if fx0 != 0 and val(fx0, p) < 1:
        raise PreconditionError(f"f(x0) is not 0 mod {p}: val(f({x0})) = {val(fx0, p)} < 1")
    if dfx0 == 0 or val(dfx0, p) != 0:
        raise PreconditionError(f"f'(x0) is 0 mod {p}: the root is not simple")
    x = mod_pk(x0, p, 1)
    k = 1
    while k < N:
        k = min(2 * k, N)
        m = p**k
        fx = sum(mod_pk(c, p, k) * pow(x, i, m) for i, c in enumerate(coeffs)) % m
        dfx = sum(i * mod_pk(c, p, k) * pow(x, i - 1, m) for i, c in enumerate(coeffs) if i) % m
        x = (x - fx * pow(dfx, -1, m)) % m
    return PAdicApprox.from_rational(x, p, N)


def gcd_list(nums):
    g = 0
    for n in nums:
        g = gcd(g, n)
    return g
