"""Valuation thresholds T for the attraction criterion v(lambda) > T."""

from dataclasses import dataclass
from fractions import Fraction

from ultradyn.errors import PreconditionError
from ultradyn.exactnum import INF, is_prime, val

KINDS = ("general", "polynomial", "refined")


@dataclass(frozen=True)
class EpsilonThreshold:
    """epsilon = p**-threshold."""

    p: int
    d: int
    kind: str
    threshold: int

    @property
    def epsilon(self):
        return Fraction(1, self.p**self.threshold)

    def satisfied_by(self, v_lambda):
        """0 < |lambda| < epsilon, in valuation form."""
        return v_lambda is not INF and v_lambda > self.threshold

    def to_json(self):
        return {
            "prime": self.p,
            "degree": self.d,
            "kind": self.kind,
            "threshold": self.threshold,
            "epsilon": str(self.epsilon),
        }


def epsilon(p, d, kind="general"):
    if not is_prime(p):
        raise PreconditionError(f"{p} is not a prime")
    if d < 2:
        raise PreconditionError("threshold needs degree at least 2")
    if kind == "general":
        t = d * max(val(m, p) for m in range(1, d + 1))
    elif kind == "polynomial":
        t = max(m * val(m, p) for m in range(1, d + 1))
    elif kind == "refined":
        t = 0
        for n in range(1, d + 1):
            big_l = n // 2  # ceil((n - 1) / 2)
            for ell in range(1, n + 1):
                for m in range(1, n + 1):
                    t = max(t, big_l * val(m, p) + (ell - big_l) * val(ell, p))
    else:
        raise PreconditionError(f"unknown threshold kind {kind!r}; expected one of {KINDS}")
    return EpsilonThreshold(p, d, kind, t)
