"""Good and potentially good reduction of polynomial maps at a prime.

With a rational fixed point moved to 0, a polynomial sum a_i z^i has
potentially good reduction iff some rational sigma gives
v(a_i) + (i - 1) sigma >= 0 for all i with equality at i = d, because a
good model keeps every fixed point integral and the remaining freedom is a
scaling z -> c z.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from ultradyn.errors import PreconditionError
from ultradyn.exactnum import INF, fmt_q, val
from ultradyn.newton import newton_polygon
from ultradyn.poly import rational_roots
from ultradyn.ratfunc import critical_poly, fixed_point_multipliers_poly, periodic_poly

GOOD = "good"
POTENTIALLY_GOOD = "potentially_good"
BAD = "bad"
INDETERMINATE = "indeterminate"

ESCAPE_STEPS = 5


@dataclass
class ReductionReport:
    p: int
    verdict: str
    sigma: Fraction = None
    translation: object = None
    coefficient_valuations: list = field(default_factory=list)
    witness: dict = None
    reason: str = ""

    def to_json(self):
        return {
            "prime": self.p,
            "verdict": self.verdict,
            "sigma": None if self.sigma is None else str(self.sigma),
            "translation": None if self.translation is None else fmt_q(self.translation),
            "coefficient_valuations": [str(v) for v in self.coefficient_valuations],
            "witness": self.witness,
            "reason": self.reason,
        }


def _vals(coeffs, p):
    return [val(c, p) for c in coeffs]


def _scaling_sigma(vals, indices):
    """sigma with vals[d] + (d-1) sigma = 0 and all vals[i] + (i-1) sigma >= 0, else None."""
    d = len(vals) - 1
    sigma = Fraction(-vals[d], d - 1)
    for i in indices:
        if vals[i] is INF:
            continue
        if vals[i] + (i - 1) * sigma < 0:
            return None
    return sigma


def _escape_witness(phi, p):
    """A rational critical point whose orbit valuations drop strictly for
    ESCAPE_STEPS steps and end in the region where the leading term rules."""
    coeffs = phi.num.coeffs
    d = phi.num.deg
    vd = val(coeffs[d], p)
    # below this valuation the leading term strictly dominates
    bound = min(
        [Fraction(val(c, p) - vd, d - i) for i, c in enumerate(coeffs[:d]) if c != 0]
        + [Fraction(-vd, d - 1)]
    )
    for beta in rational_roots(critical_poly(phi)):
        x = beta
        seq = []
        for _ in range(ESCAPE_STEPS + 1):
            x = phi.evaluate(x)
            seq.append(val(x, p))
            if seq[-1] is INF:
                break
        if INF in seq:
            continue
        if all(seq[k + 1] < seq[k] for k in range(len(seq) - 1)) and seq[-1] < bound:
            return {
                "critical_point": fmt_q(beta),
                "orbit_valuations": seq,
                "dominance_bound": str(bound),
            }
    return None


def _repelling_fixed_point(phi, p):
    mp = fixed_point_multipliers_poly(phi)
    np_ = newton_polygon(mp, p)
    neg = [v for v, _ in np_.root_valuations() if v < 0]
    return {"fixed_point_multiplier_valuation": str(min(neg))} if neg else None


def good_reduction(phi, p):
    if not phi.is_polynomial():
        raise PreconditionError("reduction analysis is implemented for polynomial maps only")
    d = phi.degree
    if d < 2:
        raise PreconditionError("degree must be at least 2")
    coeffs = phi.num.coeffs
    vals = _vals(coeffs, p)
    if vals[d] == 0 and all(v is INF or v >= 0 for v in vals):
        return ReductionReport(p, GOOD, Fraction(0), None, vals, reason="integral coefficients, unit leading coefficient")
    fixed = rational_roots(periodic_poly(phi, 1))
    if fixed:
        gamma = fixed[0]
        shifted = phi.num.taylor_shift(gamma)
        tcoeffs = list(shifted.coeffs)
        tcoeffs[0] -= gamma
        tvals = _vals(tcoeffs, p)
        sigma = _scaling_sigma(tvals, range(1, d + 1))
        if sigma is not None:
            return ReductionReport(
                p, POTENTIALLY_GOOD, sigma, gamma, tvals,
                reason="scaling inequalities feasible after moving a rational fixed point to 0",
            )
        witness = _escape_witness(phi, p) if d % p else None
        rep = _repelling_fixed_point(phi, p)
        return ReductionReport(
            p, BAD, None, gamma, tvals,
            witness={"escape": witness, "repelling": rep},
            reason="scaling inequalities infeasible in the fixed-point chart",
        )
    sigma = _scaling_sigma(vals, range(0, d + 1))
    if sigma is not None:
        return ReductionReport(p, POTENTIALLY_GOOD, sigma, None, vals, reason="scaling inequalities feasible")
    witness = _escape_witness(phi, p) if d % p else None
    rep = _repelling_fixed_point(phi, p)
    if witness or rep:
        return ReductionReport(
            p, BAD, None, None, vals,
            witness={"escape": witness, "repelling": rep},
            reason="no rational fixed point; bad-reduction witness found",
        )
    return ReductionReport(
        p, INDETERMINATE, None, None, vals,
        reason="no rational fixed point and no witness either way",
    )
