"""Fixed points, multiplier classification and attracting-cycle counts."""

from dataclasses import dataclass, field
from fractions import Fraction

from ultradyn.errors import DegeneracyError, PreconditionError
from ultradyn.exactnum import INF, fmt_q, val
from ultradyn.newton import newton_polygon
from ultradyn.poly import (
    Poly,
    is_squarefree,
    resultant_pencil,
    squarefree_decomposition,
    squarefree_part,
    strip_rational_roots,
)
from ultradyn.ratfunc import (
    dynatomic_poly,
    exact_period_of_infinity,
    iterate,
    multiplier_at_infinity,
    periodic_poly,
)

ATTRACTING = "attracting"
SUPERATTRACTING = "superattracting"
INDIFFERENT = "indifferent"
RATIONALLY_INDIFFERENT = "rationally_indifferent"
REPELLING = "repelling"


def classify(lam, p):
    """Classify an exact rational multiplier at the prime p."""
    lam = Fraction(lam)
    if lam == 0:
        return SUPERATTRACTING
    v = val(lam, p)
    if v > 0:
        return ATTRACTING
    if v < 0:
        return REPELLING
    if lam in (1, -1):
        return RATIONALLY_INDIFFERENT
    return INDIFFERENT


def classify_valuation(v):
    """Classification from a multiplier valuation alone.

    Valuation 0 cannot be split into the rationally indifferent case here,
    so it is reported as indifferent and flagged by the caller.
    """
    if v is INF:
        return SUPERATTRACTING
    if v > 0:
        return ATTRACTING
    if v < 0:
        return REPELLING
    return INDIFFERENT


@dataclass(frozen=True)
class FixedPoint:
    """A rational fixed point (``point``) or a block of irrational ones (``factor``)."""

    point: object = None
    factor: Poly = None
    multiplicity: int = 1
    multiplier: Fraction = None
    multiplier_valuations: tuple = ()
    root_valuations: tuple = ()
    classification: tuple = ()
    flags: tuple = field(default=())

    def to_json(self):
        out = {"multiplicity": self.multiplicity}
        if self.factor is None:
            out["point"] = fmt_q(self.point)
            out["multiplier"] = fmt_q(self.multiplier)
            out["multiplier_valuation"] = str(self.multiplier_valuations[0])
        else:
            out["factor"] = self.factor.render()
            out["root_valuations"] = [[str(v), m] for v, m in self.root_valuations]
            out["multiplier_valuations"] = [[str(v), m] for v, m in self.multiplier_valuations]
        out["classification"] = list(self.classification)
        if self.flags:
            out["flags"] = list(self.flags)
        return out


def _multiplier_valuations(factor, deriv, p):
    """Newton-polygon valuations of the multipliers at the roots of factor."""
    r = resultant_pencil(factor, deriv.den, deriv.num)
    np_ = newton_polygon(r, p)
    out = list(np_.root_valuations())
    if np_.ord0:
        out.append((INF, np_.ord0))
    return out


def fixed_points(phi, p):
    if phi.degree < 2:
        raise PreconditionError("fixed-point analysis needs degree at least 2")
    fpoly = periodic_poly(phi, 1)
    deriv = phi.derivative()
    out = []
    roots, rest = strip_rational_roots(fpoly)
    for r in sorted(set(roots)):
        lam = deriv.evaluate(r)
        out.append(
            FixedPoint(
                point=r,
                multiplicity=roots.count(r),
                multiplier=lam,
                multiplier_valuations=(val(lam, p),),
                classification=(classify(lam, p),),
            )
        )
    for g, mult in squarefree_decomposition(rest):
        if g.deg <= 0:
            continue
        np_ = newton_polygon(g, p)
        rv = list(np_.root_valuations())
        mv = _multiplier_valuations(g, deriv, p)
        out.append(
            FixedPoint(
                factor=g,
                multiplicity=mult,
                root_valuations=tuple(rv),
                multiplier_valuations=tuple(mv),
                classification=tuple(classify_valuation(v) for v, _ in mv),
                flags=("valuation-0 multipliers not tested for roots of unity",)
                if any(v == 0 for v, _ in mv)
                else (),
            )
        )
    if phi.evaluate(INF) is INF:
        lam = multiplier_at_infinity(phi)
        out.append(
            FixedPoint(
                point=INF,
                multiplicity=phi.degree + 1 - fpoly.deg,
                multiplier=lam,
                multiplier_valuations=(val(lam, p),),
                classification=(classify(lam, p),),
            )
        )
    return out


@dataclass
class CycleCount:
    period: int
    attracting_points: int
    cycles: int
    degenerate: bool = False
    skipped: bool = False
    note: str = ""

    def to_json(self):
        out = {
            "period": self.period,
            "attracting_points": self.attracting_points,
            "cycles": self.cycles,
        }
        if self.degenerate:
            out["degenerate"] = True
        if self.skipped:
            out["skipped"] = True
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class CycleReport:
    p: int
    degree: int
    per_period: list
    total: int
    bound: int

    @property
    def within_bound(self):
        return self.total <= self.bound

    def to_json(self):
        return {
            "prime": self.p,
            "degree": self.degree,
            "per_period": [c.to_json() for c in self.per_period],
            "total": self.total,
            "bound": self.bound,
            "within_bound": self.within_bound,
        }


def _attracting_affine_points(phi, n, p):
    """(count, degenerate) of affine points of exact period n with v(multiplier) > 0.

    A repeated root of the dynatomic polynomial is a point whose cycle
    multiplier is a root of unity, so it is never attracting; counting over
    the squarefree part is therefore exact.
    """
    dyn = dynatomic_poly(phi, n)
    if dyn.deg <= 0:
        return 0, False
    degenerate = not is_squarefree(dyn)
    base = squarefree_part(dyn) if degenerate else dyn
    deriv = iterate(phi, n).derivative()
    r = resultant_pencil(base, deriv.den, deriv.num)
    if r.is_zero() or r.deg != base.deg:
        raise DegeneracyError(f"multiplier resultant degenerate for period {n}")
    return newton_polygon(r, p).count_roots(0, strict=True), degenerate


def count_attracting_cycles(phi, p, N):
    """Attracting cycles of exact period 1..N at p; the hypothesis p > d is enforced."""
    d = phi.degree
    if d < 2:
        raise PreconditionError("cycle counting needs degree at least 2")
    if p <= d:
        raise PreconditionError(f"cycle counting requires p > d (p={p}, d={d})")
    per = []
    total = 0
    inf_period = exact_period_of_infinity(phi, N)
    for n in range(1, N + 1):
        try:
            pts, degenerate = _attracting_affine_points(phi, n, p)
        except DegeneracyError as exc:
            per.append(CycleCount(n, 0, 0, skipped=True, note=str(exc)))
            continue
        note = ""
        if inf_period == n:
            lam = multiplier_at_infinity(phi, n)
            if lam == 0 or val(lam, p) > 0:
                pts += 1
                note = "cycle through infinity is attracting"
        if pts % n:
            raise DegeneracyError(f"{pts} attracting points do not split into {n}-cycles")
        per.append(CycleCount(n, pts, pts // n, degenerate=degenerate, note=note))
        total += pts // n
    return CycleReport(p, d, per, total, 2 * d - 2)
