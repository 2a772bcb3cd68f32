"""Certificates that an attracting cycle attracts a critical point.

Basin rule: translate the fixed point gamma to 0 and let rho* be the largest
valuation of a nonzero zero or a pole of phi(z + gamma) - gamma.  On
{v(z) > rho*} every factor (1 - z/alpha) is a unit, so
v(phi(z + gamma) - gamma) = v(lambda) + v(z) exactly.  A critical value xi
with v(xi - gamma) > rho* and xi != gamma is then strictly attracted: the
valuations of its orbit offsets grow by v(lambda) each step and never reach
INF, because gamma is its own only preimage in the basin.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from ultradyn.errors import DegeneracyError, NoCertificateError, PrecisionError, PreconditionError
from ultradyn.exactnum import INF, PAdicApprox, as_q, eval_poly_approx, fmt_q, hensel_lift, val
from ultradyn.newton import newton_polygon
from ultradyn.poly import (
    Poly,
    poly_gcd,
    pushforward_poly,
    rational_roots,
    squarefree_decomposition,
    strip_rational_roots,
)
from ultradyn.ratfunc import (
    Mobius,
    conjugate,
    critical_multiplicity_at_infinity,
    critical_poly,
    critical_values_poly,
    iterate,
    periodic_poly,
)
from ultradyn.dynamics.thresholds import epsilon

# exact iterations of a rational critical value before giving up on it
ORBIT_STEPS = 16
ORBIT_BITS = 4096

STRICTNESS = (
    "on the open disk v(z - gamma) > rho* the map contracts offsets exactly: "
    "v(phi(z) - gamma) = v(lambda) + v(z - gamma); the critical value has a finite "
    "offset valuation above rho*, so its orbit offsets grow by v(lambda) per step, "
    "stay finite, and converge to gamma"
)


@dataclass
class AttractionCertificate:
    p: int
    gamma: object
    period: int
    multiplier_valuation: Fraction
    rho_star: Fraction
    threshold: int
    threshold_met: bool
    witness: dict
    critical_value_valuation: Fraction
    strict: bool = True
    justification: str = STRICTNESS
    extra: dict = field(default_factory=dict)

    def to_json(self):
        out = {
            "prime": self.p,
            "gamma": self.gamma if isinstance(self.gamma, str) else fmt_q(self.gamma),
            "period": self.period,
            "multiplier_valuation": str(self.multiplier_valuation),
            "rho_star": str(self.rho_star),
            "threshold": self.threshold,
            "threshold_met": self.threshold_met,
            "witness": self.witness,
            "critical_value_valuation": str(self.critical_value_valuation),
            "strict": self.strict,
            "justification": self.justification,
        }
        out.update(self.extra)
        return out


def _check_fixed(phi, gamma):
    gamma = as_q(gamma)
    if phi.evaluate(gamma) != gamma:
        raise PreconditionError(f"{gamma} is not a fixed point")
    return gamma


def _translated(phi, gamma):
    """Numerator and denominator of phi(z + gamma) - gamma."""
    num = (phi.num - phi.den.scale(gamma)).taylor_shift(gamma)
    den = phi.den.taylor_shift(gamma)
    return num, den


def _max_root_valuation(f, p, skip_zero):
    """Largest valuation of a nonzero root of f (None if there is none)."""
    if f.deg <= 0:
        return None
    np_ = newton_polygon(f, p)
    rv = [v for v, _ in np_.root_valuations()]
    if not skip_zero and np_.ord0:
        raise DegeneracyError("unexpected root at 0")
    return max(rv) if rv else None


def attraction_disk(phi, gamma, p):
    """rho* such that the open disk v(z - gamma) > rho* is contracted exactly."""
    gamma = _check_fixed(phi, gamma)
    lam = phi.derivative().evaluate(gamma)
    if lam == 0 or val(lam, p) <= 0:
        raise PreconditionError(
            f"multiplier {lam} is not attracting-and-nonzero at p={p} (need 0 < v < INF)"
        )
    num, den = _translated(phi, gamma)
    cands = [c for c in (_max_root_valuation(num, p, True), _max_root_valuation(den, p, False)) if c is not None]
    if not cands:
        raise DegeneracyError("no other zero or pole: map is linear near the fixed point")
    return max(cands)


def _critical_groups(phi):
    """Rational critical points (finite), irrational Wronskian blocks, and whether INF is critical."""
    w = critical_poly(phi)
    roots, rest = strip_rational_roots(w)
    blocks = [g for g, _ in squarefree_decomposition(rest) if g.deg > 0]
    return sorted(set(roots)), blocks, critical_multiplicity_at_infinity(phi) > 0


def find_attracted_critical(phi, gamma, p, threshold=None):
    """AttractionCertificate for a critical point strictly attracted to gamma.

    ``threshold`` defaults to the general T for (p, deg phi); it is only
    recorded, the search runs whenever 0 < v(lambda) < INF.
    """
    gamma = _check_fixed(phi, gamma)
    lam = phi.derivative().evaluate(gamma)
    if lam == 0:
        raise PreconditionError("superattracting fixed point (lambda = 0) is excluded")
    v_lam = val(lam, p)
    if v_lam <= 0:
        raise PreconditionError(f"fixed point is not attracting at p={p}: v(lambda) = {v_lam}")
    if threshold is None:
        threshold = epsilon(p, phi.degree).threshold
    rho = attraction_disk(phi, gamma, p)
    crit, blocks, inf_crit = _critical_groups(phi)
    best = None

    def consider(v, witness):
        nonlocal best
        if v is INF or v <= rho:
            return
        if best is None or v > best[0]:
            best = (v, witness)

    starts = [(fmt_q(beta), phi.evaluate(beta)) for beta in crit]
    if inf_crit:
        starts.append(("inf", phi.evaluate(INF)))
    for name, xi in starts:
        # follow the exact orbit a few steps: landing in the basin later also counts
        seen = set()
        for step in range(ORBIT_STEPS):
            if xi is INF or xi in seen:
                break
            seen.add(xi)
            v = val(xi - gamma, p)
            if v is not INF and v > rho:
                w = {"kind": "rational", "critical_point": name, "critical_value": fmt_q(xi)}
                if step:
                    w["orbit_step"] = step
                consider(v, w)
            if best is not None or xi.denominator.bit_length() > ORBIT_BITS:
                break
            xi = phi.evaluate(xi)
    for g in blocks:
        g = g // poly_gcd(g, phi.den)
        if g.deg <= 0:
            continue
        img = pushforward_poly(g, phi.num, phi.den).taylor_shift(gamma)
        np_ = newton_polygon(img, p)
        for v, _ in np_.root_valuations():
            consider(
                v,
                {
                    "kind": "algebraic",
                    "critical_point_polynomial": g.integer_primitive().render(),
                    "critical_value_offset_polynomial": img.integer_primitive().render(),
                    "offset_valuations": [[str(a), m] for a, m in np_.root_valuations()],
                },
            )
    if best is None:
        raise NoCertificateError(
            f"no critical value has offset valuation above rho* = {rho}",
            {"rho_star": str(rho), "multiplier_valuation": str(v_lam), "threshold": threshold},
        )
    return AttractionCertificate(
        p=p,
        gamma=gamma,
        period=1,
        multiplier_valuation=Fraction(v_lam),
        rho_star=rho,
        threshold=threshold,
        threshold_met=v_lam > threshold,
        witness=best[1],
        critical_value_valuation=best[0],
    )


@dataclass
class DiskCheckReport:
    p: int
    a: Fraction
    rho_r: Fraction
    derivative_valuation: int
    threshold: int
    bound: Fraction
    best_valuation: object
    holds: bool
    witness: object = None
    chart: str = "identity"

    def to_json(self):
        return {
            "prime": self.p,
            "a": fmt_q(self.a),
            "rho_r": str(self.rho_r),
            "derivative_valuation": self.derivative_valuation,
            "threshold": self.threshold,
            "bound": str(self.bound),
            "best_valuation": str(self.best_valuation),
            "holds": self.holds,
            "witness": None if self.witness is None else fmt_q(self.witness),
            "chart": self.chart,
        }


def critical_value_disk_check(phi, a, p):
    """Check that some critical value lies within the predicted disk about phi(a)."""
    a = as_q(a)
    chart = "identity"
    if phi.evaluate(INF) is not INF:
        fixed = rational_roots(periodic_poly(phi, 1))
        if not fixed:
            raise PreconditionError("infinity is not fixed and there is no rational fixed point to move there")
        q = fixed[0]
        m = Mobius(q, 1, 1, 0)  # z -> q + 1/z sends INF to q
        phi = conjugate(phi, m)
        a = m.inverse().as_map().evaluate(a)
        if a is INF:
            raise PreconditionError("the point is the fixed point moved to infinity")
        chart = f"conjugated by z -> {q} + 1/z"
    if phi.den(a) == 0:
        raise PreconditionError(f"{a} is a pole")
    d1 = phi.derivative().evaluate(a)
    if d1 == 0:
        raise PreconditionError(f"{a} is a critical point (phi'(a) = 0)")
    b = phi.evaluate(a)
    shifted = (phi.num - phi.den.scale(b)).taylor_shift(a)
    cands = [c for c in (_max_root_valuation(shifted, p, True), _max_root_valuation(phi.den.taylor_shift(a), p, False)) if c is not None]
    if not cands:
        raise DegeneracyError("no other preimage of phi(a) or infinity")
    rho_r = max(cands)
    t = epsilon(p, phi.degree).threshold
    bound = rho_r + val(d1, p) - t
    cv = critical_values_poly(phi)
    np_ = newton_polygon(cv.taylor_shift(b), p)
    vals = [v for v, _ in np_.root_valuations()]
    best = INF if np_.ord0 else max(vals)
    witness = None
    for xi in rational_roots(cv):
        if val(xi - b, p) >= bound:
            witness = xi
            break
    return DiskCheckReport(p, a, rho_r, val(d1, p), t, bound, best, best >= bound, witness, chart)


# cycles


def _approx_taylor(f, g0, N):
    """Taylor coefficients of f at the approximation g0, as PAdicApprox values."""
    p = g0.p
    out = []
    cur = list(f.coeffs)
    # repeated synthetic division by (z - g0)
    for _ in range(len(cur)):
        acc = None
        nxt = []
        for c in reversed(cur):
            cq = PAdicApprox.from_rational(c, p, N + 64) if not isinstance(c, PAdicApprox) else c
            acc = cq if acc is None else acc * g0 + cq
            nxt.append(acc)
        out.append(nxt[-1])
        cur = list(reversed(nxt[:-1]))
    return out


def _known_val(x):
    if x.is_known_zero:
        return None
    return x.shift


def _rho_upper(coeffs, base_index):
    """Upper bound for the largest valuation of a nonzero root, from
    approximate coefficients; base_index is the index of the known lowest term."""
    v0 = _known_val(coeffs[base_index])
    if v0 is None:
        raise PrecisionError("lowest relevant coefficient is indistinguishable from 0")
    best = None
    for i in range(base_index + 1, len(coeffs)):
        c = coeffs[i]
        lower = c.shift  # v(c) >= shift whether or not it is known
        cand = Fraction(v0 - lower, i - base_index)
        best = cand if best is None else max(best, cand)
    return best, v0


def _eval_map_approx(phi, x):
    num = eval_poly_approx(phi.num.coeffs, x)
    den = eval_poly_approx(phi.den.coeffs, x)
    if den.is_known_zero:
        raise PrecisionError("orbit point is indistinguishable from a pole")
    return num / den


def find_attracted_critical_cycle(phi, p, n, gamma=None, residue=None, precision=40, max_steps=200):
    """Certificate that a critical orbit is strictly attracted to an n-cycle.

    The cycle point is either an exact rational ``gamma`` or the Hensel lift
    of ``residue`` (a simple root mod p of phi^n(z) - z) to ``precision``
    p-adic digits.  Only rational critical points (and INF) are followed;
    their orbits are iterated in PAdicApprox arithmetic.
    """
    d = phi.degree
    if p <= d:
        raise PreconditionError(f"cycle certificates need p > d (p={p}, d={d})")
    f = iterate(phi, n)
    if gamma is not None:
        gamma = as_q(gamma)
        if f.evaluate(gamma) != gamma:
            raise PreconditionError(f"{gamma} is not periodic with period dividing {n}")
        if f.derivative().evaluate(gamma) == 0:
            raise PreconditionError("superattracting cycle (multiplier 0) is excluded")
        g0 = PAdicApprox.from_rational(gamma, p, precision)
        label = fmt_q(gamma)
    elif residue is not None:
        per = periodic_poly(phi, n).integer_primitive()
        g0 = hensel_lift(per, residue, p, precision)
        label = f"{g0.to_fraction()} + O({p}^{precision})"
    else:
        raise PreconditionError("need gamma or residue")
    num_t = _approx_taylor(f.num, g0, precision)
    den_t = _approx_taylor(f.den, g0, precision)
    # phi^n(z + g) - g has Taylor numerator num_t - g*den_t
    shifted = [a - den_t[i] * g0 if i < len(den_t) else a for i, a in enumerate(num_t)]
    if len(den_t) > len(num_t):
        shifted += [-(b * g0) for b in den_t[len(num_t):]]
    rho_z, v_c1 = _rho_upper(shifted, 1)
    v_d0 = _known_val(den_t[0])
    if v_d0 is None:
        raise PrecisionError("cycle point is indistinguishable from a pole")
    rho = rho_z
    if len(den_t) > 1:
        rho_p, _ = _rho_upper(den_t, 0)
        rho = rho_p if rho is None else max(rho, rho_p)
    if rho is None:
        raise DegeneracyError("no other zero or pole of the iterate")
    v_lam = v_c1 - v_d0
    if v_lam <= 0:
        raise PreconditionError(f"cycle is not attracting: v(multiplier) = {v_lam}")
    if v_lam >= precision:
        raise PreconditionError("multiplier indistinguishable from 0 (superattracting?)")
    crit, _, inf_crit = _critical_groups(phi)
    starts = [(fmt_q(b), PAdicApprox.from_rational(b, p, precision)) for b in crit if phi.den(b) != 0]
    if inf_crit:
        y = phi.evaluate(INF)
        if y is not INF:
            starts.append(("inf", PAdicApprox.from_rational(y, p, precision)))
    for name, x in starts:
        try:
            for step in range(max_steps):
                off = x - g0
                v = _known_val(off)
                if v is not None and v > rho:
                    trail = [v]
                    y = x
                    for _ in range(3):
                        for _ in range(n):
                            y = _eval_map_approx(phi, y)
                        vy = _known_val(y - g0)
                        if vy is None:
                            break
                        trail.append(vy)
                    return AttractionCertificate(
                        p=p,
                        gamma=label,
                        period=n,
                        multiplier_valuation=Fraction(v_lam),
                        rho_star=rho,
                        threshold=0,
                        threshold_met=True,
                        witness={
                            "kind": "rational",
                            "critical_point": name,
                            "orbit_step": step + (1 if name == "inf" else 0),
                            "offset_valuation": v,
                        },
                        critical_value_valuation=Fraction(v),
                        extra={"offset_valuation_trail": trail, "precision": precision},
                    )
                x = _eval_map_approx(phi, x)
        except PrecisionError:
            continue
    raise NoCertificateError(
        "no rational critical orbit entered the basin within the step budget",
        {"rho_star": str(rho), "multiplier_valuation": str(v_lam)},
    )
