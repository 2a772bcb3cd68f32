"""Post-critical finiteness: exact orbit tracking with a three-valued verdict."""

import math
import os
from dataclasses import dataclass, field

from ultradyn.exactnum import INF, fmt_q
from ultradyn.poly import poly_gcd, pushforward_poly, squarefree_part, strip_rational_roots
from ultradyn.ratfunc import critical_multiplicity_at_infinity, critical_poly

PCF = "pcf"
NOT_PCF = "not_pcf"
INDETERMINATE = "indeterminate"


def _env_int(name, default):
    return int(os.environ.get(name, default))


@dataclass(frozen=True)
class PCFConfig:
    max_steps: int = field(default_factory=lambda: _env_int("ULTRADYN_MAX_STEPS", 64))
    height_cap: float = 50.0  # log of the naive-height cap
    growth_steps: int = 5
    growth_ratio: float = 1.5


def point_height(x):
    if x is INF:
        return 0.0
    a, b = abs(x.numerator), x.denominator
    return math.log(max(a, b, 1))


def poly_height(f):
    if f.is_zero():
        return 0.0
    return math.log(max(abs(c) for c in f.integer_primitive().int_coeffs()))


class _Growth:
    """Counts consecutive steps above the cap with multiplicative growth."""

    def __init__(self, cfg):
        self.cfg = cfg
        self.run = 0
        self.prev = None
        self.trail = []

    def push(self, h):
        cfg = self.cfg
        if self.prev is not None and h > cfg.height_cap and h >= cfg.growth_ratio * self.prev:
            self.run += 1
            self.trail.append(h)
        else:
            self.run = 0
            self.trail = []
        self.prev = h
        return self.run >= cfg.growth_steps


@dataclass
class CriticalOrbit:
    kind: str  # "rational" or "algebraic"
    start: object
    verdict: str
    tail: list = field(default_factory=list)
    cycle: list = field(default_factory=list)
    evidence: dict = field(default_factory=dict)

    def to_json(self):
        if self.kind == "rational":
            out = {
                "kind": "rational",
                "critical_point": fmt_q(self.start),
                "tail": [fmt_q(x) for x in self.tail],
                "cycle": [fmt_q(x) for x in self.cycle],
            }
        else:
            out = {
                "kind": "algebraic",
                "minimal_polynomial": self.start.render(),
                "tail": [_state_json(s) for s in self.tail],
                "cycle": [_state_json(s) for s in self.cycle],
            }
        out["verdict"] = self.verdict
        if self.evidence:
            out["evidence"] = self.evidence
        return out


def _state_json(state):
    pts, poly = state
    return {
        "points": sorted((fmt_q(x) for x in pts), key=str),
        "polynomial": None if poly is None else poly.render(),
    }


@dataclass
class PCFCertificate:
    verdict: str
    orbits: list
    reason: str = ""

    @property
    def critical_points(self):
        return [o.start for o in self.orbits]

    def to_json(self):
        out = {"verdict": self.verdict, "orbits": [o.to_json() for o in self.orbits]}
        if self.reason:
            out["reason"] = self.reason
        return out


def _rational_orbit(phi, x0, cfg):
    seen = {}
    seq = []
    growth = _Growth(cfg)
    x = x0
    for _ in range(cfg.max_steps + 1):
        key = x
        if key in seen:
            k = seen[key]
            return CriticalOrbit("rational", x0, PCF, tail=seq[:k], cycle=seq[k:])
        seen[key] = len(seq)
        seq.append(x)
        if growth.push(point_height(x)):
            return CriticalOrbit(
                "rational",
                x0,
                NOT_PCF,
                tail=seq[:3],
                evidence={
                    "log_heights": [round(h, 6) for h in growth.trail],
                    "steps": len(seq),
                    "note": "height-growth evidence, not a proof",
                },
            )
        x = phi.evaluate(x)
    return CriticalOrbit("rational", x0, INDETERMINATE, tail=seq[:3], evidence={"steps": len(seq)})


def _push_state(phi, state):
    """Image of a (finite point set, squarefree polynomial) state."""
    pts, poly = state
    new_pts = {phi.evaluate(x) for x in pts}
    new_poly = None
    if poly is not None:
        g = poly_gcd(poly, phi.den)
        if g.deg > 0:
            new_pts.add(INF)
            poly = poly // g
        if poly.deg > 0:
            img = squarefree_part(pushforward_poly(poly, phi.num, phi.den))
            roots, rest = strip_rational_roots(img)
            new_pts.update(roots)
            rest = squarefree_part(rest) if rest.deg > 0 else None
            new_poly = rest.integer_primitive() if rest is not None and rest.deg > 0 else None
    return frozenset(new_pts), new_poly


def _algebraic_orbit(phi, g, cfg):
    state = (frozenset(), g.integer_primitive())
    seen = {}
    seq = []
    growth = _Growth(cfg)
    for _ in range(cfg.max_steps + 1):
        key = (state[0], state[1])
        if key in seen:
            k = seen[key]
            return CriticalOrbit("algebraic", g, PCF, tail=seq[:k], cycle=seq[k:])
        seen[key] = len(seq)
        seq.append(state)
        h = max([point_height(x) for x in state[0]] + [poly_height(state[1]) if state[1] else 0.0])
        if growth.push(h):
            return CriticalOrbit(
                "algebraic",
                g,
                NOT_PCF,
                tail=seq[:2],
                evidence={
                    "log_heights": [round(x, 6) for x in growth.trail],
                    "steps": len(seq),
                    "note": "height-growth evidence, not a proof",
                },
            )
        state = _push_state(phi, state)
    return CriticalOrbit("algebraic", g, INDETERMINATE, tail=seq[:2], evidence={"steps": len(seq)})


def critical_points(phi):
    """(rational critical points incl. INF, squarefree blocks without rational roots)."""
    w = critical_poly(phi)
    roots, rest = strip_rational_roots(w)
    pts = sorted(set(roots))
    if critical_multiplicity_at_infinity(phi) > 0:
        pts.append(INF)
    blocks = []
    if rest.deg > 0:
        blocks.append(squarefree_part(rest).integer_primitive())
    return pts, blocks


def pcf_check(phi, config=None):
    cfg = config or PCFConfig()
    pts, blocks = critical_points(phi)
    orbits = [_rational_orbit(phi, x, cfg) for x in pts]
    orbits += [_algebraic_orbit(phi, g, cfg) for g in blocks]
    verdicts = {o.verdict for o in orbits}
    if NOT_PCF in verdicts:
        return PCFCertificate(NOT_PCF, orbits, "a critical orbit shows sustained height growth")
    if INDETERMINATE in verdicts:
        return PCFCertificate(INDETERMINATE, orbits, f"no repetition within {cfg.max_steps} steps")
    return PCFCertificate(PCF, orbits)


def replay(phi, cert):
    """Independently re-check a PCF certificate: every listed orbit closes up."""
    if cert.verdict != PCF:
        return False
    pts, blocks = critical_points(phi)
    starts = [o.start for o in cert.orbits]
    if starts != pts + blocks:
        return False
    for o in cert.orbits:
        seq = o.tail + o.cycle
        if not o.cycle or seq[0] != (o.start if o.kind == "rational" else (frozenset(), o.start)):
            return False
        step = phi.evaluate if o.kind == "rational" else (lambda s: _push_state(phi, s))
        for x, y in zip(seq, seq[1:] + [o.cycle[0]]):
            if step(x) != y:
                return False
        if len(set(seq)) != len(seq):
            return False
    return True


__all__ = ["PCFCertificate", "PCFConfig", "critical_points", "pcf_check", "replay"]
