"""Bounded-height searches for PCF quadratic maps over Q, with certificates
and deduplication by the fixed-multiplier invariants (sigma1, sigma2)."""

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from ultradyn import SCHEMA
from ultradyn.errors import DegeneracyError, PreconditionError
from ultradyn.exactnum import INF, fmt_q, prime_factors
from ultradyn.heights import quadratic_pcf_height_check
from ultradyn.newton import newton_polygon
from ultradyn.poly import Poly
from ultradyn.dynamics.pcf import PCF, INDETERMINATE, NOT_PCF, PCFConfig, pcf_check, replay
from ultradyn.ratfunc import RatMap, fixed_point_multipliers_poly

POLY_SLICE = "poly_slice"
NORMAL_FORM = "fixed_normal_form"
FAMILIES = (POLY_SLICE, NORMAL_FORM)


def northcott_set(B):
    """All rationals of height <= log B, sorted by value."""
    if B < 1:
        raise PreconditionError("height bound must be at least 1")
    out = [Fraction(a, b) for b in range(1, B + 1) for a in range(-B, B + 1) if math.gcd(a, b) == 1]
    return sorted(out)


def family_map(family, params):
    if family == POLY_SLICE:
        (c,) = params
        return RatMap(Poly((c, 0, 1)))
    if family == NORMAL_FORM:
        l1, l2 = params
        if l1 * l2 == 1:
            raise PreconditionError("normal form needs lambda1 * lambda2 != 1")
        return RatMap(Poly((0, l1, 1)), Poly((1, l2)))
    raise PreconditionError(f"unknown family {family!r}; expected one of {FAMILIES}")


def parameter_grid(family, B):
    base = northcott_set(B)
    if family == POLY_SLICE:
        return [(c,) for c in base]
    if family == NORMAL_FORM:
        return [(a, b) for a, b in product(base, base) if a * b != 1]
    raise PreconditionError(f"unknown family {family!r}; expected one of {FAMILIES}")


def sigma_invariants(phi):
    """(sigma1, sigma2, sigma3) of the fixed multipliers of a quadratic map."""
    if phi.degree != 2:
        raise PreconditionError("sigma invariants are for quadratic maps")
    c = fixed_point_multipliers_poly(phi)
    if c.deg != 3:
        raise DegeneracyError("expected three fixed points")
    return -c.coeff(2), c.coeff(1), -c.coeff(0)


def _primes_of(qs):
    out = {2}
    for q in qs:
        if q:
            out.update(prime_factors(abs(q.numerator)))
            out.update(prime_factors(q.denominator))
    return sorted(out)


def _root_valuations(f, p):
    np_ = newton_polygon(f, p)
    vals = []
    for v, m in np_.root_valuations():
        vals += [v] * m
    return sorted(vals) + [INF] * np_.ord0


def valuation_table(cubic):
    """{p: [valuations of the fixed multipliers]} over the primes that can occur."""
    return {p: _root_valuations(cubic, p) for p in _primes_of(cubic.coeffs)}


def valuation_constraint_ok(table):
    """v_p(lambda) <= 0 for odd p and v_2(lambda) <= 2 for nonzero multipliers."""
    for p, vals in table.items():
        cap = 2 if p == 2 else 0
        if any(v is not INF and v > cap for v in vals):
            return False
    return True


@dataclass
class SearchHit:
    family: str
    params: tuple
    phi: RatMap
    sigma: tuple
    certificate: object
    valuations: dict
    height_check: object
    replay_ok: bool

    @property
    def key(self):
        return (self.sigma[0], self.sigma[1])

    @property
    def sigma_relation_ok(self):
        return self.sigma[2] == self.sigma[0] - 2

    @property
    def valuations_ok(self):
        return valuation_constraint_ok(self.valuations)

    def to_json(self):
        return {
            "schema": SCHEMA,
            "family": self.family,
            "params": [fmt_q(x) for x in self.params],
            "map": self.phi.render(),
            "sigma": [fmt_q(s) for s in self.sigma],
            "key": [fmt_q(s) for s in self.key],
            "sigma_relation_ok": self.sigma_relation_ok,
            "valuations": {str(p): [fmt_q(v) for v in vs] for p, vs in self.valuations.items()},
            "valuations_ok": self.valuations_ok,
            "pcf_height_check": self.height_check.to_json(),
            "replay_ok": self.replay_ok,
            "certificate": self.certificate.to_json(),
        }


@dataclass
class SearchConfig:
    max_steps: int = 64
    height_cap: float = 50.0
    jobs: int = 1
    cell_size: int = 256

    def pcf_config(self):
        return PCFConfig(max_steps=self.max_steps, height_cap=self.height_cap)


@dataclass
class SearchResult:
    family: str
    height_bound: int
    hits: list
    visited: int
    counts: dict = field(default_factory=dict)

    @property
    def classes(self):
        return dedupe(self.hits)

    def summary(self):
        return {
            "schema": SCHEMA,
            "family": self.family,
            "height_bound": self.height_bound,
            "visited": self.visited,
            "counts": self.counts,
            "hits": len(self.hits),
            "classes": len(self.classes),
        }


def analyze_candidate(family, params, cfg):
    """(verdict, SearchHit or None) for one parameter tuple."""
    return analyze_map(family_map(family, params), cfg, family, params)


def analyze_map(phi, cfg=None, family="custom", params=()):
    """(verdict, SearchHit or None) for an arbitrary quadratic map."""
    cfg = cfg or SearchConfig()
    cert = pcf_check(phi, cfg.pcf_config())
    if cert.verdict != PCF:
        return cert.verdict, None
    sig = sigma_invariants(phi)
    cubic = fixed_point_multipliers_poly(phi)
    hit = SearchHit(
        family=family,
        params=tuple(params),
        phi=phi,
        sigma=sig,
        certificate=cert,
        valuations=valuation_table(cubic),
        height_check=quadratic_pcf_height_check(phi, cert),
        replay_ok=replay(phi, cert),
    )
    return PCF, hit


def _run_cell(args):
    family, cell, cfg = args
    verdicts = {PCF: 0, NOT_PCF: 0, INDETERMINATE: 0}
    hits = []
    for params in cell:
        v, hit = analyze_candidate(family, params, cfg)
        verdicts[v] += 1
        if hit is not None:
            hits.append(hit)
    return verdicts, hits


def _cells(grid, size):
    return [grid[i : i + size] for i in range(0, len(grid), size)]


def _read_resume(path, family, B):
    if not path or not os.path.exists(path):
        return -1
    with open(path) as fh:
        state = json.load(fh)
    if state.get("family") != family or state.get("height_bound") != B:
        raise PreconditionError("resume file belongs to a different search")
    return state["last_cell"]


def _write_resume(path, family, B, k, ncells):
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump({"family": family, "height_bound": B, "last_cell": k, "cells": ncells}, fh)
    os.replace(tmp, path)


def enumerate_family(family, B, config=None, out=None, resume=None, progress=None):
    """Run the PCF check over the bounded-height grid of a family.

    Hits are written as JSON lines to ``out`` (a text stream) cell by cell, in
    grid order; ``resume`` names a file holding the last completed cell.
    """
    cfg = config or SearchConfig()
    grid = parameter_grid(family, B)
    cells = _cells(grid, cfg.cell_size)
    start = _read_resume(resume, family, B) + 1
    counts = {PCF: 0, NOT_PCF: 0, INDETERMINATE: 0}
    hits = []
    work = [(family, cell, cfg) for cell in cells[start:]]
    if cfg.jobs > 1:
        pool = ProcessPoolExecutor(max_workers=cfg.jobs)
        results = pool.map(_run_cell, work)
    else:
        pool = None
        results = map(_run_cell, work)
    try:
        for k, (verdicts, cell_hits) in enumerate(results, start):
            for key in counts:
                counts[key] += verdicts[key]
            hits += cell_hits
            if out is not None:
                for h in cell_hits:
                    out.write(json.dumps(h.to_json(), sort_keys=True) + "\n")
                out.flush()
            if resume:
                _write_resume(resume, family, B, k, len(cells))
            if progress:
                progress(k + 1, len(cells), counts)
    finally:
        if pool is not None:
            pool.shutdown(cancel_futures=True)
    visited = sum(len(c) for c in cells[start:])
    return SearchResult(family, B, hits, visited, counts)


@dataclass
class ConjugacyClass:
    key: tuple
    members: list

    def to_json(self):
        return {
            "sigma1": fmt_q(self.key[0]),
            "sigma2": fmt_q(self.key[1]),
            "members": [m.phi.render() for m in self.members],
        }


def dedupe(hits):
    """Merge degree-2 hits with equal (sigma1, sigma2); classes sorted by key."""
    groups = {}
    for h in hits:
        if h.phi.degree != 2:
            raise PreconditionError("dedupe expects quadratic maps")
        groups.setdefault(h.key, []).append(h)
    return [ConjugacyClass(k, groups[k]) for k in sorted(groups)]


def per_prime_valuations(phi, primes):
    """Valuations of the fixed multipliers at the given primes."""
    cubic = fixed_point_multipliers_poly(phi)
    return {p: _root_valuations(cubic, p) for p in primes}


__all__ = [
    "FAMILIES",
    "NORMAL_FORM",
    "POLY_SLICE",
    "SearchConfig",
    "SearchHit",
    "analyze_map",
    "dedupe",
    "enumerate_family",
    "family_map",
    "northcott_set",
    "sigma_invariants",
]
