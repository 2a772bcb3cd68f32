import io
import json
import math
from fractions import Fraction

import pytest

from generators import rand_quadratic, seeded
from ultradyn.dynamics.pcf import PCF
from ultradyn.errors import PreconditionError
from ultradyn.parser import parse_map
from ultradyn.ratfunc import Mobius, conjugate, fixed_point_multipliers_poly
from ultradyn.search import (
    NORMAL_FORM,
    POLY_SLICE,
    SearchConfig,
    analyze_map,
    dedupe,
    enumerate_family,
    family_map,
    northcott_set,
    parameter_grid,
    sigma_invariants,
)


def _brute_northcott(B):
    out = set()
    for a in range(-B, B + 1):
        for b in range(1, B + 1):
            x = Fraction(a, b)
            if max(abs(x.numerator), x.denominator) <= B:
                out.add(x)
    return out


@pytest.mark.parametrize("B", [1, 2, 5, 12])
def test_northcott_set_matches_brute_force(B):
    got = northcott_set(B)
    assert got == sorted(got)
    assert set(got) == _brute_northcott(B) and len(got) == len(set(got))
    assert [p for (p,) in parameter_grid(POLY_SLICE, B)] == got


def test_normal_form_grid_excludes_degenerate():
    grid = parameter_grid(NORMAL_FORM, 2)
    assert all(a * b != 1 for a, b in grid)
    assert (Fraction(0), Fraction(0)) in grid
    with pytest.raises(PreconditionError):
        family_map(NORMAL_FORM, (Fraction(2), Fraction(1, 2)))
    with pytest.raises(PreconditionError):
        northcott_set(0)


def _orbit_oracle(c, steps=12):
    seen, x = set(), Fraction(0)
    for _ in range(steps):
        if x in seen:
            return True
        if abs(x) > max(2, abs(c)):
            return False
        seen.add(x)
        x = x * x + c
    return False


def test_poly_slice_hits_match_oracle():
    res = enumerate_family(POLY_SLICE, 12)
    got = {h.params[0] for h in res.hits}
    assert got == {c for c in northcott_set(12) if _orbit_oracle(c)} == {0, -1, -2}
    assert res.visited == len(northcott_set(12))
    assert sum(res.counts.values()) == res.visited


def test_hits_monotone_in_bound():
    prev = set()
    for B in (1, 2, 4, 8):
        cur = {h.params for h in enumerate_family(POLY_SLICE, B).hits}
        assert prev <= cur
        prev = cur


def test_normal_form_small_grid():
    res = enumerate_family(NORMAL_FORM, 2)
    params = {h.params for h in res.hits}
    assert (Fraction(0), Fraction(0)) in params
    for h in res.hits:
        assert h.replay_ok and h.sigma_relation_ok and h.valuations_ok and h.height_check.passed


def test_hit_contents():
    verdict, hit = analyze_map(parse_map("z^2-2"))
    assert verdict == PCF
    assert hit.sigma == (2, -8, 0)
    assert hit.valuations_ok and hit.valuations[2][:2] == [1, 2]
    row = json.loads(json.dumps(hit.to_json()))
    assert row["key"] == ["2", "-8"] and row["replay_ok"]


def test_dedupe_examples():
    z2m2 = parse_map("z^2-2")
    flipped = conjugate(z2m2, Mobius.affine(-1))
    hits = [analyze_map(z2m2)[1], analyze_map(flipped)[1]]
    assert len(dedupe(hits)) == 1
    hits = [analyze_map(parse_map("z^2"))[1], analyze_map(parse_map("z^2-1"))[1]]
    classes = dedupe(hits)
    assert [c.key for c in classes] == [(2, -4), (2, 0)]


def test_sigma_of_z2_minus_1():
    # oracle: lambda in {0} and the roots of w^2 - 2w - 4
    s1 = 0 + 2
    s2 = 0 * 2 + (-4)
    s3 = 0
    assert sigma_invariants(parse_map("z^2-1")) == (s1, s2, s3)


def test_sigma_relation_random():
    rng = seeded(5)
    for _ in range(200):
        phi = rand_quadratic(rng)
        s1, s2, s3 = sigma_invariants(phi)
        assert s3 == s1 - 2


def test_sigma_matches_direct_multipliers():
    # fixed points 0, 2 and infinity (multiplier 2 there)
    phi = parse_map("(z^2+3*z)/(2*z+1)")
    d = phi.derivative()
    lams = [d.evaluate(Fraction(0)), d.evaluate(Fraction(2)), Fraction(2)]
    a, b, c = lams
    assert sigma_invariants(phi) == (a + b + c, a * b + b * c + a * c, a * b * c)
    assert fixed_point_multipliers_poly(phi).deg == 3


def test_stream_and_resume(tmp_path):
    cfg = SearchConfig(cell_size=16)
    full = io.StringIO()
    ref = enumerate_family(POLY_SLICE, 6, cfg, out=full)
    lines = full.getvalue().splitlines()
    assert [json.loads(x)["params"] for x in lines] == [[str(h.params[0])] for h in ref.hits]

    # interrupt after two cells, then resume
    resume = tmp_path / "state.json"
    part = io.StringIO()

    class Stop(Exception):
        pass

    def progress(k, n, counts):
        if k == 2:
            raise Stop

    with pytest.raises(Stop):
        enumerate_family(POLY_SLICE, 6, cfg, out=part, resume=str(resume), progress=progress)
    state = json.loads(resume.read_text())
    assert state["last_cell"] == 1
    rest = enumerate_family(POLY_SLICE, 6, cfg, out=part, resume=str(resume))
    assert part.getvalue() == full.getvalue()
    assert rest.visited == ref.visited - 2 * cfg.cell_size
    with pytest.raises(PreconditionError):
        enumerate_family(POLY_SLICE, 7, cfg, resume=str(resume))


def test_parallel_matches_serial():
    a = enumerate_family(POLY_SLICE, 8, SearchConfig(cell_size=8))
    b = enumerate_family(POLY_SLICE, 8, SearchConfig(cell_size=8, jobs=2))
    assert [h.params for h in a.hits] == [h.params for h in b.hits]
    assert a.counts == b.counts


def test_northcott_size_growth():
    # count of reduced fractions grows like (12 / pi^2) B^2
    n = len(northcott_set(60))
    assert abs(n / (12 / math.pi**2 * 60**2) - 1) < 0.1
