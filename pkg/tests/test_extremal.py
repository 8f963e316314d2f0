import math

import pytest

from bidisk import holomaps as hm
from bidisk.extremal import (
    estimate_mobius_distance,
    find_rho_obstruction,
    maximize_seto_ratio,
    obstruction_margin,
    pattern_search,
    search_mobius_distance,
    seto_ratio,
    trace_csv,
)
from bidisk.metrics import mobius_distance_bidisk, rho
from bidisk.pick import PickProblem2, solvable_two_point_bidisk
from bidisk.witness import replay

SQRT2 = math.sqrt(2)


def test_pattern_search_finds_maximum():
    x, fx, evals = pattern_search(lambda x: -((x[0] - 0.3) ** 2 + (x[1] + 0.2) ** 2), [0, 0], 0.1, 2000)
    assert x == pytest.approx([0.3, -0.2], abs=1e-6)
    assert evals <= 2000


def test_diagonal_seed_reaches_floor():
    t = 1e-3
    assert seto_ratio(hm.DIAGONAL2, (t, 0), (0, 0)) == pytest.approx(math.sqrt(2 - t * t), abs=1e-15)
    res = maximize_seto_ratio(1, 200, 0, family="diagonal", start=(hm.DIAGONAL2, (t, 0), (0, 0)))
    assert res.best_value >= SQRT2 - 1e-3


def test_automorphisms_bounded_by_one():
    res = maximize_seto_ratio(1, 2000, 4, family="automorphisms")
    assert res.best_value <= 1 + 1e-9


def test_budget_one_identity():
    res = maximize_seto_ratio(1, 1, 0, start=(hm.IDENTITY2, (0.1, 0.2), (0.4, -0.3j)))
    assert res.best_value == pytest.approx(1, abs=1e-15) and res.iterations == 1


@pytest.mark.parametrize("n", [1, 2])
def test_ratio_search_properties(n):
    res = maximize_seto_ratio(n, 3000, 11)
    assert res.consistent and res.best_value <= SQRT2 + 1e-9
    values = [v for _, v in res.trace]
    assert values == sorted(values)
    assert res.trace[-1][1] == res.best_value
    assert replay(res.argument) == pytest.approx(res.best_value, abs=1e-12)


def test_ratio_search_deterministic():
    a, b = maximize_seto_ratio(1, 1500, 5), maximize_seto_ratio(1, 1500, 5)
    assert a.best_value == b.best_value and a.trace == b.trace and a.argument == b.argument


def test_trace_csv():
    res = maximize_seto_ratio(1, 50, 1)
    lines = trace_csv(res).splitlines()
    assert lines[0] == "iteration,best_value"
    assert len(lines) == len(res.trace) + 1


def test_obstruction_trivial_cases():
    p, q = (0.1, 0.2j), (-0.4, 0.3)
    assert obstruction_margin(p, p, q, (0.5, 0.5)) <= 0 or obstruction_margin(p, p, q, (0.5, 0.5)) == -math.inf
    assert not obstruction_margin(p, q, p, q) > 0


def test_obstruction_structured_family():
    t, s = 0.5, 0.6
    z, w = (0, 0), (t, t)
    zeta, lam = (0, 0), (s, 0)
    assert rho(z, w) == pytest.approx(math.sqrt(2 * t * t - t ** 4), abs=1e-15)
    assert rho(zeta, lam) <= rho(z, w)
    assert mobius_distance_bidisk(zeta, lam) > mobius_distance_bidisk(z, w)
    assert obstruction_margin(zeta, lam, z, w) == pytest.approx(0.1, abs=1e-15)
    assert not solvable_two_point_bidisk(PickProblem2(z, w, zeta, lam))


def test_find_obstruction():
    res = find_rho_obstruction(2000, 3)
    assert res is not None and res.best_value > 0
    a = res.argument
    pts = [tuple(complex(*c) for c in a[k]) for k in ("zeta", "lambda", "z", "w")]
    assert rho(pts[0], pts[1]) <= rho(pts[2], pts[3])
    assert not solvable_two_point_bidisk(PickProblem2(pts[2], pts[3], pts[0], pts[1]))
    assert replay(a) == pytest.approx(res.best_value, abs=1e-12)


def test_find_obstruction_tiny_budget():
    assert find_rho_obstruction(0, 1) is None


def test_mobius_estimate_examples():
    assert estimate_mobius_distance((0.2, 0.1), (0.2, 0.1), 100, 0) == 0
    assert estimate_mobius_distance((0, 0), (0.5, 0.3), 300, 0) == pytest.approx(0.5, abs=1e-9)
    p, q = (0.2, -0.1j), (0.5, 0.3)
    est = estimate_mobius_distance(p, q, 10, 0, family="projections")
    assert est == mobius_distance_bidisk(p, q)


def test_mobius_estimate_upper_bound(rng):
    for s in range(10):
        p = (hm.sample_disk(rng), hm.sample_disk(rng))
        q = (hm.sample_disk(rng), hm.sample_disk(rng))
        res = search_mobius_distance(p, q, 200, s)
        closed = mobius_distance_bidisk(p, q)
        assert res.consistent
        assert closed - 1e-12 <= res.best_value <= closed + 1e-9
