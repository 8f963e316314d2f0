import numpy as np
import pytest

from bidisk import holomaps as hm
from bidisk.errors import UnsolvableError
from bidisk.kernels import BERGMAN, Hermitian2
from bidisk.metrics import mobius_distance_bidisk, pseudo_hyperbolic
from bidisk.pick import (
    PickProblem1,
    PickProblem2,
    interpolant_two_point_bidisk,
    interpolant_two_point_disk,
    is_psd2,
    pick_matrix,
    solvable_two_point_bidisk,
    solvable_two_point_disk,
)


def test_pick_matrix_equal_points():
    m = pick_matrix(PickProblem1(0, 0, 0, 0))
    assert (m.a11, m.a12, m.a22) == (1, 1, 1)


@pytest.mark.parametrize("r,s", [(0.5, 0.25), (0.3, 0.6 + 0.1j), (0.9, -0.2j)])
def test_pick_matrix_substitution(r, s):
    m = pick_matrix(PickProblem1(0, r, 0, s))
    assert (m.a11, m.a12) == (1, 1)
    assert m.a22 == pytest.approx((1 - abs(s) ** 2) / (1 - r * r), rel=1e-15)


def test_pick_matrix_unimodular_constant_is_zero():
    m = pick_matrix(PickProblem1(0.1, 0.4, 1, 1))
    assert m.a11 == 0 and m.a22 == 0 and m.a12 == 0
    assert is_psd2(m)
    assert solvable_two_point_disk(PickProblem1(0.1, 0.4, 1, 1))


def test_unimodular_targets_must_agree():
    with pytest.raises(ValueError):
        PickProblem1(0, 0.5, 1, 0.2)
    with pytest.raises(ValueError):
        PickProblem1(0, 0.5, 1.2, 1.2)


def test_is_psd2_examples():
    assert is_psd2(Hermitian2(0, 0, 0))
    assert is_psd2(Hermitian2(1, 1, 1))
    m = Hermitian2(1, 1.1, 1)
    assert m.det == pytest.approx(-0.21)
    assert not is_psd2(m)


def test_solvable_disk_examples():
    ok = PickProblem1(0, 0.5, 0, 0.25)
    bad = PickProblem1(0, 0.5, 0, 0.75)
    assert pick_matrix(ok).det > 0 and solvable_two_point_disk(ok)
    assert pick_matrix(bad).det < 0 and not solvable_two_point_disk(bad)
    assert solvable_two_point_disk(PickProblem1(-0.7, 0.9j, 0.3 - 0.2j, 0.3 - 0.2j))


def test_solvable_disk_rejects_bergman():
    with pytest.raises(ValueError):
        solvable_two_point_disk(PickProblem1(0, 0.5, 0, 0.25, BERGMAN))


def test_interpolant_examples():
    phi = interpolant_two_point_disk(PickProblem1(0, 0.5, 0, 0.5))
    assert hm.eval1(phi, 0) == 0 and hm.eval1(phi, 0.5) == pytest.approx(0.5, abs=1e-15)
    for z in (0.1, -0.3j, 0.7 + 0.1j):
        assert hm.eval1(phi, z) == pytest.approx(z, abs=1e-15)

    const = interpolant_two_point_disk(PickProblem1(0, 0.5, 0.3, 0.3))
    assert const == hm.Constant(0.3)

    half = interpolant_two_point_disk(PickProblem1(0, 0.5, 0, 0.25))
    assert hm.eval1(half, 0.5) == pytest.approx(0.25, abs=1e-15)
    assert hm.eval1(half, 0.2 - 0.4j) == pytest.approx(0.5 * (0.2 - 0.4j), abs=1e-15)


def test_interpolant_errors():
    with pytest.raises(UnsolvableError):
        interpolant_two_point_disk(PickProblem1(0, 0.5, 0, 0.75))
    with pytest.raises(UnsolvableError):
        interpolant_two_point_disk(PickProblem1(0.2, 0.2, 0, 0.1))


def _random_problem(rng):
    x1, x2 = hm.sample_disk(rng), hm.sample_disk(rng)
    w1, w2 = hm.sample_disk(rng, radius=0.99), hm.sample_disk(rng, radius=0.99)
    return PickProblem1(x1, x2, w1, w2)


def test_pick_equivalent_to_distance_criterion(rng):
    checked = 0
    for _ in range(10_000):
        prob = _random_problem(rng)
        dw, dx = pseudo_hyperbolic(prob.w1, prob.w2), pseudo_hyperbolic(prob.x1, prob.x2)
        if abs(dw - dx) <= 1e-8:
            continue
        assert solvable_two_point_disk(prob) == (dw <= dx)
        checked += 1
    assert checked > 9_000


def test_interpolants_hit_nodes_and_contract(rng):
    built = 0
    while built < 200:
        prob = _random_problem(rng)
        if not solvable_two_point_disk(prob):
            continue
        phi = interpolant_two_point_disk(prob)
        assert abs(hm.eval1(phi, prob.x1) - prob.w1) <= 1e-10
        assert abs(hm.eval1(phi, prob.x2) - prob.w2) <= 1e-10
        a, b = hm.sample_disk(rng, 1000), hm.sample_disk(rng, 1000)
        fa, fb = hm.eval1(phi, a), hm.eval1(phi, b)
        assert np.all(pseudo_hyperbolic(fa, fb) <= pseudo_hyperbolic(a, b) + 1e-12)
        built += 1


def test_bidisk_solvability_examples():
    assert solvable_two_point_bidisk(PickProblem2((0, 0), (0.5, 0), (0.2, 0.1), (0.2, 0.1)))
    assert solvable_two_point_bidisk(PickProblem2((0, 0), (0.5, 0), (0, 0), (0.4, 0.4)))
    assert not solvable_two_point_bidisk(PickProblem2((0, 0), (0.5, 0), (0, 0), (0.6, 0)))


def _check_nodes(F, prob):
    fp, fq = hm.eval2(F, prob.p), hm.eval2(F, prob.q)
    for i in range(2):
        assert abs(fp[i] - prob.zeta[i]) <= 1e-10
        assert abs(fq[i] - prob.lam[i]) <= 1e-10


def test_bidisk_interpolant_examples():
    const = PickProblem2((0.1, 0.2), (0.5, -0.3), (0.4j, 0.1), (0.4j, 0.1))
    F = interpolant_two_point_bidisk(const)
    assert isinstance(F.f1.phi, hm.Constant) and isinstance(F.f2.phi, hm.Constant)
    _check_nodes(F, const)

    diag = PickProblem2((0, 0), (0.5, 0), (0, 0), (0.4, 0.4))
    F = interpolant_two_point_bidisk(diag)
    assert F.f1.inner == hm.Project(1) and F.f2.inner == hm.Project(1)
    _check_nodes(F, diag)

    p, q = (0.3 + 0.1j, -0.2), (0.6j, 0.45)
    F = interpolant_two_point_bidisk(PickProblem2(p, q, p, q))
    assert F == hm.IDENTITY2

    with pytest.raises(UnsolvableError):
        interpolant_two_point_bidisk(PickProblem2((0, 0), (0.5, 0), (0, 0), (0.6, 0)))


def test_bidisk_interpolants_random(rng):
    built = 0
    while built < 300:
        pts = [(hm.sample_disk(rng), hm.sample_disk(rng)) for _ in range(4)]
        prob = PickProblem2(*pts)
        if not solvable_two_point_bidisk(prob):
            with pytest.raises(UnsolvableError):
                interpolant_two_point_bidisk(prob)
            continue
        _check_nodes(interpolant_two_point_bidisk(prob), prob)
        built += 1


def test_generated_maps_never_produce_unsolvable_targets(rng):
    # sampled refutation: every image pair of a generated map is max-order solvable
    for s in range(500):
        F = hm.random_selfmap_bidisk(s, int(s % 4))
        p = (hm.sample_disk(rng), hm.sample_disk(rng))
        q = (hm.sample_disk(rng), hm.sample_disk(rng))
        try:
            zeta, lam = hm.eval2(F, p), hm.eval2(F, q)
        except Exception:
            continue
        assert mobius_distance_bidisk(zeta, lam) <= mobius_distance_bidisk(p, q) + 1e-12
