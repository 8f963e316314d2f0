import numpy as np
import pytest
from hypothesis import given

from bidisk.errors import BoundaryError, DomainMismatchError
from bidisk.holomaps import sample_disk
from bidisk.kernels import (
    BERGMAN,
    SZEGO,
    BiPoint,
    Hermitian2,
    SzegoPower,
    TensorSquare,
    gram2,
    kernel_eval,
    parse_kernel,
    strict_positivity_check,
    szego_eval,
)

from .oracles import bidisk_points, disk_points, mp_szego


def test_szego_at_origin():
    assert szego_eval(0, 0) == 1


def test_szego_real_substitution():
    assert szego_eval(0.5, 0.5) == pytest.approx(4 / 3, rel=1e-15)


def test_szego_matches_high_precision():
    # frozen from a 50-digit evaluation of 1 / (1 - conj(w) z)
    expected = complex(1.0077120822622107914, 0.11311053984575836346)
    assert abs(szego_eval(0.3 + 0.4j, 0.2 - 0.1j) - expected) < 1e-15
    assert abs(complex(mp_szego(0.3 + 0.4j, 0.2 - 0.1j)) - expected) < 1e-18


@pytest.mark.parametrize("z", [1.0, 1j, 0.9999999999, complex("nan"), complex("inf")])
def test_boundary_rejection(z):
    with pytest.raises(BoundaryError):
        szego_eval(z, 0)


def test_kernel_eval_examples():
    assert kernel_eval(BERGMAN, 0.5, 0) == 1
    assert kernel_eval(BERGMAN, 0.5, 0.5) == pytest.approx(16 / 9, rel=1e-15)
    assert kernel_eval(TensorSquare(SZEGO), (0.5, 0), (0.5, 0)) == pytest.approx(4 / 3, rel=1e-15)


def test_domain_mismatch():
    with pytest.raises(DomainMismatchError):
        kernel_eval(SZEGO, (0.1, 0.2), (0.1, 0.2))
    with pytest.raises(DomainMismatchError):
        kernel_eval(TensorSquare(SZEGO), 0.1, 0.2)


def test_kernel_spec_validation():
    with pytest.raises(ValueError):
        SzegoPower(0)
    with pytest.raises(ValueError):
        TensorSquare(TensorSquare(SZEGO))


@pytest.mark.parametrize("text,expected", [
    ("szego", SZEGO), ("szego^2", BERGMAN), ("bergman", BERGMAN),
    ("tensor(szego^3)", TensorSquare(SzegoPower(3))),
])
def test_parse_kernel(text, expected):
    assert parse_kernel(text) == expected


def test_gram_examples():
    assert gram2(SZEGO, 0, 0) == Hermitian2(1.0, 1 + 0j, 1.0)
    g = gram2(SZEGO, 0, 0.5)
    assert (g.a11, g.a12) == (1.0, 1 + 0j)
    assert g.a22 == pytest.approx(4 / 3)


def test_tensor_gram_positive_for_distinct_points(rng):
    k = TensorSquare(SZEGO)
    for _ in range(200):
        p = (sample_disk(rng), sample_disk(rng))
        q = (sample_disk(rng), sample_disk(rng))
        g = gram2(k, p, q)
        # direct determinant of the full matrix
        assert np.linalg.det(g.to_array()).real > 0
        assert strict_positivity_check(g, 1e-15)


def test_strict_positivity_examples():
    assert not strict_positivity_check(Hermitian2(1, 1, 1), 0.0)
    m = Hermitian2(1, 1, 4 / 3)
    assert m.det == pytest.approx(1 / 3)
    assert strict_positivity_check(m, 0.0)
    assert strict_positivity_check(Hermitian2(2, 0, 3), 0.0)


KERNELS = [SzegoPower(n) for n in (1, 2, 5)]


@given(disk_points(), disk_points())
def test_conjugate_symmetry(x, y):
    for k in KERNELS:
        a, b = kernel_eval(k, x, y), np.conj(kernel_eval(k, y, x))
        assert abs(a - b) <= 1e-14 * abs(a)


@given(bidisk_points(), bidisk_points())
def test_tensor_conjugate_symmetry(p, q):
    k = TensorSquare(SzegoPower(2))
    a, b = kernel_eval(k, p, q), np.conj(kernel_eval(k, q, p))
    assert abs(a - b) <= 1e-14 * abs(a)


@given(disk_points())
def test_diagonal_real_and_at_least_one(x):
    for k in KERNELS:
        v = kernel_eval(k, x, x)
        assert v.imag == 0 and v.real >= 1


def test_power_consistency(rng):
    x, y = sample_disk(rng, 2000), sample_disk(rng, 2000)
    base = szego_eval(x, y)
    for n in range(1, 9):
        got = kernel_eval(SzegoPower(n), x, y)
        assert np.max(np.abs(got - base ** n) / np.abs(base ** n)) <= 1e-12


def test_separation_at_small_distance(rng):
    x = sample_disk(rng, 500)
    step = 1e-6 * np.exp(2j * np.pi * rng.random(500))
    y = x + step
    for k in KERNELS:
        for i in range(500):
            assert strict_positivity_check(gram2(k, x[i], y[i]), 1e-15)


def test_bipoint_json_roundtrip():
    p = BiPoint(0.1 + 0.2j, -0.3j)
    assert BiPoint.from_json(p.to_json()) == p
