"""Two-point Pick matrices, solvability tests and explicit interpolants."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import UnsolvableError
from .holomaps import (
    Compose,
    Constant,
    HoloMap1,
    HoloMap2,
    Lift1,
    MobiusAuto,
    PointwiseProduct,
    Project,
)
from .kernels import SZEGO, BiPoint, Hermitian2, KernelSpec, SzegoPower, bi_point, disk_point, kernel_eval
from .metrics import mobius_distance_bidisk, pseudo_hyperbolic

PSD_TOL = 1e-12


def _target(w: complex) -> complex:
    w = complex(w)
    if not (np.isfinite(w.real) and np.isfinite(w.imag)) or abs(w) > 1.0:
        raise ValueError(f"interpolation target {w} is outside the closed disk")
    return w


@dataclass(frozen=True)
class PickProblem1:
    """Find ``phi`` with ``phi(x1) = w1`` and ``phi(x2) = w2`` on the disk."""

    x1: complex
    x2: complex
    w1: complex
    w2: complex
    kernel: KernelSpec = field(default=SZEGO)

    def __post_init__(self):
        object.__setattr__(self, "x1", disk_point(self.x1))
        object.__setattr__(self, "x2", disk_point(self.x2))
        w1, w2 = _target(self.w1), _target(self.w2)
        if (abs(w1) == 1.0 or abs(w2) == 1.0) and w1 != w2:
            raise ValueError("unimodular targets are only allowed as a constant (w1 == w2)")
        object.__setattr__(self, "w1", w1)
        object.__setattr__(self, "w2", w2)
        if not isinstance(self.kernel, SzegoPower):
            raise ValueError("disk problems take a disk kernel")


@dataclass(frozen=True)
class PickProblem2:
    """Find ``F`` on the bidisk with ``F(p) = zeta`` and ``F(q) = lam``."""

    p: BiPoint
    q: BiPoint
    zeta: BiPoint
    lam: BiPoint

    def __post_init__(self):
        for name in ("p", "q", "zeta", "lam"):
            object.__setattr__(self, name, bi_point(getattr(self, name)))


def pick_matrix(prob: PickProblem1) -> Hermitian2:
    k = prob.kernel
    x1, x2, w1, w2 = prob.x1, prob.x2, prob.w1, prob.w2
    a11 = (1.0 - abs(w1) ** 2) * np.real(kernel_eval(k, x1, x1))
    a22 = (1.0 - abs(w2) ** 2) * np.real(kernel_eval(k, x2, x2))
    a12 = (1.0 - w1 * np.conj(w2)) * kernel_eval(k, x1, x2)
    return Hermitian2(float(a11), complex(a12), float(a22))


def is_psd2(m: Hermitian2, tol: float = PSD_TOL) -> bool:
    """Positive semidefiniteness with a tolerance relative to the diagonal scale."""
    scale = max(1.0, m.a11 * m.a22)
    return m.a11 >= -tol and m.a22 >= -tol and m.det >= -tol * scale


def solvable_two_point_disk(prob: PickProblem1, tol: float = PSD_TOL) -> bool:
    if prob.kernel != SZEGO:
        raise ValueError(f"only the Szegő kernel has the two-point Pick property here, got {prob.kernel}")
    return is_psd2(pick_matrix(prob), tol)


def interpolant_two_point_disk(prob: PickProblem1) -> HoloMap1:
    """Explicit self-map of the disk solving a solvable two-point problem.

    With ``b`` sending ``x1`` to 0 and ``b'`` sending ``w1`` to 0, the map is
    ``b'^{-1}(c * b(z))`` for ``c = b'(w2) / b(x2)``.
    """
    if prob.w1 == prob.w2:
        return Constant(prob.w1)
    if prob.x1 == prob.x2:
        raise UnsolvableError("equal nodes with different targets")
    if not solvable_two_point_disk(prob):
        raise UnsolvableError(
            f"d(w1, w2) = {pseudo_hyperbolic(prob.w1, prob.w2):.17g} exceeds "
            f"d(x1, x2) = {pseudo_hyperbolic(prob.x1, prob.x2):.17g}"
        )
    if (prob.x1, prob.x2) == (prob.w1, prob.w2):
        return MobiusAuto()
    b = MobiusAuto(prob.x1)
    bw = MobiusAuto(prob.w1)
    c = complex(bw(prob.w2)) / complex(b(prob.x2))
    if abs(c) > 1.0:
        # inside the PSD tolerance band
        c /= abs(c)
    return Compose(bw.inverse(), PointwiseProduct(Constant(c), b))


def solvable_two_point_bidisk(prob: PickProblem2) -> bool:
    return mobius_distance_bidisk(prob.zeta, prob.lam) <= mobius_distance_bidisk(prob.p, prob.q)


def interpolant_two_point_bidisk(prob: PickProblem2) -> HoloMap2:
    """Coordinatewise interpolant ``F = (phi1 ∘ pi_j1, phi2 ∘ pi_j2)``.

    Target component ``i`` reads node coordinate ``i`` when that scalar
    problem is already solvable, otherwise the coordinate with the larger
    node separation (ties toward the first).
    """
    if not solvable_two_point_bidisk(prob):
        raise UnsolvableError("target Möbius distance exceeds node Möbius distance")
    p, q = prob.p, prob.q
    d = [pseudo_hyperbolic(p[0], q[0]), pseudo_hyperbolic(p[1], q[1])]
    j_max = 0 if d[0] >= d[1] else 1
    comps = []
    for i in range(2):
        zi, li = prob.zeta[i], prob.lam[i]
        j = i if pseudo_hyperbolic(zi, li) <= d[i] else j_max
        if zi == p[j] and li == q[j]:
            comps.append(Project(j + 1))
            continue
        phi = interpolant_two_point_disk(PickProblem1(p[j], q[j], zi, li))
        comps.append(Lift1(phi, Project(j + 1)))
    return HoloMap2(comps[0], comps[1])
