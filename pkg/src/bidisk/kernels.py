"""Szegő-family reproducing kernels on the disk and the bidisk.

Points on the disk are plain Python ``complex`` values (or complex numpy
arrays for batched evaluation); points on the bidisk are :class:`BiPoint`
pairs.  All functions are pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from .errors import BoundaryError, DomainMismatchError

EPS_BOUNDARY = 1e-9

ArrayLike = Union[complex, float, np.ndarray]


class BiPoint(NamedTuple):
    """A point ``(first, second)`` of the bidisk."""

    first: ArrayLike
    second: ArrayLike

    def to_json(self) -> list[list[float]]:
        return [complex_to_json(self.first), complex_to_json(self.second)]

    @classmethod
    def from_json(cls, data) -> "BiPoint":
        return cls(complex_from_json(data[0]), complex_from_json(data[1]))


def complex_to_json(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def complex_from_json(data) -> complex:
    if isinstance(data, (int, float)):
        return complex(data)
    re, im = data
    return complex(float(re), float(im))


def disk_point(z: ArrayLike, eps: float = EPS_BOUNDARY) -> ArrayLike:
    """Validate ``z`` as a point (or array of points) of the open disk.

    Raises :class:`BoundaryError` for non-finite values or ``|z| >= 1 - eps``.
    """
    if isinstance(z, np.ndarray):
        arr = z.astype(complex, copy=False)
        if not np.all(np.isfinite(arr)):
            raise BoundaryError("non-finite disk coordinate")
        if arr.size and np.max(np.abs(arr)) >= 1.0 - eps:
            raise BoundaryError(f"disk coordinate within {eps:g} of the unit circle")
        return arr
    z = complex(z)
    if not (np.isfinite(z.real) and np.isfinite(z.imag)):
        raise BoundaryError(f"non-finite disk coordinate {z!r}")
    if abs(z) >= 1.0 - eps:
        raise BoundaryError(f"|{z}| = {abs(z):.17g} is not inside the disk")
    return z


def bi_point(p, eps: float = EPS_BOUNDARY) -> BiPoint:
    """Validate and coerce a pair of disk coordinates into a :class:`BiPoint`."""
    if len(p) != 2:
        raise DomainMismatchError(f"bidisk point needs 2 coordinates, got {len(p)}")
    return BiPoint(disk_point(p[0], eps), disk_point(p[1], eps))


# ---------------------------------------------------------------------------
# kernel descriptors


@dataclass(frozen=True)
class SzegoPower:
    """The ``n``-th power of the Szegő kernel on the disk (n=2 is Bergman)."""

    n: int = 1

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise ValueError(f"kernel power must be a positive integer, got {self.n!r}")

    arity = 1

    def __str__(self) -> str:
        return "szego" if self.n == 1 else f"szego^{self.n}"


@dataclass(frozen=True)
class TensorSquare:
    """``base(x1, y1) * base(x2, y2)`` on the bidisk."""

    base: SzegoPower

    def __post_init__(self):
        if not isinstance(self.base, SzegoPower):
            raise ValueError("TensorSquare wraps only a disk kernel")

    arity = 2

    def __str__(self) -> str:
        return f"tensor({self.base})"


KernelSpec = Union[SzegoPower, TensorSquare]

SZEGO = SzegoPower(1)
BERGMAN = SzegoPower(2)


def parse_kernel(text: str) -> KernelSpec:
    """Parse ``szego``, ``szego^3``, ``bergman`` or ``tensor(szego^2)``."""
    s = text.strip().lower().replace(" ", "")
    if s.startswith("tensor(") and s.endswith(")"):
        inner = parse_kernel(s[len("tensor("):-1])
        if not isinstance(inner, SzegoPower):
            raise ValueError("nested tensor kernels are not supported")
        return TensorSquare(inner)
    if s == "bergman":
        return BERGMAN
    if s == "szego":
        return SZEGO
    if s.startswith("szego^"):
        try:
            n = int(s[len("szego^"):])
        except ValueError:
            raise ValueError(f"bad kernel power in {text!r}") from None
        return SzegoPower(n)
    raise ValueError(f"unknown kernel {text!r}")


# ---------------------------------------------------------------------------
# evaluation


def _szego_raw(z, w):
    return 1.0 / (1.0 - np.conj(w) * z)


def _ipow(v, n: int):
    # repeated multiplication, no log/exp
    out = v
    for _ in range(n - 1):
        out = out * v
    return out


def szego_eval(z: ArrayLike, w: ArrayLike) -> ArrayLike:
    """Szegő kernel ``1 / (1 - conj(w) z)``."""
    return _szego_raw(disk_point(z), disk_point(w))


def kernel_eval(kernel: KernelSpec, x, y):
    """Evaluate ``kernel(x, y)``; ``x`` and ``y`` are disk or bidisk points."""
    if isinstance(kernel, SzegoPower):
        if isinstance(x, tuple) or isinstance(y, tuple):
            raise DomainMismatchError(f"{kernel} lives on the disk, got a bidisk point")
        return _ipow(szego_eval(x, y), kernel.n)
    if isinstance(kernel, TensorSquare):
        if not (isinstance(x, tuple) and isinstance(y, tuple)):
            raise DomainMismatchError(f"{kernel} lives on the bidisk, got a disk point")
        x, y = bi_point(x), bi_point(y)
        return kernel_eval(kernel.base, x[0], y[0]) * kernel_eval(kernel.base, x[1], y[1])
    raise TypeError(f"not a kernel spec: {kernel!r}")


@dataclass(frozen=True)
class Hermitian2:
    """Upper triangle of a 2x2 Hermitian matrix ``[[a11, a12], [conj(a12), a22]]``."""

    a11: float
    a12: complex
    a22: float

    @property
    def det(self) -> float:
        return self.a11 * self.a22 - abs(self.a12) ** 2

    def to_array(self) -> np.ndarray:
        return np.array([[self.a11, self.a12], [np.conj(self.a12), self.a22]], dtype=complex)

    def to_json(self) -> dict:
        return {
            "a11": self.a11,
            "a12": complex_to_json(self.a12),
            "a22": self.a22,
            "det": self.det,
        }


def gram2(kernel: KernelSpec, x, y) -> Hermitian2:
    """Gram matrix of the kernel functions at ``x`` and ``y``."""
    kxx = kernel_eval(kernel, x, x)
    kyy = kernel_eval(kernel, y, y)
    kxy = kernel_eval(kernel, x, y)
    return Hermitian2(float(np.real(kxx)), complex(kxy), float(np.real(kyy)))


def strict_positivity_check(m: Hermitian2, tol: float = 0.0) -> bool:
    """True iff ``m`` is strictly positive definite beyond ``tol``."""
    return m.a11 > tol and m.det > tol
