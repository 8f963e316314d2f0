"""Expression trees for holomorphic self-maps of the disk and the bidisk.

Every constructor keeps the sup-norm over the disk at most one, so any tree
built from them is a holomorphic map into the closed unit disk.  Trees are
immutable, evaluate on scalars or complex numpy arrays, and round-trip
through a small JSON format (``{"type": ..., <params>, <children>}``, complex
numbers as ``[re, im]``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace
from typing import Union

import numpy as np

from .errors import BoundaryDegeneracyError, MalformedTreeError
from .kernels import EPS_BOUNDARY, BiPoint, complex_from_json, complex_to_json, disk_point

SUP_SLACK = 1e-12
PARAM_RADIUS = 0.999


def _check_unit(c: complex, what: str):
    if not abs(c) <= 1.0 + SUP_SLACK:
        raise MalformedTreeError(f"{what} has modulus {abs(c):.17g} > 1")


def _check_open(a: complex, what: str):
    if not abs(a) < 1.0:
        raise MalformedTreeError(f"{what} {a} is not inside the disk")


def mobius(a, theta, z):
    """``e^{i theta} (z - a) / (1 - conj(a) z)``."""
    return np.exp(1j * theta) * (z - a) / (1.0 - np.conj(a) * z)


# ---------------------------------------------------------------------------
# maps of one variable


@dataclass(frozen=True)
class Constant:
    c: complex

    def __post_init__(self):
        object.__setattr__(self, "c", complex(self.c))
        _check_unit(self.c, "constant")

    def __call__(self, z):
        return self.c + 0.0 * np.asarray(z, dtype=complex)


@dataclass(frozen=True)
class MobiusAuto:
    a: complex = 0j
    theta: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "a", complex(self.a))
        object.__setattr__(self, "theta", float(self.theta))
        _check_open(self.a, "Möbius parameter")

    def __call__(self, z):
        return mobius(self.a, self.theta, np.asarray(z, dtype=complex))

    def inverse(self) -> "MobiusAuto":
        return MobiusAuto(-self.a * np.exp(1j * self.theta), -self.theta)


@dataclass(frozen=True)
class BlaschkeProduct:
    zeros: tuple = ()
    unimodular: complex = 1 + 0j

    def __post_init__(self):
        zs = tuple(complex(a) for a in self.zeros)
        for a in zs:
            _check_open(a, "Blaschke zero")
        u = complex(self.unimodular)
        if abs(abs(u) - 1.0) > 1e-12:
            raise MalformedTreeError(f"Blaschke factor {u} is not unimodular")
        object.__setattr__(self, "zeros", zs)
        object.__setattr__(self, "unimodular", u)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = self.unimodular + 0.0 * z
        for a in self.zeros:
            out = out * mobius(a, 0.0, z)
        return out


@dataclass(frozen=True)
class ScaledPolynomial:
    """``sum coeffs[k] z^k`` with ``sum |coeffs[k]| <= 1``."""

    coeffs: tuple

    def __post_init__(self):
        cs = tuple(complex(c) for c in self.coeffs)
        if not cs:
            raise MalformedTreeError("empty polynomial")
        if sum(abs(c) for c in cs) > 1.0 + SUP_SLACK:
            raise MalformedTreeError("polynomial coefficients exceed the unit l1 budget")
        object.__setattr__(self, "coeffs", cs)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = self.coeffs[-1] + 0.0 * z
        for c in reversed(self.coeffs[:-1]):
            out = out * z + c
        return out


@dataclass(frozen=True)
class Compose:
    """``outer(inner(z))``."""

    outer: "HoloMap1"
    inner: "HoloMap1"

    def __call__(self, z):
        return self.outer(self.inner(z))


@dataclass(frozen=True)
class ConvexCombo:
    f: "HoloMap1"
    g: "HoloMap1"
    t: float

    def __post_init__(self):
        object.__setattr__(self, "t", float(self.t))
        if not 0.0 <= self.t <= 1.0:
            raise MalformedTreeError(f"mixing weight {self.t} outside [0, 1]")

    def __call__(self, z):
        return (1.0 - self.t) * self.f(z) + self.t * self.g(z)


@dataclass(frozen=True)
class PointwiseProduct:
    f: "HoloMap1"
    g: "HoloMap1"

    def __call__(self, z):
        return self.f(z) * self.g(z)


HoloMap1 = Union[
    Constant, MobiusAuto, BlaschkeProduct, ScaledPolynomial, Compose, ConvexCombo, PointwiseProduct
]
_HOLO1 = (Constant, MobiusAuto, BlaschkeProduct, ScaledPolynomial, Compose, ConvexCombo, PointwiseProduct)


# ---------------------------------------------------------------------------
# scalar maps of two variables


@dataclass(frozen=True)
class Project:
    j: int

    def __post_init__(self):
        if self.j not in (1, 2):
            raise MalformedTreeError(f"projection index must be 1 or 2, got {self.j}")

    def __call__(self, z1, z2):
        return np.asarray(z1 if self.j == 1 else z2, dtype=complex)


@dataclass(frozen=True)
class Lift1:
    """``phi(inner(z1, z2))``."""

    phi: HoloMap1
    inner: "Scalar2"

    def __call__(self, z1, z2):
        return self.phi(self.inner(z1, z2))


@dataclass(frozen=True)
class SeparableProduct:
    """``b1(z1) * b2(z2)``."""

    b1: HoloMap1
    b2: HoloMap1

    def __call__(self, z1, z2):
        return self.b1(z1) * self.b2(z2)


@dataclass(frozen=True)
class ConvexCombo2:
    f: "Scalar2"
    g: "Scalar2"
    t: float

    def __post_init__(self):
        object.__setattr__(self, "t", float(self.t))
        if not 0.0 <= self.t <= 1.0:
            raise MalformedTreeError(f"mixing weight {self.t} outside [0, 1]")

    def __call__(self, z1, z2):
        return (1.0 - self.t) * self.f(z1, z2) + self.t * self.g(z1, z2)


@dataclass(frozen=True)
class Constant2:
    c: complex

    def __post_init__(self):
        object.__setattr__(self, "c", complex(self.c))
        _check_unit(self.c, "constant")

    def __call__(self, z1, z2):
        return self.c + 0.0 * np.asarray(z1, dtype=complex)


Scalar2 = Union[Project, Lift1, SeparableProduct, ConvexCombo2, Constant2]
_SCALAR2 = (Project, Lift1, SeparableProduct, ConvexCombo2, Constant2)


@dataclass(frozen=True)
class HoloMap2:
    """``F(z1, z2) = (f1(w), f2(w))`` where ``w`` is ``(z1, z2)``, or ``(z2, z1)`` if ``swap``."""

    f1: Scalar2
    f2: Scalar2
    swap: bool = False

    def __call__(self, z1, z2):
        if self.swap:
            z1, z2 = z2, z1
        return self.f1(z1, z2), self.f2(z1, z2)


IDENTITY2 = HoloMap2(Project(1), Project(2))
SWAP2 = HoloMap2(Project(1), Project(2), swap=True)
DIAGONAL2 = HoloMap2(Project(1), Project(1))


# ---------------------------------------------------------------------------
# evaluation


def eval1(f: HoloMap1, z):
    """Evaluate a disk self-map at a disk point (or array of points)."""
    if not isinstance(f, _HOLO1):
        raise MalformedTreeError(f"not a disk map: {f!r}")
    out = f(disk_point(z))
    return complex(out) if np.ndim(out) == 0 else out


def eval_scalar2(f: Scalar2, p):
    if not isinstance(f, _SCALAR2):
        raise MalformedTreeError(f"not a bidisk function: {f!r}")
    out = f(p[0], p[1])
    return complex(out) if np.ndim(out) == 0 else out


def eval2_raw(F: HoloMap2, p) -> BiPoint:
    """Evaluate without the boundary check; for batched callers that mask."""
    w1, w2 = F(p[0], p[1])
    return BiPoint(w1, w2)


def eval2(F: HoloMap2, p, eps: float = EPS_BOUNDARY) -> BiPoint:
    """Evaluate a bidisk map; images within ``eps`` of the circle are rejected."""
    if not isinstance(F, HoloMap2):
        raise MalformedTreeError(f"not a bidisk map: {F!r}")
    p = BiPoint(disk_point(p[0]), disk_point(p[1]))
    w1, w2 = F(p.first, p.second)
    m = max(np.max(np.abs(w1), initial=0.0), np.max(np.abs(w2), initial=0.0))
    if m >= 1.0 - eps:
        raise BoundaryDegeneracyError(f"image modulus {m:.17g} too close to the circle")
    if np.ndim(w1) == 0:
        return BiPoint(complex(w1), complex(w2))
    return BiPoint(w1, w2)


def boundary_mask(image: BiPoint, eps: float = EPS_BOUNDARY):
    """True where an image coordinate is too close to the circle."""
    return (np.abs(image[0]) >= 1.0 - eps) | (np.abs(image[1]) >= 1.0 - eps)


# ---------------------------------------------------------------------------
# tree utilities


def _children(node):
    return [getattr(node, f.name) for f in fields(node) if _is_tree(getattr(node, f.name))]


def _is_tree(x) -> bool:
    return isinstance(x, _HOLO1 + _SCALAR2 + (HoloMap2,))


def tree_size(node) -> int:
    """Number of nodes in a tree."""
    return 1 + sum(tree_size(c) for c in _children(node))


def tunable_parameters(node) -> list[float]:
    """Continuous parameters adjustable by local search, in traversal order.

    Möbius parameters contribute ``(re a, im a, theta)``; mixing weights
    contribute ``t``.
    """
    out: list[float] = []
    if isinstance(node, MobiusAuto):
        out += [node.a.real, node.a.imag, node.theta]
    elif isinstance(node, (ConvexCombo, ConvexCombo2)):
        out.append(node.t)
    for c in _children(node):
        out += tunable_parameters(c)
    return out


def with_parameters(node, values):
    """Rebuild ``node`` with parameters from ``values``, clipped to valid ranges."""
    it = iter(values)
    return _rebuild(node, it)


def _rebuild(node, it):
    changes = {}
    if isinstance(node, MobiusAuto):
        a = complex(next(it), next(it))
        if abs(a) > PARAM_RADIUS:
            a *= PARAM_RADIUS / abs(a)
        changes.update(a=a, theta=next(it))
    elif isinstance(node, (ConvexCombo, ConvexCombo2)):
        changes["t"] = min(1.0, max(0.0, next(it)))
    for f in fields(node):
        v = getattr(node, f.name)
        if _is_tree(v):
            changes[f.name] = _rebuild(v, it)
    return replace(node, **changes) if changes else node


# ---------------------------------------------------------------------------
# JSON


_REGISTRY = {cls.__name__: cls for cls in _HOLO1 + _SCALAR2 + (HoloMap2,)}


def to_json(node) -> dict:
    """Serialize a tree to plain JSON-compatible data."""
    out: dict = {"type": type(node).__name__}
    for f in fields(node):
        v = getattr(node, f.name)
        if _is_tree(v):
            out[f.name] = to_json(v)
        elif isinstance(v, complex):
            out[f.name] = complex_to_json(v)
        elif isinstance(v, tuple):
            out[f.name] = [complex_to_json(c) for c in v]
        else:
            out[f.name] = v
    return out


def from_json(data: dict):
    """Inverse of :func:`to_json`."""
    try:
        cls = _REGISTRY[data["type"]]
    except (KeyError, TypeError):
        raise MalformedTreeError(f"unknown node {data!r}") from None
    kwargs = {}
    for f in fields(cls):
        if f.name not in data:
            continue
        v = data[f.name]
        if isinstance(v, dict):
            kwargs[f.name] = from_json(v)
        elif f.name in ("zeros", "coeffs"):
            kwargs[f.name] = tuple(complex_from_json(c) for c in v)
        elif f.name in ("a", "c", "unimodular"):
            kwargs[f.name] = complex_from_json(v)
        else:
            kwargs[f.name] = v
    try:
        return cls(**kwargs)
    except TypeError as exc:
        raise MalformedTreeError(str(exc)) from None


# ---------------------------------------------------------------------------
# automorphisms of the bidisk


@dataclass(frozen=True)
class BidiskAutomorphism:
    """``(z1, z2) -> (M1(w1), M2(w2))`` with ``w`` the (optionally swapped) input."""

    m1: MobiusAuto = field(default_factory=MobiusAuto)
    m2: MobiusAuto = field(default_factory=MobiusAuto)
    swap: bool = False

    def as_map(self) -> HoloMap2:
        return HoloMap2(Lift1(self.m1, Project(1)), Lift1(self.m2, Project(2)), self.swap)

    def inverse(self) -> "BidiskAutomorphism":
        if self.swap:
            return BidiskAutomorphism(self.m2.inverse(), self.m1.inverse(), True)
        return BidiskAutomorphism(self.m1.inverse(), self.m2.inverse(), False)

    def then(self, other: "BidiskAutomorphism") -> "BidiskAutomorphism":
        """The automorphism ``other ∘ self`` built directly from parameters."""
        inner = (self.m2, self.m1) if other.swap else (self.m1, self.m2)
        return BidiskAutomorphism(
            compose_mobius(other.m1, inner[0]),
            compose_mobius(other.m2, inner[1]),
            self.swap != other.swap,
        )


def compose_mobius(outer: MobiusAuto, inner: MobiusAuto) -> MobiusAuto:
    """Single Möbius automorphism equal to ``outer ∘ inner``."""
    # zero of the composite is the inner preimage of outer.a
    c = inner.inverse()(outer.a)
    c = complex(c)
    z0 = 0j if abs(c) > 0.25 else 0.5 + 0j
    val = complex(outer(inner(z0)))
    rot = val * (1.0 - np.conj(c) * z0) / (z0 - c)
    return MobiusAuto(c, math.atan2(rot.imag, rot.real))


def bidisk_automorphism(a1=0j, a2=0j, theta1=0.0, theta2=0.0, swap=False) -> HoloMap2:
    """Automorphism of the bidisk as an evaluable tree."""
    return BidiskAutomorphism(MobiusAuto(a1, theta1), MobiusAuto(a2, theta2), bool(swap)).as_map()


# ---------------------------------------------------------------------------
# random generation


def sample_disk(rng: np.random.Generator, size=None, radius: float = 0.999):
    """Area-uniform samples from ``|z| <= radius``."""
    r = radius * np.sqrt(rng.random(size))
    th = 2.0 * np.pi * rng.random(size)
    out = r * np.exp(1j * th)
    return complex(out) if size is None else out


def random_mobius(rng: np.random.Generator) -> MobiusAuto:
    return MobiusAuto(sample_disk(rng, radius=0.9), 2.0 * np.pi * rng.random())


def _random_leaf1(rng: np.random.Generator) -> HoloMap1:
    kind = rng.integers(4)
    if kind == 0:
        return random_mobius(rng)
    if kind == 1:
        return Constant(sample_disk(rng, radius=0.95))
    if kind == 2:
        k = int(rng.integers(1, 4))
        zeros = tuple(sample_disk(rng, radius=0.9) for _ in range(k))
        return BlaschkeProduct(zeros, np.exp(2j * np.pi * rng.random()))
    deg = int(rng.integers(1, 5))
    raw = rng.standard_normal(deg + 1) + 1j * rng.standard_normal(deg + 1)
    raw *= rng.uniform(0.5, 1.0) / np.sum(np.abs(raw))
    return ScaledPolynomial(tuple(raw))


def random_holo1(rng: np.random.Generator, depth: int) -> HoloMap1:
    """Random disk self-map with at most ``2**(depth+1) - 1`` nodes."""
    if depth <= 0 or rng.random() < 0.3:
        return _random_leaf1(rng)
    kind = rng.integers(3)
    f = random_holo1(rng, depth - 1)
    g = random_holo1(rng, depth - 1)
    if kind == 0:
        return Compose(f, g)
    if kind == 1:
        return ConvexCombo(f, g, rng.random())
    return PointwiseProduct(f, g)


def random_scalar2(rng: np.random.Generator, depth: int) -> Scalar2:
    """Random holomorphic function from the bidisk into the closed disk."""
    if depth <= 0 or rng.random() < 0.25:
        r = rng.random()
        if r < 0.85:
            return Project(int(rng.integers(1, 3)))
        return Constant2(sample_disk(rng, radius=0.95))
    kind = rng.integers(3)
    if kind == 0:
        return Lift1(random_holo1(rng, depth - 1), random_scalar2(rng, depth - 1))
    if kind == 1:
        return SeparableProduct(random_holo1(rng, depth - 1), random_holo1(rng, depth - 1))
    return ConvexCombo2(random_scalar2(rng, depth - 1), random_scalar2(rng, depth - 1), rng.random())


def random_automorphism(rng: np.random.Generator) -> BidiskAutomorphism:
    return BidiskAutomorphism(random_mobius(rng), random_mobius(rng), bool(rng.integers(2)))


def random_selfmap_bidisk(seed: int, depth: int) -> HoloMap2:
    """Deterministic random holomorphic self-map of the bidisk.

    Depth 0 yields the identity, the coordinate swap, or a constant.  Larger
    depths mix structured families (automorphisms, diagonal maps, separable
    Blaschke products, constants) with general random trees.  The tree has at
    most ``8 * 2**depth`` nodes.
    """
    if not 0 <= depth <= 4:
        raise ValueError(f"depth must be in [0, 4], got {depth}")
    rng = np.random.default_rng(int(seed) & 0xFFFFFFFFFFFFFFFF)
    if depth == 0:
        kind = rng.integers(3)
        if kind == 0:
            return IDENTITY2
        if kind == 1:
            return SWAP2
        return HoloMap2(Constant2(sample_disk(rng, radius=0.95)), Constant2(sample_disk(rng, radius=0.95)))
    kind = rng.integers(6)
    if kind == 0:
        return random_automorphism(rng).as_map()
    if kind == 1:
        j = int(rng.integers(1, 3))
        phi = random_holo1(rng, depth - 1) if rng.random() < 0.5 else MobiusAuto()
        psi = random_holo1(rng, depth - 1) if rng.random() < 0.5 else MobiusAuto()
        return HoloMap2(Lift1(phi, Project(j)), Lift1(psi, Project(j)))
    if kind == 2:
        def blaschke():
            k = int(rng.integers(1, 3))
            return BlaschkeProduct(tuple(sample_disk(rng, radius=0.9) for _ in range(k)),
                                   np.exp(2j * np.pi * rng.random()))
        return HoloMap2(SeparableProduct(blaschke(), blaschke()), SeparableProduct(blaschke(), blaschke()),
                        bool(rng.integers(2)))
    if kind == 3 and rng.random() < 0.3:
        return HoloMap2(Constant2(sample_disk(rng, radius=0.95)), Constant2(sample_disk(rng, radius=0.95)))
    return HoloMap2(random_scalar2(rng, depth), random_scalar2(rng, depth), bool(rng.integers(2)))
