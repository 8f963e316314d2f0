"""Pseudo-distances on the disk and the bidisk.

Every function accepts scalars or broadcastable numpy arrays.  Closed forms
are evaluated without subtractive cancellation where possible: the tensor
combination ``1 - (1 - a)(1 - b)`` is computed as ``a + b (1 - a)`` and power
distances go through ``expm1``/``log1p``.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ConsistencyError
from .kernels import (
    BiPoint,
    KernelSpec,
    SzegoPower,
    bi_point,
    disk_point,
    kernel_eval,
)

CLAMP = 1e-15


def _clamped_sqrt(x):
    """Square root that absorbs roundoff negatives down to ``-CLAMP``."""
    arr = np.asarray(x, dtype=float)
    if np.any(arr < -CLAMP):
        raise ConsistencyError(f"negative squared distance {float(np.min(arr)):.3e}")
    out = np.sqrt(np.maximum(arr, 0.0))
    return float(out) if out.ndim == 0 else out


def _scalar(v):
    return float(v) if np.ndim(v) == 0 else v


def _pseudo_hyperbolic(z, w):
    return np.abs(z - w) / np.abs(1.0 - np.conj(w) * z)


def pseudo_hyperbolic(z, w):
    """``|z - w| / |1 - conj(w) z|`` on the disk."""
    return _scalar(_pseudo_hyperbolic(disk_point(z), disk_point(w)))


def dk(kernel: KernelSpec, x, y):
    """Kernel pseudo-distance ``sqrt(1 - |k(x,y)|^2 / (k(x,x) k(y,y)))`` from raw values."""
    kxy = kernel_eval(kernel, x, y)
    kxx = np.real(kernel_eval(kernel, x, x))
    kyy = np.real(kernel_eval(kernel, y, y))
    ratio = (np.abs(kxy) ** 2 / kxx) / kyy
    return _clamped_sqrt(1.0 - ratio)


def _power_sq(t, n: int):
    # 1 - (1 - t^2)^n
    t = np.asarray(t, dtype=float)
    return -np.expm1(n * np.log1p(-t * t))


def dk_power_closed(t, n: int):
    """Distance of the ``n``-th kernel power given the base distance ``t``."""
    if n < 1:
        raise ValueError("power must be >= 1")
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0) or np.any(t_arr >= 1):
        raise ValueError("base distance must lie in [0, 1)")
    if n == 1:
        return _scalar(t_arr)
    return _clamped_sqrt(_power_sq(t_arr, n))


def tensor_combine(d1, d2):
    """``sqrt(d1^2 + d2^2 - d1^2 d2^2)`` without cancellation."""
    a = np.asarray(d1, dtype=float) ** 2
    b = np.asarray(d2, dtype=float) ** 2
    return _clamped_sqrt(a + b * (1.0 - a))


def dk_tensor2(kernel: SzegoPower, p, q):
    """Tensor-square distance on the bidisk from the two coordinate distances."""
    if not isinstance(kernel, SzegoPower):
        raise ValueError("dk_tensor2 takes the disk kernel being squared")
    p, q = bi_point(p), bi_point(q)
    d1 = _pseudo_hyperbolic(p.first, q.first)
    d2 = _pseudo_hyperbolic(p.second, q.second)
    if kernel.n > 1:
        d1 = dk_power_closed(d1, kernel.n)
        d2 = dk_power_closed(d2, kernel.n)
    return tensor_combine(d1, d2)


def rho(p, q):
    """The indefinite Schwarz-Pick distance on the bidisk.

    Evaluated from the two Möbius quotients directly, independently of the
    kernel machinery, so it can be cross-checked against ``dk_tensor2``.
    """
    p, q = bi_point(p), bi_point(q)
    u1 = (p.first - q.first) / (1.0 - np.conj(q.first) * p.first)
    u2 = (p.second - q.second) / (1.0 - np.conj(q.second) * p.second)
    a = np.abs(u1) ** 2
    b = np.abs(u2) ** 2
    return _clamped_sqrt(a + b - np.abs(u1 * u2) ** 2)


def mobius_distance_bidisk(p, q):
    """Möbius distance on the bidisk: the larger coordinate pseudo-hyperbolic distance."""
    p, q = bi_point(p), bi_point(q)
    return _scalar(
        np.maximum(_pseudo_hyperbolic(p.first, q.first), _pseudo_hyperbolic(p.second, q.second))
    )


def caratheodory(d):
    """Carathéodory distance ``atanh(d)`` from a Möbius distance."""
    if np.ndim(d) == 0:
        d = float(d)
        if not 0.0 <= d < 1.0:
            raise ValueError(f"distance must lie in [0, 1), got {d}")
        return math.atanh(d)
    arr = np.asarray(d, dtype=float)
    if np.any(arr < 0) or np.any(arr >= 1):
        raise ValueError("distance must lie in [0, 1)")
    return np.arctanh(arr)

