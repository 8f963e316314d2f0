"""Test helpers: point strategies and high-precision reference formulas."""

import mpmath
import numpy as np
from hypothesis import strategies as st

from bidisk.holomaps import sample_disk

mpmath.mp.dps = 50


def disk_points(max_radius=0.999):
    """Hypothesis strategy for points with modulus at most ``max_radius``."""
    return st.builds(
        lambda r, t: complex(max_radius * r * np.cos(t), max_radius * r * np.sin(t)),
        st.floats(0, 1), st.floats(0, 2 * np.pi),
    )


def bidisk_points(max_radius=0.999):
    return st.tuples(disk_points(max_radius), disk_points(max_radius))


# high-precision oracles, written straight from the defining formulas

def mp_szego(z, w, n=1):
    z, w = mpmath.mpc(z), mpmath.mpc(w)
    return (1 / (1 - mpmath.conj(w) * z)) ** n


def mp_pseudo_hyperbolic(z, w):
    z, w = mpmath.mpc(z), mpmath.mpc(w)
    return abs((z - w) / (1 - mpmath.conj(w) * z))


def mp_dk(z, w, n=1):
    kzw = mp_szego(z, w, n)
    return mpmath.sqrt(1 - abs(kzw) ** 2 / (mp_szego(z, z, n).real * mp_szego(w, w, n).real))


def mp_dk_tensor(p, q, n=1):
    r = abs(mp_szego(p[0], q[0], n) * mp_szego(p[1], q[1], n)) ** 2
    r /= (mp_szego(p[0], p[0], n) * mp_szego(p[1], p[1], n)).real
    r /= (mp_szego(q[0], q[0], n) * mp_szego(q[1], q[1], n)).real
    return mpmath.sqrt(1 - r)


def sample_pairs(rng, k):
    return (sample_disk(rng, k), sample_disk(rng, k)), (sample_disk(rng, k), sample_disk(rng, k))
