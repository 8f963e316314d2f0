"""Derivative-free extremal searches.

* :func:`maximize_seto_ratio` pushes the distortion ratio of random bidisk
  self-maps toward its supremum sqrt(2).
* :func:`find_rho_obstruction` looks for target pairs that are closer than
  the nodes in the indefinite distance but farther in the Möbius distance,
  so no holomorphic map can interpolate them.
* :func:`estimate_mobius_distance` lower-bounds the Möbius distance by a
  supremum over generated scalar maps.

Searches are random restarts followed by coordinate pattern search, and are
deterministic in the seed.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import holomaps as hm
from .kernels import EPS_BOUNDARY, BiPoint
from .metrics import _pseudo_hyperbolic, mobius_distance_bidisk, rho
from .verify import tensor_power_distance

log = logging.getLogger(__name__)

SQRT2 = math.sqrt(2.0)
UPPER_SLACK = 1e-9
POINT_RADIUS = 0.999
REFINE_BUDGET = 300


@dataclass
class ExtremalResult:
    mode: str
    best_value: float
    argument: dict
    iterations: int
    seed: int
    trace: list = field(default_factory=list)
    consistent: bool = True

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "found": True,
            "best_value": self.best_value,
            "argument": self.argument,
            "iterations": self.iterations,
            "seed": self.seed,
            "consistent": self.consistent,
        }


class _Tracker:
    """Budgeted objective wrapper that records the running best."""

    def __init__(self, budget: int):
        self.budget = budget
        self.evals = 0
        self.best = -math.inf
        self.best_arg = None
        self.trace: list[tuple[int, float]] = []

    @property
    def exhausted(self) -> bool:
        return self.evals >= self.budget

    def record(self, value: float, make_arg: Callable[[], dict]) -> float:
        self.evals += 1
        if value > self.best:
            self.best = value
            self.best_arg = make_arg()
            self.trace.append((self.evals, value))
        return value


def pattern_search(f: Callable[[np.ndarray], float], x0, step: float, budget: int,
                   min_step: float = 1e-9) -> tuple[np.ndarray, float, int]:
    """Maximize ``f`` by compass search; returns ``(x, f(x), evaluations)``."""
    x = np.array(x0, dtype=float)
    fx = f(x)
    evals = 1
    while evals < budget and step >= min_step:
        improved = False
        for i in range(x.size):
            for sign in (1.0, -1.0):
                if evals >= budget:
                    return x, fx, evals
                trial = x.copy()
                trial[i] += sign * step
                ft = f(trial)
                evals += 1
                if ft > fx:
                    x, fx = trial, ft
                    improved = True
                    break
        if not improved:
            step *= 0.5
    return x, fx, evals


def _clip_point(z: complex) -> complex:
    r = abs(z)
    return z * (POINT_RADIUS / r) if r > POINT_RADIUS else z


def _pack(p, q) -> list[float]:
    return [p[0].real, p[0].imag, p[1].real, p[1].imag, q[0].real, q[0].imag, q[1].real, q[1].imag]


def _unpack(v) -> tuple[BiPoint, BiPoint]:
    c = [_clip_point(complex(v[2 * i], v[2 * i + 1])) for i in range(4)]
    return BiPoint(c[0], c[1]), BiPoint(c[2], c[3])


def seto_ratio(F: hm.HoloMap2, p, q, n: int = 1) -> float:
    """``d(F p, F q) / d(p, q)`` for the tensor square of the ``n``-th Szegő power.

    Returns ``-inf`` for coincident points or images on the boundary margin.
    """
    den = float(tensor_power_distance(p, q, n))
    if den == 0.0:
        return -math.inf
    fp, fq = hm.eval2_raw(F, p), hm.eval2_raw(F, q)
    if max(abs(complex(fp[0])), abs(complex(fp[1])), abs(complex(fq[0])), abs(complex(fq[1]))) >= 1 - EPS_BOUNDARY:
        return -math.inf
    return float(tensor_power_distance(fp, fq, n)) / den


def _seto_start(rng, family: str, restart: int):
    """Initial ``(F, p, q)`` of a restart."""
    if family == "automorphisms":
        F = hm.random_automorphism(rng).as_map()
    elif family == "diagonal" or (family == "mixed" and restart % 3 == 0):
        # diagonal map with shrinking separation: ratio sqrt(2 - t^2)
        t = 0.5 ** (1 + restart // 3)
        j = int(rng.integers(1, 3))
        F = hm.HoloMap2(hm.Project(j), hm.Project(j))
        base = hm.sample_disk(rng, radius=0.5)
        p = [base, base]
        q = [base, base]
        p[j - 1] = base + t * np.exp(2j * np.pi * rng.random())
        return F, BiPoint(*p), BiPoint(*q)
    else:
        F = hm.random_selfmap_bidisk(int(rng.integers(0, 2**63)), int(rng.integers(1, 4)))
    p = BiPoint(hm.sample_disk(rng), hm.sample_disk(rng))
    q = BiPoint(hm.sample_disk(rng), hm.sample_disk(rng))
    return F, p, q


def maximize_seto_ratio(n: int, budget: int, seed: int, *, family: str = "mixed",
                        start: Optional[tuple] = None) -> ExtremalResult:
    """Search for the largest distortion ratio of bidisk self-maps.

    ``family`` is ``"mixed"`` (random maps plus the diagonal family),
    ``"automorphisms"`` or ``"diagonal"``.  ``start`` optionally fixes the
    first restart as ``(F, p, q)``.  ``budget`` counts objective evaluations.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    if family not in ("mixed", "automorphisms", "diagonal"):
        raise ValueError(f"unknown map family {family!r}")
    rng = np.random.default_rng(seed)
    tr = _Tracker(budget)
    restart = 0
    while not tr.exhausted:
        if restart == 0 and start is not None:
            F, p, q = start
            p, q = BiPoint(*map(complex, p)), BiPoint(*map(complex, q))
        else:
            F, p, q = _seto_start(rng, family, restart)
        restart += 1
        theta0 = hm.tunable_parameters(F)
        x0 = np.array(_pack(p, q) + theta0)

        def objective(x, F=F):
            pp, qq = _unpack(x[:8])
            G = hm.with_parameters(F, x[8:]) if len(x) > 8 else F
            val = seto_ratio(G, pp, qq, n)
            return tr.record(val, lambda: {"kind": "seto_ratio", "n": n, "map": hm.to_json(G),
                                           "p": pp.to_json(), "q": qq.to_json()})

        step = 0.05 if family != "diagonal" else 0.01
        pattern_search(objective, x0, step, min(REFINE_BUDGET, budget - tr.evals))

    res = ExtremalResult("seto-ratio", tr.best, tr.best_arg, tr.evals, seed, tr.trace)
    if res.best_value > SQRT2 + UPPER_SLACK:
        res.consistent = False
        log.error("distortion ratio %.17g exceeds sqrt(2)", res.best_value)
    return res


# ---------------------------------------------------------------------------
# obstruction search


def _obstruction_candidate(rng, structured: bool):
    if structured:
        t = rng.uniform(0.05, 0.95)
        rho_t = math.sqrt(2 * t * t - t ** 4)
        s = rng.uniform(t, rho_t)
        z = BiPoint(0j, 0j)
        w = BiPoint(t * np.exp(2j * np.pi * rng.random()), t * np.exp(2j * np.pi * rng.random()))
        zeta = BiPoint(0j, 0j)
        lam = BiPoint(s * np.exp(2j * np.pi * rng.random()), 0j)
        if rng.random() < 0.5:
            lam = BiPoint(lam[1], lam[0])
        a, b = hm.random_automorphism(rng), hm.random_automorphism(rng)
        z, w = hm.eval2_raw(a.as_map(), z), hm.eval2_raw(a.as_map(), w)
        zeta, lam = hm.eval2_raw(b.as_map(), zeta), hm.eval2_raw(b.as_map(), lam)
        return tuple(BiPoint(complex(u[0]), complex(u[1])) for u in (zeta, lam, z, w))
    return tuple(BiPoint(hm.sample_disk(rng), hm.sample_disk(rng)) for _ in range(4))


def obstruction_margin(zeta, lam, z, w) -> float:
    """Möbius-distance excess of the targets over the nodes, or ``-inf`` if the
    indefinite distance ordering fails."""
    pts = [zeta, lam, z, w]
    if any(abs(complex(c)) >= 1 - EPS_BOUNDARY for p in pts for c in p):
        return -math.inf
    if rho(zeta, lam) > rho(z, w):
        return -math.inf
    return mobius_distance_bidisk(zeta, lam) - mobius_distance_bidisk(z, w)


def find_rho_obstruction(budget: int, seed: int, *, structured: bool = True) -> Optional[ExtremalResult]:
    """Search for node/target pairs ordered by the indefinite distance but not
    interpolable by any holomorphic map; ``None`` when nothing is found."""
    rng = np.random.default_rng(seed)
    tr = _Tracker(budget)
    i = 0
    while not tr.exhausted:
        cand = _obstruction_candidate(rng, structured and i % 4 != 3)
        i += 1
        m = obstruction_margin(*cand)
        tr.record(m if m > 0 else -math.inf, lambda c=cand: {
            "kind": "obstruction",
            "zeta": c[0].to_json(), "lambda": c[1].to_json(), "z": c[2].to_json(), "w": c[3].to_json(),
        })
    if tr.best_arg is None or not tr.best > 0:
        return None
    return ExtremalResult("obstruction", tr.best, tr.best_arg, tr.evals, seed, tr.trace)


# ---------------------------------------------------------------------------
# Möbius distance


def search_mobius_distance(p, q, budget: int, seed: int, *, family: str = "mixed") -> ExtremalResult:
    """Supremum of ``d(phi(p), phi(q))`` over generated scalar maps ``phi``."""
    if family not in ("mixed", "projections"):
        raise ValueError(f"unknown map family {family!r}")
    p, q = BiPoint(complex(p[0]), complex(p[1])), BiPoint(complex(q[0]), complex(q[1]))
    rng = np.random.default_rng(seed)
    tr = _Tracker(budget)

    def value(f):
        a, b = complex(f(*p)), complex(f(*q))
        if max(abs(a), abs(b)) >= 1 - EPS_BOUNDARY:
            return -math.inf
        return float(_pseudo_hyperbolic(a, b))

    def arg(f):
        return lambda: {"kind": "mobius_estimate", "map": hm.to_json(f), "p": p.to_json(), "q": q.to_json()}

    members = [hm.Project(1), hm.Project(2)]
    i = 0
    best_random = None
    best_random_val = -math.inf
    while not tr.exhausted and (family == "mixed" or i < len(members)):
        if i < len(members):
            f = members[i]
        elif i % 2:
            f = hm.Lift1(hm.random_mobius(rng), hm.Project(int(rng.integers(1, 3))))
        else:
            f = hm.random_scalar2(rng, int(rng.integers(1, 4)))
        i += 1
        v = tr.record(value(f), arg(f))
        if i > len(members) and v > best_random_val:
            best_random, best_random_val = f, v
        # spend the last third on refining the best random member
        if family == "mixed" and best_random is not None and tr.evals >= (2 * budget) // 3:
            theta = hm.tunable_parameters(best_random)
            if theta:
                def objective(x, f=best_random):
                    g = hm.with_parameters(f, x)
                    return tr.record(value(g), arg(g))
                pattern_search(objective, theta, 0.05, budget - tr.evals)
            best_random = None

    best = tr.best if tr.evals else 0.0
    res = ExtremalResult("mobius-estimate", best, tr.best_arg or {}, tr.evals, seed, tr.trace)
    closed = mobius_distance_bidisk(p, q)
    if best > closed + UPPER_SLACK:
        res.consistent = False
        log.error("Möbius distance estimate %.17g exceeds closed form %.17g", best, closed)
    return res


def estimate_mobius_distance(p, q, budget: int, seed: int, *, family: str = "mixed") -> float:
    """Lower bound on the Möbius distance of the bidisk from generated maps."""
    if budget <= 0 or (p[0] == q[0] and p[1] == q[1]):
        return 0.0
    return search_mobius_distance(p, q, budget, seed, family=family).best_value


def trace_csv(result: ExtremalResult) -> str:
    lines = ["iteration,best_value"]
    lines += [f"{i},{v!r}" for i, v in result.trace]
    return "\n".join(lines) + "\n"

