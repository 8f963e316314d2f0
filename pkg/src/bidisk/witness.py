"""Re-evaluation of serialized witnesses from verification reports and searches."""

from __future__ import annotations

import math

import numpy as np

from . import holomaps as hm
from .errors import MalformedTreeError
from .extremal import obstruction_margin, seto_ratio
from .kernels import SZEGO, BiPoint, complex_from_json
from .metrics import dk, mobius_distance_bidisk, pseudo_hyperbolic
from .verify import SQRT2, power_violation, sp_violation, tensor_power_distance

REPLAY_TOL = 1e-12


def _pts(w, key):
    return BiPoint.from_json(w[key])


def replay(w: dict) -> float:
    """Recompute the value a witness records."""
    kind = w.get("kind")
    if kind in ("seto", "mobius_contraction", "seto_ratio"):
        F = hm.from_json(w["map"])
        p, q = _pts(w, "p"), _pts(w, "q")
        if kind == "seto_ratio":
            return seto_ratio(F, p, q, int(w["n"]))
        fp, fq = hm.eval2_raw(F, p), hm.eval2_raw(F, q)
        if kind == "mobius_contraction":
            return mobius_distance_bidisk(fp, fq) - mobius_distance_bidisk(p, q)
        n, mut = int(w["n"]), w.get("mutation")
        return float(tensor_power_distance(fp, fq, n, mut) - SQRT2 * tensor_power_distance(p, q, n, mut))
    if kind in ("product_property", "mobius_estimate"):
        f = hm.from_json(w["map"])
        p, q = _pts(w, "p"), _pts(w, "q")
        d = pseudo_hyperbolic(complex(f(*p)), complex(f(*q)))
        return d - mobius_distance_bidisk(p, q) if kind == "product_property" else d
    if kind in ("disk_map_distance", "contractive_multiplier"):
        f = hm.from_json(w["map"])
        x, y = complex_from_json(w["x"]), complex_from_json(w["y"])
        return pseudo_hyperbolic(complex(f(x)), complex(f(y))) - dk(SZEGO, x, y)
    if kind == "power_lemma":
        x, y, x2, y2 = (complex_from_json(c) for c in w["points"])
        return float(power_violation(x, y, x2, y2, w["n_range"]))
    if kind == "sp_scalar":
        pts = [complex_from_json(c) for c in w["points"]]
        return float(sp_violation(*pts))
    if kind == "obstruction":
        return obstruction_margin(*(_pts(w, k) for k in ("zeta", "lambda", "z", "w")))
    raise MalformedTreeError(f"unknown witness kind {kind!r}")


def collect(data: dict) -> list[tuple[str, dict, float]]:
    """``(label, witness, recorded value)`` triples from a report, search result or bare witness."""
    if "checks" in data:
        return [(c["name"], c["witness"], c["witness"]["value"]) for c in data["checks"] if c.get("witness")]
    if "argument" in data:
        if not data.get("found", True) or not data["argument"]:
            return []
        return [(data.get("mode", "extremal"), data["argument"], data["best_value"])]
    if "kind" in data:
        return [(data["kind"], data, data["value"])]
    raise MalformedTreeError("no witness found in document")


def matches(recorded: float, value: float, tol: float = REPLAY_TOL) -> bool:
    if math.isinf(recorded) or math.isinf(value):
        return recorded == value
    return bool(np.abs(recorded - value) <= tol)
