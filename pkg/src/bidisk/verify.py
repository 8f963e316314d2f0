"""Seeded property checks for the distance inequalities on the disk and bidisk.

Each check draws random instances, evaluates a violation measure that must be
``<= tolerance`` (negative values mean slack), and returns a
:class:`PropertyCheck`.  Map-based checks draw one random map per block of
``pairs_per_map`` point pairs and evaluate the block in a single vectorized
call.
"""

from __future__ import annotations

import dataclasses
import datetime as _dt
import logging
import math
import zlib
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import holomaps as hm
from .errors import ConfigError
from .kernels import EPS_BOUNDARY, SZEGO, BiPoint, SzegoPower, complex_to_json
from .metrics import _pseudo_hyperbolic, dk, dk_power_closed, tensor_combine

log = logging.getLogger(__name__)

SQRT2 = math.sqrt(2.0)
RESAMPLE_BUDGET = 100
SCHEMA = 1


@dataclass
class PropertyCheck:
    name: str
    trials: int
    seed: int
    tolerance: float
    worst_violation: float
    violations: int = 0
    witness: Optional[dict] = None
    warnings: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def to_json(self) -> dict:
        out = dataclasses.asdict(self)
        out["passed"] = self.passed
        if not math.isfinite(out["worst_violation"]):
            out["worst_violation"] = None
        if out["witness"] is None:
            del out["witness"]
        return out


def derive_seed(master: int, name: str) -> int:
    """Stable 63-bit per-check seed from the master seed and the check name."""
    ss = np.random.SeedSequence([int(master) & 0xFFFFFFFFFFFFFFFF, zlib.crc32(name.encode())])
    return int(ss.generate_state(1, np.uint64)[0] >> np.uint64(1))


def _bp(p: BiPoint, i: int) -> list:
    return [complex_to_json(p[0][i]), complex_to_json(p[1][i])]


def _vacuous(name, seed, tol) -> PropertyCheck:
    return PropertyCheck(name, 0, seed, tol, -math.inf, warnings=["zero trials: vacuous pass"])


def _finish(name, trials, seed, tol, viol, make_witness, details=None, warnings=None,
            fail=None, score=None) -> PropertyCheck:
    """Reduce per-trial violations; ``fail``/``score`` override the default ``viol > tol``."""
    viol = np.asarray(viol, dtype=float)
    finite = np.isfinite(viol)
    worst = float(np.max(viol[finite])) if finite.any() else -math.inf
    if fail is None:
        fail = finite & (viol > tol)
    count = int(np.sum(fail))
    witness = None
    if count:
        score = viol if score is None else np.asarray(score, dtype=float)
        idx = int(np.argmax(np.where(fail, score, -np.inf)))
        witness = make_witness(idx)
        witness["value"] = float(viol[idx])
    return PropertyCheck(name, trials, seed, tol, worst, count, witness,
                         list(warnings or []), dict(details or {}))


# ---------------------------------------------------------------------------
# instance generation


def _draw_pairs(rng, k):
    return (BiPoint(hm.sample_disk(rng, k), hm.sample_disk(rng, k)),
            BiPoint(hm.sample_disk(rng, k), hm.sample_disk(rng, k)))


def _images(F, rng, k, eps=EPS_BOUNDARY):
    """Sample ``k`` bidisk pairs whose images under ``F`` stay off the circle."""
    p, q = _draw_pairs(rng, k)
    fp, fq = hm.eval2_raw(F, p), hm.eval2_raw(F, q)
    bad = hm.boundary_mask(fp, eps) | hm.boundary_mask(fq, eps)
    for _ in range(RESAMPLE_BUDGET):
        if not bad.any():
            break
        m = int(bad.sum())
        np_, nq = _draw_pairs(rng, m)
        for arr, new in ((p, np_), (q, nq)):
            arr[0][bad], arr[1][bad] = new[0], new[1]
        sub_p = BiPoint(p[0][bad], p[1][bad])
        sub_q = BiPoint(q[0][bad], q[1][bad])
        gp, gq = hm.eval2_raw(F, sub_p), hm.eval2_raw(F, sub_q)
        for arr, new in ((fp, gp), (fq, gq)):
            arr[0][bad], arr[1][bad] = new[0], new[1]
        bad = hm.boundary_mask(fp, eps) | hm.boundary_mask(fq, eps)
    return p, q, fp, fq, ~bad


def _map_blocks(rng, trials, pairs_per_map, max_depth):
    """Yield ``(F, map_seed, depth, block_size)`` covering ``trials`` trials."""
    done = 0
    while done < trials:
        k = min(pairs_per_map, trials - done)
        map_seed = int(rng.integers(0, 2**63))
        depth = int(rng.integers(0, max_depth + 1))
        yield hm.random_selfmap_bidisk(map_seed, depth), map_seed, depth, k
        done += k


def _bidisk_map_check(name, trials, seed, tol, pairs_per_map, max_depth, violation_fn, kind, extra=None):
    if trials == 0:
        return _vacuous(name, seed, tol)
    rng = np.random.default_rng(seed)
    chunks, records = [], []
    aborted = 0
    for F, _, _, k in _map_blocks(rng, trials, pairs_per_map, max_depth):
        p, q, fp, fq, ok = _images(F, rng, k)
        v = violation_fn(p, q, fp, fq)
        v = np.where(ok, v, np.nan)
        aborted += int((~ok).sum())
        chunks.append(v)
        records.append((F, p, q))
    viol = np.concatenate(chunks)
    offsets = np.cumsum([0] + [len(c) for c in chunks])

    def witness(idx):
        b = int(np.searchsorted(offsets, idx, side="right") - 1)
        F, p, q = records[b]
        i = idx - offsets[b]
        return {"kind": kind, "map": hm.to_json(F), "p": _bp(p, i), "q": _bp(q, i), **(extra or {})}

    warnings = [f"{aborted} trials aborted after boundary resampling"] if aborted else []
    return _finish(name, trials, seed, tol, viol, witness, {"aborted": aborted}, warnings)


# ---------------------------------------------------------------------------
# distance routes used by the checks


def tensor_power_distance(p, q, n: int, mutation: Optional[str] = None):
    """Distance of the tensor square of the ``n``-th Szegő power, vectorized."""
    d1 = _pseudo_hyperbolic(p[0], q[0])
    d2 = _pseudo_hyperbolic(p[1], q[1])
    if n > 1:
        d1, d2 = dk_power_closed(d1, n), dk_power_closed(d2, n)
    if mutation == "tensor_sign_flip":
        a, b = np.asarray(d1) ** 2, np.asarray(d2) ** 2
        return np.sqrt(a + b + a * b)
    if mutation is not None:
        raise ConfigError(f"unknown mutation {mutation!r}")
    return tensor_combine(d1, d2)


def _mobius_bidisk(p, q):
    return np.maximum(_pseudo_hyperbolic(p[0], q[0]), _pseudo_hyperbolic(p[1], q[1]))


# ---------------------------------------------------------------------------
# checks


def check_seto(n: int, trials: int, seed: int, tol: float = 1e-9, *, pairs_per_map: int = 10,
               max_depth: int = 3, mutation: Optional[str] = None) -> PropertyCheck:
    """Image distance <= sqrt(2) * preimage distance for the tensor-square power kernel."""
    if not 1 <= n <= 8:
        raise ConfigError(f"kernel power must be in [1, 8], got {n}")
    ratios = []

    def violation(p, q, fp, fq):
        lhs = tensor_power_distance(fp, fq, n, mutation)
        rhs = tensor_power_distance(p, q, n, mutation)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratios.append(np.where(rhs > 0, lhs / rhs, np.nan))
        return lhs - SQRT2 * rhs

    chk = _bidisk_map_check(f"seto_n{n}", trials, seed, tol, pairs_per_map, max_depth, violation,
                            "seto", {"n": n, "mutation": mutation})
    if ratios:
        r = np.concatenate(ratios)
        chk.details["max_ratio"] = float(np.nanmax(r)) if np.isfinite(r).any() else None
    return chk


def check_mobius_contraction(trials: int, seed: int, tol: float = 1e-9, *, pairs_per_map: int = 10,
                             max_depth: int = 3) -> PropertyCheck:
    """Möbius distance on the bidisk never grows under holomorphic self-maps."""
    def violation(p, q, fp, fq):
        return _mobius_bidisk(fp, fq) - _mobius_bidisk(p, q)

    return _bidisk_map_check("mobius_contraction", trials, seed, tol, pairs_per_map, max_depth,
                             violation, "mobius_contraction")


def _scalar_family(rng, size, max_depth=3):
    fam = [hm.Project(1), hm.Project(2)][:size]
    while len(fam) < size:
        fam.append(hm.random_scalar2(rng, int(rng.integers(1, max_depth + 1))))
    return fam


def check_product_property(trials: int, seed: int, tol: float = 1e-9, family_budget: int = 1000,
                           attain_tol: float = 1e-12) -> PropertyCheck:
    """Supremum of pulled-back disk distances over scalar maps equals the coordinate max."""
    name = "product_property"
    if trials == 0:
        return _vacuous(name, seed, tol)
    rng = np.random.default_rng(seed)
    fam = _scalar_family(rng, max(family_budget, 2))
    p, q = _draw_pairs(rng, trials)
    best = np.full(trials, -np.inf)
    arg = np.zeros(trials, dtype=int)
    for idx, f in enumerate(fam):
        a, b = f(p[0], p[1]), f(q[0], q[1])
        ok = (np.abs(a) < 1 - EPS_BOUNDARY) & (np.abs(b) < 1 - EPS_BOUNDARY)
        d = np.where(ok, _pseudo_hyperbolic(a, b), -np.inf)
        better = d > best
        best[better], arg[better] = d[better], idx
    closed = _mobius_bidisk(p, q)
    exceed = best - closed
    gap = closed - best
    fail = (exceed > tol) | (gap > attain_tol)

    def witness(i):
        return {"kind": "product_property", "map": hm.to_json(fam[arg[i]]), "p": _bp(p, i), "q": _bp(q, i)}

    return _finish(name, trials, seed, tol, exceed, witness,
                   {"family_size": len(fam), "max_exceedance": float(np.max(exceed)),
                    "max_attainment_gap": float(np.max(gap)), "attain_tolerance": attain_tol},
                   fail=fail, score=np.maximum(exceed / tol, gap / attain_tol))


def check_dx_equals_dk(trials: int, seed: int, tol: float = 1e-9, family_budget: int = 200,
                       attain_tol: float = 1e-12) -> PropertyCheck:
    """On the disk the supremum over self-maps equals the Szegő kernel distance."""
    name = "dx_equals_dk"
    if trials == 0:
        return _vacuous(name, seed, tol)
    rng = np.random.default_rng(seed)
    fam = [hm.random_holo1(rng, int(rng.integers(0, 4))) for _ in range(family_budget)]
    x, y = hm.sample_disk(rng, trials), hm.sample_disk(rng, trials)
    # per-pair member: the automorphism sending x to 0
    best = _pseudo_hyperbolic(0j, hm.mobius(x, 0.0, y))
    arg = np.full(trials, -1)
    for idx, f in enumerate(fam):
        a, b = f(x), f(y)
        ok = (np.abs(a) < 1 - EPS_BOUNDARY) & (np.abs(b) < 1 - EPS_BOUNDARY)
        d = np.where(ok, _pseudo_hyperbolic(a, b), -np.inf)
        better = d > best
        best[better], arg[better] = d[better], idx
    target = dk(SZEGO, x, y)
    exceed = best - target
    gap = target - best
    fail = (exceed > tol) | (gap > attain_tol)

    def witness(i):
        f = fam[arg[i]] if arg[i] >= 0 else hm.MobiusAuto(x[i])
        return {"kind": "disk_map_distance", "map": hm.to_json(f),
                "x": complex_to_json(x[i]), "y": complex_to_json(y[i])}

    return _finish(name, trials, seed, tol, exceed, witness,
                   {"family_size": family_budget + 1, "max_exceedance": float(np.max(exceed)),
                    "max_attainment_gap": float(np.max(gap)), "attain_tolerance": attain_tol},
                   fail=fail, score=np.maximum(exceed / tol, gap / attain_tol))


def check_contractive_multiplier(trials: int, seed: int, tol: float = 1e-9, *,
                                 pairs_per_map: int = 10, max_depth: int = 3) -> PropertyCheck:
    """Self-maps of the disk contract the Szegő kernel distance."""
    name = "contractive_multiplier"
    if trials == 0:
        return _vacuous(name, seed, tol)
    rng = np.random.default_rng(seed)
    chunks, records = [], []
    aborted = 0
    done = 0
    while done < trials:
        k = min(pairs_per_map, trials - done)
        phi = hm.random_holo1(rng, int(rng.integers(0, max_depth + 1)))
        x, y = hm.sample_disk(rng, k), hm.sample_disk(rng, k)
        for _ in range(RESAMPLE_BUDGET):
            bad = (np.abs(phi(x)) >= 1 - EPS_BOUNDARY) | (np.abs(phi(y)) >= 1 - EPS_BOUNDARY)
            if not bad.any():
                break
            m = int(bad.sum())
            x[bad], y[bad] = hm.sample_disk(rng, m), hm.sample_disk(rng, m)
        fx, fy = phi(x), phi(y)
        ok = (np.abs(fx) < 1 - EPS_BOUNDARY) & (np.abs(fy) < 1 - EPS_BOUNDARY)
        aborted += int((~ok).sum())
        v = _pseudo_hyperbolic(fx, fy) - dk(SZEGO, x, y)
        chunks.append(np.where(ok, v, np.nan))
        records.append((phi, x, y))
        done += k
    viol = np.concatenate(chunks)
    offsets = np.cumsum([0] + [len(c) for c in chunks])

    def witness(idx):
        b = int(np.searchsorted(offsets, idx, side="right") - 1)
        phi, x, y = records[b]
        i = idx - offsets[b]
        return {"kind": "contractive_multiplier", "map": hm.to_json(phi),
                "x": complex_to_json(x[i]), "y": complex_to_json(y[i])}

    warnings = [f"{aborted} trials aborted after boundary resampling"] if aborted else []
    return _finish(name, trials, seed, tol, viol, witness, {"aborted": aborted}, warnings)


def check_power_lemma(trials: int, seed: int, tol: float = 1e-9, n_range=range(2, 7)) -> PropertyCheck:
    """Kernel powers preserve the ordering of distances.

    Quadruples whose base distances lie within ``tol`` of each other are
    skipped.  The violation is the amount by which a power distance moves
    against the base ordering, maximized over both the closed form and the
    raw power-kernel route; saturated ties score zero.
    """
    name = "power_lemma"
    if trials == 0:
        return _vacuous(name, seed, tol)
    rng = np.random.default_rng(seed)
    x, y, x2, y2 = (hm.sample_disk(rng, trials) for _ in range(4))
    a = dk(SZEGO, x, y)
    a2 = dk(SZEGO, x2, y2)
    keep = np.abs(a2 - a) > tol
    viol = np.where(keep, power_violation(x, y, x2, y2, n_range), np.nan)

    def witness(i):
        return {"kind": "power_lemma", "n_range": list(n_range),
                "points": [complex_to_json(v[i]) for v in (x, y, x2, y2)]}

    skipped = int((~keep).sum())
    return _finish(name, trials, seed, tol, viol, witness, {"skipped_near_ties": skipped})


def power_violation(x, y, x2, y2, n_range):
    """Largest move of a power distance against the base distance ordering."""
    a, a2 = dk(SZEGO, x, y), dk(SZEGO, x2, y2)
    s = np.sign(a2 - a)
    viol = np.full(np.shape(a), -np.inf)
    for n in n_range:
        closed = s * (dk_power_closed(a, n) - dk_power_closed(a2, n))
        raw = s * (dk(SzegoPower(n), x, y) - dk(SzegoPower(n), x2, y2))
        viol = np.maximum(viol, np.maximum(closed, raw))
    return viol


def check_sp_scalar(trials: int, seed: int, tol: float = 1e-9, batch: int = 1 << 18) -> PropertyCheck:
    """Scalar inequality behind the sqrt(2) bound, on filtered quadruples."""
    name = "sp_scalar"
    if trials == 0:
        return _vacuous(name, seed, tol)
    rng = np.random.default_rng(seed)
    got = 0
    chunks = []
    while got < trials:
        zeta, lam, z, w = (hm.sample_disk(rng, batch) for _ in range(4))
        keep = np.maximum(np.abs(zeta), np.abs(lam)) <= np.maximum(np.abs(z), np.abs(w))
        quad = np.stack([zeta[keep], lam[keep], z[keep], w[keep]])[:, : trials - got]
        chunks.append(quad)
        got += quad.shape[1]
    zeta, lam, z, w = np.concatenate(chunks, axis=1)
    viol = sp_violation(zeta, lam, z, w)

    def witness(i):
        return {"kind": "sp_scalar", "points": [complex_to_json(v[i]) for v in (zeta, lam, z, w)]}

    return _finish(name, trials, seed, tol, viol, witness)


def sp_violation(zeta, lam, z, w):
    lhs = tensor_combine(np.abs(zeta), np.abs(lam))
    rhs = tensor_combine(np.abs(z), np.abs(w))
    return lhs - SQRT2 * rhs


# ---------------------------------------------------------------------------
# suite


@dataclass
class VerifyConfig:
    master_seed: int = 0
    seto_n: tuple = (1, 2, 3)
    seto_trials: int = 100_000
    mobius_trials: int = 100_000
    product_trials: int = 1_000
    product_family: int = 1_000
    dx_trials: int = 10_000
    dx_family: int = 200
    multiplier_trials: int = 100_000
    power_trials: int = 100_000
    power_n: tuple = (2, 3, 4, 5, 6)
    sp_trials: int = 1_000_000
    tol: float = 1e-9
    attain_tol: float = 1e-12
    pairs_per_map: int = 10
    max_depth: int = 3
    mutation: Optional[str] = None

    COUNTS = ("seto_trials", "mobius_trials", "product_trials", "product_family", "dx_trials",
              "dx_family", "multiplier_trials", "power_trials", "sp_trials")

    def validate(self) -> "VerifyConfig":
        for name in self.COUNTS:
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or isinstance(v, bool) or v < 0:
                raise ConfigError(f"{name} must be a non-negative integer, got {v!r}")
        for name in ("tol", "attain_tol"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or not v > 0 or not math.isfinite(v):
                raise ConfigError(f"{name} must be positive, got {v!r}")
        for n in tuple(self.seto_n) + tuple(self.power_n):
            if not isinstance(n, (int, np.integer)) or not 1 <= n <= 8:
                raise ConfigError(f"kernel powers must lie in [1, 8], got {n!r}")
        if self.pairs_per_map < 1:
            raise ConfigError("pairs_per_map must be >= 1")
        if not 0 <= self.max_depth <= 4:
            raise ConfigError("max_depth must be in [0, 4]")
        if self.mutation not in (None, "tensor_sign_flip"):
            raise ConfigError(f"unknown mutation {self.mutation!r}")
        return self

    def with_trials(self, trials: int) -> "VerifyConfig":
        """Copy with every trial count (not family sizes) set to ``trials``."""
        changes = {k: trials for k in self.COUNTS if k.endswith("_trials")}
        return dataclasses.replace(self, **changes)

    @classmethod
    def from_dict(cls, data: dict) -> "VerifyConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        data = dict(data)
        for k in ("seto_n", "power_n"):
            if k in data:
                data[k] = tuple(data[k])
        return cls(**data).validate()

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["seto_n"], d["power_n"] = list(self.seto_n), list(self.power_n)
        return d


def run_all(config: VerifyConfig) -> list[PropertyCheck]:
    """Run every check with seeds derived from ``config.master_seed``."""
    cfg = config.validate()
    seed = lambda name: derive_seed(cfg.master_seed, name)  # noqa: E731
    kw = dict(pairs_per_map=cfg.pairs_per_map, max_depth=cfg.max_depth)
    checks: list[Callable[[], PropertyCheck]] = []
    for n in cfg.seto_n:
        checks.append(lambda n=n: check_seto(n, cfg.seto_trials, seed(f"seto_n{n}"), cfg.tol,
                                             mutation=cfg.mutation, **kw))
    checks += [
        lambda: check_mobius_contraction(cfg.mobius_trials, seed("mobius_contraction"), cfg.tol, **kw),
        lambda: check_product_property(cfg.product_trials, seed("product_property"), cfg.tol,
                                       cfg.product_family, cfg.attain_tol),
        lambda: check_dx_equals_dk(cfg.dx_trials, seed("dx_equals_dk"), cfg.tol, cfg.dx_family,
                                   cfg.attain_tol),
        lambda: check_contractive_multiplier(cfg.multiplier_trials, seed("contractive_multiplier"),
                                             cfg.tol, **kw),
        lambda: check_power_lemma(cfg.power_trials, seed("power_lemma"), cfg.tol, cfg.power_n),
        lambda: check_sp_scalar(cfg.sp_trials, seed("sp_scalar"), cfg.tol),
    ]
    results = []
    for run in checks:
        res = run()
        log.info("%s: %s (worst %.3e)", res.name, "pass" if res.passed else "FAIL", res.worst_violation)
        results.append(res)
    return results


def build_report(config: VerifyConfig, results: list[PropertyCheck]) -> dict:
    warnings = [f"{r.name}: {w}" for r in results for w in r.warnings]
    return {
        "schema": SCHEMA,
        "generated_at": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        "config": config.to_dict(),
        "passed": all(r.passed for r in results),
        "warnings": warnings,
        "checks": [r.to_json() for r in results],
    }
