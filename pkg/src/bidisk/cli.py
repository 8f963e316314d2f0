"""Command-line interface.

Exit codes: 0 success or pass, 1 property failure, 2 usage or configuration
error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import extremal, metrics, pick, verify, witness
from . import holomaps as hm
from .errors import BidiskError, ConfigError
from .kernels import BiPoint, SzegoPower, complex_to_json, parse_kernel

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def parse_complex(text: str) -> complex:
    """Parse ``0.3``, ``0.4i``, ``0.3+0.4i`` or ``0.3-0.4j``."""
    s = text.strip().replace(" ", "").replace("i", "j")
    if s in ("j", "+j", "-j"):
        s = s.replace("j", "1j")
    try:
        return complex(s)
    except ValueError:
        raise UsageError(f"cannot parse complex number {text!r}") from None


def parse_point(text: str, arity: int):
    """A disk point (``a+bi`` or ``a,b``) or a bidisk point (``z1,z2``)."""
    parts = [p for p in text.split(",")]
    if arity == 1:
        if len(parts) == 1:
            return parse_complex(parts[0])
        if len(parts) == 2:
            re, im = parse_complex(parts[0]), parse_complex(parts[1])
            if re.imag or im.imag:
                raise UsageError(f"{text!r}: use a+bi or re,im for a disk point")
            return complex(re.real, im.real)
        raise UsageError(f"{text!r} is not a disk point")
    if len(parts) != 2:
        raise UsageError(f"{text!r} is not a bidisk point (expected z1,z2)")
    return BiPoint(parse_complex(parts[0]), parse_complex(parts[1]))


def _fmt(v: float) -> str:
    return format(v, ".15g")


def _dump(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True, allow_nan=False)


def _point_json(p):
    return p.to_json() if isinstance(p, BiPoint) else complex_to_json(p)


# ---------------------------------------------------------------------------
# dist


DIST_METRICS = ("pseudo-hyperbolic", "rho", "dk", "dk-tensor2", "mobius-bidisk", "caratheodory")


def cmd_dist(args) -> int:
    kernel = parse_kernel(args.kernel) if args.kernel else None
    m = args.metric
    if m == "dk":
        kernel = kernel or SzegoPower(1)
        arity = kernel.arity
    elif m == "dk-tensor2":
        kernel = kernel or SzegoPower(1)
        if not isinstance(kernel, SzegoPower):
            raise UsageError("dk-tensor2 takes the disk kernel being squared, e.g. szego^2")
        arity = 2
    elif m == "caratheodory":
        arity = 2 if args.domain == "bidisk" else 1
    else:
        arity = 1 if m == "pseudo-hyperbolic" else 2
    if len(args.points) != 2:
        raise UsageError(f"{m} needs exactly two points")
    x, y = (parse_point(s, arity) for s in args.points)
    if m == "pseudo-hyperbolic":
        value = metrics.pseudo_hyperbolic(x, y)
    elif m == "rho":
        value = metrics.rho(x, y)
    elif m == "dk":
        value = metrics.dk(kernel, tuple(x) if arity == 2 else x, tuple(y) if arity == 2 else y)
    elif m == "dk-tensor2":
        value = metrics.dk_tensor2(kernel, x, y)
    elif m == "mobius-bidisk":
        value = metrics.mobius_distance_bidisk(x, y)
    else:
        d = metrics.pseudo_hyperbolic(x, y) if arity == 1 else metrics.mobius_distance_bidisk(x, y)
        value = metrics.caratheodory(d)
    value = float(value)
    if args.json:
        out = {"metric": m, "inputs": [_point_json(x), _point_json(y)], "value": value}
        if kernel is not None:
            out["kernel"] = str(kernel)
        print(_dump(out))
    else:
        print(_fmt(value))
    return EXIT_OK


# ---------------------------------------------------------------------------
# pick


def cmd_pick(args) -> int:
    disk = args.x is not None or args.w is not None
    bidisk = any(v is not None for v in (args.p, args.q, args.zeta, args.lam))
    if disk == bidisk:
        raise UsageError("give either --x/--w (disk) or --p/--q/--zeta/--lambda (bidisk)")
    if disk:
        if args.x is None or args.w is None:
            raise UsageError("disk problems need both --x and --w")
        x1, x2 = (parse_point(s, 1) for s in args.x)
        w1, w2 = (parse_point(s, 1) for s in args.w)
        kernel = parse_kernel(args.kernel)
        if not isinstance(kernel, SzegoPower):
            raise UsageError("disk problems take a disk kernel")
        prob = pick.PickProblem1(x1, x2, w1, w2, kernel)
        return _pick_disk(prob, args)
    if None in (args.p, args.q, args.zeta, args.lam):
        raise UsageError("bidisk problems need --p, --q, --zeta and --lambda")
    prob = pick.PickProblem2(*(parse_point(s, 2) for s in (args.p, args.q, args.zeta, args.lam)))
    return _pick_bidisk(prob, args)


def _pick_disk(prob: pick.PickProblem1, args) -> int:
    m = pick.pick_matrix(prob)
    psd = pick.is_psd2(m)
    if prob.kernel == SzegoPower(1):
        status = "SOLVABLE" if psd else "UNSOLVABLE"
    else:
        status = "UNDECIDED"
    out = {"problem": "disk", "kernel": str(prob.kernel), "status": status, "psd": psd,
           "pick_matrix": m.to_json()}
    if args.construct and status == "SOLVABLE":
        phi = pick.interpolant_two_point_disk(prob)
        out["interpolant"] = hm.to_json(phi)
        out["residuals"] = [abs(complex(phi(prob.x1)) - prob.w1), abs(complex(phi(prob.x2)) - prob.w2)]
    if args.json:
        print(_dump(out))
        return EXIT_OK
    print(status)
    if status == "UNDECIDED":
        print(f"note: {prob.kernel} is not asserted to have the two-point Pick property")
    print(f"pick matrix: a11={_fmt(m.a11)} a12={_fmt(m.a12.real)}{m.a12.imag:+.15g}i a22={_fmt(m.a22)}")
    print(f"determinant: {_fmt(m.det)}")
    if "interpolant" in out:
        print("interpolant: " + json.dumps(out["interpolant"]))
        print("residuals: " + " ".join(f"{r:.3e}" for r in out["residuals"]))
    return EXIT_OK


def _pick_bidisk(prob: pick.PickProblem2, args) -> int:
    ok = pick.solvable_two_point_bidisk(prob)
    out = {
        "problem": "bidisk",
        "status": "SOLVABLE" if ok else "UNSOLVABLE",
        "node_mobius_distance": metrics.mobius_distance_bidisk(prob.p, prob.q),
        "target_mobius_distance": metrics.mobius_distance_bidisk(prob.zeta, prob.lam),
        "node_rho": metrics.rho(prob.p, prob.q),
        "target_rho": metrics.rho(prob.zeta, prob.lam),
    }
    if args.construct and ok:
        F = pick.interpolant_two_point_bidisk(prob)
        fp, fq = hm.eval2(F, prob.p), hm.eval2(F, prob.q)
        out["interpolant"] = hm.to_json(F)
        out["residuals"] = [max(abs(complex(fp[i]) - prob.zeta[i]) for i in range(2)),
                            max(abs(complex(fq[i]) - prob.lam[i]) for i in range(2))]
    if args.json:
        print(_dump(out))
        return EXIT_OK
    print(out["status"])
    print(f"node Möbius distance: {_fmt(out['node_mobius_distance'])}")
    print(f"target Möbius distance: {_fmt(out['target_mobius_distance'])}")
    if "interpolant" in out:
        print("interpolant: " + json.dumps(out["interpolant"]))
        print("residuals: " + " ".join(f"{r:.3e}" for r in out["residuals"]))
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify


def _load_config(args) -> verify.VerifyConfig:
    data = {}
    if args.config:
        try:
            data = json.loads(Path(args.config).read_text())
        except (OSError, ValueError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
    cfg = verify.VerifyConfig.from_dict(data)
    if args.seed is not None:
        cfg.master_seed = args.seed
    if args.trials is not None:
        cfg = cfg.with_trials(args.trials)
    if args.mutation:
        cfg.mutation = args.mutation
    return cfg.validate()


def cmd_verify(args) -> int:
    cfg = _load_config(args)
    out_path = Path(args.out) if args.out else None
    if out_path is not None and not out_path.parent.is_dir():
        raise ConfigError(f"output directory {out_path.parent} does not exist")
    results = verify.run_all(cfg)
    report = verify.build_report(cfg, results)
    text = _dump(report) + "\n"
    if out_path is None:
        sys.stdout.write(text)
    else:
        try:
            out_path.write_text(text)
        except OSError as exc:
            raise ConfigError(f"cannot write report: {exc}") from None
    for r in results:
        worst = "n/a" if r.worst_violation == float("-inf") else f"{r.worst_violation:.3e}"
        print(f"{'PASS' if r.passed else 'FAIL'} {r.name}: trials={r.trials} worst={worst}"
              f"{' (' + '; '.join(r.warnings) + ')' if r.warnings else ''}", file=sys.stderr)
    return EXIT_OK if report["passed"] else EXIT_FAIL


# ---------------------------------------------------------------------------
# extremal


def cmd_extremal(args) -> int:
    mode = args.mode
    if args.budget < 0:
        raise UsageError("budget must be >= 0")
    res = None
    if args.budget > 0:
        if mode == "seto-ratio":
            res = extremal.maximize_seto_ratio(args.n, args.budget, args.seed, family=args.family or "mixed")
        elif mode == "obstruction":
            res = extremal.find_rho_obstruction(args.budget, args.seed, structured=not args.uniform)
        else:
            if args.p is None or args.q is None:
                raise UsageError("mobius-estimate needs --p and --q")
            p, q = parse_point(args.p, 2), parse_point(args.q, 2)
            res = extremal.search_mobius_distance(p, q, args.budget, args.seed,
                                                  family=args.family or "mixed")
    if res is None:
        out = {"schema": verify.SCHEMA, "mode": mode, "found": False, "budget": args.budget, "seed": args.seed}
    else:
        out = {"schema": verify.SCHEMA, "budget": args.budget, **res.to_json(),
               "trace": [[i, v] for i, v in res.trace]}
    text = _dump(out) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if args.trace and res is not None:
        Path(args.trace).write_text(extremal.trace_csv(res))
    if res is not None and not res.consistent:
        return EXIT_FAIL
    return EXIT_OK


# ---------------------------------------------------------------------------
# replay


def cmd_replay(args) -> int:
    try:
        data = json.loads(Path(args.file).read_text())
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read {args.file}: {exc}") from None
    items = witness.collect(data)
    if not items:
        print("no witnesses to replay")
        return EXIT_OK
    ok = True
    for label, w, recorded in items:
        value = witness.replay(w)
        good = witness.matches(recorded, value, args.tol)
        ok &= good
        print(f"{'OK' if good else 'MISMATCH'} {label}: recorded={recorded!r} replayed={value!r}")
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bidisk", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    d = sub.add_parser("dist", help="evaluate a distance between two points")
    d.add_argument("metric", choices=DIST_METRICS)
    d.add_argument("points", nargs="+", help="disk points a+bi or re,im; bidisk points z1,z2")
    d.add_argument("--kernel", help="szego, szego^n, bergman or tensor(szego^n)")
    d.add_argument("--domain", choices=("disk", "bidisk"), default="disk",
                   help="point type for caratheodory")
    d.add_argument("--json", action="store_true")
    d.set_defaults(func=cmd_dist)

    p = sub.add_parser("pick", help="decide and solve a two-point interpolation problem")
    p.add_argument("--x", nargs=2, metavar="X", help="disk nodes")
    p.add_argument("--w", nargs=2, metavar="W", help="disk targets")
    p.add_argument("--kernel", default="szego")
    p.add_argument("--p", help="bidisk node p")
    p.add_argument("--q", help="bidisk node q")
    p.add_argument("--zeta", help="target for p")
    p.add_argument("--lambda", dest="lam", help="target for q")
    p.add_argument("--construct", action="store_true", help="emit an interpolant and its residuals")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_pick)

    v = sub.add_parser("verify", help="run the property-check suite")
    v.add_argument("--config", help="JSON config file")
    v.add_argument("--seed", type=int, help="master seed")
    v.add_argument("--trials", type=int, help="override every trial count")
    v.add_argument("--out", help="report path (default stdout)")
    v.add_argument("--mutation", choices=("tensor_sign_flip",), help=argparse.SUPPRESS)
    v.add_argument("--json", action="store_true", help="accepted for symmetry; reports are JSON")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("extremal", help="run an extremal search")
    e.add_argument("mode", choices=("seto-ratio", "obstruction", "mobius-estimate"))
    e.add_argument("--budget", type=int, default=10_000)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--n", type=int, default=1, help="kernel power for seto-ratio")
    e.add_argument("--family", help="map family: mixed/automorphisms/diagonal or mixed/projections")
    e.add_argument("--uniform", action="store_true", help="obstruction: uniform sampling only")
    e.add_argument("--p", help="bidisk point for mobius-estimate")
    e.add_argument("--q", help="bidisk point for mobius-estimate")
    e.add_argument("--trace", help="write the (iteration, best_value) CSV trace here")
    e.add_argument("--out", help="result path (default stdout)")
    e.add_argument("--json", action="store_true", help="accepted for symmetry; results are JSON")
    e.set_defaults(func=cmd_extremal)

    r = sub.add_parser("replay", help="re-evaluate witnesses from a report or search result")
    r.add_argument("file")
    r.add_argument("--tol", type=float, default=witness.REPLAY_TOL)
    r.set_defaults(func=cmd_replay)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, BidiskError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
