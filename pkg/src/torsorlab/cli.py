"""Command-line front end.

Exit codes: 0 when every check passes, 1 on a violated identity, 2 on bad
input.  ``--json`` prints a single JSON document with the keys ``command``,
``args``, ``results``, ``seed``, ``version``, ``status`` and ``failure``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from .cohom import h1, h1_cyclic_oracle
from .cycles import descended_map, disconnected_descent, torsor_class
from .errors import IdentityViolation, PreconditionError, TorsorLabError, ValidationError
from .scenario import ParseError, build, parse_file
from .suite import class_record, run_pair, run_random, run_symmetric
from .torsor import TwistedModule

SEED_ENV = "TORSORLAB_SEED"
DEFAULT_SEED = 0

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _jsonable(x):
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    coords = getattr(x, "coords", None)
    if coords is not None:
        return [int(c) for c in coords]
    return str(x)


def _failure(exc, **extra):
    rec = {"identity": exc.identity, "details": _jsonable(exc.details)}
    rec.update(extra)
    return rec


def _load(path):
    try:
        sf = parse_file(path)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    return sf, build(sf)


def _need_model(built):
    if built.model is None:
        raise InputError("the file has no [scenario] section")
    return built.model


# ---------------------------------------------------------------------------
# commands; each returns (results, failure)


def cmd_h1(args):
    _, built = _load(args.file)
    if not built.modules:
        raise InputError("the file defines no [module]")
    name = args.module or next(iter(built.modules))
    if name not in built.modules:
        raise InputError(f"unknown module {name!r}")
    M = built.modules[name]
    res = {"module": name, "group_order": M.group.order, "invariant_factors": h1(M).invariant_factors}
    gen = M.group.cyclic_generator()
    if gen is not None:
        oracle = h1_cyclic_oracle(M, gen).invariant_factors
        res["cyclic_oracle"] = oracle
        if oracle != res["invariant_factors"]:
            raise IdentityViolation("cochain H^1 agrees with the cyclic oracle", module=name)
    return res, None


def cmd_class(args):
    _, built = _load(args.file)
    model = _need_model(built)
    c = torsor_class(model, args.basepoint)
    res = class_record(c)
    res["trivial"] = c.is_zero()
    res["basepoint"] = args.basepoint
    res["domain"] = list(c.domain)
    return res, None


def cmd_twist(args):
    _, built = _load(args.file)
    model = _need_model(built)
    c = torsor_class(model, args.basepoint)
    T = TwistedModule(c.representative)
    fixed = T.fixed_point()
    res = class_record(c)
    res["fixed_point"] = None if fixed is None else list(fixed.coords)
    res["trivial"] = fixed is not None
    if fixed is not None:
        for s in T.domain:
            if T.act(fixed, s) != fixed:
                raise IdentityViolation("fixed point of the twisted action", sigma=s)
    return res, None


def cmd_sym(args):
    _, built = _load(args.file)
    model = _need_model(built)
    if args.d < 1:
        raise InputError("--d must be at least 1")
    power, c = run_symmetric(model, args.d, args.basepoint)
    base = class_record(torsor_class(model, args.basepoint, verify=False))
    return {"d": args.d, "points": power.points.size, "class": class_record(c), "base_class": base}, None


def cmd_descend(args):
    _, built = _load(args.file)
    model = _need_model(built)
    D = disconnected_descent(model, args.basepoint)
    D.check_all()
    return {
        "components": model.components.size,
        "stabilizer": list(D.induced.subgroup),
        "coset_reps": list(D.induced.reps),
        "class": class_record(torsor_class(model, args.basepoint)),
    }, None


def _verify_one(seed, index):
    try:
        return run_random(seed, index), None
    except IdentityViolation as e:
        return None, _failure(e, scenario=index)


def cmd_verify(args, seed):
    if args.file:
        _, built = _load(args.file)
        model = _need_model(built)
        try:
            rec = run_pair(model, model)
            descended_map(model, args.basepoint).check_equivariance()
        except IdentityViolation as e:
            return {"scenarios": 1, "passed": 0}, _failure(e)
        return {"scenarios": 1, "passed": 1, "summary": rec}, None
    n = args.random
    if n is None or n < 0:
        raise InputError("verify needs a FILE or --random N")
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            outcomes = list(pool.map(_verify_one, [seed] * n, range(n), chunksize=8))
    else:
        outcomes = [_verify_one(seed, i) for i in range(n)]
    failures = [f for _, f in outcomes if f is not None]
    records = [r for r, _ in outcomes if r is not None]
    res = {
        "scenarios": n,
        "passed": len(records),
        "nontrivial_classes": sum(1 for r in records for c in r["classes"] if any(c["class"])),
    }
    if args.details:
        res["runs"] = records
    return res, (failures[0] if failures else None)


def cmd_lang(args):
    from .ellcurve import FiniteField, curve_group, lang_check, lang_sweep

    if args.sweep:
        rows = []
        bad = None
        for p, n, a, b, count, H in lang_sweep(primes=(args.p,), degrees=(args.n,)):
            rows.append([a, b, count])
            if not H.is_trivial and bad is None:
                bad = {"identity": "H^1(Frobenius, E) = 0", "details": {"p": p, "n": n, "a": a, "b": b}}
        return {"p": args.p, "n": args.n, "curves": len(rows), "all_trivial": bad is None, "counts": rows}, bad
    if args.a is None or args.b is None:
        raise InputError("lang needs --a and --b, or --sweep")
    E = curve_group(args.a, args.b, FiniteField(args.p, args.n))
    H = lang_check(E, args.m)
    res = {"p": args.p, "n": args.n, "a": args.a, "b": args.b, "points": E.order,
           "structure": E.structure(), "h1": H.invariant_factors}
    if not H.is_trivial:
        return res, {"identity": "H^1(Frobenius, E) = 0", "details": {}}
    return res, None


def cmd_parity(args):
    from .rationality import quadric_parity_argument

    v = quadric_parity_argument(args.d, args.drop_canonical)
    v.verify()
    res = {
        "d": args.d,
        "drop_canonical": args.drop_canonical,
        "verdict": "P forced zero" if v.forced else "P not forced zero",
        "certificates": [
            {"target": name, "vector": list(vec), "combination": list(cert.combination),
             "relations": [list(r) for r in cert.relations]}
            for name, vec, cert in v.steps
        ],
        "quotient": v.quotient_factors,
        "order_of_P": v.order_of_p,
    }
    return res, None


COMMANDS = {
    "h1": cmd_h1,
    "class": cmd_class,
    "twist": cmd_twist,
    "sym": cmd_sym,
    "descend": cmd_descend,
    "lang": cmd_lang,
    "parity": cmd_parity,
}


def build_parser():
    ap = argparse.ArgumentParser(prog="torsorlab", description="Torsor classes of Galois-equivariant cycle families.")
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("--json", action="store_true", help="print one JSON report")
    sub = ap.add_subparsers(dest="command", required=True)

    def with_file(name, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("file")
        p.add_argument("--basepoint", type=int, default=0)
        return p

    p = sub.add_parser("h1", help="H^1 of a module")
    p.add_argument("file")
    p.add_argument("--module")
    with_file("class", "torsor class of the scenario")
    with_file("twist", "look for a fixed point of the twisted action")
    with_file("sym", "symmetric power check").add_argument("--d", type=int, required=True)
    with_file("descend", "descent across components")
    p = sub.add_parser("verify", help="full check suite on a file or on random scenarios")
    p.add_argument("file", nargs="?")
    p.add_argument("--random", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--basepoint", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--details", action="store_true", help="include per-scenario records")
    p = sub.add_parser("lang", help="Frobenius cohomology of an elliptic curve")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, default=1, help="degree of the base field")
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--sweep", action="store_true")
    p = sub.add_parser("parity", help="parity argument for the quadric relations")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--drop-canonical", action="store_true")
    return ap


def _default_seed():
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"{SEED_ENV} must be an integer") from None


def run(argv):
    """Run one command; returns ``(exit_code, report_dict)``."""
    ap = build_parser()
    args = ap.parse_args(argv)
    echo = {k: v for k, v in sorted(vars(args).items()) if k not in ("command", "json")}
    report = {
        "command": args.command,
        "args": echo,
        "results": None,
        "seed": None,
        "version": __version__,
        "status": "pass",
        "failure": None,
    }
    try:
        if args.command == "verify":
            seed = args.seed if args.seed is not None else _default_seed()
            if args.file is None:
                report["seed"] = seed
            results, failure = cmd_verify(args, seed)
        else:
            results, failure = COMMANDS[args.command](args)
        report["results"] = _jsonable(results)
        if failure is not None:
            report["status"] = "fail"
            report["failure"] = _jsonable(failure)
            return EXIT_FAIL, report
        return EXIT_PASS, report
    except IdentityViolation as e:
        report["status"] = "fail"
        report["failure"] = _failure(e)
        return EXIT_FAIL, report
    except (ParseError, ValidationError, PreconditionError, InputError, TorsorLabError) as e:
        report["status"] = "error"
        rec = {"error": type(e).__name__, "message": str(e)}
        if isinstance(e, ParseError):
            rec.update(line=e.line, column=e.column)
        if isinstance(e, ValidationError):
            rec["invariant"] = e.invariant
        report["failure"] = rec
        return EXIT_INPUT, report


def render(report):
    """Human-readable form of a report."""
    lines = [f"{report['command']}: {report['status']}"]
    if report["seed"] is not None:
        lines.append(f"seed: {report['seed']}")

    def walk(prefix, x):
        if isinstance(x, dict):
            for k in sorted(x):
                walk(f"{prefix}{k}.", x[k])
        elif isinstance(x, list) and x and all(isinstance(v, dict) for v in x):
            for i, v in enumerate(x):
                walk(f"{prefix}[{i}].", v)
        else:
            lines.append(f"  {prefix.rstrip('.')}: {json.dumps(x)}")

    walk("", report["results"] or {})
    if report["failure"] is not None:
        walk("failure.", report["failure"])
    return "\n".join(lines)


def to_json(report):
    return json.dumps(report, sort_keys=True, indent=2)


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    json_mode = "--json" in argv
    try:
        code, report = run(argv)
    except InputError as e:  # raised before a report exists (e.g. bad seed env)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    print(to_json(report) if json_mode else render(report))
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
