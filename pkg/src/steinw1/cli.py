"""Command-line front end.

Subcommands: ``catalog`` (family listing), ``weights`` (weight tables),
``bound`` (bound reports), ``build`` (converging discrete approximations),
``sweep`` (parameter-grid tables), ``oracle`` (standalone exact W1), and
``check`` (quick self-check subset). Everything is flag-driven and
deterministic; JSON output uses stable key order and CSV follows RFC 4180.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from steinw1 import bespoke, bounds, builder, catalog, discretes, factors, oracle, targets
from steinw1.errors import SteinW1Error


def _coerce(text):
    try:
        v = int(text)
        if str(v) == text:
            return v
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def _params(pairs):
    out = {}
    for item in pairs or []:
        if "=" not in item:
            raise SystemExit(f"bad --param {item!r}; expected key=value")
        k, v = item.split("=", 1)
        out[k] = _coerce(v)
    return out


def _emit(text, out_path):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def cmd_catalog(args):
    schema = catalog.case_schema()
    if args.family:
        schema = {args.family: schema[args.family]} if args.family in schema else {}
        if not schema:
            raise SystemExit(f"unknown family {args.family!r}")
    if args.json:
        _emit(json.dumps(schema, sort_keys=True, indent=2), args.out)
        return 0
    lines = []
    for name in sorted(schema):
        info = schema[name]
        params = ", ".join(f"{k}: {v}" for k, v in info["params"].items())
        lines.append(f"{name:20s} target={info['target']:22s} weight={info['weight']:12s} {params}")
    _emit("\n".join(lines), args.out)
    return 0


def cmd_weights(args):
    params = _params(args.param)
    result = catalog.run_case(args.family, params, tail_tol=args.tail_tol)
    if args.format == "json":
        _emit(bespoke.weights_to_json(result.law, result.weights), args.out)
    else:
        _emit(bespoke.weights_to_csv(result.law, result.weights), args.out)
    return 0


def cmd_bound(args):
    params = _params(args.param)
    result = catalog.run_case(args.family, params, with_oracle=args.with_oracle,
                              tail_tol=args.tail_tol)
    _emit(bounds.report_to_json(result.report), args.out)
    if args.check:
        rep = result.report
        ok = rep.bound >= 0 and (rep.oracle_w1 is None or rep.oracle_w1 <= rep.bound + 1e-7)
        ok = ok and not rep.diagnostics.get("approximate", False)
        return 0 if ok else 1
    return 0


def cmd_build(args):
    params = _params(args.param)
    target = targets.make_target(args.target, params)
    weight = targets.stein_kernel_weight(target)
    if args.ell is not None:
        delta, ell = builder.solve_ip_grid(target, ell=args.ell)
        a = target.support[0]
        grid = a + delta * np.arange(ell + 1)
        law = builder.build_discrete(target, weight, grid)
    else:
        if args.delta is None:
            raise SystemExit("pass --delta or --ell")
        delta = args.delta
        law = builder.build_discrete(
            target, weight, builder.UniformGrid(target.support[0], delta)
        )
    ws = bespoke.compute_weights(law, target, weight)
    fac = factors.closed_form_factors(target, "stein_kernel")
    report = bounds.wasserstein_bound(law, target, ws, fac)
    if args.with_oracle:
        report = report.with_oracle(oracle.exact_w1(law, target))
    doc = {
        "delta": delta,
        "report": json.loads(bounds.report_to_json(report)),
    }
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(discretes.law_to_json(law))
        doc["law_file"] = args.out
    _emit(json.dumps(doc, sort_keys=True), None)
    return 0


def _sweep_row(case, fixed, combo, with_oracle, tail_tol):
    t0 = time.perf_counter()
    params = dict(fixed)
    params.update(combo)
    result = catalog.run_case(case, params, with_oracle=with_oracle, tail_tol=tail_tol)
    rep = result.report
    runtime = time.perf_counter() - t0
    row = {f"param_{k}": v for k, v in params.items()}
    row["bound"] = rep.bound
    row["oracle"] = rep.oracle_w1 if rep.oracle_w1 is not None else ""
    row["ratio"] = rep.ratio if rep.ratio is not None else ""
    row["runtime_s"] = round(runtime, 6)
    return row


def cmd_sweep(args):
    with open(args.specfile, encoding="utf-8") as fh:
        spec = json.load(fh)
    case = spec.get("case") or spec["command"]
    fixed = spec.get("fixed", {})
    grid = spec.get("grid", {})
    with_oracle = bool(spec.get("with_oracle", False))
    tail_tol = float(spec.get("tail_tol", 1e-13))
    keys = sorted(grid)
    combos = [{}]
    for k in keys:
        combos = [dict(c, **{k: v}) for c in combos for v in grid[k]]
    jobs = max(1, args.jobs)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(
                lambda c: _sweep_row(case, fixed, c, with_oracle, tail_tol), combos
            ))
    else:
        rows = [_sweep_row(case, fixed, c, with_oracle, tail_tol) for c in combos]
    buf = io.StringIO()
    header = list(rows[0].keys()) if rows else []
    writer = csv.DictWriter(buf, fieldnames=header, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    _emit(buf.getvalue(), spec.get("output") or args.out)
    return 0


def cmd_oracle(args):
    if args.law:
        with open(args.law, encoding="utf-8") as fh:
            law = discretes.law_from_json(fh.read())
        target = targets.make_target(args.target, _params(args.tparam))
        value = oracle.exact_w1(law, target, tol=args.tol)
        _emit(json.dumps({"w1": value}, sort_keys=True), args.out)
    else:
        result = catalog.run_case(args.family, _params(args.param), with_oracle=True,
                                  tail_tol=args.tail_tol)
        _emit(json.dumps({
            "w1": result.report.oracle_w1,
            "bound": result.report.bound,
            "ratio": result.report.ratio,
        }, sort_keys=True), args.out)
    return 0


def cmd_check(args):
    from steinw1.checks import run_checks

    results = run_checks()
    failed = 0
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
        failed += 0 if ok else 1
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 1 if failed else 0


def build_parser():
    p = argparse.ArgumentParser(
        prog="steinw1",
        description="Certified W1 bounds between discrete laws and continuous targets",
    )
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("catalog", help="list families and parameter schemas")
    c.add_argument("--family")
    c.add_argument("--json", action="store_true")
    c.add_argument("--out")
    c.set_defaults(func=cmd_catalog)

    w = sub.add_parser("weights", help="weight table for a catalog case")
    w.add_argument("--family", required=True)
    w.add_argument("--param", "-p", action="append")
    w.add_argument("--format", choices=["csv", "json"], default="csv")
    w.add_argument("--tail-tol", type=float, default=1e-13)
    w.add_argument("--out")
    w.set_defaults(func=cmd_weights)

    b = sub.add_parser("bound", help="bound report for a catalog case")
    b.add_argument("--family", required=True)
    b.add_argument("--param", "-p", action="append")
    b.add_argument("--with-oracle", action="store_true")
    b.add_argument("--check", action="store_true",
                   help="exit nonzero unless the report passes its assertions")
    b.add_argument("--tail-tol", type=float, default=1e-13)
    b.add_argument("--out")
    b.set_defaults(func=cmd_bound)

    d = sub.add_parser("build", help="build a converging discrete approximation")
    d.add_argument("--target", required=True)
    d.add_argument("--param", "-p", action="append")
    d.add_argument("--delta", type=float)
    d.add_argument("--ell", type=int)
    d.add_argument("--with-oracle", action="store_true")
    d.add_argument("--out", help="write the law JSON here")
    d.set_defaults(func=cmd_build)

    s = sub.add_parser("sweep", help="parameter-grid sweep from a JSON spec")
    s.add_argument("specfile")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--out")
    s.set_defaults(func=cmd_sweep)

    o = sub.add_parser("oracle", help="standalone exact W1")
    o.add_argument("--family")
    o.add_argument("--param", "-p", action="append")
    o.add_argument("--law", help="law JSON file instead of a catalog case")
    o.add_argument("--target", help="target family for --law mode")
    o.add_argument("--tparam", action="append", help="target params for --law mode")
    o.add_argument("--tol", type=float, default=1e-8)
    o.add_argument("--tail-tol", type=float, default=1e-13)
    o.add_argument("--out")
    o.set_defaults(func=cmd_oracle)

    k = sub.add_parser("check", help="run the quick self-check subset")
    k.set_defaults(func=cmd_check)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SteinW1Error as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
