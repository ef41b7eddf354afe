"""Command-line harness tying the packers and the certifier together.

Subcommands:

  dump-params   print the built-in parameter table as JSON
  gen           write a deterministic instance file
  pack1d        run the 1D Harmonic or Super-Harmonic packer on an instance
  pack2d        run the 2D slice packer (one orientation or the average)
  weights       print the [case x type] weight table as CSV
  bound         compute the pair certificate and the overall ratio bound
  verify        run the built-in self-checks

Exit codes: 0 success, 1 usage error, 2 validation failure.
Reports are byte-stable for a fixed invocation; wall-clock timing is only
included with --timing.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from . import boundcert, generators, params, weighting
from .harmonic import HarmonicPacker
from .pack2d import TensorRun, tensor_cost, validate_geometry
from .superharmonic import ShState
from .weighting import WeightFunctionSet, bound_check

USAGE_ERROR = 1
VALIDATION_ERROR = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_ERROR)


def _emit(data, fmt: str, stream=None):
    stream = stream or sys.stdout
    if fmt == "json":
        json.dump(data, stream, indent=2, sort_keys=True, default=str)
        stream.write("\n")
    else:  # csv: dict of scalars -> key,value rows; list of dicts -> table
        if isinstance(data, dict):
            for k in sorted(data):
                stream.write(f"{k},{data[k]}\n")
        else:
            cols = list(data[0]) if data else []
            stream.write(",".join(cols) + "\n")
            for row in data:
                stream.write(",".join(str(row[c]) for c in cols) + "\n")


def _instance_from_args(args, dims: int) -> generators.Instance:
    if args.input:
        spec = generators.InstanceSpec(kind="file", dims=dims,
                                       params={"path": args.input})
    else:
        p = {}
        if args.kind == "tiled-known-opt":
            p["bins"] = args.bins
        spec = generators.InstanceSpec(kind=args.kind, n=args.n,
                                       seed=args.seed, dims=dims, params=p)
    return generators.generate(spec)


def _add_instance_args(sub, dims: int):
    sub.add_argument("--input", help="instance file (overrides --kind)")
    sub.add_argument("--kind", default="uniform",
                     choices=["uniform", "harmonic-adversarial", "tiled-known-opt"])
    sub.add_argument("--n", type=int, default=1000)
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--bins", type=int, default=10,
                     help="bins for tiled-known-opt")


def _report_common(args, inst, cost, lower_bound, extra: dict) -> dict:
    elapsed = extra.pop("_elapsed", None)
    report = {
        "instance": f"{inst.spec.kind}/n={len(inst.items)}/seed={inst.spec.seed}",
        "cost": str(cost),
        "lower_bound": str(lower_bound),
        "ratio": str(Fraction(cost) / lower_bound) if lower_bound else "",
        "wall_time_s": round(elapsed, 3) if args.timing else None,
    }
    report.update(extra)
    return report


def cmd_dump_params(args) -> int:
    table = params.builtin_shplus()
    sys.stdout.write(table.dumps() + "\n")
    return 0


def cmd_gen(args) -> int:
    spec = generators.InstanceSpec(
        kind=args.kind, n=args.n, seed=args.seed, dims=args.dims,
        params={"bins": args.bins} if args.kind == "tiled-known-opt" else {})
    inst = generators.generate(spec)
    out = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    try:
        for it in inst.items:
            if args.dims == 1:
                out.write(f"{float(it):.9f}\n")
            else:
                out.write(f"{float(it.w):.9f} {float(it.h):.9f}\n")
    finally:
        if args.out:
            out.close()
    return 0


def cmd_pack1d(args) -> int:
    inst = _instance_from_args(args, dims=1)
    t0 = time.perf_counter()
    table = params.builtin_shplus()
    total = sum(inst.items, Fraction(0))
    lb = inst.known_opt if inst.known_opt else -(-total.numerator // total.denominator)
    if args.algorithm == "harmonic":
        packer = HarmonicPacker(args.k)
        for s in inst.items:
            packer.insert(s)
        cost = packer.cost
        slack = packer.weight_slack()
        extra = {"algorithm": f"harmonic({args.k})",
                 "weight_slack": str(slack), "_elapsed": time.perf_counter() - t0}
        failures = [] if slack <= args.k else [f"weight slack {slack} > {args.k}"]
    else:
        st = ShState(table)
        for s in inst.items:
            st.insert(s)
        rep = bound_check(st)
        extra = {"algorithm": "sh+", "final_case": rep.case_id,
                 "weight_slack": str(rep.slack), "_elapsed": time.perf_counter() - t0}
        failures = []
        if args.verify:
            failures += st.check_feasibility()
            if any(st.e[i] != int(table.alpha[i] * st.s[i])
                   for i in range(1, table.k + 1)):
                failures.append("red-count law broken")
            if rep.slack > weighting.slack_allowance(table):
                failures.append(f"cost bound slack {rep.slack} over allowance")
        if args.trace_out:
            st2 = ShState(table, keep_trace=True)
            for s in inst.items:
                st2.insert(s)
            with open(args.trace_out, "w", encoding="utf-8") as fh:
                fh.write("item_index,size,type,color,group_before,"
                         "group_after,bin_id,opened\n")
                for tr in st2.trace:
                    fh.write(tr.csv_row() + "\n")
        cost = st.cost
    report = _report_common(args, inst, cost, lb, extra)
    _emit(report, args.format)
    if failures:
        for f in failures:
            print(f"validation: {f}", file=sys.stderr)
        return VALIDATION_ERROR
    return 0


def cmd_pack2d(args) -> int:
    inst = _instance_from_args(args, dims=2)
    table = params.builtin_shplus()
    wset = WeightFunctionSet(table)
    delta = params.parse_rational(args.delta)
    t0 = time.perf_counter()
    area = sum((it.w * it.h for it in inst.items), Fraction(0))
    lb = inst.known_opt if inst.known_opt else max(
        1, -(-area.numerator // area.denominator)) if inst.items else 1
    failures = []
    if args.orientation == "tensor-avg":
        tc, hxb, bxh = tensor_cost(inst.items, table, delta,
                                   keep_geometry=args.verify)
        cost = tc.avg
        runs = [hxb, bxh]
    else:
        run = TensorRun(table, args.orientation, delta, keep_geometry=True)
        items = inst.items if args.orientation == "hxb" else \
            [it.transposed for it in inst.items]
        for it in items:
            run.insert(it)
        cost = run.cost
        runs = [run]
    rows = []
    for run in runs:
        rows.append({"orientation": run.orientation, "bins": run.cost,
                     "slices": len(run.slices),
                     "weight_bound": f"{float(run.max_weight_bound(wset)):.6f}"})
        if args.verify and run.keep_geometry:
            failures += validate_geometry(run)
    if args.format == "csv":
        _emit(rows, "csv")
    else:
        extra = {"algorithm": args.orientation, "runs": rows,
                 "_elapsed": time.perf_counter() - t0}
        report = _report_common(args, inst, cost, lb, extra)
        _emit(report, "json")
    if failures:
        for f in failures[:20]:
            print(f"validation: {f}", file=sys.stderr)
        return VALIDATION_ERROR
    return 0


def cmd_weights(args) -> int:
    table = params.builtin_shplus()
    wset = WeightFunctionSet(table)
    rows = []
    for i in range(1, table.k + 1):
        row = {"type": i, "t": str(table.t[i])}
        for c in range(1, wset.num_cases + 1):
            row[f"case{c}"] = str(wset.values[c][i])
        rows.append(row)
    _emit(rows, "csv")
    return 0


def _load_lambda(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    table = {}
    if isinstance(raw, list):  # 7x7 nested array
        for i, row in enumerate(raw, start=1):
            for j, lam in enumerate(row, start=1):
                table[(i, j)] = params.parse_rational(lam)
    else:  # {"i,j": value}
        for key, lam in raw.items():
            i, j = (int(x) for x in key.split(","))
            table[(i, j)] = params.parse_rational(lam)
    return table


def cmd_bound(args) -> int:
    table = params.builtin_shplus()
    wset = WeightFunctionSet(table)
    lam = _load_lambda(args.lambda_file) if args.lambda_file else None
    cert = boundcert.ratio_certificate(
        wset, lam_table=lam, mode=args.mode,
        include_cuts=not args.no_cuts,
        delta=args.delta)
    retained_pairs = {orient for orient, _ in cert.retained.values()}
    rows = []
    for (i, j), e in sorted(cert.entries.items()):
        rows.append({
            "i": i, "j": j, "lambda": str(e.lam),
            "Pf": f"{float(boundcert.round6(e.pf)):.6f}",
            "Pg": f"{float(boundcert.round6(e.pg)):.6f}",
            "product": f"{float(boundcert.round6(e.product)):.6f}",
            "retained": int((i, j) in retained_pairs),
        })
    _emit(rows, "csv")
    bound = cert.bound_with_delta
    print(f"# mode={cert.mode} cuts={'off' if args.no_cuts else 'on'} "
          f"overall_bound={float(bound):.6f}")
    if args.witness:
        wit = {f"{i},{j}": {"Pf_pattern": e.pf_pattern, "Pg_pattern": e.pg_pattern}
               for (i, j), e in sorted(cert.entries.items())}
        with open(args.witness, "w", encoding="utf-8") as fh:
            json.dump(wit, fh, indent=2, sort_keys=True)
    return 0


def cmd_verify(args) -> int:
    """Compact self-check battery; nonzero exit on any failure."""
    import random

    failures = []
    table = params.builtin_shplus()
    bad = params.validate(table)
    if bad:
        failures += [f"params: {b}" for b in bad]
    wset = WeightFunctionSet(table)

    rng = random.Random(20240808)
    st = ShState(table)
    for _ in range(4000):
        st.insert(Fraction(rng.randint(1, 10 ** 6), 10 ** 6))
    if any(st.e[i] != int(table.alpha[i] * st.s[i]) for i in range(1, table.k + 1)):
        failures.append("sh: red-count law broken")
    failures += [f"sh: {b}" for b in st.check_feasibility()]
    rep = bound_check(st, wset)
    if rep.slack > weighting.slack_allowance(table):
        failures.append(f"sh: bound slack {float(rep.slack):.2f} over allowance")

    from .pack2d import Item2D
    items = [Item2D(Fraction(rng.randint(1, 10 ** 6), 10 ** 6),
                    Fraction(rng.randint(1, 10 ** 6), 10 ** 6)) for _ in range(500)]
    _, hxb, bxh = tensor_cost(items, table, keep_geometry=True)
    failures += [f"2d: {v}" for v in validate_geometry(hxb)[:5]]
    failures += [f"2d: {v}" for v in validate_geometry(bxh)[:5]]

    model12 = boundcert.shplus_pattern_model(table, include_cuts=False, num_types=12)
    for trial in range(5):
        rnd = random.Random(trial)
        fn = boundcert.PiecewiseFn(
            values=(None, *(Fraction(rnd.randint(0, 2000), 1000) for _ in range(12))),
            tail_slope=Fraction(38, 37))
        v1, _ = boundcert.pattern_max(fn, model12)
        v2, _ = boundcert.brute_force_max(fn, model12)
        if v1 != v2:
            failures.append(f"solver: mismatch vs enumeration on trial {trial}")

    for line in failures:
        print(f"FAIL {line}", file=sys.stderr)
    print(f"self-check: {'FAIL' if failures else 'OK'} "
          f"({len(failures)} failure(s))")
    return VALIDATION_ERROR if failures else 0


def main(argv=None) -> int:
    parser = _Parser(prog="harmonicpack",
                     description="Harmonic-class online bin packing tools")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dump-params", help="print the built-in table as JSON")
    p.set_defaults(func=cmd_dump_params)

    p = sub.add_parser("gen", help="write a deterministic instance file")
    p.add_argument("--kind", default="uniform",
                   choices=["uniform", "harmonic-adversarial", "tiled-known-opt"])
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dims", type=int, default=1, choices=[1, 2])
    p.add_argument("--bins", type=int, default=10)
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("pack1d", help="run a 1D packer")
    p.add_argument("--algorithm", default="sh+", choices=["harmonic", "sh+"])
    p.add_argument("--k", type=int, default=38, help="harmonic index")
    _add_instance_args(p, dims=1)
    p.add_argument("--verify", action="store_true")
    p.add_argument("--trace-out", help="write the placement trace CSV here")
    p.add_argument("--format", default="json", choices=["json", "csv"])
    p.add_argument("--timing", action="store_true")
    p.set_defaults(func=cmd_pack1d)

    p = sub.add_parser("pack2d", help="run the 2D slice packer")
    p.add_argument("--orientation", default="tensor-avg",
                   choices=["hxb", "bxh", "tensor-avg"])
    p.add_argument("--delta", default="1/10000")
    _add_instance_args(p, dims=2)
    p.add_argument("--verify", action="store_true")
    p.add_argument("--format", default="json", choices=["json", "csv"])
    p.add_argument("--timing", action="store_true")
    p.set_defaults(func=cmd_pack2d)

    p = sub.add_parser("weights", help="print the case weight table")
    p.set_defaults(func=cmd_weights)

    p = sub.add_parser("bound", help="compute the ratio certificate")
    p.add_argument("--mode", default="paper-compat",
                   choices=["paper-compat", "exact"])
    p.add_argument("--lambda-file", help="JSON table of mixing weights")
    p.add_argument("--no-cuts", action="store_true")
    p.add_argument("--delta", default=None,
                   help="divide the bound by (1 - delta)")
    p.add_argument("--witness", help="write argmax patterns here (JSON)")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("verify", help="run the self-check battery")
    p.set_defaults(func=cmd_verify)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
