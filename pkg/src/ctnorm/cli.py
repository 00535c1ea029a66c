"""ctnorm command line interface.

    ctnorm bounds --n 4 --d 3
    ctnorm analyze --kind graph --edges 1-2,2-3,3-4,4-1 --out report.json
    ctnorm sweep --kind ghz --n 3 --d 3 --criteria purity-ksep --grid 0:1:0.01 --out sweep.csv
    ctnorm sequential --kind ame43 --criteria cutoff-bisep-max --x 3 --seed 7
    ctnorm graph --edges 1-2,2-3,3-4,4-1 --check

Exit status is nonzero only for process errors; entanglement verdicts are
reported inside the output.
"""
import argparse
from pathlib import Path
import sys

from . import __version__
from .basis import MAX_LOCAL_DIM, build_basis
from .bounds import TAGS, BoundSpec, compute_bound, default_criteria
from .correlations import cx, norm_table
from .detect import SCHEDULES, evaluate, noise_sweep, parse_grid, quantity_name, sequential_acquire
from .errors import CtnormError, ParameterDomainError
from .formats import StateSpec, build_state, dumps, load_state_spec, read_matrix_file, write_atomic
from .stabilizer import StabilizerGroup, group_norm_table, weight_enumerator
from .states import DEFAULT_DIM_CAP, check_dims, edges_to_adjacency, make_graph_state, parse_edge_list


def _fmt(v) -> str:
    return "none" if v is None else f"{v:.6g}"


def _ints(text):
    return [int(t) for t in text.split(",") if t.strip()]


# -- state input -----------------------------------------------------------

def _inline_spec(args) -> StateSpec:
    kind = args.kind
    params = {}
    if kind in ("ghz", "product"):
        params = {"n": args.n, "d": args.d}
    elif kind == "w":
        params = {"n": args.n}
    elif kind == "graph":
        if not args.edges:
            raise ParameterDomainError("--kind graph needs --edges")
        params = {"edges": args.edges}
        if args.n is not None:
            params["n"] = args.n
    if any(v is None for v in params.values()):
        raise ParameterDomainError(f"--kind {kind} needs --n" + (" and --d" if "d" in params else ""))
    spec = StateSpec(kind, params)
    if args.p is not None:
        spec = StateSpec("mix", {"base": spec, "p": args.p})
    return spec


def load_input(args):
    """Returns ``(rho, descriptor)`` from exactly one of --state / --kind."""
    if (args.state is None) == (args.kind is None):
        raise ParameterDomainError("give exactly one input source: --state PATH or --kind KIND")
    if args.state is not None:
        path = Path(args.state)
        if path.suffix.lower() == ".json":
            spec = load_state_spec(path)
            rho = build_state(spec, base_dir=path.parent, cap=args.dim_cap)
            desc = spec.to_dict()
        else:
            rho = read_matrix_file(path, cap=args.dim_cap)
            desc = {"kind": "matrix-file", "path": str(path)}
    else:
        spec = _inline_spec(args)
        rho = build_state(spec, cap=args.dim_cap)
        desc = spec.to_dict()
    build_basis(rho.d, max_d=args.max_d)  # enforces the local-dimension cap
    return rho, desc


def resolve_criteria(args, n, d) -> list:
    ranks = _ints(args.ranks) if args.ranks else None
    if not args.criteria:
        return default_criteria(n, d, ranks)
    out = []
    for tag in [t.strip() for t in args.criteria.split(",") if t.strip()]:
        if tag not in TAGS:
            raise ParameterDomainError(f"unknown criterion {tag!r}; choose from {', '.join(TAGS)}")
        if tag in ("purity-ksep", "improved-ksep"):
            ks = [args.k] if args.k is not None else range(2, n + 1)
            out += [BoundSpec(tag, n, d, k=k) for k in ks]
        elif tag == "cutoff-partition":
            xs = [args.x] if args.x is not None else range(2, n + 1)
            k1s = [args.k1] if args.k1 is not None else range(1, n // 2 + 1)
            out += [BoundSpec(tag, n, d, x=x, k1=k1) for x in xs for k1 in k1s]
        elif tag == "cutoff-bisep-max":
            xs = [args.x] if args.x is not None else range(2, n + 1)
            out += [BoundSpec(tag, n, d, x=x) for x in xs]
        elif tag == "dim-vector":
            if ranks is None:
                raise ParameterDomainError("dim-vector needs --ranks k1,k2,...")
            out.append(BoundSpec(tag, n, d, ranks=tuple(ranks)))
        else:
            out.append(BoundSpec(tag, n, d))
    for s in out:
        compute_bound(s)  # surfaces parameter-domain errors before any heavy work
    return out


def _emit(args, text, default_stdout=True):
    if args.out:
        write_atomic(args.out, text)
    elif default_stdout:
        sys.stdout.write(text)


# -- subcommands -----------------------------------------------------------

def bounds_rows(n, d, ranks=None) -> list:
    specs = [BoundSpec("purity-ksep", n, d, k=k) for k in range(2, n + 1)]
    specs += [BoundSpec("improved-ksep", n, d, k=k) for k in range(2, n + 1)]
    specs.append(BoundSpec("fullbody-single", n, d))
    specs += [BoundSpec("cutoff-bisep-max", n, d, x=x) for x in range(0, n + 1)]
    if n % 2 == 0:
        specs.append(BoundSpec("cutoff-half", n, d))
    if n >= 3:
        specs.append(BoundSpec("cutoff-nminus1", n, d))
    if ranks is not None:
        specs.append(BoundSpec("dim-vector", n, d, ranks=tuple(ranks)))
    return [compute_bound(s) for s in specs]


def cmd_bounds(args):
    if args.n < 2 or args.d < 2:
        raise ParameterDomainError("bounds need n >= 2 and d >= 2")
    if args.d > args.max_d:
        raise ParameterDomainError(f"d={args.d} exceeds local-dimension cap --max-d={args.max_d}")
    check_dims(args.n, args.d, args.dim_cap)
    rows = bounds_rows(args.n, args.d, _ints(args.ranks) if args.ranks else None)
    if args.json:
        obj = {"n": args.n, "d": args.d, "bounds": [
            {"criterion": b.spec.label, "spec": b.spec.to_dict(), "quantity": quantity_name(b.spec),
             "bound": b.value, "bound_exact": str(b.exact), "notes": b.notes} for b in rows]}
        _emit(args, dumps(obj))
        return 0
    w = max(len(b.spec.label) for b in rows)
    lines = [f"{'criterion':<{w}}  {'quantity':<18}  {'bound':>12}  notes"]
    for b in rows:
        lines.append(f"{b.spec.label:<{w}}  {quantity_name(b.spec):<18}  {_fmt(b.value):>12}  {b.notes}")
    _emit(args, "\n".join(lines) + "\n")
    return 0


def cmd_analyze(args):
    rho, desc = load_input(args)
    criteria = resolve_criteria(args, rho.n, rho.d)
    report = evaluate(rho, criteria, state=desc)
    text = dumps(report.to_dict())
    if args.json and not args.out:
        sys.stdout.write(text)
        return 0
    if args.out:
        write_atomic(args.out, text)
    t = report.table
    print(f"state: {desc}  (n={rho.n}, d={rho.d})")
    print("C_x: " + ", ".join(f"C_{x}={_fmt(cx(t, x).value)}" for x in range(rho.n + 1)))
    for r in report.results:
        print(f"  {r.spec.label:<28} {quantity_name(r.spec):<18} measured {_fmt(r.measured):>10}"
              f"  bound {_fmt(r.bound.value):>10}  {r.verdict}")
    print("claims: " + ("; ".join(report.claims) if report.claims else "none"))
    return 0


def cmd_sweep(args):
    rho, desc = load_input(args)
    criteria = resolve_criteria(args, rho.n, rho.d)
    res = noise_sweep(rho, criteria, parse_grid(args.grid))
    csv_text = res.to_csv()
    summary = dict(res.summary(), state=desc, grid=args.grid)
    if args.out:
        write_atomic(args.out, csv_text)
        summary_path = args.summary or str(Path(args.out).with_suffix(".summary.json"))
        write_atomic(summary_path, dumps(summary))
    elif args.json:
        sys.stdout.write(dumps(summary))
    else:
        sys.stdout.write(csv_text)
    if args.plot_data:
        outdir = Path(args.plot_data)
        for i, lab in enumerate(res.labels):
            rows = [f"{p!r} {q!r}" for p, q in zip(res.grid.tolist(), res.quantities[lab].tolist())]
            name = "".join(c if c.isalnum() or c in "-_=" else "_" for c in lab)
            write_atomic(outdir / f"{i:02d}_{name}.dat",
                         f"# p {lab} (bound {res.bounds[lab]!r})\n" + "\n".join(rows) + "\n")
    if args.out or args.plot_data:
        for lab in res.labels:
            th = res.thresholds[lab]
            print(f"{lab}: bound {_fmt(res.bounds[lab])}, threshold p* = "
                  + ("none" if th is None else f"{th:.6f}"))
    return 0


def cmd_sequential(args):
    rho, desc = load_input(args)
    if args.criteria:
        targets = resolve_criteria(args, rho.n, rho.d)
    else:
        targets = [BoundSpec("purity-ksep", rho.n, rho.d, k=args.k or 2)]
    if len(targets) != 1:
        raise ParameterDomainError(
            f"sequential needs exactly one target; got {[t.label for t in targets]} "
            "(pin it with --k / --x / --k1)")
    rec = sequential_acquire(rho, targets[0], seed=args.seed, schedule=args.schedule,
                             budget=args.budget)
    obj = dict(rec.to_dict(), state=desc)
    text = dumps(obj)
    if args.json and not args.out:
        sys.stdout.write(text)
        return 0
    if args.out:
        write_atomic(args.out, text)
    print(f"target {rec.target.label}: bound {_fmt(rec.bound)}, true value {_fmt(rec.true_quantity)}")
    print(f"schedule {rec.schedule}, misalignment "
          + ("identity" if rec.seed is None else f"seed {rec.seed}"))
    print(f"stop reason: {rec.stop_reason} after {len(rec.steps)} elements "
          f"(skipped {rec.skipped}), lower bound {_fmt(rec.lower_bound)}")
    return 0


def cmd_graph(args):
    adj = edges_to_adjacency(parse_edge_list(args.edges), args.n)
    group = StabilizerGroup.from_graph(adj)
    table = group_norm_table(group)
    obj = {"n": group.n, "edges": args.edges, "weight_enumerator": weight_enumerator(group),
           "norm_table": table.to_dict(),
           "C_x": {str(x): cx(table, x).value for x in range(group.n + 1)}}
    if args.check:
        dense = norm_table(make_graph_state(adj, cap=args.dim_cap))
        obj["dense_max_abs_diff"] = max(abs(dense.entries[a] - table.entries[a]) for a in table)
    if args.json or args.out:
        _emit(args, dumps(obj))
        if not args.json:
            print(f"wrote {args.out}")
        return 0
    print("weight enumerator: " + ", ".join(f"{m}:{c}" for m, c in obj["weight_enumerator"].items()))
    for a, v in table.entries.items():
        if v:
            print(f"  ||tau_{{{','.join(map(str, a))}}}||^2 = {v:g}")
    print("C_x: " + ", ".join(f"C_{x}={_fmt(v)}" for x, v in obj["C_x"].items()))
    if args.check:
        print(f"dense check: max abs diff {obj['dense_max_abs_diff']:.3g}")
    return 0


# -- parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output on stdout")
    common.add_argument("--out", help="output path (written atomically)")
    common.add_argument("--dim-cap", type=float, default=DEFAULT_DIM_CAP,
                        help="max n*log2(d) for dense matrices (default %(default)s)")
    common.add_argument("--max-d", type=int, default=MAX_LOCAL_DIM,
                        help="max local dimension (default %(default)s)")

    state = argparse.ArgumentParser(add_help=False)
    state.add_argument("--state", help="StateSpec JSON (*.json) or matrix text file")
    state.add_argument("--kind", choices=("ghz", "w", "graph", "ame43", "product"),
                       help="inline state constructor")
    state.add_argument("--n", type=int)
    state.add_argument("--d", type=int)
    state.add_argument("--p", type=float, help="mix the state with white noise, weight p")
    state.add_argument("--edges", help="graph edge list, e.g. 1-2,2-3")

    crit = argparse.ArgumentParser(add_help=False)
    crit.add_argument("--criteria", help="comma-separated bound tags: " + ", ".join(TAGS))
    crit.add_argument("--k", type=int, help="separability k for *-ksep tags")
    crit.add_argument("--x", type=int, help="cutoff for cutoff-* tags")
    crit.add_argument("--k1", type=int, help="first block size for cutoff-partition")
    crit.add_argument("--ranks", help="local rank vector for dim-vector, e.g. 2,2,3")

    p = argparse.ArgumentParser(prog="ctnorm", description=__doc__.split("\n\n")[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("bounds", parents=[common], help="table of bounds for (n, d)")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--ranks")
    s.set_defaults(func=cmd_bounds)

    s = sub.add_parser("analyze", parents=[common, state, crit], help="detection report")
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("sweep", parents=[common, state, crit], help="white-noise sweep")
    s.add_argument("--grid", default="0:1:0.01", help="a:b:step (default %(default)s)")
    s.add_argument("--summary", help="threshold summary JSON path (default <out>.summary.json)")
    s.add_argument("--plot-data", metavar="DIR", help="write one two-column file per criterion")
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("sequential", parents=[common, state, crit],
                       help="simulate sequential element acquisition")
    s.add_argument("--schedule", choices=SCHEDULES, default="greedy-expected")
    s.add_argument("--seed", type=int, help="misalignment seed (omit for aligned frames)")
    s.add_argument("--budget", type=int)
    s.set_defaults(func=cmd_sequential)

    s = sub.add_parser("graph", parents=[common], help="stabilizer norm table of a graph state")
    s.add_argument("--edges", required=True)
    s.add_argument("--n", type=int, help="vertex count (default: largest vertex label)")
    s.add_argument("--check", action="store_true", help="compare with the dense computation")
    s.set_defaults(func=cmd_graph)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CtnormError, OSError) as e:
        print(f"ctnorm {args.command}: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
