"""Command-line front end.

Exit status: 0 success, 2 usage error, 3 malformed input file, 4 size cap
exceeded, 5 any other rejected input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path
from typing import Callable, Sequence

from . import bell, experiment, fidelity, noise, states
from .errors import CapExceededError, GraphBellError, MalformedInputError
from .pauli import QubitOrder, format_token

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_MALFORMED = 3
EXIT_CAP = 4
EXIT_INVALID = 5


# -- helpers -----------------------------------------------------------------

def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise MalformedInputError(f"cannot read {path}: {exc}") from exc


def _order(text: str | None) -> QubitOrder | None:
    return QubitOrder.parse(text) if text else None


def _grid(text: str) -> tuple[float, float, int]:
    try:
        lo, hi, steps = text.split(",")
        return float(lo), float(hi), int(steps)
    except ValueError:
        raise GraphBellError(f"--grid expects min,max,steps, got {text!r}") from None


def _rows_to_csv(header: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _rows_to_table(header: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    cells = [list(map(str, header))] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[k]) for r in cells) for k in range(len(header))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def _emit(fmt: str, header: Sequence[str], rows: Sequence[Sequence[object]], doc: object) -> str:
    if fmt == "csv":
        return _rows_to_csv(header, rows)
    if fmt == "structured":
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    return _rows_to_table(header, rows)


def _load_state(args: argparse.Namespace) -> tuple[states.StateVector, list]:
    if getattr(args, "graph", None):
        g = states.parse_graph_text(_read(args.graph))
        return states.graph_state(g), states.stabilizer_generators(g)
    name = args.state
    return states.build_named_state(name), fidelity.named_state_generators(name)


def _operator_and_state(args: argparse.Namespace) -> tuple[bell.BellOperator, states.StateVector]:
    op = bell.named_operator(args.operator)
    state_name = args.state or bell.ideal_state_for(op)
    return op, states.build_named_state(state_name)


def _cap(args: argparse.Namespace) -> int | None:
    return getattr(args, "lhv_cap", None)


# -- commands ----------------------------------------------------------------

def cmd_state_verify(args: argparse.Namespace) -> str:
    s, gens = _load_state(args)
    rows = [(format_token(g, explicit_plus=True), f"{states.expectation(s, g):+.12f}") for g in gens]
    group = fidelity.stabilizer_group(gens)
    worst = max(abs(fidelity.exact_fidelity(s, group) - 1.0), *(abs(float(v) - 1) for _, v in rows))
    doc = {
        "state": s.label, "qubits": s.n,
        "generators": {tok: float(v) for tok, v in rows},
        "group_order": group.order, "max_deviation": worst, "stabilized": worst <= 1e-9,
    }
    out = _emit(args.format, ["generator", "expectation"], rows, doc)
    if args.format == "table":
        out += f"\ngroup order {group.order}; stabilized: {'yes' if worst <= 1e-9 else 'NO'}\n"
    return out


def cmd_bell_expand(args: argparse.Namespace) -> str:
    op = bell.named_operator(args.operator)
    order = _order(args.order) or op.order
    rows = [(format_token(t, order), t.weight) for t in op.terms]
    if args.format == "structured":
        return bell.operator_to_json(op) + "\n"
    return _emit(args.format, ["term", "weight"], rows, None)


def cmd_bell_eval(args: argparse.Namespace) -> str:
    op, s = _operator_and_state(args)
    result = bell.lhv_search(op, cap=_cap(args), workers=args.workers)
    value = bell.quantum_value(op, s)
    doc = {
        "operator": op.label, "state": s.label, "value": round(value, 12),
        "lhv_bound": result.bound, "D": round(value / result.bound, 12),
        "assignments_searched": result.n_assignments, "terms": len(op.terms),
    }
    rows = [(k, doc[k]) for k in ("operator", "state", "value", "lhv_bound", "D", "assignments_searched")]
    return _emit(args.format, ["quantity", "value"], rows, doc)


def cmd_noise_sweep(args: argparse.Namespace) -> str:
    op, s = _operator_and_state(args)
    lo, hi, steps = _grid(args.grid)
    curve = noise.decay_curve(op, bell.ideal_values(op, s), lo, hi, steps)
    if args.format == "structured":
        doc = {"operator": op.label, "grid": list(curve.grid),
               "samples": [{"p": p, "value": v} for p, v in curve.samples]}
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    return curve.to_csv()


def cmd_noise_threshold(args: argparse.Namespace) -> str:
    op, s = _operator_and_state(args)
    bound = args.bound if args.bound is not None else bell.lhv_bound(op, cap=_cap(args))
    res = noise.violation_threshold(op, bell.ideal_values(op, s), bound=bound)
    if args.format == "structured":
        return res.to_json() + "\n"
    rows = [("operator", res.label), ("bound", res.bound), ("p_star", f"{res.p_star:.10f}"),
            ("iterations", res.iterations)]
    return _emit(args.format, ["quantity", "value"], rows, None)


def cmd_fidelity(args: argparse.Namespace) -> str:
    s, gens = _load_state(args)
    group = fidelity.stabilizer_group(gens)
    if args.p is None:
        f = fidelity.exact_fidelity(s, group)
    else:
        f = fidelity.fidelity_under_noise(group, noise.DepolarizingNoise.uniform(args.p, s.n))
    if args.value is not None:
        f_checked = args.value
    else:
        f_checked = round(min(1.0, max(0.0, f)), 12)
    doc = {
        "state": s.label, "p": args.p, "fidelity": round(f, 12),
        "checked_value": f_checked, "gme": fidelity.gme_check(f_checked),
    }
    if args.dump:
        return group.dump(_order(args.order))
    rows = [(k, doc[k]) for k in ("state", "p", "fidelity", "checked_value", "gme")]
    return _emit(args.format, ["quantity", "value"], rows, doc)


def cmd_experiment_simulate(args: argparse.Namespace) -> str:
    op, s = _operator_and_state(args)
    nz = noise.DepolarizingNoise.uniform(args.p, s.n)
    records = experiment.simulate_bell(op, s, nz, args.events, args.seed)
    if args.format == "structured":
        agg = experiment.aggregate_bell(records, op.lhv_bound or bell.lhv_bound(op, cap=_cap(args)))
        doc = {
            "operator": op.label, "p": args.p, "seed": args.seed, "mean_events": args.events,
            "records": [{"observable": format_token(r.term, op.order), "value": r.estimate,
                         "sigma": r.sigma, "events": r.events} for r in records],
            "aggregate": agg.as_dict(),
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    return experiment.records_to_csv(records, op.order)


def _table_text(args: argparse.Namespace) -> str:
    if args.input:
        return _read(args.input)
    if args.table:
        return experiment.packaged_table(args.table)
    raise GraphBellError("give --in FILE or --table lc6|y6")


def cmd_experiment_ingest(args: argparse.Namespace) -> str:
    doc = experiment.parse_table_document(_table_text(args), _order(args.order))
    if args.format == "structured":
        out = {
            "order": str(doc.order) if doc.order else None, "meta": doc.meta,
            "records": [{"observable": format_token(r.term, doc.order), "value": r.estimate, "sigma": r.sigma}
                        for r in doc.records],
        }
        return json.dumps(out, indent=2, sort_keys=True) + "\n"
    rows = [(format_token(r.term, doc.order), r.estimate, r.sigma) for r in doc.records]
    return _emit(args.format, ["observable", "value", "sigma"], rows, None)


def cmd_experiment_aggregate(args: argparse.Namespace) -> str:
    doc = experiment.parse_table_document(_table_text(args), _order(args.order))
    op_name = args.operator or doc.meta.get("operator")
    reference = bell.named_operator(op_name) if op_name else None
    agg = experiment.aggregate_bell(doc.records, args.bound, reference)
    reported = doc.meta.get("reported_value")
    if args.format == "structured":
        out = agg.as_dict()
        if reported is not None:
            out["reported_value"] = float(reported)
            out["difference_from_reported"] = round(agg.value - float(reported), 12)
        return json.dumps(out, indent=2, sort_keys=True) + "\n"
    rows = [(k, f"{v:.6g}") for k, v in agg.as_dict().items()]
    if args.format == "csv":
        return _rows_to_csv(["quantity", "value"], rows)
    text = agg.to_text()
    if reported is not None and abs(agg.value - float(reported)) > 1e-9:
        text += (f"note         table entries sum to {agg.value:.4f}, "
                 f"reported value is {float(reported):.2f} (rounded entries)\n")
    return text


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="graphbell", description=__doc__.splitlines()[0])
    parser.add_argument("--format", choices=("table", "csv", "structured"), default="table")
    parser.add_argument("--out", help="write output to this file instead of stdout")
    top = parser.add_subparsers(dest="group", required=True)

    def add(sub, name: str, fn: Callable[[argparse.Namespace], str], help_: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=fn)
        # accept the shared flags after the subcommand too
        p.add_argument("--format", choices=("table", "csv", "structured"), default=argparse.SUPPRESS)
        p.add_argument("--out", default=argparse.SUPPRESS)
        return p

    def state_args(p: argparse.ArgumentParser) -> None:
        g = p.add_mutually_exclusive_group()
        g.add_argument("--state", default="lc6", help="lc4, lc6, y6 or ghz6")
        g.add_argument("--graph", help="graph file: vertex count, then one 'u v' edge per line")

    def op_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("--operator", default="lc6", help="lc6, y6 or mermin")
        p.add_argument("--state", default=None, help="defaults to the operator's ideal state")
        p.add_argument("--lhv-cap", type=int, default=None,
                       help=f"assignment-space cap (default {bell.DEFAULT_LHV_CAP}, env {bell.LHV_CAP_ENV})")

    st = top.add_parser("state").add_subparsers(dest="cmd", required=True)
    state_args(add(st, "verify", cmd_state_verify, "stabilizer eigenstate report"))

    bl = top.add_parser("bell").add_subparsers(dest="cmd", required=True)
    p = add(bl, "expand", cmd_bell_expand, "list the signed terms of an operator")
    p.add_argument("--operator", default="lc6")
    p.add_argument("--order", help="display order, e.g. 5-1-3-2-4-6")
    p = add(bl, "eval", cmd_bell_eval, "quantum value, LHV bound and ratio D")
    op_args(p)
    p.add_argument("--workers", type=int, default=1)

    nz = top.add_parser("noise").add_subparsers(dest="cmd", required=True)
    p = add(nz, "sweep", cmd_noise_sweep, "Bell value under uniform depolarizing noise")
    op_args(p)
    p.add_argument("--grid", default="0,1,11", help="p_min,p_max,steps")
    p = add(nz, "threshold", cmd_noise_threshold, "noise level where the violation vanishes")
    op_args(p)
    p.add_argument("--bound", type=float, default=None)

    p = add(top, "fidelity", cmd_fidelity, "exact stabilizer fidelity and GME verdict")
    state_args(p)
    p.add_argument("--p", type=float, default=None, help="uniform depolarizing retention")
    p.add_argument("--value", type=float, default=None, help="check an externally measured fidelity instead")
    p.add_argument("--dump", action="store_true", help="list the stabilizer group")
    p.add_argument("--order", help="display order for --dump")

    ex = top.add_parser("experiment").add_subparsers(dest="cmd", required=True)
    p = add(ex, "simulate", cmd_experiment_simulate, "Poisson counting simulation of every setting")
    op_args(p)
    p.add_argument("--p", type=float, default=1.0)
    p.add_argument("--events", type=float, default=experiment.DEFAULT_MEAN_EVENTS)
    p.add_argument("--seed", type=int, default=experiment.DEFAULT_SEED)
    for name, fn, help_ in (("ingest", cmd_experiment_ingest, "read a measurement table"),
                            ("aggregate", cmd_experiment_aggregate, "Bell value with propagated error")):
        p = add(ex, name, fn, help_)
        src = p.add_mutually_exclusive_group()
        src.add_argument("--in", dest="input", help="CSV with header observable,value,sigma")
        src.add_argument("--table", help="packaged table: lc6 or y6")
        p.add_argument("--order", help="qubit order of the tokens (overrides '# order=')")
        if name == "aggregate":
            p.add_argument("--bound", type=float, default=4.0)
            p.add_argument("--operator", default=None, help="check coverage against this operator")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    try:
        text = args.func(args)
    except MalformedInputError as exc:
        print(f"graphbell: malformed input: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except CapExceededError as exc:
        print(f"graphbell: {exc}", file=sys.stderr)
        return EXIT_CAP
    except GraphBellError as exc:
        print(f"graphbell: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
