"""``obddc`` command line: compile, analyze and lowerbound.

Exit codes: 0 success, 1 unreadable or malformed input, 2 strategy not
applicable, 3 guard or budget exceeded, 4 a checked bound failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

from . import __version__, compiler, decomposition, incidence, lowerbound, widths
from .cnf import Cnf, cnf_size, read_dimacs
from .errors import GuardExceeded, ObddcError, OrderingError, StrategyError
from .obdd import Node, Obdd, to_dot, to_text

EXIT_OK, EXIT_PARSE, EXIT_STRATEGY, EXIT_GUARD, EXIT_BOUND = 0, 1, 2, 3, 4
SCHEMA = 1

logger = logging.getLogger("obddc")


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise CliError(EXIT_PARSE, f"cannot read {path}: {exc.strerror}") from None


def _write(path: str, text: str) -> None:
    Path(path).write_text(text)


def _load_cnf(path: str):
    try:
        return read_dimacs(_read_text(path))
    except ObddcError as exc:
        raise CliError(EXIT_PARSE, f"{path}: {exc}") from None


def _parse_order(text: str, dimacs) -> tuple[int, ...]:
    dense = {orig: new for new, orig in dimacs.var_map.items()}
    out = []
    for tok in text.replace(" ", "").split(","):
        if not tok:
            continue
        try:
            orig = int(tok[1:] if tok[0] in "xX" else tok)
        except ValueError:
            raise CliError(EXIT_PARSE, f"bad variable {tok!r} in --order") from None
        if orig not in dense:
            raise CliError(EXIT_STRATEGY, f"--order names x{orig}, which does not occur in the formula")
        out.append(dense[orig])
    return tuple(out)


def _to_original(D: Obdd, dimacs) -> Obdd:
    o = dimacs.original
    return Obdd(
        tuple(o(x) for x in D.ordering),
        tuple(Node(o(n.var), n.lo, n.hi) for n in D.nodes),
        D.root,
    )


# ---------------------------------------------------------------- compile


def _bounds(F: Cnf, report: compiler.CompileReport) -> list[dict]:
    n = len(report.ordering)
    checks = [
        {
            "name": "unreduced_size",
            "value": report.size_before_reduce,
            "bound": n * report.width + 2,
        }
    ]
    kind = report.strategy
    if kind == "convex":
        checks.append({"name": "convex_level_width", "value": report.width, "bound": 2 * (cnf_size(F) + 1)})
    if "forget_bound" in report.extra:
        checks.append({"name": "forget_level_width", "value": report.width, "bound": report.extra["forget_bound"]})
    if "stw_full" in report.extra:
        checks.append(
            {
                "name": "deletion_width",
                "value": report.extra["stw_full"],
                "bound": 2 ** report.extra["k"] * report.extra["stw_remainder"],
            }
        )
    for c in checks:
        c["ok"] = c["value"] <= c["bound"]
    return checks


def cmd_compile(args) -> int:
    dimacs = _load_cnf(args.cnf)
    F = dimacs.cnf
    td = None
    if args.td:
        if args.strategy != "pathwidth":
            raise CliError(EXIT_STRATEGY, "--td is only used by the pathwidth strategy")
        try:
            td = decomposition.read_pace_td(_read_text(args.td), incidence.build_incidence(F))
        except (ObddcError, KeyError) as exc:
            raise CliError(EXIT_PARSE, f"{args.td}: {exc}") from None
    if args.strategy == "explicit":
        if not args.order:
            raise CliError(EXIT_STRATEGY, "--strategy explicit needs --order")
        strategy = compiler.Strategy.explicit(_parse_order(args.order, dimacs))
    else:
        if args.order:
            raise CliError(EXIT_STRATEGY, "--order is only used with --strategy explicit")
        strategy = compiler.Strategy(args.strategy, max_k=args.max_k)
    try:
        D, report = compiler.compile_cnf(F, strategy, td)
    except OrderingError as exc:
        raise CliError(EXIT_STRATEGY, str(exc)) from None
    checks = _bounds(F, report)
    out = _to_original(D, dimacs)
    text = to_text(out)
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    if args.dot:
        _write(args.dot, to_dot(out))
    data = report.as_dict()
    data.pop("elapsed")
    data["ordering"] = [dimacs.original(x) for x in report.ordering]
    if "deletion_set" in data:
        data["deletion_set"] = [
            [kind, dimacs.original(i) if kind == "v" else i] for kind, i in data["deletion_set"]
        ]
    summary = {
        "schema": SCHEMA,
        "version": __version__,
        "input": str(args.cnf),
        "variables": len(F.vars),
        "clauses": len(F),
        "size": cnf_size(F) if not F.has_empty_clause else None,
        "var_map": {str(k): v for k, v in sorted(dimacs.var_map.items())},
        **data,
        "bounds": checks,
    }
    if args.report:
        _write(args.report, json.dumps(summary, indent=2, sort_keys=True) + "\n")
    failed = [c["name"] for c in checks if not c["ok"]]
    if failed:
        print(f"bound check failed: {', '.join(failed)}", file=sys.stderr)
        return EXIT_BOUND
    return EXIT_OK


# ---------------------------------------------------------------- analyze


def _analysis(F: Cnf, dimacs, args) -> tuple[list[tuple[str, str]], bool]:
    rows: list[tuple[str, str]] = []
    skipped = False
    o = dimacs.original
    G = incidence.build_incidence(F)
    rows.append(("variables", str(len(F.vars))))
    rows.append(("clauses", str(len(F))))
    rows.append(("size", str(cnf_size(F))))
    rows.append(("max_degree", str(incidence.max_degree(G))))
    witness = incidence.detect_left_convex(G)
    if witness is None:
        rows.append(("convex", "no"))
    else:
        rows.append(("convex", "yes"))
        rows.append(("convex_witness", "<".join(f"x{o(x)}" for x in witness)))
    try:
        rows.append(("fvs", str(incidence.min_fvs_size(G))))
    except GuardExceeded:
        rows.append(("fvs", "skipped (guard)"))
    rows.append(("treewidth_minfill", str(decomposition.min_fill_tree_decomposition(G).width)))
    try:
        rows.append(("treewidth_exact", str(decomposition.exact_treewidth_small(G)[0])))
    except GuardExceeded:
        rows.append(("treewidth_exact", "skipped (guard)"))
    rows.append(("pathwidth_upper", str(decomposition.path_decomposition(G).width)))
    if args.stw_exact:
        try:
            value, sigma = widths.stw_exact(F)
            rows.append(("stw_exact", str(value)))
            rows.append(("stw_ordering", "<".join(f"x{o(x)}" for x in sigma)))
        except GuardExceeded:
            rows.append(("stw_exact", "skipped (guard)"))
            skipped = True
    if args.sfw_exact:
        if not lowerbound.is_graph_cnf(F):
            rows.append(("sfw_exact", "n/a (not a graph CNF)"))
        else:
            try:
                rows.append(("sfw_exact", str(lowerbound.sfw_exact(F)[0])))
            except GuardExceeded:
                rows.append(("sfw_exact", "skipped (guard)"))
                skipped = True
    return rows, skipped


def cmd_analyze(args) -> int:
    dimacs = _load_cnf(args.cnf)
    F = dimacs.cnf
    if F.has_empty_clause:
        raise CliError(EXIT_STRATEGY, "formula contains the empty clause")
    rows, skipped = _analysis(F, dimacs, args)
    for key, value in rows:
        print(f"{key}: {value}")
    if args.csv:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["metric", "value"])
        w.writerows(rows)
        _write(args.csv, buf.getvalue())
    if args.gr:
        _write(args.gr, decomposition.write_pace_gr(incidence.build_incidence(F)))
    return EXIT_GUARD if skipped else EXIT_OK


# ------------------------------------------------------------- lowerbound


def cmd_lowerbound(args) -> int:
    if args.action == "gen":
        try:
            G = lowerbound.gen_random_regular(args.n, args.d, args.seed)
        except ValueError as exc:
            raise CliError(EXIT_PARSE, str(exc)) from None
        text = lowerbound.write_edges(G)
        if args.out:
            _write(args.out, text)
        else:
            sys.stdout.write(text)
        try:
            c = lowerbound.expansion_constant(G)
        except GuardExceeded:
            print(f"n={G.n} d={args.d} seed={args.seed} c=skipped (guard)", file=sys.stderr)
            return EXIT_OK
        note = "" if c > 0 else " (disconnected: not an expander)"
        print(f"n={G.n} d={args.d} seed={args.seed} c={c}{note}", file=sys.stderr)
        return EXIT_OK
    return _verify(args)


def _verify(args) -> int:
    try:
        G = lowerbound.read_edges(_read_text(args.edges))
        F = lowerbound.graph_cnf(G)
    except (ObddcError, ValueError) as exc:
        raise CliError(EXIT_PARSE, f"{args.edges}: {exc}") from None
    code = EXIT_OK
    d = G.max_degree()
    row: dict = {"n": G.n, "d": d}
    try:
        c = lowerbound.expansion_constant(G)
        row["c"] = c
        row["sfw_lb"] = lowerbound.lemma_lower_bound(G.n, d, c)
    except GuardExceeded:
        code = EXIT_GUARD
    try:
        sfw = lowerbound.sfw_exact(F)[0]
        row["sfw_exact"] = sfw
        row["2^sfw"] = 2**sfw
    except GuardExceeded:
        code = EXIT_GUARD
    if args.exact_min_obdd:
        try:
            row["min_obdd"] = lowerbound.min_obdd_size_exact(F)[0]
        except GuardExceeded:
            code = EXIT_GUARD
    text = lowerbound.sweep_csv([row])
    if args.csv:
        _write(args.csv, text)
    else:
        sys.stdout.write(text)
    if "min_obdd" in row and "2^sfw" in row and row["min_obdd"] < row["2^sfw"]:
        print(f"lower bound violated: {row['min_obdd']} < {row['2^sfw']}", file=sys.stderr)
        return EXIT_BOUND
    return code


# ------------------------------------------------------------------ entry


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="obddc", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"obddc {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compile", help="compile a DIMACS CNF into a reduced OBDD")
    c.add_argument("cnf")
    c.add_argument("--strategy", choices=compiler.STRATEGIES, default="auto")
    c.add_argument("--order", help='explicit ordering, e.g. "x3,x1,x2"')
    c.add_argument("--max-k", type=int, default=compiler.DEFAULT_DELETION_K, help="deletion set budget")
    c.add_argument("--td", help="PACE .td decomposition of the incidence graph")
    c.add_argument("--out", help="OBDD text output (default stdout)")
    c.add_argument("--dot", help="Graphviz output")
    c.add_argument("--report", help="JSON report output")
    c.add_argument("--threads", type=int, default=1, help="accepted for compatibility; runs single-threaded")
    c.set_defaults(func=cmd_compile)

    a = sub.add_parser("analyze", help="structural measures of a DIMACS CNF")
    a.add_argument("cnf")
    a.add_argument("--stw-exact", action="store_true")
    a.add_argument("--sfw-exact", action="store_true")
    a.add_argument("--csv")
    a.add_argument("--gr", help="write the incidence graph in PACE .gr format")
    a.add_argument("--threads", type=int, default=1)
    a.set_defaults(func=cmd_analyze)

    lb = sub.add_parser("lowerbound", help="expander graph CNFs and the subfunction width bound")
    lsub = lb.add_subparsers(dest="action", required=True)
    g = lsub.add_parser("gen", help="random d-regular graph from a seed")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--d", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")
    g.set_defaults(func=cmd_lowerbound)
    v = lsub.add_parser("verify", help="sweep row for an edge-list graph")
    v.add_argument("edges")
    v.add_argument("--exact-min-obdd", action="store_true")
    v.add_argument("--csv")
    v.add_argument("--threads", type=int, default=1)
    v.set_defaults(func=cmd_lowerbound)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except CliError as exc:
        print(f"obddc: {exc}", file=sys.stderr)
        return exc.code
    except StrategyError as exc:
        print(f"obddc: {exc}", file=sys.stderr)
        return EXIT_STRATEGY
    except GuardExceeded as exc:
        print(f"obddc: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except AssertionError as exc:
        print(f"obddc: internal check failed: {exc}", file=sys.stderr)
        return EXIT_BOUND


if __name__ == "__main__":
    sys.exit(main())
