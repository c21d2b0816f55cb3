"""Command line front end.

    signseq eval "lambda([-1])"
    signseq cmp "[+w]" "[+w, +1]"
    signseq signs "V(0)" --limit 6
    signseq audit --suite BOUNDARY --convention s1-plain --corpus small --report r.json
    signseq replay r.json
    signseq table --map lambda --family grid --a "[]" --n-range=-3..3

Usage errors exit 64, evaluation errors exit 1.  ``SURREAL_BUDGET`` sets
the number of runs a symbolic tail may be expanded to.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from typing import Any, Dict, List, Optional, Sequence

from . import audit as au
from . import logatomic as la
from .codec import ParseError, number_to_json
from .expr import Context, EvalError, as_number, evaluate, format_value, parse_expr
from .number import Number, NumberError, TailSeg, bounded, budget, cmp, get_budget
from .ordinal import NegInf, Ordinal

EXIT_USAGE = 64
OUTPUT_VERSION = 1


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _value_json(v: Any) -> Dict[str, Any]:
    if isinstance(v, Number):
        return {"number": number_to_json(v), "text": v.text()}
    if isinstance(v, Ordinal):
        return {"ordinal": str(v)}
    if isinstance(v, NegInf):
        return {"ordinal": "-inf"}
    if isinstance(v, int):
        return {"integer": v}
    return {"text": str(v)}


def _emit_json(doc: Dict[str, Any], out) -> None:
    out.write(json.dumps(doc, sort_keys=True) + "\n")


def _eval(text: str, conv: la.Convention):
    ctx = Context(conv)
    value = evaluate(parse_expr(text), ctx)
    return value, ctx.used_convention


def cmd_eval(args, out) -> int:
    value, used = _eval(args.expr, args.conv)
    if args.json:
        _emit_json({"schema": "signseq-eval", "schema_version": OUTPUT_VERSION,
                    "expr": args.expr, "convention": args.conv.name if used else None,
                    "budget": get_budget(), "value": _value_json(value)}, out)
    else:
        out.write(format_value(value) + "\n")
    return 0


def cmd_cmp(args, out) -> int:
    a, _ = _eval(args.a, args.conv)
    b, _ = _eval(args.b, args.conv)
    if args.bounded:
        with bounded():
            c = cmp(as_number(a), as_number(b))
    else:
        c = cmp(as_number(a), as_number(b))
    out.write(("lt", "eq", "gt")[c + 1] + "\n")
    return 0


def _sign_runs(x: Number, limit: int):
    """The first ``limit`` runs of x and whether anything was left out."""
    runs: List[tuple] = []
    for seg in x.segments:
        if len(runs) >= limit:
            return runs, True
        if isinstance(seg, TailSeg):
            # an explicit request: --limit, not the budget, bounds the expansion
            runs.extend(seg.run(i) for i in range(limit - len(runs)))
            return runs, True
        runs.append((seg.sign, seg.len))
    return runs, False


def cmd_signs(args, out) -> int:
    value, used = _eval(args.expr, args.conv)
    x = as_number(value)
    runs, truncated = _sign_runs(x, args.limit)
    shown = [("+" if s > 0 else "-") + str(l) for s, l in runs]
    if args.json:
        _emit_json({"schema": "signseq-signs", "schema_version": OUTPUT_VERSION,
                    "expr": args.expr, "convention": args.conv.name if used else None,
                    "runs": [{"sign": s, "len": str(l)} for s, l in runs],
                    "truncated": truncated, "len": str(x.len)}, out)
    else:
        out.write("[" + ", ".join(shown + (["..."] if truncated else [])) + "]\n")
    return 0


def cmd_audit(args, out) -> int:
    try:
        params = au.parse_corpus_params(args.corpus)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report = au.run_suite(args.suite, au.gen_corpus(params), args.conv, get_budget())
    if args.report:
        with open(args.report, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(report.dumps())
    out.write(report.text())
    return report.exit_code


def cmd_replay(args, out) -> int:
    try:
        with open(args.file, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read report {args.file}: {exc}") from None
    try:
        rows = au.replay(doc)
    except au.jsonschema.ValidationError as exc:
        raise UsageError(f"{args.file} is not an audit report: {exc.message}") from None
    same = True
    for key, recorded, got, detail in rows:
        ok = recorded == got
        same &= ok
        out.write(f"{key}: recorded {recorded}, replayed {got}"
                  + ("" if ok else "  MISMATCH") + (f"  ({detail})" if detail else "") + "\n")
    out.write(f"replayed {len(rows)} case(s): {'all verdicts reproduced' if same else 'verdicts differ'}\n")
    return 0 if same else 1


def _n_range(text: str) -> range:
    lo, sep, hi = text.partition("..")
    try:
        lo_i, hi_i = int(lo), int(hi)
    except ValueError:
        raise UsageError(f"--n-range must look like I..J, got {text!r}") from None
    if not sep or lo_i > hi_i:
        raise UsageError(f"--n-range must look like I..J with I <= J, got {text!r}")
    return range(lo_i, hi_i + 1)


def cmd_table(args, out) -> int:
    a = as_number(_eval(args.a, args.conv)[0])
    t = as_number(_eval(args.t, args.conv)[0])
    fn = la.la_lambda if args.map == "lambda" else la.la_rho
    rows = []
    for n in _n_range(args.n_range):
        pos = la.Grid(a, n) if args.family == "grid" else la.Interval(a, n, t)
        z = la.la_rebuild(pos)
        rows.append({"n": n, "index": z.text(), "value": fn(z, args.conv).text()})
    if args.format == "json":
        _emit_json({"schema": "signseq-table", "schema_version": OUTPUT_VERSION,
                    "map": args.map, "family": args.family, "a": a.text(),
                    "t": t.text() if args.family == "interval" else None,
                    "convention": args.conv.name, "rows": rows}, out)
    else:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=["n", "index", "value"], lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        out.write(f"# map={args.map} family={args.family} convention={args.conv.name}\n")
        out.write(buf.getvalue())
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="signseq", description="Sign-sequence calculator and audit harness.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def conv_opt(sp):
        sp.add_argument("--convention", default="paper-verbatim", choices=sorted(la.CONVENTIONS),
                        help="reading of the log-atomic formulas (default: paper-verbatim)")

    sp = sub.add_parser("eval", help="evaluate an expression")
    sp.add_argument("expr")
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--limit", type=int, help="expansion budget in runs per tail")
    conv_opt(sp)
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("cmp", help="compare two expressions: lt, eq or gt")
    sp.add_argument("a")
    sp.add_argument("b")
    sp.add_argument("--bounded", action="store_true",
                    help="treat two tails as equal after a fixed horizon of runs")
    conv_opt(sp)
    sp.set_defaults(func=cmd_cmp)

    sp = sub.add_parser("signs", help="print the first runs of a sign sequence")
    sp.add_argument("expr")
    sp.add_argument("--limit", type=int, default=8)
    sp.add_argument("--json", action="store_true")
    conv_opt(sp)
    sp.set_defaults(func=cmd_signs)

    sp = sub.add_parser("audit", help="run an audit suite")
    sp.add_argument("--suite", required=True, choices=list(au.SUITES))
    sp.add_argument("--corpus", default="default",
                    help="default, small, empty or key=value;... (alphabet, max_runs, "
                         "heavy_runs, pairs, seed, families)")
    sp.add_argument("--report", help="write the JSON report here")
    conv_opt(sp)
    sp.set_defaults(func=cmd_audit)

    sp = sub.add_parser("replay", help="re-run the failing cases of a JSON report")
    sp.add_argument("file")
    sp.set_defaults(func=cmd_replay)

    sp = sub.add_parser("table", help="tabulate rho or lambda along a family of indices")
    sp.add_argument("--map", choices=["lambda", "rho"], default="lambda")
    sp.add_argument("--family", choices=["grid", "interval"], default="grid")
    sp.add_argument("--a", default="[]", help="expression for a")
    sp.add_argument("--t", default="[]", help="expression for t (interval family)")
    sp.add_argument("--n-range", default="-2..2")
    sp.add_argument("--format", choices=["csv", "json"], default="csv")
    conv_opt(sp)
    sp.set_defaults(func=cmd_table)
    return p


def _env_budget() -> Optional[int]:
    raw = os.environ.get("SURREAL_BUDGET")
    if raw is None or raw == "":
        return None
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n < 1:
        raise UsageError(f"SURREAL_BUDGET must be a positive integer, got {raw!r}")
    return n


def main(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.conv = la.convention(args.convention) if hasattr(args, "convention") else la.DEFAULT_CONVENTION
        runs = _env_budget()
        if getattr(args, "limit", None) is not None and args.command == "eval":
            if args.limit < 1:
                raise UsageError("--limit must be positive")
            runs = args.limit
        if getattr(args, "limit", None) is not None and args.command == "signs" and args.limit < 0:
            raise UsageError("--limit must be non-negative")
        with budget(runs or get_budget()):
            return args.func(args, out)
    except UsageError as exc:
        err.write(f"signseq: usage error: {exc}\n")
        return EXIT_USAGE
    except ParseError as exc:
        err.write(f"signseq: syntax error: {exc}\n")
        return 1
    except (EvalError, NumberError, ValueError) as exc:
        err.write(f"signseq: error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
