"""``stt``: command-line access to the kernel.

Exit codes: 0 success (or ``Equal``), 1 ``NotProvedEqual`` or a failed
check, 2 parse or validation error, 3 rewriting budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .clone import hom
from .context import Context
from .dsl import (
    default_names,
    describe_theory,
    load_theory,
    parse_context,
    parse_term,
    parse_type,
    parse_type_list,
    print_context,
    print_term,
    term_to_json,
    type_to_json,
)
from .equations import Verdict, normalize_with_steps, term_equal
from .errors import (
    BudgetExhausted,
    CarrierTooLarge,
    DslError,
    NonEnumerableOperator,
    SortError,
    SttError,
    UnknownBuiltin,
    UnorientedEquation,
    ValidationError,
)
from .finmodel import denotation_table, stlc_model
from .gen import closed_universe
from .laws import SUITES, all_laws, run_law
from .polysem import oracle_report
from .signature import builtin
from .term import check
from .types import DEFAULT_BUDGET, show_type

OK, FAILED, BAD_INPUT, BUDGET = 0, 1, 2, 3


class Report:
    """Collects human lines and a structured payload; prints one of them."""

    def __init__(self, fmt: str):
        self.fmt = fmt
        self.lines = []
        self.data = {}

    def line(self, text=""):
        self.lines.append(text)

    def emit(self, out):
        if self.fmt == "json":
            out.write(json.dumps(self.data, indent=2, sort_keys=True) + "\n")
        else:
            for ln in self.lines:
                out.write(ln + "\n")


def _budget(args) -> int:
    if args.budget is not None:
        return args.budget
    env = os.environ.get("STT_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


def _theory(args):
    if args.theory:
        path = Path(args.theory)
        return load_theory(path.read_text(encoding="utf-8"), file=str(path))
    return builtin(args.builtin or "stlc")


def _context(args, theory):
    return parse_context(args.context or "", theory)


# ---------------------------------------------------------------------------
# subcommands


def cmd_check(args, theory, rep):
    names, ctx = _context(args, theory)
    t = parse_term(args.term, theory, (names, ctx))
    a = check(theory, ctx, t)
    rep.line(show_type(a))
    rep.data = {"sort": type_to_json(a), "sort_text": show_type(a)}
    return OK


def cmd_normalize(args, theory, rep):
    names, ctx = _context(args, theory)
    t = parse_term(args.term, theory, (names, ctx))
    a = check(theory, ctx, t)
    nf, steps = normalize_with_steps(theory, t, _budget(args))
    text = print_term(theory, names, nf)
    rep.line(text)
    rep.data = {"normal_form": term_to_json(nf), "text": text, "steps": steps,
                "sort": type_to_json(a)}
    return OK


def cmd_eq(args, theory, rep):
    if args.term2 is None:
        raise DslError("SyntaxError", "eq needs --term2", None)
    names, ctx = _context(args, theory)
    t = parse_term(args.term, theory, (names, ctx))
    u = parse_term(args.term2, theory, (names, ctx))
    verdict = term_equal(theory, ctx, t, u, _budget(args))
    rep.line(str(verdict))
    rep.data = {"verdict": str(verdict)}
    return OK if verdict is Verdict.EQUAL else FAILED


def cmd_enumerate(args, theory, rep):
    if args.codomain is None:
        raise DslError("SyntaxError", "enumerate needs --codomain", None)
    domain = parse_type_list(args.domain or "", theory)
    b = parse_type(args.codomain, theory)
    hs = hom(theory, domain, b, args.size, _budget(args))
    names = default_names(len(domain))
    texts = [print_term(theory, names, h.representative) for h in hs]
    rep.line(f"# {print_context(names, Context(tuple(domain))) or '(empty)'} |- {show_type(b)}"
             f"   size <= {args.size}")
    for text in texts:
        rep.line(text)
    note = " (upper bound: distinct normal forms are not proved distinct)" if hs.upper_bound else ""
    rep.line(f"count: {len(hs)}{note}")
    rep.data = {
        "domain": [type_to_json(a) for a in domain],
        "codomain": type_to_json(b),
        "size_bound": args.size,
        "count": len(hs),
        "terms_enumerated": hs.terms_seen,
        "upper_bound": hs.upper_bound,
        "representatives": [term_to_json(h.representative) for h in hs],
        "texts": texts,
    }
    return OK


def cmd_laws(args, theory, rep):
    suites = args.suite or None
    reports = []
    for law in all_laws(theory, suites):
        r = run_law(law, args.samples, args.seed)
        reports.append(r)
        status = "PASS" if r.passed else "FAIL"
        rep.line(f"{status} {r.name}: {r.checked} checked, {r.failures} failed")
        if not r.passed:
            rep.line(f"  violated law: {r.name}")
            if r.reproducer:
                rep.line(f"  minimized reproducer: {r.reproducer}")
            if r.error:
                rep.line(f"  error: {r.error}")
    ok = all(r.passed for r in reports)
    rep.line("all suites pass" if ok else "some laws failed")
    rep.data = {
        "seed": args.seed,
        "samples": args.samples,
        "passed": ok,
        "laws": [
            {"name": r.name, "checked": r.checked, "failures": r.failures,
             "reproducer": r.reproducer, "error": r.error}
            for r in reports
        ],
    }
    return OK if ok else FAILED


def cmd_oracle(args, theory, rep):
    names, ctx = _context(args, theory)
    ops = theory.term_ops
    if args.op:
        op = theory.term_op(args.op)
        if op is None:
            raise DslError("UnknownIdentifier", f"no term operator {args.op!r}", None)
        ops = (op,)
    targets = [parse_type(args.codomain, theory)] if args.codomain else list(
        closed_universe(theory, ctx.sorts))
    rows = []
    for op in ops:
        for b in targets:
            r = oracle_report(theory, op, ctx, b, args.size)
            rows.append(r)
            if not r.agree or args.verbose:
                rep.line(f"{'ok' if r.agree else 'MISMATCH'} {op.name} at {show_type(b)}: "
                         f"{r.extension_size} tuples, {r.terms_size} terms")
            for t in r.unexpected_terms:
                rep.line(f"  term without tuple: {print_term(theory, names, t)}")
            for e in r.missing_terms:
                rep.line(f"  tuple without term: inst={[show_type(c) for c in e.inst]} {e.tokens}")
    ok = all(r.agree for r in rows)
    rep.line(f"{'agreement' if ok else 'disagreement'}: {len(rows)} operator/sort pairs checked")
    rep.data = {
        "agree": ok,
        "checks": [
            {"op": r.op, "agree": r.agree, "tuples": r.extension_size, "terms": r.terms_size,
             "mismatches": len(r.missing_terms) + len(r.unexpected_terms)}
            for r in rows
        ],
    }
    return OK if ok else FAILED


def cmd_interp(args, theory, rep):
    names, ctx = _context(args, theory)
    t = parse_term(args.term, theory, (names, ctx))
    a = check(theory, ctx, t)
    model = stlc_model(theory, args.base_size)
    table = denotation_table(model, ctx, t)
    rep.line(f"# {show_type(a)} with base carriers of size {args.base_size}")
    for env, value in table:
        where = ", ".join(f"{n}={x!r}" for n, x in zip(names, env)) or "(empty environment)"
        rep.line(f"{where} -> {value!r}")
    rep.data = {"sort": type_to_json(a), "base_size": args.base_size,
                "table": [{"env": [repr(x) for x in env], "value": repr(v)} for env, v in table]}
    return OK


def cmd_show(args, theory, rep):
    text = describe_theory(theory)
    rep.lines.extend(text.rstrip("\n").split("\n"))
    rep.data = {
        "name": theory.name,
        "type_ops": [{"name": t.name, "arity": t.arity} for t in theory.type_ops],
        "type_eqs": [e.name for e in theory.type_eqs],
        "term_ops": [o.name for o in theory.term_ops],
        "term_eqs": [e.name for e in theory.term_eqs],
        "summary": text,
    }
    return OK


COMMANDS = {
    "check": (cmd_check, "sort of a term"),
    "normalize": (cmd_normalize, "normal form of a term under the oriented equations"),
    "eq": (cmd_eq, "decide whether two terms have the same normal form"),
    "enumerate": (cmd_enumerate, "bounded hom-set of the theory's clone"),
    "laws": (cmd_laws, "run the randomized property suites"),
    "oracle": (cmd_oracle, "compare term formation with the operator-extension oracle"),
    "interp": (cmd_interp, "denotation table in the finite model (simply-typed theories)"),
    "show": (cmd_show, "summary of a theory"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stt", description="Kernel for simple type theories.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        src = p.add_mutually_exclusive_group()
        src.add_argument("--builtin", help="stlc, stlc(N), ulc, comp-lc or monoid (default stlc)")
        src.add_argument("--theory", help="path to a .stt theory file")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--budget", type=int, default=None,
                       help="rewriting step budget (default $STT_BUDGET or 10000)")
        if name in ("check", "normalize", "eq", "interp", "oracle"):
            p.add_argument("--context", default="", help='typed context, e.g. "x:o, f:Fun(o, o)"')
        if name in ("check", "normalize", "eq", "interp"):
            p.add_argument("--term", required=True)
        if name == "eq":
            p.add_argument("--term2")
        if name == "enumerate":
            p.add_argument("--domain", default="", help='comma-separated sorts, e.g. "o, o"')
        if name in ("enumerate", "oracle"):
            p.add_argument("--codomain")
            p.add_argument("--size", type=int, default=3 if name == "enumerate" else 4)
        if name == "oracle":
            p.add_argument("--op", help="restrict to one operator")
            p.add_argument("--verbose", action="store_true")
        if name == "laws":
            p.add_argument("--samples", type=int, default=100)
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--suite", action="append", choices=sorted(SUITES))
        if name == "interp":
            p.add_argument("--base-size", type=int, default=2)
    return parser


def _diagnose(exc, err):
    if isinstance(exc, ValidationError):
        for d in exc.diagnostics:
            err.write(f"error: {d}\n")
    elif isinstance(exc, DslError):
        where = f"{exc.span}: " if exc.span is not None else ""
        err.write(f"error: {where}{exc.kind}: {exc.message}\n")
    else:
        err.write(f"error: {type(exc).__name__}: {exc}\n")


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    rep = Report(args.format)
    try:
        theory = _theory(args)
        code = COMMANDS[args.command][0](args, theory, rep)
    except (DslError, ValidationError, UnknownBuiltin, OSError) as exc:
        _diagnose(exc, err)
        return BAD_INPUT
    except BudgetExhausted as exc:
        _diagnose(exc, err)
        return BUDGET
    except (SortError, UnorientedEquation, NonEnumerableOperator, CarrierTooLarge, SttError) as exc:
        _diagnose(exc, err)
        return FAILED
    rep.emit(out)
    return code


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
