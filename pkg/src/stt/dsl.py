"""Concrete syntax: ``.stt`` theory files, terms, contexts, and printing.

Theory files are a sequence of declarations, each introduced by a keyword
(``theory``, ``type``, ``tyeq``, ``term``, ``eq``) and free to span lines::

    type Fun/2
    tyeq fold [] Fun(D, D) == D orient ltr
    term abs [A B] : (x:A. B) -> Fun(A, B)
    eq beta [A B] (t : (x:A) B), (a : A) : B
      = app<A, B>(abs<A, B>((z:A. t[z])), a) == t[a]

Terms name their variables; names are compiled away to de Bruijn indices::

    app<Unit, Unit>(abs<Unit, Unit>((x:Unit. x)), u())
    t[u()/x]                       # explicit substitution
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from typing import Optional, Sequence

from .context import Context
from .errors import DslError, SortError, ValidationError
from .signature import (
    SecondOrderArity,
    TermEquation,
    TermOp,
    Theory,
    TypeEquation,
    TypeOp,
    diagnose,
)
from .term import MVar, Op, Subst, Var, check
from .types import Meta, Orientation, TyOp, show_type, ty_normalize, ty_subst

KEYWORDS = {"theory", "type", "tyeq", "term", "eq"}


@dataclass(frozen=True)
class SourceSpan:
    file: str
    line: int
    col_start: int
    col_end: int

    def __str__(self):
        return f"{self.file}:{self.line}:{self.col_start}-{self.col_end}"


@dataclass(frozen=True)
class Token:
    kind: str  # ident, int, sym, eof
    text: str
    span: SourceSpan


_TOKEN = re.compile(
    r"(?P<ws>[ \t\r\f]+)|(?P<nl>\n)|(?P<comment>#[^\n]*)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_']*)|(?P<int>\d+)"
    r"|(?P<sym>->|==|[()\[\]<>,:./=\-])"
)


def tokenize(text: str, file: str = "<input>") -> list:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise DslError("SyntaxError", f"unexpected character {text[pos]!r}",
                           SourceSpan(file, line, col, col))
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind in ("ident", "int", "sym"):
            tokens.append(Token(kind, m.group(), SourceSpan(file, line, col, col + len(m.group()) - 1)))
        pos = m.end()
    col = pos - line_start + 1
    tokens.append(Token("eof", "", SourceSpan(file, line, col, col)))
    return tokens


# raw (named) syntax, produced by the parser and elaborated against a scope


@dataclass
class RName:
    name: str
    span: SourceSpan


@dataclass
class ROp:
    name: str
    span: SourceSpan
    inst: list
    params: list  # of RName
    args: list  # of RArg


@dataclass
class RArg:
    binders: list  # of (name, TypeExpr or None)
    body: object


@dataclass
class RHole:
    name: str
    span: SourceSpan
    sub: list


@dataclass
class RSubst:
    body: object
    arg: object
    name: str
    span: SourceSpan


class Parser:
    def __init__(self, text: str, file: str = "<input>", theory: Optional[Theory] = None):
        self.file = file
        self.toks = tokenize(text, file)
        self.i = 0
        self.ops = {} if theory is None else {o.name: o for o in theory.term_ops}
        self.type_ops = {} if theory is None else {o.name: o for o in theory.type_ops}

    # -- token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k=1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, text, kind="sym") -> bool:
        return self.tok.kind == kind and self.tok.text == text

    def error(self, message, tok=None):
        tok = tok or self.tok
        found = tok.text or "end of input"
        return DslError("SyntaxError", f"{message} (found {found!r})", tok.span)

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def expect(self, text, kind="sym") -> Token:
        if not self.at(text, kind):
            raise self.error(f"expected {text!r}")
        return self.advance()

    def ident(self) -> Token:
        if self.tok.kind != "ident" or self.tok.text in KEYWORDS:
            raise self.error("expected an identifier")
        return self.advance()

    def accept(self, text) -> bool:
        if self.at(text):
            self.advance()
            return True
        return False

    def done(self):
        if self.tok.kind != "eof":
            raise self.error("unexpected trailing input")

    # -- types
    def type_(self, metas: Sequence[str] = ()):
        t = self.ident()
        if self.accept("("):
            args = []
            if not self.at(")"):
                args.append(self.type_(metas))
                while self.accept(","):
                    args.append(self.type_(metas))
            self.expect(")")
            return TyOp(t.text, tuple(args))
        if t.text in metas:
            return Meta(list(metas).index(t.text))
        return TyOp(t.text, ())

    def meta_list(self) -> list:
        names = []
        self.expect("[")
        while not self.at("]"):
            names.append(self.ident().text)
            self.accept(",")
        self.expect("]")
        return names

    # -- terms
    def term(self, holes: Sequence[str] = ()):
        t = self.atom(holes)
        while self.at("["):
            start = self.advance()
            arg = self.term(holes)
            self.expect("/")
            name = self.ident()
            self.expect("]")
            t = RSubst(t, arg, name.text, start.span)
        return t

    def atom(self, holes):
        if self.accept("("):
            t = self.term(holes)
            self.expect(")")
            return t
        name = self.ident()
        if name.text in self.ops:
            return self.op_app(name, holes)
        if name.text in holes:
            sub = []
            if self.accept("["):
                if not self.at("]"):
                    sub.append(self.term(holes))
                    while self.accept(","):
                        sub.append(self.term(holes))
                self.expect("]")
            return RHole(name.text, name.span, sub)
        if self.at("(") or self.at("<"):
            raise DslError("UnknownIdentifier", f"no term operator {name.text!r}", name.span)
        return RName(name.text, name.span)

    def op_app(self, name, holes):
        inst, params, args = [], [], []
        if self.accept("<"):
            if not self.at(">"):
                inst.append(self.type_(self._metas))
                while self.accept(","):
                    inst.append(self.type_(self._metas))
            self.expect(">")
        if self.accept("["):
            while not self.at("]"):
                t = self.ident()
                params.append(RName(t.text, t.span))
                if not self.at("]"):
                    self.expect(",")
            self.expect("]")
        self.expect("(")
        if not self.at(")"):
            args.append(self.arg(holes))
            while self.accept(","):
                args.append(self.arg(holes))
        self.expect(")")
        return ROp(name.text, name.span, inst, params, args)

    _metas: Sequence[str] = ()

    def arg(self, holes):
        nxt = self.peek()
        if (self.at("(") and nxt.kind == "ident" and nxt.text not in self.ops
                and self.peek(2).kind == "sym" and self.peek(2).text in (":", ".", ",")):
            self.advance()
            binders = []
            while True:
                b = self.ident().text
                ann = self.type_(self._metas) if self.accept(":") else None
                binders.append((b, ann))
                if not self.accept(","):
                    break
            self.expect(".")
            body = self.term(holes)
            self.expect(")")
            return RArg(binders, body)
        return RArg([], self.term(holes))

    # -- theory files
    def theory(self) -> Theory:
        name = "anonymous"
        type_ops, type_eqs, term_ops, term_eqs = [], [], [], []
        spans = {}
        while self.tok.kind != "eof":
            kw = self.tok
            if kw.kind != "ident" or kw.text not in KEYWORDS:
                raise self.error("expected a declaration keyword (theory, type, tyeq, term, eq)")
            self.advance()
            if kw.text == "theory":
                parts = []
                while self.tok.kind != "eof" and self.tok.span.line == kw.span.line:
                    parts.append(self.advance().text)
                if not parts:
                    raise self.error("expected a theory name")
                name = "".join(parts)
            elif kw.text == "type":
                t = self.ident()
                self.expect("/")
                if self.tok.kind != "int":
                    raise self.error("expected an arity")
                arity = int(self.advance().text)
                type_ops.append(TypeOp(t.text, arity))
                spans.setdefault(t.text, t.span)
                self.type_ops[t.text] = type_ops[-1]
            elif kw.text == "tyeq":
                eq_name = f"tyeq{len(type_eqs) + 1}"
                span = kw.span
                if self.tok.kind == "ident" and self.peek().kind == "sym" and self.peek().text == "[":
                    t = self.ident()
                    eq_name, span = t.text, t.span
                metas = self.meta_list() if self.at("[") else []
                lhs = self.type_(metas)
                self.expect("==")
                rhs = self.type_(metas)
                orient = self.orientation()
                type_eqs.append(TypeEquation(eq_name, len(metas), lhs, rhs, orient, tuple(metas)))
                spans.setdefault(eq_name, span)
            elif kw.text == "term":
                op = self.term_decl()
                term_ops.append(op)
                spans.setdefault(op.name, self._last_span)
                self.ops[op.name] = op
            else:
                eq = self.eq_decl()
                term_eqs.append(eq)
                spans.setdefault(eq.name, self._last_span)
        th = Theory(name, tuple(type_ops), tuple(type_eqs), tuple(term_ops), tuple(term_eqs))
        th._cache["spans"] = spans
        return th

    def orientation(self):
        if self.tok.kind == "ident" and self.tok.text == "orient":
            self.advance()
            t = self.ident()
            if t.text not in ("ltr", "none"):
                raise self.error("expected 'ltr' or 'none'", t)
            return Orientation(t.text)
        return Orientation.LTR

    def _binder_item(self, metas):
        if self.tok.kind == "ident" and self.peek().kind == "sym" and self.peek().text == ":":
            name = self.advance().text
            self.advance()
            return name, self.type_(metas)
        return None, self.type_(metas)

    def term_decl(self) -> TermOp:
        t = self.ident()
        self._last_span = t.span
        metas = self.meta_list() if self.at("[") else []
        self.expect(":")
        premisses = []
        if not self.at("->"):
            premisses.append(self.premiss(metas))
            while self.accept(","):
                premisses.append(self.premiss(metas))
        self.expect("->")
        params = []
        if self.accept("["):
            while not self.at("]"):
                params.append(self._binder_item(metas)[1])
                if not self.at("]"):
                    self.expect(",")
            self.expect("]")
        result = self.type_(metas)
        ar = SecondOrderArity(len(metas), tuple(premisses), tuple(params), result)
        return TermOp(t.text, ar, tuple(metas))

    def premiss(self, metas):
        self.expect("(")
        items = [self._binder_item(metas)]
        while self.accept(","):
            items.append(self._binder_item(metas))
        if self.accept("."):
            result = self.type_(metas)
            self.expect(")")
            return tuple(ty for _, ty in items), result
        self.expect(")")
        if len(items) != 1 or items[0][0] is not None:
            raise self.error("a premiss without binders is a single type")
        return (), items[0][1]

    def eq_decl(self) -> TermEquation:
        t = self.ident()
        self._last_span = t.span
        metas = self.meta_list() if self.at("[") else []
        holes, hole_names = [], []
        while self.at("("):
            self.advance()
            h = self.ident()
            self.expect(":")
            binders = []
            if self.accept("("):
                binders.append(self._binder_item(metas)[1])
                while self.accept(","):
                    binders.append(self._binder_item(metas)[1])
                self.expect(")")
            holes.append((tuple(binders), self.type_(metas)))
            hole_names.append(h.text)
            self.expect(")")
            if not self.accept(","):
                break
        self.expect(":")
        param_names, params = [], []
        if self.accept("["):
            while not self.at("]"):
                y = self.ident()
                self.expect(":")
                param_names.append(y.text)
                params.append(self.type_(metas))
                if not self.at("]"):
                    self.expect(",")
            self.expect("]")
        result = self.type_(metas)
        self.expect("=")
        self._metas = metas
        try:
            lhs_raw = self.term(hole_names)
            self.expect("==")
            rhs_raw = self.term(hole_names)
        finally:
            self._metas = ()
        orient = self.orientation()
        eb = _MetaElab(self.ops, metas, hole_names, [(b, r) for b, r in holes])
        lhs = eb.elab(lhs_raw, list(param_names))
        rhs = eb.elab(rhs_raw, list(param_names))
        return TermEquation(
            t.text, len(metas), tuple(holes), tuple(params), result, lhs, rhs, orient,
            tuple(metas), tuple(hole_names), tuple(param_names),
        )


# ---------------------------------------------------------------------------
# elaboration: names -> de Bruijn


def _lookup(scope, name, span):
    for k in range(len(scope) - 1, -1, -1):
        if scope[k] == name:
            return len(scope) - 1 - k
    raise DslError("UnboundVariable", f"variable {name!r} is not in scope", span)


class _MetaElab:
    """Elaborates schematic equation sides; sorts stay symbolic."""

    def __init__(self, ops, metas, hole_names, holes):
        self.ops, self.metas, self.hole_names, self.holes = ops, metas, hole_names, holes

    def elab(self, r, scope):
        if isinstance(r, RName):
            return Var(_lookup(scope, r.name, r.span))
        if isinstance(r, RHole):
            i = self.hole_names.index(r.name)
            return MVar(i, tuple(self.elab(s, scope) for s in r.sub))
        if isinstance(r, RSubst):
            return Subst(self.elab(r.body, scope + [r.name]), self.elab(r.arg, scope))
        op = self.ops[r.name]
        _arg_shape(op, r)
        params = tuple(_lookup(scope, p.name, p.span) for p in r.params)
        args = []
        for a, (binders, _) in zip(r.args, op.arity.premisses):
            for (bname, ann), want in zip(a.binders, binders):
                if ann is not None:
                    want_i = ty_subst(want, r.inst) if len(r.inst) == op.arity.meta_count else None
                    if want_i is not None and ann != want_i:
                        raise DslError("SortMismatch", f"binder {bname} of {op.name} is annotated "
                                       f"{show_type(ann, self.metas)}, expected {show_type(want_i, self.metas)}",
                                       r.span)
            args.append(self.elab(a.body, scope + [b for b, _ in a.binders]))
        return Op(op, tuple(r.inst), params, tuple(args))


def _arg_shape(op, r):
    if len(r.args) != len(op.arity.premisses):
        raise DslError("ArityMismatch", f"{op.name} takes {len(op.arity.premisses)} argument(s), "
                       f"given {len(r.args)}", r.span)
    for i, (a, k) in enumerate(zip(r.args, op.binder_counts)):
        if len(a.binders) != k:
            raise DslError("ArityMismatch", f"argument {i} of {op.name} binds {k} variable(s), "
                           f"given {len(a.binders)}", r.span)


class _Elab:
    """Elaborates ground terms in a named, sorted scope."""

    def __init__(self, theory):
        self.theory = theory

    def elab(self, r, names, sorts):
        theory = self.theory
        if isinstance(r, RName):
            return Var(_lookup(names, r.name, r.span))
        if isinstance(r, RHole):
            raise DslError("SyntaxError", "placeholders only occur in equations", r.span)
        if isinstance(r, RSubst):
            arg = self.elab(r.arg, names, sorts)
            a = self._sort(arg, sorts, r.span)
            body = self.elab(r.body, names + [r.name], sorts + [a])
            return Subst(body, arg)
        op = theory.term_op(r.name)
        _arg_shape(op, r)
        if len(r.inst) != op.arity.meta_count:
            raise DslError("ArityMismatch", f"{op.name} takes {op.arity.meta_count} type argument(s), "
                           f"given {len(r.inst)}", r.span)
        try:
            inst = tuple(ty_normalize(theory, c) for c in r.inst)
        except SortError as exc:  # pragma: no cover - normalization raises other errors
            raise DslError("SortMismatch", str(exc), r.span) from None
        params = tuple(_lookup(names, p.name, p.span) for p in r.params)
        args = []
        for a, (binders, _) in zip(r.args, op.arity.premisses):
            bsorts = [ty_normalize(theory, ty_subst(b, inst)) for b in binders]
            for (bname, ann), want in zip(a.binders, bsorts):
                if ann is not None and ty_normalize(theory, ann) != want:
                    raise DslError("SortMismatch", f"binder {bname} of {op.name} is annotated "
                                   f"{show_type(ann)}, expected {show_type(want)}", r.span)
            args.append(self.elab(a.body, names + [b for b, _ in a.binders], sorts + bsorts))
        return Op(op, inst, params, tuple(args))

    def _sort(self, t, sorts, span):
        try:
            return check(self.theory, Context(tuple(sorts)), t)
        except SortError as exc:
            raise DslError(type(exc).__name__, str(exc), span) from None


# ---------------------------------------------------------------------------
# public parsing API


def parse_theory(text: str, file: str = "<input>") -> Theory:
    """Parse a theory file into an (unvalidated) :class:`Theory`."""
    return Parser(text, file).theory()


def load_theory(text: str, file: str = "<input>") -> Theory:
    """Parse and validate; validation diagnostics carry source spans."""
    th = parse_theory(text, file)
    problems = diagnose(th)
    if problems:
        spans = th._cache.get("spans", {})
        raise ValidationError([replace(d, span=spans.get(d.location)) for d in problems])
    return th


def parse_type(text: str, theory: Optional[Theory] = None, metas: Sequence[str] = ()):
    p = Parser(text, "<type>", theory)
    t = p.type_(metas)
    p.done()
    if theory is not None:
        problems = [d for d in _type_diags(theory, t, len(metas))]
        if problems:
            raise DslError(problems[0].kind, problems[0].reason, None)
        t = ty_normalize(theory, t)
    return t


def _type_diags(theory, t, m):
    from .signature import _type_problems

    return _type_problems(theory, t, m, "<type>")


def parse_context(text: str, theory: Theory):
    """``"x:A, y:B"`` to ``(names, Context)``; the empty string is the empty context."""
    p = Parser(text, "<context>", theory)
    names, sorts = [], []
    while p.tok.kind != "eof":
        n = p.ident()
        p.expect(":")
        start = p.tok
        a = p.type_()
        problems = _type_diags(theory, a, 0)
        if problems:
            raise DslError(problems[0].kind, problems[0].reason, start.span)
        names.append(n.text)
        sorts.append(ty_normalize(theory, a))
        if p.tok.kind != "eof":
            p.expect(",")
    return names, Context(tuple(sorts))


def parse_term(text: str, theory: Theory, context=""):
    """Parse a term (possibly with explicit substitutions) in a named context.

    ``context`` is either context text (``"x:A, y:B"``) or a ``(names, Context)`` pair.
    Names, arities and binder annotations are resolved here; whether the
    arguments have the right sorts is left to :func:`stt.term.check`.
    """
    if isinstance(context, str):
        names, ctx = parse_context(context, theory)
    else:
        names, ctx = context
    p = Parser(text, "<term>", theory)
    raw = p.term()
    p.done()
    _check_types(theory, raw)
    return _Elab(theory).elab(raw, list(names), list(ctx.sorts))


def _check_types(theory, r):
    if isinstance(r, ROp):
        for c in r.inst:
            problems = _type_diags(theory, c, 0)
            if problems:
                raise DslError(problems[0].kind, problems[0].reason, r.span)
        for a in r.args:
            for _, ann in a.binders:
                if ann is not None:
                    problems = _type_diags(theory, ann, 0)
                    if problems:
                        raise DslError(problems[0].kind, problems[0].reason, r.span)
            _check_types(theory, a.body)
    elif isinstance(r, RSubst):
        _check_types(theory, r.body)
        _check_types(theory, r.arg)


# ---------------------------------------------------------------------------
# printing


def print_type(a, metas: Optional[Sequence[str]] = None) -> str:
    return show_type(a, metas)


def default_names(n: int) -> list:
    return [f"x{i}" for i in range(n)]


class _Printer:
    def __init__(self, theory, metas=None, holes=(), bare=False):
        self.theory, self.metas, self.holes = theory, metas, list(holes)
        self.bare = bare  # rule notation: no instantiations, untyped binders
        self.reserved = {o.name for o in theory.term_ops} | set(self.holes) | KEYWORDS

    def fresh(self, scope):
        name = f"x{len(scope)}"
        while name in scope or name in self.reserved:
            name += "'"
        return name

    def show(self, t, scope, subst_body=False):
        if isinstance(t, Var):
            return scope[len(scope) - 1 - t.index]
        if isinstance(t, MVar):
            name = self.holes[t.index]
            if t.sub or subst_body:
                return f"{name}[{', '.join(self.show(s, scope) for s in t.sub)}]"
            return name
        if isinstance(t, Subst):
            x = self.fresh(scope)
            return f"{self.show(t.body, scope + [x], subst_body=True)}[{self.show(t.arg, scope)}/{x}]"
        op = t.op
        out = op.name
        if t.inst and not self.bare:
            out += "<" + ", ".join(show_type(c, self.metas) for c in t.inst) + ">"
        if t.params:
            out += "[" + ", ".join(scope[len(scope) - 1 - p] for p in t.params) + "]"
        args = []
        for a, (binders, _) in zip(t.args, op.arity.premisses):
            if not binders:
                args.append(self.show(a, scope))
                continue
            inner = list(scope)
            items = []
            for b in binders:
                x = self.fresh(inner)
                inner.append(x)
                items.append(x if self.bare else f"{x}:{show_type(self._binder_sort(b, t.inst), self.metas)}")
            if self.bare:
                args.append(f"({', '.join(items)}){self.show(a, inner)}")
            else:
                args.append(f"({', '.join(items)}. {self.show(a, inner)})")
        return f"{out}({', '.join(args)})"

    def _binder_sort(self, b, inst):
        a = ty_subst(b, inst)
        if self.metas is None:
            return ty_normalize(self.theory, a)
        return a


def print_term(theory: Theory, names, t) -> str:
    """Render ``t``; ``names`` names the context (a Context gets ``x0, x1, ...``)."""
    if isinstance(names, Context):
        names = default_names(len(names))
    return _Printer(theory).show(t, list(names))


def print_context(names: Sequence[str], ctx: Context) -> str:
    return ", ".join(f"{n}:{show_type(s)}" for n, s in zip(names, ctx.sorts))


def print_equation_side(theory: Theory, eq: TermEquation, side, bare: bool = False) -> str:
    pr = _Printer(theory, metas=list(eq.meta_names) or [f"M{i}" for i in range(eq.meta_count)],
                  holes=eq.placeholder_names or [f"p{i}" for i in range(len(eq.placeholders))],
                  bare=bare)
    scope = list(eq.param_names) or [f"y{i}" for i in range(len(eq.param_context))]
    return pr.show(side, scope)


def _metas(names, m):
    return list(names) or [f"M{i}" for i in range(m)]


def print_theory(theory: Theory) -> str:
    """Canonical ``.stt`` text; parsing it back gives an equal theory."""
    lines = [f"theory {theory.name}"]
    for t in theory.type_ops:
        lines.append(f"type {t.name}/{t.arity}")
    for e in theory.type_eqs:
        ms = _metas(e.meta_names, e.meta_count)
        lines.append(f"tyeq {e.name} [{' '.join(ms)}] {show_type(e.lhs, ms)} == "
                     f"{show_type(e.rhs, ms)} orient {e.orientation.value}")
    for op in theory.term_ops:
        ms = _metas(op.meta_names, op.arity.meta_count)
        head = f"term {op.name}" + (f" [{' '.join(ms)}]" if ms else "")
        prem = []
        for binders, res in op.arity.premisses:
            if binders:
                bs = ", ".join(f"x{j}:{show_type(b, ms)}" for j, b in enumerate(binders))
                prem.append(f"({bs}. {show_type(res, ms)})")
            else:
                prem.append(f"({show_type(res, ms)})")
        params = ""
        if op.arity.params:
            params = "[" + ", ".join(f"y{j}:{show_type(b, ms)}" for j, b in enumerate(op.arity.params)) + "] "
        lines.append(f"{head} : {', '.join(prem)}{' ' if prem else ''}-> {params}{show_type(op.arity.result, ms)}")
    for eq in theory.term_eqs:
        ms = _metas(eq.meta_names, eq.meta_count)
        hn = list(eq.placeholder_names) or [f"p{i}" for i in range(len(eq.placeholders))]
        holes = []
        for name, (binders, res) in zip(hn, eq.placeholders):
            bs = f"({', '.join(show_type(b, ms) for b in binders)}) " if binders else ""
            holes.append(f"({name} : {bs}{show_type(res, ms)})")
        pn = list(eq.param_names) or [f"y{i}" for i in range(len(eq.param_context))]
        params = ""
        if eq.param_context:
            params = "[" + ", ".join(f"{n}:{show_type(b, ms)}" for n, b in zip(pn, eq.param_context)) + "] "
        head = f"eq {eq.name}" + (f" [{' '.join(ms)}]" if ms else "")
        lines.append(
            f"{head} {', '.join(holes)} : {params}{show_type(eq.result, ms)}\n"
            f"  = {print_equation_side(theory, eq, eq.lhs)}\n"
            f" == {print_equation_side(theory, eq, eq.rhs)} orient {eq.orientation.value}"
        )
    return "\n".join(lines) + "\n"


def describe_theory(theory: Theory) -> str:
    """Summary in rule notation: ``A, B : * |> pair : A, B -> Prod(A, B)``."""

    def prefix(ms):
        return f"{', '.join(ms)} : * |> " if ms else "|> "

    def arity_text(op, ms):
        prem = []
        for binders, res in op.arity.premisses:
            b = f"({', '.join(show_type(x, ms) for x in binders)})" if binders else ""
            prem.append(b + show_type(res, ms))
        concl = show_type(op.arity.result, ms)
        if op.arity.params:
            concl = f"({', '.join(show_type(x, ms) for x in op.arity.params)}){concl}"
        return (", ".join(prem) + " -> " if prem else "") + concl

    out = [f"theory {theory.name}", "types:"]
    for t in theory.type_ops:
        ms = [chr(ord("A") + i) for i in range(t.arity)]
        head = f"{t.name}({', '.join(ms)})" if ms else t.name
        out.append(f"  {prefix(ms)}{head} : *")
    for e in theory.type_eqs:
        ms = _metas(e.meta_names, e.meta_count)
        out.append(f"  {prefix(ms)}{show_type(e.lhs, ms)} = {show_type(e.rhs, ms)}"
                   f"   [{e.name}, {e.orientation.value}]")
    out.append("terms:")
    for op in theory.term_ops:
        ms = _metas(op.meta_names, op.arity.meta_count)
        out.append(f"  {prefix(ms)}{op.name} : {arity_text(op, ms)}")
    if theory.term_eqs:
        out.append("equations:")
    for eq in theory.term_eqs:
        ms = _metas(eq.meta_names, eq.meta_count)
        hn = list(eq.placeholder_names) or [f"p{i}" for i in range(len(eq.placeholders))]
        holes = []
        for name, (binders, res) in zip(hn, eq.placeholders):
            b = f"({', '.join(show_type(x, ms) for x in binders)})" if binders else ""
            holes.append(f"{name} : {b}{show_type(res, ms)}")
        out.append(f"  {prefix(ms)}{', '.join(holes)} |- "
                   f"{print_equation_side(theory, eq, eq.lhs, bare=True)} = "
                   f"{print_equation_side(theory, eq, eq.rhs, bare=True)} : {show_type(eq.result, ms)}"
                   f"   [{eq.name}, {eq.orientation.value}]")
    return "\n".join(out) + "\n"


def parse_type_list(text: str, theory: Theory) -> list:
    """Comma-separated ground types, e.g. ``"Fun(o, o), o"``; empty text gives ``[]``."""
    p = Parser(text, "<types>", theory)
    out = []
    while p.tok.kind != "eof":
        start = p.tok
        a = p.type_()
        problems = _type_diags(theory, a, 0)
        if problems:
            raise DslError(problems[0].kind, problems[0].reason, start.span)
        out.append(ty_normalize(theory, a))
        if p.tok.kind != "eof":
            p.expect(",")
    return out


# ---------------------------------------------------------------------------
# structured (JSON-ready) form


def type_to_json(a):
    if isinstance(a, Meta):
        return {"meta": a.index}
    return {"op": a.name, "args": [type_to_json(x) for x in a.args]}


def term_to_json(t):
    """Nested objects mirroring the term grammar."""
    if isinstance(t, Var):
        return {"kind": "var", "index": t.index}
    if isinstance(t, Op):
        return {
            "kind": "op",
            "name": t.op.name,
            "inst": [type_to_json(c) for c in t.inst],
            "params": list(t.params),
            "args": [term_to_json(a) for a in t.args],
        }
    if isinstance(t, Subst):
        return {"kind": "subst", "body": term_to_json(t.body), "arg": term_to_json(t.arg)}
    return {"kind": "placeholder", "index": t.index, "sub": [term_to_json(s) for s in t.sub]}
