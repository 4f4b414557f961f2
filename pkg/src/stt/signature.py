"""Theory declarations and their validation.

A theory bundles type operators (with their argument count), oriented type
equations, term operators with second-order arities, and term equations
between schematic terms.  :func:`validate` reports every problem at once.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from functools import cached_property
from importlib import resources
from typing import Optional

from .errors import SortError, UnknownBuiltin, UnorientedEquation, ValidationError
from .term import MVar, Op, Subst, Var, infer
from .types import Meta, Orientation, TyOp, TypeExpr, metas_of, show_type, ty_normalize

__all__ = [
    "Diagnostic",
    "Orientation",
    "SecondOrderArity",
    "TermEquation",
    "TermOp",
    "Theory",
    "TypeEquation",
    "TypeOp",
    "builtin",
    "diagnose",
    "validate",
    "BUILTINS",
]


@dataclass(frozen=True)
class TypeOp:
    name: str
    arity: int


@dataclass(frozen=True)
class TypeEquation:
    name: str
    meta_count: int
    lhs: TypeExpr
    rhs: TypeExpr
    orientation: Orientation = Orientation.LTR
    meta_names: tuple = field(default=(), compare=False)


@dataclass(frozen=True)
class SecondOrderArity:
    """``(A^1...)A_1, ..., (A^n...)A_n -> (B_1...B_k)B`` over ``meta_count`` metavariables.

    ``premisses`` holds ``(binders, result)`` pairs; ``params`` are the
    ``B_j`` (empty for an unparameterised operator).
    """

    meta_count: int
    premisses: tuple
    params: tuple
    result: TypeExpr

    def types(self):
        for binders, res in self.premisses:
            yield from binders
            yield res
        yield from self.params
        yield self.result


@dataclass(frozen=True)
class TermOp:
    name: str
    arity: SecondOrderArity
    meta_names: tuple = field(default=(), compare=False)

    def __hash__(self):
        return hash(self.name)

    @cached_property
    def binder_counts(self) -> tuple:
        return tuple(len(b) for b, _ in self.arity.premisses)

    @property
    def parameterised(self) -> bool:
        return bool(self.arity.params)


@dataclass(frozen=True)
class TermEquation:
    name: str
    meta_count: int
    placeholders: tuple  # of (binders, result)
    param_context: tuple
    result: TypeExpr
    lhs: object
    rhs: object
    orientation: Orientation = Orientation.LTR
    meta_names: tuple = field(default=(), compare=False)
    placeholder_names: tuple = field(default=(), compare=False)
    param_names: tuple = field(default=(), compare=False)


@dataclass(frozen=True)
class Theory:
    name: str = "anonymous"
    type_ops: tuple = ()
    type_eqs: tuple = ()
    term_ops: tuple = ()
    term_eqs: tuple = ()
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    @cached_property
    def _type_index(self):
        return {t.name: t for t in self.type_ops}

    @cached_property
    def _term_index(self):
        return {t.name: t for t in self.term_ops}

    def type_op(self, name: str) -> Optional[TypeOp]:
        return self._type_index.get(name)

    def term_op(self, name: str) -> Optional[TermOp]:
        return self._term_index.get(name)

    def base_sorts(self) -> tuple:
        """Normal forms of the nullary type operators, in declaration order."""
        seen = {}
        for t in self.type_ops:
            if t.arity == 0:
                seen.setdefault(ty_normalize(self, TyOp(t.name)), None)
        return tuple(seen)

    def __hash__(self):
        return hash((self.name, len(self.type_ops), len(self.term_ops)))


@dataclass(frozen=True)
class Diagnostic:
    kind: str
    location: str
    reason: str
    span: object = None

    def __str__(self):
        where = f"{self.span}: " if self.span is not None else ""
        return f"{where}{self.kind} in {self.location}: {self.reason}"


# ---------------------------------------------------------------------------
# validation


def _type_problems(theory, a, meta_count, location):
    out = []
    stack = [a]
    while stack:
        x = stack.pop()
        if isinstance(x, Meta):
            if not 0 <= x.index < meta_count:
                out.append(Diagnostic(
                    "MetaIndexOutOfRange", location,
                    f"metavariable #{x.index} used but only {meta_count} declared",
                ))
            continue
        decl = theory.type_op(x.name)
        if decl is None:
            out.append(Diagnostic("UnknownTypeOp", location, f"type operator {x.name!r} is not declared"))
        elif decl.arity != len(x.args):
            out.append(Diagnostic(
                "ArityMismatch", location,
                f"{x.name} takes {decl.arity} argument(s), given {len(x.args)} in {show_type(x)}",
            ))
        stack.extend(x.args)
    return out


def _duplicates(names, what):
    seen, out = set(), []
    for n in names:
        if n in seen:
            out.append(Diagnostic("DuplicateName", n, f"{what} {n!r} declared more than once"))
        seen.add(n)
    return out


def _term_nodes(t, depth=0):
    """Yield ``(node, depth)`` for every node of a schematic term."""
    yield t, depth
    if isinstance(t, Op):
        for a, k in zip(t.args, t.op.binder_counts):
            yield from _term_nodes(a, depth + k)
    elif isinstance(t, Subst):
        yield from _term_nodes(t.body, depth + 1)
        yield from _term_nodes(t.arg, depth)
    elif isinstance(t, MVar):
        for s in t.sub:
            yield from _term_nodes(s, depth)


def _pattern_problems(eq):
    loc = eq.name
    out = []
    if not isinstance(eq.lhs, Op):
        out.append(Diagnostic("NonPatternEquation", loc, "left-hand side must be an operator application"))
        return out
    in_lhs, inst_metas = set(), set()
    for node, depth in _term_nodes(eq.lhs):
        if isinstance(node, Subst):
            out.append(Diagnostic("NonPatternEquation", loc, "explicit substitution in left-hand side"))
        elif isinstance(node, Op):
            for c in node.inst:
                inst_metas |= metas_of(c)
        elif isinstance(node, MVar):
            in_lhs.add(node.index)
            idx = [s.index for s in node.sub if isinstance(s, Var)]
            if len(idx) != len(node.sub) or len(set(idx)) != len(idx) or any(i >= depth for i in idx):
                out.append(Diagnostic(
                    "NonPatternEquation", loc,
                    f"placeholder #{node.index} must be applied to distinct locally bound variables",
                ))
    for node, _ in _term_nodes(eq.rhs):
        if isinstance(node, MVar) and node.index not in in_lhs:
            out.append(Diagnostic(
                "NonPatternEquation", loc,
                f"placeholder #{node.index} occurs on the right but not on the left",
            ))
    missing = set(range(eq.meta_count)) - inst_metas
    if missing:
        out.append(Diagnostic(
            "NonPatternEquation", loc,
            f"type metavariable(s) {sorted(missing)} not fixed by operator instantiations on the left",
        ))
    return out


def _checking_view(theory):
    # sort-checking needs type normal forms; unoriented type equations give none
    if all(e.orientation is Orientation.LTR for e in theory.type_eqs):
        return theory
    return replace(theory, type_eqs=(), _cache={})


def diagnose(theory: Theory) -> list:
    """Every problem with ``theory``; an empty list means it is valid."""
    out = []
    out += _duplicates([t.name for t in theory.type_ops], "type operator")
    out += _duplicates([t.name for t in theory.term_ops], "term operator")
    out += _duplicates([e.name for e in theory.type_eqs], "type equation")
    out += _duplicates([e.name for e in theory.term_eqs], "term equation")
    for t in theory.type_ops:
        if t.arity < 0:
            out.append(Diagnostic("ArityMismatch", t.name, "arity must be non-negative"))
    for e in theory.type_eqs:
        out += _type_problems(theory, e.lhs, e.meta_count, e.name)
        out += _type_problems(theory, e.rhs, e.meta_count, e.name)
        if e.orientation is Orientation.LTR:
            if isinstance(e.lhs, Meta):
                out.append(Diagnostic("NonPatternEquation", e.name, "left-hand side is a bare metavariable"))
            elif not metas_of(e.rhs) <= metas_of(e.lhs):
                out.append(Diagnostic("NonPatternEquation", e.name, "right-hand side has metavariables absent on the left"))
    for op in theory.term_ops:
        for a in op.arity.types():
            out += _type_problems(theory, a, op.arity.meta_count, op.name)
    type_ok = not out
    view = _checking_view(theory)
    for eq in theory.term_eqs:
        problems = []
        types = [eq.result, *eq.param_context]
        for binders, res in eq.placeholders:
            types += [*binders, res]
        for a in types:
            problems += _type_problems(theory, a, eq.meta_count, eq.name)
        for side_name, side in (("left", eq.lhs), ("right", eq.rhs)):
            for node, _ in _term_nodes(side):
                if isinstance(node, Op) and theory.term_op(node.op.name) is None:
                    problems.append(Diagnostic(
                        "UnknownTermOp", eq.name, f"term operator {node.op.name!r} is not declared",
                    ))
                if isinstance(node, Op):
                    for c in node.inst:
                        problems += _type_problems(theory, c, eq.meta_count, eq.name)
        if not problems and type_ok:
            for side_name, side in (("left", eq.lhs), ("right", eq.rhs)):
                try:
                    found = check_side(view, eq, side)
                except SortError as exc:
                    problems.append(Diagnostic("IllTypedEquationSide", eq.name, f"{side_name} side: {exc}"))
                    continue
                want = ty_normalize(view, eq.result)
                if found != want:
                    problems.append(Diagnostic(
                        "IllTypedEquationSide", eq.name,
                        f"{side_name} side has sort {show_type(found, eq.meta_names)}, "
                        f"declared {show_type(want, eq.meta_names)}",
                    ))
        if not problems and eq.orientation is Orientation.LTR:
            problems += _pattern_problems(eq)
        out += problems
    return out


def check_side(theory, eq: TermEquation, side) -> TypeExpr:
    """Sort of one side of ``eq`` in its parameter context (metavariables rigid)."""
    sorts = tuple(ty_normalize(theory, b) for b in eq.param_context)
    holes = tuple(
        (tuple(ty_normalize(theory, b) for b in binders), ty_normalize(theory, res))
        for binders, res in eq.placeholders
    )
    return infer(theory, sorts, side, holes=holes, ground=False)


def validate(theory: Theory) -> Theory:
    """Return ``theory`` unchanged if valid, else raise :class:`ValidationError`."""
    try:
        problems = diagnose(theory)
    except UnorientedEquation as exc:  # pragma: no cover - guarded by _checking_view
        problems = [Diagnostic("UnorientedEquation", theory.name, str(exc))]
    if problems:
        raise ValidationError(problems)
    return theory


# ---------------------------------------------------------------------------
# builtin theories

BUILTINS = ("stlc(n)", "ulc", "comp-lc", "monoid")


def _source(name):
    return resources.files("stt.theories").joinpath(name).read_text(encoding="utf-8")


def _base_types(n):
    names = ["o"] if n == 1 else [f"o{i}" for i in range(1, n + 1)]
    return "".join(f"type {b}/0\n" for b in names)


def builtin_source(name: str) -> str:
    """The ``.stt`` text of a builtin theory."""
    m = re.fullmatch(r"stlc(?:\((\d+)\))?", name)
    if m:
        n = 1 if m.group(1) is None else int(m.group(1))
        return f"theory stlc({n})\n" + _base_types(n) + _source("stlc.stt")
    if name == "comp-lc":
        return "theory comp-lc\n" + _base_types(1) + _source("stlc.stt") + _source("comp.stt")
    if name == "ulc":
        return _source("ulc.stt")
    if name == "monoid":
        return _source("monoid.stt")
    raise UnknownBuiltin(f"no builtin theory {name!r}; known: {', '.join(BUILTINS)}")


_loaded = {}


def builtin(name: str) -> Theory:
    """One of ``stlc`` (= ``stlc(1)``), ``stlc(n)``, ``ulc``, ``comp-lc``, ``monoid``."""
    if name == "stlc":
        name = "stlc(1)"
    hit = _loaded.get(name)
    if hit is None:
        from .dsl import load_theory

        hit = _loaded[name] = load_theory(builtin_source(name), file=f"<builtin {name}>")
    return hit
