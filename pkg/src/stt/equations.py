"""Schematic terms, valuations, and equational rewriting.

An equation's sides mention placeholders ``MVar(i, sub)``.  A
:class:`Valuation` fixes the type metavariables and fills every placeholder
with a concrete term; :func:`meta_subst` plugs the fillers in.  Oriented
equations become rewrite rules whose left-hand sides are matched as
higher-order patterns (each placeholder applied to distinct bound
variables), so matching is decidable and the filler is unique.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

from .context import Context
from .errors import BudgetExhausted, SortMismatch, UnorientedEquation
from .signature import TermEquation, check_side
from .subst import eliminate_subst, substitute
from .term import MVar, Op, Subst, Var, check, is_pure, reindex
from .types import DEFAULT_BUDGET, Meta, Orientation, show_type, ty_match, ty_normalize, ty_subst


class Verdict(enum.Enum):
    EQUAL = "Equal"
    NOT_PROVED_EQUAL = "NotProvedEqual"

    def __str__(self):
        return self.value


def check_meta(theory, eq: TermEquation, side):
    """Sort of one side of ``eq`` (metavariables rigid); raises on ill-formed sides."""
    return check_side(theory, eq, side)


@dataclass(frozen=True)
class Valuation:
    """Type instantiation plus one filler per placeholder.

    ``fillers[i]`` lives in the ambient context extended by placeholder
    ``i``'s binders.  ``param_vars[p]`` is the ambient de Bruijn index
    standing for the equation's ``p``-th parameter (empty unless the
    equation has a parameter context).
    """

    inst: tuple
    fillers: tuple
    param_vars: tuple = ()


def valuation_context(theory, eq: TermEquation, v: Valuation, ctx: Context) -> list:
    """Sorts of each filler's context, per placeholder."""
    out = []
    for binders, _ in eq.placeholders:
        out.append(ctx.push(*(ty_normalize(theory, ty_subst(b, v.inst)) for b in binders)))
    return out


def check_valuation(theory, eq: TermEquation, v: Valuation, ctx: Context) -> None:
    """Raise unless every filler checks at its declared sort."""
    if len(v.inst) != eq.meta_count or len(v.fillers) != len(eq.placeholders):
        raise SortMismatch(f"valuation does not fit equation {eq.name}")
    for i, (fctx, (_, res)) in enumerate(zip(valuation_context(theory, eq, v, ctx), eq.placeholders)):
        want = ty_normalize(theory, ty_subst(res, v.inst))
        found = check(theory, fctx, v.fillers[i])
        if found != want:
            raise SortMismatch(
                f"filler {i} of {eq.name}: expected {show_type(want)}, found {show_type(found)}",
                expected=want, found=found, position=i,
            )
    for p, (idx, b) in enumerate(zip(v.param_vars, eq.param_context)):
        want = ty_normalize(theory, ty_subst(b, v.inst))
        if ctx.index_sort(idx) != want:
            raise SortMismatch(f"parameter {p} of {eq.name} bound to a variable of the wrong sort")


def meta_subst(theory, u, v: Valuation, eq: Optional[TermEquation] = None,
               ctx: Optional[Context] = None):
    """Replace placeholders in ``u`` by the fillers of ``v`` and instantiate its types.

    The result lives in the valuation's ambient context.  Passing ``eq`` and
    ``ctx`` checks the valuation first.
    """
    if eq is not None and ctx is not None:
        check_valuation(theory, eq, v, ctx)
    return _meta(theory, u, v, 0)


def _meta(theory, u, v, depth):
    if isinstance(u, Var):
        if u.index < depth:
            return u
        return Var(_param_index(v, u.index - depth) + depth)
    if isinstance(u, Op):
        inst = tuple(ty_normalize(theory, ty_subst(c, v.inst)) for c in u.inst)
        params = tuple(p if p < depth else _param_index(v, p - depth) + depth for p in u.params)
        args = tuple(_meta(theory, a, v, depth + k) for a, k in zip(u.args, u.op.binder_counts))
        return Op(u.op, inst, params, args)
    if isinstance(u, Subst):
        body = _meta(theory, u.body, v, depth + 1)
        return Subst(body, _meta(theory, u.arg, v, depth))
    if isinstance(u, MVar):
        sub = [_meta(theory, s, v, depth) for s in u.sub]
        k = len(sub)

        def image(i):
            if i < k:
                return sub[k - 1 - i]
            return Var(i - k + depth)

        return substitute(v.fillers[u.index], image)
    raise TypeError(f"not a schematic term: {u!r}")


def _param_index(v, i):
    n = len(v.param_vars)
    if i >= n:
        raise IndexError(f"schematic variable #{i} is not a parameter")
    return v.param_vars[n - 1 - i]


# ---------------------------------------------------------------------------
# matching


def match(theory, eq: TermEquation, t) -> Optional[Valuation]:
    """Match ``eq.lhs`` against ``t``; return a valuation reproducing ``t`` or ``None``."""
    state = _Match(len(eq.placeholders), len(eq.param_context))
    if not state.go(eq.lhs, t, 0):
        return None
    inst = tuple(state.types.get(i, Meta(i)) for i in range(eq.meta_count))
    params = tuple(state.params.get(p, 0) for p in range(len(eq.param_context)))
    return Valuation(inst, tuple(state.fillers), params)


class _Match:
    def __init__(self, n_holes, n_params):
        self.fillers = [None] * n_holes
        self.n_params = n_params
        self.types = {}
        self.params = {}

    def _bind_param(self, j, idx, depth):
        # ``j`` is a schematic index past the local binders; ``idx`` the concrete one
        if idx < depth:
            return False
        pos = self.n_params - 1 - (j - depth)
        seen = self.params.get(pos)
        if seen is None:
            self.params[pos] = idx - depth
            return True
        return seen == idx - depth

    def go(self, p, t, depth):
        if isinstance(p, Var):
            if not isinstance(t, Var):
                return False
            if p.index < depth:
                return t.index == p.index
            return self._bind_param(p.index, t.index, depth)
        if isinstance(p, Op):
            if not isinstance(t, Op) or t.op.name != p.op.name:
                return False
            for pc, tc in zip(p.inst, t.inst):
                b = ty_match(pc, tc, self.types)
                if b is None:
                    return False
                self.types = b
            for pp, tp in zip(p.params, t.params):
                if pp < depth:
                    if pp != tp:
                        return False
                elif not self._bind_param(pp, tp, depth):
                    return False
            return all(
                self.go(pa, ta, depth + k)
                for pa, ta, k in zip(p.args, t.args, p.op.binder_counts)
            )
        if isinstance(p, MVar):
            return self._hole(p, t, depth)
        return False

    def _hole(self, p, t, depth):
        locals_ = [s.index for s in p.sub]
        k = len(locals_)
        where = {idx: j for j, idx in enumerate(locals_)}
        escaped = []

        def f(i):
            if i < depth:
                j = where.get(i)
                if j is None:
                    escaped.append(i)
                    return 0
                return k - 1 - j
            return i - depth + k

        candidate = reindex(t, f)
        if escaped:
            return False
        seen = self.fillers[p.index]
        if seen is None:
            self.fillers[p.index] = candidate
            return True
        return seen == candidate


# ---------------------------------------------------------------------------
# rewriting


def _rules(theory):
    cache = theory._cache
    hit = cache.get("term_rules")
    if hit is None:
        hit = {}
        for eq in theory.term_eqs:
            if eq.orientation is not Orientation.LTR:
                raise UnorientedEquation(f"term equation {eq.name!r} is unoriented; cannot rewrite with it")
            hit.setdefault(eq.lhs.op.name, []).append(eq)
        cache["term_rules"] = hit
    return hit


class _Budget:
    __slots__ = ("left", "used")

    def __init__(self, budget):
        self.left = budget
        self.used = 0

    def spend(self):
        self.left -= 1
        self.used += 1
        if self.left < 0:
            raise BudgetExhausted("term rewriting budget exhausted")


def _rewrite_root(theory, rules, t):
    if not isinstance(t, Op):
        return None
    for eq in rules.get(t.op.name, ()):
        v = match(theory, eq, t)
        if v is not None:
            return _meta(theory, eq.rhs, v, 0)
    return None


def _step(theory, rules, t):
    """One leftmost-outermost rewrite step, or ``None`` if ``t`` is normal."""
    r = _rewrite_root(theory, rules, t)
    if r is not None:
        return r
    if isinstance(t, Op):
        for i, a in enumerate(t.args):
            r = _step(theory, rules, a)
            if r is not None:
                return Op(t.op, t.inst, t.params, t.args[:i] + (r,) + t.args[i + 1:])
    return None


def normalize_with_steps(theory, t, budget: int = DEFAULT_BUDGET):
    """``(normal form, number of rewrite steps)``."""
    if not is_pure(t):
        t = eliminate_subst(theory, t)
    rules = _rules(theory)
    meter = _Budget(budget)
    if not rules:
        return t, 0
    try:
        while True:
            r = _step(theory, rules, t)
            if r is None:
                return t, meter.used
            meter.spend()
            t = r
    except RecursionError:
        raise BudgetExhausted("term rewriting nested too deeply") from None


def normalize_term(theory, ctx: Optional[Context], t, budget: int = DEFAULT_BUDGET):
    """Leftmost-outermost normal form of ``t`` under the oriented term equations.

    Explicit substitutions are eliminated first.  When ``ctx`` is given, ``t``
    is sort-checked in it.
    """
    if ctx is not None:
        check(theory, ctx, t)
    return normalize_with_steps(theory, t, budget)[0]


def term_equal(theory, ctx: Optional[Context], t, u, budget: int = DEFAULT_BUDGET) -> Verdict:
    """``EQUAL`` when the normal forms coincide, else ``NOT_PROVED_EQUAL``."""
    if ctx is not None:
        a, b = check(theory, ctx, t), check(theory, ctx, u)
        if a != b:
            raise SortMismatch(
                f"terms have different sorts {show_type(a)} and {show_type(b)}", expected=a, found=b,
            )
    nt = normalize_with_steps(theory, t, budget)[0]
    nu = normalize_with_steps(theory, u, budget)[0]
    return Verdict.EQUAL if nt == nu else Verdict.NOT_PROVED_EQUAL
