"""Intrinsically scoped terms of the syntactic model.

Terms are nameless.  ``Var(i)`` is de Bruijn index ``i`` (0 = innermost).
``Op(op, inst, params, args)`` applies a term operator at the type
instantiation ``inst``; ``params`` are de Bruijn indices of ambient
variables filling the operator's parameter slots, and ``args[i]`` lives in
the ambient context extended by the i-th premiss's binders (last binder =
index 0).

Two further node kinds share the grammar: ``Subst(body, arg)`` is an explicit
substitution (used to state the substitution lemma) and ``MVar(i, sub)`` is
an occurrence of an equation placeholder.  A plain *Term* contains neither.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .context import Context, Renaming
from .errors import (
    IllFormedTerm,
    NonEnumerableOperator,
    ParamSortMismatch,
    PlaceholderArityMismatch,
    SortMismatch,
    UnboundVariable,
)
from .types import (
    TyOp,
    TypeExpr,
    is_ground,
    metas_of,
    show_type,
    subexpressions,
    ty_normalize,
    ty_subst,
)


@dataclass(frozen=True)
class Var:
    index: int

    def __repr__(self):
        return f"Var({self.index})"


@dataclass(frozen=True)
class Op:
    op: "object"  # a signature.TermOp
    inst: tuple = ()
    params: tuple = ()
    args: tuple = ()

    def __repr__(self):
        parts = [self.op.name]
        if self.inst:
            parts.append(f"inst={self.inst!r}")
        if self.params:
            parts.append(f"params={self.params!r}")
        if self.args:
            parts.append(f"args={self.args!r}")
        return f"Op({', '.join(parts)})"


@dataclass(frozen=True)
class Subst:
    """``body[arg/x]`` where ``x`` is index 0 of ``body``'s context."""

    body: "object"
    arg: "object"


@dataclass(frozen=True)
class MVar:
    """Placeholder ``index`` applied to terms for its binders."""

    index: int
    sub: tuple = ()


def size(t) -> int:
    """Number of operator nodes."""
    if isinstance(t, Var):
        return 0
    if isinstance(t, Op):
        return 1 + sum(size(a) for a in t.args)
    if isinstance(t, Subst):
        return size(t.body) + size(t.arg)
    return sum(size(a) for a in t.sub)


def is_pure(t) -> bool:
    """True for plain Terms (no Subst or MVar nodes)."""
    if isinstance(t, Var):
        return True
    if isinstance(t, Op):
        return all(is_pure(a) for a in t.args)
    return False


def free_indices(t, depth: int = 0) -> set:
    """Free de Bruijn indices of ``t`` (relative to its own context)."""
    out = set()
    _collect_free(t, depth, out)
    return out


def _collect_free(t, depth, out):
    if isinstance(t, Var):
        if t.index >= depth:
            out.add(t.index - depth)
    elif isinstance(t, Op):
        for p in t.params:
            if p >= depth:
                out.add(p - depth)
        for a, k in zip(t.args, t.op.binder_counts):
            _collect_free(a, depth + k, out)
    elif isinstance(t, Subst):
        _collect_free(t.body, depth + 1, out)
        _collect_free(t.arg, depth, out)
    elif isinstance(t, MVar):
        for s in t.sub:
            _collect_free(s, depth, out)


def map_free(t, on_var: Callable, on_param: Callable, depth: int = 0):
    """Rebuild ``t`` replacing its free variables.

    ``on_var(i, depth)`` receives a free index ``i`` (relative to the ambient
    context) met under ``depth`` local binders and returns the replacement
    term, valid under those binders.  ``on_param(i, depth)`` does the same for
    parameter slots and returns a de Bruijn index valid under the binders.
    """
    if isinstance(t, Var):
        if t.index < depth:
            return t
        return on_var(t.index - depth, depth)
    if isinstance(t, Op):
        params = tuple(p if p < depth else on_param(p - depth, depth) for p in t.params)
        args = tuple(
            map_free(a, on_var, on_param, depth + k)
            for a, k in zip(t.args, t.op.binder_counts)
        )
        return Op(t.op, t.inst, params, args)
    if isinstance(t, Subst):
        return Subst(map_free(t.body, on_var, on_param, depth + 1),
                     map_free(t.arg, on_var, on_param, depth))
    if isinstance(t, MVar):
        return MVar(t.index, tuple(map_free(s, on_var, on_param, depth) for s in t.sub))
    raise IllFormedTerm(f"not a term: {t!r}")


def shift(t, by: int):
    """Weaken ``t`` by ``by`` fresh variables appended to its context."""
    if by == 0:
        return t
    return map_free(t, lambda i, d: Var(i + by + d), lambda i, d: i + by + d)


def reindex(t, f: Callable[[int], int]):
    """Apply an index map ``f`` to every free variable of ``t``."""
    return map_free(t, lambda i, d: Var(f(i) + d), lambda i, d: f(i) + d)


def rename(t, rho: Renaming):
    """Presheaf action: transport ``t`` from ``rho.source`` to ``rho.target``."""
    n, m = len(rho.source), len(rho.target)
    table = rho.map

    def f(i):
        if i >= n:
            raise UnboundVariable(f"variable #{i} is not bound in {rho.source}")
        return m - 1 - table[n - 1 - i]

    return reindex(t, f)


# ---------------------------------------------------------------------------
# sort checking


def _instantiated(theory, a, inst):
    return ty_normalize(theory, ty_subst(a, inst))


def check(theory, ctx: Context, t) -> TypeExpr:
    """Sort of ``t`` in ``ctx`` (normal form), or raise a :class:`SortError`.

    Accepts plain Terms and terms with explicit ``Subst`` nodes.
    """
    return infer(theory, tuple(ctx.sorts), t, holes=None, ground=True)


def infer(theory, sorts: tuple, t, holes=None, ground: bool = True) -> TypeExpr:
    """Sort inference shared by ``check`` and equation checking.

    ``holes`` lists ``(binders, result)`` per placeholder when ``t`` may
    contain ``MVar`` nodes.  With ``ground=False`` sorts may mention type
    metavariables, which are then rigid.
    """
    if isinstance(t, Var):
        if not 0 <= t.index < len(sorts):
            raise UnboundVariable(f"variable #{t.index} not bound in a context of length {len(sorts)}")
        return sorts[len(sorts) - 1 - t.index]
    if isinstance(t, Op):
        return _infer_op(theory, sorts, t, holes, ground)
    if isinstance(t, Subst):
        a = infer(theory, sorts, t.arg, holes, ground)
        return infer(theory, sorts + (a,), t.body, holes, ground)
    if isinstance(t, MVar):
        if holes is None:
            raise IllFormedTerm("placeholder occurrence outside an equation")
        if not 0 <= t.index < len(holes):
            raise PlaceholderArityMismatch(f"placeholder #{t.index} is not declared")
        binders, result = holes[t.index]
        if len(t.sub) != len(binders):
            raise PlaceholderArityMismatch(
                f"placeholder #{t.index} takes {len(binders)} argument(s), given {len(t.sub)}"
            )
        for j, (s, b) in enumerate(zip(t.sub, binders)):
            found = infer(theory, sorts, s, holes, ground)
            want = ty_normalize(theory, b)
            if found != want:
                raise SortMismatch(
                    f"argument {j} of placeholder #{t.index}: expected {show_type(want)}, "
                    f"found {show_type(found)}",
                    expected=want, found=found, position=j,
                )
        return ty_normalize(theory, result)
    raise IllFormedTerm(f"not a term: {t!r}")


def _infer_op(theory, sorts, t, holes, ground):
    op = t.op
    declared = theory.term_op(op.name)
    if declared is None or declared != op:
        raise IllFormedTerm(f"operator {op.name!r} is not declared in this theory")
    ar = op.arity
    if len(t.inst) != ar.meta_count:
        raise IllFormedTerm(
            f"{op.name} expects {ar.meta_count} type argument(s), given {len(t.inst)}"
        )
    for c in t.inst:
        if ground and not is_ground(c):
            raise IllFormedTerm(f"{op.name}: instantiation {show_type(c)} is not ground")
        if ty_normalize(theory, c) != c:
            raise IllFormedTerm(f"{op.name}: instantiation {show_type(c)} is not in normal form")
    if len(t.params) != len(ar.params):
        raise IllFormedTerm(
            f"{op.name} expects {len(ar.params)} parameter(s), given {len(t.params)}"
        )
    for j, (p, b) in enumerate(zip(t.params, ar.params)):
        if not 0 <= p < len(sorts):
            raise UnboundVariable(f"{op.name}: parameter #{p} not bound")
        want = _instantiated(theory, b, t.inst)
        found = sorts[len(sorts) - 1 - p]
        if found != want:
            raise ParamSortMismatch(
                f"{op.name}: parameter {j} expected {show_type(want)}, found {show_type(found)}"
            )
    if len(t.args) != len(ar.premisses):
        raise IllFormedTerm(
            f"{op.name} expects {len(ar.premisses)} argument(s), given {len(t.args)}"
        )
    for i, (arg, (binders, res)) in enumerate(zip(t.args, ar.premisses)):
        inner = sorts + tuple(_instantiated(theory, b, t.inst) for b in binders)
        found = infer(theory, inner, arg, holes, ground)
        want = _instantiated(theory, res, t.inst)
        if found != want:
            raise SortMismatch(
                f"{op.name}: argument {i} expected {show_type(want)}, found {show_type(found)}",
                expected=want, found=found, position=i,
            )
    return _instantiated(theory, ar.result, t.inst)


# ---------------------------------------------------------------------------
# bounded enumeration


def sort_universe(theory, sorts: Sequence[TypeExpr]) -> tuple:
    """Sub-expression closure of ``sorts`` plus the theory's constant sorts.

    This is the finite set of sorts enumeration draws intermediate sorts from.
    """
    seen = {}
    for s in sorts:
        for x in subexpressions(ty_normalize(theory, s)):
            seen.setdefault(x, None)
    for top in theory.type_ops:
        if top.arity == 0:
            seen.setdefault(ty_normalize(theory, TyOp(top.name)), None)
    return tuple(seen)


def instantiations(theory, op, target: TypeExpr, universe: tuple) -> list:
    """All ``inst`` in ``universe^m`` producing ``target`` with every sort in ``universe``."""
    key = ("inst", op.name, target, universe)
    cache = theory._cache
    if key in cache:
        return cache[key]
    ar = op.arity
    used = set(metas_of(ar.result))
    for binders, res in ar.premisses:
        used |= metas_of(res)
        for b in binders:
            used |= metas_of(b)
    for b in ar.params:
        used |= metas_of(b)
    if used != set(range(ar.meta_count)):
        raise NonEnumerableOperator(
            f"operator {op.name!r} has type metavariables that occur in no sort"
        )
    members = set(universe)
    found = []
    for inst in itertools.product(universe, repeat=ar.meta_count):
        if _instantiated(theory, ar.result, inst) != target:
            continue
        needed = [_instantiated(theory, b, inst) for b in ar.params]
        for binders, res in ar.premisses:
            needed.append(_instantiated(theory, res, inst))
            needed.extend(_instantiated(theory, b, inst) for b in binders)
        if all(s in members for s in needed):
            found.append(tuple(inst))
    cache[key] = found
    return found


def _compositions(total, parts):
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


class Enumerator:
    """Memoized exact-size enumeration of well-sorted terms over a sort universe."""

    def __init__(self, theory, universe: tuple):
        self.theory = theory
        self.universe = tuple(universe)
        self._members = set(self.universe)
        self._memo = {}

    def exact(self, ctx_sorts: tuple, sort: TypeExpr, n: int) -> list:
        key = (ctx_sorts, sort, n)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        out = []
        if sort in self._members:
            if n == 0:
                out = [Var(i) for i in range(len(ctx_sorts)) if ctx_sorts[-1 - i] == sort]
            else:
                for op in self.theory.term_ops:
                    out.extend(self._op_terms(op, ctx_sorts, sort, n))
        self._memo[key] = out
        return out

    def _op_terms(self, op, ctx_sorts, sort, n):
        theory = self.theory
        ar = op.arity
        for inst in instantiations(theory, op, sort, self.universe):
            slots = []
            for b in ar.params:
                want = _instantiated(theory, b, inst)
                slots.append([i for i in range(len(ctx_sorts)) if ctx_sorts[-1 - i] == want])
            premisses = [
                (ctx_sorts + tuple(_instantiated(theory, b, inst) for b in binders),
                 _instantiated(theory, res, inst))
                for binders, res in ar.premisses
            ]
            for params in itertools.product(*slots):
                for split in _compositions(n - 1, len(premisses)):
                    choices = [self.exact(c, s, k) for (c, s), k in zip(premisses, split)]
                    for args in itertools.product(*choices):
                        yield Op(op, inst, params, args)

    def upto(self, ctx_sorts: tuple, sort: TypeExpr, bound: int) -> list:
        out = []
        for n in range(bound + 1):
            out.extend(self.exact(ctx_sorts, sort, n))
        return out


def enumerate_terms(theory, ctx: Context, sort: TypeExpr, size_bound: int,
                    universe: Optional[tuple] = None) -> list:
    """Every well-sorted term of ``sort`` in ``ctx`` with at most ``size_bound`` operators.

    Sorts of all subterms (and bound variables) are drawn from ``universe``,
    by default :func:`sort_universe` of the context and target sort.  Order:
    by size, then variables by index, then operators in declaration order.
    """
    sort = ty_normalize(theory, sort)
    if universe is None:
        universe = sort_universe(theory, tuple(ctx.sorts) + (sort,))
    return Enumerator(theory, universe).upto(tuple(ctx.sorts), sort, size_bound)
