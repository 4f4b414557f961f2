"""Sized random generation of well-sorted terms.

Every random decision goes through a *source* with one method,
``below(n) -> int in [0, n)``.  :class:`RandomSource` wraps ``random.Random``;
:class:`DrawSource` wraps a Hypothesis ``draw`` so the same generator becomes
a shrinkable strategy.  Choice 0 is always the simplest option (variables
before operators, smallest sizes first), so shrinking heads towards small
terms.
"""

from __future__ import annotations

import itertools
import math
import random
from typing import Optional

from hypothesis import strategies as st

from .context import Context
from .term import Op, Subst, Var, instantiations
from .types import TyOp, ty_normalize, ty_subst

INF = math.inf


class RandomSource:
    def __init__(self, seed=0):
        self.rng = seed if isinstance(seed, random.Random) else random.Random(seed)

    def below(self, n: int) -> int:
        return self.rng.randrange(n)


class DrawSource:
    def __init__(self, draw):
        self.draw = draw

    def below(self, n: int) -> int:
        if n == 1:
            return 0
        return self.draw(st.integers(0, n - 1))


def closed_universe(theory, extra=()) -> tuple:
    """Constant sorts closed once under every type operator, plus ``extra``."""
    base = list(theory.base_sorts())
    seen = dict.fromkeys(base)
    for top in theory.type_ops:
        if top.arity == 0:
            continue
        for args in itertools.product(base, repeat=top.arity):
            seen.setdefault(ty_normalize(theory, TyOp(top.name, args)), None)
    for s in extra:
        seen.setdefault(ty_normalize(theory, s), None)
    return tuple(seen)


class TermGen:
    """Generates terms whose every sort lies in ``universe``."""

    def __init__(self, theory, universe: Optional[tuple] = None):
        self.theory = theory
        self.universe = tuple(universe) if universe is not None else closed_universe(theory)
        self._min = {}
        self._forms = {}

    # -- structure of the search space
    def forms(self, sort):
        """``(op, inst, param sorts, premisses)`` for every way an operator can produce ``sort``."""
        hit = self._forms.get(sort)
        if hit is None:
            theory = self.theory
            hit = []
            for op in theory.term_ops:
                for inst in instantiations(theory, op, sort, self.universe):
                    params = tuple(ty_normalize(theory, ty_subst(b, inst)) for b in op.arity.params)
                    prem = tuple(
                        (tuple(ty_normalize(theory, ty_subst(b, inst)) for b in bs),
                         ty_normalize(theory, ty_subst(r, inst)))
                        for bs, r in op.arity.premisses
                    )
                    hit.append((op, inst, params, prem))
            self._forms[sort] = hit
        return hit

    def min_size(self, ctx: tuple, sort, cap: int):
        """Least size of a term of ``sort`` in ``ctx`` if it is at most ``cap``, else infinity."""
        if sort in ctx:
            return 0
        if cap <= 0:
            return INF
        key = (ctx, sort, cap)
        hit = self._min.get(key)
        if hit is not None:
            return hit
        self._min[key] = INF  # cuts cycles
        best = INF
        for op, inst, params, prem in self.forms(sort):
            if any(p not in ctx for p in params):
                continue
            total = 1
            for binders, res in prem:
                total += self.min_size(ctx + binders, res, min(cap, best) - total)
                if total >= best or total > cap:
                    break
            best = min(best, total)
        best = best if best <= cap else INF
        self._min[key] = best
        return best

    # -- generation
    def term(self, source, ctx: Context, sort, size: int):
        """A term of ``sort`` in ``ctx`` with at most ``size`` operators, or ``None`` if none exists."""
        sort = ty_normalize(self.theory, sort)
        return self._gen(source, tuple(ctx.sorts), sort, size)

    def _gen(self, source, ctx, sort, size):
        vars_ = [i for i in range(len(ctx)) if ctx[-1 - i] == sort]
        options = []
        if size >= 1:
            for form in self.forms(sort):
                op, inst, params, prem = form
                if any(p not in ctx for p in params):
                    continue
                mins = [self.min_size(ctx + b, r, size - 1) for b, r in prem]
                if sum(mins) <= size - 1:
                    options.append((form, mins))
        if not vars_ and not options:
            return None
        # variables first, so that shrinking prefers them
        n_vars = len(vars_)
        if n_vars and options:
            pick_op = source.below(3) != 0
        else:
            pick_op = not n_vars
        if not pick_op:
            return Var(vars_[source.below(n_vars)])
        (op, inst, params, prem), mins = options[source.below(len(options))]
        chosen = tuple(self._pick_var(source, ctx, p) for p in params)
        budget = size - 1
        slack = budget - sum(mins)
        args = []
        for (binders, res), m in zip(prem, mins):
            extra = source.below(slack + 1) if slack > 0 else 0
            arg = self._gen(source, ctx + binders, res, m + extra)
            if arg is None:  # pragma: no cover - min_size guarantees existence
                return None
            args.append(arg)
            slack -= extra
        return Op(op, inst, chosen, tuple(args))

    def _pick_var(self, source, ctx, sort):
        cands = [i for i in range(len(ctx)) if ctx[-1 - i] == sort]
        return cands[source.below(len(cands))]

    # -- contexts and sorts
    def sort(self, source, pool=None):
        pool = self.universe if pool is None else pool
        return pool[source.below(len(pool))]

    def context(self, source, max_len: int = 3, pool=None) -> Context:
        n = source.below(max_len + 1)
        return Context(tuple(self.sort(source, pool) for _ in range(n)))

    def inhabited_term(self, source, ctx: Context, size: int, tries: int = 20, sort=None):
        """``(sort, term)`` for a randomly chosen inhabited sort (or ``None``)."""
        for _ in range(tries):
            s = self.sort(source) if sort is None else sort
            t = self.term(source, ctx, s, size)
            if t is not None:
                return s, t
        return None

    def explicit_term(self, source, ctx: Context, sort, size: int, depth: int = 2):
        """A term possibly containing explicit ``Subst`` nodes."""
        if depth > 0 and source.below(2) == 1:
            got = self.inhabited_term(source, ctx, max(size // 2, 1))
            if got is not None:
                a, u = got
                body = self.explicit_term(source, ctx.push(a), sort, size, depth - 1)
                if body is not None:
                    return Subst(body, u)
        t = self.term(source, ctx, sort, size)
        if t is None or not isinstance(t, Op) or depth <= 0:
            return t
        # push explicit substitutions into arguments too
        ar = t.op.arity
        args = []
        sorts = tuple(ctx.sorts)
        for a, (binders, res) in zip(t.args, ar.premisses):
            inner = Context(sorts + tuple(ty_normalize(self.theory, ty_subst(b, t.inst)) for b in binders))
            res_s = ty_normalize(self.theory, ty_subst(res, t.inst))
            if source.below(3) == 2:
                e = self.explicit_term(source, inner, res_s, max(size // 2, 0), depth - 1)
                args.append(a if e is None else e)
            else:
                args.append(a)
        return Op(t.op, t.inst, t.params, tuple(args))
