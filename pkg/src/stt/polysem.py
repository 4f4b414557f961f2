"""Operator extensions evaluated on finite tables of opaque tokens.

An operator ``o`` with metavariables ``M1..Mm`` sends a family of term sets
``T(sort, context)`` to the set of tuples

    sum over C in U^m of  (choice of parameter variables)
                          x  product over premisses i of T(A_i[C], ctx + binders_i[C])

restricted to instantiations whose result is the requested sort.  Here it
is computed directly from the arity, with table entries as opaque tokens, so
it shares nothing with rule-driven sort checking; :func:`oracle_agreement`
then compares the two.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

from .context import Context
from .errors import NonEnumerableOperator, SortOutsideUniverse
from .term import Op, enumerate_terms, size, sort_universe
from .types import metas_of, show_type, ty_normalize, ty_subst


class Token:
    """An opaque table element; ``size`` is its grade (operator count)."""

    __slots__ = ("label", "sort", "size")

    def __init__(self, label, sort, size=0):
        self.label, self.sort, self.size = label, sort, size

    def __repr__(self):
        return f"<{self.label}>"


@dataclass
class TermTable:
    sort_universe: tuple
    entries: dict = field(default_factory=dict)  # (sort, Context) -> list of Token

    def get(self, sort, ctx: Context) -> list:
        key = (sort, ctx)
        if key not in self.entries:
            raise SortOutsideUniverse(
                f"table has no entry for sort {show_type(sort)} in context {ctx}"
            )
        return self.entries[key]


@dataclass(frozen=True)
class Element:
    inst: tuple
    params: tuple  # de Bruijn indices of the chosen parameter variables
    tokens: tuple


def _metas_used(op):
    used = set(metas_of(op.arity.result))
    for binders, res in op.arity.premisses:
        used |= metas_of(res)
        for b in binders:
            used |= metas_of(b)
    for b in op.arity.params:
        used |= metas_of(b)
    return used


def poly_extension(theory, op, table: TermTable, ctx: Context, target=None) -> list:
    """Every element of the operator's extension at ``ctx`` (optionally only at ``target``)."""
    universe = table.sort_universe
    members = set(universe)
    for s in ctx.sorts:
        if s not in members:
            raise SortOutsideUniverse(f"context sort {show_type(s)} is outside the universe")
    out = []
    for inst in itertools.product(universe, repeat=op.arity.meta_count):
        def at(a):
            return ty_normalize(theory, ty_subst(a, inst))

        result = at(op.arity.result)
        if target is not None and result != target:
            continue
        prem = [(tuple(at(b) for b in binders), at(res)) for binders, res in op.arity.premisses]
        params = [at(b) for b in op.arity.params]
        # the result sort only indexes the element; what must be tabulated
        # are the premiss, binder and parameter sorts
        sorts = params + [s for bs, r in prem for s in (*bs, r)]
        if any(s not in members for s in sorts):
            continue  # instantiation leaves the finite universe
        slots = [
            [i for i in range(len(ctx)) if ctx.index_sort(i) == b] for b in params
        ]
        factors = [table.get(res, ctx.push(*binders)) for binders, res in prem]
        for chosen in itertools.product(*slots):
            for toks in itertools.product(*factors):
                out.append(Element(inst, chosen, toks))
    return out


def extension_cardinality(theory, op, table: TermTable, ctx: Context, inst) -> int:
    """Size of the ``inst`` summand as a product of cardinalities."""

    def at(a):
        return ty_normalize(theory, ty_subst(a, inst))

    n = 1
    for b in op.arity.params:
        n *= sum(1 for i in range(len(ctx)) if ctx.index_sort(i) == at(b))
    for binders, res in op.arity.premisses:
        n *= len(table.get(at(res), ctx.push(*(at(b) for b in binders))))
    return n


@dataclass(frozen=True)
class AgreementReport:
    op: str
    agree: bool
    extension_size: int
    terms_size: int
    missing_terms: tuple  # elements with no matching Op node
    unexpected_terms: tuple  # Op nodes with no matching element


def oracle_report(theory, op, ctx: Context, target, size_bound: int,
                  universe: Optional[tuple] = None) -> AgreementReport:
    """Compare the extension with the ``op``-headed terms found by enumeration."""
    if _metas_used(op) != set(range(op.arity.meta_count)):
        raise NonEnumerableOperator(f"operator {op.name!r} has type metavariables that occur in no sort")
    target = ty_normalize(theory, target)
    if universe is None:
        universe = sort_universe(theory, tuple(ctx.sorts) + (target,))
    table = TermTable(universe)
    lookup = {}
    members = set(universe)
    # fill every table entry an instantiation can ask for
    for inst in itertools.product(universe, repeat=op.arity.meta_count):
        def at(a):
            return ty_normalize(theory, ty_subst(a, inst))

        for binders, res in op.arity.premisses:
            bs = tuple(at(b) for b in binders)
            key = (at(res), ctx.push(*bs))
            if key in table.entries or not all(s in members for s in (key[0], *bs)):
                continue
            terms = enumerate_terms(theory, key[1], key[0], max(size_bound - 1, 0), universe)
            toks = []
            for t in terms:
                tok = Token(f"{op.name}:{len(lookup)}", key[0], size(t))
                lookup[(key, t)] = tok
                toks.append(tok)
            table.entries[key] = toks
    budget = size_bound - 1
    expected = set()
    if size_bound >= 1:
        for e in poly_extension(theory, op, table, ctx, target):
            if sum(t.size for t in e.tokens) <= budget:
                expected.add(e)
    found = []
    for t in enumerate_terms(theory, ctx, target, size_bound, universe):
        if isinstance(t, Op) and t.op.name == op.name:
            found.append(t)
    seen = set()
    unexpected = []
    for t in found:
        toks = []
        ok = True
        for a, (binders, res) in zip(t.args, op.arity.premisses):
            bs = tuple(ty_normalize(theory, ty_subst(b, t.inst)) for b in binders)
            key = (ty_normalize(theory, ty_subst(res, t.inst)), ctx.push(*bs))
            tok = lookup.get((key, a))
            if tok is None:
                ok = False
                break
            toks.append(tok)
        e = Element(t.inst, t.params, tuple(toks)) if ok else None
        if e is None or e not in expected or e in seen:
            unexpected.append(t)
        else:
            seen.add(e)
    missing = tuple(e for e in expected if e not in seen)
    agree = not missing and not unexpected and len(found) == len(expected)
    return AgreementReport(op.name, agree, len(expected), len(found), missing, tuple(unexpected))


def oracle_agreement(theory, op, ctx: Context, target, size_bound: int) -> bool:
    return oracle_report(theory, op, ctx, target, size_bound).agree

