"""The free type algebra over metavariables, and type equality modulo equations.

A type expression is either a metavariable ``Meta(i)`` or an operator applied
to arguments ``TyOp(name, args)``.  Ground types (no metavariables) stand for
sorts; the canonical representative of a sort is its normal form under the
theory's oriented type equations.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Union

from .errors import BudgetExhausted, LengthMismatch, UnorientedEquation

DEFAULT_BUDGET = 10_000


class Orientation(enum.Enum):
    LTR = "ltr"
    NONE = "none"


@dataclass(frozen=True)
class Meta:
    index: int

    def __repr__(self):
        return f"Meta({self.index})"


@dataclass(frozen=True)
class TyOp:
    name: str
    args: tuple = ()

    def __repr__(self):
        if not self.args:
            return f"TyOp({self.name!r})"
        return f"TyOp({self.name!r}, {self.args!r})"


TypeExpr = Union[Meta, TyOp]


def ty(name: str, *args: TypeExpr) -> TyOp:
    """Shorthand constructor: ``ty("Fun", ty("o"), ty("o"))``."""
    return TyOp(name, tuple(args))


def is_ground(a: TypeExpr) -> bool:
    if isinstance(a, Meta):
        return False
    return all(is_ground(x) for x in a.args)


def metas_of(a: TypeExpr) -> set:
    if isinstance(a, Meta):
        return {a.index}
    out = set()
    for x in a.args:
        out |= metas_of(x)
    return out


def subexpressions(a: TypeExpr) -> Iterator[TypeExpr]:
    """Pre-order traversal of ``a`` and all its sub-expressions."""
    yield a
    if isinstance(a, TyOp):
        for x in a.args:
            yield from subexpressions(x)


def type_size(a: TypeExpr) -> int:
    if isinstance(a, Meta):
        return 1
    return 1 + sum(type_size(x) for x in a.args)


def ty_subst(a: TypeExpr, inst: Sequence[TypeExpr]) -> TypeExpr:
    """Replace ``Meta(i)`` by ``inst[i]`` throughout ``a``."""
    inst = tuple(inst)
    bad = [i for i in metas_of(a) if i >= len(inst)]
    if bad:
        raise LengthMismatch(
            f"instantiation has {len(inst)} entries but Meta({max(bad)}) occurs"
        )
    return _subst(a, inst)


def _subst(a, inst):
    if isinstance(a, Meta):
        return inst[a.index]
    if not a.args:
        return a
    return TyOp(a.name, tuple(_subst(x, inst) for x in a.args))


def ty_match(pattern: TypeExpr, target: TypeExpr, binding: Optional[dict] = None) -> Optional[dict]:
    """First-order syntactic matching of ``pattern`` against ``target``.

    Metavariables of ``target`` are treated as rigid constants.  Returns the
    extended binding or ``None``.
    """
    binding = {} if binding is None else dict(binding)
    stack = [(pattern, target)]
    while stack:
        p, t = stack.pop()
        if isinstance(p, Meta):
            seen = binding.get(p.index)
            if seen is None:
                binding[p.index] = t
            elif seen != t:
                return None
            continue
        if not isinstance(t, TyOp) or t.name != p.name or len(t.args) != len(p.args):
            return None
        stack.extend(zip(p.args, t.args))
    return binding


class _Steps:
    __slots__ = ("left",)

    def __init__(self, budget):
        self.left = budget

    def spend(self, what):
        self.left -= 1
        if self.left < 0:
            raise BudgetExhausted(f"type rewriting budget exhausted while normalizing {what}")


def _rules(theory):
    rules = []
    for eq in theory.type_eqs:
        if eq.orientation is not Orientation.LTR:
            raise UnorientedEquation(
                f"type equation {eq.name!r} is unoriented; cannot decide type equality"
            )
        rules.append((eq.lhs, eq.rhs))
    return rules


def ty_normalize(theory, a: TypeExpr, budget: int = DEFAULT_BUDGET) -> TypeExpr:
    """Leftmost-innermost normal form of ``a`` under the oriented type equations.

    Metavariables, if any, are rigid: normalizing an open type is allowed and
    is what sort-checking of equation schemas relies on.
    """
    if not theory.type_eqs:
        return a
    cache = theory._cache.setdefault("ty_nf", {})
    hit = cache.get(a)
    if hit is not None:
        return hit
    try:
        return _normalize(_rules(theory), a, _Steps(budget), cache)
    except RecursionError:
        raise BudgetExhausted(f"type rewriting nested too deeply while normalizing {a}") from None


def _normalize(rules, a, steps, cache):
    hit = cache.get(a)
    if hit is not None:
        return hit
    if isinstance(a, Meta):
        return a
    cur = a
    if cur.args:
        cur = TyOp(cur.name, tuple(_normalize(rules, x, steps, cache) for x in cur.args))
    for lhs, rhs in rules:
        b = ty_match(lhs, cur)
        if b is not None:
            steps.spend(a)
            inst = [b.get(i, Meta(i)) for i in range(max(b, default=-1) + 1)]
            cur = _normalize(rules, _subst(rhs, inst), steps, cache)
            break
    cache[a] = cur
    return cur


def ty_equal(theory, a: TypeExpr, b: TypeExpr, budget: int = DEFAULT_BUDGET) -> bool:
    return ty_normalize(theory, a, budget) == ty_normalize(theory, b, budget)


def show_type(a: TypeExpr, meta_names: Optional[Sequence[str]] = None) -> str:
    if isinstance(a, Meta):
        if meta_names is not None and a.index < len(meta_names):
            return meta_names[a.index]
        return f"?{a.index}"
    if not a.args:
        return a.name
    return f"{a.name}({', '.join(show_type(x, meta_names) for x in a.args)})"
