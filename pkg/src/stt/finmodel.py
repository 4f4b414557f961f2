"""A finite set-theoretic model of the simply-typed lambda calculus.

Base types get chosen finite carriers ``0 .. k-1``; ``Unit`` is ``{()}``,
``Prod`` is the cartesian product and ``Fun(A, B)`` is the full function
space, each function tabulated as a tuple indexed by the domain carrier.
Interpretation is compositional, so equal terms (under beta/eta) must get
equal denotations in every environment.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .context import Context
from .errors import CarrierTooLarge, SttError
from .term import MVar, Subst, Var
from .types import TyOp, show_type

DEFAULT_GUARD = 1_000_000


@dataclass
class FinModel:
    theory: object
    base_sizes: Mapping[str, int]
    guard: int = DEFAULT_GUARD
    _carriers: dict = field(default_factory=dict, repr=False)
    _positions: dict = field(default_factory=dict, repr=False)

    def carrier(self, a) -> tuple:
        hit = self._carriers.get(a)
        if hit is None:
            hit = self._carriers[a] = self._build(a)
            self._positions[a] = {x: i for i, x in enumerate(hit)}
        return hit

    def cardinality(self, a) -> int:
        if not isinstance(a, TyOp):
            raise SttError(f"cannot interpret the open type {show_type(a)}")
        if a.name in self.base_sizes and not a.args:
            return self.base_sizes[a.name]
        if a.name == "Unit":
            return 1
        if a.name == "Prod":
            return self.cardinality(a.args[0]) * self.cardinality(a.args[1])
        if a.name == "Fun":
            dom = self.cardinality(a.args[0])
            cod = self.cardinality(a.args[1])
            if cod > 1 and dom > 64:  # at least 2**65, far past any guard
                raise CarrierTooLarge(f"carrier of {show_type(a)} has at least 2^{dom} elements")
            return cod ** dom
        raise SttError(f"no interpretation for type operator {a.name!r}")

    def _build(self, a) -> tuple:
        n = self.cardinality(a)
        if n > self.guard:
            raise CarrierTooLarge(f"carrier of {show_type(a)} has {n} elements (guard {self.guard})")
        if a.name in self.base_sizes and not a.args:
            return tuple(range(n))
        if a.name == "Unit":
            return ((),)
        if a.name == "Prod":
            return tuple(itertools.product(self.carrier(a.args[0]), self.carrier(a.args[1])))
        dom = self.carrier(a.args[0])
        return tuple(itertools.product(self.carrier(a.args[1]), repeat=len(dom)))

    def position(self, a, x) -> int:
        self.carrier(a)
        return self._positions[a][x]


def stlc_model(theory, base_size: int = 2, guard: int = DEFAULT_GUARD) -> FinModel:
    """Every base type of ``theory`` gets a carrier of ``base_size`` elements."""
    sizes = {t.name: base_size for t in theory.type_ops if t.arity == 0 and t.name != "Unit"}
    return FinModel(theory, sizes, guard)


def interp_type(model: FinModel, a) -> tuple:
    return model.carrier(a)


def interp_term(model: FinModel, ctx: Context, t, env: Sequence):
    """Denotation of ``t`` in the environment ``env`` (one element per context position)."""
    if len(env) != len(ctx):
        raise SttError(f"environment has {len(env)} entries for a context of length {len(ctx)}")
    return _eval(model, t, tuple(env))


def _eval(model, t, env):
    if isinstance(t, Var):
        return env[len(env) - 1 - t.index]
    if isinstance(t, Subst):
        return _eval(model, t.body, env + (_eval(model, t.arg, env),))
    if isinstance(t, MVar):
        raise SttError("placeholders have no denotation")
    name = t.op.name
    if name == "u":
        return ()
    if name == "pair":
        return (_eval(model, t.args[0], env), _eval(model, t.args[1], env))
    if name == "proj1":
        return _eval(model, t.args[0], env)[0]
    if name == "proj2":
        return _eval(model, t.args[0], env)[1]
    if name == "abs":
        dom = t.inst[0]
        return tuple(_eval(model, t.args[0], env + (x,)) for x in model.carrier(dom))
    if name == "app":
        f = _eval(model, t.args[0], env)
        return f[model.position(t.inst[0], _eval(model, t.args[1], env))]
    raise SttError(f"no interpretation for term operator {name!r}")


def environments(model: FinModel, ctx: Context):
    """Every environment for ``ctx``."""
    return itertools.product(*(model.carrier(a) for a in ctx.sorts))


def denotation_table(model: FinModel, ctx: Context, t) -> list:
    """``(env, value)`` for every environment."""
    return [(env, interp_term(model, ctx, t, env)) for env in environments(model, ctx)]
