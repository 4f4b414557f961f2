"""Free cartesian contexts and sort-preserving renamings between them.

Contexts are lists of normal-form sorts, oldest first.  Renamings use
absolute positions; terms use de Bruijn indices, where index 0 names the
last (most recently added) entry.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import ContextMismatch, IndexOutOfRange, SortMismatch
from .types import TypeExpr, is_ground, show_type, ty_equal, ty_normalize


@dataclass(frozen=True)
class Context:
    sorts: tuple = ()

    def __len__(self):
        return len(self.sorts)

    def __getitem__(self, position):
        return self.sorts[position]

    def __iter__(self):
        return iter(self.sorts)

    def push(self, *sorts: TypeExpr) -> "Context":
        """Append sorts that are already in normal form."""
        return Context(self.sorts + tuple(sorts))

    def concat(self, other: "Context") -> "Context":
        return Context(self.sorts + other.sorts)

    def index_sort(self, index: int) -> TypeExpr:
        """Sort of de Bruijn variable ``index``."""
        if not 0 <= index < len(self.sorts):
            raise IndexOutOfRange(f"variable #{index} not bound in a context of length {len(self)}")
        return self.sorts[len(self.sorts) - 1 - index]

    def position(self, index: int) -> int:
        return len(self.sorts) - 1 - index

    def index(self, position: int) -> int:
        return len(self.sorts) - 1 - position

    def __str__(self):
        return "[" + ", ".join(show_type(s) for s in self.sorts) + "]"


EMPTY = Context()


def make_context(theory, sorts: Sequence[TypeExpr]) -> Context:
    """Build a context, normalizing each sort."""
    return Context(tuple(ty_normalize(theory, s) for s in sorts))


def extend(theory, ctx: Context, sort: TypeExpr) -> Context:
    if not is_ground(sort):
        raise SortMismatch(f"context entries must be ground, got {show_type(sort)}")
    return ctx.push(ty_normalize(theory, sort))


@dataclass(frozen=True)
class Renaming:
    """A map sending each position of ``source`` to a position of ``target``."""

    source: Context
    target: Context
    map: tuple

    def __post_init__(self):
        if len(self.map) != len(self.source):
            raise ContextMismatch(
                f"renaming has {len(self.map)} entries for a source of length {len(self.source)}"
            )
        for i, j in enumerate(self.map):
            if not 0 <= j < len(self.target):
                raise IndexOutOfRange(f"renaming sends position {i} to {j}, outside the target")
            if self.source[i] != self.target[j]:
                raise SortMismatch(
                    f"renaming sends {show_type(self.source[i])} at {i} "
                    f"to {show_type(self.target[j])} at {j}",
                    expected=self.source[i], found=self.target[j], position=i,
                )


def rename_id(ctx: Context) -> Renaming:
    return Renaming(ctx, ctx, tuple(range(len(ctx))))


def rename_compose(rho: Renaming, sigma: Renaming) -> Renaming:
    """``sigma`` after ``rho``: first rename along ``rho``, then along ``sigma``."""
    if rho.target != sigma.source:
        raise ContextMismatch(f"cannot compose: {rho.target} is not {sigma.source}")
    return Renaming(rho.source, sigma.target, tuple(sigma.map[j] for j in rho.map))


def weaken(theory, ctx: Context, sort: TypeExpr) -> Renaming:
    """Inclusion of ``ctx`` into ``ctx`` extended by ``sort``."""
    return Renaming(ctx, extend(theory, ctx, sort), tuple(range(len(ctx))))


def exchange(ctx: Context, i: int) -> Renaming:
    """Swap positions ``i`` and ``i + 1``."""
    if not 0 <= i < len(ctx) - 1:
        raise IndexOutOfRange(f"cannot exchange positions {i} and {i + 1} in {ctx}")
    sorts = list(ctx.sorts)
    sorts[i], sorts[i + 1] = sorts[i + 1], sorts[i]
    m = list(range(len(ctx)))
    m[i], m[i + 1] = i + 1, i
    return Renaming(ctx, Context(tuple(sorts)), tuple(m))


def contract(theory, ctx: Context, i: int, j: int) -> Renaming:
    """Identify positions ``i`` and ``j`` (of equal sort); position ``j`` is dropped."""
    n = len(ctx)
    if not (0 <= i < n and 0 <= j < n) or i == j:
        raise IndexOutOfRange(f"cannot contract positions {i} and {j} in {ctx}")
    if not ty_equal(theory, ctx[i], ctx[j]):
        raise SortMismatch(
            f"cannot contract {show_type(ctx[i])} with {show_type(ctx[j])}",
            expected=ctx[i], found=ctx[j],
        )
    target = Context(ctx.sorts[:j] + ctx.sorts[j + 1:])

    def shift(p):
        return p if p < j else p - 1

    m = tuple(shift(i) if p == j else shift(p) for p in range(n))
    return Renaming(ctx, target, m)
