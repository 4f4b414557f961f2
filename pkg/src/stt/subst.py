"""Capture-avoiding substitution on nameless terms.

``subst1`` replaces the most recent variable; ``msubst`` replaces every
variable of a context at once.  ``eliminate_subst`` turns explicit
``Subst`` nodes into real substitutions, bottom-up.
"""

from __future__ import annotations

from typing import Callable, Optional, Sequence

from .context import Context
from .errors import LengthMismatch, ParamSubstitution, SortMismatch
from .term import MVar, Op, Subst, Var, check, map_free, shift
from .types import show_type


def substitute(t, image: Callable[[int], object]):
    """Replace each free index ``i`` of ``t`` by ``image(i)`` (a term in the target context).

    Parameter slots may only receive variables; anything else raises
    :class:`ParamSubstitution`.
    """

    def on_var(i, depth):
        return shift(image(i), depth)

    def on_param(i, depth):
        r = image(i)
        if not isinstance(r, Var):
            raise ParamSubstitution(
                f"variable #{i} sits in a parameter slot and cannot be replaced by a non-variable"
            )
        return r.index + depth

    return map_free(t, on_var, on_param)


def instantiate(t, u):
    """Unchecked ``t[u/x]`` for ``x`` the index-0 variable of ``t``."""
    return substitute(t, lambda i: u if i == 0 else Var(i - 1))


def subst1(theory, ctx: Context, t, u):
    """Substitute ``u`` (a term in ``ctx``) for the last variable of ``t`` (a term in ``ctx, A``)."""
    a = check(theory, ctx, u)
    check(theory, ctx.push(a), t)
    return instantiate(t, u)


def msubst_raw(sigma: Sequence, t):
    """Unchecked simultaneous substitution; ``sigma[p]`` replaces the variable at position ``p``."""
    n = len(sigma)

    def image(i):
        if i >= n:
            raise LengthMismatch(f"variable #{i} has no entry in a substitution of length {n}")
        return sigma[n - 1 - i]

    return substitute(t, image)


def msubst(theory, sigma: Sequence, t, source: Optional[Context] = None,
           target: Optional[Context] = None):
    """Simultaneous substitution of ``sigma`` (terms in ``target``) into ``t`` (a term in ``source``).

    When both contexts are given, every entry of ``sigma`` is checked against
    the matching position of ``source``.
    """
    sigma = tuple(sigma)
    if source is not None:
        if len(sigma) != len(source):
            raise LengthMismatch(
                f"substitution has {len(sigma)} entries for a context of length {len(source)}"
            )
        if target is not None:
            for p, (s, want) in enumerate(zip(sigma, source.sorts)):
                found = check(theory, target, s)
                if found != want:
                    raise SortMismatch(
                        f"substitution entry {p}: expected {show_type(want)}, found {show_type(found)}",
                        expected=want, found=found, position=p,
                    )
    return msubst_raw(sigma, t)


def identity_subst(n: int) -> tuple:
    """``[Var(n-1), ..., Var(0)]``: the identity on a context of length ``n``."""
    return tuple(Var(n - 1 - p) for p in range(n))


def eliminate_subst(theory, e):
    """A pure term equal to ``e``: each ``Subst`` node is performed by substitution."""
    if isinstance(e, Var):
        return e
    if isinstance(e, Op):
        return Op(e.op, e.inst, e.params, tuple(eliminate_subst(theory, a) for a in e.args))
    if isinstance(e, Subst):
        return instantiate(eliminate_subst(theory, e.body), eliminate_subst(theory, e.arg))
    if isinstance(e, MVar):
        return MVar(e.index, tuple(eliminate_subst(theory, s) for s in e.sub))
    raise TypeError(f"not a term: {e!r}")
