"""Bounded extraction of a theory's abstract clone.

A multimorphism ``A1, ..., An -> B`` is a term of sort ``B`` in context
``[A1, ..., An]`` taken up to the equational theory; each class is
represented by its normal form.  Composition is simultaneous substitution,
identities are variables, and renamings act by the presheaf action.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .context import Context, Renaming, make_context
from .equations import normalize_term
from .errors import ContextMismatch, LengthMismatch, SortMismatch
from .subst import msubst_raw
from .term import Var, check, enumerate_terms, rename
from .types import DEFAULT_BUDGET, show_type, ty_normalize


@dataclass(frozen=True)
class CloneHom:
    domain: Context
    codomain: object
    representative: object

    def __str__(self):
        return f"{self.domain} -> {show_type(self.codomain)}"


@dataclass(frozen=True)
class HomSet:
    """Normal-form representatives found up to a size bound.

    ``upper_bound`` is set when the theory has equations and more than one
    class was found: distinct normal forms are then only *not proved* equal,
    so ``len(homs)`` bounds the true count from above.
    """

    domain: Context
    codomain: object
    size_bound: int
    homs: tuple
    terms_seen: int
    upper_bound: bool

    def __len__(self):
        return len(self.homs)

    def __iter__(self):
        return iter(self.homs)

    def __getitem__(self, i):
        return self.homs[i]


def make_hom(theory, domain: Context, t, budget: int = DEFAULT_BUDGET) -> CloneHom:
    """Normalize ``t`` into a hom out of ``domain``."""
    b = check(theory, domain, t)
    return CloneHom(domain, b, normalize_term(theory, None, t, budget))


def hom(theory, domain: Sequence, codomain, size_bound: int,
        budget: int = DEFAULT_BUDGET) -> HomSet:
    """Classes of terms ``domain -> codomain`` with at most ``size_bound`` operators."""
    ctx = domain if isinstance(domain, Context) else make_context(theory, domain)
    b = ty_normalize(theory, codomain)
    terms = enumerate_terms(theory, ctx, b, size_bound)
    seen = {}
    for t in terms:
        nf = normalize_term(theory, None, t, budget)
        seen.setdefault(nf, None)
    homs = tuple(CloneHom(ctx, b, nf) for nf in seen)
    return HomSet(ctx, b, size_bound, homs, len(terms), bool(theory.term_eqs) and len(homs) > 1)


def identity(ctx: Context, i: int) -> CloneHom:
    """The projection onto position ``i`` of ``ctx``."""
    return CloneHom(ctx, ctx[i], Var(len(ctx) - 1 - i))


def compose(theory, f: CloneHom, gs: Sequence[CloneHom], budget: int = DEFAULT_BUDGET) -> CloneHom:
    """``f(g1, ..., gn)``: substitute the ``gs`` for the variables of ``f``."""
    gs = tuple(gs)
    if len(gs) != len(f.domain):
        raise LengthMismatch(f"composite needs {len(f.domain)} argument(s), given {len(gs)}")
    if not gs:
        raise ContextMismatch("nullary composite needs an explicit common domain; use compose_in")
    return compose_in(theory, gs[0].domain, f, gs, budget)


def compose_in(theory, ctx: Context, f: CloneHom, gs: Sequence[CloneHom],
               budget: int = DEFAULT_BUDGET) -> CloneHom:
    gs = tuple(gs)
    if len(gs) != len(f.domain):
        raise LengthMismatch(f"composite needs {len(f.domain)} argument(s), given {len(gs)}")
    for p, (g, want) in enumerate(zip(gs, f.domain.sorts)):
        if g.domain != ctx:
            raise ContextMismatch(f"argument {p} has domain {g.domain}, expected {ctx}")
        if g.codomain != want:
            raise SortMismatch(
                f"argument {p} has codomain {show_type(g.codomain)}, expected {show_type(want)}",
                expected=want, found=g.codomain, position=p,
            )
    t = msubst_raw(tuple(g.representative for g in gs), f.representative)
    return CloneHom(ctx, f.codomain, normalize_term(theory, None, t, budget))


def structural(theory, f: CloneHom, rho: Renaming, budget: int = DEFAULT_BUDGET) -> CloneHom:
    """Transport ``f`` along a renaming of its domain (exchange, weakening, contraction)."""
    if rho.source != f.domain:
        raise ContextMismatch(f"renaming starts at {rho.source}, hom domain is {f.domain}")
    t = rename(f.representative, rho)
    return CloneHom(rho.target, f.codomain, normalize_term(theory, None, t, budget))
