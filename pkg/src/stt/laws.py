"""Property suites over randomly generated instances.

A :class:`Law` draws an instance from a choice source and decides whether the
law holds for it.  :func:`run_law` checks a fixed number of seeded instances;
on failure it asks Hypothesis to find and shrink a counterexample from the
same generator, so the reported reproducer is small.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Optional

from hypothesis import HealthCheck, find, settings
from hypothesis import strategies as st
from hypothesis.errors import NoSuchExample

from . import clone as clone_mod
from .context import Context, contract, exchange, rename_compose, rename_id, Renaming, weaken
from .dsl import default_names, parse_term, print_context, print_term
from .equations import Verdict, meta_subst, term_equal
from .finmodel import environments, interp_term, stlc_model
from .gen import DrawSource, RandomSource, TermGen
from .subst import eliminate_subst, identity_subst, msubst_raw, subst1
from .term import Op, Var, check, is_pure, rename, shift
from .types import ty_normalize, ty_subst

SIZE = 5


class Skip(Exception):
    """The drawn choices did not produce a usable instance."""


@dataclass(frozen=True)
class Law:
    name: str
    draw: Callable  # source -> instance (may raise Skip)
    holds: Callable  # instance -> bool
    show: Callable = repr


@dataclass(frozen=True)
class LawReport:
    name: str
    checked: int
    skipped: int
    failures: int
    reproducer: Optional[str] = None
    error: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.failures == 0 and self.checked > 0


def _holds(law, inst):
    try:
        return bool(law.holds(inst)), None
    except Exception as exc:  # a law raising is a failed law
        return False, f"{type(exc).__name__}: {exc}"


def run_law(law: Law, samples: int, seed: int, shrink: bool = True) -> LawReport:
    rng = random.Random(f"{seed}:{law.name}")
    source = RandomSource(rng)
    checked = skipped = failures = 0
    first = None
    error = None
    while checked < samples and skipped < 50 * samples + 100:
        try:
            inst = law.draw(source)
        except Skip:
            skipped += 1
            continue
        ok, err = _holds(law, inst)
        checked += 1
        if not ok:
            failures += 1
            if first is None:
                first, error = inst, err
    reproducer = None
    if first is not None:
        reproducer = law.show(first)
        if shrink:
            small = minimize(law, seed)
            if small is not None:
                reproducer = law.show(small)
    return LawReport(law.name, checked, skipped, failures, reproducer, error)


def minimize(law: Law, seed: int, max_examples: int = 2000):
    """A shrunk failing instance found by Hypothesis, or ``None``."""

    @st.composite
    def instances(draw):
        try:
            return law.draw(DrawSource(draw))
        except Skip:
            return None

    cfg = settings(max_examples=max_examples, database=None, deadline=None,
                   suppress_health_check=list(HealthCheck))
    try:
        return find(instances(), lambda i: i is not None and not _holds(law, i)[0],
                    settings=cfg, random=random.Random(seed))
    except NoSuchExample:
        return None


# ---------------------------------------------------------------------------
# helpers for drawing


def _term(g: TermGen, source, ctx, sort, size=SIZE):
    t = g.term(source, ctx, sort, size)
    if t is None:
        raise Skip
    return t


def _any_term(g: TermGen, source, ctx, size=SIZE):
    got = g.inhabited_term(source, ctx, size, tries=8)
    if got is None:
        raise Skip
    return got


def _context(g: TermGen, source, max_len=3):
    return g.context(source, max_len)


def _renaming(g: TermGen, source, src: Context, extra=2) -> Renaming:
    """A random sort-preserving renaming out of ``src``."""
    sorts = list(src.sorts) + [g.sort(source) for _ in range(source.below(extra + 1))]
    # shuffle with the source so the permutation shrinks too
    for i in range(len(sorts) - 1, 0, -1):
        j = source.below(i + 1)
        sorts[i], sorts[j] = sorts[j], sorts[i]
    target = Context(tuple(sorts))
    m = []
    for s in src.sorts:
        cands = [p for p, x in enumerate(target.sorts) if x == s]
        m.append(cands[source.below(len(cands))])
    return Renaming(src, target, tuple(m))


class _Show:
    def __init__(self, theory):
        self.theory = theory

    def term(self, ctx, t):
        return print_term(self.theory, default_names(len(ctx)), t)

    def ctx(self, ctx):
        return print_context(default_names(len(ctx)), ctx)


# ---------------------------------------------------------------------------
# substitution laws


def substitution_laws(theory, size: int = SIZE) -> list:
    g = TermGen(theory)
    sh = _Show(theory)

    def trivial_draw(src):
        ctx = _context(g, src)
        b, u = _any_term(g, src, ctx)
        _, t = _any_term(g, src, ctx, size)
        return ctx, b, t, u

    def trivial_holds(i):
        ctx, b, t, u = i
        return subst1(theory, ctx, rename(t, weaken(theory, ctx, b)), u) == t

    def left_draw(src):
        ctx = _context(g, src)
        a, u = _any_term(g, src, ctx)
        return ctx, a, u

    def left_holds(i):
        ctx, a, u = i
        return subst1(theory, ctx, Var(0), u) == u

    def right_draw(src):
        ctx = _context(g, src, 2)
        a = g.sort(src)
        big = ctx.push(a, a)
        _, t = _any_term(g, src, big, size)
        return ctx, a, t

    def right_holds(i):
        ctx, a, t = i
        n = len(ctx)
        big = ctx.push(a, a)
        return subst1(theory, ctx.push(a), t, Var(0)) == rename(t, contract(theory, big, n, n + 1))

    def assoc_draw(src):
        ctx = _context(g, src, 2)
        a, v = _any_term(g, src, ctx)
        b, u = _any_term(g, src, ctx.push(a))
        _, t = _any_term(g, src, ctx.push(a, b), size)
        return ctx, a, b, t, u, v

    def assoc_holds(i):
        ctx, a, b, t, u, v = i
        n = len(ctx)
        lhs = subst1(theory, ctx, subst1(theory, ctx.push(a), t, u), v)
        swapped = rename(t, exchange(ctx.push(a, b), n))
        w = subst1(theory, ctx.push(b), swapped, rename(v, weaken(theory, ctx, b)))
        rhs = subst1(theory, ctx, w, subst1(theory, ctx, u, v))
        return lhs == rhs

    def commute_draw(src):
        ctx = _context(g, src, 2)
        a, u = _any_term(g, src, ctx)
        for _ in range(8):
            _, t = _any_term(g, src, ctx.push(a), size)
            if isinstance(t, Op) and not t.params:
                return ctx, a, t, u
        raise Skip

    def commute_holds(i):
        ctx, a, t, u = i
        n = len(ctx)
        args = []
        for arg, k in zip(t.args, t.op.binder_counts):
            # identity on ctx (under k binders), u for the substituted variable, binders fixed
            sigma = tuple(Var(n - 1 - p + k) for p in range(n)) + (shift(u, k),) + identity_subst(k)
            args.append(msubst_raw(sigma, arg))
        return subst1(theory, ctx, t, u) == Op(t.op, t.inst, t.params, tuple(args))

    def agree_draw(src):
        ctx = _context(g, src)
        a, u = _any_term(g, src, ctx)
        _, t = _any_term(g, src, ctx.push(a), size)
        return ctx, t, u

    def agree_holds(i):
        ctx, t, u = i
        return msubst_raw(identity_subst(len(ctx)) + (u,), t) == subst1(theory, ctx, t, u)

    def ident_draw(src):
        ctx = _context(g, src)
        _, t = _any_term(g, src, ctx, size)
        return ctx, t

    def ident_holds(i):
        ctx, t = i
        return msubst_raw(identity_subst(len(ctx)), t) == t

    def funct_draw(src):
        gam = _context(g, src)
        _, t = _any_term(g, src, gam, size)
        delta = _renaming(g, src, gam).target
        rho = tuple(_term(g, src, delta, s, 2) for s in gam.sorts)
        xi = _renaming(g, src, delta).target
        sigma = tuple(_term(g, src, xi, s, 2) for s in delta.sorts)
        return gam, t, delta, rho, xi, sigma

    def funct_holds(i):
        gam, t, delta, rho, xi, sigma = i
        lhs = msubst_raw(sigma, msubst_raw(rho, t))
        rhs = msubst_raw(tuple(msubst_raw(sigma, r) for r in rho), t)
        return lhs == rhs and check(theory, xi, lhs) == check(theory, gam, t)

    def sort_draw(src):
        ctx = _context(g, src)
        a, u = _any_term(g, src, ctx)
        b, t = _any_term(g, src, ctx.push(a), size)
        return ctx, b, t, u

    def sort_holds(i):
        ctx, b, t, u = i
        return check(theory, ctx, subst1(theory, ctx, t, u)) == b

    return [
        Law("subst.trivial", trivial_draw, trivial_holds,
            lambda i: f"ctx=[{sh.ctx(i[0])}] t={sh.term(i[0], i[2])} u={sh.term(i[0], i[3])}"),
        Law("subst.left_identity", left_draw, left_holds,
            lambda i: f"ctx=[{sh.ctx(i[0])}] u={sh.term(i[0], i[2])}"),
        Law("subst.right_identity", right_draw, right_holds,
            lambda i: f"ctx=[{sh.ctx(i[0].push(i[1], i[1]))}] t={sh.term(i[0].push(i[1], i[1]), i[2])}"),
        Law("subst.associativity", assoc_draw, assoc_holds,
            lambda i: f"ctx=[{sh.ctx(i[0])}] t={sh.term(i[0].push(i[1], i[2]), i[3])} "
                      f"u={sh.term(i[0].push(i[1]), i[4])} v={sh.term(i[0], i[5])}"),
        Law("subst.operator_commutation", commute_draw, commute_holds,
            lambda i: f"ctx=[{sh.ctx(i[0].push(i[1]))}] t={sh.term(i[0].push(i[1]), i[2])} "
                      f"u={sh.term(i[0], i[3])}"),
        Law("subst.sort_preservation", sort_draw, sort_holds,
            lambda i: f"ctx=[{sh.ctx(i[0])}] t={sh.term(i[0].push(i[1]), i[2])} u={sh.term(i[0], i[3])}"),
        Law("msubst.agrees_with_subst1", agree_draw, agree_holds,
            lambda i: f"ctx=[{sh.ctx(i[0])}] u={sh.term(i[0], i[2])}"),
        Law("msubst.identity", ident_draw, ident_holds,
            lambda i: f"ctx=[{sh.ctx(i[0])}] t={sh.term(i[0], i[1])}"),
        Law("msubst.functoriality", funct_draw, funct_holds,
            lambda i: f"ctx=[{sh.ctx(i[0])}] t={sh.term(i[0], i[1])}"),
    ]


# ---------------------------------------------------------------------------
# explicit substitutions


def explicit_laws(theory, size: int = SIZE) -> list:
    g = TermGen(theory)
    sh = _Show(theory)

    def explicit(src, ctx, sort):
        e = g.explicit_term(src, ctx, sort, size)
        if e is None:
            raise Skip
        return e

    def elim_draw(src):
        ctx = _context(g, src)
        s = g.sort(src)
        return ctx, explicit(src, ctx, s)

    def elim_holds(i):
        ctx, e = i
        t = eliminate_subst(theory, e)
        return is_pure(t) and check(theory, ctx, t) == check(theory, ctx, e)

    from .term import Subst

    def ev(e):
        return eliminate_subst(theory, e)

    def trivial_draw(src):
        ctx = _context(g, src)
        b, _ = _any_term(g, src, ctx)
        s = g.sort(src)
        return ctx, b, explicit(src, ctx, s), explicit(src, ctx, b)

    def trivial_holds(i):
        ctx, b, t, u = i
        return ev(Subst(rename(t, weaken(theory, ctx, b)), u)) == ev(t)

    def left_draw(src):
        ctx = _context(g, src)
        a, _ = _any_term(g, src, ctx)
        return ctx, explicit(src, ctx, a)

    def left_holds(i):
        ctx, u = i
        return ev(Subst(Var(0), u)) == ev(u)

    def right_draw(src):
        ctx = _context(g, src, 2)
        a = g.sort(src)
        s = g.sort(src)
        return ctx, a, explicit(src, ctx.push(a, a), s)

    def right_holds(i):
        ctx, a, t = i
        n = len(ctx)
        return ev(Subst(t, Var(0))) == rename(ev(t), contract(theory, ctx.push(a, a), n, n + 1))

    def assoc_draw(src):
        ctx = _context(g, src, 2)
        a, _ = _any_term(g, src, ctx)
        b, _ = _any_term(g, src, ctx.push(a))
        c = g.sort(src)
        return (ctx, a, b, explicit(src, ctx.push(a, b), c), explicit(src, ctx.push(a), b),
                explicit(src, ctx, a))

    def assoc_holds(i):
        ctx, a, b, t, u, v = i
        n = len(ctx)
        lhs = ev(Subst(Subst(t, u), v))
        swapped = rename(t, exchange(ctx.push(a, b), n))
        rhs = ev(Subst(Subst(swapped, rename(v, weaken(theory, ctx, b))), Subst(u, v)))
        return lhs == rhs

    def show1(i):
        return f"ctx=[{sh.ctx(i[0])}] e={sh.term(i[0], i[1])}"

    return [
        Law("explicit.elimination_sort", elim_draw, elim_holds, show1),
        Law("explicit.trivial", trivial_draw, trivial_holds,
            lambda i: f"ctx=[{sh.ctx(i[0])}] t={sh.term(i[0], i[2])}"),
        Law("explicit.left_identity", left_draw, left_holds, show1),
        Law("explicit.right_identity", right_draw, right_holds,
            lambda i: f"ctx=[{sh.ctx(i[0].push(i[1], i[1]))}] t={sh.term(i[0].push(i[1], i[1]), i[2])}"),
        Law("explicit.associativity", assoc_draw, assoc_holds,
            lambda i: f"ctx=[{sh.ctx(i[0])}] t={sh.term(i[0].push(i[1], i[2]), i[3])}"),
    ]


# ---------------------------------------------------------------------------
# presheaf structure


def presheaf_laws(theory, size: int = SIZE) -> list:
    g = TermGen(theory)
    sh = _Show(theory)

    def one_draw(src):
        ctx = _context(g, src)
        b, t = _any_term(g, src, ctx, size)
        return ctx, b, t

    def ident_holds(i):
        ctx, b, t = i
        return rename(t, rename_id(ctx)) == t

    def comp_draw(src):
        ctx = _context(g, src)
        b, t = _any_term(g, src, ctx, size)
        rho = _renaming(g, src, ctx)
        sigma = _renaming(g, src, rho.target)
        return ctx, b, t, rho, sigma

    def comp_holds(i):
        ctx, b, t, rho, sigma = i
        return rename(rename(t, rho), sigma) == rename(t, rename_compose(rho, sigma))

    def nat_draw(src):
        ctx = _context(g, src)
        b, t = _any_term(g, src, ctx, size)
        return ctx, b, t, _renaming(g, src, ctx)

    def nat_holds(i):
        ctx, b, t, rho = i
        return check(theory, rho.target, rename(t, rho)) == check(theory, ctx, t) == b

    def weak_draw(src):
        ctx = _context(g, src)
        b, t = _any_term(g, src, ctx, size)
        return ctx, b, t, g.sort(src)

    def weak_holds(i):
        ctx, b, t, a = i
        w = weaken(theory, ctx, a)
        return check(theory, w.target, rename(t, w)) == b

    def show(i):
        return f"ctx=[{sh.ctx(i[0])}] t={sh.term(i[0], i[2])}"

    return [
        Law("rename.identity", one_draw, ident_holds, show),
        Law("rename.composition", comp_draw, comp_holds, show),
        Law("rename.sort_preservation", nat_draw, nat_holds, show),
        Law("rename.weakening", weak_draw, weak_holds, show),
    ]


# ---------------------------------------------------------------------------
# equations


def draw_valuation(theory, g: TermGen, src, eq, size: int = 3):
    """``(ctx, valuation)`` with every filler well sorted, or raise :class:`Skip`."""
    from .equations import Valuation

    inst = tuple(g.sort(src) for _ in range(eq.meta_count))
    pool = list(g.universe)
    hole_sorts = []
    for binders, res in eq.placeholders:
        bs = tuple(ty_normalize(theory, ty_subst(b, inst)) for b in binders)
        r = ty_normalize(theory, ty_subst(res, inst))
        hole_sorts.append((bs, r))
        pool.append(r)
    params = [ty_normalize(theory, ty_subst(b, inst)) for b in eq.param_context]
    ctx = Context(tuple(params) + g.context(src, 3, tuple(dict.fromkeys(pool))).sorts)
    fillers = []
    for bs, r in hole_sorts:
        fillers.append(_term(g, src, ctx.push(*bs), r, size))
    n = len(ctx)
    param_vars = tuple(n - 1 - p for p in range(len(params)))
    return ctx, Valuation(inst, tuple(fillers), param_vars)


def equation_laws(theory, size: int = 3) -> list:
    g = TermGen(theory)
    sh = _Show(theory)
    out = []
    for eq in theory.term_eqs:
        def draw(src, eq=eq):
            ctx, v = draw_valuation(theory, g, src, eq, size)
            return eq, ctx, v

        def holds(i):
            eq, ctx, v = i
            lhs = meta_subst(theory, eq.lhs, v, eq, ctx)
            rhs = meta_subst(theory, eq.rhs, v)
            return term_equal(theory, ctx, lhs, rhs) is Verdict.EQUAL

        def show(i):
            eq, ctx, v = i
            return (f"ctx=[{sh.ctx(ctx)}] lhs={sh.term(ctx, meta_subst(theory, eq.lhs, v))} "
                    f"rhs={sh.term(ctx, meta_subst(theory, eq.rhs, v))}")

        out.append(Law(f"equation.{eq.name}", draw, holds, show))
    return out


# ---------------------------------------------------------------------------
# clone laws


def clone_laws(theory, size: int = 3) -> list:
    g = TermGen(theory)
    sh = _Show(theory)

    def homs(src, dom: Context, cods):
        return tuple(clone_mod.make_hom(theory, dom, _term(g, src, dom, c, size)) for c in cods)

    def unit_draw(src):
        gam = _context(g, src)
        delta = _context(g, src)
        _, f = _any_term(g, src, delta, size)
        return gam, clone_mod.make_hom(theory, delta, f), homs(src, gam, delta.sorts)

    def left_unit(i):
        gam, f, gs = i
        return all(
            clone_mod.compose_in(theory, gam, clone_mod.identity(f.domain, p), gs) == gs[p]
            for p in range(len(gs))
        )

    def right_unit(i):
        gam, f, gs = i
        ids = tuple(clone_mod.identity(f.domain, p) for p in range(len(f.domain)))
        return clone_mod.compose_in(theory, f.domain, f, ids) == f

    def assoc_draw(src):
        xi = _context(g, src, 2)
        gam = _context(g, src, 2)
        delta = _context(g, src, 2)
        _, f = _any_term(g, src, delta, size)
        return (clone_mod.make_hom(theory, delta, f), homs(src, gam, delta.sorts),
                homs(src, xi, gam.sorts), gam, xi)

    def assoc_holds(i):
        f, gs, hs, gam, xi = i
        lhs = clone_mod.compose_in(theory, xi, clone_mod.compose_in(theory, gam, f, gs), hs)
        rhs = clone_mod.compose_in(theory, xi, f, [clone_mod.compose_in(theory, xi, x, hs) for x in gs])
        return term_equal(theory, xi, lhs.representative, rhs.representative) is Verdict.EQUAL

    def struct_draw(src):
        gam = _context(g, src)
        delta = _context(g, src)
        _, f = _any_term(g, src, delta, size)
        return (clone_mod.make_hom(theory, delta, f), homs(src, gam, delta.sorts), gam,
                _renaming(g, src, gam))

    def struct_holds(i):
        f, gs, gam, rho = i
        lhs = clone_mod.structural(theory, clone_mod.compose_in(theory, gam, f, gs), rho)
        rhs = clone_mod.compose_in(theory, rho.target, f, [clone_mod.structural(theory, x, rho) for x in gs])
        return term_equal(theory, rho.target, lhs.representative, rhs.representative) is Verdict.EQUAL

    def swap_draw(src):
        gam = _context(g, src)
        if len(gam) < 2:
            raise Skip
        _, t = _any_term(g, src, gam, size)
        return clone_mod.make_hom(theory, gam, t), src.below(len(gam) - 1)

    def swap_holds(i):
        f, p = i
        once = clone_mod.structural(theory, f, exchange(f.domain, p))
        twice = clone_mod.structural(theory, once, exchange(once.domain, p))
        return twice == f

    def show_f(i):
        f = i[1] if isinstance(i[0], Context) else i[0]
        return f"f={sh.term(f.domain, f.representative)} : {f}"

    return [
        Law("clone.left_unit", unit_draw, left_unit, show_f),
        Law("clone.right_unit", unit_draw, right_unit, show_f),
        Law("clone.associativity", assoc_draw, assoc_holds, show_f),
        Law("clone.structural_compose", struct_draw, struct_holds, show_f),
        Law("clone.exchange_involution", swap_draw, swap_holds, show_f),
    ]


# ---------------------------------------------------------------------------
# concrete syntax


def dsl_laws(theory, size: int = SIZE) -> list:
    g = TermGen(theory)

    def draw(src):
        ctx = _context(g, src)
        _, t = _any_term(g, src, ctx, size)
        return ctx, t

    def holds(i):
        ctx, t = i
        names = default_names(len(ctx))
        text = print_term(theory, names, t)
        back = parse_term(text, theory, print_context(names, ctx))
        return back == t and print_term(theory, names, back) == text

    def show(i):
        return print_term(theory, default_names(len(i[0])), i[1])

    return [Law("dsl.round_trip", draw, holds, show)]


# ---------------------------------------------------------------------------
# the finite model (simply-typed lambda calculus only)


def model_laws(theory, base_size: int = 2, size: int = 4) -> list:
    model = stlc_model(theory, base_size)
    g = TermGen(theory)
    sh = _Show(theory)

    def subst_draw(src):
        ctx = _context(g, src)
        a, u = _any_term(g, src, ctx, size)
        b, t = _any_term(g, src, ctx.push(a), size)
        return ctx, a, t, u

    def subst_holds(i):
        ctx, a, t, u = i
        r = subst1(theory, ctx, t, u)
        big = ctx.push(a)
        return all(
            interp_term(model, ctx, r, env)
            == interp_term(model, big, t, env + (interp_term(model, ctx, u, env),))
            for env in environments(model, ctx)
        )

    def rename_draw(src):
        ctx = _context(g, src)
        _, t = _any_term(g, src, ctx, size)
        return ctx, t, _renaming(g, src, ctx)

    def rename_holds(i):
        ctx, t, rho = i
        moved = rename(t, rho)
        return all(
            interp_term(model, rho.target, moved, env)
            == interp_term(model, ctx, t, tuple(env[rho.map[p]] for p in range(len(ctx))))
            for env in environments(model, rho.target)
        )

    out = [
        Law("model.substitution_lemma", subst_draw, subst_holds,
            lambda i: f"ctx=[{sh.ctx(i[0])}] t={sh.term(i[0].push(i[1]), i[2])} u={sh.term(i[0], i[3])}"),
        Law("model.renaming", rename_draw, rename_holds,
            lambda i: f"ctx=[{sh.ctx(i[0])}] t={sh.term(i[0], i[1])}"),
    ]
    for eq in theory.term_eqs:
        def draw(src, eq=eq):
            ctx, v = draw_valuation(theory, g, src, eq, 3)
            return eq, ctx, v

        def holds(i):
            eq, ctx, v = i
            lhs = meta_subst(theory, eq.lhs, v, eq, ctx)
            rhs = meta_subst(theory, eq.rhs, v)
            return all(
                interp_term(model, ctx, lhs, env) == interp_term(model, ctx, rhs, env)
                for env in environments(model, ctx)
            )

        out.append(Law(f"model.sound.{eq.name}", draw, holds,
                       lambda i: f"ctx=[{sh.ctx(i[1])}] eq={i[0].name}"))
    return out


SUITES = {
    "subst": substitution_laws,
    "explicit": explicit_laws,
    "rename": presheaf_laws,
    "equations": equation_laws,
    "clone": clone_laws,
    "dsl": dsl_laws,
    "model": model_laws,
}


def is_stlc_like(theory) -> bool:
    names = {o.name for o in theory.term_ops}
    return names <= {"u", "abs", "app", "pair", "proj1", "proj2"} and bool(names) and not theory.type_eqs


def all_laws(theory, suites=None) -> list:
    out = []
    for name, build in SUITES.items():
        if suites is not None and name not in suites:
            continue
        if name == "model" and not is_stlc_like(theory):
            continue
        out.extend(build(theory))
    return out
