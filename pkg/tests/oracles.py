"""Independent reference implementations used to cross-check the kernel.

Nothing here imports kernel algorithms: terms and types get their own tuple
representation, and the only bridge is a structural conversion from kernel
values (``from_kernel_*``).
"""

from __future__ import annotations

import itertools
from collections import deque

# ---------------------------------------------------------------------------
# representation
#   type:  ("o",) | ("Fun", A, B) | ...      metavariable: ("?", i)
#   term:  ("var", i) | ("op", name, inst, args) with args a tuple of
#          (binder_sorts, body) pairs; parameter slots are not represented


def from_kernel_type(a):
    if hasattr(a, "index"):
        return ("?", a.index)
    return (a.name,) + tuple(from_kernel_type(x) for x in a.args)


def from_kernel_term(t):
    if type(t).__name__ == "Var":
        return ("var", t.index)
    inst = tuple(from_kernel_type(c) for c in t.inst)
    out = []
    for a, (binders, _) in zip(t.args, t.op.arity.premisses):
        bs = tuple(_inst(from_kernel_type(b), inst) for b in binders)
        out.append((bs, from_kernel_term(a)))
    return ("op", t.op.name, inst, tuple(out))


def _inst(a, inst):
    if a[0] == "?":
        return inst[a[1]]
    return (a[0],) + tuple(_inst(x, inst) for x in a[1:])


# ---------------------------------------------------------------------------
# exhaustive type rewriting


def _match(p, t, b):
    if p[0] == "?":
        if p[1] in b:
            return b if b[p[1]] == t else None
        b = dict(b)
        b[p[1]] = t
        return b
    if p[0] != t[0] or len(p) != len(t):
        return None
    for x, y in zip(p[1:], t[1:]):
        b = _match(x, y, b)
        if b is None:
            return None
    return b


def _rewrites(rules, t):
    """Every one-step rewrite of ``t`` at any position."""
    for lhs, rhs in rules:
        b = _match(lhs, t, {})
        if b is not None:
            yield _fill(rhs, b)
    for i in range(1, len(t)):
        for r in _rewrites(rules, t[i]):
            yield t[:i] + (r,) + t[i + 1:]


def _fill(a, b):
    if a[0] == "?":
        return b[a[1]]
    return (a[0],) + tuple(_fill(x, b) for x in a[1:])


def type_normal_forms(rules, t, limit=10_000):
    """All normal forms reachable from ``t`` by rewriting anywhere, in any order."""
    seen = {t}
    queue = deque([t])
    normal = set()
    while queue:
        x = queue.popleft()
        nxt = list(_rewrites(rules, x))
        if not nxt:
            normal.add(x)
        for y in nxt:
            if y not in seen:
                seen.add(y)
                if len(seen) > limit:
                    raise RuntimeError("rewrite space too large")
                queue.append(y)
    return normal


# ---------------------------------------------------------------------------
# naive generate-and-filter term enumeration


class Sig:
    """Operator table: name -> (meta count, premisses, result), premisses as (binders, result)."""

    def __init__(self, ops, normalize=lambda a: a):
        self.ops = ops
        self.normalize = normalize


def raw_trees(sig, universe, n_vars_by_ctx, ctx_len, size):
    """Every raw tree of exactly ``size`` operators; no sort discipline at all."""
    if size == 0:
        for i in range(ctx_len):
            yield ("var", i)
        return
    for name, (m, prem, _res) in sig.ops.items():
        for inst in itertools.product(universe, repeat=m):
            k = len(prem)
            for split in _splits(size - 1, k):
                choices = []
                for (binders, _), s in zip(prem, split):
                    bs = tuple(sig.normalize(_inst(b, inst)) for b in binders)
                    choices.append([(bs, body) for body in
                                    raw_trees(sig, universe, None, ctx_len + len(bs), s)])
                for args in itertools.product(*choices):
                    yield ("op", name, inst, tuple(args))


def _splits(total, parts):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _splits(total - first, parts - 1):
            yield (first,) + rest


def sort_of(sig, universe, ctx, t):
    """Own sort checker; also demands every sort met lies in ``universe``."""
    if t[0] == "var":
        return ctx[len(ctx) - 1 - t[1]] if t[1] < len(ctx) else None
    _, name, inst, args = t
    m, prem, res = sig.ops[name]
    for (binders, want), (bs, body) in zip(prem, args):
        if any(b not in universe for b in bs):
            return None
        got = sort_of(sig, universe, ctx + bs, body)
        if got is None or got != sig.normalize(_inst(want, inst)):
            return None
    out = sig.normalize(_inst(res, inst))
    return out if out in universe else None


def naive_enumerate(sig, universe, ctx, sort, size_bound):
    out = []
    for n in range(size_bound + 1):
        for t in raw_trees(sig, universe, None, len(ctx), n):
            if sort_of(sig, universe, tuple(ctx), t) == sort:
                out.append(t)
    return out


# ---------------------------------------------------------------------------
# words: normal forms of monoid terms


def monoid_word_count(letters, size_bound):
    """Distinct words over ``letters`` of length <= size_bound + 1, with the empty word.

    A word of length L >= 1 is written with L - 1 multiplications; the empty
    word is the unit, a single constant.
    """
    words = {()} if size_bound >= 1 else set()
    for length in range(1, size_bound + 2):
        words.update(itertools.product(range(letters), repeat=length))
    return len(words)


# ---------------------------------------------------------------------------
# beta-normal, eta-short simply-typed terms


def _sub_closure(sorts):
    out = set()
    stack = list(sorts)
    while stack:
        a = stack.pop()
        if a not in out:
            out.add(a)
            stack.extend(a[1:])
    return out


def stlc_universe(ctx, target, bases):
    return _sub_closure(list(ctx) + [target]) | {(b,) for b in bases} | {("Unit",)}


def stlc_normal_forms(ctx, target, size_bound, bases=("o",)):
    """Beta-normal, eta-short terms of ``target`` in ``ctx`` with at most ``size_bound`` operators.

    Sorts of all subterms stay inside the sub-expression closure of the
    context and target plus the constants.  Only function beta/eta count as
    redexes.
    """
    universe = stlc_universe(ctx, target, bases)
    memo = {}

    def free_in(t, i, depth=0):
        if t[0] == "var":
            return t[1] == i + depth
        return any(free_in(body, i, depth + len(bs)) for bs, body in t[3])

    def terms(ctx, sort, n):
        key = (ctx, sort, n)
        if key in memo:
            return memo[key]
        out = []
        if n == 0:
            out = [("var", i) for i in range(len(ctx)) if ctx[-1 - i] == sort]
        else:
            if sort == ("Unit",) and n == 1:
                out.append(("op", "u", (), ()))
            if sort[0] == "Fun":
                a, b = sort[1], sort[2]
                for body in terms(ctx + (a,), b, n - 1):
                    # eta-redex: abs(x. app(f, x)) with x not free in f
                    if (body[0] == "op" and body[1] == "app" and body[3][1][1] == ("var", 0)
                            and not free_in(body[3][0][1], 0)):
                        continue
                    out.append(("op", "abs", (a, b), (((a,), body),)))
            if sort[0] == "Prod":
                a, b = sort[1], sort[2]
                for k in range(n):
                    for x in terms(ctx, a, k):
                        for y in terms(ctx, b, n - 1 - k):
                            out.append(("op", "pair", (a, b), (((), x), ((), y))))
            for a in universe:
                for b in universe:
                    if b == sort and ("Fun", a, b) in universe:
                        for k in range(n):
                            for f in terms(ctx, ("Fun", a, b), k):
                                if f[0] == "op" and f[1] == "abs":
                                    continue  # beta-redex
                                for x in terms(ctx, a, n - 1 - k):
                                    out.append(("op", "app", (a, b), (((), f), ((), x))))
                    if ("Prod", a, b) in universe:
                        if a == sort:
                            for p in terms(ctx, ("Prod", a, b), n - 1):
                                out.append(("op", "proj1", (a, b), (((), p),)))
                        if b == sort:
                            for p in terms(ctx, ("Prod", a, b), n - 1):
                                out.append(("op", "proj2", (a, b), (((), p),)))
        memo[key] = out
        return out

    result = []
    for n in range(size_bound + 1):
        result.extend(terms(tuple(ctx), target, n))
    return result


# ---------------------------------------------------------------------------
# named capture-avoiding substitution


def _free(t, depth=0):
    if t[0] == "var":
        return {t[1] - depth} if t[1] >= depth else set()
    out = set()
    for bs, body in t[3]:
        out |= _free(body, depth + len(bs))
    return out


def to_named(t, names, fresh, reuse=()):
    """De Bruijn tuple term -> named term; ``names`` lists the context, innermost last.

    Binders prefer names from ``reuse`` whenever the body does not refer to
    an outer variable of that name, so that substitutions into the result
    meet binders that would capture.
    """
    if t[0] == "var":
        return ("v", names[len(names) - 1 - t[1]])
    _, name, inst, args = t
    out = []
    for bs, body in args:
        used = {names[len(names) - 1 - i] for i in _free(body, len(bs))}
        xs = []
        for _ in bs:
            pick = next((n for n in reuse if n not in used and n not in xs), None)
            xs.append(pick if pick is not None else next(fresh))
        out.append((bs, tuple(xs), to_named(body, names + xs, fresh, reuse)))
    return ("op", name, inst, tuple(out))


def free_names(t):
    if t[0] == "v":
        return {t[1]}
    out = set()
    for _, xs, body in t[3]:
        out |= free_names(body) - set(xs)
    return out


def named_subst(t, x, u, fresh):
    """``t[u/x]``, renaming binders that would capture free names of ``u``."""
    if t[0] == "v":
        return u if t[1] == x else t
    _, name, inst, args = t
    fu = free_names(u)
    out = []
    for bs, xs, body in args:
        if x in xs:
            out.append((bs, xs, body))
            continue
        new_xs = []
        for y in xs:
            if y in fu:
                z = next(fresh)
                body = named_subst(body, y, ("v", z), fresh)
                new_xs.append(z)
            else:
                new_xs.append(y)
        out.append((bs, tuple(new_xs), named_subst(body, x, u, fresh)))
    return ("op", name, inst, tuple(out))


def to_debruijn(t, names):
    if t[0] == "v":
        return ("var", len(names) - 1 - max(i for i, n in enumerate(names) if n == t[1]))
    _, name, inst, args = t
    return ("op", name, inst, tuple((bs, to_debruijn(body, names + list(xs))) for bs, xs, body in args))


def fresh_names(prefix="n"):
    for i in itertools.count():
        yield f"{prefix}{i}"
