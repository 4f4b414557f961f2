"""A walk through the simply-typed lambda calculus kernel.

Run with ``python demos/stlc_tour.py``.
"""

from stt.clone import hom
from stt.dsl import parse_context, parse_term, print_term
from stt.equations import normalize_with_steps, term_equal
from stt.finmodel import denotation_table, stlc_model
from stt.signature import builtin
from stt.term import check
from stt.types import show_type, ty

stlc = builtin("stlc")

# terms are written with explicit type instantiations; names become indices
names, ctx = parse_context("f:Fun(o, o), y:o", stlc)
t = parse_term("app<o, o>(abs<o, o>((x:o. app<o, o>(f, app<o, o>(f, x)))), y)", stlc, (names, ctx))
print("term:      ", print_term(stlc, names, t))
print("sort:      ", show_type(check(stlc, ctx, t)))

nf, steps = normalize_with_steps(stlc, t)
print("normal form:", print_term(stlc, names, nf), "| rewrite steps:", steps)

eta = parse_term("abs<o, o>((x:o. app<o, o>(f, x)))", stlc, (names, ctx))
print("eta:        ", term_equal(stlc, ctx, eta, parse_term("f", stlc, (names, ctx))))

# closed terms of the Church numeral type, up to beta/eta, by size
church = ty("Fun", ty("Fun", ty("o"), ty("o")), ty("Fun", ty("o"), ty("o")))
for h in hom(stlc, [], church, 6):
    print("  ", print_term(stlc, [], h.representative))

# the same term in a finite model with a two-element base type
model = stlc_model(stlc, 2)
for env, value in denotation_table(model, ctx, t):
    print("  f =", env[0], " y =", env[1], " ->", value)
