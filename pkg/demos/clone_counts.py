"""Counting multimorphisms of the free monoid's clone.

Terms ``x, y |- t : o`` up to the monoid laws are words in ``x`` and ``y``;
with ``n`` multiplications a word has length at most ``n + 1``.
"""

from stt.clone import compose, hom, identity
from stt.dsl import default_names, print_term
from stt.signature import builtin
from stt.types import ty

monoid = builtin("monoid")
o = ty("o")

for bound in (1, 2, 3):
    words = sum(2 ** k for k in range(bound + 2))  # the empty word counts once
    hs = hom(monoid, [o, o], o, bound)
    print(f"size <= {bound}: {len(hs)} classes, {words} words")

names = default_names(2)
hs = hom(monoid, [o, o], o, 1)
f = next(h for h in hs if print_term(monoid, names, h.representative) == "mul(x0, x1)")
swap = compose(monoid, f, [identity(f.domain, 1), identity(f.domain, 0)])
print("f        =", print_term(monoid, names, f.representative))
print("f(x1, x0) =", print_term(monoid, names, swap.representative))
square = compose(monoid, f, [f, f])
print("f(f, f)  =", print_term(monoid, names, square.representative))
