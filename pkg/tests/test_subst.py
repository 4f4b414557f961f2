import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from stt.context import Context, make_context
from stt.dsl import load_theory, parse_context, parse_term
from stt.errors import LengthMismatch, ParamSubstitution, SortMismatch
from stt.gen import RandomSource, TermGen, closed_universe
from stt.signature import builtin
from stt.subst import eliminate_subst, identity_subst, msubst, subst1
from stt.term import Op, Subst, Var, check, is_pure
from stt.types import ty

o, U = ty("o"), ty("Unit")


def Fun(a, b):
    return ty("Fun", a, b)


def test_substitution_under_a_binder(stlc):
    names, ctx = parse_context("y:o, x:o", stlc)
    t = parse_term("abs<o, o>((z:o. x))", stlc, (names, ctx))
    out = subst1(stlc, Context((o,)), t, Var(0))
    # x := y, and y must not be captured by z
    assert out == Op(t.op, t.inst, (), (Var(1),))


def test_subst1_checks_both_sides(stlc):
    proj = Op(stlc.term_op("proj1"), (o, o), (), (Var(0),))
    with pytest.raises(SortMismatch):
        subst1(stlc, Context((U,)), proj, Var(0))


def test_msubst_length_and_sort_checks(stlc):
    src = Context((o, U))
    with pytest.raises(LengthMismatch):
        msubst(stlc, [Var(0)], Var(0), source=src)
    with pytest.raises(SortMismatch):
        msubst(stlc, [Var(0), Var(0)], Var(0), source=src, target=Context((o,)))
    assert msubst(stlc, [Var(0), Op(stlc.term_op("u"))], Var(1), src, Context((o,))) == Var(0)


def test_identity_substitution():
    assert identity_subst(3) == (Var(2), Var(1), Var(0))


def test_parameter_slots_take_only_variables():
    thy = load_theory("type o/0\nterm c : -> o\nterm var [A] : -> [x:A] A\n")
    t = Op(thy.term_op("var"), (o,), (0,), ())
    ctx = make_context(thy, [o])
    assert subst1(thy, Context((o, o)), t, Var(1)) == Op(t.op, t.inst, (1,), ())
    with pytest.raises(ParamSubstitution):
        subst1(thy, Context(), t, Op(thy.term_op("c")))
    assert check(thy, ctx, t) == o


def test_eliminate_nested_explicit_substitution(stlc):
    u = Op(stlc.term_op("u"))
    e = Subst(Subst(Var(1), u), Var(0))
    pure = eliminate_subst(stlc, e)
    assert is_pure(pure) and pure == Var(0)


@pytest.mark.parametrize("name", ["stlc", "comp-lc", "ulc", "monoid"])
@given(seed=st.integers(0, 2**32 - 1))
def test_subst1_agrees_with_named_substitution(name, seed):
    thy = builtin(name)
    gen = TermGen(thy, closed_universe(thy))
    src = RandomSource(seed)
    ctx = gen.context(src, 3)
    got_u = gen.inhabited_term(src, ctx, 3)
    if got_u is None:
        return
    b, u = got_u
    t = gen.term(src, ctx.push(b), gen.sort(src), 5)
    if t is None:
        return
    names = [f"c{i}" for i in range(len(ctx))]
    fresh = oracles.fresh_names()
    t_named = oracles.to_named(oracles.from_kernel_term(t), names + ["x"], fresh, reuse=names)
    u_named = oracles.to_named(oracles.from_kernel_term(u), names, fresh, reuse=names)
    want = oracles.to_debruijn(oracles.named_subst(t_named, "x", u_named, fresh), names)
    assert oracles.from_kernel_term(subst1(thy, ctx, t, u)) == want


def test_named_oracle_sees_capture():
    # (c0) |- abs(c0'. x)  with binder name reused; substituting x := c0 must rename
    fresh = oracles.fresh_names()
    t = ("op", "abs", (), ((((("o",),), ("var", 1)),)))
    named = oracles.to_named(t, ["c0", "x"], fresh, reuse=["c0"])
    assert named[3][0][1] == ("c0",)
    out = oracles.named_subst(named, "x", ("v", "c0"), fresh)
    assert oracles.to_debruijn(out, ["c0"]) == ("op", "abs", (), ((((("o",),), ("var", 1)),)))
