import pytest
from hypothesis import given
from hypothesis import strategies as st

from stt.context import Context
from stt.dsl import load_theory, parse_context, parse_term, print_term
from stt.equations import (
    Valuation,
    Verdict,
    check_valuation,
    match,
    meta_subst,
    normalize_term,
    normalize_with_steps,
    term_equal,
)
from stt.errors import BudgetExhausted, SortMismatch, UnorientedEquation
from stt.gen import RandomSource, TermGen, closed_universe
from stt.laws import draw_valuation, Skip
from stt.signature import builtin
from stt.term import Op, Var, check
from stt.types import ty

o = ty("o")


def parsed(thy, ctx, text):
    names, c = parse_context(ctx, thy)
    return names, c, parse_term(text, thy, (names, c))


def nf_text(thy, ctx, text):
    names, c, t = parsed(thy, ctx, text)
    return print_term(thy, names, normalize_term(thy, c, t))


def test_beta(stlc):
    assert nf_text(stlc, "y:o", "app<o, o>(abs<o, o>((x:o. x)), y)") == "y"


def test_eta(stlc):
    assert nf_text(stlc, "f:Fun(o, o)", "abs<o, o>((x:o. app<o, o>(f, x)))") == "f"


def test_eta_does_not_fire_when_the_bound_variable_escapes(stlc):
    text = "abs<o, o>((x:o. app<o, o>(app<o, Fun(o, o)>(g, x), x)))"
    assert nf_text(stlc, "g:Fun(o, Fun(o, o))", text) == (
        "abs<o, o>((x1:o. app<o, o>(app<o, Fun(o, o)>(g, x1), x1)))"
    )


def test_beta_under_binder_avoids_capture(stlc):
    # (λx. λz. x) z0  ~>  λz. z0
    _, c, t = parsed(stlc, "w:o", "app<o, Fun(o, o)>(abs<o, Fun(o, o)>((x:o. abs<o, o>((z:o. x)))), w)")
    nf = normalize_term(stlc, c, t)
    assert nf == Op(stlc.term_op("abs"), (o, o), (), (Var(1),))


def test_monoid_normal_form_is_right_nested(monoid):
    out = nf_text(monoid, "a:o, b:o, c:o", "mul(mul(e(), mul(a, b)), mul(c, e()))")
    assert out == "mul(a, mul(b, c))"


def test_comp_lc_monad_laws(comp):
    ctx = "m:T(o), f:Fun(o, T(o))"
    left = "bind<o, o>(m, (a:o. bind<o, o>(app<o, T(o)>(f, a), (b:o. return<o>(b)))))"
    right = "bind<o, o>(m, (a:o. app<o, T(o)>(f, a)))"
    names, c = parse_context(ctx, comp)
    t = parse_term(left, comp, (names, c))
    u = parse_term(right, comp, (names, c))
    assert term_equal(comp, c, t, u) is Verdict.EQUAL


def test_not_proved_equal(stlc):
    names, c = parse_context("p:Prod(Unit, Unit)", stlc)
    t = parse_term("proj1<Unit, Unit>(p)", stlc, (names, c))
    u = parse_term("u()", stlc, (names, c))
    assert term_equal(stlc, c, t, u) is Verdict.NOT_PROVED_EQUAL
    assert str(Verdict.EQUAL) == "Equal"


def test_steps_are_counted(stlc):
    _, c, t = parsed(stlc, "y:o", "app<o, o>(abs<o, o>((x:o. app<o, o>(abs<o, o>((z:o. z)), x))), y)")
    nf, steps = normalize_with_steps(stlc, t)
    assert nf == Var(0) and steps == 2


LOOP = """
type o/0
term f : (o) -> o
eq grow (x : o) : o = f(x) == f(f(x))
"""


def test_budget_exhaustion():
    thy = load_theory(LOOP)
    t = Op(thy.term_op("f"), (), (), (Var(0),))
    with pytest.raises(BudgetExhausted):
        normalize_term(thy, Context((o,)), t, budget=100)


def test_unoriented_equation_blocks_rewriting():
    thy = load_theory(LOOP.replace("f(f(x))", "f(f(x)) orient none"))
    t = Op(thy.term_op("f"), (), (), (Var(0),))
    with pytest.raises(UnorientedEquation):
        term_equal(thy, Context((o,)), t, t)


def test_valuation_checked(stlc):
    beta = next(e for e in stlc.term_eqs if e.name == "beta")
    ok = Valuation((o, o), (Var(0), Var(0)))
    check_valuation(stlc, beta, ok, Context((o,)))
    bad = Valuation((o, o), (Op(stlc.term_op("u")), Var(0)))
    with pytest.raises(SortMismatch):
        meta_subst(stlc, beta.lhs, bad, beta, Context((o,)))


@pytest.mark.parametrize("name", ["stlc", "comp-lc", "monoid"])
@given(seed=st.integers(0, 2**32 - 1))
def test_match_inverts_meta_substitution(name, seed):
    thy = builtin(name)
    gen = TermGen(thy, closed_universe(thy))
    src = RandomSource(seed)
    eq = thy.term_eqs[src.below(len(thy.term_eqs))]
    try:
        ctx, v = draw_valuation(thy, gen, src, eq)
    except Skip:
        return
    t = meta_subst(thy, eq.lhs, v, eq, ctx)
    w = match(thy, eq, t)
    assert w is not None
    assert meta_subst(thy, eq.lhs, w) == t
    assert meta_subst(thy, eq.rhs, w) == meta_subst(thy, eq.rhs, v)
    a = check(thy, ctx, t)
    assert check(thy, ctx, meta_subst(thy, eq.rhs, v)) == a


PARAM_EQ = """type o/0
term var [A] : -> [x:A] A
term f : (o) -> o
eq fv : [y : o] o = f(var<o>[y]()) == var<o>[y]()
"""


def test_equation_with_parameter_context():
    theory = load_theory(PARAM_EQ)
    names, ctx = parse_context("a:o, b:o", theory)
    t = parse_term("f(f(var<o>[a]()))", theory, (names, ctx))
    assert print_term(theory, names, normalize_term(theory, ctx, t)) == "var<o>[a]()"
    v = match(theory, theory.term_eqs[0], t.args[0])
    assert v.param_vars == (1,)
