from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import BUILTINS
from stt.context import Context
from stt.dsl import (
    SourceSpan,
    load_theory,
    parse_context,
    parse_term,
    parse_theory,
    parse_type,
    print_context,
    print_term,
    print_theory,
    print_type,
    term_to_json,
    tokenize,
    type_to_json,
)
from stt.errors import DslError, SortMismatch, ValidationError
from stt.gen import RandomSource, TermGen, closed_universe
from stt.signature import builtin, diagnose
from stt.term import Op, Subst, Var, check
from stt.types import Meta, ty

DEMO = Path(__file__).parent.parent / "demos" / "stlc.stt"
o, U = ty("o"), ty("Unit")


def test_demo_theory_file_parses_and_validates():
    thy = load_theory(DEMO.read_text(), file=str(DEMO))
    assert diagnose(thy) == []
    assert [op.name for op in thy.term_ops] == ["u", "abs", "app", "pair", "proj1", "proj2"]
    assert [e.name for e in thy.term_eqs] == ["beta", "eta"]


def test_empty_file_is_the_empty_theory():
    thy = parse_theory("")
    assert thy.type_ops == thy.term_ops == thy.type_eqs == thy.term_eqs == ()
    assert load_theory("# only a comment\n").term_ops == ()


def test_arity_mismatch_has_a_span():
    src = "type Prod/2\nterm pair [A B] : (A),(B) -> Prod(A)\n"
    with pytest.raises(ValidationError) as info:
        load_theory(src, file="pair.stt")
    (d,) = info.value.diagnostics
    assert d.kind == "ArityMismatch"
    assert d.span == SourceSpan("pair.stt", 2, 6, 9)


def test_syntax_errors_carry_spans():
    with pytest.raises(DslError) as info:
        parse_theory("type o/0\nterm c : -> o @\n")
    assert info.value.kind == "SyntaxError"
    assert (info.value.span.line, info.value.span.col_start) == (2, 15)
    with pytest.raises(DslError) as info:
        parse_theory("type o/0\nbogus\n")
    assert info.value.span.line == 2


def test_tokens_have_ordered_spans():
    for tok in tokenize("term abs [A B] : (x:A. B) -> Fun(A, B)  # comment"):
        assert tok.span.col_start <= tok.span.col_end


def test_beta_redex_compiles_to_de_bruijn():
    thy = builtin("stlc")
    t = parse_term("app<Unit,Unit>(abs<Unit,Unit>((x:Unit. x)), u())", thy)
    app, abs_, u = (thy.term_op(n) for n in ("app", "abs", "u"))
    assert t == Op(app, (U, U), (), (Op(abs_, (U, U), (), (Var(0),)), Op(u)))


def test_explicit_substitution_syntax(stlc):
    t = parse_term("t[u()/x]", stlc, "t:Unit")
    assert t == Subst(Var(1), Op(stlc.term_op("u")))


@pytest.mark.parametrize("text,kind", [
    ("app<o, o>(f, y)", "UnboundVariable"),
    ("foo(x)", "UnknownIdentifier"),
    ("app<o>(x, x)", "ArityMismatch"),
    ("app<o, o>(x x)", "SyntaxError"),
    ("abs<o, o>((x:Unit. x))", "SortMismatch"),
])
def test_term_errors(stlc, text, kind):
    with pytest.raises(DslError) as info:
        parse_term(text, stlc, "x:o")
    assert info.value.kind == kind
    assert info.value.span is not None


def test_parsing_is_syntactic_and_checking_catches_sorts(stlc):
    names, ctx = parse_context("x:o", stlc)
    t = parse_term("app<o, o>(x, x)", stlc, (names, ctx))
    with pytest.raises(SortMismatch):
        check(stlc, ctx, t)


def test_types_and_contexts(stlc, ulc):
    assert parse_type("Fun(o, Prod(o, Unit))", stlc) == ty("Fun", o, ty("Prod", o, U))
    assert parse_type("Fun(A, B)", stlc, ["A", "B"]) == ty("Fun", Meta(0), Meta(1))
    assert print_type(ty("Fun", Meta(0), o), ["A"]) == "Fun(A, o)"
    names, ctx = parse_context("f:Fun(D, D), y:D", ulc)
    assert names == ["f", "y"] and ctx == Context((ty("D"), ty("D")))
    assert print_context(names, ctx) == "f:D, y:D"
    with pytest.raises(DslError):
        parse_context("x:Nope", stlc)


def test_printing_generates_fresh_binder_names(stlc):
    t = parse_term("abs<o, Fun(o, o)>((x:o. abs<o, o>((x:o. x))))", stlc)
    assert print_term(stlc, [], t) == "abs<o, Fun(o, o)>((x0:o. abs<o, o>((x1:o. x1))))"
    # a context name that collides with a generated one is avoided
    t = parse_term("abs<o, o>((y:o. x0))", stlc, "x0:o")
    assert print_term(stlc, ["x0"], t) == "abs<o, o>((x1:o. x0))"


def test_json_shapes(stlc):
    t = parse_term("pair<o, Unit>(x, u())", stlc, "x:o")
    assert term_to_json(t) == {
        "kind": "op", "name": "pair", "inst": [{"op": "o", "args": []}, {"op": "Unit", "args": []}],
        "params": [], "args": [{"kind": "var", "index": 0},
                                {"kind": "op", "name": "u", "inst": [], "params": [], "args": []}],
    }
    assert type_to_json(Meta(1)) == {"meta": 1}


@pytest.mark.parametrize("name", BUILTINS)
def test_theory_printing_round_trips(name):
    thy = builtin(name)
    again = parse_theory(print_theory(thy))
    assert again.type_ops == thy.type_ops
    assert again.type_eqs == thy.type_eqs
    assert again.term_ops == thy.term_ops
    assert again.term_eqs == thy.term_eqs


@pytest.mark.parametrize("name", BUILTINS)
@given(seed=st.integers(0, 2**32 - 1))
def test_term_round_trip(name, seed):
    thy = builtin(name)
    gen = TermGen(thy, closed_universe(thy))
    src = RandomSource(seed)
    ctx = gen.context(src, 3)
    t = gen.explicit_term(src, ctx, gen.sort(src), 6)
    if t is None:
        return
    names = [f"v{i}" for i in range(len(ctx))]
    text = print_term(thy, names, t)
    assert parse_term(text, thy, (names, ctx)) == t
    assert print_term(thy, names, parse_term(text, thy, (names, ctx))) == text
