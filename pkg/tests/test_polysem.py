import pytest

from conftest import BUILTINS
from stt.context import Context, make_context
from stt.dsl import load_theory
from stt.errors import NonEnumerableOperator, SortOutsideUniverse
from stt.gen import closed_universe
from stt.polysem import (
    TermTable,
    Token,
    extension_cardinality,
    oracle_agreement,
    oracle_report,
    poly_extension,
)
from stt.signature import builtin
from stt.types import ty

o, U = ty("o"), ty("Unit")


def Fun(a, b):
    return ty("Fun", a, b)


def test_extension_of_a_binder_counts_tokens(stlc):
    abs_ = stlc.term_op("abs")
    uni = (o, U, Fun(o, o))
    ctx = Context()
    table = TermTable(uni, {(o, Context((o,))): [Token("a", o), Token("b", o)]})
    elems = poly_extension(stlc, abs_, table, ctx, Fun(o, o))
    assert len(elems) == 2
    assert all(e.inst == (o, o) for e in elems)
    assert extension_cardinality(stlc, abs_, table, ctx, (o, o)) == 2


def test_missing_table_entry_is_reported(stlc):
    table = TermTable((o, U, Fun(o, o)), {})
    with pytest.raises(SortOutsideUniverse):
        poly_extension(stlc, stlc.term_op("abs"), table, Context(), Fun(o, o))


def test_context_outside_universe(stlc):
    table = TermTable((o,), {})
    with pytest.raises(SortOutsideUniverse):
        poly_extension(stlc, stlc.term_op("u"), table, Context((Fun(o, o),)))


def test_parameter_choices_multiply():
    thy = load_theory("type o/0\nterm var [A] : -> [x:A] A\n")
    ctx = make_context(thy, [o, o, o])
    elems = poly_extension(thy, thy.term_op("var"), TermTable((o,)), ctx, o)
    assert sorted(e.params for e in elems) == [(0,), (1,), (2,)]
    r = oracle_report(thy, thy.term_op("var"), ctx, o, 2)
    assert r.agree and r.extension_size == 3


def test_unused_metavariable():
    thy = load_theory("type o/0\nterm weird [A] : -> o\n")
    with pytest.raises(NonEnumerableOperator):
        oracle_report(thy, thy.term_op("weird"), Context(), o, 2)


@pytest.mark.parametrize("name", BUILTINS)
def test_agreement_in_empty_and_singleton_contexts(name):
    thy = builtin(name)
    base = thy.base_sorts()[0]
    for ctx in (Context(), Context((base,))):
        for target in closed_universe(thy, ctx.sorts):
            for op in thy.term_ops:
                assert oracle_agreement(thy, op, ctx, target, 3), (op.name, target)


def test_report_counts_match(stlc):
    r = oracle_report(stlc, stlc.term_op("app"), Context((Fun(o, o), o)), o, 3)
    assert r.agree and r.extension_size == r.terms_size > 0
    assert r.missing_terms == () and r.unexpected_terms == ()
