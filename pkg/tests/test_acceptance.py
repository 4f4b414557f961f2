"""One test per acceptance criterion, each under its time limit.

Every test records a PASS/FAIL line that is printed in the terminal summary.
"""

import time
from pathlib import Path


import oracles
from conftest import ACCEPTANCE, BUILTINS
from stt.clone import hom
from stt.context import Context
from stt.dsl import describe_theory, load_theory
from stt.gen import closed_universe
from stt.laws import all_laws, run_law
from stt.polysem import oracle_report
from stt.signature import builtin, builtin_source, diagnose
from stt.types import ty

GOLDEN = Path(__file__).parent / "golden"
SEED = 20240601
o = ty("o")


def Fun(a, b):
    return ty("Fun", a, b)


class Criterion:
    """Times a block and records its verdict line."""

    def __init__(self, number, title, limit):
        self.number, self.title, self.limit = number, title, limit
        self.notes = []

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        ok = exc_type is None and elapsed < self.limit
        detail = "; ".join(self.notes)
        if exc_type is not None:
            detail = f"{detail}; {exc_type.__name__}: {exc}".strip("; ")
        line = (f"{'PASS' if ok else 'FAIL'} criterion {self.number:>2} ({self.title}): "
                f"{elapsed:.2f}s / {self.limit}s limit" + (f" - {detail}" if detail else ""))
        ACCEPTANCE[self.number] = line
        print(line)
        if exc_type is None:
            assert elapsed < self.limit, line
        return False


def run_suite(theories, suite, samples, c):
    failed = []
    total = 0
    for name in theories:
        for law in all_laws(builtin(name), [suite]):
            r = run_law(law, samples, SEED)
            total += r.checked
            if not r.passed or r.checked != samples:
                failed.append(f"{name}:{law.name} ({r.reproducer or r.error})")
    c.notes.append(f"{total} instances checked")
    assert not failed, failed


def test_criterion_01_validation_and_golden():
    with Criterion(1, "builtins validate, declarations match golden files", 1.0) as c:
        for name in BUILTINS:
            thy = load_theory(builtin_source(name), file=name)
            assert diagnose(thy) == []
            assert describe_theory(thy) == (GOLDEN / f"{name}.txt").read_text(), name
        c.notes.append("4 theories")


def test_criterion_02_substitution_laws():
    with Criterion(2, "substitution laws, 500 per law", 60.0) as c:
        run_suite(["stlc", "monoid", "comp-lc"], "subst", 500, c)


def test_criterion_03_explicit_substitution():
    with Criterion(3, "explicit substitution elimination, 500 per law", 30.0) as c:
        run_suite(["stlc", "monoid", "comp-lc"], "explicit", 500, c)


def test_criterion_04_presheaf_action():
    with Criterion(4, "renaming identity/composition/sort preservation, 500 each", 30.0) as c:
        run_suite(["stlc", "monoid", "comp-lc", "ulc"], "rename", 500, c)


def test_criterion_05_equation_satisfaction():
    with Criterion(5, "every declared equation under 100 valuations", 60.0) as c:
        run_suite(list(BUILTINS), "equations", 100, c)


def test_criterion_06_polynomial_oracle():
    with Criterion(6, "operator-extension oracle at size bound 4", 60.0) as c:
        checks = mismatches = 0
        for name in BUILTINS:
            thy = builtin(name)
            base = thy.base_sorts()[0]
            for ctx in (Context(), Context((base,))):
                for target in closed_universe(thy, ctx.sorts):
                    for op in thy.term_ops:
                        r = oracle_report(thy, op, ctx, target, 4)
                        checks += 1
                        mismatches += len(r.missing_terms) + len(r.unexpected_terms)
                        assert r.agree, (name, op.name, target)
        c.notes.append(f"{checks} operator/context/sort checks, {mismatches} mismatches")


def test_criterion_07_clone_extraction():
    with Criterion(7, "monoid hom counts vs word oracle; clone laws on 200 composites", 60.0) as c:
        monoid = builtin("monoid")
        counts = []
        for bound in (1, 2, 3):
            n = len(hom(monoid, [o, o], o, bound))
            assert n == oracles.monoid_word_count(2, bound), bound
            counts.append(n)
        c.notes.append(f"counts {counts}")
        run_suite(["monoid", "stlc"], "clone", 200, c)


def test_criterion_08_lambek_desk_scale():
    with Criterion(8, "closed Fun(o,o) and Church-type classes", 120.0) as c:
        stlc = builtin("stlc(1)")
        for bound in range(1, 7):
            assert len(hom(stlc, [], Fun(o, o), bound)) == 1
        church = Fun(Fun(o, o), Fun(o, o))
        found = []
        for bound in range(1, 9):
            ours = {oracles.from_kernel_term(h.representative) for h in hom(stlc, [], church, bound)}
            theirs = oracles.stlc_normal_forms((), oracles.from_kernel_type(church), bound)
            assert len(ours) == len(theirs) and ours == set(theirs), bound
            found.append(len(ours))
        c.notes.append(f"Church-type classes by bound 1..8: {found}")


def test_criterion_09_finite_model():
    with Criterion(9, "semantic substitution lemma and soundness at base size 2", 60.0) as c:
        run_suite(["stlc"], "model", 250, c)


def test_criterion_10_dsl_round_trip():
    with Criterion(10, "parse after print is the identity, 500 terms per builtin", 10.0) as c:
        run_suite(list(BUILTINS), "dsl", 500, c)
