"""Load a theory file, validate it, and run the property suites on it."""

from pathlib import Path

from stt.dsl import describe_theory, load_theory
from stt.laws import all_laws, run_law

path = Path(__file__).with_name("stlc.stt")
theory = load_theory(path.read_text(), file=str(path))
print(describe_theory(theory))

for law in all_laws(theory):
    report = run_law(law, samples=100, seed=0)
    print(f"{'ok  ' if report.passed else 'FAIL'} {report.name} ({report.checked} instances)")
