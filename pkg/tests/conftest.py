import os
import sys

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from mmw.syntax import (  # noqa: E402
    Add, And, Eq, Exists, ForAll, Iff, Imp, Mul, Not, Or, Succ, Var, numeral,
)

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

VARS = st.integers(0, 12)


def terms(max_num=2 ** 80):
    leaves = st.one_of(
        st.integers(0, max_num).map(numeral),
        VARS.map(Var),
    )
    return st.recursive(
        leaves,
        lambda t: st.one_of(
            t.map(Succ),
            st.tuples(t, t).map(lambda p: Add(*p)),
            st.tuples(t, t).map(lambda p: Mul(*p)),
        ),
        max_leaves=6,
    )


def formulas(max_num=2 ** 80):
    tm = terms(max_num)
    atoms = st.tuples(tm, tm).map(lambda p: Eq(*p))
    binops = st.sampled_from([And, Or, Imp, Iff])

    def grow(f):
        return st.one_of(
            f.map(Not),
            st.tuples(binops, f, f).map(lambda x: x[0](x[1], x[2])),
            st.tuples(st.sampled_from([ForAll, Exists]), VARS, f).map(lambda x: x[0](x[1], x[2])),
            st.tuples(st.sampled_from([ForAll, Exists]), VARS, f, tm).map(lambda x: x[0](x[1], x[2], x[3])),
        )

    return st.recursive(atoms, grow, max_leaves=8)


# -- acceptance summary: one line per criterion, printed after the run

_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    name = report.nodeid.split("::")[-1]
    if "test_acceptance.py" not in report.nodeid or not name.startswith("test_criterion_"):
        return
    if report.when == "call" or report.outcome != "passed":
        _ACCEPTANCE.setdefault(name, report.outcome)
        if report.outcome != "passed":
            _ACCEPTANCE[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE, key=lambda n: int(n.split("_")[2])):
        verdict = "PASS" if _ACCEPTANCE[name] == "passed" else "FAIL"
        terminalreporter.write_line(f"{verdict}  {name[len('test_'):]}")
