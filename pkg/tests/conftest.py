import sys

import pytest

from retractkit.catalog import builtin_group, resolve, shipped_catalog

SMALL_REFS = ["S(1)", "C(2)", "C(4)", "V4", "S(3)", "C(6)", "Dih(4)", "Q8", "Dih(5)", "A(4)",
              "direct(C2,C6)", "Dih(6)", "S(4)"]


def small_groups():
    return [resolve(r) for r in SMALL_REFS]


def two_groups():
    cat = shipped_catalog()
    out = []
    for name in cat.definitions:
        g = cat.resolve(name)
        if g.order & (g.order - 1) == 0:
            out.append(g)
    return out


@pytest.fixture
def s4():
    return builtin_group("S(4)")


@pytest.fixture
def s3():
    return builtin_group("S(3)")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.result_lines():
        terminalreporter.write_line(line)
