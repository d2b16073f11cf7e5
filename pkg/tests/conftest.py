import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hyperred.field import Tower  # noqa: E402


@pytest.fixture(scope="session")
def qx():
    return Tower()


@pytest.fixture(scope="session")
def xyt():
    """QQ(x, y)(t) with y constant and t' = x t."""
    tw = Tower().extend_monomial("y", lambda tw, t: 0)
    return tw.extend_hyperexponential("t", tw.x)


@pytest.fixture(scope="session")
def hyper_xy():
    """QQ(x)(y, t) with y' = x y and t' = x y t."""
    tw = Tower().extend_hyperexponential("y", Tower().x)
    return tw.extend_hyperexponential("t", tw.x * tw.gen(1))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
