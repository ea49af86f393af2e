from fractions import Fraction

import pytest

from exlp.model import StandardLP, parse_exact_lp, to_standard_form

EXAMPLE1 = """\
# small and unremarkable LP
max: 2x1 + 3x2 + 2x3 + x4 + 2x5 - x6
st
 x1 + x2 + 2x3 + 3x4 + x5 <= 3
 x1 - x2 + x4 + 3x5 - 2x6 <= 2
 x1 + 2x2 + x3 + 3x4 + x6 <= 4
end
"""


@pytest.fixture
def example1_text():
    return EXAMPLE1


@pytest.fixture
def example1():
    return to_standard_form(parse_exact_lp(EXAMPLE1))


@pytest.fixture
def tiny():
    # min x  s.t.  x = 1, x >= 0
    return StandardLP.from_dense([[1]], [1], [0], [1])


@pytest.fixture
def seventh():
    # min x  s.t.  7x = 1: optimum 1/7 is not dyadic
    return StandardLP.from_dense([[7]], [1], [0], [1])


F = Fraction


_ACCEPTANCE: list = []


@pytest.fixture
def acceptance_log():
    """``log(n, passed, detail)`` records one line per acceptance criterion."""

    def log(n, passed, detail):
        line = f"criterion {n}: {'PASS' if passed else 'FAIL'}  {detail}"
        _ACCEPTANCE.append(line)
        print(line)
        return passed

    return log


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
