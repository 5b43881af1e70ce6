import sys
import random
from importlib import resources

import pytest

from marginal import jsonio
from marginal.functions import PWLConvexFunction
from marginal.geometry import HPolyhedron
from marginal.program import ParametricProgram
from marginal.rational import Q


def abs_sum():
    """|x + y| on Q^2."""
    return PWLConvexFunction(2, [((1, 1), 0), ((-1, -1), 0)])


def example_program(g=(0, 1), domain=None, C=None):
    """phi = |x + y|, one affine constraint g(x, y) = <g, (x, y)> <= 0."""
    phi = abs_sum() if domain is None else PWLConvexFunction(2, abs_sum().pieces, domain)
    gs = [] if g is None else [PWLConvexFunction.affine(g)]
    return ParametricProgram(1, 1, phi, gs, (), C)


def bundled(name):
    return resources.files("marginal").joinpath("data", name).read_text(encoding="utf-8")


@pytest.fixture
def ex42():
    return jsonio.parse_problem(bundled("example_42.json"))


@pytest.fixture
def rng():
    return random.Random(20261015)


def random_hpoly(rng, dim=None, rows=None, coef=5):
    dim = dim or rng.randint(1, 4)
    rows = rng.randint(0, 6) if rows is None else rows
    ineqs = [(tuple(rng.randint(-coef, coef) for _ in range(dim)), rng.randint(-coef, coef))
             for _ in range(rows)]
    return HPolyhedron(dim, ineqs)


def interval(lo, hi):
    from marginal.geometry import interval as make
    return make(None if lo is None else Q(lo), None if hi is None else Q(hi))


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in module.summary_lines():
        terminalreporter.write_line(line)
