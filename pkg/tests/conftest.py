import pytest

from jetcoh.jets import BaseRing, JetRing
from jetcoh.poisson import PoissonStructure
from jetcoh.poly import SparsePoly


def var(a, i=0, inv=frozenset()):
    return SparsePoly.var((a, i), invertible=inv)


def plane_pi():
    base = BaseRing(("x", "y"))
    return PoissonStructure(base, {(0, 1): base.const(1)})


def torus_pi():
    base = BaseRing(("x", "y"), frozenset({0, 1}))
    return PoissonStructure(base, {(0, 1): base.var(0) * base.var(1)})


def so3_pi():
    base = BaseRing(("x", "y", "z"))
    x, y, z = (base.var(a) for a in range(3))
    return PoissonStructure(base, {(0, 1): z, (1, 2): x, (2, 0): y})


EXAMPLES = {"plane": plane_pi, "torus": torus_pi, "so3": so3_pi}


@pytest.fixture
def plane():
    return plane_pi()


@pytest.fixture
def torus():
    return torus_pi()


@pytest.fixture
def so3():
    return so3_pi()


@pytest.fixture
def plane_ring():
    return JetRing(BaseRing(("x", "y")), 3)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for n in sorted(lines):
            terminalreporter.write_line(lines[n])
