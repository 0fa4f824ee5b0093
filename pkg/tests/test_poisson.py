import pytest

from jetcoh.errors import DomainError
from jetcoh.jets import BaseRing
from jetcoh.poisson import (PoissonStructure, algebroid_axiom_check, cotangent_algebroid, pi_sharp_iso,
                            schouten_jacobi_check, tangent_algebroid, zero_algebroid)


def test_two_dimensional_bivectors_are_poisson(plane, torus):
    base = BaseRing(("x", "y"))
    weird = PoissonStructure(base, {(0, 1): base.var(0) ** 3 + base.var(1)})
    for P in (plane, torus, weird):
        assert schouten_jacobi_check(P)


def test_so3_is_poisson(so3):
    assert schouten_jacobi_check(so3)


def test_non_poisson_bivector_reports_triple():
    base = BaseRing(("x", "y", "z"))
    x, y, z = (base.var(a) for a in range(3))
    P = PoissonStructure(base, {(0, 1): z, (1, 2): y * y})
    res = schouten_jacobi_check(P)
    # hand expansion: the cyclic sum is π^{yx}·∂_y(y²) = -2yz
    assert not res
    assert res.counterexample == (0, 1, 2)
    assert res.detail.endswith("residue=-2*v1_0*v2_0")
    with pytest.raises(DomainError):
        cotangent_algebroid(P)


def test_antisymmetry_enforced():
    base = BaseRing(("x", "y"))
    with pytest.raises(DomainError):
        PoissonStructure(base, {(0, 1): base.const(1), (1, 0): base.const(1)})
    with pytest.raises(DomainError):
        PoissonStructure(base, {(0, 0): base.const(1)})


def test_cotangent_plane(plane):
    L = cotangent_algebroid(plane)
    one = plane.base.const(1)
    assert L.anchor[0] == [plane.base.zero(), one]
    assert L.anchor[1] == [-one, plane.base.zero()]
    assert not L.structure


def test_cotangent_torus(torus):
    L = cotangent_algebroid(torus)
    b = torus.base
    x, y = b.var(0), b.var(1)
    assert L.anchor[0][1] == x * y and L.anchor[1][0] == -x * y
    assert L.c(0, 1, 0) == y and L.c(0, 1, 1) == x
    assert L.c(1, 0, 0) == -y


def test_cotangent_of_zero():
    base = BaseRing(("x", "y"))
    L = cotangent_algebroid(PoissonStructure(base, {}))
    assert all(not p for row in L.anchor for p in row) and not L.structure


def test_tangent_data():
    L1 = tangent_algebroid(BaseRing(("x",)))
    assert L1.r == 1 and L1.anchor == [[BaseRing(("x",)).const(1)]]
    L2 = tangent_algebroid(BaseRing(("x", "y"), frozenset({0, 1})))
    assert [[bool(p) for p in row] for row in L2.anchor] == [[True, False], [False, True]]
    assert not L2.structure


@pytest.mark.parametrize("name", ["plane", "torus", "so3"])
def test_algebroid_axioms_pass(name, request):
    P = request.getfixturevalue(name)
    assert algebroid_axiom_check(cotangent_algebroid(P))
    assert algebroid_axiom_check(tangent_algebroid(P.base))
    assert algebroid_axiom_check(zero_algebroid(P.base))


def test_corrupted_torus_algebroid_detected(torus):
    L = cotangent_algebroid(torus).mutated(0, 1, 0)
    res = algebroid_axiom_check(L)
    assert not res and res.detail


def test_sharp_iso(plane, torus):
    iso = pi_sharp_iso(plane)
    assert not iso.degenerate and iso.det == plane.base.const(1)
    iso = pi_sharp_iso(torus)
    x, y = torus.base.var(0), torus.base.var(1)
    assert iso.det == (x * y) ** 2 and not iso.degenerate
    base = BaseRing(("x", "y"))
    deg = pi_sharp_iso(PoissonStructure(base, {(0, 1): base.var(0)}))
    assert deg.degenerate and deg.det == base.var(0) ** 2


def test_bivector_degree(plane, torus, so3):
    assert plane.bivector_degree() == (-1, -1)
    assert torus.bivector_degree() == (0, 0)
    # z - x - y versus x - y - z: no single q works
    assert so3.bivector_degree() is None
