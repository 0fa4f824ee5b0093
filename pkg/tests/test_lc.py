import pytest
from hypothesis import given, settings, strategies as st

from jetcoh.errors import DomainError
from jetcoh.formal import FormalPoly
from jetcoh.jets import JetRing
from jetcoh.lambda_bracket import PVAStructure
from jetcoh.lc import (DEFAULT_CONVENTION, LCCochain, LCConvention, antisymmetry_check,
                       canonicalize_mod_delta_sum, choose_convention, evaluate, intertwine_check,
                       iota_transport, lc_differential, polyderivation_closure_check, sesquilinearity_check,
                       zero_cochain)
from jetcoh.loop_complex import MultidegreeWindow, build_loop_complex
from jetcoh.poisson import cotangent_algebroid
from jetcoh.poly import SparsePoly
from jetcoh.superalg import SuperElement

from conftest import plane_pi, torus_pi


def v(a, i=0):
    return SparsePoly.var((a, i))


def odd(al, i):
    return SuperElement.odd_gen((al, i))


ONE = SparsePoly.const(1)


@pytest.fixture(scope="module")
def P():
    return PVAStructure(JetRing(plane_pi().base, 2), plane_pi())


def test_canonicalize_one_variable():
    assert canonicalize_mod_delta_sum(FormalPoly(1, {(1,): v(0)}), 2) == FormalPoly(0, {(): -v(0, 1)})
    assert canonicalize_mod_delta_sum(FormalPoly(1, {(0,): v(0)}), 2) == FormalPoly(0, {(): v(0)})
    assert not canonicalize_mod_delta_sum(FormalPoly(1, {(1,): ONE}), 2)


def test_canonicalize_two_variables():
    got = canonicalize_mod_delta_sum(FormalPoly(2, {(0, 1): v(0)}), 2)
    assert got == FormalPoly(1, {(1,): -v(0), (0,): -v(0, 1)})
    with pytest.raises(DomainError):
        canonicalize_mod_delta_sum(FormalPoly(0, {(): ONE}))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2), st.sampled_from([(0, 0), (1, 0), (0, 1)]),
                          st.integers(-3, 3)), max_size=4))
def test_canonicalize_fixes_canonical_forms(terms):
    # a polynomial free of the last variable is already canonical
    p = FormalPoly(2, {})
    for k1, _, var, c in terms:
        p = p + FormalPoly(2, {(k1, 0): SparsePoly.var(var) * c})
    assert canonicalize_mod_delta_sum(p, 4).embed(2, {0: 0}) == p


def test_iota_generators():
    Y = iota_transport(odd(0, 0), 2, 2)
    assert Y.n == 1 and Y.value((0,)) == FormalPoly(0, {(): ONE}) and not Y.value((1,))
    # θ_1 = δθ_0 lies in the δ-image, so its class vanishes
    assert iota_transport(odd(0, 1), 2, 2).is_zero()
    Y = iota_transport(SuperElement.from_poly(v(0)) * odd(1, 1), 2, 2)
    assert Y.value((1,)) == FormalPoly(0, {(): -v(0, 1)})


def test_iota_degree_two():
    Y = iota_transport(SuperElement.from_poly(v(0)) * odd(0, 0) * odd(1, 1), 2, 2)
    assert Y.value((0, 1)) == FormalPoly(1, {(1,): -v(0), (0,): -v(0, 1)})
    assert Y.value((1, 0)) == FormalPoly(1, {(1,): -v(0)})
    assert antisymmetry_check(Y, 2)


def test_iota_degree_checks():
    assert iota_transport(SuperElement(), 2, 2, degree=1).n == 1
    with pytest.raises(DomainError):
        iota_transport(odd(0, 0), 2, 2, degree=2)
    with pytest.raises(DomainError):
        iota_transport(odd(0, 0) + odd(0, 0) * odd(1, 0), 2, 2)


def test_degree_zero_differential(P):
    unit = LCCochain(0, 2, {(): FormalPoly(0, {(): ONE})})
    assert lc_differential(unit, P).is_zero()
    dY = lc_differential(LCCochain(0, 2, {(): FormalPoly(0, {(): v(0)})}), P)
    # {y λ x} = -1, matching D x = -θ^y
    assert dY.value((1,)) == FormalPoly(0, {(): -ONE}) and not dY.value((0,))
    assert dY == iota_transport(SuperElement.from_poly(-ONE) * odd(1, 0), 2, 2)


@st.composite
def one_cochains(draw):
    values = {}
    for a in range(2):
        c = SparsePoly.zero()
        for var in draw(st.lists(st.sampled_from([(0, 0), (1, 0), (0, 1), (1, 1)]), max_size=3)):
            c = c + SparsePoly.var(var) * draw(st.integers(-2, 2))
        values[(a,)] = FormalPoly(0, {(): c})
    return LCCochain(1, 2, values)


@settings(max_examples=15, deadline=None)
@given(one_cochains())
def test_d_squared_zero_random(Y):
    P = PVAStructure(JetRing(torus_pi().base, 3), torus_pi())
    Y = LCCochain(1, 2, {k: FormalPoly(0, {(): c.coeff(()).with_invertible(P.ring.invertible)})
                         for k, c in Y.values.items() if c})
    assert lc_differential(lc_differential(Y, P), P).is_zero()


def test_degree_limit(P):
    with pytest.raises(DomainError):
        lc_differential(zero_cochain(3, 2), P)


def test_closure_and_sesquilinearity(P):
    x0, y0 = P.ring.var(0), P.ring.var(1)
    factors = [(x0, y0), (x0, x0)]
    for Y in (LCCochain(0, 2, {(): FormalPoly(0, {(): x0})}), zero_cochain(1, 2),
              iota_transport(SuperElement.from_poly(x0) * odd(0, 0), 2, 2)):
        assert polyderivation_closure_check(Y, P, factors)
        assert sesquilinearity_check(Y, P)


def test_antisymmetry_catches_corruption():
    Y = iota_transport(SuperElement.from_poly(v(0)) * odd(0, 0) * odd(1, 0), 2, 2)
    assert antisymmetry_check(Y, 2)
    bad = LCCochain(2, 2, dict(Y.values))
    bad.values[(1, 0)] = Y.value((0, 1))
    assert not antisymmetry_check(bad, 2)


def test_evaluate_sesquilinear_slot():
    # Y(x_1) for Y = ι(θ^x_0) is -λ·1
    Y = iota_transport(odd(0, 0), 2, 2)
    assert evaluate(Y, [{0: 1}], [v(0, 1)], 1, 2) == FormalPoly(1, {(1,): -ONE})


def test_intertwining_plane(P):
    rep = intertwine_check(P, 1, MultidegreeWindow((2, 2), total=2))
    assert all(rep.checks), [c for c in rep.checks if not c]
    assert all(b["loop_reduced"] == b["iota_rank"] == b["lc_dim"] for b in rep.blocks)


def test_convention_selected_on_torus():
    P = PVAStructure(JetRing(torus_pi().base, 1), torus_pi())
    good = choose_convention(P, 1, MultidegreeWindow((1, 1)))
    assert good == [DEFAULT_CONVENTION]
    assert "+sum_i" in LCConvention().describe()


def test_wrong_convention_fails_torus():
    P = PVAStructure(JetRing(torus_pi().base, 1), torus_pi())
    C = build_loop_complex(cotangent_algebroid(P.pi), 1)
    rep = intertwine_check(P, 1, MultidegreeWindow((1, 1)), LCConvention(1, -1), C)
    assert not all(rep.checks)
