from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from jetcoh.errors import DomainError, PreconditionError
from jetcoh.jets import BaseRing
from jetcoh.loop_complex import (MultidegreeWindow, blockwise_cohomology, build_base_complex, build_loop_complex,
                                 cartan_suite, compare_weight_zero, delta_reduce, super_delta,
                                 theorem_symplectic_check)
from jetcoh.poisson import PoissonStructure, cotangent_algebroid, tangent_algebroid, zero_algebroid
from jetcoh.poly import SparsePoly
from jetcoh.superalg import SuperElement

from conftest import plane_pi, torus_pi


def odd(al, i):
    return SuperElement.odd_gen((al, i))


def even(a, i):
    return SuperElement.even_gen((a, i))


PLANE = BaseRing(("x", "y"))
TORUS = BaseRing(("x", "y"), frozenset({0, 1}))


def test_base_de_rham():
    C = build_base_complex(tangent_algebroid(PLANE))
    assert C.D(even(0, 0)) == odd(0, 0)
    assert not C.D(odd(1, 0))


def test_base_cotangent_plane():
    C = build_base_complex(cotangent_algebroid(plane_pi()))
    # ρ(dx) = ∂_y, ρ(dy) = -∂_x
    assert C.D(even(0, 0)) == -odd(1, 0)
    assert C.D(even(1, 0)) == odd(0, 0)


def test_base_zero_algebroid():
    C = build_base_complex(zero_algebroid(PLANE))
    assert not C.D(even(0, 0)) and not C.D(odd(0, 0))


def test_loop_propagation():
    C = build_loop_complex(cotangent_algebroid(plane_pi()), 1)
    assert C.D(even(0, 1)) == -odd(1, 1)
    T = build_loop_complex(tangent_algebroid(PLANE), 3)
    for a in range(2):
        for i in range(4):
            assert T.D(even(a, i)) == odd(a, i)
            assert not T.D(odd(a, i))
    Z = build_loop_complex(zero_algebroid(PLANE), 2)
    assert all(not Z.D(even(a, i)) for a in range(2) for i in range(3))


def test_loop_torus_structure_terms():
    C = build_loop_complex(cotangent_algebroid(torus_pi()), 1)
    x0y0 = SparsePoly.var((0, 0), invertible=C.ring.invertible) * SparsePoly.var((1, 0), invertible=C.ring.invertible)
    # d θ^x = -c_{xy}^x θ^x θ^y = -y θ^x θ^y
    assert C.D(odd(0, 0)) == -(SuperElement.from_poly(SparsePoly.var((1, 0))) * odd(0, 0) * odd(1, 0))
    assert C.D(even(1, 0)) == SuperElement.from_poly(x0y0) * odd(0, 0)
    assert [c.name for c in C.checks] == ["d-squared-zero", "d-delta-commute", "d-homogeneous"]


def test_corrupted_algebroid_refused():
    L = cotangent_algebroid(torus_pi()).mutated(0, 1, 0)
    with pytest.raises(DomainError):
        build_loop_complex(L, 1)


# ---- D on random elements

@st.composite
def forms(draw, m=2, W=2):
    terms = {}
    for _ in range(draw(st.integers(1, 3))):
        vs = draw(st.lists(st.tuples(st.integers(0, m - 1), st.integers(0, W - 1)), max_size=2))
        mono = {}
        for v in vs:
            mono[v] = mono.get(v, 0) + 1
        ods = tuple(sorted(draw(st.sets(st.tuples(st.integers(0, m - 1), st.integers(0, W - 1)), max_size=2))))
        terms[(tuple(sorted(mono.items())), ods)] = Fraction(draw(st.integers(-3, 3)))
    return SuperElement(terms)


PLANE_C = build_loop_complex(cotangent_algebroid(plane_pi()), 2)
TORUS_C = build_loop_complex(cotangent_algebroid(torus_pi()), 2)


@settings(max_examples=40, deadline=None)
@given(forms())
def test_d_squared_and_delta_on_elements(s):
    for C in (PLANE_C, TORUS_C):
        assert not C.D(C.D(s))
        assert C.D(C.delta(s)) == C.delta(C.D(s))


@settings(max_examples=40, deadline=None)
@given(forms(), forms())
def test_d_is_odd_derivation(s, t):
    C = TORUS_C
    sign = SuperElement()
    for k, c in s.terms.items():
        sign = sign + SuperElement._raw({k: c * (-1) ** len(k[1])})
    assert C.D(s * t) == C.D(s) * t + sign * C.D(t)


# ---- δ-reduction

def test_delta_reduce_blocks():
    C = build_loop_complex(tangent_algebroid(PLANE), 2)
    r0 = delta_reduce(C, (0, 0, (1, 0)))
    assert r0.dim == r0.reduced_dim == 1
    r1 = delta_reduce(C, (0, 1, (1, 0)))
    assert (r1.dim, r1.reduced_dim) == (1, 0)
    r2 = delta_reduce(C, (0, 1, (1, 1)))
    assert (r2.dim, r2.delta_rank, r2.reduced_dim) == (2, 1, 1)


def test_super_delta_leibniz():
    s = SuperElement.from_poly(SparsePoly.var((0, 0))) * odd(1, 0)
    assert super_delta(s, 2) == SuperElement.from_poly(SparsePoly.var((0, 1))) * odd(1, 0) + \
        SuperElement.from_poly(SparsePoly.var((0, 0))) * odd(1, 1)


# ---- cohomology

def test_plane_de_rham_weight_zero():
    C = build_loop_complex(tangent_algebroid(PLANE), 0)
    rep = blockwise_cohomology(C, True, [0], MultidegreeWindow((2, 2)))
    assert rep.totals() == {0: 1, 1: 0, 2: 0}
    assert [b.label for b in rep.nonzero()] == [(0, 0, (0, 0))]


def test_torus_de_rham_weight_zero():
    C = build_loop_complex(tangent_algebroid(TORUS), 0)
    rep = blockwise_cohomology(C, True, [0], MultidegreeWindow((2, 2)))
    assert rep.totals() == {0: 1, 1: 2, 2: 1}
    assert all(b.label[2] == (0, 0) for b in rep.nonzero())
    assert all(rep.checks)


def test_unreduced_positive_weight_acyclic():
    C = build_loop_complex(tangent_algebroid(PLANE), 2)
    rep = blockwise_cohomology(C, False, [1, 2], MultidegreeWindow((2, 2)))
    assert rep.blocks and not rep.nonzero()


def test_plane_reduced_positive_weight_acyclic():
    C = build_loop_complex(tangent_algebroid(PLANE), 2)
    base = build_base_complex(tangent_algebroid(PLANE))
    win = MultidegreeWindow((2, 2))
    rep = blockwise_cohomology(C, True, [0, 1, 2], win)
    assert all(compare_weight_zero(C, base, rep, win))


def test_torus_log_class_survives_reduction():
    # x_1/x_0 is closed modulo δ (D of it is δ(θ_0/x_0)) but not a δ-image
    C = build_loop_complex(tangent_algebroid(TORUS), 1)
    inv = C.ring.invertible
    u = SuperElement.from_poly(SparsePoly.var((0, 1), invertible=inv) * SparsePoly.var((0, 0), -1, inv))
    v = SuperElement.from_poly(SparsePoly.var((0, 0), -1, inv)) * odd(0, 0)
    assert C.D(u) == C.delta(v)
    rep = blockwise_cohomology(C, True, [1], MultidegreeWindow((0, 0)))
    assert {n: h for n, h in rep.totals().items() if h} == {0: 2, 1: 1}


def test_parallel_matches_serial():
    C = build_loop_complex(cotangent_algebroid(torus_pi()), 1)
    win = MultidegreeWindow((1, 1))
    a = blockwise_cohomology(C, True, [0, 1], win, jobs=1)
    b = blockwise_cohomology(C, True, [0, 1], win, jobs=2)
    assert a.blocks == b.blocks


def test_refuses_without_grading(so3):
    C = build_loop_complex(cotangent_algebroid(so3), 1)
    with pytest.raises(DomainError):
        blockwise_cohomology(C, True, [0], MultidegreeWindow((1, 1, 1)))
    with pytest.raises(DomainError):
        blockwise_cohomology(PLANE_C, True, [0], MultidegreeWindow((1,)))


def test_window_total():
    assert len(MultidegreeWindow((1, 1)).degrees()) == 9
    assert len(MultidegreeWindow((1, 1), total=1).degrees()) == 5


# ---- Euler field

def test_cartan_suite_tangent():
    C = build_loop_complex(tangent_algebroid(PLANE), 3)
    res = cartan_suite(C, [1, 2], MultidegreeWindow((1, 1)))
    assert [r.name for r in res] == ["cartan-homotopy", "euler-delta-commutator", "cartan-homotopy-blocks"]
    assert all(res)


def test_cartan_refuses_other_algebroids():
    with pytest.raises(PreconditionError):
        cartan_suite(PLANE_C)


def test_theorem_plane_small():
    res = theorem_symplectic_check(plane_pi(), 2, MultidegreeWindow((2, 2), total=2))
    assert res.verdict
    assert {n: h for n, h in res.report.totals().items() if h} == {0: 1}
    assert res.base_report.totals() == {0: 1, 1: 0, 2: 0}


def test_theorem_degenerate():
    P = PoissonStructure(PLANE, {(0, 1): PLANE.var(0)})
    with pytest.raises(PreconditionError):
        theorem_symplectic_check(P, 1, MultidegreeWindow((1, 1)))
