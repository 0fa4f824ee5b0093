import pytest

from jetcoh.errors import ConsistencyError
from jetcoh.formal import FormalPoly
from jetcoh.jets import BaseRing, JetRing
from jetcoh.lambda_bracket import (PVAStructure, arakawa_closed_form, closed_form_survey,
                                   induced_poisson_at_lambda_zero, lambda_bracket, lambda_substitute,
                                   mutation_tables, pva_axiom_suite)
from jetcoh.poisson import PoissonStructure


def lam(n, k, c):
    return FormalPoly(1, {(k,): c})


def pva(P, W):
    return PVAStructure(JetRing(P.base, W), P)


def test_plane_examples(plane):
    P = pva(plane, 3)
    R = P.ring
    x0, y0, x1, y1 = R.var(0), R.var(1), R.var(0, 1), R.var(1, 1)
    one = R.const(1)
    assert lambda_bracket(P, x0, y0) == lam(1, 0, one)
    assert lambda_bracket(P, x1, y0) == lam(1, 1, -one)
    assert lambda_bracket(P, x0 * y0, y0) == lam(1, 0, y0)
    assert lambda_bracket(P, x1, y1) == lam(1, 2, -one)
    assert lambda_bracket(P, x0, R.var(1, 1)) == lam(1, 1, one)


def test_format_of_values(plane):
    P = pva(plane, 2)
    val = P.bracket(P.ring.var(0, 1), P.ring.var(1, 1))
    assert val.format(name=P.ring.base.var_name) == "-lambda^2"


def test_lambda_substitute():
    R = JetRing(BaseRing(("x",)), 2)
    one = R.const(1)
    assert lambda_substitute(lam(1, 0, one)) == lam(1, 0, one)
    assert lambda_substitute(lam(1, 1, one)) == lam(1, 1, -one)
    assert lambda_substitute(lam(1, 1, R.var(0)), 2) == lam(1, 1, -R.var(0)) + lam(1, 0, -R.var(0, 1))


def test_torus_bracket_carries_delta(torus):
    P = pva(torus, 2)
    R = P.ring
    x0, y0 = R.var(0), R.var(1)
    # {x0 λ y1} = (λ + δ)(x0 y0)
    got = P.bracket(x0, R.var(1, 1))
    assert got == lam(1, 1, x0 * y0) + lam(1, 0, R.delta(x0 * y0))


@pytest.mark.parametrize("name,W", [("plane", 3), ("torus", 2), ("so3", 2)])
def test_axiom_suite_passes(name, W, request):
    P = pva(request.getfixturevalue(name), W)
    res = pva_axiom_suite(P, W)
    assert [r.name for r in res] == ["pva-delta-derivation", "pva-sesquilinearity", "pva-skew-symmetry",
                                     "pva-jacobi", "pva-leibniz"]
    assert all(res), [r for r in res if not r]


def test_corrupted_generator_bracket_detected(plane):
    P = pva(plane, 2)
    bad = P.with_table({(0, 1): lam(1, 1, P.ring.const(1))})
    failed = {r.name for r in pva_axiom_suite(bad, 2) if not r}
    assert failed & {"pva-sesquilinearity", "pva-skew-symmetry"}
    detail = [r.detail for r in pva_axiom_suite(bad, 2) if not r][0]
    assert detail.startswith("tuple=")


@pytest.mark.parametrize("name", ["plane", "torus", "so3"])
def test_every_single_sign_mutation_detected(name, request):
    P = pva(request.getfixturevalue(name), 2)
    muts = mutation_tables(P)
    assert muts
    for _, table in muts:
        assert not all(pva_axiom_suite(P.with_table(table), 2))


def test_closed_form_examples(plane):
    P = pva(plane, 3)
    one = P.ring.const(1)
    res = arakawa_closed_form(P, 0, 0, 0, 1)
    assert res.matched == ("operator", "sesquilinear") and res.value == lam(1, 0, one)
    res = arakawa_closed_form(P, 1, 0, 0, 1)
    assert res.value == lam(1, 1, -one)
    res = arakawa_closed_form(P, 0, 1, 0, 1)
    assert res.value == lam(1, 1, one)
    # the literal operator reading gives the opposite sign here
    assert res.values["operator"] == lam(1, 1, -one)
    assert res.matched == ("sesquilinear",)


def test_closed_form_raises_when_nothing_matches(plane):
    # plant a wrong recursion value in the memo table: key is (a, i, b, j)
    P = pva(plane, 2)
    P._gen_cache[(1, 1, 0, 0)] = lam(1, 5, P.ring.const(7))
    with pytest.raises(ConsistencyError):
        arakawa_closed_form(P, 1, 0, 1, 0)


@pytest.mark.parametrize("name", ["plane", "torus", "so3"])
def test_closed_form_survey(name, request):
    winners, per = closed_form_survey(pva(request.getfixturevalue(name), 4), 4)
    assert winners == ("sesquilinear",)
    assert len(per) == 15 * len(request.getfixturevalue(name).base.names) ** 2


@pytest.mark.parametrize("name", ["plane", "torus", "so3"])
def test_lambda_zero_recovers_pi(name, request):
    Pi = request.getfixturevalue(name)
    assert induced_poisson_at_lambda_zero(pva(Pi, 2)) == Pi


def test_lambda_zero_of_zero():
    base = BaseRing(("x", "y"))
    zero = PoissonStructure(base, {})
    assert induced_poisson_at_lambda_zero(pva(zero, 1)).is_zero()
