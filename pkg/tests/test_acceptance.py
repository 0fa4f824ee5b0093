"""Acceptance criteria, each checked exactly (zero tolerance).

Every test records one PASS/FAIL line; the lines are printed at the end of
the pytest run and also when this file is executed as a script.
"""
from itertools import product

import pytest

from jetcoh.jets import BaseRing, FreeJetModule, JetRing, ProTruncModule, duality_pairing, pairing_gram_rank
from jetcoh.lambda_bracket import PVAStructure, closed_form_survey, mutation_tables, pva_axiom_suite
from jetcoh.lc import intertwine_check
from jetcoh.loop_complex import (MultidegreeWindow, blockwise_cohomology, build_loop_complex, cartan_suite,
                                 theorem_symplectic_check)
from jetcoh.poisson import cotangent_algebroid, tangent_algebroid
from jetcoh.poly import SparsePoly

from conftest import EXAMPLES, plane_pi, torus_pi

RESULTS = {}

PLANE_W, PLANE_WIN = 3, MultidegreeWindow((4, 4), total=4)
TORUS_W, TORUS_WIN = 2, MultidegreeWindow((2, 2))


def record(n, ok, detail=""):
    RESULTS[n] = f"criterion {n}: {'PASS' if ok else 'FAIL'}" + (f"  {detail}" if detail else "")
    print(RESULTS[n])
    return ok


def failing(checks):
    return [f"{c.name}({c.detail})" if c.detail else c.name for c in checks if not c]


def nonzero_totals(report, weight=None):
    return {n: h for n, h in report.totals(weight).items() if h}


# 1 ------------------------------------------------------------------ plane

def test_criterion_1_symplectic_plane():
    res = theorem_symplectic_check(plane_pi(), PLANE_W, PLANE_WIN)
    nz = [(b.label, b.hdim) for b in res.report.nonzero()]
    ok = res.verdict and nz == [((0, 0, (0, 0)), 1)] and nonzero_totals(res.base_report) == {0: 1}
    record(1, ok, f"verdict={'PASS' if res.verdict else 'FAIL'} nonzero={nz}")
    assert res.verdict, failing(res.checks)
    assert nz == [((0, 0, (0, 0)), 1)]
    assert nonzero_totals(res.base_report) == {0: 1}


# 2 ------------------------------------------------------------------ torus

def test_criterion_2_algebraic_torus():
    res = theorem_symplectic_check(torus_pi(), TORUS_W, TORUS_WIN)
    w0 = res.report.totals(0)
    positive = [(b.label, b.hdim) for b in res.report.nonzero() if b.label[1] > 0]
    ok = res.verdict and w0 == {0: 1, 1: 2, 2: 1} and not positive
    record(2, ok, f"weight0={w0} positive-weight-classes={positive} failed={failing(res.checks)}")
    assert w0 == {0: 1, 1: 2, 2: 1}
    assert not positive
    assert res.verdict, failing(res.checks)


# 3 ------------------------------------------------------------------ PVA axioms

def test_criterion_3_pva_axioms_and_mutations():
    W = 4
    notes = []
    ok = True
    for name, make in EXAMPLES.items():
        pi = make()
        P = PVAStructure(JetRing(pi.base, W), pi)
        bad = failing(pva_axiom_suite(P, W))
        if bad:
            ok = False
            notes.append(f"{name}:{bad}")
        # mutations are run at weight 2: detection already happens at the generators
        for entry, table in mutation_tables(P):
            Pm = PVAStructure(JetRing(pi.base, 2), pi, table)
            if all(pva_axiom_suite(Pm, 2)):
                ok = False
                notes.append(f"{name}: mutation {entry} undetected")
    record(3, ok, "; ".join(notes))
    assert ok, notes


# 4 ------------------------------------------------------------------ closed form

def test_criterion_4_closed_form_oracle():
    winners = {}
    for name, make in EXAMPLES.items():
        pi = make()
        w, per = closed_form_survey(PVAStructure(JetRing(pi.base, 4), pi), 4)
        winners[name] = w
        assert len(per) == 15 * pi.m ** 2
    ok = all(w for w in winners.values())
    common = set.intersection(*(set(w) for w in winners.values()))
    record(4, ok, "winning reading=" + ",".join(sorted(common)))
    assert ok and common


# 5 ------------------------------------------------------------------ Cartan identities

def test_criterion_5_structural_identities():
    W = 3
    win = MultidegreeWindow((3, 3))
    C = build_loop_complex(tangent_algebroid(BaseRing(("x", "y"))), W)
    checks = list(C.checks) + cartan_suite(C, range(1, W + 1), win)
    rep = blockwise_cohomology(C, False, range(1, W + 1), win)
    rank_acyclic = bool(rep.blocks) and not rep.nonzero()
    names = {c.name for c in checks}
    expected = {"d-squared-zero", "d-delta-commute", "cartan-homotopy", "euler-delta-commutator",
                "cartan-homotopy-blocks"}
    ok = all(checks) and expected <= names and rank_acyclic
    record(5, ok, f"blocks={len(rep.blocks)} failed={failing(checks)}")
    assert expected <= names
    assert all(checks), failing(checks)
    assert rank_acyclic


# 6 ------------------------------------------------------------------ key lemma

KEY_LEMMA_WINDOWS = {"plane": MultidegreeWindow((3, 3), total=3), "torus": MultidegreeWindow((1, 1))}


def test_criterion_6_key_lemma():
    notes, ok = [], True
    for name, win in KEY_LEMMA_WINDOWS.items():
        pi = EXAMPLES[name]()
        rep = intertwine_check(PVAStructure(JetRing(pi.base, 2), pi), 2, win, max_degree=2)
        good = all(rep.checks) and bool(rep.blocks)
        ok = ok and good
        notes.append(f"{name}:{len(rep.blocks)} blocks " + ("ok" if good else str(failing(rep.checks))))
    record(6, ok, " ".join(notes))
    assert ok, notes


# 7 ------------------------------------------------------------------ duality pairing

def test_criterion_7_duality_pairing():
    bad = []
    count = 0
    for r, n in product((1, 2), range(4)):
        for block in pairing_gram_rank(n, r, 3):
            count += 1
            if block["rank"] != block["size"]:
                bad.append((r, n, block["block"]))
    pairs = 0
    R = JetRing(BaseRing(("x",)), 8)
    coeffs = [R.const(1)] + [SparsePoly({mono: 1}) for w in range(4) for mono in R.monomials(w, (1,))]
    for r, n in product((1, 2), range(4)):
        D, F = ProTruncModule(R, r, n), FreeJetModule(R, r)
        for k, j, l, i in product(range(r), range(n + 1), range(r), range(n + 1)):
            for c, d in product(coeffs, repeat=2):
                w, v = D.basis(k, j).scale(c), F.basis(l, i).scale(d)
                lhs = duality_pairing(D.delta(w), v, D, F) + duality_pairing(w, F.delta(v), D, F)
                pairs += 1
                if lhs != R.delta(duality_pairing(w, v, D, F)):
                    bad.append(("delta", r, n, k, j, l, i))
    record(7, not bad, f"gram blocks={count} pairs={pairs} bad={bad[:3]}")
    assert not bad


# 8 ------------------------------------------------------------------ truncation stability

def test_criterion_8_truncation_stability():
    notes, ok = [], True
    for name, W, win in (("plane", PLANE_W, PLANE_WIN), ("torus", TORUS_W, TORUS_WIN)):
        pi = EXAMPLES[name]()
        tables = []
        for cutoff in (W, W + 1):
            C = build_loop_complex(cotangent_algebroid(pi), cutoff)
            rep = blockwise_cohomology(C, True, range(W + 1), win)
            tables.append([(b.label, b.dim, b.hdim) for b in rep.blocks])
        same = tables[0] == tables[1] and bool(tables[0])
        ok = ok and same
        notes.append(f"{name}:{len(tables[0])} blocks {'equal' if same else 'differ'}")
    record(8, ok, " ".join(notes))
    assert ok, notes


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q"]))
