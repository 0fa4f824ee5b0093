"""De Rham–Lie complex of a Lie algebroid, its loop lift, δ-reduction and blockwise cohomology.

Even generators are jet variables ``(a, i)``; odd generators are ``(α, i)``,
the level-i copy of the dual frame element θ^α.
"""
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import factorial
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import ConstructionError, DomainError, PreconditionError
from .grading import GradingVector
from .jets import JetRing, enumerate_monomials
from .linalg import sparse_rank
from .poisson import (CheckResult, LieAlgebroidData, PoissonStructure, algebroid_axiom_check,
                      cotangent_algebroid, pi_sharp_iso, tangent_algebroid, transport_algebroid)
from .superalg import SuperElement, super_derivation_apply

MODULE = "loop-complex"

Label = Tuple[int, int, Tuple[int, ...]]


# ---------------------------------------------------------------- windows

@dataclass(frozen=True)
class MultidegreeWindow:
    """|d_a| <= bounds[a] for every a, and optionally Σ|d_a| <= total."""

    bounds: Tuple[int, ...]
    total: Optional[int] = None

    def degrees(self):
        ranges = [range(-b, b + 1) for b in self.bounds]
        out = []
        for d in product(*ranges):
            if self.total is None or sum(abs(x) for x in d) <= self.total:
                out.append(tuple(d))
        return out


# ---------------------------------------------------------------- the complex

@dataclass
class LoopCEComplex:
    L: LieAlgebroidData
    W: int
    D_even: Dict[tuple, SuperElement]
    D_odd: Dict[tuple, SuperElement]
    grading: Optional[GradingVector]
    checks: List[CheckResult] = field(default_factory=list)

    @property
    def m(self):
        return self.L.base.m

    @property
    def r(self):
        return self.L.r

    @property
    def ring(self):
        return JetRing(self.L.base, self.W)

    def even_gens(self):
        return [(a, i) for i in range(self.W + 1) for a in range(self.m)]

    def odd_gens(self):
        # sorted in the global odd order, so that combinations() yields canonical keys
        return [(al, i) for al in range(self.r) for i in range(self.W + 1)]

    def D(self, s: SuperElement) -> SuperElement:
        return super_derivation_apply(self.D_even, self.D_odd, s, "odd")

    def delta(self, s: SuperElement) -> SuperElement:
        return super_delta(s, self.W)

    def generator(self, kind, g) -> SuperElement:
        return SuperElement.even_gen(g) if kind == "even" else SuperElement.odd_gen(g)

    # -- blocks
    def block_basis(self, n: int, w: int, d: Sequence[int]) -> List[tuple]:
        """Monomial keys of the (n, w, d) block, levels capped at W."""
        if self.grading is None:
            raise DomainError("complex has no multigrading; blocks are undefined", MODULE)
        if w > self.W:
            raise DomainError(f"weight {w} exceeds cutoff W={self.W}", MODULE)
        odd = [g for g in self.odd_gens() if g[1] <= w]
        inv = self.L.base.invertible
        out = []
        for S in combinations(odd, n):
            ws = sum(g[1] for g in S)
            if ws > w:
                continue
            rest = list(d)
            for g in S:
                dg = self.grading.odd[g][1]
                for k in range(self.m):
                    rest[k] -= dg[k]
            for mono in enumerate_monomials(self.m, inv, w - ws, rest, max_level=self.W):
                out.append((mono, S))
        return sorted(out)


def _delta_tables(m, r, W):
    ev = {}
    od = {}
    for i in range(W + 1):
        for a in range(m):
            ev[(a, i)] = SuperElement.even_gen((a, i + 1)).scale(i + 1) if i < W else SuperElement()
        for al in range(r):
            od[(al, i)] = SuperElement.odd_gen((al, i + 1)).scale(i + 1) if i < W else SuperElement()
    return ev, od


_DELTA_CACHE: Dict[tuple, tuple] = {}


def super_delta(s: SuperElement, W: int) -> SuperElement:
    """Even derivation x_{a,i} ↦ (i+1)x_{a,i+1}, θ_i ↦ (i+1)θ_{i+1}; levels above W dropped."""
    levels_e = {v for (mo, _) in s.terms for v, _ in mo}
    levels_o = {t for (_, o) in s.terms for t in o}
    m = max((v[0] for v in levels_e), default=-1) + 1
    r = max((t[0] for t in levels_o), default=-1) + 1
    key = (m, r, W)
    if key not in _DELTA_CACHE:
        _DELTA_CACHE[key] = _delta_tables(m, r, W)
    ev, od = _DELTA_CACHE[key]
    return super_derivation_apply(ev, od, s, "even")


def super_delta_divided(s: SuperElement, k: int, W: int) -> SuperElement:
    for _ in range(k):
        s = super_delta(s, W)
    return s.scale(Fraction(1, factorial(k))) if k > 1 else s


def _grading_for(L: LieAlgebroidData, W: int) -> Optional[GradingVector]:
    if L.frame_degrees is None:
        return None
    m = L.base.m
    even = {}
    odd = {}
    for i in range(W + 1):
        for a in range(m):
            even[(a, i)] = (i, tuple(1 if k == a else 0 for k in range(m)))
        for al in range(L.r):
            odd[(al, i)] = (i, tuple(-x for x in L.frame_degrees[al]))
    return GradingVector(m, even, odd)


def _base_tables(L: LieAlgebroidData):
    """d x_a = Σ_α ρ_α^a θ^α,  d θ^γ = −Σ_{α<β} c_{αβ}^γ θ^α θ^β (all at level 0)."""
    ev = {}
    for a in range(L.base.m):
        s = SuperElement()
        for al in range(L.r):
            rho = L.anchor[al][a]
            if rho:
                s = s + SuperElement.from_poly(rho, ((al, 0),))
        ev[(a, 0)] = s
    od = {}
    for ga in range(L.r):
        s = SuperElement()
        for al, be in combinations(range(L.r), 2):
            c = L.c(al, be, ga)
            if c:
                s = s - SuperElement.from_poly(c, ((al, 0), (be, 0)))
        od[(ga, 0)] = s
    return ev, od


def _verify(C: LoopCEComplex, what: str):
    """D² = 0 and [D, δ] = 0 on every generator (δ only below the cutoff); homogeneity."""
    for kind, gens in (("even", C.even_gens()), ("odd", C.odd_gens())):
        for g in gens:
            x = C.generator(kind, g)
            dd = C.D(C.D(x))
            if dd:
                raise ConstructionError(f"{what}: D^2 != 0 on generator {kind}{g}: {dd}", MODULE)
            if g[1] < C.W:
                comm = C.D(C.delta(x)) - C.delta(C.D(x))
                if comm:
                    raise ConstructionError(f"{what}: [D, delta] != 0 on generator {kind}{g}: {comm}", MODULE)
    C.checks.append(CheckResult("d-squared-zero", True))
    if C.W > 0:
        C.checks.append(CheckResult("d-delta-commute", True))
    if C.grading is not None:
        bad = homogeneity_defect(C)
        C.checks.append(CheckResult("d-homogeneous", bad is None, "" if bad is None else f"generator={bad}"))


def homogeneity_defect(C: LoopCEComplex):
    """First generator whose D-image is not of label (deg+1, w, d); ``None`` if D is homogeneous."""
    g = C.grading
    for kind, table in (("even", C.D_even), ("odd", C.D_odd)):
        for gen, img in sorted(table.items()):
            key = ((((gen), 1),), ()) if kind == "even" else ((), (gen,))
            n, w, d = g.key_label(key)
            for k in img.terms:
                if g.key_label(k) != (n + 1, w, d):
                    return f"{kind}{gen}"
    return None


def build_base_complex(L: LieAlgebroidData) -> LoopCEComplex:
    res = algebroid_axiom_check(L)
    if not res:
        raise DomainError(f"inconsistent algebroid data: {res.detail}", MODULE)
    ev, od = _base_tables(L)
    C = LoopCEComplex(L, 0, ev, od, _grading_for(L, 0))
    _verify(C, "base complex")
    return C


def build_loop_complex(L: LieAlgebroidData, W: int) -> LoopCEComplex:
    """Propagate the base differential: D(g_i) := δ^{(i)}(D g_0) for every generator."""
    if W < 0:
        raise DomainError("cutoff W must be >= 0", MODULE)
    res = algebroid_axiom_check(L)
    if not res:
        raise DomainError(f"inconsistent algebroid data: {res.detail}", MODULE)
    ev0, od0 = _base_tables(L)
    ev, od = {}, {}
    for table0, table in ((ev0, ev), (od0, od)):
        for (g, _), img in table0.items():
            cur = img
            for i in range(W + 1):
                table[(g, i)] = cur.scale(Fraction(1, factorial(i)))
                cur = super_delta(cur, W)
    C = LoopCEComplex(L, W, ev, od, _grading_for(L, W))
    _verify(C, "loop complex")
    return C


# ---------------------------------------------------------------- block linear algebra

def _rank(elems) -> int:
    return sparse_rank([e.terms for e in elems if e])


def _elements(keys):
    return [SuperElement._raw({k: Fraction(1)}) for k in keys]


@dataclass
class ReducedBlock:
    label: Label
    dim: int
    delta_rank: int
    basis: List[tuple]
    delta_image: List[SuperElement]

    @property
    def reduced_dim(self):
        return self.dim - self.delta_rank


def delta_reduce(C: LoopCEComplex, label: Label) -> ReducedBlock:
    """Quotient of the (n, w, d) block by δ of the (n, w−1, d) block."""
    n, w, d = label
    basis = C.block_basis(n, w, d)
    if w == 0:
        return ReducedBlock(label, len(basis), 0, basis, [])
    img = [C.delta(e) for e in _elements(C.block_basis(n, w - 1, d))]
    img = [e for e in img if e]
    return ReducedBlock(label, len(basis), _rank(img), basis, img)


@dataclass
class BlockResult:
    label: Label
    dim: int
    rank_in: int
    rank_out: int
    hdim: int


@dataclass
class CohomologyReport:
    reduced: bool
    blocks: List[BlockResult]
    checks: List[CheckResult] = field(default_factory=list)

    def totals(self, weight=None) -> Dict[int, int]:
        out: Dict[int, int] = {}
        for b in self.blocks:
            if weight is None or b.label[1] == weight:
                out[b.label[0]] = out.get(b.label[0], 0) + b.hdim
        return dict(sorted(out.items()))

    def nonzero(self):
        return [b for b in self.blocks if b.hdim]

    def by_label(self):
        return {b.label: b for b in self.blocks}


def _column(C: LoopCEComplex, w: int, d: tuple, reduce: bool) -> List[BlockResult]:
    """All degrees of one (w, d) column."""
    nmax = C.r * (w + 1)
    bases = {n: C.block_basis(n, w, d) for n in range(-1, nmax + 2) if 0 <= n <= nmax}
    Dimg = {n: [C.D(e) for e in _elements(b)] for n, b in bases.items()}
    dimg: Dict[int, List[SuperElement]] = {}
    if reduce and w > 0:
        for n in bases:
            dimg[n] = [x for x in (C.delta(e) for e in _elements(C.block_basis(n, w - 1, d))) if x]
    else:
        dimg = {n: [] for n in bases}
    drank = {n: _rank(dimg[n]) for n in bases}
    dim = {n: len(bases[n]) - drank[n] for n in bases}
    rank_out = {}
    for n in bases:
        tgt = dimg.get(n + 1, [])
        rank_out[n] = _rank(Dimg[n] + tgt) - drank.get(n + 1, 0)
    out = []
    for n in sorted(bases):
        if not bases[n]:
            continue
        rin = rank_out.get(n - 1, 0)
        h = dim[n] - rank_out[n] - rin
        out.append(BlockResult((n, w, d), dim[n], rin, rank_out[n], h))
    return out


def _column_task(args):
    C, w, d, reduce = args
    return _column(C, w, d, reduce)


def blockwise_cohomology(C: LoopCEComplex, reduce: bool, weights: Sequence[int],
                         window: MultidegreeWindow, jobs: int = 1) -> CohomologyReport:
    if C.grading is None:
        raise DomainError("algebroid carries no multigrading; cohomology refused", MODULE)
    bad = homogeneity_defect(C)
    if bad is not None:
        raise DomainError(f"D is not homogeneous under the declared grading (generator {bad}); "
                          f"cohomology refused", MODULE)
    if len(window.bounds) != C.m:
        raise DomainError(f"multidegree window has {len(window.bounds)} bounds for {C.m} variables", MODULE)
    tasks = [(C, w, d, reduce) for w in weights for d in window.degrees()]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            cols = list(ex.map(_column_task, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        cols = [_column_task(t) for t in tasks]
    blocks = sorted((b for col in cols for b in col), key=lambda b: (b.label[1], b.label[2], b.label[0]))
    report = CohomologyReport(reduce, blocks)
    report.checks.append(euler_check(report))
    return report


def euler_check(report: CohomologyReport) -> CheckResult:
    cols: Dict[tuple, List[int]] = {}
    for b in report.blocks:
        s = -1 if b.label[0] % 2 else 1
        acc = cols.setdefault((b.label[1], b.label[2]), [0, 0])
        acc[0] += s * b.dim
        acc[1] += s * b.hdim
    for key, (x, y) in sorted(cols.items()):
        if x != y:
            return CheckResult("euler-characteristic", False, f"column=w{key[0]}d{key[1]}", key)
    return CheckResult("euler-characteristic", True)


# ---------------------------------------------------------------- Euler field / Cartan

def iota_eta_tables(C: LoopCEComplex):
    """ι_η: θ^a_i ↦ i·x_{a,i}, x ↦ 0 (tangent frame: θ^a is dual to ∂/∂x_a)."""
    ev = {g: SuperElement() for g in C.even_gens()}
    od = {(a, i): SuperElement.even_gen((a, i)).scale(i) if i else SuperElement() for (a, i) in C.odd_gens()}
    return ev, od


def cartan_suite(C: LoopCEComplex, weights: Sequence[int] = (), window: MultidegreeWindow = None) -> List[CheckResult]:
    """[D, ι_η] = Lie_η and [Lie_η, Lie_δ] = Lie_δ on generators, plus the homotopy on block bases."""
    if C.L.kind != "tangent":
        raise PreconditionError("the Euler contraction is only defined for the tangent algebroid", MODULE)
    iev, iod = iota_eta_tables(C)

    def iota(s):
        return super_derivation_apply(iev, iod, s, "odd")

    def lie_eta(s):
        out = SuperElement()
        for k, c in s.terms.items():
            w = sum(v[1] * e for v, e in k[0]) + sum(t[1] for t in k[1])
            if w:
                out = out + SuperElement._raw({k: c * w})
        return out

    results = []
    fail = None
    for kind, gens in (("even", C.even_gens()), ("odd", C.odd_gens())):
        for g in gens:
            x = C.generator(kind, g)
            if C.D(iota(x)) + iota(C.D(x)) != lie_eta(x):
                fail = fail or f"{kind}{g}"
    results.append(CheckResult("cartan-homotopy", fail is None, "" if fail is None else f"generator={fail}"))
    fail = None
    for kind, gens in (("even", C.even_gens()), ("odd", C.odd_gens())):
        for g in gens:
            if g[1] >= C.W:
                continue
            x = C.generator(kind, g)
            lhs = lie_eta(C.delta(x)) - C.delta(lie_eta(x))
            if lhs != C.delta(x):
                fail = fail or f"{kind}{g}"
    results.append(CheckResult("euler-delta-commutator", fail is None, "" if fail is None else f"generator={fail}"))
    if window is not None:
        fail = None
        for w in weights:
            for d in window.degrees():
                for n in range(C.r * (w + 1) + 1):
                    for e in _elements(C.block_basis(n, w, d)):
                        if C.D(iota(e)) + iota(C.D(e)) != e.scale(w):
                            fail = fail or f"block=({n},{w},{d})"
        results.append(CheckResult("cartan-homotopy-blocks", fail is None,
                                   "" if fail is None else fail))
    return results


# ---------------------------------------------------------------- comparisons

def compare_weight_zero(C: LoopCEComplex, base: LoopCEComplex, report: CohomologyReport,
                        window: MultidegreeWindow) -> List[CheckResult]:
    """Weight-0 blocks equal the base complex; positive-weight reduced blocks acyclic."""
    mismatch = None
    for d in window.degrees():
        for n in range(C.r + 1):
            b1 = C.block_basis(n, 0, d)
            b2 = base.block_basis(n, 0, d)
            if b1 != b2:
                mismatch = mismatch or f"basis({n},0,{d})"
                continue
            for e in _elements(b1):
                if C.D(e) != base.D(e):
                    mismatch = mismatch or f"D({n},0,{d})"
    out = [CheckResult("weight0-equals-base", mismatch is None, mismatch or "")]
    bad = [b for b in report.blocks if b.label[1] > 0 and b.hdim]
    out.append(CheckResult("positive-weight-acyclic", not bad,
                           "" if not bad else "block=" + _label_token(bad[0].label),
                           [b.label for b in bad]))
    return out


def _label_token(label: Label) -> str:
    n, w, d = label
    return f"({n},{w},({','.join(str(x) for x in d)}))"


def _frame_pullback(C_cot: LoopCEComplex, iso) -> Dict[tuple, SuperElement]:
    """Φ(θ_tan^a_i) = δ^{(i)} Σ_α π^{αa} θ^α_0, Φ(x) = x."""
    m = C_cot.m
    out = {}
    for a in range(m):
        s = SuperElement()
        for al in range(m):
            p = iso.matrix[al][a]
            if p:
                s = s + SuperElement.from_poly(p, ((al, 0),))
        cur = s
        for i in range(C_cot.W + 1):
            out[(a, i)] = cur.scale(Fraction(1, factorial(i)))
            cur = super_delta(cur, C_cot.W)
    return out


def transport_check(P: PoissonStructure, C_cot: LoopCEComplex, C_tan: LoopCEComplex, iso) -> List[CheckResult]:
    """π♯ identifies the cotangent algebroid with the tangent one; Φ is a chain map on generators."""
    L_tr = transport_algebroid(C_cot.L, iso.inverse, iso.matrix)
    T = tangent_algebroid(P.base)
    same = L_tr.anchor == T.anchor and not any(any(row) for row in L_tr.structure.values())
    out = [CheckResult("pi-sharp-transport", same, "" if same else "transported data differs from tangent")]
    phi_odd = _frame_pullback(C_cot, iso)
    phi_even = {g: SuperElement.even_gen(g) for g in C_cot.even_gens()}

    def phi(s):
        # algebra morphism: substitute generator images
        res = SuperElement()
        for (mono, odd), c in s.terms.items():
            t = SuperElement.const(c)
            for v, e in mono:
                if e < 0:
                    t = t * SuperElement._raw({(((v, e),), ()): Fraction(1)})
                else:
                    for _ in range(e):
                        t = t * phi_even[v]
            for g in odd:
                t = t * phi_odd[g]
            res = res + t
        return res

    fail = None
    for kind, gens in (("even", C_tan.even_gens()), ("odd", C_tan.odd_gens())):
        for g in gens:
            x = C_tan.generator(kind, g)
            if phi(C_tan.D(x)) != C_cot.D(phi(x)):
                fail = fail or f"{kind}{g}"
    out.append(CheckResult("pi-sharp-chain-map", fail is None, "" if fail is None else f"generator={fail}"))
    return out


@dataclass
class TheoremResult:
    verdict: bool
    report: CohomologyReport
    base_report: CohomologyReport
    checks: List[CheckResult]


def theorem_symplectic_check(P: PoissonStructure, W: int, window: MultidegreeWindow,
                             jobs: int = 1) -> TheoremResult:
    iso = pi_sharp_iso(P)
    if iso.degenerate:
        raise PreconditionError(f"π is degenerate: det = {iso.det} is not a unit", MODULE)
    C = build_loop_complex(cotangent_algebroid(P), W)
    report = blockwise_cohomology(C, True, range(W + 1), window, jobs)
    base = build_base_complex(tangent_algebroid(P.base))
    base_report = blockwise_cohomology(base, False, [0], window, jobs)
    checks = list(C.checks) + list(report.checks)
    # per (degree, multidegree): Σ_w reduced cohomology of the loop complex vs base de Rham
    loop_tot: Dict[tuple, int] = {}
    for b in report.blocks:
        key = (b.label[0], b.label[2])
        loop_tot[key] = loop_tot.get(key, 0) + b.hdim
    base_tot = {(b.label[0], b.label[2]): b.hdim for b in base_report.blocks}
    diff = None
    for key in sorted(set(loop_tot) | set(base_tot)):
        if loop_tot.get(key, 0) != base_tot.get(key, 0):
            diff = diff or key
    checks.append(CheckResult("matches-base-derham", diff is None,
                              "" if diff is None else f"degree={diff[0]},d={diff[1]}"))
    bad = [b for b in report.blocks if b.label[1] > 0 and b.hdim]
    checks.append(CheckResult("positive-weight-acyclic", not bad,
                              "" if not bad else "block=" + _label_token(bad[0].label)))
    T = build_loop_complex(tangent_algebroid(P.base), W)
    checks.extend(transport_check(P, C, T, iso))
    verdict = all(checks)
    return TheoremResult(verdict, report, base_report, checks)


def format_block(b: BlockResult) -> str:
    n, w, d = b.label
    return f"block deg={n} w={w} d=({','.join(str(x) for x in d)}) dim={b.dim} hdim={b.hdim}"
