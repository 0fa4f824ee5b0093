"""Lie-conformal (PVA) cochains in low degree and the transport from loop forms.

An n-cochain is stored by its values on ordered n-tuples of weight-0
generators; each value is a FormalPoly in λ_1..λ_{n-1}, the last variable
having been eliminated by λ_n ↦ −λ_1 − … − λ_{n-1} − δ.  Values on other
arguments are derived by sesquilinearity and the Leibniz rule.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product
from math import factorial
from typing import Dict, List, Sequence, Tuple

from .errors import DomainError
from .formal import FormalPoly
from .jets import enumerate_monomials
from .lambda_bracket import PVAStructure
from .linalg import sparse_rank
from .loop_complex import LoopCEComplex, MultidegreeWindow, _elements, build_loop_complex
from .poisson import CheckResult, cotangent_algebroid
from .poly import SparsePoly, poly_partial
from .superalg import SuperElement

MODULE = "lc-cohomology"

Tuple_ = Tuple[int, ...]


def _perm_sign(p):
    sign = 1
    p = list(p)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


def canonicalize_mod_delta_sum(p: FormalPoly, W=None) -> FormalPoly:
    """Eliminate the last variable: λ_n ↦ −λ_1 − … − λ_{n-1} − δ; result has n−1 variables."""
    n = p.n
    if n < 1:
        raise DomainError("canonicalization needs at least one formal variable", MODULE)
    q = p.substitute(n - 1, {j: -1 for j in range(n - 1)}, -1, W)
    return q.embed(n - 1, {j: j for j in range(n - 1)})


@dataclass
class LCCochain:
    """``values[(a_1..a_n)]`` = canonical Y(x_{a_1},…,x_{a_n}); degree 0 stores ``values[()]``."""

    n: int
    m: int
    values: Dict[Tuple_, FormalPoly] = field(default_factory=dict)

    def value(self, t) -> FormalPoly:
        return self.values.get(tuple(t), FormalPoly.zero(max(self.n - 1, 0)))

    def __eq__(self, other):
        if not isinstance(other, LCCochain) or (self.n, self.m) != (other.n, other.m):
            return False
        keys = set(self.values) | set(other.values)
        return all(self.value(k) == other.value(k) for k in keys)

    def __add__(self, other):
        keys = set(self.values) | set(other.values)
        return LCCochain(self.n, self.m, {k: self.value(k) + other.value(k) for k in keys})

    def scale(self, c):
        return LCCochain(self.n, self.m, {k: v.scale(c) for k, v in self.values.items()})

    def is_zero(self):
        return not any(self.values.values())

    def tuples(self):
        return list(product(range(self.m), repeat=self.n))


def zero_cochain(n, m):
    return LCCochain(n, m, {})


# ---------------------------------------------------------------- evaluation

def evaluate(Y: LCCochain, forms: Sequence[Dict[int, int]], args: Sequence, N: int, W: int) -> FormalPoly:
    """Y_{μ_1..μ_n}(c_1..c_n) as a FormalPoly in λ_1..λ_N (not canonicalized).

    ``forms[k]`` is μ_k as a linear form in the λ's; ``args[k]`` is a SparsePoly
    or a FormalPoly in the same N variables (λ's are scalars for Y).  Each slot
    is extended by sesquilinearity and the Leibniz rule
    Y_{μ}(…, bc, …) = Y_{μ+δ}(…, b, …)_→ c + Y_{μ+δ}(…, c, …)_→ b.
    """
    n = Y.n
    if len(args) != n or len(forms) != n:
        raise DomainError("arity mismatch in cochain evaluation", MODULE)
    if n == 0:
        return FormalPoly.const(N, Y.value(()).coeff(()) or SparsePoly.const(0))
    # expand FormalPoly arguments linearly over their λ-monomials
    expanded = []
    for a in args:
        if isinstance(a, FormalPoly):
            expanded.append(list(a.terms.items()))
        else:
            expanded.append([((0,) * N, a)])
    out = FormalPoly.zero(N)
    T = N + n  # fresh variables t_1..t_n for the slot variables
    for choice in product(*expanded):
        lam_mono = tuple(sum(e[q] for e, _ in choice) for q in range(N))
        coeffs = [c for _, c in choice]
        partials = []
        for c in coeffs:
            vs = sorted({v for mono in c.terms for v, _ in mono})
            partials.append([(v, poly_partial(c, v)) for v in vs])
        acc = FormalPoly.zero(T)
        for pick in product(*partials):
            gens = tuple(v[0] for v, _ in pick)
            base = Y.value(gens)
            if not base:
                continue
            # stored value lives in n−1 variables; the eliminated one is implicit (absent)
            P = base.embed(T, {j: N + j for j in range(n - 1)})
            # sesquilinearity: x_{b,l} = δ^{(l)} x_b gives (−t_k)^{(l)}
            for k, (v, _) in enumerate(pick):
                l = v[1]
                if l:
                    P = P.times_var(N + k, l).scale(Fraction((-1) ** l, factorial(l)))
            for k, (_, g) in enumerate(pick):
                P = P.apply_shift_to(N + k, g, W)
            acc = acc + P
        if not acc:
            continue
        for k in range(n):
            acc = acc.substitute(N + k, forms[k], 0, W)
        res = acc.embed(N, {q: q for q in range(N)})
        out = out + _times_mono(res, lam_mono)
    return out


def _times_mono(p: FormalPoly, e) -> FormalPoly:
    for q, k in enumerate(e):
        if k:
            p = p.times_var(q, k)
    return p


# ---------------------------------------------------------------- the differential

@dataclass(frozen=True)
class LCConvention:
    """Signs of the two sums: ε_1·(−1)^{i+1} on brackets, ε_2·(−1)^{i+j} on contractions (1-based)."""

    bracket_sign: int = 1
    contraction_sign: int = 1

    def describe(self):
        return (f"(dY)(a_1..a_(n+1)) = {'+' if self.bracket_sign > 0 else '-'}sum_i (-1)^(i+1) {{a_i lambda_i Y(..^a_i..)}}"
                f" {'+' if self.contraction_sign > 0 else '-'} sum_(i<j) (-1)^(i+j) "
                f"Y_(lambda_i+lambda_j,..)({{a_i lambda_i a_j}}, ..^a_i..^a_j..)")


DEFAULT_CONVENTION = LCConvention()


def _unit_form(k):
    return {k: 1}


def lc_formula(Y: LCCochain, P: PVAStructure, args: Sequence[SparsePoly],
               conv: LCConvention = DEFAULT_CONVENTION) -> FormalPoly:
    """(dY)_{λ_1..λ_{n+1}}(args) in n+1 variables, not canonicalized."""
    n = Y.n
    N = n + 1
    W = P.W
    if len(args) != N:
        raise DomainError("lc_formula needs n+1 arguments", MODULE)
    out = FormalPoly.zero(N)
    for i in range(N):
        rest = [k for k in range(N) if k != i]
        inner = evaluate(Y, [_unit_form(k) for k in rest], [args[k] for k in rest], N, W)
        if not inner:
            continue
        br = P.bracket_coefficientwise(args[i], inner, i)
        sign = conv.bracket_sign * (1 if i % 2 == 0 else -1)  # (−1)^{i+1} with 1-based i
        out = out + br.scale(sign)
    for i in range(N):
        for j in range(i + 1, N):
            br = P.bracket(args[i], args[j]).embed(N, {0: i})
            if not br:
                continue
            rest = [k for k in range(N) if k not in (i, j)]
            forms = [{i: 1, j: 1}] + [_unit_form(k) for k in rest]
            val = evaluate(Y, forms, [br] + [args[k] for k in rest], N, W)
            sign = conv.contraction_sign * (1 if (i + j) % 2 == 0 else -1)
            out = out + val.scale(sign)
    return out


def lc_differential(Y: LCCochain, P: PVAStructure, conv: LCConvention = DEFAULT_CONVENTION) -> LCCochain:
    if Y.n > 2:
        raise DomainError(f"LC differential implemented for degrees 0, 1, 2 only (got {Y.n})", MODULE)
    m = P.ring.m
    out = {}
    for t in product(range(m), repeat=Y.n + 1):
        val = lc_formula(Y, P, [P.ring.var(a) for a in t], conv)
        val = canonicalize_mod_delta_sum(val, P.W)
        if val:
            out[t] = val
    return LCCochain(Y.n + 1, m, out)


# ---------------------------------------------------------------- transport from loop forms

def iota_transport(form: SuperElement, m: int, W: int, degree: int = None,
                   invertible=frozenset()) -> LCCochain:
    """f·θ^{a_1}_{i_1}…θ^{a_n}_{i_n} ↦ f·Σ_σ sgn(σ) ⊗_k (∂_{a_σ(k)} ⊗ λ_k^{(i_σ(k))}).

    Degree-0 forms map to their class in V/δV (stored as the element itself).
    """
    degs = form.degrees()
    if len(degs) > 1:
        raise DomainError("form is not of homogeneous degree", MODULE)
    n = degs.pop() if degs else (degree or 0)
    if degree is not None and n != degree:
        raise DomainError(f"form has degree {n}, expected {degree}", MODULE)
    if n > 2:
        raise DomainError(f"transport implemented up to degree 2 (got {n})", MODULE)
    if n == 0:
        f = form.even_part(invertible)
        return LCCochain(0, m, {(): FormalPoly(0, {(): f})} if f else {})
    acc: Dict[Tuple_, FormalPoly] = {}
    for (mono, odd), c in form.terms.items():
        f = SparsePoly({mono: c}, invertible)
        for perm in permutations(range(n)):
            s = _perm_sign(perm)
            target = tuple(odd[perm[k]][0] for k in range(n))
            e = tuple(odd[perm[k]][1] for k in range(n))
            coef = Fraction(s)
            for k in range(n):
                coef /= factorial(e[k])
            val = FormalPoly(n, {e: f * coef})
            acc[target] = acc[target] + val if target in acc else val
    values = {}
    for t, v in acc.items():
        cv = canonicalize_mod_delta_sum(v, W)
        if cv:
            values[t] = cv
    return LCCochain(n, m, values)


def cochain_vector(Y: LCCochain):
    """Sparse vector of a cochain for rank computations."""
    out = {}
    for t, v in Y.values.items():
        for e, c in v.terms.items():
            for mono, x in c.terms.items():
                out[(t, e, mono)] = x
    return out


def degree0_vector(f: SparsePoly, W: int):
    return cochain_vector(LCCochain(0, 0, {(): FormalPoly(0, {(): f})}))


# ---------------------------------------------------------------- LC block dimensions

def _space(m, inv, w, d, W):
    return enumerate_monomials(m, inv, w, d, max_level=W) if w >= 0 else []


def lc_block_dim(n: int, w: int, d: Sequence[int], frame: Sequence[Sequence[int]], m: int, inv, W: int,
                 delta_rank_fn=None) -> int:
    """Dimension of the LC cochain space of degree n ≤ 2 in block (w, d), computed on the cochain side."""
    ivars = frozenset((a, 0) for a in inv)
    if n == 0:
        basis = _space(m, inv, w, d, W)
        if w == 0:
            return len(basis)
        img = []
        from .jets import delta
        for mono in _space(m, inv, w - 1, d, W):
            x = delta(SparsePoly({mono: 1}, ivars), W)
            if x:
                img.append(x.terms)
        return len(basis) - sparse_rank(img)
    if n == 1:
        return sum(len(_space(m, inv, w, [d[k] + frame[a][k] for k in range(m)], W)) for a in range(m))
    if n == 2:
        total = 0
        for a in range(m):
            for b in range(a, m):
                dd = [d[k] + frame[a][k] + frame[b][k] for k in range(m)]
                sp = [(kk, mono) for kk in range(w + 1) for mono in _space(m, inv, w - kk, dd, W)]
                if a < b:
                    total += len(sp)
                    continue
                # antisymmetric subspace for a = b: kernel of 1 + σ, σ(P)(λ_1) = P(−λ_1 − δ)
                rows = []
                for kk, mono in sp:
                    Pv = FormalPoly(1, {(kk,): SparsePoly({mono: 1}, ivars)})
                    sw = Pv.substitute(0, {0: -1}, -1, W)
                    rows.append(_fp_vec(Pv + sw))
                total += len(sp) - sparse_rank(rows)
        return total
    raise DomainError("LC block dimensions implemented for degrees 0..2", MODULE)


def _fp_vec(p: FormalPoly):
    return {(e, mono): x for e, c in p.terms.items() for mono, x in c.terms.items()}


# ---------------------------------------------------------------- cross-checks

@dataclass
class IntertwineReport:
    checks: List[CheckResult]
    blocks: List[dict]
    convention: str


def _cot_complex(P: PVAStructure) -> LoopCEComplex:
    return build_loop_complex(cotangent_algebroid(P.pi), P.W)


def intertwine_check(P: PVAStructure, max_weight: int, window: MultidegreeWindow,
                     conv: LCConvention = DEFAULT_CONVENTION, C: LoopCEComplex = None,
                     max_degree: int = 2) -> IntertwineReport:
    """ι∘D = d_LC∘ι on block bases (degrees 0→1, 1→2); ι block bijection; d_LC² = 0.

    ``max_degree`` caps the cochain degree examined (the D-compatibility runs
    from every degree below it, and never beyond 1→2).
    """
    C = C or _cot_complex(P)
    m, W = C.m, C.W
    inv = C.L.base.invertible
    frame = C.L.frame_degrees

    def iota(form, degree=None):
        return iota_transport(form, m, W, degree, C.ring.invertible)

    fails = {"iota-intertwines-D": None, "iota-block-bijection": None,
             "lc-d-squared-zero": None, "iota-intertwines-delta": None}
    blocks = []
    for w in range(max_weight + 1):
        for d in window.degrees():
            for n in range(min(max_degree, 2) + 1):
                basis = C.block_basis(n, w, d)
                if not basis:
                    continue
                elems = _elements(basis)
                images = [iota(e) for e in elems]
                prev = [C.delta(e) for e in _elements(C.block_basis(n, w - 1, d))] if w else []
                prev = [x for x in prev if x]
                drank = sparse_rank([x.terms for x in prev])
                red = len(basis) - drank
                if n == 0:
                    # degree-0 cochains are classes in V/δV: rank modulo the δ-image
                    rank_iota = sparse_rank([cochain_vector(Y) for Y in images] +
                                            [cochain_vector(iota(x)) for x in prev]) - drank
                else:
                    rank_iota = sparse_rank([cochain_vector(Y) for Y in images])
                    # ι kills the δ-image
                    for x in prev:
                        if not iota(x).is_zero():
                            fails["iota-intertwines-delta"] = fails["iota-intertwines-delta"] or f"({n},{w},{d})"
                lcdim = lc_block_dim(n, w, d, frame, m, inv, W)
                blocks.append({"label": (n, w, tuple(d)), "loop_reduced": red, "iota_rank": rank_iota, "lc_dim": lcdim})
                if not (red == rank_iota == lcdim):
                    fails["iota-block-bijection"] = fails["iota-block-bijection"] or f"({n},{w},{d})"
                if n <= min(max_degree - 1, 1):
                    for e, Y in zip(elems, images):
                        lhs = iota(C.D(e), n + 1)
                        dY = lc_differential(Y, P, conv)
                        if lhs != dY:
                            fails["iota-intertwines-D"] = fails["iota-intertwines-D"] or f"({n},{w},{d})"
                        if not lc_differential(dY, P, conv).is_zero():
                            fails["lc-d-squared-zero"] = fails["lc-d-squared-zero"] or f"({n},{w},{d})"
    checks = [CheckResult(k, v is None, "" if v is None else f"block={v}") for k, v in fails.items()]
    return IntertwineReport(checks, blocks, conv.describe())


def choose_convention(P: PVAStructure, max_weight: int, window: MultidegreeWindow):
    """The sign conventions under which d² = 0 and the degree-0 map agree with D."""
    C = _cot_complex(P)
    good = []
    for bs in (1, -1):
        for cs in (1, -1):
            conv = LCConvention(bs, cs)
            rep = intertwine_check(P, max_weight, window, conv, C)
            ok = {c.name: c.passed for c in rep.checks}
            if ok["lc-d-squared-zero"] and ok["iota-intertwines-D"]:
                good.append(conv)
    return good


def polyderivation_closure_check(Y: LCCochain, P: PVAStructure, factors: Sequence[Tuple[SparsePoly, SparsePoly]],
                                 conv: LCConvention = DEFAULT_CONVENTION) -> CheckResult:
    """d_LC(Y) evaluated directly on a product in the first slot equals its Leibniz expansion."""
    dY = lc_differential(Y, P, conv)
    N = Y.n + 1
    W = P.W
    for f, g in factors:
        for rest in product(range(P.ring.m), repeat=N - 1):
            tail = [P.ring.var(a) for a in rest]
            direct = canonicalize_mod_delta_sum(lc_formula(Y, P, [f * g] + tail, conv), W)
            derived = canonicalize_mod_delta_sum(
                evaluate(dY, [_unit_form(k) for k in range(N)], [f * g] + tail, N, W), W)
            if direct != derived:
                return CheckResult("polyderivation-closure", False, f"product=({f})*({g}) rest={rest}")
    return CheckResult("polyderivation-closure", True)


def sesquilinearity_check(Y: LCCochain, P: PVAStructure, conv: LCConvention = DEFAULT_CONVENTION) -> CheckResult:
    """The formula applied to a δ-descendant equals −λ_1 times the stored generator value."""
    N = Y.n + 1
    W = P.W
    if W < 1:
        return CheckResult("lc-sesquilinearity", True, "W=0: no descendants")
    dY = lc_differential(Y, P, conv)
    for t in product(range(P.ring.m), repeat=N):
        args = [P.ring.var(t[0], 1)] + [P.ring.var(a) for a in t[1:]]
        direct = canonicalize_mod_delta_sum(lc_formula(Y, P, args, conv), W)
        stored = dY.value(t).embed(N, {k: k for k in range(N - 1)})
        expected = canonicalize_mod_delta_sum(stored.times_var(0).scale(-1), W)
        if direct != expected:
            return CheckResult("lc-sesquilinearity", False, f"tuple={t}")
    return CheckResult("lc-sesquilinearity", True)


def antisymmetry_check(Y: LCCochain, W: int) -> CheckResult:
    """Y_{λ_σ}(a_σ) = sgn(σ) Y_λ(a) after canonicalization, for every permutation σ."""
    n = Y.n
    if n < 2:
        return CheckResult("lc-antisymmetry", True)
    for t in Y.tuples():
        base = Y.value(t)
        for perm in permutations(range(n)):
            if list(perm) == sorted(perm):
                continue
            # slot k of the permuted tuple carries argument t[perm[k]] and variable λ_{perm[k]}
            forms = [_unit_form(perm[k]) for k in range(n)]
            val = evaluate(Y, forms, [_gen_poly(t[perm[k]]) for k in range(n)], n, W)
            if canonicalize_mod_delta_sum(val, W) != base.scale(_perm_sign(perm)):
                return CheckResult("lc-antisymmetry", False, f"tuple={t}")
    return CheckResult("lc-antisymmetry", True)


def _gen_poly(a):
    return SparsePoly.var((a, 0))
