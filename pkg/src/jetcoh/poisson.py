"""Poisson bivectors and Lie algebroid data on a coordinatized affine base."""
from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Dict, List, Optional, Tuple

from .errors import DomainError
from .jets import BaseRing, mono_multidegree
from .poly import SparsePoly, poly_partial

MODULE = "poisson-algebroid"


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    counterexample: Optional[tuple] = None

    def __bool__(self):
        return self.passed


def _perm_sign(p):
    sign = 1
    p = list(p)
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                sign = -sign
    return sign


class PoissonStructure:
    """Antisymmetric matrix π^{ab} = {x_a, x_b} of base polynomials."""

    def __init__(self, base: BaseRing, entries: Dict[Tuple[int, int], SparsePoly]):
        self.base = base
        m = base.m
        zero = base.zero()
        pi = [[zero for _ in range(m)] for _ in range(m)]
        for (a, b), p in entries.items():
            if a == b:
                if p:
                    raise DomainError(f"diagonal bracket entry {{x{a},x{a}}} must vanish", MODULE)
                continue
            p = p.with_invertible(base.inv_vars) if isinstance(p, SparsePoly) else base.const(p)
            if pi[a][b] and pi[a][b] != p:
                raise DomainError(f"conflicting entries for pair ({a},{b})", MODULE)
            pi[a][b] = p
            if pi[b][a] and pi[b][a] != -p:
                raise DomainError(f"entries for ({a},{b}) and ({b},{a}) are not antisymmetric", MODULE)
            pi[b][a] = -p
        self.pi = pi

    @property
    def m(self):
        return self.base.m

    def bracket(self, f: SparsePoly, g: SparsePoly) -> SparsePoly:
        """{f, g} = Σ π^{ab} ∂_a f ∂_b g."""
        out = self.base.zero()
        for a in range(self.m):
            fa = poly_partial(f, (a, 0))
            if not fa:
                continue
            for b in range(self.m):
                if self.pi[a][b]:
                    out = out + fa * self.pi[a][b] * poly_partial(g, (b, 0))
        return out

    def bivector_degree(self):
        """q with deg π^{ab} = q + e_a + e_b for every nonzero term; None if inhomogeneous."""
        q = None
        for a in range(self.m):
            for b in range(self.m):
                for mono in self.pi[a][b].terms:
                    d = list(mono_multidegree(mono, self.m))
                    d[a] -= 1
                    d[b] -= 1
                    if q is None:
                        q = tuple(d)
                    elif q != tuple(d):
                        return None
        return q if q is not None else (0,) * self.m

    def is_zero(self):
        return not any(p for row in self.pi for p in row)

    def __eq__(self, other):
        return isinstance(other, PoissonStructure) and self.base == other.base and self.pi == other.pi


def schouten_jacobi_check(P: PoissonStructure) -> CheckResult:
    """Σ_d (π^{da}∂_d π^{bc} + π^{db}∂_d π^{ca} + π^{dc}∂_d π^{ab}) = 0 for a<b<c."""
    pi = P.pi
    for a, b, c in combinations(range(P.m), 3):
        total = P.base.zero()
        for d in range(P.m):
            v = (d, 0)
            total = total + pi[d][a] * poly_partial(pi[b][c], v) \
                + pi[d][b] * poly_partial(pi[c][a], v) + pi[d][c] * poly_partial(pi[a][b], v)
        if total:
            return CheckResult("schouten-jacobi", False, f"triple=({a},{b},{c}) residue={total}", (a, b, c))
    return CheckResult("schouten-jacobi", True)


@dataclass
class LieAlgebroidData:
    """(L, ρ, [,]) on a free frame e_1..e_r.

    ``anchor[α][a]`` is ρ_α^a; ``structure[(α, β)][γ]`` is c_{αβ}^γ.
    ``frame_degrees[α]`` is the multidegree of e_α (its dual generator gets the
    negative); ``None`` means the frame carries no multigrading.
    """

    base: BaseRing
    r: int
    anchor: List[List[SparsePoly]]
    structure: Dict[Tuple[int, int], List[SparsePoly]]
    frame_degrees: Optional[List[Tuple[int, ...]]] = None
    kind: str = "custom"
    labels: List[str] = field(default_factory=list)

    def c(self, al, be, ga) -> SparsePoly:
        row = self.structure.get((al, be))
        return row[ga] if row is not None else self.base.zero()

    def anchor_apply(self, al, f: SparsePoly) -> SparsePoly:
        out = self.base.zero()
        for a in range(self.base.m):
            if self.anchor[al][a]:
                out = out + self.anchor[al][a] * poly_partial(f, (a, 0))
        return out

    def mutated(self, al, be, ga, factor=-1):
        """Copy with one structure-table entry c_{αβ}^γ multiplied by ``factor``."""
        structure = {k: list(v) for k, v in self.structure.items()}
        row = structure.setdefault((al, be), [self.base.zero()] * self.r)
        row[ga] = row[ga] * factor
        return LieAlgebroidData(self.base, self.r, [list(r) for r in self.anchor], structure,
                                self.frame_degrees, self.kind + "-mutated", list(self.labels))


def _unit(m, a):
    return tuple(1 if k == a else 0 for k in range(m))


def cotangent_algebroid(P: PoissonStructure) -> LieAlgebroidData:
    """Frame dx_α, anchor ρ_α^a = π^{αa}, bracket [dx_α, dx_β] = d π^{αβ}."""
    res = schouten_jacobi_check(P)
    if not res:
        raise DomainError(f"not a Poisson bivector: {res.detail}", MODULE)
    m = P.m
    anchor = [[P.pi[al][a] for a in range(m)] for al in range(m)]
    structure = {}
    for al in range(m):
        for be in range(m):
            row = [poly_partial(P.pi[al][be], (ga, 0)) for ga in range(m)]
            if any(row):
                structure[(al, be)] = row
    q = P.bivector_degree()
    frame = None
    if q is not None:
        frame = [tuple(u + qq for u, qq in zip(_unit(m, a), q)) for a in range(m)]
    return LieAlgebroidData(P.base, m, anchor, structure, frame, "cotangent",
                            [f"d{n}" for n in P.base.names])


def tangent_algebroid(base: BaseRing) -> LieAlgebroidData:
    m = base.m
    anchor = [[base.const(1) if a == al else base.zero() for a in range(m)] for al in range(m)]
    frame = [tuple(-u for u in _unit(m, a)) for a in range(m)]
    return LieAlgebroidData(base, m, anchor, {}, frame, "tangent", [f"d/d{n}" for n in base.names])


def zero_algebroid(base: BaseRing, r: int = None) -> LieAlgebroidData:
    r = base.m if r is None else r
    anchor = [[base.zero() for _ in range(base.m)] for _ in range(r)]
    frame = [tuple(-u for u in _unit(base.m, a)) for a in range(r)] if r == base.m else None
    return LieAlgebroidData(base, r, anchor, {}, frame, "zero")


class _Section:
    """Section Σ f_α e_α; used only by the axiom checker."""

    def __init__(self, L: LieAlgebroidData, coeffs):
        self.L = L
        self.coeffs = list(coeffs)

    def __add__(self, other):
        return _Section(self.L, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        return _Section(self.L, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def is_zero(self):
        return not any(self.coeffs)


def _frame(L, al, f=None):
    z = L.base.zero()
    return _Section(L, [(f if f is not None else L.base.const(1)) if k == al else z for k in range(L.r)])


def section_bracket(L: LieAlgebroidData, s: _Section, t: _Section) -> _Section:
    """[f e_α, g e_β] = fg c_{αβ}^γ e_γ + f ρ_α(g) e_β − g ρ_β(f) e_α."""
    out = [L.base.zero() for _ in range(L.r)]
    for al, f in enumerate(s.coeffs):
        if not f:
            continue
        for be, g in enumerate(t.coeffs):
            if not g:
                continue
            for ga in range(L.r):
                c = L.c(al, be, ga)
                if c:
                    out[ga] = out[ga] + f * g * c
            out[be] = out[be] + f * L.anchor_apply(al, g)
            out[al] = out[al] - g * L.anchor_apply(be, f)
    return _Section(L, out)


def algebroid_axiom_check(L: LieAlgebroidData) -> CheckResult:
    """Antisymmetry of c, Jacobi, anchor morphism and Leibniz, on generators.

    Reports the lexicographically smallest failing generator tuple.
    """
    r, m = L.r, L.base.m
    for al in range(r):
        for be in range(al, r):
            for ga in range(r):
                if L.c(al, be, ga) != -L.c(be, al, ga):
                    return CheckResult("algebroid-axioms", False,
                                       f"antisymmetry c[{al},{be}]^{ga}", (al, be, ga))
    for al, be, ga in combinations(range(r), 3):
        ea, eb, eg = _frame(L, al), _frame(L, be), _frame(L, ga)
        jac = section_bracket(L, ea, section_bracket(L, eb, eg)) \
            + section_bracket(L, eb, section_bracket(L, eg, ea)) \
            + section_bracket(L, eg, section_bracket(L, ea, eb))
        if not jac.is_zero():
            return CheckResult("algebroid-axioms", False, f"jacobi ({al},{be},{ga})", (al, be, ga))
    for al in range(r):
        for be in range(r):
            for a in range(m):
                # ρ([e_α,e_β]) = [ρ(e_α), ρ(e_β)] on x_a
                lhs = L.base.zero()
                for ga in range(r):
                    c = L.c(al, be, ga)
                    if c:
                        lhs = lhs + c * L.anchor[ga][a]
                rhs = L.anchor_apply(al, L.anchor[be][a]) - L.anchor_apply(be, L.anchor[al][a])
                if lhs != rhs:
                    return CheckResult("algebroid-axioms", False,
                                       f"anchor-morphism ({al},{be}) on x{a}", (al, be, a))
    for al in range(r):
        for be in range(r):
            for a in range(m):
                xa = L.base.var(a)
                lhs = section_bracket(L, _frame(L, al), _frame(L, be, xa))
                base_br = section_bracket(L, _frame(L, al), _frame(L, be))
                rhs = _Section(L, [xa * c for c in base_br.coeffs]) + _frame(L, be, L.anchor[al][a])
                if not (lhs - rhs).is_zero():
                    return CheckResult("algebroid-axioms", False, f"leibniz ({al},{be}) x{a}", (al, be, a))
    return CheckResult("algebroid-axioms", True)


# ---------------------------------------------------------------- π♯

def determinant(mat: List[List[SparsePoly]], one: SparsePoly) -> SparsePoly:
    n = len(mat)
    total = one * 0
    for p in permutations(range(n)):
        t = one * _perm_sign(p)
        for i in range(n):
            t = t * mat[i][p[i]]
            if not t:
                break
        total = total + t
    return total


def adjugate(mat, one):
    n = len(mat)
    adj = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[mat[r][c] for c in range(n) if c != j] for r in range(n) if r != i]
            cof = determinant(minor, one) if minor else one
            adj[j][i] = cof * (-1 if (i + j) % 2 else 1)
    return adj


@dataclass
class SharpIso:
    matrix: List[List[SparsePoly]]
    inverse: Optional[List[List[SparsePoly]]]
    det: SparsePoly

    @property
    def degenerate(self):
        return self.inverse is None


def pi_sharp_iso(P: PoissonStructure) -> SharpIso:
    """Frame map dx_a -> Σ_b π^{ab} ∂_b with its inverse when det π is a unit."""
    one = P.base.const(1)
    mat = [list(row) for row in P.pi]
    det = determinant(mat, one)
    if not det or not det.is_unit():
        return SharpIso(mat, None, det)
    dinv = det.unit_inverse()
    adj = adjugate(mat, one)
    inv = [[c * dinv for c in row] for row in adj]
    return SharpIso(mat, inv, det)


def transport_algebroid(L: LieAlgebroidData, frame_map, frame_inv) -> LieAlgebroidData:
    """Express L in the new frame f_α = Σ_β frame_map[α][β] e_β (frame_inv its inverse)."""
    r, m = L.r, L.base.m
    zero = L.base.zero()
    new_anchor = []
    for al in range(r):
        row = [zero] * m
        for be in range(r):
            g = frame_map[al][be]
            if g:
                row = [row[a] + g * L.anchor[be][a] for a in range(m)]
        new_anchor.append(row)
    f = [_Section(L, frame_map[al]) for al in range(r)]
    structure = {}
    for al in range(r):
        for be in range(r):
            br = section_bracket(L, f[al], f[be]).coeffs
            # coefficients in the new frame: br_old = Σ_γ c'^γ f_γ  ⇒  c' = br_old · frame_inv
            row = [zero] * r
            for ga in range(r):
                for de in range(r):
                    if br[de] and frame_inv[de][ga]:
                        row[ga] = row[ga] + br[de] * frame_inv[de][ga]
            if any(row):
                structure[(al, be)] = row
    return LieAlgebroidData(L.base, r, new_anchor, structure, None, L.kind + "-transported")
