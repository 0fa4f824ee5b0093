"""The Poisson-vertex λ-bracket on a jet ring, its axioms, and the closed form on generators."""
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Dict, List, Tuple

from .errors import ConsistencyError
from .formal import FormalPoly
from .jets import JetRing, delta_divided
from .poisson import CheckResult, PoissonStructure
from .poly import SparsePoly, poly_partial

MODULE = "lambda-bracket"


class PVAStructure:
    """λ-bracket on ``ring`` generated by ``π`` on level-0 variables.

    ``table`` optionally overrides {x_{a,0} λ x_{b,0}} (used for mutation
    experiments); by default it is π^{ab} embedded at weight 0.
    """

    def __init__(self, ring: JetRing, pi: PoissonStructure, table: Dict[Tuple[int, int], FormalPoly] = None):
        self.ring = ring
        self.pi = pi
        self.table = {}
        for a in range(ring.m):
            for b in range(ring.m):
                self.table[(a, b)] = FormalPoly.const(1, pi.pi[a][b].with_invertible(ring.invertible))
        if table:
            self.table.update(table)
        self._gen_cache: Dict[tuple, FormalPoly] = {}
        self._right_cache: Dict[tuple, FormalPoly] = {}

    @property
    def W(self):
        return self.ring.W

    def with_table(self, table):
        return PVAStructure(self.ring, self.pi, {**self.table, **table})

    # ---- generators: sesquilinearity, one step at a time
    def gen_bracket(self, a, i, b, j) -> FormalPoly:
        key = (a, i, b, j)
        hit = self._gen_cache.get(key)
        if hit is not None:
            return hit
        if i > 0:
            # x_{a,i} = δ(x_{a,i-1}) / i  and  {δf λ g} = -λ{f λ g}
            val = self.gen_bracket(a, i - 1, b, j).times_var(0).scale(Fraction(-1, i))
        elif j > 0:
            # {f λ δg} = (λ + δ){f λ g}
            prev = self.gen_bracket(a, 0, b, j - 1)
            val = (prev.times_var(0) + prev.delta(self.W)).scale(Fraction(1, j))
        else:
            val = self.table[(a, b)].truncate(self.W)
        self._gen_cache[key] = val
        return val

    # ---- Leibniz in both slots
    def bracket_with_var(self, f: SparsePoly, v) -> FormalPoly:
        """{f λ x_v} via left Leibniz: Σ {x_u _{λ+δ} x_v}_→ ∂f/∂x_u."""
        key = (f, v)
        hit = self._right_cache.get(key)
        if hit is not None:
            return hit
        out = FormalPoly.zero(1)
        for u in sorted({u for mono in f.terms for u, _ in mono}):
            df = poly_partial(f, u)
            g = self.gen_bracket(u[0], u[1], v[0], v[1])
            if g:
                out = out + g.apply_shift_to(0, df, self.W)
        self._right_cache[key] = out
        return out

    def bracket(self, f: SparsePoly, g: SparsePoly) -> FormalPoly:
        """{f λ g}; right Leibniz {f λ gh} = {f λ g}h + {f λ h}g."""
        out = FormalPoly.zero(1)
        for v in sorted({v for mono in g.terms for v, _ in mono}):
            dg = poly_partial(g, v)
            fv = self.bracket_with_var(f, v)
            if fv:
                out = out + fv.scale(dg).truncate(self.W)
        return out

    def bracket_coefficientwise(self, f: SparsePoly, P: FormalPoly, slot: int) -> FormalPoly:
        """{f λ_slot P} for P with coefficients in the ring and extra formal variables."""
        out = FormalPoly.zero(P.n)
        for e, c in P.terms.items():
            br = self.bracket(f, c)
            for (k,), bc in br.terms.items():
                ee = list(e)
                ee[slot] += k
                out = out + FormalPoly(P.n, {tuple(ee): bc})
        return out


def lambda_bracket(P: PVAStructure, f: SparsePoly, g: SparsePoly) -> FormalPoly:
    return P.bracket(f, g)


def lambda_substitute(p: FormalPoly, W=None) -> FormalPoly:
    """Σ c_k λ^k -> Σ (-λ-δ)^k (c_k)."""
    return p.substitute(0, {0: -1}, -1, W)


# ---------------------------------------------------------------- axioms

def _gens(ring: JetRing, W: int):
    return [(a, i) for i in range(W + 1) for a in range(ring.m)]


def _var(ring, v):
    return ring.var(v[0], v[1])


def _shift_bracket_lambda_plus_mu(P: PVAStructure, inner: FormalPoly, c: SparsePoly) -> FormalPoly:
    """{inner_{λ+μ} c} for inner = {a λ b} (one variable) -> two variables (λ, μ)."""
    out = FormalPoly.zero(2)
    for (k,), coeff in inner.terms.items():
        br = P.bracket(coeff, c)  # in ν
        # ν -> λ + μ, then multiply by λ^k
        br2 = br.embed(2, {0: 0}).substitute(0, {0: 1, 1: 1}, 0)
        out = out + br2.times_var(0, k)
    return out


def pva_axiom_suite(P: PVAStructure, W: int) -> List[CheckResult]:
    """All five axioms on generator pairs/triples of total weight <= W."""
    ring = P.ring
    gens = _gens(ring, W)
    pairs = [(u, v) for u in gens for v in gens if u[1] + v[1] <= W]
    triples = [(u, v, t) for u in gens for v in gens for t in gens if u[1] + v[1] + t[1] <= W]
    results = []

    def first_failure(name, items, pred):
        for it in items:
            if not pred(*it):
                return CheckResult(name, False, "tuple=" + "|".join(f"{ring.var_name(g)}" for g in it), it)
        return CheckResult(name, True)

    def delta_derivation(u, v):
        if max(u[1], v[1]) + 1 > ring.W:
            return True
        f, g = _var(ring, u), _var(ring, v)
        lhs = P.bracket(f, g).delta()
        rhs = P.bracket(ring.delta(f), g) + P.bracket(f, ring.delta(g))
        return lhs == rhs

    def sesqui(u, v):
        if u[1] + 1 > ring.W:
            return True
        f, g = _var(ring, u), _var(ring, v)
        return P.bracket(ring.delta(f), g) == P.bracket(f, g).times_var(0).scale(-1)

    def skew(u, v):
        f, g = _var(ring, u), _var(ring, v)
        return P.bracket(f, g) == -lambda_substitute(P.bracket(g, f), P.W)

    def jacobi(u, v, t):
        a, b, c = _var(ring, u), _var(ring, v), _var(ring, t)
        lhs = _shift_bracket_lambda_plus_mu(P, P.bracket(a, b), c)
        bc = P.bracket(b, c).embed(2, {0: 1})   # in μ
        ac = P.bracket(a, c)                    # in λ
        rhs1 = FormalPoly.zero(2)
        for (k, l), co in bc.terms.items():
            rhs1 = rhs1 + P.bracket(a, co).embed(2, {0: 0}).times_var(1, l)
        rhs2 = FormalPoly.zero(2)
        for (k,), co in ac.terms.items():
            rhs2 = rhs2 + P.bracket(b, co).embed(2, {0: 1}).times_var(0, k)
        return lhs == rhs1 - rhs2

    def leibniz(u, v, t):
        a, b, c = _var(ring, u), _var(ring, v), _var(ring, t)
        right = P.bracket(a, b * c) == P.bracket(a, b).scale(c) + P.bracket(a, c).scale(b)
        # left Leibniz {bc λ a} = {b_{λ+δ} a}_→ c + {c_{λ+δ} a}_→ b
        left = P.bracket(b * c, a) == P.bracket(b, a).apply_shift_to(0, c, P.W) + \
            P.bracket(c, a).apply_shift_to(0, b, P.W)
        return right and left

    results.append(first_failure("pva-delta-derivation", pairs, delta_derivation))
    results.append(first_failure("pva-sesquilinearity", pairs, sesqui))
    results.append(first_failure("pva-skew-symmetry", pairs, skew))
    results.append(first_failure("pva-jacobi", triples, jacobi))
    results.append(first_failure("pva-leibniz", triples, leibniz))
    return results


def mutation_tables(P: PVAStructure):
    """Single-sign mutations: flip one ordered generator entry {x_a λ x_b}."""
    out = []
    for (a, b), val in sorted(P.table.items()):
        if val:
            out.append(((a, b), {(a, b): -val}))
    return out


# ---------------------------------------------------------------- closed form

READINGS = ("operator", "sesquilinear")


def _reading_value(P: PVAStructure, reading: str, i, j, a, b) -> FormalPoly:
    base = P.table[(a, b)].truncate(P.W)
    W = P.W
    if reading == "operator":
        # δ^{(i)} applied after (-λ-δ)^{(j)}
        val = FormalPoly.zero(1)
        for (k0,), c0 in base.terms.items():
            # (-λ-δ)^{(j)} c0, then times λ^{k0}
            piece = FormalPoly(1, {(j,): c0}).substitute(0, {0: -1}, -1, W).scale(Fraction(1, factorial(j)))
            val = val + piece.times_var(0, k0)
        out = FormalPoly.zero(1)
        for e, c in val.terms.items():
            out = out + FormalPoly(1, {e: delta_divided(c, i, W)})
        return out
    if reading == "sesquilinear":
        # (-λ)^{(i)} (λ+δ)^{(j)}
        val = FormalPoly.zero(1)
        for (k0,), c0 in base.terms.items():
            piece = FormalPoly(1, {(j,): c0}).substitute(0, {0: 1}, 1, W).scale(Fraction(1, factorial(j)))
            val = val + piece.times_var(0, k0)
        return val.times_var(0, i).scale(Fraction((-1) ** i, factorial(i)))
    raise ValueError(reading)


@dataclass
class ClosedFormResult:
    value: FormalPoly
    matched: Tuple[str, ...]
    values: Dict[str, FormalPoly] = field(default_factory=dict)


def arakawa_closed_form(P: PVAStructure, i, j, a, b) -> ClosedFormResult:
    """Evaluate both readings of the closed form and keep those that match the recursion."""
    rec = P.gen_bracket(a, i, b, j)
    values = {r: _reading_value(P, r, i, j, a, b) for r in READINGS}
    matched = tuple(r for r in READINGS if values[r] == rec)
    if not matched:
        raise ConsistencyError(f"no reading of the closed form matches the recursion at "
                               f"(i={i}, j={j}, a={a}, b={b})", MODULE)
    return ClosedFormResult(values[matched[0]], matched, values)


def closed_form_survey(P: PVAStructure, max_total: int):
    """Run the closed form on all (i, j, a, b) with i + j <= max_total.

    Returns ``(winning_readings, per_tuple)``; the winners are the readings that
    matched on every tuple.
    """
    per = {}
    winners = set(READINGS)
    for i in range(max_total + 1):
        for j in range(max_total + 1 - i):
            for a in range(P.ring.m):
                for b in range(P.ring.m):
                    res = arakawa_closed_form(P, i, j, a, b)
                    per[(i, j, a, b)] = res.matched
                    winners &= set(res.matched)
    return tuple(r for r in READINGS if r in winners), per


def induced_poisson_at_lambda_zero(P: PVAStructure) -> PoissonStructure:
    """{x_{a,0} λ x_{b,0}} at λ = 0, projected to level-0 variables."""
    m = P.ring.m
    entries = {}
    for a in range(m):
        for b in range(a + 1, m):
            br = P.bracket(P.ring.var(a), P.ring.var(b)).evaluate_zero(0)
            c = br.coeff((0,))
            if c is None:
                continue
            proj = SparsePoly({mono: v for mono, v in c.terms.items() if all(u[1] == 0 for u, _ in mono)},
                              P.pi.base.inv_vars)
            entries[(a, b)] = proj
    rec = PoissonStructure(P.pi.base, entries)
    if rec.pi != P.pi.pi:
        raise ConsistencyError("λ=0 restriction does not reproduce π", MODULE)
    return rec
