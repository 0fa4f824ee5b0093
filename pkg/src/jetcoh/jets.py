"""Truncated jet rings, the canonical derivation δ, and the two module functors.

Jet variables are ids ``(a, i)``: base variable ``a`` at level ``i``, so
``x_{a,i}`` has conformal weight ``i`` and multidegree ``e_a``.  A base ring
element is a polynomial in the level-0 variables.
"""
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import factorial
from typing import Callable, Dict, List, Mapping, Sequence, Tuple

from .errors import DomainError
from .linalg import rank as exact_rank
from .poly import SparsePoly, mono_mul, poly_partial

MODULE = "jet-core"


# ---------------------------------------------------------------- rings

@dataclass(frozen=True)
class BaseRing:
    """k[x_1..x_m] with the flagged variables inverted."""

    names: Tuple[str, ...]
    invertible: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "invertible", frozenset(self.invertible))
        if len(set(self.names)) != len(self.names):
            raise DomainError(f"duplicate variable names {self.names}", MODULE)
        bad = [a for a in self.invertible if not 0 <= a < len(self.names)]
        if bad:
            raise DomainError(f"invertible indices out of range: {bad}", MODULE)

    @property
    def m(self):
        return len(self.names)

    @property
    def inv_vars(self):
        return frozenset((a, 0) for a in self.invertible)

    def var(self, a) -> SparsePoly:
        if isinstance(a, str):
            a = self.names.index(a)
        return SparsePoly.var((a, 0), invertible=self.inv_vars)

    def const(self, c) -> SparsePoly:
        return SparsePoly.const(c, self.inv_vars)

    def zero(self) -> SparsePoly:
        return SparsePoly.zero(self.inv_vars)

    def vars(self):
        return [(a, 0) for a in range(self.m)]

    def var_name(self, v) -> str:
        a, i = v
        return self.names[a] if i == 0 else f"{self.names[a]}_{i}"


def mono_weight(m) -> int:
    return sum(v[1] * e for v, e in m)


def mono_multidegree(m, nvars: int) -> Tuple[int, ...]:
    d = [0] * nvars
    for (a, _), e in m:
        d[a] += e
    return tuple(d)


def truncate(p: SparsePoly, W) -> SparsePoly:
    if W is None:
        return p
    return SparsePoly({m: c for m, c in p.terms.items() if mono_weight(m) <= W}, p.invertible, _trusted=True)


def delta(p: SparsePoly, W=None) -> SparsePoly:
    """δ(x_{a,i}) = (i+1) x_{a,i+1}, extended as a derivation; terms of weight > W dropped."""
    out: Dict = {}
    for m, c in p.terms.items():
        if W is not None and mono_weight(m) + 1 > W:
            continue
        for (a, i), e in m:
            m2 = mono_mul(m, (((a, i), -1), ((a, i + 1), 1)))
            out[m2] = out.get(m2, 0) + c * e * (i + 1)
    return SparsePoly({k: v for k, v in out.items() if v}, p.invertible, _trusted=True)


def delta_divided(p: SparsePoly, k: int, W=None) -> SparsePoly:
    """δ^{(k)} = δ^k / k!."""
    if k < 0:
        raise DomainError("divided power order must be >= 0", MODULE)
    for _ in range(k):
        p = delta(p, W)
    return p * Fraction(1, factorial(k)) if k > 1 else p


@dataclass(frozen=True)
class JetRing:
    base: BaseRing
    W: int

    def __post_init__(self):
        if self.W < 0:
            raise DomainError("weight cutoff W must be >= 0", MODULE)

    @property
    def m(self):
        return self.base.m

    @property
    def invertible(self):
        return self.base.inv_vars

    def variables(self) -> List[tuple]:
        return [(a, i) for a in range(self.m) for i in range(self.W + 1)]

    def var(self, a, i=0) -> SparsePoly:
        if isinstance(a, str):
            a = self.base.names.index(a)
        if not 0 <= i <= self.W:
            raise DomainError(f"jet level {i} outside cutoff W={self.W}", MODULE)
        return SparsePoly.var((a, i), invertible=self.invertible)

    def const(self, c):
        return SparsePoly.const(c, self.invertible)

    def truncate(self, p):
        return truncate(p, self.W)

    def delta(self, p, k=1):
        return delta_divided(p, k, self.W)

    def weight(self, p) -> int:
        ws = {mono_weight(m) for m in p.terms}
        if len(ws) > 1:
            raise DomainError("element is not weight-homogeneous", MODULE)
        return ws.pop() if ws else 0

    def var_name(self, v):
        return f"{self.base.names[v[0]]}_{v[1]}"

    def monomials(self, weight: int, multidegree: Sequence[int]):
        """All monomials of exact weight and multidegree (finite since only level 0 may be inverted)."""
        return enumerate_monomials(self.m, self.base.invertible, weight, multidegree)


def build_jet_ring(base: BaseRing, W: int) -> JetRing:
    return JetRing(base, W)


def weight_partitions(w: int, max_part: int):
    """Multisets of positive levels (each <= max_part) summing to w, as sorted tuples."""
    if w == 0:
        yield ()
        return

    def rec(rem, top):
        if rem == 0:
            yield ()
            return
        for p in range(min(rem, top), 0, -1):
            for rest in rec(rem - p, p):
                yield (p,) + rest

    yield from rec(w, max_part)


def enumerate_monomials(m: int, invertible, weight: int, multidegree: Sequence[int], max_level=None):
    """Monomials in jet variables (levels <= max_level) of given weight and multidegree."""
    if max_level is None:
        max_level = weight
    out = []
    # assign a multiset of positive levels to each base variable
    for parts in weight_partitions(weight, max_level) if weight else [()]:
        # distribute the parts over the m base variables
        for assign in product(range(m), repeat=len(parts)):
            # canonical: within equal parts, assignment non-decreasing to avoid duplicates
            ok = all(not (parts[k] == parts[k + 1] and assign[k] > assign[k + 1]) for k in range(len(parts) - 1))
            if not ok:
                continue
            exps: Dict[tuple, int] = {}
            count = [0] * m
            for p, a in zip(parts, assign):
                exps[(a, p)] = exps.get((a, p), 0) + 1
                count[a] += 1
            good = True
            for a in range(m):
                e0 = multidegree[a] - count[a]
                if e0 < 0 and a not in invertible:
                    good = False
                    break
                if e0:
                    exps[(a, 0)] = e0
            if good:
                out.append(tuple(sorted(exps.items())))
    return sorted(set(out))


# ---------------------------------------------------------------- morphisms

@dataclass
class JetMorphism:
    """x_{a,i} -> images[(a, i)]; applied by substitution."""

    images: Dict[tuple, object]

    def __call__(self, p: SparsePoly):
        out = None
        for m, c in p.terms.items():
            t = None
            for v, e in m:
                img = self.images[v]
                if e < 0:
                    img = img.unit_inverse()
                    e = -e
                f = img ** e
                t = f if t is None else t * f
            term = t * c if t is not None else c
            out = term if out is None else out + term
        return out if out is not None else 0


def prolong_algebra_map(f: Mapping[int, object], W: int, target_delta: Callable,
                        invertible=frozenset()) -> JetMorphism:
    """Unique δ-compatible extension x_{a,i} -> δ^{(i)}(f(x_a)).

    ``target_delta`` is the derivation of the target; ``invertible`` lists base
    indices whose images must be units.
    """
    images = {}
    for a, img in f.items():
        if a in invertible:
            is_unit = getattr(img, "is_unit", None)
            if is_unit is None or not is_unit():
                raise DomainError(f"image of invertible variable {a} is not a unit: {img}", MODULE)
        cur = img
        for i in range(W + 1):
            images[(a, i)] = cur * Fraction(1, factorial(i))
            cur = target_delta(cur)
    return JetMorphism(images)


# ---------------------------------------------------------------- modules

class ModuleElement:
    """Element of a free module: ``{(k, index): coefficient}`` with jet-ring coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {s: c for s, c in (terms or {}).items() if c}

    def __add__(self, other):
        out = dict(self.terms)
        for s, c in other.terms.items():
            out[s] = out[s] + c if s in out else c
        return ModuleElement(out)

    def __neg__(self):
        return ModuleElement({s: -c for s, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, a):
        return ModuleElement({s: c * a for s, c in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, ModuleElement) and self.terms == other.terms

    def __repr__(self):
        inner = ", ".join(f"{s}: {c}" for s, c in sorted(self.terms.items()))
        return f"ModuleElement({{{inner}}})"


@dataclass(frozen=True)
class FreeJetModule:
    """L⁺M for M free of rank r: basis (e_k)_i, δ (e_k)_i = (i+1)(e_k)_{i+1}."""

    ring: JetRing
    r: int

    def basis(self, k, i) -> ModuleElement:
        return ModuleElement({(k, i): self.ring.const(1)})

    def delta(self, v: ModuleElement) -> ModuleElement:
        W = self.ring.W
        out: Dict = {}
        for (k, i), c in v.terms.items():
            dc = delta(c, W)
            if dc:
                out[(k, i)] = out[(k, i)] + dc if (k, i) in out else dc
            if i + 1 <= W:
                t = truncate(c * (i + 1), W - (i + 1))
                if t:
                    out[(k, i + 1)] = out[(k, i + 1)] + t if (k, i + 1) in out else t
        return ModuleElement(out)

    def section_jet(self, b: SparsePoly, k: int, i: int) -> ModuleElement:
        """(b e_k)_i = Σ_l δ^{(l)}(b) (e_k)_{i-l} for a base element b."""
        out = {}
        for l in range(i + 1):
            c = truncate(delta_divided(b, l), self.ring.W - (i - l))
            if c:
                out[(k, i - l)] = c
        return ModuleElement(out)


def delta_apply(x, k: int, ring: JetRing = None, module: FreeJetModule = None):
    """δ^{(k)} on a jet-ring element or a FreeJetModule element."""
    if isinstance(x, ModuleElement):
        if module is None:
            raise DomainError("module element needs its FreeJetModule", MODULE)
        for _ in range(k):
            x = module.delta(x)
        return x.scale(Fraction(1, factorial(k))) if k > 1 else x
    W = ring.W if ring is not None else None
    return delta_divided(x, k, W)


def jet_of_differential(p: SparsePoly, ring: JetRing) -> ModuleElement:
    """d p in the basis (dx_a)_i of L⁺Ω¹ (identified with Ω¹ of the jet ring by d x_{a,i} -> (dx_a)_i)."""
    out = {}
    for v in sorted({v for m in p.terms for v, _ in m}):
        c = poly_partial(p, v)
        if c:
            out[v] = ring.truncate(c)
    return ModuleElement(out)


@dataclass(frozen=True)
class ProTruncModule:
    """∫F mod z^{n+1} for F free of rank r: basis e_k ⊗ z^j, 0 <= j <= n."""

    ring: JetRing
    r: int
    n: int

    def basis(self, k, j) -> ModuleElement:
        if not 0 <= j <= self.n:
            raise DomainError(f"z-power {j} outside truncation n={self.n}", MODULE)
        return ModuleElement({(k, j): self.ring.const(1)})

    def delta(self, v: ModuleElement) -> ModuleElement:
        """δ_X - ∂_z with δ_X trivial on the constant sections e_k."""
        W = self.ring.W
        out: Dict = {}
        for (k, j), c in v.terms.items():
            dc = delta(c, W)
            if dc:
                out[(k, j)] = out[(k, j)] + dc if (k, j) in out else dc
            if j > 0:
                t = c * (-j)
                out[(k, j - 1)] = out[(k, j - 1)] + t if (k, j - 1) in out else t
        return ModuleElement(out)


def int_module_action(a: SparsePoly, v: ModuleElement, module: ProTruncModule,
                      via_evaluation: bool = False) -> ModuleElement:
    """Action of the jet ring on ∫F mod z^{n+1}.

    A jet-ring coefficient acts diagonally.  With ``via_evaluation`` the base
    element ``a`` acts through ev_z, i.e. by Σ_i a_i z^i, dropping z^{>n}.
    """
    W = module.ring.W
    out: Dict = {}
    if not via_evaluation:
        for s, c in v.terms.items():
            t = truncate(c * a, W)
            if t:
                out[s] = t
        return ModuleElement(out)
    if any(v2[1] for m in a.terms for v2, _ in m):
        raise DomainError("evaluation action needs a base (level-0) element", MODULE)
    for (k, j), c in v.terms.items():
        for i in range(module.n - j + 1):
            ai = delta_divided(a, i)
            t = truncate(c * ai, W)
            if t:
                key = (k, j + i)
                out[key] = out[key] + t if key in out else t
    return ModuleElement({s: c for s, c in out.items() if c})


def duality_pairing(w: ModuleElement, v: ModuleElement, dual: ProTruncModule,
                    free: FreeJetModule) -> SparsePoly:
    """⟨e_k^∨⊗z^j, (e_l)_i⟩ = δ^{(i-j)}(δ_{kl}), extended bilinearly over the jet ring.

    δ^{(i-j)} of the constant δ_{kl} vanishes unless i = j, and negative
    orders are zero, so only matching indices contribute.
    """
    if dual.r != free.r:
        raise DomainError(f"rank mismatch: {dual.r} vs {free.r}", MODULE)
    W = free.ring.W
    total = free.ring.const(0)
    for (k, j), c in w.terms.items():
        d = v.terms.get((k, j))
        if d is not None:
            total = total + truncate(c * d, W)
    return total


def pairing_gram(n: int, r: int, ring: JetRing = None, twist: SparsePoly = None):
    """Gram matrix between {twist·(e_k^∨⊗z^j)} and {(e_l)_i}, i, j <= n.

    With ``twist`` the rows are acted on through ev_z, so the matrix is
    triangular over the jet ring rather than the identity.
    """
    if ring is None:
        ring = JetRing(BaseRing(("x",)), n)
    dual = ProTruncModule(ring, r, n)
    free = FreeJetModule(ring, r)
    rows_idx = [(k, j) for k in range(r) for j in range(n + 1)]
    cols_idx = [(k, i) for k in range(r) for i in range(n + 1)]
    gram = []
    for (k, j) in rows_idx:
        w = dual.basis(k, j)
        if twist is not None:
            w = int_module_action(twist, w, dual, via_evaluation=True)
        gram.append([duality_pairing(w, free.basis(l, i), dual, free) for (l, i) in cols_idx])
    return rows_idx, cols_idx, gram


def _generic_point(gram):
    vs = sorted({v for row in gram for p in row for m in p.terms for v, _ in m})
    # distinct primes: a nonzero minor at one point certifies generic rank
    primes = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53]
    return {v: primes[i % len(primes)] + i // len(primes) for i, v in enumerate(vs)}


def gram_rank(gram) -> int:
    """Rank over the fraction field of the jet ring.

    Entries are evaluated at a point; the rank there is a lower bound for the
    generic rank, and equality with the matrix size certifies full rank.
    """
    pt = _generic_point(gram)
    num = [[p.evaluate(pt) for p in row] for row in gram]
    return exact_rank(num) if num else 0


def pairing_gram_rank(n: int, r: int, w_max: int, twist_base=None) -> List[dict]:
    """Rank report for the truncated pairing.

    One block per filtration level j <= min(n, w_max) (r x r), plus the full
    (n+1)r Gram matrix, plus the same full matrix with rows twisted by a base
    variable acting through ev_z.
    """
    ring = JetRing(BaseRing(("x",)), max(n, w_max))
    rows_idx, cols_idx, gram = pairing_gram(n, r, ring)
    report = []
    for j in range(min(n, w_max) + 1):
        ri = [p for p, (k, jj) in enumerate(rows_idx) if jj == j]
        ci = [q for q, (k, ii) in enumerate(cols_idx) if ii == j]
        sub = [[gram[p][q] for q in ci] for p in ri]
        report.append({"block": f"level={j}", "size": len(ri), "rank": gram_rank(sub)})
    report.append({"block": "full", "size": len(rows_idx), "rank": gram_rank(gram)})
    twist = ring.var(0, 0) if twist_base is None else twist_base
    _, _, tg = pairing_gram(n, r, ring, twist=twist)
    report.append({"block": "full-twisted", "size": len(rows_idx), "rank": gram_rank(tg)})
    return report
