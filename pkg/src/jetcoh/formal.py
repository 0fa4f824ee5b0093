"""Polynomials in formal variables λ_1..λ_n with jet-ring coefficients.

δ acts on coefficients only; the λ's are scalars for it, so δ and λ commute.
"""
from fractions import Fraction
from math import comb, factorial
from typing import Dict, Mapping, Tuple

from .jets import delta, mono_weight, truncate
from .poly import SparsePoly, format_poly

Exps = Tuple[int, ...]


def _acc(out: dict, e, val):
    if e in out:
        s = out[e] + val
        if s:
            out[e] = s
        else:
            del out[e]
    elif val:
        out[e] = val


class FormalPoly:
    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[Exps, SparsePoly] = None):
        self.n = n
        self.terms: Dict[Exps, SparsePoly] = {}
        for e, c in (terms or {}).items():
            if c:
                e = tuple(e)
                if len(e) != n:
                    raise ValueError(f"exponent tuple {e} has wrong length for n={n}")
                self.terms[e] = self.terms[e] + c if e in self.terms else c
        self.terms = {e: c for e, c in self.terms.items() if c}

    @classmethod
    def const(cls, n, c: SparsePoly):
        return cls(n, {(0,) * n: c})

    @classmethod
    def zero(cls, n):
        return cls(n)

    def __add__(self, other):
        out = dict(self.terms)
        for e, c in other.terms.items():
            _acc(out, e, c)
        return FormalPoly._raw(self.n, out)

    @classmethod
    def _raw(cls, n, terms):
        obj = cls.__new__(cls)
        obj.n = n
        obj.terms = terms
        return obj

    def __neg__(self):
        return FormalPoly._raw(self.n, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        """Multiply every coefficient by a rational or a jet-ring element."""
        out = {}
        for e, v in self.terms.items():
            t = v * c
            if t:
                out[e] = t
        return FormalPoly._raw(self.n, out)

    def times_var(self, i, k=1):
        out = {}
        for e, v in self.terms.items():
            e2 = list(e)
            e2[i] += k
            out[tuple(e2)] = v
        return FormalPoly._raw(self.n, out)

    def __mul__(self, other):
        if not isinstance(other, FormalPoly):
            return self.scale(other)
        out: Dict[Exps, SparsePoly] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                _acc(out, tuple(a + b for a, b in zip(e1, e2)), c1 * c2)
        return FormalPoly._raw(self.n, out)

    def __eq__(self, other):
        return isinstance(other, FormalPoly) and self.n == other.n and self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def delta(self, W=None):
        out = {}
        for e, c in self.terms.items():
            d = delta(c, W)
            if d:
                out[e] = d
        return FormalPoly._raw(self.n, out)

    def truncate(self, W):
        out = {}
        for e, c in self.terms.items():
            t = truncate(c, W)
            if t:
                out[e] = t
        return FormalPoly._raw(self.n, out)

    def coeff(self, e) -> SparsePoly:
        return self.terms.get(tuple(e))

    def degree_in(self, i):
        return max((e[i] for e in self.terms), default=0)

    def weights(self):
        """Set of total weights (coefficient weight + λ-degree) of the terms."""
        return {mono_weight(m) + sum(e) for e, c in self.terms.items() for m in c.terms}

    def substitute(self, i: int, linear: Mapping[int, Fraction], delta_coeff=0, W=None):
        """λ_i -> Σ_j linear[j] λ_j + delta_coeff·δ, δ acting on the coefficient.

        (L + sδ)^k c = Σ_t C(k, t) L^{k-t} s^t δ^t(c).
        """
        out: Dict[Exps, SparsePoly] = {}
        s = Fraction(delta_coeff)
        lin = FormalPoly(self.n, {tuple(int(j == q) for q in range(self.n)): SparsePoly.const(Fraction(cj))
                                  for j, cj in linear.items() if cj})
        pow_cache = {0: FormalPoly.const(self.n, SparsePoly.const(1))}

        def lin_pow(k):
            if k not in pow_cache:
                pow_cache[k] = lin_pow(k - 1) * lin
            return pow_cache[k]

        for e, c in self.terms.items():
            k = e[i]
            rest = list(e)
            rest[i] = 0
            rest = tuple(rest)
            dc = c
            for t in range(k + 1):
                if t:
                    if not s:
                        break
                    dc = delta(dc, W)
                    if not dc:
                        break
                coef = comb(k, t) * s ** t
                if not coef:
                    continue
                piece = lin_pow(k - t)
                for e2, c2 in piece.terms.items():
                    ee = tuple(a + b for a, b in zip(rest, e2))
                    _acc(out, ee, dc * (c2.constant_term() * coef))
        return FormalPoly._raw(self.n, out)

    def evaluate_zero(self, i):
        return FormalPoly._raw(self.n, {e: c for e, c in self.terms.items() if e[i] == 0})

    def embed(self, n_new: int, index_map: Mapping[int, int]):
        """Rename λ_i -> λ_{index_map[i]} inside n_new variables."""
        out: Dict[Exps, SparsePoly] = {}
        for e, c in self.terms.items():
            e2 = [0] * n_new
            for i, k in enumerate(e):
                if k:
                    e2[index_map[i]] += k
            _acc(out, tuple(e2), c)
        return FormalPoly._raw(n_new, out)

    def apply_shift_to(self, i: int, g: SparsePoly, W=None):
        """Σ p_k (λ_i + δ)^k g, the δ acting on ``g`` only (the "→" convention)."""
        out: Dict[Exps, SparsePoly] = {}
        dg_cache = [g]
        for e, c in self.terms.items():
            k = e[i]
            while len(dg_cache) <= k:
                dg_cache.append(delta(dg_cache[-1], W))
            for t in range(k + 1):
                dgt = dg_cache[t]
                if not dgt:
                    continue
                ee = list(e)
                ee[i] = k - t
                val = c * dgt * comb(k, t)
                if W is not None:
                    val = truncate(val, W)
                _acc(out, tuple(ee), val)
        return FormalPoly._raw(self.n, out)

    def sorted_terms(self):
        return sorted(self.terms.items())

    def format(self, name=None, var_names=None):
        if not self.terms:
            return "0"
        if var_names is None:
            var_names = ["lambda"] if self.n == 1 else [f"lambda{k + 1}" for k in range(self.n)]
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            lam = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(var_names, e) if k)
            cs = format_poly(c, name) if name else format_poly(c)
            if not lam:
                parts.append(f"({cs})")
            elif cs == "1":
                parts.append(lam)
            elif cs == "-1":
                parts.append("-" + lam)
            else:
                parts.append(f"({cs})*{lam}")
        return " + ".join(parts)

    def __repr__(self):
        return f"FormalPoly[{self.n}]({self.format()})"


def divided_power_of_linear(n: int, linear: Mapping[int, Fraction], k: int) -> FormalPoly:
    """(Σ c_j λ_j)^k / k! as a FormalPoly with constant coefficients."""
    lin = FormalPoly(n, {tuple(int(j == q) for q in range(n)): SparsePoly.const(Fraction(c))
                         for j, c in linear.items() if c})
    out = FormalPoly.const(n, SparsePoly.const(1))
    for _ in range(k):
        out = out * lin
    return out.scale(Fraction(1, factorial(k)))
