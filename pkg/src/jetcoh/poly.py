"""Sparse Laurent polynomials with exact rational coefficients.

A monomial is a tuple of ``(var, exp)`` pairs sorted by ``var`` with no zero
exponents.  Variables are any mutually comparable hashables; the jet code uses
``(a, i)`` pairs (base variable index, jet level).
"""
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Tuple

from .errors import DomainError

Monomial = Tuple[tuple, ...]
ONE_MONO: Monomial = ()


def mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    out = dict(m1)
    for v, e in m2:
        s = out.get(v, 0) + e
        if s:
            out[v] = s
        else:
            del out[v]
    return tuple(sorted(out.items()))


def mono_from_dict(d: Mapping) -> Monomial:
    return tuple(sorted((v, e) for v, e in d.items() if e))


def mono_exp(m: Monomial, v) -> int:
    for w, e in m:
        if w == v:
            return e
    return 0


def mono_vars(m: Monomial):
    return [v for v, _ in m]


def check_mono(m: Monomial, invertible, module="exact-core"):
    for v, e in m:
        if e < 0 and v not in invertible:
            raise DomainError(f"negative exponent {e} on non-invertible variable {v!r}", module)


class SparsePoly:
    """Immutable sparse Laurent polynomial ``{Monomial: Fraction}``.

    ``invertible`` is the set of variables allowed negative exponents; it is
    carried along so that arithmetic can refuse ill-formed results.
    """

    __slots__ = ("terms", "invertible", "_hash")

    def __init__(self, terms=None, invertible=frozenset(), _trusted=False):
        self.invertible = frozenset(invertible)
        self._hash = None
        if _trusted:
            self.terms = terms
            return
        clean: Dict[Monomial, Fraction] = {}
        for m, c in (terms or {}).items():
            if c:
                m = tuple(sorted(m))
                check_mono(m, self.invertible)
                clean[m] = clean.get(m, 0) + Fraction(c)
        self.terms = {m: c for m, c in clean.items() if c}

    # --- constructors -----------------------------------------------------
    @classmethod
    def const(cls, c, invertible=frozenset()):
        return cls({ONE_MONO: Fraction(c)} if c else {}, invertible, _trusted=True)

    @classmethod
    def var(cls, v, exp=1, invertible=frozenset()):
        return cls({((v, exp),): Fraction(1)}, invertible)

    @classmethod
    def zero(cls, invertible=frozenset()):
        return cls({}, invertible, _trusted=True)

    def _new(self, terms, other=None):
        inv = self.invertible if other is None else self.invertible | other.invertible
        return SparsePoly(terms, inv, _trusted=True)

    def _coerce(self, other):
        if isinstance(other, SparsePoly):
            return other
        if isinstance(other, (int, Fraction)):
            return SparsePoly.const(other, self.invertible)
        return NotImplemented

    # --- arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return self._new(out, other)

    __radd__ = __add__

    def __neg__(self):
        return self._new({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return self._new({})
            return self._new({m: c * other for m, c in self.terms.items()})
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return poly_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if not self.is_unit():
                raise DomainError("negative power of a non-unit")
            return self.unit_inverse() ** (-n)
        out = SparsePoly.const(1, self.invertible)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # --- predicates / accessors ------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = SparsePoly.const(other)
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda mc: mc[0])

    def variables(self):
        return sorted({v for m in self.terms for v, _ in m})

    def constant_term(self) -> Fraction:
        return self.terms.get(ONE_MONO, Fraction(0))

    def is_constant(self):
        return all(m == ONE_MONO for m in self.terms)

    def is_unit(self):
        """A Laurent polynomial is a unit iff it is one term supported on invertible variables."""
        if len(self.terms) != 1:
            return False
        (m, _), = self.terms.items()
        return all(v in self.invertible for v, _ in m)

    def unit_inverse(self):
        if not self.is_unit():
            raise DomainError(f"{self} is not a unit")
        (m, c), = self.terms.items()
        return self._new({tuple((v, -e) for v, e in m): 1 / c})

    def map_coeffs(self, f):
        out = {}
        for m, c in self.terms.items():
            c2 = f(c)
            if c2:
                out[m] = Fraction(c2)
        return self._new(out)

    def rename(self, f):
        """Apply a variable renaming ``f`` to every monomial."""
        out = {}
        inv = frozenset(f(v) for v in self.invertible)
        for m, c in self.terms.items():
            m2 = mono_from_dict({f(v): e for v, e in m})
            out[m2] = out.get(m2, 0) + c
        return SparsePoly({m: c for m, c in out.items() if c}, inv, _trusted=True)

    def with_invertible(self, invertible):
        return SparsePoly(self.terms, invertible)

    def evaluate(self, point: Mapping):
        total = Fraction(0)
        for m, c in self.terms.items():
            t = c
            for v, e in m:
                t *= Fraction(point[v]) ** e
            total += t
        return total

    def substitute(self, images: Mapping):
        """Ring substitution ``v -> images[v]`` (missing variables stay)."""
        out = SparsePoly.zero(self.invertible)
        for m, c in self.terms.items():
            t = SparsePoly.const(c, self.invertible)
            for v, e in m:
                img = images.get(v)
                if img is None:
                    img = SparsePoly.var(v, invertible=self.invertible)
                t = t * (img ** e)
            out = out + t
        return out

    def __repr__(self):
        return f"SparsePoly({format_poly(self)})"

    def __str__(self):
        return format_poly(self)


def poly_mul(p: SparsePoly, q: SparsePoly) -> SparsePoly:
    out: Dict[Monomial, Fraction] = {}
    for m1, c1 in p.terms.items():
        for m2, c2 in q.terms.items():
            m = mono_mul(m1, m2)
            s = out.get(m, 0) + c1 * c2
            if s:
                out[m] = s
            else:
                out.pop(m, None)
    inv = p.invertible | q.invertible
    for m in out:
        check_mono(m, inv)
    return SparsePoly(out, inv, _trusted=True)


def poly_partial(p: SparsePoly, v) -> SparsePoly:
    """Formal partial derivative; Laurent rule d(x^-1)/dx = -x^-2."""
    out: Dict[Monomial, Fraction] = {}
    for m, c in p.terms.items():
        e = mono_exp(m, v)
        if not e:
            continue
        m2 = mono_mul(m, ((v, -1),))
        out[m2] = out.get(m2, 0) + c * e
    return SparsePoly({m: c for m, c in out.items() if c}, p.invertible, _trusted=True)


def poly_partial_checked(p: SparsePoly, v, ring_vars: Iterable) -> SparsePoly:
    if v not in set(ring_vars):
        raise DomainError(f"unknown variable {v!r}")
    return poly_partial(p, v)


def format_fraction(c: Fraction) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def default_var_name(v) -> str:
    if isinstance(v, tuple) and len(v) == 2:
        return f"v{v[0]}_{v[1]}"
    return str(v)


def format_mono(m: Monomial, name=default_var_name) -> str:
    parts = []
    for v, e in m:
        parts.append(name(v) if e == 1 else f"{name(v)}^{e}")
    return "*".join(parts)


def format_poly(p: SparsePoly, name=default_var_name) -> str:
    if not p.terms:
        return "0"
    out = []
    for m, c in p.sorted_terms():
        mono = format_mono(m, name)
        if not mono:
            body = format_fraction(abs(c))
        elif abs(c) == 1:
            body = mono
        else:
            body = f"{format_fraction(abs(c))}*{mono}"
        sign = "-" if c < 0 else "+"
        out.append((sign, body))
    first_sign, first = out[0]
    s = ("-" if first_sign == "-" else "") + first
    for sign, body in out[1:]:
        s += f" {sign} {body}"
    return s
