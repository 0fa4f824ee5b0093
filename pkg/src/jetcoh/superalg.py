"""Graded-commutative algebra  SparsePoly ⊗ Λ[odd generators].

Terms are keyed by ``(monomial, odd)`` where ``odd`` is a strictly increasing
tuple of odd-generator ids.  Signs are normalized by sorting odd generators
into their global order.
"""
from fractions import Fraction
from typing import Dict, Mapping, Tuple

from .errors import DomainError
from .poly import ONE_MONO, Monomial, SparsePoly, default_var_name, format_fraction, format_mono, mono_mul

Key = Tuple[Monomial, tuple]


def merge_odd(a: tuple, b: tuple):
    """Return ``(sign, merged)`` for ``a ∧ b``; sign 0 when they share a generator."""
    if not a:
        return 1, b
    if not b:
        return 1, a
    out = []
    inversions = 0
    i = j = 0
    la, lb = len(a), len(b)
    while i < la and j < lb:
        if a[i] < b[j]:
            out.append(a[i])
            i += 1
        elif a[i] > b[j]:
            # b[j] jumps over the remaining la - i generators of a
            inversions += la - i
            out.append(b[j])
            j += 1
        else:
            return 0, ()
    out.extend(a[i:])
    out.extend(b[j:])
    return (-1 if inversions & 1 else 1), tuple(out)


class SuperElement:
    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms: Dict[Key, Fraction] = {k: Fraction(c) for k, c in (terms or {}).items() if c}

    @classmethod
    def _raw(cls, terms):
        obj = cls.__new__(cls)
        obj.terms = terms
        return obj

    @classmethod
    def from_poly(cls, p: SparsePoly, odd: tuple = ()):
        return cls._raw({(m, odd): c for m, c in p.terms.items()})

    @classmethod
    def odd_gen(cls, t):
        return cls._raw({(ONE_MONO, (t,)): Fraction(1)})

    @classmethod
    def even_gen(cls, v, exp=1):
        return cls._raw({(((v, exp),), ()): Fraction(1)})

    @classmethod
    def const(cls, c):
        return cls._raw({(ONE_MONO, ()): Fraction(c)} if c else {})

    @classmethod
    def monomial(cls, mono: Monomial, odd: tuple, coeff=1):
        odd = tuple(odd)
        if list(odd) != sorted(set(odd)):
            sign, odd2 = 1, ()
            for t in odd:
                s, odd2 = merge_odd(odd2, (t,))
                sign *= s
            return cls._raw({(mono, odd2): Fraction(coeff) * sign} if sign else {})
        return cls._raw({(mono, odd): Fraction(coeff)} if coeff else {})

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k, 0) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return SuperElement._raw(out)

    def __neg__(self):
        return SuperElement._raw({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = Fraction(c)
        if not c:
            return SuperElement._raw({})
        return SuperElement._raw({k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, SparsePoly):
            other = SuperElement.from_poly(other)
        out: Dict[Key, Fraction] = {}
        for (m1, o1), c1 in self.terms.items():
            for (m2, o2), c2 in other.terms.items():
                sign, o = merge_odd(o1, o2)
                if not sign:
                    continue
                k = (mono_mul(m1, m2), o)
                s = out.get(k, 0) + sign * c1 * c2
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        return SuperElement._raw(out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, SparsePoly):
            return SuperElement.from_poly(other) * self
        return NotImplemented

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, SuperElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kc: (len(kc[0][1]), kc[0][1], kc[0][0]))

    def degrees(self):
        return {len(o) for (_, o) in self.terms}

    def even_part(self, invertible=frozenset()) -> SparsePoly:
        return SparsePoly({m: c for (m, o), c in self.terms.items() if not o}, invertible)

    def filter(self, pred):
        return SuperElement._raw({k: c for k, c in self.terms.items() if pred(k)})

    def __repr__(self):
        return f"SuperElement({format_super(self)})"

    def __str__(self):
        return format_super(self)


def format_super(s: SuperElement, name=default_var_name, odd_name=None) -> str:
    if odd_name is None:
        odd_name = lambda t: "th" + default_var_name(t)
    if not s.terms:
        return "0"
    parts = []
    for (m, o), c in s.sorted_terms():
        factors = [f for f in (format_mono(m, name), "^".join(odd_name(t) for t in o)) if f]
        body = "*".join(factors) if factors else ""
        if not body:
            body = format_fraction(abs(c))
        elif abs(c) != 1:
            body = f"{format_fraction(abs(c))}*{body}"
        parts.append(("-" if c < 0 else "+", body))
    s0 = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    return s0 + "".join(f" {sg} {b}" for sg, b in parts[1:])


def super_derivation_apply(even_table: Mapping, odd_table: Mapping, s: SuperElement,
                           parity: str = "odd") -> SuperElement:
    """Apply the (super-)derivation given on generators to ``s``.

    ``even_table[v]`` / ``odd_table[t]`` give images of the even variable ``v``
    and odd generator ``t``.  An odd derivation picks up ``(-1)^k`` passing
    ``k`` odd generators; an even one never does.
    """
    if parity not in ("odd", "even"):
        raise DomainError(f"parity must be 'odd' or 'even', got {parity!r}")
    odd = parity == "odd"
    out: Dict[Key, Fraction] = {}

    def acc(elem: SuperElement, pre_m: Monomial, pre_o: tuple, post_o: tuple, coeff):
        # computes coeff * (pre_m * pre_o) * elem * post_o
        for (m, o), c in elem.terms.items():
            sign1, o1 = merge_odd(pre_o, o)
            if not sign1:
                continue
            sign2, o2 = merge_odd(o1, post_o)
            if not sign2:
                continue
            k = (mono_mul(pre_m, m), o2)
            val = out.get(k, 0) + sign1 * sign2 * coeff * c
            if val:
                out[k] = val
            else:
                out.pop(k, None)

    for (m, o), c in s.terms.items():
        for v, e in m:
            try:
                img = even_table[v]
            except KeyError:
                raise DomainError(f"derivation table has no image for even generator {v!r}",
                                  "exact-core") from None
            if img:
                rest = mono_mul(m, ((v, -1),))
                # d(m)·o: d(v) is placed before the odd part; even factors carry no sign
                acc(img, rest, (), o, c * e)
        for j, t in enumerate(o):
            try:
                img = odd_table[t]
            except KeyError:
                raise DomainError(f"derivation table has no image for odd generator {t!r}",
                                  "exact-core") from None
            if img:
                sign = -1 if (odd and j % 2) else 1
                acc(img, m, o[:j], o[j + 1:], c * sign)
    return SuperElement._raw(out)


def super_mono_weight(key: Key, weight_of_even, weight_of_odd) -> int:
    m, o = key
    return sum(weight_of_even(v) * e for v, e in m) + sum(weight_of_odd(t) for t in o)
