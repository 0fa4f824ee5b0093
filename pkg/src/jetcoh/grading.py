"""Gradings by (cohomological degree, conformal weight, multidegree)."""
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Tuple

from .errors import DomainError
from .superalg import SuperElement

BlockLabel = Tuple[int, int, Tuple[int, ...]]


@dataclass(frozen=True)
class GradingVector:
    """Per-generator (weight, multidegree); odd generators have cohomological degree 1."""

    m: int
    even: Dict = field(default_factory=dict)
    odd: Dict = field(default_factory=dict)

    def key_label(self, key) -> BlockLabel:
        mono, odd = key
        w = 0
        d = [0] * self.m
        for v, e in mono:
            try:
                wv, dv = self.even[v]
            except KeyError:
                raise DomainError(f"no grading assigned to even generator {v!r}", "exact-core") from None
            w += wv * e
            for k in range(self.m):
                d[k] += dv[k] * e
        for t in odd:
            try:
                wt, dt = self.odd[t]
            except KeyError:
                raise DomainError(f"no grading assigned to odd generator {t!r}", "exact-core") from None
            w += wt
            for k in range(self.m):
                d[k] += dt[k]
        return len(odd), w, tuple(d)

    def components(self, s: SuperElement) -> Dict[BlockLabel, SuperElement]:
        parts: Dict[BlockLabel, dict] = {}
        for k, c in s.terms.items():
            parts.setdefault(self.key_label(k), {})[k] = c
        return {lab: SuperElement._raw(t) for lab, t in parts.items()}

    def label_of(self, s: SuperElement):
        """Label of a homogeneous element, ``None`` if zero; raises if inhomogeneous."""
        labels = {self.key_label(k) for k in s.terms}
        if len(labels) > 1:
            raise DomainError(f"element is not homogeneous: labels {sorted(labels)}", "exact-core")
        return labels.pop() if labels else None


def graded_block_split(elements: Iterable[SuperElement], g: GradingVector) -> Dict[BlockLabel, List[SuperElement]]:
    """Split every element into homogeneous parts and group them by block label."""
    blocks: Dict[BlockLabel, List[SuperElement]] = {}
    for s in elements:
        for lab, part in g.components(s).items():
            blocks.setdefault(lab, []).append(part)
    return dict(sorted(blocks.items()))
