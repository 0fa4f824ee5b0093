"""Exact linear algebra over Q.

``exact_kernel_and_rank`` is dense Bareiss elimination on integer rows.
``sparse_rank`` is a fraction-free elimination on dict rows with content
removal; it is what the cohomology engine uses on large sparse blocks.
"""
from fractions import Fraction
from math import gcd
from typing import Dict, List, Sequence, Tuple


def _integer_rows(mat: Sequence[Sequence]) -> List[List[int]]:
    rows = []
    for row in mat:
        row = [Fraction(x) for x in row]
        den = 1
        for x in row:
            den = den * x.denominator // gcd(den, x.denominator)
        rows.append([int(x * den) for x in row])
    return rows


def bareiss_echelon(mat: Sequence[Sequence]) -> Tuple[List[List[int]], List[int]]:
    """Fraction-free row echelon form.  Returns ``(rows, pivot_columns)``."""
    a = _integer_rows(mat)
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    pivots: List[int] = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        for i in range(r + 1, nrows):
            aic = a[i][c]
            row_i, row_r = a[i], a[r]
            for j in range(c, ncols):
                # exact by Sylvester's identity
                row_i[j] = (piv * row_i[j] - aic * row_r[j]) // prev
        prev = piv
        pivots.append(c)
        r += 1
    return a[:r], pivots


def exact_kernel_and_rank(mat: Sequence[Sequence], ncols: int = None):
    """Rank and a rational kernel basis of ``mat``.

    An empty matrix with ``ncols`` columns has rank 0 and the full kernel.
    """
    if not mat:
        n = ncols or 0
        return 0, [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    n = len(mat[0])
    rows, pivots = bareiss_echelon(mat)
    rank = len(pivots)
    # back-substitute over Q from the echelon form
    red = [[Fraction(x) for x in row] for row in rows]
    for k in range(rank - 1, -1, -1):
        c = pivots[k]
        pv = red[k][c]
        red[k] = [x / pv for x in red[k]]
        for i in range(k):
            f = red[i][c]
            if f:
                red[i] = [xi - f * xk for xi, xk in zip(red[i], red[k])]
    free = [c for c in range(n) if c not in set(pivots)]
    kernel = []
    for fcol in free:
        v = [Fraction(0)] * n
        v[fcol] = Fraction(1)
        for k, c in enumerate(pivots):
            v[c] = -red[k][fcol]
        kernel.append(v)
    return rank, kernel


def _content_normalize(row: Dict[int, int]) -> Dict[int, int]:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        return {k: v // g for k, v in row.items()}
    return row


def sparse_rank(rows: Sequence[Dict[int, Fraction]]) -> int:
    """Rank of a matrix given as sparse rows ``{column: value}``."""
    work = []
    for row in rows:
        row = {k: Fraction(v) for k, v in row.items() if v}
        if not row:
            continue
        den = 1
        for x in row.values():
            den = den * x.denominator // gcd(den, x.denominator)
        work.append(_content_normalize({k: int(x * den) for k, x in row.items()}))
    # index rows by their leading column; reduce each incoming row against pivots
    pivots: Dict[int, Dict[int, int]] = {}
    for row in sorted(work, key=len):
        while row:
            lead = min(row)
            prow = pivots.get(lead)
            if prow is None:
                pivots[lead] = row
                break
            a, b = prow[lead], row[lead]
            g = gcd(a, b)
            fa, fb = a // g, b // g
            new = {k: v * fa for k, v in row.items()}
            for k, v in prow.items():
                s = new.get(k, 0) - fb * v
                if s:
                    new[k] = s
                else:
                    new.pop(k, None)
            row = _content_normalize(new) if new else new
    return len(pivots)


def rank(mat: Sequence[Sequence]) -> int:
    return sparse_rank([{j: x for j, x in enumerate(row) if x} for row in mat])


def mat_vec(mat: Sequence[Sequence], v: Sequence) -> List[Fraction]:
    return [sum((Fraction(a) * b for a, b in zip(row, v)), Fraction(0)) for row in mat]
