"""Exact elimination: ranks over Q(i, sqrt 2) and integer nullspaces."""

from __future__ import annotations

from math import gcd
from typing import Sequence

from gmpy2 import mpq


def rank(rows: Sequence[Sequence]) -> int:
    """
    Rank of a matrix whose entries belong to an exact field (``mpq``,
    :class:`~resonanza.exact.ExactComplex`, ...). Input is not modified.
    """
    m = [list(r) for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        prow = m[r]
        for i in range(r + 1, len(m)):
            f = m[i][c]
            if f:
                f = f * inv
                row = m[i]
                for j in range(c, ncols):
                    if prow[j]:
                        row[j] = row[j] - f * prow[j]
        r += 1
        if r == len(m):
            break
    return r


def solve(columns: Sequence[Sequence], target: Sequence):
    """
    Find x with ``sum_j x_j * columns[j] == target`` exactly, or None.

    Entries must support field arithmetic. Used for membership tests.
    """
    ncols = len(columns)
    nrows = len(target)
    aug = [[columns[j][i] for j in range(ncols)] + [target[i]] for i in range(nrows)]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if aug[i][c]), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [v * inv for v in aug[r]]
        for i in range(nrows):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    if any(aug[i][ncols] for i in range(r, nrows)):
        return None
    zero = target[0] * 0 if nrows else 0
    x = [zero] * ncols
    for i, c in enumerate(pivots):
        x[c] = aug[i][ncols]
    return x


def _primitive(v: list[int]) -> list[int]:
    g = 0
    for x in v:
        g = gcd(g, x)
    if g > 1:
        v = [x // g for x in v]
    first = next((x for x in v if x), 0)
    if first < 0:
        v = [-x for x in v]
    return v


def integer_rows(rows: Sequence[Sequence]) -> list[list[int]]:
    """Scale each rational row by the lcm of its denominators."""
    out = []
    for row in rows:
        row = [mpq(x) for x in row]
        den = 1
        for x in row:
            d = int(x.denominator)
            den = den * d // gcd(den, d)
        out.append([int(x * den) for x in row])
    return out


def integer_nullspace(rows: Sequence[Sequence], ncols: int | None = None) -> list[list[int]]:
    """
    Basis of the rational nullspace of a rational matrix, as primitive
    integer vectors.

    Fraction-free Gauss-Jordan: row updates ``p*row_i - f*row_p`` followed by
    division by the row content, so every intermediate stays integral. The
    basis is the one read off the reduced echelon form, hence canonical.
    """
    m = [r for r in integer_rows(rows) if any(r)]
    if ncols is None:
        if not rows:
            raise ValueError("ncols required for an empty matrix")
        ncols = len(rows[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        for i in range(len(m)):
            if i == r or not m[i][c]:
                continue
            f = m[i][c]
            new = [p * a - f * b for a, b in zip(m[i], m[r])]
            m[i] = _primitive(new) if any(new) else new
        m[r] = _primitive(m[r])
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        # x_f = 1 scaled; pivot rows give p_i * x_{c_i} + m[i][f] * x_f = 0
        den = 1
        for i, c in enumerate(pivots):
            p = m[i][c]
            den = den * abs(p) // gcd(den, abs(p))
        v = [0] * ncols
        v[f] = den
        for i, c in enumerate(pivots):
            v[c] = -m[i][f] * den // m[i][c]
        basis.append(_primitive(v))
    return basis


def integer_rank(vectors: Sequence[Sequence[int]]) -> int:
    return rank([[mpq(x) for x in v] for v in vectors])
