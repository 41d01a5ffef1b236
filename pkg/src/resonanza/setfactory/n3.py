"""
Three oscillators with frequencies ``(p, p, q)``: the quadratic algebra
``L_1..L_5``, the irreducible families ``A_{q,s}``, simple integrable sets
and the exceptional degree-(2, 3, 6) set for ``l = (1, 1, 2)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial, gcd

import gmpy2
from gmpy2 import mpq

from ..exact import ExactComplex, RadicalComplex
from ..linalg import solve
from ..polycore import Polynomial, re_im
from .core import (IntegrableSet, PreconditionError, build_J_r, normalize_frequencies,
                   re_R_m)

N = 3


def n3_pattern(l) -> tuple[int, int]:
    """Return ``(p, q)`` for ``l = (p, p, q)`` with p, q > 0 and p != q."""
    l = normalize_frequencies(l)
    if len(l) != 3:
        raise PreconditionError(f"n=3 required, got l={list(l)}")
    if abs(l[0]) != abs(l[1]):
        raise PreconditionError(f"|l1| != |l2| for l={list(l)}")
    if not (l[0] == l[1] and l[0] > 0 and l[2] > 0):
        raise PreconditionError(f"only l = (p, p, q) with p, q > 0 is supported, got {list(l)}")
    if l[0] == l[2]:
        raise PreconditionError("p == q: all three frequencies equal")
    return l[0], l[2]


def _z(j):
    return Polynomial.z(N, j)


def _zb(j):
    return Polynomial.zbar(N, j)


def _I(j):
    return Polynomial.action(N, j)


def Q12() -> Polynomial:
    """``2 Re(zbar_1 z_2)``."""
    return re_im(_zb(0) * _z(1))[0].scale(2)


def P12() -> Polynomial:
    """``2 Im(zbar_1 z_2)``; equals ``i (z_1 zbar_2 - z_2 zbar_1)``."""
    return re_im(_zb(0) * _z(1))[1].scale(2)


def L_basis() -> list[tuple[str, Polynomial]]:
    half = mpq(-1, 2)
    return [
        ("L1", Q12().scale(half)),
        ("L2", P12().scale(half)),
        ("L3", (_I(0) - _I(1)).scale(half)),
        ("L4", (_I(0) + _I(1)).scale(half)),
        ("L5", _I(2)),
    ]


@dataclass(frozen=True)
class AFunction:
    """``A_{q,s} = monomial / sqrt(normalizer_sq)``; the square root is never formed."""

    q: int
    s: int
    monomial: Polynomial
    normalizer_sq: int


def A_family(p: int, q: int) -> list[AFunction]:
    out = []
    for s in range(q + 1):
        mono = Polynomial.monomial((0, 0, p), (q - s, s, 0))
        out.append(AFunction(q, s, mono, factorial(q - s) * factorial(s)))
    return out


# ---------------------------------------------------------------------------
# su(2) x u(1) x u(1) matrices

Matrix = list  # list of rows of RadicalComplex


def _mat(size, fn) -> Matrix:
    return [[fn(h, s) for s in range(size)] for h in range(size)]


def matmul(A: Matrix, B: Matrix) -> Matrix:
    size = len(A)
    out = []
    for i in range(size):
        row = []
        for j in range(size):
            acc = RadicalComplex()
            for k in range(size):
                if A[i][k] and B[k][j]:
                    acc = acc + A[i][k] * B[k][j]
            row.append(acc)
        out.append(row)
    return out


def matadd(A: Matrix, B: Matrix, cb=1) -> Matrix:
    return [[a + b * cb for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def matscale(A: Matrix, c) -> Matrix:
    return [[a * c for a in row] for row in A]


def commutator_m(A: Matrix, B: Matrix) -> Matrix:
    return matadd(matmul(A, B), matmul(B, A), -1)


def identity_m(size: int, c=1) -> Matrix:
    return _mat(size, lambda h, s: RadicalComplex.coerce(c if h == s else 0))


def dagger(A: Matrix) -> Matrix:
    return [[A[s][h].conjugate() for s in range(len(A))] for h in range(len(A))]


@dataclass(frozen=True)
class RepMatrices:
    """The five ``(q+1) x (q+1)`` matrices ``J_{q,1..5}`` (exact, with square roots)."""

    q: int
    p: int
    J: tuple

    def __getitem__(self, mu: int) -> Matrix:
        """1-based access: ``rep[3]`` is ``J_{q,3}``."""
        return self.J[mu - 1]

    def to_numpy(self):
        import numpy as np
        return [np.array([[complex(x) for x in row] for row in M]) for M in self.J]


def build_rep_matrices(q: int, p: int = 1) -> RepMatrices:
    if q < 1:
        raise PreconditionError("q must be >= 1")
    half = mpq(1, 2)
    neg_half_i = ExactComplex(0, mpq(-1, 2))  # 1/(2i)

    def j1(h, s):
        out = RadicalComplex()
        if h - 1 == s:
            out = out + RadicalComplex.sqrt((q - s) * h, half)
        if s - 1 == h:
            out = out + RadicalComplex.sqrt((q - h) * s, half)
        return out

    # sign opposite to the printed formula: this is the one for which both the
    # su(2) relations and the Poisson action on A_{q,s} hold
    def j2(h, s):
        out = RadicalComplex()
        if s - 1 == h:
            out = out + RadicalComplex.sqrt((q - h) * s, neg_half_i)
        if h - 1 == s:
            out = out - RadicalComplex.sqrt((q - s) * h, neg_half_i)
        return out

    size = q + 1
    J = (
        _mat(size, j1),
        _mat(size, j2),
        _mat(size, lambda h, s: RadicalComplex.coerce(mpq(q, 2) - h if h == s else 0)),
        _mat(size, lambda h, s: RadicalComplex.coerce(mpq(q, 2) if h == s else 0)),
        _mat(size, lambda h, s: RadicalComplex.coerce(p if h == s else 0)),
    )
    return RepMatrices(q, p, J)


@dataclass(frozen=True)
class N3Catalog:
    p: int
    q: int
    L: list
    A: list
    rep: RepMatrices


def build_n3_catalog(l) -> N3Catalog:
    p, q = n3_pattern(l)
    return N3Catalog(p, q, L_basis(), A_family(p, q), build_rep_matrices(q, p))


def intertwiner_coefficient(rep: RepMatrices, mu: int, h: int, s: int,
                            A: list[AFunction]) -> ExactComplex:
    """
    Coefficient of the monomial ``M_h`` in ``{i L_mu, M_s}`` predicted by
    ``J_{q,mu}``: ``(J_mu)_{hs} * sqrt(N_s / N_h)``, which is rational.
    """
    entry = rep[mu][h][s]
    if not entry:
        return ExactComplex(0)
    ratio = RadicalComplex.sqrt(mpq(A[s].normalizer_sq, A[h].normalizer_sq))
    val = entry * ratio
    if set(val.parts) != {1}:
        raise ArithmeticError(f"irrational intertwiner coefficient {val}")
    return val.parts[1]


# ---------------------------------------------------------------------------
# simple sets


def simple_m_vector(p: int, q: int, d1: int, d2: int) -> tuple[int, int, int]:
    """m with ``p(m1+m2) + q m3 = 0`` and ``d1 m1 + d2 m2 = 0``."""
    if d1 == d2:
        return (-1, 1, 0)
    num, den = q, d1 - d2
    g = gcd(num, den)
    h, k = num // g, den // g
    return (-d2 * h, d1 * h, -p * k)


def build_simple_set(l, d1: int, d2: int) -> IntegrableSet:
    """``(F1, d1 I1 + d2 I2, Re R_m)`` with the m-vector from :func:`simple_m_vector`."""
    p, q = n3_pattern(l)
    if d1 <= 0 or abs(d2) > d1 or gcd(d1, abs(d2)) != 1:
        raise PreconditionError(
            f"(d1, d2)=({d1}, {d2}) not normalized: need d1 > 0, |d2| <= d1, gcd 1")
    m = simple_m_vector(p, q, d1, d2)
    l = (p, p, q)
    elems = (("F1", build_J_r(3, l)), ("F2", build_J_r(3, (d1, d2, 0))), ("F3", re_R_m(3, m)))
    meta = {"family": "simple", "d": [d1, d2], "m": list(m)}
    return IntegrableSet(f"simple_{d1}_{d2}", l, elems, 3, meta)


# ---------------------------------------------------------------------------
# the exceptional set


def exceptional_pieces() -> dict[str, Polynomial]:
    """``D_s, C_s`` (real/imag parts of ``zbar_1^{2-s} zbar_2^s z_3``), ``M3``, ``N3``, ``I_j``."""
    out = {}
    for s in range(3):
        mono = Polynomial.monomial((0, 0, 1), (2 - s, s, 0))
        re, im = re_im(mono)
        out[f"D{s}"] = re
        out[f"C{s}"] = im
    out["M3"] = P12()
    out["N3"] = Q12()
    for j in range(3):
        out[f"I{j + 1}"] = _I(j)
    return out


def build_exceptional_set() -> IntegrableSet:
    """``F1 = I1 + I2 + 2 I3``, ``F2 = C0 + 2 C2``, ``F3 = 2 C0^2 + I1 M3^2``."""
    x = exceptional_pieces()
    F1 = build_J_r(3, (1, 1, 2))
    F2 = x["C0"] + x["C2"].scale(2)
    F3 = (x["C0"] * x["C0"]).scale(2) + x["I1"] * x["M3"] * x["M3"]
    return IntegrableSet("exceptional", (1, 1, 2), (("F1", F1), ("F2", F2), ("F3", F3)), 3,
                         {"family": "exceptional"})


# ---------------------------------------------------------------------------
# classification of quadratic second elements


class NonClassifiableError(ValueError):
    """The ratio gamma_2/gamma_1 is irrational."""


def _coefficients_in_L(F2: Polynomial) -> list[mpq]:
    basis = [p for _, p in L_basis()]
    keys = sorted(set(F2.terms).union(*(b.terms for b in basis)))
    zero = ExactComplex(0)
    cols = [[b.terms.get(k, zero) for k in keys] for b in basis]
    target = [F2.terms.get(k, zero) for k in keys]
    x = solve(cols, target)
    if x is None:
        raise PreconditionError("F2 is not in the span of L1..L5")
    out = []
    for c in x:
        c = ExactComplex.coerce(c)
        if not c.is_rational():
            raise PreconditionError("F2 must be a real rational combination of L1..L5")
        out.append(c.re)
    return out


def _rational_sqrt(x: mpq):
    num, den = int(x.numerator), int(x.denominator)
    if gmpy2.is_square(num) and gmpy2.is_square(den):
        return mpq(int(gmpy2.isqrt(num)), int(gmpy2.isqrt(den)))
    return None


def classify_simple_F2(F2: Polynomial, l=(1, 1, 2), max_denominator: int = 10**6
                       ) -> tuple[int, int]:
    """
    Normalized ``(d1, d2)`` of the diagonal form ``d1 I1 + d2 I2`` that a
    quadratic ``F2`` commuting with ``F1`` reduces to.

    Drop the ``L5`` component against ``F1``, rotate ``(L1, L2, L3)`` onto
    ``L3``, and read ``gamma_1 I1 + gamma_2 I2`` with
    ``beta3 = |(a1, a2, a3)|`` and ``beta4 = a4 + 2 p a5 / q``.
    """
    p, q = n3_pattern(l)
    a = _coefficients_in_L(F2)
    beta4 = a[3] + 2 * p * a[4] / q
    S = a[0] ** 2 + a[1] ** 2 + a[2] ** 2
    beta3 = _rational_sqrt(S)
    if beta3 is not None:
        g1 = -(beta3 + beta4) / 2
        g2 = (beta3 - beta4) / 2
        if abs(g1) < abs(g2):
            g1, g2 = g2, g1
        if g1 == 0:
            raise NonClassifiableError("F2 is a multiple of F1")
        ratio = Fraction(int((g2 / g1).numerator), int((g2 / g1).denominator))
    else:
        b3 = float(S) ** 0.5
        b4 = float(beta4)
        g1, g2 = -(b3 + b4) / 2, (b3 - b4) / 2
        if abs(g1) < abs(g2):
            g1, g2 = g2, g1
        ratio = Fraction(g2 / g1).limit_denominator(max_denominator)
        # certificate: the rational ratio r must give beta3 = beta4 (1 - r)/(1 + r)
        # (or its reciprocal form after the swap) with beta3^2 == S exactly
        if not _ratio_certified(mpq(ratio.numerator, ratio.denominator), beta4, S):
            raise NonClassifiableError(
                f"gamma_2/gamma_1 is irrational (beta3^2 = {S}, beta4 = {beta4})")
    d1, d2 = ratio.denominator, ratio.numerator
    return d1, d2


def _ratio_certified(r: mpq, beta4: mpq, S: mpq) -> bool:
    # before or after the swap, r is g2/g1 or g1/g2 with
    # g1 = -(b3 + b4)/2, g2 = (b3 - b4)/2
    for rr in (r, (1 / r) if r else None):
        if rr is None or rr == -1:
            if rr == -1 and beta4 == 0:
                return True
            continue
        b3 = beta4 * (1 - rr) / (1 + rr)
        if b3 >= 0 and b3 * b3 == S:
            return True
    return False
