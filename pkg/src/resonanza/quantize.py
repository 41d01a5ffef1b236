"""
Normal-ordered boson operator polynomials, Weyl symmetrization of
classical symbols, Wick products and the terminating Moyal series.

Conventions: ``[zhat_i, zhat*_j] = delta_ij``, hbar = 1, commutators are
``[A, B] = AB - BA``. An operator key ``(a..., b...)`` stands for the
normal-ordered word ``zhat*^b zhat^a`` (creations on the left), so a
classical monomial ``z^a zbar^b`` and its normal-ordered leading term share
a key.
"""

from __future__ import annotations

import json
from functools import lru_cache
from itertools import product
from math import comb, factorial
from operator import add
from typing import Iterable, Mapping, Sequence

from gmpy2 import mpq

from .exact import ExactComplex, ONE
from .polycore import Polynomial
from .setfactory import GroupPartition, IntegrableSet, build_equal_freq_objects


class OperatorPolynomial:
    """
    Finite sum ``sum c * zhat*^b zhat^a`` in normal order.

    Parameters
    ----------
    n : int
        Number of modes.
    terms : mapping
        Key ``a + b`` (annihilation exponents then creation exponents) to
        coefficient; zero coefficients are dropped.
    """

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping | None = None):
        self.n = n
        clean: dict = {}
        for key, c in (terms or {}).items():
            key = tuple(int(e) for e in key)
            if len(key) != 2 * n or min(key, default=0) < 0:
                raise ValueError(f"bad exponent key {key} for n={n}")
            c = ExactComplex.coerce(c)
            clean[key] = clean[key] + c if key in clean else c
        self.terms = {k: v for k, v in clean.items() if v}

    @classmethod
    def _from_raw(cls, n: int, terms: dict) -> "OperatorPolynomial":
        obj = object.__new__(cls)
        obj.n = n
        obj.terms = {k: v for k, v in terms.items() if v}
        return obj

    @classmethod
    def zero(cls, n: int):
        return cls._from_raw(n, {})

    @classmethod
    def constant(cls, n: int, c=1):
        return cls._from_raw(n, {(0,) * (2 * n): ExactComplex.coerce(c)})

    @classmethod
    def annihilator(cls, n: int, j: int):
        key = [0] * (2 * n)
        key[j] = 1
        return cls._from_raw(n, {tuple(key): ONE})

    @classmethod
    def creator(cls, n: int, j: int):
        key = [0] * (2 * n)
        key[n + j] = 1
        return cls._from_raw(n, {tuple(key): ONE})

    @classmethod
    def number(cls, n: int, j: int):
        """``zhat*_j zhat_j``."""
        key = [0] * (2 * n)
        key[j] = key[n + j] = 1
        return cls._from_raw(n, {tuple(key): ONE})

    @classmethod
    def action(cls, n: int, j: int):
        """``Ihat_j = (zhat*_j zhat_j + zhat_j zhat*_j)/2 = zhat*_j zhat_j + 1/2``."""
        return cls.number(n, j) + cls.constant(n, mpq(1, 2))

    # -- structure ---------------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    @property
    def degree(self) -> int:
        return max((sum(k) for k in self.terms), default=-1)

    def items(self):
        return sorted(self.terms.items())

    def coeff(self, a: Sequence[int], b: Sequence[int]) -> ExactComplex:
        return self.terms.get(tuple(a) + tuple(b), ExactComplex(0))

    def level_shifts(self, l: Sequence[int]) -> set[int]:
        """``l.(b - a)`` over all terms: how far each term moves the F1 level."""
        n = self.n
        return {sum(l[j] * (k[n + j] - k[j]) for j in range(n)) for k in self.terms}

    # -- arithmetic --------------------------------------------------------

    def _lift(self, other) -> "OperatorPolynomial":
        if isinstance(other, OperatorPolynomial):
            if other.n != self.n:
                raise ValueError(f"mode-count mismatch: {self.n} vs {other.n}")
            return other
        return OperatorPolynomial.constant(self.n, other)

    def __add__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return OperatorPolynomial._from_raw(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return OperatorPolynomial._from_raw(self.n, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "OperatorPolynomial":
        c = ExactComplex.coerce(c)
        return OperatorPolynomial._from_raw(self.n, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, OperatorPolynomial):
            return op_product(self, other)
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __rmul__(self, other):
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("nonnegative integer power required")
        out = OperatorPolynomial.constant(self.n, 1)
        for _ in range(k):
            out = op_product(out, self)
        return out

    def adjoint(self) -> "OperatorPolynomial":
        n = self.n
        return OperatorPolynomial._from_raw(
            n, {k[n:] + k[:n]: c.conjugate() for k, c in self.terms.items()})

    def is_hermitian(self) -> bool:
        return self == self.adjoint()

    def symbol(self) -> Polynomial:
        """The normal symbol: replace ``zhat -> z``, ``zhat* -> zbar``."""
        return Polynomial._from_raw(self.n, dict(self.terms))

    def __eq__(self, other):
        if isinstance(other, OperatorPolynomial):
            return self.n == other.n and self.terms == other.terms
        try:
            return self == OperatorPolynomial.constant(self.n, other)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        n = self.n
        return {"n": n, "terms": [{"creation": list(k[n:]), "annihilation": list(k[:n]),
                                   **c.fields()} for k, c in self.items()]}

    @classmethod
    def from_dict(cls, d: Mapping) -> "OperatorPolynomial":
        n = int(d["n"])
        terms = {}
        for t in d["terms"]:
            terms[tuple(t["annihilation"]) + tuple(t["creation"])] = ExactComplex.from_fields(t)
        return cls(n, terms)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_json(cls, s: str) -> "OperatorPolynomial":
        return cls.from_dict(json.loads(s))

    def __str__(self):
        if not self.terms:
            return "0"
        n = self.n
        parts = []
        for k, c in self.items():
            factors = []
            for j in range(n):
                e = k[n + j]
                if e:
                    factors.append(f"zh{j + 1}*" + (f"^{e}" if e > 1 else ""))
            for j in range(n):
                e = k[j]
                if e:
                    factors.append(f"zh{j + 1}" + (f"^{e}" if e > 1 else ""))
            coef = str(c)
            if " " in coef:
                coef = f"({coef})"
            mono = " ".join(factors)
            parts.append(coef if not mono else (mono if c == ONE else f"{coef}*{mono}"))
        return " + ".join(parts)

    def __repr__(self):
        return f"OperatorPolynomial({self})"


# ---------------------------------------------------------------------------
# Wick products


@lru_cache(maxsize=None)
def _wick_mode(a1: int, b2: int) -> tuple[tuple[int, int], ...]:
    """``zhat^a1 zhat*^b2 = sum_k k! C(a1,k) C(b2,k) zhat*^(b2-k) zhat^(a1-k)``."""
    return tuple((k, factorial(k) * comb(a1, k) * comb(b2, k)) for k in range(min(a1, b2) + 1))


def op_product(A: OperatorPolynomial, B: OperatorPolynomial) -> OperatorPolynomial:
    """Normal-ordered product ``A B``; modes reorder independently."""
    if A.n != B.n:
        raise ValueError(f"mode-count mismatch: {A.n} vs {B.n}")
    n = A.n
    out: dict = {}
    get = out.get
    for k1, c1 in A.terms.items():
        for k2, c2 in B.terms.items():
            base = tuple(map(add, k1, k2))
            c = c1 * c2
            per_mode = [_wick_mode(k1[j], k2[n + j]) for j in range(n)]
            if all(len(pm) == 1 for pm in per_mode):
                prev = get(base)
                out[base] = c if prev is None else prev + c
                continue
            for choice in product(*per_mode):
                key = list(base)
                w = 1
                for j, (kk, wk) in enumerate(choice):
                    if kk:
                        key[j] -= kk
                        key[n + j] -= kk
                    w *= wk
                key = tuple(key)
                term = c * w
                prev = get(key)
                out[key] = term if prev is None else prev + term
    return OperatorPolynomial._from_raw(n, out)


def commutator(A: OperatorPolynomial, B: OperatorPolynomial) -> OperatorPolynomial:
    return op_product(A, B) - op_product(B, A)


def adjoint(A: OperatorPolynomial) -> OperatorPolynomial:
    return A.adjoint()


def is_hermitian(A: OperatorPolynomial) -> bool:
    return A.is_hermitian()


def op_re_im(A: OperatorPolynomial) -> tuple[OperatorPolynomial, OperatorPolynomial]:
    """``((A + A*)/2, (A - A*)/(2i))``."""
    Ad = A.adjoint()
    return (A + Ad).scale(mpq(1, 2)), (A - Ad).scale(ExactComplex(0, mpq(-1, 2)))


# ---------------------------------------------------------------------------
# Weyl symmetrization


@lru_cache(maxsize=None)
def _weyl_mode(a: int, b: int) -> tuple[tuple[int, mpq], ...]:
    """Symmetrized ``zhat^a zhat*^b`` = ``sum_k C(a,k) C(b,k) k! 2^-k zhat*^(b-k) zhat^(a-k)``."""
    return tuple((k, mpq(comb(a, k) * comb(b, k) * factorial(k), 2 ** k))
                 for k in range(min(a, b) + 1))


def weyl_symmetrize(p: Polynomial) -> OperatorPolynomial:
    """
    Weyl (fully symmetric) ordering of a classical polynomial, returned in
    normal order. Factorizes over modes since distinct modes commute.
    """
    n = p.n
    out: dict = {}
    get = out.get
    for key, c in p.terms.items():
        per_mode = [_weyl_mode(key[j], key[n + j]) for j in range(n)]
        for choice in product(*per_mode):
            nk = list(key)
            w = mpq(1)
            for j, (kk, wk) in enumerate(choice):
                if kk:
                    nk[j] -= kk
                    nk[n + j] -= kk
                    w *= wk
            nk = tuple(nk)
            term = c * w
            prev = get(nk)
            out[nk] = term if prev is None else prev + term
    return OperatorPolynomial._from_raw(n, out)


def weyl_bruteforce(p: Polynomial) -> OperatorPolynomial:
    """
    Oracle: average of all distinct orderings of each monomial's letters,
    multiplied out with :func:`op_product`. Exponential; for tests.
    """
    n = p.n
    total = OperatorPolynomial.zero(n)
    for key, c in p.terms.items():
        counts = {}
        for j in range(n):
            if key[j]:
                counts[("a", j)] = key[j]
            if key[n + j]:
                counts[("c", j)] = key[n + j]
        letters = {("a", j): OperatorPolynomial.annihilator(n, j) for j in range(n)}
        letters.update({("c", j): OperatorPolynomial.creator(n, j) for j in range(n)})
        acc = [OperatorPolynomial.zero(n), 0]

        def dfs(prefix: OperatorPolynomial, remaining: dict):
            if not any(remaining.values()):
                acc[0] = acc[0] + prefix
                acc[1] += 1
                return
            for letter, cnt in remaining.items():
                if cnt:
                    remaining[letter] = cnt - 1
                    dfs(op_product(prefix, letters[letter]), remaining)
                    remaining[letter] = cnt

        dfs(OperatorPolynomial.constant(n, 1), counts)
        total = total + acc[0].scale(ExactComplex.coerce(c) * mpq(1, acc[1]))
    return total


# ---------------------------------------------------------------------------
# Moyal series


def _falling(x: int, k: int) -> int:
    out = 1
    for i in range(k):
        out *= x - i
    return out


def moyal_bracket(H: Polynomial, F: Polynomial) -> Polynomial:
    """
    Classical symbol ``G`` of ``[H^, F^]`` under Weyl ordering:

    ``G = sum_k sum_{|alpha+beta| = 2k+1} (-1)^|beta| / (2^(2k) alpha! beta!)
    d_z^alpha d_zbar^beta H * d_z^beta d_zbar^alpha F``.

    Evaluated monomial pair by monomial pair; multi-indices are bounded by
    the exponents, so the series terminates.
    """
    if H.n != F.n:
        raise ValueError("mode-count mismatch")
    n = H.n
    out: dict = {}
    get = out.get
    for k1, c1 in H.terms.items():
        a1, b1 = k1[:n], k1[n:]
        for k2, c2 in F.terms.items():
            a2, b2 = k2[:n], k2[n:]
            # per mode: (alpha_j, beta_j, weight)
            per_mode = []
            for j in range(n):
                opts = []
                for al in range(min(a1[j], b2[j]) + 1):
                    for be in range(min(b1[j], a2[j]) + 1):
                        w = (_falling(a1[j], al) * _falling(b1[j], be)
                             * _falling(a2[j], be) * _falling(b2[j], al))
                        opts.append((al, be, mpq(w, factorial(al) * factorial(be))))
                per_mode.append(opts)
            c = c1 * c2
            for choice in product(*per_mode):
                N = sum(al + be for al, be, _ in choice)
                if N % 2 == 0:
                    continue
                nbeta = sum(be for _, be, _ in choice)
                w = mpq(1, 2 ** (N - 1))
                if nbeta % 2:
                    w = -w
                key = list(map(add, k1, k2))
                for j, (al, be, wj) in enumerate(choice):
                    w *= wj
                    key[j] -= al + be
                    key[n + j] -= al + be
                key = tuple(key)
                term = c * w
                prev = get(key)
                out[key] = term if prev is None else prev + term
    return Polynomial._from_raw(n, out)


# ---------------------------------------------------------------------------
# quantized sets


def quantize_set(S: IntegrableSet) -> list[tuple[str, OperatorPolynomial]]:
    """Element-wise Weyl symmetrization."""
    return [(name, weyl_symmetrize(p)) for name, p in S.elements]


@lru_cache(maxsize=1)
def _exceptional_ops():
    from .setfactory import build_exceptional_set, exceptional_pieces
    S = build_exceptional_set()
    F1, F2, F3 = (weyl_symmetrize(p) for p in S.polys)
    x = exceptional_pieces()
    return F1, F2, F3, weyl_symmetrize(x["I1"]), weyl_symmetrize(x["D0"])


EXCEPTIONAL_CORRECTION = mpq(5, 4)


def quantize_exceptional() -> list[tuple[str, OperatorPolynomial]]:
    """``(F1^, F2^, F3^sym - (5/4) I1^)``: pairwise commuting."""
    F1, F2, F3, I1, _ = _exceptional_ops()
    return [("F1", F1), ("F2", F2), ("F3", F3 - I1.scale(EXCEPTIONAL_CORRECTION))]


def exceptional_anomaly() -> dict[str, OperatorPolynomial]:
    """Commutators behind the correction, with the expected right-hand sides."""
    F1, F2, F3, I1, D0 = _exceptional_ops()
    return {
        "[F2,F3sym]": commutator(F2, F3),
        "[F2,I1]": commutator(F2, I1),
        "(5/2)i D0": D0.scale(ExactComplex(0, mpq(5, 2))),
        "2i D0": D0.scale(ExactComplex(0, 2)),
    }


def commutator_audit(ops: Sequence[tuple[str, OperatorPolynomial]], k: int | None = None,
                     subject: str = "quantum", seed: int = 0):
    """All ``[A_i, A_j]`` with ``i < k`` (default: all pairs), as a report."""
    from .verify import FAIL, PASS, Check, VerificationReport
    k = len(ops) if k is None else k
    rep = VerificationReport(subject, seed)
    for i in range(k):
        for j in range(i + 1, len(ops)):
            c = commutator(ops[i][1], ops[j][1])
            rep.checks.append(Check(f"commutator:[{ops[i][0]},{ops[j][0]}]",
                                    FAIL if c else PASS, c))
    return rep


# ---------------------------------------------------------------------------
# equal-frequency operators


class QuantumEqualFreq:
    """Symmetrized ``w, P_ij, K_h, W_h, P_(h)^2`` for a partition."""

    def __init__(self, part: GroupPartition):
        obj = build_equal_freq_objects(part)
        self.part = part
        self.w = tuple(weyl_symmetrize(x) for x in obj.w)
        self.P = {ij: weyl_symmetrize(p) for ij, p in obj.P.items()}
        self.K = tuple(weyl_symmetrize(x) for x in obj.K)
        self.W = tuple(weyl_symmetrize(x) for x in obj.W)
        self.P2 = tuple(weyl_symmetrize(x) for x in obj.P2)

    def R_m(self, m: Sequence[int]) -> OperatorPolynomial:
        """``prod_h Omega^_h^{m_h}``, Omega = W^ or its adjoint; the factors commute."""
        out = OperatorPolynomial.constant(self.part.n, 1)
        for Wh, mh in zip(self.W, m):
            base = Wh if mh >= 0 else Wh.adjoint()
            for _ in range(abs(mh)):
                out = op_product(out, base)
        return out

    def im_R_m(self, m: Sequence[int]) -> OperatorPolynomial:
        return op_re_im(self.R_m(m))[1]


def symmetrize_all(polys: Iterable[Polynomial]) -> list[OperatorPolynomial]:
    return [weyl_symmetrize(p) for p in polys]


__all__ = [
    "OperatorPolynomial", "op_product", "commutator", "adjoint", "is_hermitian", "op_re_im",
    "weyl_symmetrize", "weyl_bruteforce", "moyal_bracket", "quantize_set",
    "quantize_exceptional", "exceptional_anomaly", "commutator_audit", "QuantumEqualFreq",
    "symmetrize_all", "EXCEPTIONAL_CORRECTION",
]
