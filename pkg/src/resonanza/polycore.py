"""
Classical observables
---------------------

Sparse polynomials in ``z_1..z_n, zbar_1..zbar_n`` with exact coefficients,
and the canonical structure ``{z_i, zbar_j} = i delta_ij``.

A term is stored under the exponent key ``(a_1..a_n, b_1..b_n)`` of the
monomial ``z^a zbar^b``; the key order is the canonical (serialization)
order.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from operator import add
from typing import Iterable, Mapping, NamedTuple, Sequence

from gmpy2 import mpq

from .exact import ONE, ZERO, ExactComplex, I
from .linalg import rank as exact_rank

_HALF = mpq(1, 2)


class Monomial(NamedTuple):
    """``z^a zbar^b``."""

    a: tuple[int, ...]
    b: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.a)

    @property
    def degree(self) -> int:
        return sum(self.a) + sum(self.b)

    @property
    def key(self) -> tuple[int, ...]:
        return tuple(self.a) + tuple(self.b)

    @classmethod
    def from_key(cls, key: Sequence[int]) -> "Monomial":
        n = len(key) // 2
        return cls(tuple(key[:n]), tuple(key[n:]))


class Polynomial:
    """
    Exact sparse polynomial in ``(z, zbar)``.

    Values are treated as immutable; all operations return new objects.

    Parameters
    ----------
    n : int
        Number of modes.
    terms : mapping, optional
        Exponent key (length ``2n`` tuple) or :class:`Monomial` to
        coefficient. Zero coefficients are dropped.
    """

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping | None = None):
        self.n = n
        clean = {}
        for key, c in (terms or {}).items():
            if isinstance(key, Monomial):
                key = key.key
            key = tuple(int(e) for e in key)
            if len(key) != 2 * n or min(key, default=0) < 0:
                raise ValueError(f"bad exponent key {key} for n={n}")
            c = ExactComplex.coerce(c)
            if c:
                clean[key] = clean[key] + c if key in clean else c
        self.terms = {k: v for k, v in clean.items() if v}

    @classmethod
    def _from_raw(cls, n: int, terms: dict) -> "Polynomial":
        obj = object.__new__(cls)
        obj.n = n
        obj.terms = {k: v for k, v in terms.items() if v}
        return obj

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> "Polynomial":
        return cls._from_raw(n, {})

    @classmethod
    def constant(cls, n: int, c=1) -> "Polynomial":
        return cls._from_raw(n, {(0,) * (2 * n): ExactComplex.coerce(c)})

    @classmethod
    def monomial(cls, a: Sequence[int], b: Sequence[int], c=1) -> "Polynomial":
        if len(a) != len(b):
            raise ValueError("a and b must have equal length")
        return cls(len(a), {tuple(a) + tuple(b): c})

    @classmethod
    def z(cls, n: int, j: int) -> "Polynomial":
        """``z_j`` (0-based mode index)."""
        key = [0] * (2 * n)
        key[j] = 1
        return cls._from_raw(n, {tuple(key): ONE})

    @classmethod
    def zbar(cls, n: int, j: int) -> "Polynomial":
        key = [0] * (2 * n)
        key[n + j] = 1
        return cls._from_raw(n, {tuple(key): ONE})

    @classmethod
    def action(cls, n: int, j: int) -> "Polynomial":
        """``I_j = z_j zbar_j``."""
        key = [0] * (2 * n)
        key[j] = key[n + j] = 1
        return cls._from_raw(n, {tuple(key): ONE})

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(k) for k in self.terms), default=-1)

    def coeff(self, a: Sequence[int], b: Sequence[int]) -> ExactComplex:
        return self.terms.get(tuple(a) + tuple(b), ZERO)

    def monomials(self) -> list[Monomial]:
        return [Monomial.from_key(k) for k in sorted(self.terms)]

    def items(self):
        """Terms in canonical order."""
        return sorted(self.terms.items())

    def is_real(self) -> bool:
        """``coeff(a, b) == conj(coeff(b, a))`` for all terms."""
        n = self.n
        for key, c in self.terms.items():
            swapped = key[n:] + key[:n]
            if self.terms.get(swapped, ZERO) != c.conjugate():
                return False
        return True

    def has_sqrt2(self) -> bool:
        return any(c.has_sqrt2 for c in self.terms.values())

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: "Polynomial"):
        if other.n != self.n:
            raise ValueError(f"mode-count mismatch: {self.n} vs {other.n}")

    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return Polynomial.constant(self.n, other)

    def __add__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return Polynomial._from_raw(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._from_raw(self.n, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Polynomial":
        c = ExactComplex.coerce(c)
        if not c:
            return Polynomial.zero(self.n)
        return Polynomial._from_raw(self.n, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        self._check(other)
        out: dict = {}
        get = out.get
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = tuple(map(add, k1, k2))
                c = c1 * c2
                prev = get(k)
                out[k] = c if prev is None else prev + c
        return Polynomial._from_raw(self.n, out)

    def __rmul__(self, other):
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __truediv__(self, other):
        c = ExactComplex.coerce(other)
        return self.scale(c.inverse())

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("nonnegative integer power required")
        out = Polynomial.constant(self.n, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def conjugate(self) -> "Polynomial":
        n = self.n
        return Polynomial._from_raw(
            n, {k[n:] + k[:n]: c.conjugate() for k, c in self.terms.items()})

    def diff(self, j: int, bar: bool = False) -> "Polynomial":
        """Derivative with respect to ``z_j`` (or ``zbar_j`` if ``bar``)."""
        idx = j + self.n if bar else j
        out = {}
        for k, c in self.terms.items():
            e = k[idx]
            if e:
                nk = list(k)
                nk[idx] = e - 1
                out[tuple(nk)] = c * e
        return Polynomial._from_raw(self.n, out)

    # -- comparison --------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.n == other.n and self.terms == other.terms
        try:
            return self == Polynomial.constant(self.n, other)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        n = self.n
        return {"n": n, "terms": [{"a": list(k[:n]), "b": list(k[n:]), **c.fields()}
                                  for k, c in self.items()]}

    @classmethod
    def from_dict(cls, d: Mapping) -> "Polynomial":
        n = int(d["n"])
        terms = {}
        for t in d["terms"]:
            key = tuple(t["a"]) + tuple(t["b"])
            terms[key] = ExactComplex.from_fields(t)
        return cls(n, terms)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_json(cls, s: str) -> "Polynomial":
        return cls.from_dict(json.loads(s))

    def __repr__(self):
        if not self.terms:
            return "Polynomial(0)"
        return f"Polynomial({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        n = self.n
        parts = []
        for k, c in self.items():
            factors = []
            for j in range(n):
                for e, name in ((k[j], f"z{j + 1}"), (k[n + j], f"zb{j + 1}")):
                    if e == 1:
                        factors.append(name)
                    elif e > 1:
                        factors.append(f"{name}^{e}")
            mono = "*".join(factors)
            coef = str(c)
            if " " in coef:
                coef = f"({coef})"
            if not mono:
                parts.append(coef)
            elif c == ONE:
                parts.append(mono)
            else:
                parts.append(f"{coef}*{mono}")
        return " + ".join(parts)


# ---------------------------------------------------------------------------
# module-level operations


def conjugate(p: Polynomial) -> Polynomial:
    """Complex conjugation: ``z^a zbar^b -> z^b zbar^a`` with conjugated coefficients."""
    return p.conjugate()


def poisson_bracket(p: Polynomial, q: Polynomial) -> Polynomial:
    """
    ``{p, q} = i * sum_j (dp/dz_j dq/dzbar_j - dp/dzbar_j dq/dz_j)``.

    Both products of a term pair land on the same monomial, so each pair
    contributes once with weight ``a1_j*b2_j - b1_j*a2_j``.
    """
    if p.n != q.n:
        raise ValueError(f"mode-count mismatch: {p.n} vs {q.n}")
    n = p.n
    out: dict = {}
    get = out.get
    for k1, c1 in p.terms.items():
        for k2, c2 in q.terms.items():
            base = None
            cc = None
            for j in range(n):
                w = k1[j] * k2[n + j] - k1[n + j] * k2[j]
                if not w:
                    continue
                if base is None:
                    base = list(map(add, k1, k2))
                    cc = c1 * c2 * I
                key = base.copy()
                key[j] -= 1
                key[n + j] -= 1
                key = tuple(key)
                c = cc * w
                prev = get(key)
                out[key] = c if prev is None else prev + c
    return Polynomial._from_raw(n, out)


def re_im(p: Polynomial) -> tuple[Polynomial, Polynomial]:
    """``(Re p, Im p)`` with ``Re p = (p + p*)/2`` and ``Im p = (p - p*)/(2i)``."""
    pc = p.conjugate()
    re = (p + pc).scale(_HALF)
    im = (p - pc) * ExactComplex._raw(mpq(0), -_HALF)
    return re, im


def real_part(p: Polynomial) -> Polynomial:
    return re_im(p)[0]


def imag_part(p: Polynomial) -> Polynomial:
    return re_im(p)[1]


@dataclass(frozen=True)
class RationalPoint:
    """Values of ``z_1..z_n``; ``zbar`` is implied by conjugation."""

    z: tuple[ExactComplex, ...]

    def __post_init__(self):
        object.__setattr__(self, "z", tuple(ExactComplex.coerce(v) for v in self.z))

    @property
    def n(self) -> int:
        return len(self.z)

    @classmethod
    def random(cls, n: int, rng: random.Random, bound: int = 97) -> "RationalPoint":
        def draw():
            return rng.choice((-1, 1)) * mpq(rng.randint(1, bound), rng.randint(1, bound))
        return cls(tuple(ExactComplex._raw(draw(), draw()) for _ in range(n)))


def _power_table(vals: Sequence[ExactComplex], maxdeg: Sequence[int]):
    table = []
    for v, d in zip(vals, maxdeg):
        pw = [ONE]
        for _ in range(d):
            pw.append(pw[-1] * v)
        table.append(pw)
    return table


def evaluate(p: Polynomial, pt: RationalPoint | Sequence) -> ExactComplex:
    """Exact value of ``p`` at ``z = pt``, ``zbar = conj(pt)``."""
    if not isinstance(pt, RationalPoint):
        pt = RationalPoint(tuple(pt))
    if pt.n != p.n:
        raise ValueError(f"point has {pt.n} coordinates, polynomial has {p.n} modes")
    if not p.terms:
        return ZERO
    n = p.n
    vals = list(pt.z) + [v.conjugate() for v in pt.z]
    maxdeg = [max(k[i] for k in p.terms) for i in range(2 * n)]
    table = _power_table(vals, maxdeg)
    total = ZERO
    for k, c in p.terms.items():
        term = c
        for i, e in enumerate(k):
            if e:
                term = term * table[i][e]
        total = total + term
    return total


def jacobian_rank(ps: Sequence[Polynomial], trials: int = 5, seed: int = 0,
                  bound: int = 97) -> int:
    """
    Generic-point rank of the Jacobian of ``(Re p, Im p for p in ps)``.

    Derivatives are taken in ``(z, zbar)``, which differ from the real
    coordinates ``(x, p)`` by an invertible linear change and so give the
    same rank. Rows are evaluated exactly at ``trials`` pseudo-random
    rational points and the maximum rank is returned.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    ps = list(ps)
    if not ps:
        return 0
    n = ps[0].n
    rows: list[Polynomial] = []
    for p in ps:
        if p.n != n:
            raise ValueError("mode-count mismatch")
        re, im = re_im(p)
        rows.extend(r for r in (re, im) if r)
    if not rows:
        return 0
    grads = [[r.diff(j, bar) for bar in (False, True) for j in range(n)] for r in rows]
    rng = random.Random(seed)
    best = 0
    full = min(len(rows), 2 * n)
    for _ in range(trials):
        pt = RationalPoint.random(n, rng, bound)
        mat = [[evaluate(g, pt) for g in row] for row in grads]
        best = max(best, exact_rank(mat))
        if best == full:
            break
    return best


def substitute(p: Polynomial, images: Sequence[Polynomial]) -> Polynomial:
    """
    Replace ``z_j`` by ``images[j]`` and ``zbar_j`` by its conjugate.

    Used for linear canonical transforms; images may live on a different
    number of modes than ``p``.
    """
    if len(images) != p.n:
        raise ValueError("one image per mode required")
    n = p.n
    m = images[0].n
    bars = [q.conjugate() for q in images]
    cache: dict = {}

    def power(i: int, e: int) -> Polynomial:
        key = (i, e)
        if key not in cache:
            base = images[i] if i < n else bars[i - n]
            cache[key] = base ** e
        return cache[key]

    total = Polynomial.zero(m)
    for k, c in p.terms.items():
        term = Polynomial.constant(m, c)
        for i, e in enumerate(k):
            if e:
                term = term * power(i, e)
        total = total + term
    return total


def action_variables(n: int) -> list[Polynomial]:
    return [Polynomial.action(n, j) for j in range(n)]


def linear_combination(coeffs: Iterable, polys: Iterable[Polynomial], n: int) -> Polynomial:
    total = Polynomial.zero(n)
    for c, p in zip(coeffs, polys):
        if c:
            total = total + p.scale(c)
    return total
