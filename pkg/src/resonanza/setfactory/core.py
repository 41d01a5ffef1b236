"""Integrable sets built from the resonance condition alone."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from math import gcd
from typing import Mapping, Sequence

from gmpy2 import mpq

from ..exact import ExactComplex
from ..linalg import integer_nullspace, integer_rank
from ..polycore import Polynomial, re_im


class PreconditionError(ValueError):
    """A constructor's input violates a stated precondition."""


def normalize_frequencies(l: Sequence[int]) -> tuple[int, ...]:
    """Validate a frequency vector (no zero entries) and divide out the gcd."""
    l = tuple(int(x) for x in l)
    if not l:
        raise PreconditionError("frequency vector is empty")
    if any(x == 0 for x in l):
        raise PreconditionError(f"frequency vector {l} has a zero entry")
    g = 0
    for x in l:
        g = gcd(g, abs(x))
    return tuple(x // g for x in l)


def dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, v))


@dataclass(frozen=True)
class IntegrableSet:
    """
    Named polynomials whose first ``k`` elements are central.

    ``metadata`` records how the set was built (vectors, partition, ...).
    """

    name: str
    l: tuple[int, ...]
    elements: tuple[tuple[str, Polynomial], ...]
    k: int
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not 0 <= self.k <= len(self.elements):
            raise ValueError(f"central count {self.k} out of range")

    @property
    def n(self) -> int:
        return len(self.l)

    @property
    def polys(self) -> list[Polynomial]:
        return [p for _, p in self.elements]

    @property
    def names(self) -> list[str]:
        return [nm for nm, _ in self.elements]

    @property
    def central(self) -> list[Polynomial]:
        return self.polys[: self.k]

    def __len__(self):
        return len(self.elements)

    def __getitem__(self, i) -> Polynomial:
        return self.elements[i][1]

    def replace(self, index: int, poly: Polynomial, name: str | None = None,
                **meta) -> "IntegrableSet":
        elems = list(self.elements)
        elems[index] = (name or elems[index][0], poly)
        return IntegrableSet(self.name, self.l, tuple(elems), self.k,
                             {**self.metadata, **meta})

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "l": list(self.l),
            "k": self.k,
            "elements": [{"name": nm, "poly": p.to_dict()} for nm, p in self.elements],
            "metadata": _jsonable(self.metadata),
        }

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps(self.to_dict(), indent=indent, sort_keys=True)

    @classmethod
    def from_dict(cls, d: Mapping) -> "IntegrableSet":
        elems = tuple((e["name"], Polynomial.from_dict(e["poly"])) for e in d["elements"])
        return cls(d["name"], tuple(d["l"]), elems, int(d["k"]), dict(d.get("metadata", {})))

    @classmethod
    def from_json(cls, s: str) -> "IntegrableSet":
        return cls.from_dict(json.loads(s))


def _jsonable(obj):
    if isinstance(obj, Mapping):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, int, str, float)) or obj is None:
        return obj
    if type(obj) is type(mpq(0)):
        return f"{obj.numerator}/{obj.denominator}"
    return str(obj)


# ---------------------------------------------------------------------------
# elementary building blocks


def build_R_m(n: int, m: Sequence[int]) -> Polynomial:
    """``prod_j zeta_j^{m_j}`` with ``zeta^m = z^m`` for m >= 0 and ``zbar^{-m}`` otherwise."""
    if len(m) != n:
        raise PreconditionError(f"m has length {len(m)}, expected {n}")
    a = tuple(max(x, 0) for x in m)
    b = tuple(max(-x, 0) for x in m)
    return Polynomial.monomial(a, b)


def build_J_r(n: int, r: Sequence[int]) -> Polynomial:
    """``sum_j r_j I_j``."""
    if len(r) != n:
        raise PreconditionError(f"r has length {len(r)}, expected {n}")
    return Polynomial(n, {tuple(int(j == i) for j in range(n)) * 2: c
                          for i, c in enumerate(r) if c})


def im_R_m(n: int, m: Sequence[int]) -> Polynomial:
    return re_im(build_R_m(n, m))[1]


def re_R_m(n: int, m: Sequence[int]) -> Polynomial:
    return re_im(build_R_m(n, m))[0]


def rij_vector(l: Sequence[int], i: int, j: int) -> tuple[int, ...]:
    """
    Exponent vector m with ``R_ij = Im R_m``: ``Im(z_i^{|l_j|} zbar_j^{|l_i|})``
    for same-sign frequencies and ``Im(z_i^{|l_j|} z_j^{|l_i|})`` otherwise,
    after dividing out the common divisor of ``l_i`` and ``l_j``.
    """
    n = len(l)
    d = gcd(abs(l[i]), abs(l[j]))
    li, lj = abs(l[i]) // d, abs(l[j]) // d
    m = [0] * n
    m[i] = lj
    m[j] = -li if l[i] * l[j] > 0 else li
    return tuple(m)


def resonance_basis(l: Sequence[int], d: int, include_constant: bool = True
                    ) -> list[tuple[str, Polynomial]]:
    """
    Real basis ``Re P_ab, Im P_ab`` of polynomials of degree <= d commuting
    with ``F_1 = sum l_j I_j``: all (a, b) with ``l.(a - b) == 0``.

    Each conjugate pair {(a,b), (b,a)} is represented once, by the key that
    is lexicographically smaller on the concatenation ``a + b``.
    """
    l = tuple(int(x) for x in l)
    n = len(l)
    if d < 0:
        raise PreconditionError("degree must be >= 0")
    out = []
    for deg in range(0 if include_constant else 1, d + 1):
        for key in _exponent_keys(2 * n, deg):
            a, b = key[:n], key[n:]
            if dot(l, a) != dot(l, b):
                continue
            swapped = b + a
            if swapped < key:
                continue
            p = Polynomial.monomial(a, b)
            tag = _mono_name(a, b)
            if swapped == key:
                out.append((tag, p))
            else:
                re, im = re_im(p)
                out.append((f"Re({tag})", re))
                out.append((f"Im({tag})", im))
    return out


def _exponent_keys(nvars: int, deg: int):
    """All exponent tuples of length nvars with total ``deg``, in lex order descending."""
    if nvars == 1:
        yield (deg,)
        return
    for first in range(deg, -1, -1):
        for rest in _exponent_keys(nvars - 1, deg - first):
            yield (first,) + rest


def _mono_name(a, b) -> str:
    parts = []
    for j, (x, y) in enumerate(zip(a, b)):
        for e, nm in ((x, f"z{j + 1}"), (y, f"zb{j + 1}")):
            if e == 1:
                parts.append(nm)
            elif e > 1:
                parts.append(f"{nm}^{e}")
    return "*".join(parts) or "1"


# ---------------------------------------------------------------------------
# general sets


def _check_independent(vectors, what: str):
    if vectors and integer_rank(vectors) < len(vectors):
        raise PreconditionError(f"{what} vectors are linearly dependent")


def _check_orthogonal(rs, ms, r_label, m_label):
    for i, r in enumerate(rs):
        for j, m in enumerate(ms):
            if dot(r, m):
                raise PreconditionError(
                    f"{r_label}{i + 1}.{m_label}{j + 1} = {dot(r, m)} != 0 "
                    f"(r={list(r)}, m={list(m)})")


def _check_disjoint(ms, first: int, count: int):
    """m^(i)_p m^(j)_p == 0 for i < count, j < first, i != j."""
    for i in range(count):
        for j in range(first):
            if i == j:
                continue
            if any(x * y for x, y in zip(ms[i], ms[j])):
                raise PreconditionError(
                    f"m{i + 1} and m{j + 1} have overlapping support "
                    f"({list(ms[i])}, {list(ms[j])})")


def build_general_set(l: Sequence[int], r_vectors: Sequence[Sequence[int]] | None = None,
                      m_vectors: Sequence[Sequence[int]] | None = None, k: int | None = None,
                      *, variant: str = "standard", k_prime: int | None = None,
                      h: int | None = None, bound: int = 1) -> IntegrableSet:
    """
    Integrable set ``(J_r1..J_rn, Im R_m1..Im R_m(n-k))`` with ``k`` central
    elements, or with ``variant="mixed"`` the set ``(J1, R1; J2, R2)`` whose
    central part contains ``k_prime`` functions ``Im R_m``.

    When ``r_vectors``/``m_vectors`` are omitted a small admissible choice
    is searched (standard variant only), entries bounded by ``bound`` where
    possible.
    """
    l = normalize_frequencies(l)
    n = len(l)
    if variant == "standard":
        if k is None:
            raise PreconditionError("k is required for the standard variant")
        if not 1 <= k <= n:
            raise PreconditionError(f"k={k} outside 1..{n}")
        if r_vectors is None or m_vectors is None:
            r_auto, m_auto = search_vectors(l, k, bound=bound)
            r_vectors = r_vectors if r_vectors is not None else r_auto
            m_vectors = m_vectors if m_vectors is not None else m_auto
        rs = [tuple(int(x) for x in r) for r in r_vectors]
        ms = [tuple(int(x) for x in m) for m in m_vectors]
        if len(rs) != n:
            raise PreconditionError(f"need {n} r-vectors, got {len(rs)}")
        if len(ms) != n - k:
            raise PreconditionError(f"need {n - k} m-vectors, got {len(ms)}")
        if any(len(v) != n for v in rs + ms):
            raise PreconditionError("vector length mismatch")
        if rs[0] != l:
            raise PreconditionError(f"r1 must equal l={list(l)}")
        _check_independent(rs, "r")
        _check_independent(ms, "m")
        _check_orthogonal(rs[:k], ms, "r", "m")
        elems = [(_j_name(i), build_J_r(n, r)) for i, r in enumerate(rs)]
        elems[0] = ("F1", elems[0][1])
        elems += [(f"ImR_m{j + 1}", im_R_m(n, m)) for j, m in enumerate(ms)]
        meta = {"family": "general", "variant": "standard",
                "r_vectors": [list(r) for r in rs], "m_vectors": [list(m) for m in ms]}
        return IntegrableSet(f"general_k{k}", l, tuple(elems), k, meta)

    if variant != "mixed":
        raise PreconditionError(f"unknown variant {variant!r}")
    if k_prime is None or h is None:
        raise PreconditionError("mixed variant requires k_prime and h")
    if r_vectors is None or m_vectors is None:
        raise PreconditionError("mixed variant requires explicit r and m vectors")
    rs = [tuple(int(x) for x in r) for r in r_vectors]
    ms = [tuple(int(x) for x in m) for m in m_vectors]
    if not 1 <= k_prime <= h:
        raise PreconditionError(f"need 1 <= k'={k_prime} <= h={h}")
    if 2 * k_prime > n:
        raise PreconditionError(f"k'={k_prime} exceeds n/2")
    if len(ms) != h:
        raise PreconditionError(f"need h={h} m-vectors, got {len(ms)}")
    if len(rs) != n - k_prime:
        raise PreconditionError(f"need n-k'={n - k_prime} r-vectors, got {len(rs)}")
    if any(len(v) != n for v in rs + ms):
        raise PreconditionError("vector length mismatch")
    if rs[0] != l:
        raise PreconditionError(f"r1 must equal l={list(l)}")
    for j, m in enumerate(ms):
        if dot(m, l):
            raise PreconditionError(f"m{j + 1}.l = {dot(m, l)} != 0")
    _check_independent(ms, "m")
    _check_independent(rs, "r")
    _check_disjoint(ms, k_prime, h)
    _check_orthogonal(rs, ms[:k_prime], "r", "m")
    _check_orthogonal(rs[: n - h], ms[k_prime:], "r", "m")
    kk = n - h + k_prime
    if k is not None and k != kk:
        raise PreconditionError(f"k={k} inconsistent with n-h+k'={kk}")
    j1 = [(_j_name(i), build_J_r(n, r)) for i, r in enumerate(rs[: n - h])]
    j1[0] = ("F1", j1[0][1])
    j2 = [(_j_name(i + n - h), build_J_r(n, r)) for i, r in enumerate(rs[n - h:])]
    r1 = [(f"ImR_m{j + 1}", im_R_m(n, m)) for j, m in enumerate(ms[:k_prime])]
    r2 = [(f"ImR_m{j + 1 + k_prime}", im_R_m(n, m)) for j, m in enumerate(ms[k_prime:])]
    meta = {"family": "general", "variant": "mixed", "k_prime": k_prime, "h": h,
            "r_vectors": [list(r) for r in rs], "m_vectors": [list(m) for m in ms]}
    return IntegrableSet(f"general_mixed_k{kk}", l, tuple(j1 + r1 + j2 + r2), kk, meta)


def _j_name(i: int) -> str:
    return f"J_r{i + 1}"


def build_rij_set(l: Sequence[int]) -> IntegrableSet:
    """``(F1, I_2..I_n, R_12..R_1n)``, the k = 1 set built on mode 1."""
    l = normalize_frequencies(l)
    n = len(l)
    rs = [l] + [tuple(int(i == j) for i in range(n)) for j in range(1, n)]
    ms = [rij_vector(l, 0, j) for j in range(1, n)]
    s = build_general_set(l, rs, ms, 1)
    names = ["F1"] + [f"I{j + 1}" for j in range(1, n)] + [f"R1{j + 1}" for j in range(1, n)]
    elems = tuple((nm, p) for nm, (_, p) in zip(names, s.elements))
    return IntegrableSet("rij", l, elems, 1, {**s.metadata, "family": "rij"})


def build_trivial_set(l: Sequence[int]) -> IntegrableSet:
    """``(F1, I_2, ..., I_n)`` with every element central."""
    l = normalize_frequencies(l)
    n = len(l)
    elems = [("F1", build_J_r(n, l))] + [(f"I{j + 1}", Polynomial.action(n, j))
                                          for j in range(1, n)]
    return IntegrableSet("trivial", l, tuple(elems), n, {"family": "trivial"})


def _small_vectors(n: int, bound: int):
    vecs = [v for v in itertools.product(range(-bound, bound + 1), repeat=n) if any(v)]
    vecs.sort(key=lambda v: (sum(map(abs, v)), [-x for x in v]))
    return vecs


def search_vectors(l: Sequence[int], k: int, bound: int = 1
                   ) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]]]:
    """
    Admissible ``(r_vectors, m_vectors)`` for :func:`build_general_set`.

    Central r's beyond ``l`` and the completing r's are picked greedily from
    small integer vectors (entries in ``[-bound, bound]``); m's span the
    integer nullspace of the central r's, taken from the same pool when it
    suffices and from an exact nullspace basis otherwise.
    """
    l = normalize_frequencies(l)
    n = len(l)
    pool = _small_vectors(n, bound)
    rs = [l]
    for v in pool:
        if len(rs) == k:
            break
        if integer_rank(rs + [v]) == len(rs) + 1:
            rs.append(v)
    if len(rs) < k:
        raise PreconditionError("no admissible central r-vectors within bound")
    ms: list[tuple[int, ...]] = []
    for v in pool:
        if len(ms) == n - k:
            break
        if all(dot(r, v) == 0 for r in rs) and integer_rank(ms + [v]) == len(ms) + 1:
            ms.append(v)
    if len(ms) < n - k:
        ms = [tuple(v) for v in integer_nullspace(rs, n)]
    full = list(rs)
    for v in pool:
        if len(full) == n:
            break
        if integer_rank(full + [v]) == len(full) + 1:
            full.append(v)
    return full, ms


def compose_hamiltonian(central: Sequence[Polynomial], f: Mapping[Sequence[int], object]
                        ) -> Polynomial:
    """
    ``f(central)`` for a polynomial ``f`` given as ``{exponents: coefficient}``
    in ``len(central)`` abstract variables.
    """
    central = list(central)
    if not central:
        raise PreconditionError("no central elements")
    n = central[0].n
    total = Polynomial.zero(n)
    cache: dict = {}
    for exps, c in f.items():
        exps = tuple(exps)
        if len(exps) != len(central):
            raise PreconditionError(
                f"f has arity {len(exps)}, central set has {len(central)} elements")
        term = Polynomial.constant(n, ExactComplex.coerce(c))
        for i, e in enumerate(exps):
            if e:
                if (i, e) not in cache:
                    cache[(i, e)] = central[i] ** e
                term = term * cache[(i, e)]
        total = total + term
    return total
