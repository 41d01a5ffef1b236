"""
Sets exploiting groups of frequencies with a common absolute value.

Within a group the variables ``w_i`` (``z_i`` or ``zbar_i`` by sign) carry
an so(q)-like family of momenta ``P_ij``; across groups the sums
``K_h`` and ``W_h`` play the role of ``I_j`` and ``z_j``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..exact import I
from ..polycore import Polynomial, re_im
from .core import (IntegrableSet, PreconditionError, _check_disjoint, _check_independent,
                   _check_orthogonal, dot, normalize_frequencies)


@dataclass(frozen=True)
class GroupPartition:
    """
    ``l_i = eps_i * s_h`` for ``p_{h-1} < i <= p_h``.

    ``boundaries`` is ``(p_0=0, p_1, ..., p_u=n)``.
    """

    boundaries: tuple[int, ...]
    magnitudes: tuple[int, ...]
    signs: tuple[int, ...]

    def __post_init__(self):
        b = self.boundaries
        if b[0] != 0 or any(x >= y for x, y in zip(b, b[1:])):
            raise PreconditionError(f"boundaries {b} must increase from 0")
        if len(self.magnitudes) != len(b) - 1:
            raise PreconditionError("one magnitude per group required")
        if any(s <= 0 for s in self.magnitudes):
            raise PreconditionError("magnitudes must be positive")
        if len(self.signs) != b[-1] or any(e not in (1, -1) for e in self.signs):
            raise PreconditionError("signs must be +-1, one per mode")

    @classmethod
    def from_frequencies(cls, l: Sequence[int], sizes: Sequence[int] | None = None
                         ) -> "GroupPartition":
        """
        Partition of ``l`` into consecutive groups of the given sizes
        (default: maximal runs of equal absolute value).
        """
        l = tuple(int(x) for x in l)
        if any(x == 0 for x in l):
            raise PreconditionError(f"frequency vector {l} has a zero entry")
        if sizes is None:
            sizes = []
            for i, x in enumerate(l):
                if i and abs(x) == abs(l[i - 1]):
                    sizes[-1] += 1
                else:
                    sizes.append(1)
        if sum(sizes) != len(l) or any(q < 1 for q in sizes):
            raise PreconditionError(f"group sizes {list(sizes)} do not cover n={len(l)}")
        bounds = [0]
        for q in sizes:
            bounds.append(bounds[-1] + q)
        mags = []
        for lo, hi in zip(bounds, bounds[1:]):
            vals = {abs(x) for x in l[lo:hi]}
            if len(vals) != 1:
                raise PreconditionError(f"group {l[lo:hi]} mixes absolute values")
            mags.append(vals.pop())
        signs = tuple(1 if x > 0 else -1 for x in l)
        return cls(tuple(bounds), tuple(mags), signs)

    @property
    def n(self) -> int:
        return self.boundaries[-1]

    @property
    def u(self) -> int:
        return len(self.magnitudes)

    @property
    def sizes(self) -> tuple[int, ...]:
        b = self.boundaries
        return tuple(y - x for x, y in zip(b, b[1:]))

    def group(self, h: int) -> range:
        return range(self.boundaries[h], self.boundaries[h + 1])

    @property
    def frequencies(self) -> tuple[int, ...]:
        out = []
        for h in range(self.u):
            out += [self.signs[i] * self.magnitudes[h] for i in self.group(h)]
        return tuple(out)


@dataclass(frozen=True)
class EqualFreqObjects:
    w: tuple[Polynomial, ...]
    P: dict            # (i, j) with i < j -> P_ij
    K: tuple[Polynomial, ...]
    W: tuple[Polynomial, ...]
    P2: tuple[Polynomial, ...]

    def momentum(self, i: int, j: int) -> Polynomial:
        if i == j:
            return Polynomial.zero(self.w[0].n)
        return self.P[(i, j)] if i < j else -self.P[(j, i)]


def w_variables(signs: Sequence[int]) -> list[Polynomial]:
    n = len(signs)
    return [Polynomial.z(n, i) if e > 0 else Polynomial.zbar(n, i) for i, e in enumerate(signs)]


def momentum_P(w: Sequence[Polynomial], i: int, j: int) -> Polynomial:
    """``P_ij = i (w_i wbar_j - w_j wbar_i)``."""
    return (w[i] * w[j].conjugate() - w[j] * w[i].conjugate()) * I


def build_equal_freq_objects(part: GroupPartition) -> EqualFreqObjects:
    n = part.n
    eps = part.signs
    w = w_variables(eps)
    P = {(i, j): momentum_P(w, i, j) for i in range(n) for j in range(i + 1, n)}
    K, W, P2 = [], [], []
    for h in range(part.u):
        idx = list(part.group(h))
        K.append(sum((Polynomial.action(n, i).scale(eps[i]) for i in idx), Polynomial.zero(n)))
        W.append(sum(((w[i] * w[i]).scale(eps[i]) for i in idx), Polynomial.zero(n)))
        P2.append(sum(((P[(i, j)] * P[(i, j)]).scale(eps[i] * eps[j])
                       for i in idx for j in idx if i < j), Polynomial.zero(n)))
    return EqualFreqObjects(tuple(w), P, tuple(K), tuple(W), tuple(P2))


def nested_casimir(P: dict, eps: Sequence[int], idx: Sequence[int], j: int) -> Polynomial:
    """``C_j = sum_{i < i' <= j} eps_i eps_i' P_{ii'}^2`` over the first j indices of ``idx``."""
    sel = list(idx)[:j]
    n = next(iter(P.values())).n
    total = Polynomial.zero(n)
    for a, i in enumerate(sel):
        for i2 in sel[a + 1:]:
            p = P[(i, i2)]
            total = total + (p * p).scale(eps[i] * eps[i2])
    return total


def build_ZL(q: int, z: int, eps: Sequence[int] | None = None, *, P: dict | None = None,
             idx: Sequence[int] | None = None
             ) -> tuple[list[tuple[str, Polynomial]], list[tuple[str, Polynomial]]]:
    """
    Commuting family ``Z`` (z elements) and complement ``L`` (2(q-z-1)
    elements) built from the momenta of one group of size q.

    ``Z = (C_{q-z+1}, ..., C_q)`` and ``L = (C_2..C_{q-z}) + (P_13..P_1,q-z+1)``
    with nested Casimirs ``C_j``. By default the group occupies modes
    ``0..q-1`` of a q-mode space with signs ``eps``; pass ``P`` and ``idx``
    to build on a group inside a larger system.
    """
    if not 1 <= z <= q - 1:
        raise PreconditionError(f"z={z} outside 1..{q - 1}")
    if P is None:
        if eps is None:
            eps = (1,) * q
        if len(eps) != q:
            raise PreconditionError("one sign per mode required")
        w = w_variables(eps)
        P = {(i, j): momentum_P(w, i, j) for i in range(q) for j in range(i + 1, q)}
        idx = list(range(q))
        sign_of = list(eps)
    else:
        if idx is None or len(idx) != q:
            raise PreconditionError("idx must list the q mode indices of the group")
        if eps is None:
            raise PreconditionError("eps (signs of the full system) required with P")
        sign_of = list(eps)
    idx = list(idx)
    Z = [(f"C{j}", nested_casimir(P, sign_of, idx, j)) for j in range(q - z + 1, q + 1)]
    L = [(f"C{j}", nested_casimir(P, sign_of, idx, j)) for j in range(2, q - z + 1)]
    L += [(f"P{idx[0] + 1}{idx[j - 1] + 1}", P[(idx[0], idx[j - 1])])
          for j in range(3, q - z + 2)]
    return Z, L


def omega_R_m(W: Sequence[Polynomial], m: Sequence[int]) -> Polynomial:
    """``prod_h Omega_h^{m_h}`` with ``Omega^m = W^m`` (m >= 0) or ``Wbar^{-m}``."""
    n = W[0].n
    out = Polynomial.constant(n, 1)
    for Wh, e in zip(W, m):
        if e > 0:
            out = out * Wh ** e
        elif e < 0:
            out = out * Wh.conjugate() ** (-e)
    return out


def J_group(K: Sequence[Polynomial], r: Sequence[int]) -> Polynomial:
    """``sum_h r_h K_h``."""
    n = K[0].n
    total = Polynomial.zero(n)
    for Kh, c in zip(K, r):
        if c:
            total = total + Kh.scale(c)
    return total


def build_partition_set(part: GroupPartition, r_vectors: Sequence[Sequence[int]],
                        m_vectors: Sequence[Sequence[int]], z_list: Sequence[int],
                        k_prime: int, variant: str = "fset", h: int | None = None
                        ) -> IntegrableSet:
    """
    ``(J1, Z; J2, R, L)`` (``variant="fset"``) or
    ``(J1, R1, Z; J2, R2, L)`` (``variant="fset2"``, needs ``h``).

    ``z_list[g]`` is the central count chosen for group g (0 for singleton
    groups). r- and m-vectors have one entry per group.
    """
    u = part.u
    n = part.n
    s = tuple(part.magnitudes)
    sizes = part.sizes
    l = part.frequencies
    if normalize_frequencies(l) != l:
        raise PreconditionError(f"magnitudes {list(s)} share a common divisor")
    rs = [tuple(int(x) for x in r) for r in r_vectors]
    ms = [tuple(int(x) for x in m) for m in m_vectors]
    if any(len(v) != u for v in rs + ms):
        raise PreconditionError(f"r- and m-vectors must have length u={u}")
    if len(z_list) != u:
        raise PreconditionError(f"need one z per group ({u})")
    for g, (q, zg) in enumerate(zip(sizes, z_list)):
        if q == 1 and zg != 0:
            raise PreconditionError(f"group {g + 1} is a singleton; z must be 0")
        if q > 1 and not 1 <= zg <= q - 1:
            raise PreconditionError(f"group {g + 1}: z={zg} outside 1..{q - 1}")
    if not rs or rs[0] != s:
        raise PreconditionError(f"r1 must equal the magnitude vector s={list(s)}")
    obj = build_equal_freq_objects(part)
    eps = part.signs

    Z, L = [], []
    for g, (q, zg) in enumerate(zip(sizes, z_list)):
        if q == 1:
            continue
        zz, ll = build_ZL(q, zg, eps, P=obj.P, idx=list(part.group(g)))
        Z += [(f"Z{g + 1}_{nm}", p) for nm, p in zz]
        L += [(f"L{g + 1}_{nm}", p) for nm, p in ll]
    z = sum(z_list)

    def jname(i):
        return "F1" if i == 0 else f"J_r{i + 1}"

    def im_r(m):
        return re_im(omega_R_m(obj.W, m))[1]

    if variant == "fset":
        if not 1 <= k_prime <= u:
            raise PreconditionError(f"k'={k_prime} outside 1..{u}")
        if len(rs) != u:
            raise PreconditionError(f"need u={u} r-vectors, got {len(rs)}")
        if len(ms) != u - k_prime:
            raise PreconditionError(f"need u-k'={u - k_prime} m-vectors, got {len(ms)}")
        _check_independent(rs, "r")
        _check_independent(ms, "m")
        _check_orthogonal(rs[:k_prime], ms, "r", "m")
        J1 = [(jname(i), J_group(obj.K, r)) for i, r in enumerate(rs[:k_prime])]
        J2 = [(jname(i + k_prime), J_group(obj.K, r)) for i, r in enumerate(rs[k_prime:])]
        R = [(f"ImR_m{j + 1}", im_r(m)) for j, m in enumerate(ms)]
        elems = J1 + Z + J2 + R + L
        k = k_prime + z
    elif variant == "fset2":
        if h is None:
            raise PreconditionError("variant fset2 requires h")
        if not 1 <= k_prime or 2 * k_prime > u:
            raise PreconditionError(f"k'={k_prime} must satisfy 1 <= k' <= u/2")
        if not k_prime <= h < u:
            raise PreconditionError(f"h={h} outside k'..u-1")
        if len(ms) != h:
            raise PreconditionError(f"need h={h} m-vectors, got {len(ms)}")
        if len(rs) != u - k_prime:
            raise PreconditionError(f"need u-k'={u - k_prime} r-vectors, got {len(rs)}")
        for j, m in enumerate(ms):
            if dot(m, s):
                raise PreconditionError(f"m{j + 1}.s = {dot(m, s)} != 0")
        _check_independent(ms, "m")
        _check_independent(rs, "r")
        _check_disjoint(ms, k_prime, h)
        _check_orthogonal(rs, ms[:k_prime], "r", "m")
        _check_orthogonal(rs[: u - h], ms[k_prime:], "r", "m")
        J1 = [(jname(i), J_group(obj.K, r)) for i, r in enumerate(rs[: u - h])]
        J2 = [(jname(i + u - h), J_group(obj.K, r)) for i, r in enumerate(rs[u - h:])]
        R1 = [(f"ImR_m{j + 1}", im_r(m)) for j, m in enumerate(ms[:k_prime])]
        R2 = [(f"ImR_m{j + 1 + k_prime}", im_r(m)) for j, m in enumerate(ms[k_prime:])]
        elems = J1 + R1 + Z + J2 + R2 + L
        k = u - h + k_prime + z
    else:
        raise PreconditionError(f"unknown variant {variant!r}")

    if len(elems) != 2 * n - k:
        raise PreconditionError(f"element count {len(elems)} != 2n-k = {2 * n - k}")
    meta = {"family": "partition", "variant": variant, "boundaries": list(part.boundaries),
            "magnitudes": list(s), "signs": list(eps), "z": list(z_list), "k_prime": k_prime,
            "h": h, "r_vectors": [list(r) for r in rs], "m_vectors": [list(m) for m in ms]}
    return IntegrableSet(f"partition_{variant}_k{k}", l, tuple(elems), k, meta)
