"""
Truncated Fock-space matrices of normal-ordered operators, guarded
commutator checks, and joint spectra of commuting central operators.

Exact mode works in the unnormalized basis ``|nu) = zhat*^nu |0>``, where
``zhat*|nu) = |nu + 1)`` and ``zhat|nu) = nu |nu - 1)``; every entry is then
a Gaussian rational (times sqrt 2 at most). The orthonormal matrix is
``M[mu, nu] = T[mu, nu] * sqrt(mu! / nu!)``, a diagonal similarity, so
commutators vanish in one basis iff they vanish in the other. Float mode
builds ``M`` directly with ``sqrt`` amplitudes.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .exact import ExactComplex
from .quantize import OperatorPolynomial

FLOAT_RTOL = 1e-12
CLUSTER_TOL = 1e-8


class ClusteringError(RuntimeError):
    """Joint eigenspaces could not be separated at the requested tolerance."""


# ---------------------------------------------------------------------------
# basis


@dataclass(frozen=True)
class FockBasis:
    """
    Occupation-number states, sorted lexicographically.

    Exactly one of ``cap`` (per-mode ``nu_j <= cap``) or ``weights`` with
    ``cutoff`` (``weights . nu <= cutoff``) describes the truncation.
    """

    n: int
    states: tuple[tuple[int, ...], ...]
    cap: int | None = None
    weights: tuple[int, ...] | None = None
    cutoff: int | None = None
    index: dict = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "index", {s: i for i, s in enumerate(self.states)})

    def __len__(self):
        return len(self.states)

    @property
    def weighted(self) -> bool:
        return self.weights is not None

    def describe(self) -> str:
        if self.weighted:
            return f"weighted l={list(self.weights)} cutoff={self.cutoff}"
        return f"per-mode cap={self.cap}"

    def contains(self, nu: Sequence[int]) -> bool:
        return tuple(nu) in self.index


def build_basis(n: int, cap: int | None = None, *, weights: Sequence[int] | None = None,
                cutoff: int | None = None) -> FockBasis:
    """
    ``build_basis(n, cap=N)`` for per-mode caps or
    ``build_basis(n, weights=l, cutoff=Lambda)`` for ``l . nu <= Lambda``.
    """
    if (cap is None) == (weights is None):
        raise ValueError("give exactly one of cap or weights/cutoff")
    if cap is not None:
        if cap < 0:
            raise ValueError("cap must be nonnegative")
        states = tuple(itertools.product(range(cap + 1), repeat=n))
        return FockBasis(n, states, cap=cap)
    weights = tuple(int(w) for w in weights)
    if len(weights) != n:
        raise ValueError("one weight per mode required")
    if any(w <= 0 for w in weights):
        raise ValueError(f"weighted truncation needs positive weights, got {list(weights)}")
    if cutoff is None or cutoff < 0:
        raise ValueError("cutoff must be a nonnegative integer")
    states = []

    def rec(prefix, budget):
        j = len(prefix)
        if j == n:
            states.append(tuple(prefix))
            return
        for v in range(budget // weights[j] + 1):
            rec(prefix + [v], budget - v * weights[j])

    rec([], cutoff)
    return FockBasis(n, tuple(sorted(states)), weights=weights, cutoff=cutoff)


def level(nu: Sequence[int], l: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(nu, l))


# ---------------------------------------------------------------------------
# matrices


class FockMatrix:
    """
    Sparse square matrix on a :class:`FockBasis`, stored by column:
    ``cols[j] = {i: value}``.

    ``mode == "exact"``: ExactComplex entries in the unnormalized basis.
    ``mode == "float"``: complex entries in the orthonormal basis.
    """

    __slots__ = ("basis", "cols", "mode")

    def __init__(self, basis: FockBasis, cols: dict, mode: str):
        if mode not in ("exact", "float"):
            raise ValueError(f"unknown mode {mode!r}")
        self.basis = basis
        self.cols = cols
        self.mode = mode

    @property
    def dim(self) -> int:
        return len(self.basis)

    def nnz(self) -> int:
        return sum(len(c) for c in self.cols.values())

    def _check(self, other: "FockMatrix"):
        if other.basis is not self.basis and other.basis != self.basis:
            raise ValueError("matrices live on different bases")
        if other.mode != self.mode:
            raise ValueError("cannot mix exact and float matrices")

    def __matmul__(self, other: "FockMatrix") -> "FockMatrix":
        self._check(other)
        zero = ExactComplex(0) if self.mode == "exact" else 0j
        out = {}
        for j, col in other.cols.items():
            acc: dict = {}
            for k, v in col.items():
                ak = self.cols.get(k)
                if not ak:
                    continue
                for i, w in ak.items():
                    acc[i] = acc.get(i, zero) + w * v
            acc = {i: x for i, x in acc.items() if x}
            if acc:
                out[j] = acc
        return FockMatrix(self.basis, out, self.mode)

    def _combine(self, other: "FockMatrix", sign: int) -> "FockMatrix":
        self._check(other)
        out = {j: dict(c) for j, c in self.cols.items()}
        for j, col in other.cols.items():
            tgt = out.setdefault(j, {})
            for i, v in col.items():
                tgt[i] = tgt[i] + v * sign if i in tgt else v * sign
        out = {j: {i: x for i, x in c.items() if x} for j, c in out.items()}
        return FockMatrix(self.basis, {j: c for j, c in out.items() if c}, self.mode)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def restrict_columns(self, cols: Sequence[int]) -> "FockMatrix":
        keep = set(cols)
        return FockMatrix(self.basis, {j: c for j, c in self.cols.items() if j in keep},
                          self.mode)

    def max_abs(self) -> float:
        return max((abs(complex(v)) for c in self.cols.values() for v in c.values()),
                   default=0.0)

    def is_zero(self, atol: float = 0.0) -> bool:
        if self.mode == "exact":
            return not self.cols
        return self.max_abs() <= atol

    def to_orthonormal(self) -> "FockMatrix":
        """Float matrix in the orthonormal basis (identity map in float mode)."""
        if self.mode == "float":
            return self
        states = self.basis.states
        logf = [sum(math.lgamma(v + 1) for v in s) for s in states]
        out = {}
        for j, col in self.cols.items():
            out[j] = {i: complex(v) * math.exp(0.5 * (logf[i] - logf[j]))
                      for i, v in col.items()}
        return FockMatrix(self.basis, out, "float")

    def to_scipy(self) -> sp.csr_matrix:
        M = self.to_orthonormal()
        rows, cols, vals = [], [], []
        for j, col in M.cols.items():
            for i, v in col.items():
                rows.append(i)
                cols.append(j)
                vals.append(v)
        return sp.csr_matrix((np.array(vals, dtype=complex), (rows, cols)),
                             shape=(self.dim, self.dim))

    def to_dense(self) -> np.ndarray:
        return self.to_scipy().toarray()

    def is_hermitian(self, atol: float = 1e-12) -> bool:
        D = self.to_dense()
        return bool(np.allclose(D, D.conj().T, atol=atol, rtol=0))


def _falling(x: int, k: int) -> int:
    out = 1
    for i in range(k):
        out *= x - i
    return out


def matrix_of(A: OperatorPolynomial, basis: FockBasis, mode: str = "exact") -> FockMatrix:
    """
    Matrix of ``A`` on the truncated basis. Targets outside the truncation
    are dropped; use :func:`guarded_states` to know where this is harmless.
    """
    if A.n != basis.n:
        raise ValueError(f"operator has {A.n} modes, basis has {basis.n}")
    n = basis.n
    index = basis.index
    terms = [(k[:n], k[n:], c) for k, c in A.terms.items()]
    cols: dict = {}
    for j, nu in enumerate(basis.states):
        col: dict = {}
        for a, b, c in terms:
            if any(x < y for x, y in zip(nu, a)):
                continue
            mu = tuple(x - y + z for x, y, z in zip(nu, a, b))
            i = index.get(mu)
            if i is None:
                continue
            if mode == "exact":
                amp = 1
                for x, y in zip(nu, a):
                    amp *= _falling(x, y)
                v = c * amp
            else:
                # sqrt(nu!/(nu-a)!) * sqrt(mu!/(nu-a)!)
                sq = 1
                for x, y, z in zip(nu, a, b):
                    sq *= _falling(x, y) * _falling(x - y + z, z)
                v = complex(c) * math.sqrt(sq)
            col[i] = col[i] + v if i in col else v
        col = {i: v for i, v in col.items() if v}
        if col:
            cols[j] = col
    return FockMatrix(basis, cols, mode)


def dense_oracle(A: OperatorPolynomial, cap: int) -> np.ndarray:
    """Independent dense construction from Kronecker products of ladder matrices."""
    n = A.n
    d = cap + 1
    a1 = np.diag(np.sqrt(np.arange(1, d, dtype=float)), 1)
    eye = np.eye(d)

    def embed(op, j):
        out = np.ones((1, 1))
        for m in range(n):
            out = np.kron(out, op if m == j else eye)
        return out

    lowers = [embed(a1, j) for j in range(n)]
    raises = [embed(a1.T, j) for j in range(n)]
    total = np.zeros((d ** n, d ** n), dtype=complex)
    for k, c in A.terms.items():
        M = np.eye(d ** n, dtype=complex)
        for j in range(n):
            M = M @ np.linalg.matrix_power(raises[j], k[n + j])
        for j in range(n):
            M = M @ np.linalg.matrix_power(lowers[j], k[j])
        total += complex(c) * M
    return total


# ---------------------------------------------------------------------------
# guard band


def max_raise(A: OperatorPolynomial, basis: FockBasis):
    """
    Largest truncation-relevant step of ``A``: ``max l.(b - a)`` for weighted
    bases, per-mode ``max (b_j - a_j)`` for per-mode caps (never below 0).
    """
    n = A.n
    if basis.weighted:
        l = basis.weights
        return max([0] + [sum(l[j] * (k[n + j] - k[j]) for j in range(n)) for k in A.terms])
    out = [0] * n
    for k in A.terms:
        for j in range(n):
            out[j] = max(out[j], k[n + j] - k[j])
    return tuple(out)


def guarded_states(basis: FockBasis, ops: Sequence[OperatorPolynomial]) -> list[int]:
    """
    Indices of states from which any single operator in ``ops`` lands inside
    the truncation, so that products of two of them are computed exactly
    there.
    """
    raises = [max_raise(A, basis) for A in ops]
    if basis.weighted:
        g = max(raises, default=0)
        return [i for i, s in enumerate(basis.states)
                if level(s, basis.weights) + g <= basis.cutoff]
    g = [max((r[j] for r in raises), default=0) for j in range(basis.n)]
    return [i for i, s in enumerate(basis.states)
            if all(x + gj <= basis.cap for x, gj in zip(s, g))]


def guarded_commutator(A: OperatorPolynomial, B: OperatorPolynomial, basis: FockBasis,
                       mode: str = "exact") -> tuple[FockMatrix, list[int]]:
    """``[M(A), M(B)]`` restricted to guarded columns, and those columns."""
    guard = guarded_states(basis, [A, B])
    MA, MB = matrix_of(A, basis, mode), matrix_of(B, basis, mode)
    C = (MA @ MB.restrict_columns(guard)) - (MB @ MA.restrict_columns(guard))
    return C, guard


def check_commutators(ops: Sequence[tuple[str, OperatorPolynomial]], basis: FockBasis,
                      mode: str = "exact", k: int | None = None, seed: int = 0):
    """
    All ``[A_i, A_j]`` with ``i < k`` (default: all pairs) on the guarded
    subspace. Exact mode passes iff the restricted commutator is zero;
    float mode iff its largest entry is below ``1e-12`` relative to
    ``|A| |B|``. An empty guard gives status ``"inconclusive"``.
    """
    from .verify import FAIL, PASS, Check, VerificationReport, _matrix_witness
    rep = VerificationReport(f"fock[{basis.describe()}]", seed)
    k = len(ops) if k is None else k
    mats = {name: matrix_of(A, basis, mode) for name, A in ops}
    for i in range(k):
        for j in range(i + 1, len(ops)):
            (na, A), (nb, B) = ops[i], ops[j]
            cid = f"fock-commutator:[{na},{nb}]"
            guard = guarded_states(basis, [A, B])
            if not guard:
                rep.checks.append(Check(cid, "inconclusive", None, None))
                continue
            MA, MB = mats[na], mats[nb]
            C = (MA @ MB.restrict_columns(guard)) - (MB @ MA.restrict_columns(guard))
            if mode == "exact":
                ok = C.is_zero()
            else:
                scale = max(MA.max_abs() * MB.max_abs(), 1.0)
                ok = C.max_abs() <= FLOAT_RTOL * scale
            w = 0 if ok else _matrix_witness(C.to_dense().tolist())
            rep.checks.append(Check(cid, PASS if ok else FAIL, None, w))
    return rep


# ---------------------------------------------------------------------------
# joint spectra


@dataclass(frozen=True)
class LatticePoint:
    values: tuple[float, ...]
    multiplicity: int
    block_E: Fraction
    guarded: bool


@dataclass
class SpectralLattice:
    names: tuple[str, ...]
    points: list[LatticePoint]
    truncation: str
    dimension: int

    def total_multiplicity(self) -> int:
        return sum(p.multiplicity for p in self.points)

    def blocks(self) -> dict:
        out: dict = {}
        for p in self.points:
            out.setdefault(p.block_E, []).append(p)
        return out

    def block_sums(self) -> dict:
        return {E: sum(p.multiplicity for p in pts) for E, pts in self.blocks().items()}

    def as_multiset(self, digits: int = 8, guarded_only: bool = False) -> dict:
        out: dict = {}
        for p in self.points:
            if guarded_only and not p.guarded:
                continue
            key = tuple(_clean(round(v, digits)) for v in p.values)
            out[key] = out.get(key, 0) + p.multiplicity
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        k = len(self.names)
        w.writerow([f"lambda_{i + 1}" for i in range(k)] + ["multiplicity", "block_E", "guarded"])
        for p in self.points:
            w.writerow([_fmt(v) for v in p.values]
                       + [p.multiplicity, _fmt(float(p.block_E)), str(p.guarded).lower()])
        return buf.getvalue()


def _clean(x: float) -> float:
    return 0.0 if x == 0 else x


def _fmt(x: float) -> str:
    s = f"{round(x, 9):.10g}"
    return "0" if s in ("-0", "0") else s


def _split(V: np.ndarray, mats: list[np.ndarray], tol: float, depth: int = 0):
    """Recursively split the span of ``V`` until every matrix acts as a scalar."""
    for M in mats:
        H = V.conj().T @ M @ V
        H = (H + H.conj().T) / 2
        w, U = np.linalg.eigh(H)
        if w[-1] - w[0] <= tol * max(1.0, abs(w).max()):
            continue
        if depth > len(mats) + 2:
            raise ClusteringError("eigenvalue clusters do not separate")
        groups, start = [], 0
        for i in range(1, len(w) + 1):
            if i == len(w) or w[i] - w[i - 1] > tol * max(1.0, abs(w).max()):
                groups.append(range(start, i))
                start = i
        if len(groups) == 1:
            raise ClusteringError(
                f"spread {w[-1] - w[0]:.3g} above tolerance without a separating gap")
        out = []
        for g in groups:
            out += _split(V @ U[:, list(g)], mats, tol, depth + 1)
        return out
    return [V]


def _block_spectrum(idx, mats_full, rng_seed, tol):
    mats = [M[np.ix_(idx, idx)] for M in mats_full]
    rng = np.random.default_rng(rng_seed)
    coeffs = rng.standard_normal(len(mats))
    comb = sum(c * M for c, M in zip(coeffs, mats))
    comb = (comb + comb.conj().T) / 2
    w, U = np.linalg.eigh(comb)
    scale = max(1.0, float(np.abs(w).max()) if len(w) else 1.0)
    groups, start = [], 0
    for i in range(1, len(w) + 1):
        if i == len(w) or w[i] - w[i - 1] > tol * scale:
            groups.append(U[:, start:i])
            start = i
    clusters = []
    for V in groups:
        clusters += _split(V, mats, tol)
    out = []
    for V in clusters:
        vals = []
        for M in mats:
            H = V.conj().T @ M @ V
            lam = np.trace(H) / H.shape[0]
            if abs(lam.imag) > 1e-10 * max(1.0, abs(lam.real)):
                raise ClusteringError("non-real joint eigenvalue")
            vals.append(float(lam.real))
        out.append((tuple(vals), V.shape[1]))
    return out


def joint_spectrum(central: Sequence[tuple[str, OperatorPolynomial]], basis: FockBasis,
                   l: Sequence[int], seed: int = 0, tol: float = CLUSTER_TOL,
                   threads: int = 1, check: bool = True) -> SpectralLattice:
    """
    Joint eigenvalues of commuting hermitian operators that preserve the
    ``F1 = l . I`` level. Blocks by level, diagonalizes a seeded random
    combination per block, then splits clusters until every operator is
    scalar on each.
    """
    l = tuple(int(x) for x in l)
    n = basis.n
    if len(l) != n:
        raise ValueError("l must have one entry per mode")
    for name, A in central:
        if A.level_shifts(l) - {0}:
            raise ValueError(f"{name} does not preserve the F1 levels")
        if not A.is_hermitian():
            raise ValueError(f"{name} is not hermitian")
    if check:
        rep = check_commutators(list(central), basis, "exact")
        if not rep.passed:
            bad = ", ".join(c.id for c in rep.checks if not c.passed)
            raise ValueError(f"central operators do not commute: {bad}")
    mats = [matrix_of(A, basis, "exact").to_dense() for _, A in central]
    half = Fraction(sum(l), 2)
    by_level: dict = {}
    for i, s in enumerate(basis.states):
        by_level.setdefault(level(s, l), []).append(i)
    complete = _complete_levels(basis, l, by_level)
    levels = sorted(by_level)
    jobs = [(by_level[L], mats, (seed, L), tol) for L in levels]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(lambda a: _block_spectrum(*a), jobs))
    else:
        results = [_block_spectrum(*a) for a in jobs]
    points = []
    for L, res in zip(levels, results):
        E = L + half
        for vals, mult in sorted(res):
            points.append(LatticePoint(vals, mult, E, L in complete))
    return SpectralLattice(tuple(name for name, _ in central), points, basis.describe(),
                           len(basis))


def _complete_levels(basis: FockBasis, l, by_level) -> set:
    """Levels whose full (untruncated) state set is present in the basis."""
    if any(x <= 0 for x in l) or not by_level:
        return set()
    full = build_basis(basis.n, weights=l, cutoff=max(by_level))
    counts: dict = {}
    for s in full.states:
        L = level(s, l)
        counts[L] = counts.get(L, 0) + 1
    return {L for L, idx in by_level.items() if counts.get(L) == len(idx)}


__all__ = [
    "FockBasis", "FockMatrix", "SpectralLattice", "LatticePoint", "build_basis", "matrix_of",
    "dense_oracle", "max_raise", "guarded_states", "guarded_commutator", "check_commutators",
    "joint_spectrum", "level", "ClusteringError",
]
