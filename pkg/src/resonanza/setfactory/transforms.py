"""
Linear canonical maps ``Y = U y``, ``Z_3 = e^{i phi} z_3`` on a mode pair
and a spectator mode, with ``U`` unitary over Q(i, sqrt 2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..exact import INV_SQRT2, ExactComplex, I, ONE, ZERO
from ..polycore import Polynomial, substitute
from .core import IntegrableSet, PreconditionError

Mat2 = tuple  # ((a, b), (c, d)) of ExactComplex


def _m(a, b, c, d) -> Mat2:
    return ((ExactComplex.coerce(a), ExactComplex.coerce(b)),
            (ExactComplex.coerce(c), ExactComplex.coerce(d)))


SIGMA = {
    1: _m(0, 1, 1, 0),
    2: _m(0, -I, I, 0),
    # the printed sigma_3 coincides with the identity; the standard diag(1, -1) is meant
    3: _m(1, 0, 0, -1),
    4: _m(1, 0, 0, 1),
}


def mat_mul(A: Mat2, B: Mat2) -> Mat2:
    return tuple(tuple(sum((A[i][k] * B[k][j] for k in range(2)), ZERO) for j in range(2))
                 for i in range(2))


def mat_dagger(A: Mat2) -> Mat2:
    return tuple(tuple(A[j][i].conjugate() for j in range(2)) for i in range(2))


def mat_add(A: Mat2, B: Mat2, cb=ONE) -> Mat2:
    return tuple(tuple(A[i][j] + B[i][j] * cb for j in range(2)) for i in range(2))


def mat_scale(A: Mat2, c) -> Mat2:
    return tuple(tuple(A[i][j] * c for j in range(2)) for i in range(2))


def trace(A: Mat2) -> ExactComplex:
    return A[0][0] + A[1][1]


def is_unitary(U: Mat2) -> bool:
    return mat_mul(mat_dagger(U), U) == SIGMA[4]


def quarter_turn(mu: int, sign: int = 1) -> Mat2:
    """``exp(sign * i pi/4 sigma_mu) = (1 + sign i sigma_mu)/sqrt 2``."""
    if sign not in (1, -1):
        raise ValueError("sign must be +-1")
    return mat_scale(mat_add(SIGMA[4], SIGMA[mu], I * sign), INV_SQRT2)


_EIGHTH = [
    ExactComplex(1), ExactComplex(0, 0, "1/2", "1/2"), ExactComplex(0, 1),
    ExactComplex(0, 0, "-1/2", "1/2"), ExactComplex(-1), ExactComplex(0, 0, "-1/2", "-1/2"),
    ExactComplex(0, -1), ExactComplex(0, 0, "1/2", "-1/2"),
]


def exact_phase(phi) -> ExactComplex:
    """
    ``e^{i phi}`` as an exact number. Accepts an :class:`ExactComplex` of
    modulus one, or a float angle that is a multiple of pi/4.
    """
    if isinstance(phi, ExactComplex):
        if phi * phi.conjugate() != ONE:
            raise PreconditionError(f"phase {phi} does not have modulus 1")
        return phi
    k = phi / (math.pi / 4)
    kr = round(k)
    if abs(k - kr) > 1e-12:
        raise PreconditionError(
            f"float phase {phi} is not a multiple of pi/4; no exact value in Q(i, sqrt 2)")
    return _EIGHTH[kr % 8]


@dataclass(frozen=True)
class SymplecticTransform:
    """
    ``(z_a, z_b) -> U (z_a, z_b)``, ``z_c -> phase * z_c``, other modes fixed.

    ``modes`` holds the 0-based ``(a, b, c)``; ``c`` may be None.
    """

    U: Mat2
    phase: ExactComplex = ONE
    modes: tuple = (0, 1, 2)
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        U = tuple(tuple(ExactComplex.coerce(x) for x in row) for row in self.U)
        object.__setattr__(self, "U", U)
        object.__setattr__(self, "phase", exact_phase(self.phase))
        if not is_unitary(U):
            raise PreconditionError("U is not unitary")

    @classmethod
    def identity(cls, modes=(0, 1, 2)):
        return cls(SIGMA[4], ONE, modes)

    def images(self, n: int) -> list[Polynomial]:
        a, b, c = self.modes
        imgs = [Polynomial.z(n, j) for j in range(n)]
        za, zb = imgs[a], imgs[b]
        imgs[a] = za.scale(self.U[0][0]) + zb.scale(self.U[0][1])
        imgs[b] = za.scale(self.U[1][0]) + zb.scale(self.U[1][1])
        if c is not None:
            imgs[c] = imgs[c].scale(self.phase)
        return imgs

    def apply(self, p: Polynomial) -> Polynomial:
        return substitute(p, self.images(p.n))


def apply_symplectic(S: IntegrableSet, t: SymplecticTransform) -> IntegrableSet:
    """Pull every element back along ``t``. ``F1`` is unchanged when ``l_a = l_b``."""
    a, b, _ = t.modes
    if max(x for x in t.modes if x is not None) >= S.n:
        raise PreconditionError("transform modes exceed the number of oscillators")
    if S.l[a] != S.l[b] and t.U[0][1] or S.l[a] != S.l[b] and t.U[1][0]:
        raise PreconditionError("mixing modes with different frequencies does not fix F1")
    images = t.images(S.n)
    elems = tuple((name, substitute(p, images)) for name, p in S.elements)
    meta = dict(S.metadata)
    meta["transformed"] = True
    return IntegrableSet(S.name, S.l, elems, S.k, meta)


def rotation_of(U: Mat2) -> list[list[ExactComplex]]:
    """
    ``R(U)`` with ``U^* sigma_i U = sum_j R_ij sigma_j`` (i, j = 1..3), so that
    ``L_i -> sum_j R_ij L_j``.
    """
    Ud = mat_dagger(U)
    half = ExactComplex("1/2")
    out = []
    for i in (1, 2, 3):
        Si = mat_mul(mat_mul(Ud, SIGMA[i]), U)
        out.append([trace(mat_mul(Si, SIGMA[j])) * half for j in (1, 2, 3)])
    return out
