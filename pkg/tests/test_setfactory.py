"""Set constructors: resonance bases, general and R_ij sets, simple and exceptional sets."""

import json
import random
from fractions import Fraction

import pytest

from resonanza.polycore import Polynomial, jacobian_rank, poisson_bracket, re_im
from resonanza.setfactory import (
    IntegrableSet, PreconditionError, build_exceptional_set, build_general_set, build_J_r,
    build_R_m, build_rij_set, build_simple_set, build_trivial_set, compose_hamiltonian,
    exceptional_pieces, normalize_frequencies, re_R_m, resonance_basis, rij_vector,
    search_vectors,
)
from resonanza.verify import check_involution, verify_set

from generators import random_frequencies, random_general_set

z, zb, act = Polynomial.z, Polynomial.zbar, Polynomial.action


def nonconstant(basis):
    return [p for _, p in basis if p.degree > 0]


def test_frequency_normalization():
    assert normalize_frequencies((2, 2, 4)) == (1, 1, 2)
    with pytest.raises(PreconditionError):
        normalize_frequencies((1, 0, 2))


def test_resonance_basis_quadratic():
    basis = nonconstant(resonance_basis((1, 1, 2), 2))
    r, i = re_im(zb(3, 0) * z(3, 1))
    expect = [act(3, 0), act(3, 1), act(3, 2), r, i]
    assert len(basis) == 5
    for p in expect:
        assert p in basis or -p in basis


def test_resonance_basis_cubic():
    quad = nonconstant(resonance_basis((1, 1, 2), 2))
    cub = [p for p in nonconstant(resonance_basis((1, 1, 2), 3)) if p.degree == 3]
    assert len(cub) == 6
    for s in range(3):
        r, i = re_im(Polynomial.monomial((0, 0, 1), (2 - s, s, 0)))
        assert (r in cub or -r in cub) and (i in cub or -i in cub)
    assert len(quad) + len(cub) == 11


def test_resonance_basis_two_modes():
    basis = nonconstant(resonance_basis((1, 2), 3))
    r, i = re_im(z(2, 0) ** 2 * zb(2, 1))
    assert len(basis) == 4
    assert all(p in basis or -p in basis for p in (act(2, 0), act(2, 1), r, i))


def test_resonance_basis_commutes_with_f1():
    l = (1, -2, 3)
    F1 = build_J_r(3, l)
    for _, p in resonance_basis(l, 4):
        assert poisson_bracket(F1, p).is_zero()
        assert p.is_real


def test_R_m_and_J_r():
    assert build_R_m(2, (2, -1)) == z(2, 0) ** 2 * zb(2, 1)
    assert build_R_m(3, (0, 0, 0)) == Polynomial.constant(3, 1)
    assert build_J_r(3, (1, 1, 2)) == act(3, 0) + act(3, 1) + act(3, 2).scale(2)
    assert build_J_r(3, (0, 1, 0)) == act(3, 1)
    assert build_J_r(3, (1, 2, 0)) + build_J_r(3, (0, -1, 5)) == build_J_r(3, (1, 1, 5))


def test_general_set_two_modes():
    S = build_general_set((1, 2), [(1, 2), (1, 0)], [(2, -1)], 1)
    assert S.polys[1] == act(2, 0)
    assert S.polys[2] == re_im(z(2, 0) ** 2 * zb(2, 1))[1]
    # every pair commutes here: m is orthogonal to l but not to (1, 0), so check central only
    assert verify_set(S).passed
    assert len(S) == 2 * 2 - 1


def test_general_set_rejects_non_orthogonal():
    with pytest.raises(PreconditionError, match="r1.m1"):
        build_general_set((1, 2), [(1, 2), (1, 0)], [(1, 1)], 1)
    with pytest.raises(PreconditionError, match="dependent"):
        build_general_set((1, 2), [(1, 2), (2, 4)], [(2, -1)], 1)
    with pytest.raises(PreconditionError, match="r1 must equal"):
        build_general_set((1, 2), [(1, 0), (1, 2)], [(2, -1)], 1)


def test_rij_set():
    S = build_rij_set((1, 1, 1))
    assert S.names == ["F1", "I2", "I3", "R12", "R13"]
    assert S.k == 1
    assert verify_set(S).passed
    assert rij_vector((1, 1, 1), 0, 1) == (1, -1, 0)


def test_mixed_set_central_part_contains_R1():
    n = 6
    l = (1,) * n
    ms = [(1, -1, 0, 0, 0, 0), (0, 0, 1, -1, 0, 0), (0, 0, 0, 0, 1, -1)]
    rs = [l, (1, 1, 0, 0, 0, 0), (0, 0, 1, 1, 0, 0)]
    S = build_general_set(l, rs, ms, variant="mixed", k_prime=3, h=3)
    assert S.k == n - 3 + 3
    assert len(S) == 2 * n - S.k
    central = S.polys[: S.k]
    for m in ms:
        assert re_im(build_R_m(n, m))[1] in central
    assert verify_set(S).passed


def test_mixed_rejects_overlap():
    l = (1, 1, 1, 1)
    ms = [(1, -1, 0, 0), (0, 1, -1, 0)]
    rs = [l, (1, 1, 0, 0), (1, 1, 1, 0)]
    with pytest.raises(PreconditionError, match="overlapping"):
        build_general_set(l, rs, ms, variant="mixed", k_prime=1, h=2)


def test_search_vectors_feed_constructor():
    for l, k in [((1, 2, 3), 1), ((1, 1, 2), 2), ((3, -2, 1, 1), 2)]:
        rs, ms = search_vectors(l, k)
        S = build_general_set(l, rs, ms, k)
        assert verify_set(S).passed


def test_trivial_set():
    S = build_trivial_set((1, 1, 2))
    assert S.k == 3 and S.names == ["F1", "I2", "I3"]
    assert verify_set(S).passed


TABLE = [
    ((1, 0), (0, 2, 0), (0, 0, 1), 3),
    ((1, -1), (1, 1, 0), (0, 0, 1), 3),
    ((3, 1), (0, 3, 0), (1, 0, 1), 5),
    ((3, -1), (1, 3, 0), (0, 0, 2), 6),
    ((2, 1), (0, 4, 0), (2, 0, 1), 7),
    ((5, 1), (0, 5, 0), (1, 0, 2), 8),
    ((5, 3), (0, 5, 0), (3, 0, 1), 9),
    ((5, -1), (1, 5, 0), (0, 0, 3), 9),
]


@pytest.mark.parametrize("d, a, b, degree", TABLE)
def test_simple_sets_match_table(d, a, b, degree):
    S = build_simple_set((1, 1, 2), *d)
    assert S.polys[1] == build_J_r(3, (d[0], d[1], 0))
    assert S.polys[2] == re_im(Polynomial.monomial(a, b))[0]
    assert S.polys[2].degree == degree
    assert verify_set(S).passed


def test_simple_set_rejects_unnormalized():
    for d in [(2, 2), (1, 2), (0, 1), (4, 2)]:
        with pytest.raises(PreconditionError):
            build_simple_set((1, 1, 2), *d)


def test_simple_set_other_pattern():
    S = build_simple_set((2, 2, 3), 2, 1)
    assert verify_set(S).passed


def test_exceptional_set():
    S = build_exceptional_set()
    x = exceptional_pieces()
    assert S.polys[1] == x["C0"] + x["C2"].scale(2)
    assert [p.degree for p in S.polys] == [2, 3, 6]
    assert check_involution(S).passed
    assert jacobian_rank(S.polys) == 3


def exceptional_residual_terms():
    """Brackets of F2 with the pieces of F3, as products of the named cubics."""
    x = exceptional_pieces()
    F2 = build_exceptional_set().polys[1]
    C0, M3, I1 = x["C0"], x["M3"], x["I1"]
    return x, F2, {
        "C0": (poisson_bracket(F2, C0), (M3 * x["N3"]).scale(Fraction(1, 2))),
        "I1": (poisson_bracket(F2, I1), x["D0"].scale(-2)),
        "M3": (poisson_bracket(F2, M3), x["C1"].scale(-2)),
    }


def test_exceptional_residual_factorization():
    x, F2, terms = exceptional_residual_terms()
    for lhs, rhs in terms.values():
        assert lhs == rhs
    C0, M3, I1 = x["C0"], x["M3"], x["I1"]
    # Leibniz on F3 = 2 C0^2 + I1 M3^2 with the bracket table above
    factored = (M3 * (C0 * x["N3"] - x["D0"] * M3 - (I1 * x["C1"]).scale(2))).scale(2)
    leibniz = ((C0 * terms["C0"][1]).scale(4) + terms["I1"][1] * M3 * M3
               + (I1 * M3 * terms["M3"][1]).scale(2))
    assert leibniz == factored
    assert poisson_bracket(F2, build_exceptional_set().polys[2]) == factored
    assert factored.is_zero()


def test_compose_hamiltonian():
    S = build_exceptional_set()
    F1, F2, F3 = S.polys
    assert compose_hamiltonian(S.central, {(1, 0, 0): 1}) == F1
    I1 = act(3, 0)
    assert compose_hamiltonian([I1], {(2,): 1}) == I1 * I1
    H = compose_hamiltonian(S.central, {(1, 0, 0): 1, (0, 1, 1): 1})
    assert H == F1 + F2 * F3
    assert all(poisson_bracket(H, p).is_zero() for p in S.polys)
    with pytest.raises(PreconditionError):
        compose_hamiltonian(S.central, {(1, 0): 1})


def test_json_roundtrip_and_layout():
    S = build_simple_set((1, 1, 2), 3, 1)
    d = json.loads(S.to_json())
    assert set(d) == {"name", "l", "k", "elements", "metadata"}
    assert [e["name"] for e in d["elements"]] == ["F1", "F2", "F3"]
    T = IntegrableSet.from_json(S.to_json())
    assert T.polys == S.polys and T.k == S.k and T.to_json() == S.to_json()


def test_mutated_set_fails_involution():
    S = build_simple_set((1, 1, 2), 1, 0)
    bad = S.replace(1, act(3, 0) + re_R_m(3, (1, -1, 0)))
    rep = check_involution(bad)
    assert not rep.passed
    assert any("F2" in c.id for c in rep.failures)


def test_random_general_sets():
    rng = random.Random(11)
    for _ in range(8):
        l = random_frequencies(rng, nmax=4)
        S = random_general_set(rng, l)
        assert len(S) == 2 * len(l) - S.k
        assert S.names[0] == "F1"
        assert verify_set(S).passed
