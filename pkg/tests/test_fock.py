"""Truncated Fock matrices, guard bands and joint spectra."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from resonanza.exact import ExactComplex
from resonanza.fock import (
    build_basis, check_commutators, dense_oracle, guarded_commutator, guarded_states,
    joint_spectrum, level, matrix_of,
)
from resonanza.polycore import Polynomial
from resonanza.quantize import (
    OperatorPolynomial as Op, exceptional_anomaly, op_product, quantize_exceptional,
    quantize_set, weyl_symmetrize,
)
from resonanza.setfactory import build_exceptional_set, build_J_r, build_trivial_set

L112 = (1, 1, 2)


def test_basis_sizes():
    assert len(build_basis(1, 3)) == 4
    B = build_basis(3, weights=L112, cutoff=4)
    assert len(B) == 22
    assert list(B.states) == sorted(B.states)
    assert all(B.index[s] == i for i, s in enumerate(B.states))
    assert len(build_basis(3, weights=L112, cutoff=10)) == 161
    with pytest.raises(ValueError):
        build_basis(2, weights=(1, -1), cutoff=3)
    with pytest.raises(ValueError):
        build_basis(2, 3, weights=(1, 1), cutoff=3)


def test_ladder_on_guarded_subspace():
    B = build_basis(1, 5)
    a, c = Op.annihilator(1, 0), Op.creator(1, 0)
    C, guard = guarded_commutator(a, c, B, "float")
    D = C.to_dense()[:, guard]
    assert np.allclose(D, np.eye(len(B))[:, guard])
    assert guard == [0, 1, 2, 3, 4]
    # the oracle shows the truncation artifact outside the guard
    A, Cr = dense_oracle(a, 5), dense_oracle(c, 5)
    comm = A @ Cr - Cr @ A
    assert np.allclose(comm[:5, :5], np.eye(5)) and not np.isclose(comm[5, 5], 1)


def test_diagonal_matrices():
    B = build_basis(3, weights=L112, cutoff=6)
    I1 = matrix_of(weyl_symmetrize(Polynomial.action(3, 0)), B)
    F1 = matrix_of(weyl_symmetrize(build_J_r(3, L112)), B)
    N = matrix_of(Op.number(3, 1), B)
    for j, nu in enumerate(B.states):
        assert I1.cols[j] == {j: ExactComplex(Fraction(2 * nu[0] + 1, 2))}
        assert F1.cols[j] == {j: ExactComplex(level(nu, L112) + 2)}
        assert N.cols.get(j, {}) == ({j: ExactComplex(nu[1])} if nu[1] else {})


@pytest.mark.parametrize("mode", ["exact", "float"])
def test_sparse_against_dense_oracle(mode):
    cap = 4
    B = build_basis(3, cap)
    ops = [op for _, op in quantize_exceptional()] + [exceptional_anomaly()["(5/2)i D0"]]
    for A in ops:
        M = matrix_of(A, B, mode).to_dense()
        assert np.allclose(M, dense_oracle(A, cap), atol=1e-12)


@st.composite
def small_ops(draw, n=2):
    keys = st.tuples(*[st.integers(0, 2)] * (2 * n))
    coeffs = st.builds(ExactComplex, st.integers(-3, 3), st.integers(-3, 3))
    return Op(n, draw(st.dictionaries(keys, coeffs, min_size=1, max_size=3)))


@settings(max_examples=25)
@given(small_ops(), small_ops())
def test_matrix_homomorphism_on_guard(A, B):
    basis = build_basis(2, 5)
    guard = guarded_states(basis, [A, B])
    lhs = matrix_of(op_product(A, B), basis).restrict_columns(guard)
    rhs = matrix_of(A, basis) @ matrix_of(B, basis).restrict_columns(guard)
    assert (lhs - rhs).is_zero()


def test_hermitian_operator_gives_hermitian_matrix():
    B = build_basis(3, weights=L112, cutoff=6)
    for _, A in quantize_exceptional():
        assert matrix_of(A, B, "float").is_hermitian()
        assert matrix_of(A, B).is_hermitian()


@pytest.mark.parametrize("mode", ["exact", "float"])
def test_commutator_checks(mode):
    B8 = build_basis(3, weights=L112, cutoff=8)
    assert check_commutators(quantize_set(build_trivial_set(L112)), B8, mode).passed
    B10 = build_basis(3, weights=L112, cutoff=10)
    rep = check_commutators(quantize_exceptional(), B10, mode)
    assert rep.passed and len(rep.checks) == 3


def test_uncorrected_anomaly_as_matrices():
    B = build_basis(3, weights=L112, cutoff=10)
    F2, F3 = (weyl_symmetrize(p) for p in build_exceptional_set().polys[1:])
    C, guard = guarded_commutator(F2, F3, B)
    assert len(guard) == len(B)
    assert not C.is_zero()
    target = matrix_of(exceptional_anomaly()["(5/2)i D0"], B).restrict_columns(guard)
    assert (C - target).is_zero()


def test_inconclusive_when_guard_empty():
    B = build_basis(1, 1)
    big = Op(1, {(0, 3): 1})
    rep = check_commutators([("A", big), ("B", big.adjoint())], B)
    assert rep.checks[0].status == "inconclusive"


def test_level_block_dimension():
    B = build_basis(3, weights=L112, cutoff=6)
    lat = joint_spectrum([("F1", weyl_symmetrize(build_J_r(3, L112)))], B, L112)
    assert lat.block_sums()[Fraction(4)] == 4
    assert lat.total_multiplicity() == len(B)


def test_trivial_lattice_matches_enumeration():
    B = build_basis(3, weights=L112, cutoff=6)
    lat = joint_spectrum(quantize_set(build_trivial_set(L112)), B, L112)
    got = lat.as_multiset()
    want = {}
    for nu in B.states:
        key = (float(level(nu, L112) + 2), nu[1] + 0.5, nu[2] + 0.5)
        want[key] = want.get(key, 0) + 1
    assert got == want
    assert lat.total_multiplicity() == len(B)


def test_exceptional_blocks_and_block_invariance():
    B = build_basis(3, weights=L112, cutoff=8)
    ops = quantize_exceptional()
    lat = joint_spectrum(ops, B, L112)
    dims = {}
    for nu in B.states:
        E = Fraction(level(nu, L112)) + 2
        dims[E] = dims.get(E, 0) + 1
    assert lat.block_sums() == dims
    assert all(p.guarded for p in lat.points)
    # F2 never leaves an F1 eigenblock
    F2 = matrix_of(ops[1][1], B)
    for j, col in F2.cols.items():
        for i in col:
            assert level(B.states[i], L112) == level(B.states[j], L112)
    for p in lat.points:
        assert all(np.isfinite(v) for v in p.values)


def test_lattice_stable_when_cutoff_grows():
    ops = quantize_exceptional()
    small = joint_spectrum(ops, build_basis(3, weights=L112, cutoff=6), L112)
    big = joint_spectrum(ops, build_basis(3, weights=L112, cutoff=8), L112)
    a = small.as_multiset(digits=6, guarded_only=True)
    b = {k: v for k, v in big.as_multiset(digits=6).items() if k[0] <= 6 + 2}
    assert a == b


def test_per_mode_cap_flags_incomplete_blocks():
    B = build_basis(3, 2)
    lat = joint_spectrum(quantize_set(build_trivial_set(L112)), B, L112)
    flags = {p.block_E: p.guarded for p in lat.points}
    assert flags[Fraction(2)] and flags[Fraction(4)]
    assert not flags[Fraction(2 + 8)]


def test_csv_layout_and_determinism():
    B = build_basis(3, weights=L112, cutoff=4)
    ops = quantize_exceptional()
    a = joint_spectrum(ops, B, L112, seed=1).to_csv()
    b = joint_spectrum(ops, B, L112, seed=1, threads=2).to_csv()
    assert a == b
    lines = a.splitlines()
    assert lines[0] == "lambda_1,lambda_2,lambda_3,multiplicity,block_E,guarded"
    assert sum(int(r.split(",")[3]) for r in lines[1:]) == len(B)


def test_rejects_non_commuting_or_non_hermitian():
    B = build_basis(3, weights=L112, cutoff=4)
    F2, F3 = (weyl_symmetrize(p) for p in build_exceptional_set().polys[1:])
    with pytest.raises(ValueError, match="commute"):
        joint_spectrum([("F2", F2), ("F3", F3)], B, L112)
    with pytest.raises(ValueError, match="hermitian"):
        joint_spectrum([("X", F2.scale(ExactComplex(0, 1)))], B, L112)
    with pytest.raises(ValueError, match="levels"):
        joint_spectrum([("a", Op.annihilator(3, 0))], B, L112)
