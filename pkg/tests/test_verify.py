"""Verification reports: involution, closure, independence, identities and kernels."""

import json

import pytest
from hypothesis import given, settings, strategies as st

from resonanza.polycore import Polynomial, poisson_bracket, re_im
from resonanza.setfactory import (
    GroupPartition, IntegrableSet, L_basis, RepMatrices, build_equal_freq_objects,
    build_exceptional_set, build_J_r, build_rep_matrices, build_simple_set, build_trivial_set,
    exceptional_pieces, im_R_m, omega_R_m, re_R_m,
)
from resonanza.setfactory.n3 import matscale
from resonanza.verify import (
    IDENTITIES, DegreeOverflow, check_closure, check_identities, check_independence,
    check_involution, check_representation, involution_kernel, merge_reports, verify_set,
)

act = Polynomial.action
L112 = (1, 1, 2)


def test_involution_examples():
    rep = check_involution(build_exceptional_set())
    assert rep.passed
    assert all(c.residual is not None and c.residual.is_zero() for c in rep.checks)
    assert check_involution(build_trivial_set(L112)).passed


def test_mutated_exceptional_set_fails_with_witness():
    x = exceptional_pieces()
    S = build_exceptional_set()
    bad = S.replace(2, (x["C0"] * x["C0"]).scale(2) + x["I2"] * x["M3"] * x["M3"])
    rep = check_involution(bad)
    assert not rep.passed
    (fail,) = [c for c in rep.failures if c.id == "involution:{F2,F3}"]
    assert fail.residual and not fail.residual.is_zero()
    assert "FAIL involution:{F2,F3}" in rep.summary()


def test_closure_examples():
    n, m = 2, (1, -1)
    fam = [act(2, 0), act(2, 1), re_R_m(n, m), im_R_m(n, m)]
    assert check_closure(fam).passed

    part = GroupPartition.from_frequencies((1, 1, -1, -1), sizes=[2, 2])
    obj = build_equal_freq_objects(part)
    re, im = re_im(omega_R_m(obj.W, (1, -1)))
    fam = list(obj.K) + list(obj.P2) + [re, im]
    assert check_closure(fam).passed

    Ls = [p for _, p in L_basis()]
    assert check_closure(Ls, [nm for nm, _ in L_basis()]).passed


def test_closure_failure_and_overflow():
    z, zb = Polynomial.z, Polynomial.zbar
    # {z1, zb1^2 z2} = 2i zb1 z2 is not a polynomial in the two inputs
    rep = check_closure([z(2, 0), zb(2, 0) ** 2 * z(2, 1)])
    assert not rep.passed and rep.failures[0].residual
    with pytest.raises(DegreeOverflow):
        check_closure([z(1, 0) ** 3, zb(1, 0) ** 3], degree_cap=3)


def test_independence_examples():
    assert check_independence(build_exceptional_set()).passed
    for d in [(1, 0), (3, 1), (5, -1)]:
        assert check_independence(build_simple_set(L112, *d)).passed
    F1 = build_J_r(3, L112)
    S = IntegrableSet("dup", L112, (("F1", F1), ("F2", F1.scale(2))), 2)
    rep = check_independence(S)
    assert not rep.passed and rep.checks[0].rank == 1


def test_identity_registry():
    rep = check_identities(seed=0)
    assert rep.passed, rep.summary()
    ids = [c.id for c in rep.checks]
    assert sum(i.startswith("imre:") for i in ids) == 20
    assert sum(i.startswith("sumA2:") for i in ids) == 10
    assert set(IDENTITIES) >= {"constr", "constr1", "imre", "wkp", "sumA2", "nonsimple",
                               "ellemua", "Ldim"}


def test_identity_subset_matches_full_run():
    full = {c.id: c.status for c in check_identities(seed=4).checks}
    sub = check_identities(["imre", "wkp"], seed=4)
    assert all(full[c.id] == c.status for c in sub.checks)
    with pytest.raises(KeyError):
        check_identities(["no-such-identity"])


@pytest.mark.parametrize("q", range(1, 7))
@pytest.mark.parametrize("p", [1, 2])
def test_representation(q, p):
    rep = check_representation(build_rep_matrices(q, p))
    assert rep.passed, rep.summary()


def test_representation_with_printed_J2_sign_fails():
    good = build_rep_matrices(3)
    J = list(good.J)
    J[1] = matscale(J[1], -1)
    rep = check_representation(RepMatrices(3, 1, tuple(J)))
    failed = {c.id for c in rep.failures}
    assert "cr1:[J1,J2]" in failed
    assert all(c.rank >= 1 for c in rep.failures)


def test_kernel_examples():
    F1 = build_J_r(3, L112)
    assert len(involution_kernel([F1], L112, 2)) == 6
    k = involution_kernel([F1, act(3, 0)], L112, 3)
    assert len(k) == 6
    r, i = re_im(Polynomial.monomial((0, 2, 0), (0, 0, 1)))
    for p in (Polynomial.constant(3, 1), act(3, 0), act(3, 1), act(3, 2), r, i):
        assert k.contains(p)


def test_kernel_of_exceptional_pair():
    F1, F2, _ = build_exceptional_set().polys
    k = involution_kernel([F1, F2], L112, 3)
    assert k.contains(F2) and k.contains(F1)
    assert len(k) == 3
    # the sum of the first two actions does not commute with F2
    assert not k.contains(act(3, 0) + act(3, 1))
    assert not poisson_bracket(act(3, 0) + act(3, 1), F2).is_zero()


@settings(max_examples=10)
@given(st.sampled_from([(1, 1, 2), (1, 2), (1, -1, 3), (2, 3)]), st.integers(1, 3))
def test_kernel_monotone_and_commuting(l, d):
    F1 = build_J_r(len(l), l)
    cons = [F1, act(len(l), 0)]
    small = involution_kernel(cons, l, d)
    big = involution_kernel(cons, l, d + 1)
    assert all(big.contains(p) for p in small)
    for p in big:
        assert all(poisson_bracket(c, p).is_zero() for c in cons)


def test_reports_are_byte_identical():
    S = build_exceptional_set()
    assert verify_set(S, seed=3).to_json() == verify_set(S, seed=3).to_json()
    a = check_identities(seed=9).to_json(indent=2)
    assert a == check_identities(seed=9).to_json(indent=2)
    d = json.loads(a)
    assert set(d) == {"subject", "seed", "checks"}
    assert set(d["checks"][0]) == {"id", "status", "residual", "rank"}


def test_merge_sorts_by_id():
    S = build_simple_set(L112, 1, 0)
    rep = merge_reports("x", [check_independence(S), check_involution(S)])
    ids = [c.id for c in rep.checks]
    assert ids == sorted(ids)


def test_failures_carry_witness():
    S = build_simple_set(L112, 3, 1)
    bad = S.replace(1, act(3, 0) + Polynomial.monomial((1, 0, 0), (0, 1, 0)))
    for rep in (verify_set(bad), check_identities(seed=1)):
        for c in rep.failures:
            assert (c.residual is not None and not c.residual.is_zero()) or (c.rank is not None)
