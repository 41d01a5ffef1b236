"""Equal-frequency groups: momenta, group sums, nested Casimirs and partition sets."""

import random

import pytest
from hypothesis import given, strategies as st

from resonanza.exact import I
from resonanza.polycore import Polynomial, jacobian_rank, poisson_bracket, re_im
from resonanza.setfactory import (
    GroupPartition, PreconditionError, build_equal_freq_objects, build_partition_set, build_ZL,
)
from resonanza.verify import verify_set

from generators import random_frequencies, random_partition_set

z, zb = Polynomial.z, Polynomial.zbar


def test_partition_from_frequencies():
    part = GroupPartition.from_frequencies((1, -1, 2, 2, 3))
    assert part.sizes == (2, 2, 1)
    assert part.magnitudes == (1, 2, 3)
    assert part.signs == (1, -1, 1, 1, 1)
    assert part.frequencies == (1, -1, 2, 2, 3)
    with pytest.raises(PreconditionError):
        GroupPartition.from_frequencies((1, 2), sizes=[2])


def test_momentum_in_real_coordinates():
    # x_j = (z_j + zb_j)/sqrt2, p_j = (z_j - zb_j)/(i sqrt2), so x1 p2 - x2 p1 = i (z1 zb2 - z2 zb1)
    obj = build_equal_freq_objects(GroupPartition.from_frequencies((1, 1)))
    P12 = obj.P[(0, 1)]
    assert P12 == (z(2, 0) * zb(2, 1) - z(2, 1) * zb(2, 0)).scale(I)
    assert P12.is_real
    assert obj.momentum(1, 0) == -P12


def test_group_sum_W():
    obj = build_equal_freq_objects(GroupPartition.from_frequencies((1, 1)))
    assert obj.W[0] == z(2, 0) ** 2 + z(2, 1) ** 2


@given(st.lists(st.sampled_from([1, -1]), min_size=2, max_size=4))
def test_wkp_identity(signs):
    obj = build_equal_freq_objects(GroupPartition.from_frequencies(signs))
    W, K, P2 = obj.W[0], obj.K[0], obj.P2[0]
    assert W * W.conjugate() == K * K - P2
    assert K.is_real and P2.is_real


def test_ppoisse_and_rotation_invariance():
    eps = (1, -1, 1, 1)
    obj = build_equal_freq_objects(GroupPartition.from_frequencies(eps, sizes=[4]))
    Pm = obj.momentum
    d = lambda a, b: int(a == b)
    for i, j, h, k in [(0, 1, 1, 2), (0, 2, 0, 3), (1, 3, 2, 1), (0, 1, 2, 3)]:
        lhs = poisson_bracket(Pm(i, j), Pm(h, k))
        rhs = (Pm(j, k).scale(-eps[i] * d(i, h)) - Pm(i, h).scale(eps[j] * d(j, k))
               + Pm(j, h).scale(eps[i] * d(i, k)) + Pm(i, k).scale(eps[j] * d(j, h)))
        assert lhs == rhs
    for key in obj.P:
        assert poisson_bracket(obj.P2[0], obj.P[key]).is_zero()


def test_ww_and_fw2():
    part = GroupPartition.from_frequencies((1, 1, -1, 2, -2), sizes=[3, 2])
    obj = build_equal_freq_objects(part)
    for h in range(2):
        for j in range(2):
            dj = int(h == j)
            assert poisson_bracket(obj.W[h], obj.W[j]).is_zero()
            assert poisson_bracket(obj.W[h], obj.W[j].conjugate()) == obj.K[h].scale(I * (4 * dj))
            assert poisson_bracket(obj.W[h], obj.K[j]) == obj.W[h].scale(I * (2 * dj))
            assert poisson_bracket(obj.W[h], obj.P2[j]).is_zero()


@pytest.mark.parametrize("q, z_, sizes", [(2, 1, (1, 0)), (3, 1, (1, 2)), (4, 2, (2, 2)),
                                           (5, 1, (1, 6)), (6, 3, (3, 4))])
def test_build_ZL_contract(q, z_, sizes):
    Z, L = build_ZL(q, z_)
    assert (len(Z), len(L)) == sizes
    Pi = [p for _, p in Z + L]
    for _, a in Z:
        for b in Pi:
            assert poisson_bracket(a, b).is_zero()
    assert jacobian_rank(Pi) == len(Pi)


def test_ZL_small_cases():
    Z, L = build_ZL(2, 1, (1, -1))
    obj = build_equal_freq_objects(GroupPartition.from_frequencies((1, -1)))
    P12 = obj.P[(0, 1)]
    assert [p for _, p in Z] == [(P12 * P12).scale(-1)]
    assert L == []
    Z, L = build_ZL(3, 1)
    assert [nm for nm, _ in Z] == ["C3"] and [nm for nm, _ in L] == ["C2", "P13"]
    with pytest.raises(PreconditionError):
        build_ZL(3, 3)


def test_partition_set_fint2_family():
    part = GroupPartition.from_frequencies((1, 1, 2))
    S = build_partition_set(part, [(1, 2), (1, 0)], [(2, -1)], [1, 0], k_prime=1)
    assert S.names == ["F1", "Z1_C2", "J_r2", "ImR_m1"]
    assert S.k == 2
    obj = build_equal_freq_objects(part)
    expect = re_im((z(3, 0) ** 2 + z(3, 1) ** 2) ** 2 * zb(3, 2) ** 2)[1]
    assert S.polys[3] == expect
    assert S.polys[1] == obj.P[(0, 1)] ** 2
    assert verify_set(S).passed


def test_partition_set_single_group():
    part = GroupPartition.from_frequencies((1, 1))
    S = build_partition_set(part, [(1,)], [], [1], k_prime=1)
    assert S.k == 2 and len(S) == 2
    assert verify_set(S).passed


def test_partition_set_fset2():
    part = GroupPartition.from_frequencies((1, 1, 1, 1), sizes=[2, 2])
    S = build_partition_set(part, [(1, 1)], [(1, -1)], [1, 1], k_prime=1, variant="fset2", h=1)
    obj = build_equal_freq_objects(part)
    target = re_im(obj.W[0] * obj.W[1].conjugate())[1]
    assert target in S.central
    assert S.k == 4 and len(S) == 4
    ps = S.polys
    assert all(poisson_bracket(a, b).is_zero() for a in ps for b in ps)


def test_partition_rejects_common_divisor():
    part = GroupPartition((0, 1, 2), (2, 4), (1, 1))
    with pytest.raises(PreconditionError, match="common divisor"):
        build_partition_set(part, [(2, 4), (1, 0)], [(2, -1)], [0, 0], k_prime=1)


def test_random_partition_sets():
    rng = random.Random(5)
    for _ in range(8):
        S = random_partition_set(rng, random_frequencies(rng, nmax=4))
        assert len(S) == 2 * S.n - S.k
        assert verify_set(S).passed
