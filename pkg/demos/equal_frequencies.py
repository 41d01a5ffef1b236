"""
Equal-frequency groups: central elements, the su(2) picture and a
partition set.

Run: ``python demos/equal_frequencies.py``
"""

from resonanza.setfactory import (GroupPartition, build_partition_set, build_rep_matrices,
                                  build_ZL)
from resonanza.polycore import jacobian_rank, poisson_bracket
from resonanza.verify import check_representation, verify_set

for q, z in [(2, 1), (3, 1), (4, 2)]:
    Z, L = build_ZL(q, z, (1,) * q)
    Pi = [p for _, p in Z + L]
    central = all(poisson_bracket(a, b).is_zero() for _, a in Z for b in Pi)
    print(f"q={q} z={z}: |Z|={len(Z)} |L|={len(L)} central={central} "
          f"rank={jacobian_rank(Pi)}")

for q in range(1, 5):
    print(f"spin-{q}/2 matrices:", check_representation(build_rep_matrices(q, 1)).summary())

part = GroupPartition.from_frequencies((1, 1, 2))
S = build_partition_set(part, [(1, 2), (1, 0)], [(2, -1)], [1, 0], k_prime=1)
print("partition set on 1:1:2:", S.names, "->", verify_set(S).summary())
