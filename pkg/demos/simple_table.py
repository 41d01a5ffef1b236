"""
Sweep the simple 1:1:2 family over small direction vectors ``(d1, d2)``.

For each direction the third integral is a single resonant monomial. The
script prints its exponents and degree and checks involution and rank.

Run: ``python demos/simple_table.py``
"""

from resonanza.setfactory import build_simple_set, simple_m_vector
from resonanza.verify import check_independence, check_involution

L = (1, 1, 2)

print(f"{'d':>8} {'m':>12} {'deg F3':>7} {'invol':>6} {'rank':>5}")
for d in [(1, 0), (1, -1), (3, 1), (3, -1), (2, 1), (5, 1), (5, 3), (5, -1)]:
    S = build_simple_set(L, *d)
    inv = check_involution(S).passed
    rank = check_independence(S).checks[0].rank
    m = simple_m_vector(1, 2, *d)
    print(f"{str(d):>8} {str(list(m)):>12} {S.polys[2].degree:>7} {str(inv):>6} {rank:>5}")
