"""
The 1:1:2 exceptional set, classically and after Weyl quantization.

Builds the set, shows its brackets vanish exactly, then quantizes it and
shows that one commutator picks up a lower-order term which a single
counterterm removes. Finishes by counting joint eigenvalues on a small
Fock truncation.

Run: ``python demos/exceptional_set.py``
"""

from resonanza.fock import build_basis, check_commutators, joint_spectrum
from resonanza.polycore import poisson_bracket
from resonanza.quantize import (commutator_audit, exceptional_anomaly, moyal_bracket,
                                quantize_set, quantize_exceptional)
from resonanza.setfactory import build_exceptional_set, exceptional_pieces
from resonanza.verify import verify_set

L = (1, 1, 2)

S = build_exceptional_set()
print("classical set:", S.name, "frequencies", S.l)
for name, p in S.elements:
    print(f"  {name}: degree {p.degree}, {len(p)} terms")
print(verify_set(S).summary())

F1, F2, F3 = S.polys
print("{F2, F3} is zero:", poisson_bracket(F2, F3).is_zero())

D0 = exceptional_pieces()["D0"]
print("Moyal(F2, F3) =", moyal_bracket(F2, F3), " D0 =", D0)

naive = quantize_set(S)
print("naive quantization:", commutator_audit(naive).summary())
an = exceptional_anomaly()
print("anomaly matches (5/2) i D0:", an["[F2,F3sym]"] == an["(5/2)i D0"])

fixed = quantize_exceptional()
print("corrected quantization:", commutator_audit(fixed).summary())

basis = build_basis(3, weights=L, cutoff=6)
print(check_commutators(fixed, basis, "float").summary())
lat = joint_spectrum(fixed, basis, L)
print(f"{len(lat.points)} joint eigenvalues on {len(basis)} states")
for E, n in sorted(lat.block_sums().items()):
    print(f"  E = {E}: {n}")
