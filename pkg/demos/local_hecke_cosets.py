"""
Local Galois cosets inside a Hecke double coset
===============================================
"""

from heegner_lab.heckecosets import (coset_key, galois_cosets, hecke_reps, hecke_set,
                                     verify_orbit_containment, verify_prime_power)
from heegner_lab.quadratic import ImagQuadField, Splitting

# q = 7 inert: the torus reps 1 + b sqrt(3) and 21 + sqrt(3), times diag(7, 1)
for M in galois_cosets(7, 1, Splitting.INERT):
    print(M, coset_key(M, 7))

# split q: the Galois cosets miss 2 q^(e-1) of the q^(e-1)(q+1) Hecke cosets
print(verify_prime_power(5, 2, Splitting.SPLIT))
print(len(hecke_reps(5, 2)), len(hecke_set(5, 2, Splitting.SPLIT)))

# a composite conductor and its density d(n)
rep = verify_orbit_containment(35, ImagQuadField(-4), 11)
print(rep.to_json(), "d =", rep.d)
