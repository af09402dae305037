"""
Equidistribution and surjectivity at desk scale
===============================================

Rows of B(p)/(p+1) approach the weight measure as p grows; the Galois orbit
of a Gross point eventually meets every supersingular class.
"""

from heegner_lab.arith import kronecker, primes_up_to
from heegner_lab.grossgalois import class_data, hecke_equidist_stats, surjectivity_experiment
from heegner_lab.quadratic import ImagQuadField

ell = 11
rep = hecke_equidist_stats(ell, n_list=[p for p in primes_up_to(200) if p != ell],
                           classes=class_data(ell))
for row in rep.rows[::6]:
    print(f"p={row['n']:4d}  TV={row['tv']:.4f}  envelope={row['envelope']:.4f}")

ns = [p for p in primes_up_to(120) if kronecker(-3, p) == -1 and p != ell]
sj = surjectivity_experiment(ell, ImagQuadField(-3), n_list=ns)
print(sj.to_csv())
print(sj.summary)
