"""
Two models of the supersingular locus
=====================================

Supersingular j-invariants in F_{l^2}, reductions of Hilbert class
polynomials, and isogeny walks through the classical modular polynomials,
compared against the quaternion side.
"""

from collections import Counter

from heegner_lab.grossgalois import class_data
from heegner_lab.quaternion import brandt_matrix
from heegner_lab.ssoracle import (cross_check_counts, hecke_orbit_multiset, hilbert_class_poly,
                                  reduce_and_roots, supersingular_js)

ell = 37
S = supersingular_js(ell)
print("supersingular j mod 37:", [str(j) for j in S.js], "mass", S.mass())

# CM by an order in which 37 is inert reduces to supersingular curves
H = hilbert_class_poly(-15)
print("H_-15 =", H.export())
print("roots mod 37:", [str(r) for r in reduce_and_roots(H, ell)])

# the 2-isogeny graph and B(2) share a spectrum
for j in S.js:
    print(str(j), "->", dict(Counter(str(y) for y in hecke_orbit_multiset(j, 2, ell))))
print("B(2) =", brandt_matrix(class_data(ell), 2).matrix)

# the count comparison used by the acceptance suite
rep = cross_check_counts(11, -4, 3, class_data(11))
print(rep.to_dict())
