"""
Ideal classes and Brandt matrices
=================================

The supersingular locus mod l is modeled by the right ideal classes of a
maximal order in the quaternion algebra ramified at {l, infinity}.
"""

from fractions import Fraction

from heegner_lab.grossgalois import class_data
from heegner_lab.quaternion import brandt_matrix, definite_algebra, expected_mass, mass

# the algebra and its ramification
B = definite_algebra(37)
print(B, "ramified at", B.ramified_primes)

# enumerate the classes; each carries its unit group order w
classes = class_data(37)
for c in classes:
    print(c, "theta:", c.theta(6))

# Eichler's mass formula is an exact certificate for the enumeration
print("mass:", mass(classes), "expected:", expected_mass(37))
assert mass(classes) == Fraction(36, 24)

# Brandt matrices: rows sum to sigma_1(m), and they commute
B2, B3 = brandt_matrix(classes, 2), brandt_matrix(classes, 3)
print("B(2) =", B2.matrix)
print("B(3) =", B3.matrix)
print("B(2)B(3) == B(6):", B2 @ B3 == brandt_matrix(classes, 6).matrix)

# trace of B(p) = p + 1 + (sum of a_p over the two newforms of level 37)
for p in (2, 3, 5, 7):
    M = brandt_matrix(classes, p).matrix
    tr = sum(M[i][i] for i in range(len(M)))
    print(p, "trace", tr, "-> a_p sum", tr - p - 1)
