"""Exact experiments on Gross points, supersingular reduction and Hecke orbits.

Modules
-------
arith        primes, finite fields F_l and F_{l^2}, polynomial root finding
quadratic    binary quadratic forms, class groups, orders O_n
quaternion   definite quaternion algebras, Eichler orders, ideal classes, Brandt matrices
heckecosets  q-adic Galois-orbit and Hecke coset representatives
grossgalois  Gross points, the Pic(O_n) action, equidistribution and surjectivity runs
ssoracle     supersingular j-invariants, Hilbert class and modular polynomials
diagonals    Goursat enumeration of Delta-normalized subgroups of G^r
cli          command-line front end
"""

__version__ = "0.1.0"
