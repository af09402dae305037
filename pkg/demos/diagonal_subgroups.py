"""
Subgroups of G^r normalized by the diagonal
===========================================

For a non-abelian simple group the only such subgroups are products of
diagonals, counted by sum_j C(r, j) Bell(j).
"""

from heegner_lab.diagonals import (bundled_group, delta_normalized_subgroups, expected_count,
                                   is_delta_normalized, outer_automorphisms, twisted_diagonal)

G = bundled_group("A5")
for r in (1, 2):
    subs = delta_normalized_subgroups(G, r)
    print(f"r={r}: {len(subs)} subgroups (expected {expected_count(r)})")
    for h in subs:
        print("   order", len(h), "blocks", h.certificate)

# twisting the diagonal by an outer automorphism breaks normalization
phi = outer_automorphisms(G)[0]
print("S5-twisted diagonal normalized?", is_delta_normalized(twisted_diagonal(G, phi), G))
