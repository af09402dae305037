from fractions import Fraction
from itertools import product

import sympy
from hypothesis import given, settings, strategies as st

from heegner_lab.lattice import det, hnf, lattice_basis, lll_gram, short_vectors, theta_counts, vectors_of_norm


def _q(G, x):
    return sum(G[i][j] * x[i] * x[j] for i in range(len(x)) for j in range(len(x)))


def _brute(G, bound, box=6):
    n = len(G)
    return sorted(x for x in product(range(-box, box + 1), repeat=n)
                  if any(x) and _q(G, x) <= bound)


int_matrix = st.lists(st.lists(st.integers(-9, 9), min_size=3, max_size=3), min_size=3, max_size=3)


@given(int_matrix)
def test_det_matches_sympy(M):
    assert det([[Fraction(v) for v in r] for r in M]) == sympy.Matrix(M).det()


@given(st.lists(st.lists(st.integers(-20, 20), min_size=3, max_size=3), min_size=1, max_size=5))
def test_hnf_spans_same_lattice(rows):
    H = hnf(rows)
    if not any(any(r) for r in rows):
        assert H == []
        return
    # same rank and same determinant of the Gram matrix
    M, N = sympy.Matrix(rows), sympy.Matrix(H)
    assert M.rank() == N.rank() == len(H)
    assert sympy.Matrix.vstack(N, M).rank() == N.rank()
    # each HNF row is an integer combination of the input (check via HNF idempotence)
    assert hnf(H) == H


def test_lattice_basis_of_rationals():
    B = lattice_basis([[Fraction(1, 2), 0], [0, Fraction(1, 3)], [Fraction(1, 2), Fraction(1, 3)]])
    assert det([list(r) for r in B]) in (Fraction(1, 6), Fraction(-1, 6))


def test_vectors_and_theta_against_brute_force():
    G = [[2, 1, 0], [1, 2, 1], [0, 1, 4]]
    bound = 6
    got = sorted(tuple(x) for x, _ in short_vectors(G, bound))
    assert got == _brute(G, bound)
    th = theta_counts(G, bound)
    assert th[0] == 1
    for k in range(1, bound + 1):
        assert th[k] == sum(1 for x in _brute(G, bound) if _q(G, x) == k)
        assert len(vectors_of_norm(G, k)) == th[k]


def test_theta_sum_of_squares():
    # r_3(k): 6, 12, 8, 6, 24 for k = 1..5
    assert theta_counts([[1, 0, 0], [0, 1, 0], [0, 0, 1]], 5) == [1, 6, 12, 8, 6, 24]


@given(st.integers(1, 6), st.integers(-5, 5), st.integers(1, 6), st.integers(-5, 5))
@settings(deadline=None)
def test_lll_preserves_determinant_and_reduces(a, b, c, d):
    basis = sympy.Matrix([[a, b], [c, d]])
    if basis.det() == 0:
        return
    G = [[Fraction(v) for v in row] for row in (basis * basis.T).tolist()]
    U, R = lll_gram(G)
    assert abs(det([[Fraction(v) for v in r] for r in U])) == 1
    n = len(G)
    assert R == [[sum(U[i][k] * G[k][l] * U[j][l] for k in range(n) for l in range(n))
                  for j in range(n)] for i in range(n)]
    # size reduction and the Lovasz condition with delta = 3/4
    mu = R[0][1] / R[0][0]
    assert abs(mu) <= Fraction(1, 2)
    assert R[1][1] - mu * mu * R[0][0] >= (Fraction(3, 4) - mu * mu) * R[0][0]
    shortest = min(_q(G, x) for x in product(range(-8, 9), repeat=2) if any(x))
    assert R[0][0] <= 2 * shortest
