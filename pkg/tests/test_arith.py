from fractions import Fraction
from itertools import product

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from heegner_lab.arith import (Fq2, FpPoly, crt, factorize, is_prime, kronecker, legendre,
                               next_prime, poly_roots, primes_up_to, rational_valuation, sigma1,
                               smallest_nonresidue, sqrt_mod, sqrt_mod_prime_power, xgcd)

SMALL_PRIMES = [p for p in range(3, 60) if sympy.isprime(p)]


def test_primality_matches_sympy():
    assert [n for n in range(2000) if is_prime(n)] == list(sympy.primerange(0, 2000))
    assert primes_up_to(100) == list(sympy.primerange(0, 101))
    assert is_prime(2 ** 61 - 1) and not is_prime(3215031751)
    assert next_prime(11) == 13 and next_prime(1) == 2


@given(st.integers(1, 10 ** 9))
@settings(max_examples=200, deadline=None)
def test_factorize_roundtrip(n):
    f = factorize(n)
    assert f.value() == n
    assert dict(f.factors) == sympy.factorint(n)


@given(st.integers(1, 5000))
@settings(deadline=None)
def test_sigma1_is_divisor_sum(n):
    assert sigma1(n) == sympy.divisor_sigma(n, 1)


@given(st.integers(-500, 500), st.integers(1, 499).filter(lambda m: m % 2))
def test_kronecker_matches_jacobi_on_odd_moduli(D, m):
    assert kronecker(D, m) == sympy.jacobi_symbol(D, m)


@given(st.integers(-300, 300), st.integers(1, 200), st.integers(1, 200))
def test_kronecker_multiplicative_in_modulus(D, m, n):
    assert kronecker(D, m * n) == kronecker(D, m) * kronecker(D, n)


def test_kronecker_at_two():
    # (D/2) = 0 for even D, +1 for D = 1, 7 mod 8, -1 for D = 3, 5 mod 8
    assert [kronecker(D, 2) for D in (-3, -4, -7, -8, -15)] == [-1, 0, 1, 0, 1]


@pytest.mark.parametrize("p", SMALL_PRIMES)
def test_sqrt_mod_and_nonresidue(p):
    squares = {x * x % p for x in range(p)}
    u = smallest_nonresidue(p)
    assert u not in squares and all(v in squares for v in range(1, u))
    for a in range(p):
        r = sqrt_mod(a, p)
        assert (r is None) == (a not in squares)
        if r is not None:
            assert r * r % p == a and r <= p - r
            assert legendre(a, p) == (0 if a == 0 else 1)


@given(st.sampled_from([3, 5, 7, 11, 2]), st.integers(1, 4), st.integers(0, 10 ** 6))
@settings(deadline=None)
def test_sqrt_mod_prime_power_brute_force(p, e, a):
    mod = p ** e
    assert sqrt_mod_prime_power(a, p, e) == sorted(x for x in range(mod) if x * x % mod == a % mod)


@given(st.integers(-10 ** 6, 10 ** 6), st.integers(-10 ** 6, 10 ** 6))
def test_xgcd(a, b):
    g, x, y = xgcd(a, b)
    assert g == abs(sympy.gcd(a, b)) and a * x + b * y == g


@given(st.lists(st.tuples(st.integers(0, 10 ** 4), st.sampled_from([3, 4, 5, 7, 11, 13])),
                min_size=1, max_size=4, unique_by=lambda t: t[1]))
def test_crt(pairs):
    res, mods = zip(*pairs)
    if any(sympy.gcd(a, b) > 1 for i, a in enumerate(mods) for b in mods[i + 1:]):
        return
    x, m = crt(res, mods)
    assert all((x - r) % n == 0 for r, n in pairs) and 0 <= x < m


def test_rational_valuation():
    assert rational_valuation(Fraction(50, 3), 5) == 2
    assert rational_valuation(Fraction(7, 40), 2) == -3
    with pytest.raises(ValueError):
        rational_valuation(0, 3)


@pytest.mark.parametrize("ell", [3, 5, 7, 11])
def test_fq2_field_axioms(ell):
    F = Fq2(ell)
    els = list(F.elements())
    assert len(els) == ell * ell
    one = F.one()
    for x in els[1:]:
        assert x * x.inverse() == one and one / x == x.inverse()
    # Frobenius is additive and fixes exactly F_l
    fixed = [x for x in els if x ** ell == x]
    assert len(fixed) == ell


@given(st.integers(0, 10), st.integers(0, 10), st.integers(0, 10), st.integers(0, 10))
def test_fq2_distributive(a, b, c, d):
    F = Fq2(11)
    x, y, z = F(a, b), F(c, d), F(a + d, b * c)
    assert x * (y + z) == x * y + x * z
    assert (x * y) * z == x * (y * z)


@pytest.mark.parametrize("ell", [5, 7, 13])
def test_poly_roots_base_field_brute_force(ell):
    for coeffs in product(range(ell), repeat=3):
        f = FpPoly(list(coeffs) + [1], ell)
        got = {r: m for r, m in poly_roots(f)}
        brute = [x for x in range(ell) if f(x) == 0]
        assert sorted(got) == brute
        assert sum(got.values()) <= 3


def test_poly_roots_extension_field():
    ell = 7
    F = Fq2(ell)
    # X^2 - u is irreducible over F_7 and splits over F_49 as (X - t)(X + t)
    u = F.u
    f = FpPoly([-u, 0, 1], ell)
    assert poly_roots(f) == []
    roots = [r for r, m in poly_roots(f, field="ext")]
    assert sorted(roots) == sorted([F(0, 1), F(0, -1)])
    # repeated root multiplicity
    g = FpPoly([1, 2, 1], ell)
    assert poly_roots(g) == [(6, 2)]


def test_poly_roots_rejects_zero():
    with pytest.raises(ValueError):
        poly_roots(FpPoly([], 5))
