from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given, settings, strategies as st

from heegner_lab.arith import kronecker
from heegner_lab.quadratic import (BQForm, ImagQuadField, Splitting, class_group, class_number,
                                   compose, d_of_n, heegner_check, is_fundamental, order_from_disc,
                                   prime_form_above, principal_form, reduce_form, reduced_forms,
                                   splitting_type)

FUNDAMENTAL = [D for D in range(-400, -2) if is_fundamental(D)]


def _h_formula(D0, n):
    # h(n^2 D0) = h(D0) n prod_{p | n} (1 - (D0/p)/p) / [O_L^* : O_n^*]
    h = Fraction(class_number(D0) * n)
    for p in sympy.primefactors(n):
        h *= 1 - Fraction(kronecker(D0, p), p)
    w = {-3: 6, -4: 4}.get(D0, 2)
    return h / (w // 2) if n > 1 else h


def test_known_class_numbers():
    table = {-3: 1, -4: 1, -7: 1, -8: 1, -11: 1, -15: 2, -20: 2, -23: 3, -47: 5, -71: 7,
             -84: 4, -163: 1, -199: 9, -419: 9}
    for D, h in table.items():
        assert class_number(D) == h, D


def test_fundamental_discriminants():
    assert [D for D in range(-30, 0) if is_fundamental(D)] == \
        [-24, -23, -20, -19, -15, -11, -8, -7, -4, -3]
    with pytest.raises(ValueError):
        ImagQuadField(-12)


@given(st.sampled_from(FUNDAMENTAL), st.integers(1, 12))
@settings(max_examples=80, deadline=None)
def test_class_number_formula(D0, n):
    assert class_number(n * n * D0) == _h_formula(D0, n)


@given(st.integers(1, 60), st.integers(-60, 60), st.integers(1, 60))
def test_reduce_form_is_reduced_and_equivalent_invariants(a, b, c):
    assume(b * b - 4 * a * c < 0)
    f = BQForm(a, b, c)
    g = reduce_form(f)
    assert g.is_reduced() and g.disc == f.disc
    # reduction preserves the set of small represented values
    vals_f = {f(x, y) for x in range(-12, 13) for y in range(-12, 13) if (x, y) != (0, 0)}
    assert min(vals_f) == g.a
    assert reduce_form(g) == g


def test_reduced_forms_brute_force():
    for D in (-3, -4, -20, -23, -56, -84, -191, -300):
        brute = []
        for a in range(1, 40):
            for b in range(-a + 1, a + 1):
                if (b * b - D) % (4 * a):
                    continue
                c = (b * b - D) // (4 * a)
                f = BQForm(a, b, c)
                if f.is_reduced() and f.is_primitive():
                    brute.append(f)
        assert sorted(reduced_forms(D)) == sorted(brute)


@pytest.mark.parametrize("D", [-23, -56, -84, -3 * 49, -4 * 25, -15 * 9, -191])
def test_class_group_axioms(D):
    G = class_group(D)
    e = principal_form(D)
    assert G.elements[0] == e
    for f in G:
        assert compose(f, e) == f
        assert compose(f, f.inverse()) == e
        for g in G:
            assert compose(f, g) == compose(g, f)
            for k in G:
                assert compose(compose(f, g), k) == compose(f, compose(g, k))


def test_class_group_structure():
    # Cl(-84) = (Z/2)^2, Cl(-23) = Z/3, Cl(-47) = Z/5
    assert all(compose(f, f) == principal_form(-84) for f in class_group(-84))
    G = class_group(-47)
    gen = BQForm(2, 1, 6)
    assert len(G.generated_subgroup([gen])) == 5
    assert G.power(gen, 5) == principal_form(-47)


def test_reduce_form_example():
    assert reduce_form(BQForm(6, 5, 2)) == BQForm(2, -1, 3)
    with pytest.raises(ValueError):
        reduce_form(BQForm(1, 3, 1))


def test_splitting_and_density():
    L = ImagQuadField(-3)
    assert splitting_type(L, 11) is Splitting.INERT
    assert splitting_type(L, 13) is Splitting.SPLIT
    assert splitting_type(L, 3) is Splitting.RAMIFIED
    assert d_of_n(7 * 5, L) == Fraction(6, 8)
    assert d_of_n(13 * 13, L) == Fraction(12, 14)
    assert heegner_check(ImagQuadField(-7), 2) and not heegner_check(ImagQuadField(-7), 3)


def test_order_from_disc():
    o = order_from_disc(-3 * 25)
    assert o.field.D == -3 and o.conductor == 5
    o = order_from_disc(-16)
    assert o.field.D == -4 and o.conductor == 2


@given(st.sampled_from([-23, -47, -71, -4 * 26, -3 * 49]), st.sampled_from(list(sympy.primerange(2, 80))))
def test_prime_form_has_norm_p(D, p):
    o = order_from_disc(D)
    assume(o.conductor % p and kronecker(D, p) != -1)
    f = prime_form_above(o, p)
    assert f.disc == D
    assert any(f(x, y) == p for x in range(-10, 11) for y in range(-10, 11))
