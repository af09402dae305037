import importlib.util
import os
from collections import Counter
from pathlib import Path

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from heegner_lab.arith import Fq2
from heegner_lab.grossgalois import class_data
from heegner_lab.heckecosets import deg_a
from heegner_lab.quadratic import class_number
from heegner_lab.quaternion import brandt_matrix
from heegner_lab.ssoracle import (PrecisionError, cross_check_counts, hecke_orbit_multiset,
                                  hilbert_class_poly, load_modular_polynomial, reduce_and_roots,
                                  supersingular_js)

ROOT = Path(__file__).resolve().parents[1]
SS_PRIMES = [p for p in sympy.primerange(5, 110)]


def _brute_rational_ss(ell):
    """j in F_l with #E(F_l) = l + 1, by naive point counting on y^2 = x^3 + a x + b."""
    out = set()
    for a in range(ell):
        for b in range(ell):
            if (4 * a ** 3 + 27 * b * b) % ell == 0:
                continue
            pts = 1 + sum(1 for x in range(ell) for y in range(ell) if (y * y - x ** 3 - a * x - b) % ell == 0)
            if pts == ell + 1:
                out.add(1728 * 4 * a ** 3 * pow(4 * a ** 3 + 27 * b * b, -1, ell) % ell)
    return out


@pytest.mark.parametrize("ell", SS_PRIMES)
def test_supersingular_count_and_mass(ell):
    S = supersingular_js(ell)
    r = ell % 12
    assert len(S) == ell // 12 + {1: 0, 5: 1, 7: 1, 11: 2}[r]
    assert S.mass() == sympy.Rational(ell - 1, 24)
    assert len(S) == len(class_data(ell))


@pytest.mark.parametrize("ell", [5, 7, 11, 13, 17, 19, 23, 29, 31])
def test_rational_supersingular_against_point_counts(ell):
    S = supersingular_js(ell)
    assert {j.a for j in S.js if j.b == 0} == _brute_rational_ss(ell)
    assert all(j ** (ell * ell) == j for j in S.js)


def test_supersingular_frozen():
    F = Fq2(37)
    S = supersingular_js(37)
    # 3 +- sqrt(15) in F_37(t), t^2 = 2: sqrt(15) = 10t
    assert S.js == (F(8), F(3, 10), F(3, 27))
    assert supersingular_js(11).js == (Fq2(11)(0), Fq2(11)(1))
    assert supersingular_js(11).weights == (3, 2)
    with pytest.raises(ValueError):
        supersingular_js(3)


KNOWN_CLASS_POLYS = {
    -3: (0, 1),
    -4: (-1728, 1),
    -7: (3375, 1),
    -8: (-8000, 1),
    -15: (-121287375, 191025, 1),
    -20: (-681472000, -1264000, 1),
    -23: (12771880859375, -5151296875, 3491750, 1),
}


@pytest.mark.parametrize("D", sorted(KNOWN_CLASS_POLYS))
def test_hilbert_class_poly_known(D):
    assert hilbert_class_poly(D).coeffs == KNOWN_CLASS_POLYS[D]


@given(st.integers(3, 1200).map(lambda k: -k).filter(lambda D: D % 4 in (0, 1)))
@settings(max_examples=25)
def test_hilbert_class_poly_degree(D):
    H = hilbert_class_poly(D)
    assert H.degree == class_number(D) and H.coeffs[-1] == 1
    assert H.export().split()[0] == str(D)


def test_hilbert_class_poly_bounds(monkeypatch):
    with pytest.raises(ValueError):
        hilbert_class_poly(-10 ** 5)
    with pytest.raises(ValueError):
        hilbert_class_poly(-23, margin=0)
    import heegner_lab.ssoracle as sso
    monkeypatch.setattr(sso, "_class_poly_at", lambda *a: None)
    with pytest.raises(PrecisionError):
        hilbert_class_poly(-23)


def test_reduce_and_roots_frozen():
    assert [str(r) for r in reduce_and_roots(hilbert_class_poly(-3), 11)] == ["0"]
    assert [str(r) for r in reduce_and_roots(hilbert_class_poly(-4), 11)] == ["1"]
    assert [str(r) for r in reduce_and_roots(hilbert_class_poly(-4), 13)] == ["12"]
    assert [str(r) for r in reduce_and_roots(hilbert_class_poly(-15), 11)] == ["0", "1"]


def _load_generator():
    spec = importlib.util.spec_from_file_location("gen_modpoly", ROOT / "scripts" / "gen_modpoly.py")
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    return mod


@pytest.mark.parametrize("p", [2, 3])
def test_modular_polynomial_data_regenerates(p):
    gen = _load_generator()
    phi = load_modular_polynomial(p)
    fresh = gen.phi(p)
    full = {}
    for (i, j), c in fresh.items():
        if c:
            full[i, j] = full[j, i] = c
    assert phi.coeffs == full


def test_phi2_classical_coefficients():
    phi = load_modular_polynomial(2)
    c = phi.coeffs
    assert c[3, 0] == 1 and c[2, 2] == -1 and c[2, 1] == 1488 and c[2, 0] == -162000
    assert c[1, 1] == 40773375 and c[1, 0] == 8748000000 and c[0, 0] == -157464000000000


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_modular_polynomial_symmetry_and_cm(p):
    phi = load_modular_polynomial(p)
    assert all(phi.coeffs[j, i] == c for (i, j), c in phi.coeffs.items())
    # j(i) = 1728 and j(p i) are p-isogenous
    Y = sympy.Symbol("Y")
    f = sympy.Poly(sum(c * 1728 ** i * Y ** j for (i, j), c in phi.coeffs.items()), Y)
    if p == 2:
        assert f.eval(287496) == 0
    if p == 3:
        # j(3i) = 76771008 + 44330496 sqrt(3)
        a, b = 76771008, 44330496
        minpoly = sympy.Poly(Y ** 2 - 2 * a * Y + a * a - 3 * b * b, Y)
        assert f.rem(minpoly).is_zero


def test_modular_polynomial_corrupt_directory(tmp_path):
    text = (ROOT / "src" / "heegner_lab" / "data" / "modpoly_2.txt").read_text()
    (tmp_path / "modpoly_2.txt").write_text(text.replace("1488", "1489"))
    with pytest.raises(ValueError):
        load_modular_polynomial(2, directory=tmp_path)
    os.environ.pop("HEEGNER_LAB_DATA", None)


def test_hecke_orbit_frozen():
    F = Fq2(11)
    assert hecke_orbit_multiset(0, 2, 11) == [F(1)] * 3
    assert len(hecke_orbit_multiset(0, 4, 11)) == 6
    assert len(hecke_orbit_multiset(1, 12, 11)) == 24
    assert len(hecke_orbit_multiset(0, 49, 11)) == 56


@pytest.mark.parametrize("ell", [11, 13, 37, 43, 61])
@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_isogeny_graph_matches_brandt_spectrum(ell, p):
    S = supersingular_js(ell)
    idx = {j: i for i, j in enumerate(S.js)}
    A = [[0] * len(S) for _ in S.js]
    for j in S.js:
        for y, m in Counter(hecke_orbit_multiset(j, p, ell)).items():
            A[idx[j]][idx[y]] += m
    B = brandt_matrix(class_data(ell), p).matrix
    x = sympy.Symbol("x")
    assert sympy.Matrix(A).charpoly(x) == sympy.Matrix(B).charpoly(x)
    assert all(sum(r) == p + 1 for r in A)


@given(st.sampled_from([11, 23]), st.integers(1, 40))
@settings(max_examples=20)
def test_orbit_size_is_hecke_degree(ell, n):
    if any(n % q == 0 for q in sympy.primefactors(n) if q not in (2, 3, 5, 7)) or n % ell == 0:
        return
    assert len(hecke_orbit_multiset(0, n, ell)) == deg_a(n)


def test_cross_check_frozen():
    rep = cross_check_counts(11, -3, 5, class_data(11))
    assert rep.consistent and rep.class_number == rep.classpoly_degree == rep.table_rows == 2
