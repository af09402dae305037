"""Elliptic-curve side: supersingular j-invariants, class polynomials, isogeny walks.

Everything here is computed from elliptic curves and modular functions only,
so it can be compared against the quaternion model by counts.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd, isqrt

import mpmath

from ._data import data_dir
from .arith import Fq2, FpPoly, factorize, is_prime, poly_roots
from .quadratic import ImagQuadField, Splitting, class_number, reduced_forms, splitting_type

MAX_CLASSPOLY_DISC = 10 ** 4
SUPPORTED_ISOGENY_PRIMES = (2, 3, 5, 7)


class PrecisionError(ArithmeticError):
    pass


class ModelInconsistency(AssertionError):
    pass


# ----------------------------------------------------------------------------
# supersingular j-invariants

@dataclass(frozen=True)
class SupersingularSet:
    ell: int
    js: tuple
    weights: tuple

    def __len__(self):
        return len(self.js)

    def __contains__(self, j):
        return j in self.js

    def mass(self):
        """sum 1/|Aut(E)| = sum 1/(2 * weight)."""
        return sum((Fraction(1, 2 * w) for w in self.weights), Fraction(0))


def _quadratic_character(ell):
    chi = [-1] * ell
    chi[0] = 0
    for x in range(1, ell):
        chi[x * x % ell] = 1
    return chi


def _trace_over_fp(j, ell, chi=None):
    """Frobenius trace of a curve with j-invariant j over F_ell (ell >= 5)."""
    chi = chi or _quadratic_character(ell)
    j %= ell
    if j == 0:
        a, b = 0, 1
    elif j == 1728 % ell:
        a, b = 1, 0
    else:
        k = j * pow((1728 - j) % ell, -1, ell) % ell
        a, b = 3 * k % ell, 2 * k % ell
    # y^2 = x^3 + a x + b
    return -sum(chi[(x * x * x + a * x + b) % ell] for x in range(ell))


def _hasse_js(ell):
    """Supersingular j from the Legendre-form Hasse invariant sum C(m,i)^2 lambda^i."""
    m = (ell - 1) // 2
    F = Fq2(ell)
    H = FpPoly([comb(m, i) ** 2 % ell for i in range(m + 1)], ell, ext=True)
    js = set()
    for lam, _ in poly_roots(H, field="ext"):
        one = F(1, 0)
        num = (lam * lam - lam + one) ** 3 * 256
        den = lam * lam * (lam - one) ** 2
        js.add(num * den.inverse())
    return js


def _sort_key(j):
    return (j.b, j.a)


def supersingular_js(ell):
    """All supersingular j in F_{ell^2}; F_ell ones are also confirmed by point counts."""
    if not is_prime(ell) or ell < 5:
        raise ValueError(f"supersingular enumeration needs a prime l >= 5, got {ell}")
    F = Fq2(ell)
    hasse = _hasse_js(ell)
    chi = _quadratic_character(ell)
    counted = {F(j, 0) for j in range(ell) if _trace_over_fp(j, ell, chi) % ell == 0}
    rational = {j for j in hasse if j.b == 0}
    if rational != counted:
        raise ModelInconsistency(f"Hasse invariant and point counts disagree for l={ell}")
    js = tuple(sorted(hasse, key=_sort_key))
    weights = tuple(3 if j == F(0, 0) else 2 if j == F(1728 % ell, 0) else 1 for j in js)
    lo = (ell - 1) // 12
    if not lo <= len(js) <= lo + 2:
        raise ModelInconsistency(f"{len(js)} supersingular j for l={ell}")
    return SupersingularSet(ell, js, weights)


# ----------------------------------------------------------------------------
# Hilbert class polynomials

@dataclass(frozen=True)
class HilbertClassPoly:
    D: int
    coeffs: tuple  # constant term first; monic

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def export(self):
        """'D c0 c1 ... 1'."""
        return " ".join(str(v) for v in (self.D,) + self.coeffs)

    def reduce(self, ell):
        return FpPoly([c % ell for c in self.coeffs], ell, ext=True)


def _digits_needed(D, forms):
    s = sum(1.0 / f.a for f in forms)
    return int(mpmath.pi * isqrt(-D + 1) * s / mpmath.log(10)) + 1


def hilbert_class_poly(D, margin=20, retries=2):
    """H_D from j at the CM points of the reduced forms, rounded with a certificate."""
    if D >= 0 or D % 4 not in (0, 1):
        raise ValueError(f"{D} is not a negative discriminant")
    if -D > MAX_CLASSPOLY_DISC:
        raise ValueError(f"|D| = {-D} exceeds the precision budget {MAX_CLASSPOLY_DISC}")
    if margin < 4:
        raise ValueError("margin must leave at least 2 certified guard digits")
    forms = reduced_forms(D)
    base = _digits_needed(D, forms)
    for attempt in range(retries + 1):
        extra = margin * (2 ** attempt)
        coeffs = _class_poly_at(D, forms, base + extra, extra)
        if coeffs is not None:
            return HilbertClassPoly(D, tuple(coeffs))
    raise PrecisionError(f"rounding certificate failed for D={D}")


def _class_poly_at(D, forms, dps, extra):
    with mpmath.workdps(dps):
        sq = mpmath.sqrt(mpmath.mpf(-D))
        poly = [mpmath.mpc(1)]
        for f in forms:
            tau = mpmath.mpc(-f.b, sq) / (2 * f.a)
            j = 1728 * mpmath.kleinj(tau)
            # poly *= (X - j), constant term first
            new = [mpmath.mpc(0)] * (len(poly) + 1)
            for i, c in enumerate(poly):
                new[i + 1] += c
                new[i] -= c * j
            poly = new
        tol = mpmath.mpf(10) ** (-(extra // 2))
        out = []
        for c in poly:
            r = int(mpmath.nint(c.real))
            if abs(c.real - r) > tol or abs(c.imag) > tol:
                return None
            out.append(r)
    return out


def reduce_and_roots(H, ell, check_supersingular=None):
    """Roots of H mod ell in F_{ell^2} with multiplicity, as a flat sorted list.

    When ell is inert in Q(sqrt D) every root must be supersingular; a
    failure raises ModelInconsistency.
    """
    roots = []
    for r, m in poly_roots(H.reduce(ell), field="ext"):
        roots.extend([r] * m)
    roots.sort(key=_sort_key)
    if check_supersingular is None:
        check_supersingular = _inert_for(H.D, ell)
    if check_supersingular:
        ss = supersingular_js(ell)
        bad = [r for r in roots if r not in ss]
        if bad:
            raise ModelInconsistency(f"roots {bad} of H_{H.D} mod {ell} are not supersingular")
    return roots


def _inert_for(D, ell):
    from .quadratic import order_from_disc
    fld = order_from_disc(D).field
    return splitting_type(fld, ell) is Splitting.INERT


# ----------------------------------------------------------------------------
# modular polynomials and isogeny walks

@dataclass(frozen=True)
class ModularPolynomialData:
    p: int
    coeffs: dict  # (i, j) -> c, both triangles filled

    def __call__(self, x, y):
        return sum(c * x ** i * y ** j for (i, j), c in self.coeffs.items())

    def in_y(self, x, ell):
        """Phi_p(x, Y) over F_{ell^2} for x in F_{ell^2}."""
        F = Fq2(ell)
        cs = [F(0, 0) for _ in range(self.p + 2)]
        pw = [F(1, 0)]
        for _ in range(self.p + 1):
            pw.append(pw[-1] * x)
        for (i, j), c in self.coeffs.items():
            cs[j] = cs[j] + pw[i] * (c % ell)
        return FpPoly(cs, ell, ext=True)


# known CM pairs (j1, j2, p) with Phi_p(j1, j2) = 0
CM_SPOT_CHECKS = (
    (0, 54000, 2),
    (1728, 287496, 2),
    (-3375, 16581375, 2),
    (-3375, -3375, 2),
    (0, -12288000, 3),
    (8000, 8000, 3),
    (1728, 1728, 5),
    (-32768, -32768, 5),
    (0, 0, 7),
    (-3375, -3375, 7),
)


_MODPOLY_CACHE = {}


def load_modular_polynomial(p, directory=None):
    """Read and validate Phi_p from 'p <prime>' / 'i j c' text data."""
    if p not in SUPPORTED_ISOGENY_PRIMES:
        raise ValueError(f"no modular polynomial data for p={p}")
    path = data_dir(directory) / f"modpoly_{p}.txt"
    key = (p, str(path))
    if key in _MODPOLY_CACHE:
        return _MODPOLY_CACHE[key]
    lines = [ln.split() for ln in path.read_text().splitlines() if ln.strip()]
    if lines[0] != ["p", str(p)]:
        raise ValueError(f"{path}: bad header {lines[0]}")
    coeffs = {}
    for parts in lines[1:]:
        i, j, c = (int(v) for v in parts)
        for key2 in ((i, j), (j, i)):
            if coeffs.get(key2, c) != c:
                raise ValueError(f"{path}: asymmetric coefficient at {key2}")
            coeffs[key2] = c
    phi = ModularPolynomialData(p, coeffs)
    _validate(phi)
    _MODPOLY_CACHE[key] = phi
    return phi


def _validate(phi):
    p = phi.p
    if max(i for i, _ in phi.coeffs) != p + 1 or phi.coeffs.get((p + 1, 0)) != 1:
        raise ValueError(f"Phi_{p} does not have degree {p + 1} with leading coefficient 1")
    for j1, j2, q in CM_SPOT_CHECKS:
        if q == p and phi(j1, j2) != 0:
            raise ValueError(f"Phi_{p}({j1}, {j2}) != 0")


def _roots_multiset(phi, x, ell):
    out = []
    for r, m in poly_roots(phi.in_y(x, ell), field="ext"):
        out.extend([r] * m)
    return out


def hecke_orbit_multiset(j0, n, ell, directory=None):
    """Endpoints of non-backtracking isogeny walks realizing T_n on j0 (size deg_a(n))."""
    F = Fq2(ell)
    if not hasattr(j0, "ell"):
        j0 = F(j0 % ell, 0)
    current = [j0]
    for p, e in factorize(n):
        if p not in SUPPORTED_ISOGENY_PRIMES or p == ell:
            raise ValueError(f"unsupported prime factor {p} of n={n}")
        phi = load_modular_polynomial(p, directory)
        nxt = []
        for start in current:
            # walks as (previous, current) pairs
            walks = [(None, start)]
            for _ in range(e):
                step = []
                for prev, cur in walks:
                    nbrs = _roots_multiset(phi, cur, ell)
                    if prev is not None:
                        nbrs.remove(prev)
                    step.extend((cur, y) for y in nbrs)
                walks = step
            nxt.extend(y for _, y in walks)
        current = nxt
    return sorted(current, key=_sort_key)


# ----------------------------------------------------------------------------
# count comparison between the two models

@dataclass
class CrossReport:
    ell: int
    D: int
    n: int
    class_number: int
    classpoly_degree: int
    orbit_size: int
    table_rows: int
    root_count: int
    all_supersingular: bool

    @property
    def consistent(self):
        return (self.class_number == self.classpoly_degree == self.orbit_size
                == self.table_rows == self.root_count and self.all_supersingular)

    def mismatches(self):
        names = ("classpoly_degree", "orbit_size", "table_rows", "root_count")
        out = [k for k in names if getattr(self, k) != self.class_number]
        if not self.all_supersingular:
            out.append("all_supersingular")
        return out

    def to_dict(self):
        d = dict(self.__dict__)
        d["consistent"] = self.consistent
        return d


def cross_check_counts(ell, fld, n, classes):
    from .grossgalois import Twist, simultaneous_reduction
    fld = fld if isinstance(fld, ImagQuadField) else ImagQuadField(fld)
    if splitting_type(fld, ell) is not Splitting.INERT:
        raise ValueError(f"l={ell} is not inert in {fld}")
    N = classes[0].order.level
    if gcd(n, ell * N) != 1:
        raise ValueError(f"n={n} must be coprime to l*N = {ell * N}")
    disc = n * n * fld.D
    h = class_number(disc)
    H = hilbert_class_poly(disc)
    ss = supersingular_js(ell)
    roots = reduce_and_roots(H, ell, check_supersingular=False)
    table = simultaneous_reduction(n, [Twist.identity(fld.D)], classes, fld)
    return CrossReport(
        ell=ell,
        D=fld.D,
        n=n,
        class_number=h,
        classpoly_degree=H.degree,
        orbit_size=table.distinct_points,
        table_rows=len(table),
        root_count=len(roots),
        all_supersingular=all(r in ss for r in roots),
    )
