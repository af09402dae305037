"""Local Galois-orbit and Hecke-coset representatives in GL_2(Q_q).

All q-adic statements are decided on exact rationals through valuations:
a matrix lies in GL_2(Z_q) iff its entries have v_q >= 0 and v_q(det) = 0.
The uniformizer is q itself, so every matrix here has rational entries.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import NamedTuple
import json

from .arith import factorize, rational_valuation, smallest_nonresidue
from .quadratic import ImagQuadField, Splitting, d_of_n, splitting_type

GALOIS = "galois"
HECKE = "hecke"


class Mat2Q(NamedTuple):
    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    @classmethod
    def of(cls, a, b, c, d):
        return cls(Fraction(a), Fraction(b), Fraction(c), Fraction(d))

    @property
    def det(self):
        return self.a * self.d - self.b * self.c

    def __matmul__(self, o):
        return Mat2Q(self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
                     self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d)

    def inverse(self):
        dt = self.det
        if dt == 0:
            raise ZeroDivisionError("singular matrix")
        return Mat2Q(self.d / dt, -self.b / dt, -self.c / dt, self.a / dt)

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def __repr__(self):
        return "(" + ", ".join(str(x) for x in (self.a, self.b)) + "; " + \
            ", ".join(str(x) for x in (self.c, self.d)) + ")"


IDENTITY = Mat2Q.of(1, 0, 0, 1)


def a_matrix(n):
    return Mat2Q.of(n, 0, 0, 1)


def _v(x, q):
    return 10 ** 9 if x == 0 else rational_valuation(x, q)


def in_gl2_zq(M, q):
    if M.det == 0:
        raise ValueError("singular matrix")
    return all(_v(x, q) >= 0 for x in M.entries()) and _v(M.det, q) == 0


def in_cartan_cell(M, q, e):
    """M in GL_2(Z_q) diag(q^e, 1) GL_2(Z_q)."""
    if M.det == 0:
        raise ValueError("singular matrix")
    ent = M.entries()
    if any(_v(x, q) < 0 for x in ent):
        return False
    if _v(M.det, q) != e:
        return False
    return any(_v(x, q) == 0 for x in ent)


def coset_key(M, q):
    """Canonical column-Hermite data (j, b) of M GL_2(Z_q) for q-integral M.

    M GL_2(Z_q) contains exactly one matrix (q^(e-j), b; 0, q^j) with
    0 <= b < q^(e-j), where e = v_q(det M).
    """
    a, b, c, d = M.entries()
    if any(_v(x, q) < 0 for x in (a, b, c, d)):
        raise ValueError("matrix is not q-integral")
    e = _v(M.det, q)
    vc, vd = _v(c, q), _v(d, q)
    j = min(vc, vd)
    top = b * Fraction(q ** j) / d if vd == j else a * Fraction(q ** j) / c
    mod = q ** (e - j)
    top = top.numerator * pow(top.denominator, -1, mod) % mod if mod > 1 else 0
    return e, j, top


def same_right_coset(M1, M2, q):
    """M1 GL_2(Z_q) == M2 GL_2(Z_q)."""
    return in_gl2_zq(M1.inverse() @ M2, q)


def h_matrix(q, e, kind):
    """h[q^e]: (q^e, 1; 0, 1) if q splits, diag(q^e, 1) if q is inert."""
    if kind is Splitting.SPLIT:
        return Mat2Q.of(q ** e, 1, 0, 1)
    if kind is Splitting.INERT:
        return Mat2Q.of(q ** e, 0, 0, 1)
    raise ValueError(f"no h[q^e] for a {kind.value} prime")


@dataclass
class CosetSet:
    q: int
    e: int
    splitting: Splitting
    reps: list
    kind: str

    def __len__(self):
        return len(self.reps)

    def __iter__(self):
        return iter(self.reps)


def expected_size(q, e, kind, which=GALOIS):
    if e == 0:
        return 1
    if which == HECKE or kind is Splitting.INERT:
        return q ** (e - 1) * (q + 1)
    return q ** (e - 1) * (q - 1)


def local_nonsquare_unit(q):
    """u_q: the least quadratic non-residue mod an odd prime q."""
    return smallest_nonresidue(q)


def _torus_generator(q, u):
    """(s, m) with omega^2 = s*omega + m generating the unramified Z_q-order.

    Odd q: omega = sqrt(u_q).  q = 2: omega = (1 + sqrt 5)/2, since Z_2[sqrt 5]
    is not maximal.  Multiplication by omega is the matrix (0, m; 1, s).
    """
    if q == 2:
        return 1, 1
    return 0, (local_nonsquare_unit(q) if u is None else u)


def s_n_reps(q, e, kind, u=None):
    """The Galois-orbit representatives S_{q^e}.

    Inert case: 1 + b*omega (b mod q^e) and q*a*m + omega (a mod q^(e-1)),
    written as 2x2 matrices; for odd q these are (1, b*u; b, 1) and
    (q*a*u, u; 1, q*a*u).
    """
    if e == 0:
        return CosetSet(q, 0, kind, [IDENTITY], GALOIS)
    n = q ** e
    if kind is Splitting.SPLIT:
        reps = [Mat2Q.of(a, 0, 0, 1) for a in range(1, n + 1) if a % q]
    elif kind is Splitting.INERT:
        s, m = _torus_generator(q, u)
        reps = [Mat2Q.of(1, b * m, b, 1 + b * s) for b in range(1, n + 1)]
        reps += [Mat2Q.of(q * a * m, m, 1, q * a * m + s) for a in range(1, q ** (e - 1) + 1)]
    else:
        raise ValueError(f"S_n undefined at a {kind.value} prime")
    return CosetSet(q, e, kind, reps, GALOIS)


def galois_cosets(q, e, kind, u=None):
    """S_{q^e} h[q^e]: one matrix per Galois coset."""
    S = s_n_reps(q, e, kind, u)
    if e == 0:
        return S
    h = h_matrix(q, e, kind)
    return CosetSet(q, e, kind, [g @ h for g in S.reps], GALOIS)


def hecke_reps(q, e):
    """Canonical right-coset representatives of GL_2(Z_q) a(q^e) GL_2(Z_q).

    Column-Hermite forms (q^k, b; 0, q^(e-k)) with 0 <= b < q^k and the
    entries not all divisible by q: the upper family k = e and the lower ones.
    """
    reps = []
    for k in range(e, -1, -1):
        for b in range(q ** k):
            if 0 < k < e and b % q == 0:
                continue
            reps.append(Mat2Q.of(q ** k, b, 0, q ** (e - k)))
    return CosetSet(q, e, None, reps, HECKE)


def hecke_set(q, e, kind, u=None):
    """S'_{q^e} built to contain S_{q^e} h[q^e], completed by Hermite reps."""
    G = galois_cosets(q, e, kind, u)
    reps = list(G.reps)
    seen = {coset_key(M, q) for M in reps}
    for H in hecke_reps(q, e).reps:
        key = coset_key(H, q)
        if key not in seen:
            seen.add(key)
            reps.append(H)
    return CosetSet(q, e, kind, reps, HECKE)


def _int_val(x, q):
    if x == 0:
        return 10 ** 9
    v = 0
    while x % q == 0:
        x //= q
        v += 1
    return v


def _pairwise_distinct(mats, q):
    # integer fast path: M1^-1 M2 = adj(M1) M2 / det(M1)
    ints = [tuple(int(x) for x in M.entries()) for M in mats]
    vals = [_int_val(a * d - b * c, q) for a, b, c, d in ints]
    for i, (a1, b1, c1, d1) in enumerate(ints):
        vd = vals[i]
        qv = q ** vd
        for k in range(i + 1, len(ints)):
            if vals[k] != vd:
                continue
            a2, b2, c2, d2 = ints[k]
            if ((d1 * a2 - b1 * c2) % qv == 0 and (d1 * b2 - b1 * d2) % qv == 0
                    and (a1 * c2 - c1 * a2) % qv == 0 and (a1 * d2 - c1 * b2) % qv == 0):
                return False
    return True


def pairwise_distinct(coset_set):
    mats = coset_set.reps
    if all(x.denominator == 1 for M in mats for x in M.entries()):
        return _pairwise_distinct(mats, coset_set.q)
    return all(not same_right_coset(M1, M2, coset_set.q)
               for i, M1 in enumerate(mats) for M2 in mats[i + 1:])


def verify_prime_power(q, e, kind, u=None):
    """Exact check of coset distinctness and Cartan-cell containment at q^e."""
    G = galois_cosets(q, e, kind, u)
    H = hecke_reps(q, e)
    S_prime = hecke_set(q, e, kind, u)
    return {
        "q": q,
        "e": e,
        "type": kind.value,
        "size_S": len(G),
        "size_S_prime": len(S_prime),
        "size_hecke_reps": len(H),
        "complement": len(S_prime) - len(G),
        "distinct": pairwise_distinct(G),
        "contained": all(in_cartan_cell(M, q, e) for M in G.reps),
        "hecke_distinct": pairwise_distinct(H),
        "hecke_in_cell": all(in_cartan_cell(M, q, e) for M in H.reps),
    }


def deg_a(n):
    """deg T_{a(n)} = prod q^(e-1) (q+1)."""
    d = 1
    for q, e in factorize(n):
        d *= q ** (e - 1) * (q + 1)
    return d


@dataclass
class ContainmentReport:
    n: int
    factors: list
    distinct: bool
    contained: bool
    size_S: int
    size_S_prime: int
    d: Fraction
    d_expected: Fraction

    @property
    def d_matches(self):
        return self.d == self.d_expected

    def to_dict(self):
        return {
            "n": self.n,
            "factors": self.factors,
            "distinct": self.distinct,
            "contained": self.contained,
            "d_num": self.d.numerator,
            "d_den": self.d.denominator,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)


def verify_orbit_containment(n, field, ell, N=1):
    field = field if isinstance(field, ImagQuadField) else ImagQuadField(field)
    if gcd(n, ell * N * field.D) != 1:
        raise ValueError(f"n={n} must be coprime to l*N*D_L = {ell * N * field.D}")
    factors = []
    size_S, size_Sp = 1, 1
    for q, e in factorize(n):
        rep = verify_prime_power(q, e, splitting_type(field, q))
        factors.append(rep)
        size_S *= rep["size_S"]
        size_Sp *= rep["size_S_prime"]
    d = Fraction(size_S, size_Sp)
    return ContainmentReport(
        n=n,
        factors=factors,
        distinct=all(f["distinct"] for f in factors),
        contained=all(f["contained"] for f in factors),
        size_S=size_S,
        size_S_prime=size_Sp,
        d=d,
        d_expected=d_of_n(n, field),
    )
