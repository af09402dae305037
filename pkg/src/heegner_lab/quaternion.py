"""Definite quaternion algebras B(l), Eichler orders, ideal classes, Brandt matrices.

The algebra B = (a, b | Q) has basis 1, i, j, k = ij with i^2 = a, j^2 = b.
Lattices are kept as integer row matrices over a common denominator, in
Hermite normal form, so equal lattices compare equal.

Right ideals I of an order R (I R = I) model the supersingular points; the
Brandt matrix entry B(m)[i][j] counts the sub-ideals J of I_i with
nrd(J) = m nrd(I_i) lying in the class of I_j.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product
from math import gcd, isqrt
import json

from .arith import factorize, is_prime, kronecker, legendre, sqrt_mod_prime_power, crt
from .lattice import hnf, det, lll_gram, vectors_of_norm, short_vectors, theta_counts
from .quadratic import ImagQuadField, heegner_check, Splitting, splitting_type

__all__ = [
    "hilbert_symbol", "QuaternionAlgebra", "QuatElement", "QLattice", "QuatOrder",
    "RightIdealClass", "BrandtMatrix", "definite_algebra", "maximal_order",
    "eichler_order", "ideal_classes", "mass", "expected_mass", "brandt_matrix",
    "isometric", "brandt_json", "MassCertificateError", "BrandtIntegralityError",
]


class MassCertificateError(RuntimeError):
    pass


class BrandtIntegralityError(RuntimeError):
    pass


def _lcm(a, b):
    return a // gcd(a, b) * b


# ----------------------------------------------------------------------------
# Hilbert symbols

def _val(x, p):
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v, x


def hilbert_symbol(a, b, p):
    """(a, b)_p for nonzero integers a, b; p a prime or -1 for the real place."""
    if p == -1:
        return -1 if (a < 0 and b < 0) else 1
    va, ua = _val(a, p)
    vb, ub = _val(b, p)
    if p != 2:
        s = (-1) ** (va * vb * ((p - 1) // 2) % 2)
        s *= legendre(ua, p) ** vb * legendre(ub, p) ** va
        return s
    eps = lambda u: ((u - 1) // 2) % 2
    omega = lambda u: ((u * u - 1) // 8) % 2
    e = eps(ua) * eps(ub) + va * omega(ub) + vb * omega(ua)
    return -1 if e % 2 else 1


# ----------------------------------------------------------------------------
# algebra and elements

def _qmul(a, b, x, y):
    x0, x1, x2, x3 = x
    y0, y1, y2, y3 = y
    return (x0 * y0 + a * x1 * y1 + b * x2 * y2 - a * b * x3 * y3,
            x0 * y1 + x1 * y0 - b * x2 * y3 + b * x3 * y2,
            x0 * y2 + x2 * y0 + a * x1 * y3 - a * x3 * y1,
            x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1)


@dataclass(frozen=True)
class QuaternionAlgebra:
    a: int
    b: int

    def mul(self, x, y):
        return _qmul(self.a, self.b, x, y)

    def nrd(self, x):
        x0, x1, x2, x3 = x
        return x0 * x0 - self.a * x1 * x1 - self.b * x2 * x2 + self.a * self.b * x3 * x3

    def bilinear(self, x, y):
        """trd(x conj(y)) / 2."""
        return x[0] * y[0] - self.a * x[1] * y[1] - self.b * x[2] * y[2] + self.a * self.b * x[3] * y[3]

    def __call__(self, *coords):
        return QuatElement(self, tuple(Fraction(c) for c in coords))

    def is_definite(self):
        return self.a < 0 and self.b < 0

    @cached_property
    def ramified_primes(self):
        ps = {2} | set(factorize(abs(self.a)).primes()) | set(factorize(abs(self.b)).primes())
        ram = sorted(p for p in ps if hilbert_symbol(self.a, self.b, p) == -1)
        return tuple(ram)

    @property
    def ramification(self):
        out = list(self.ramified_primes)
        if hilbert_symbol(self.a, self.b, -1) == -1:
            out.append("inf")
        return tuple(out)

    @property
    def ell(self):
        (p,) = self.ramified_primes
        return p


@dataclass(frozen=True)
class QuatElement:
    alg: QuaternionAlgebra
    c: tuple

    def __add__(self, o):
        return QuatElement(self.alg, tuple(x + y for x, y in zip(self.c, _coords(o))))

    def __sub__(self, o):
        return QuatElement(self.alg, tuple(x - y for x, y in zip(self.c, _coords(o))))

    def __neg__(self):
        return QuatElement(self.alg, tuple(-x for x in self.c))

    def __mul__(self, o):
        if isinstance(o, QuatElement):
            return QuatElement(self.alg, self.alg.mul(self.c, o.c))
        o = Fraction(o)
        return QuatElement(self.alg, tuple(x * o for x in self.c))

    def __rmul__(self, o):
        o = Fraction(o)
        return QuatElement(self.alg, tuple(x * o for x in self.c))

    def __truediv__(self, o):
        if isinstance(o, QuatElement):
            return self * o.inverse()
        return self * (1 / Fraction(o))

    def conj(self):
        c0, c1, c2, c3 = self.c
        return QuatElement(self.alg, (c0, -c1, -c2, -c3))

    def nrd(self):
        return self.alg.nrd(self.c)

    def trd(self):
        return 2 * self.c[0]

    def inverse(self):
        n = self.nrd()
        if n == 0:
            raise ZeroDivisionError("non-invertible quaternion")
        return self.conj() * (1 / n)

    def disc(self):
        return self.trd() ** 2 - 4 * self.nrd()

    def __repr__(self):
        return "Quat(" + ", ".join(str(x) for x in self.c) + ")"


def _coords(o):
    if isinstance(o, QuatElement):
        return o.c
    return (Fraction(o), 0, 0, 0)


# ----------------------------------------------------------------------------
# lattices

@dataclass(frozen=True)
class QLattice:
    """Full-rank Z-lattice {sum c_i rows[i] / denom} in B."""

    alg: QuaternionAlgebra
    denom: int
    rows: tuple

    @staticmethod
    def from_int_gens(alg, denom, gens):
        H = hnf([list(g) for g in gens])
        if len(H) != 4:
            raise ValueError("generators do not span a full-rank lattice")
        g = denom
        for r in H:
            for x in r:
                g = gcd(g, x)
        return QLattice(alg, denom // g, tuple(tuple(x // g for x in r) for r in H))

    @staticmethod
    def from_elements(alg, elems):
        d = 1
        for e in elems:
            for x in e.c:
                d = _lcm(d, Fraction(x).denominator)
        gens = [[int(Fraction(x) * d) for x in e.c] for e in elems]
        return QLattice.from_int_gens(alg, d, gens)

    def basis(self):
        return [QuatElement(self.alg, tuple(Fraction(x, self.denom) for x in r)) for r in self.rows]

    def gram(self):
        """Gram matrix of the reduced norm form (x^T G x = nrd)."""
        B = self.alg.bilinear
        d2 = self.denom * self.denom
        return [[Fraction(B(r, s), d2) for s in self.rows] for r in self.rows]

    def covolume_sq(self):
        return det(self.gram())

    def coords(self, elem):
        """Coordinates of elem in the basis, as Fractions (upper-triangular solve)."""
        v = [Fraction(x) * self.denom for x in _coords(elem)]
        out = []
        rows = list(self.rows)
        for r in rows:
            col = next(i for i, x in enumerate(r) if x)
            cf = v[col] / r[col]
            out.append(cf)
            v = [vi - cf * ri for vi, ri in zip(v, r)]
        if any(v):
            raise ValueError("element outside the rational span")
        return out

    def __contains__(self, elem):
        return all(c.denominator == 1 for c in self.coords(elem))

    def contains_lattice(self, other):
        return all(e in self for e in other.basis())

    def product(self, other):
        a, b = self.alg.a, self.alg.b
        gens = [_qmul(a, b, r, s) for r in self.rows for s in other.rows]
        return QLattice.from_int_gens(self.alg, self.denom * other.denom, gens)

    def left_mul(self, elem):
        """elem * L."""
        return QLattice.from_elements(self.alg, [elem * e for e in self.basis()])

    def right_mul(self, elem):
        return QLattice.from_elements(self.alg, [e * elem for e in self.basis()])

    def conj(self):
        gens = [(r[0], -r[1], -r[2], -r[3]) for r in self.rows]
        return QLattice.from_int_gens(self.alg, self.denom, gens)

    def scale(self, r):
        r = Fraction(r)
        return QLattice.from_int_gens(self.alg, self.denom * r.denominator,
                                      [[x * r.numerator for x in row] for row in self.rows])

    def norm(self):
        """gcd of reduced norms of elements (the reduced norm of an invertible ideal)."""
        G = self.gram()
        g = Fraction(0)
        for i in range(4):
            g = _fgcd(g, G[i][i])
            for j in range(i + 1, 4):
                g = _fgcd(g, 2 * G[i][j])
        return g

    def __add__(self, other):
        d = _lcm(self.denom, other.denom)
        gens = [[x * (d // self.denom) for x in r] for r in self.rows]
        gens += [[x * (d // other.denom) for x in r] for r in other.rows]
        return QLattice.from_int_gens(self.alg, d, gens)

    def __repr__(self):
        return f"QLattice(denom={self.denom}, rows={self.rows})"


def _fgcd(x, y):
    x, y = Fraction(x), Fraction(y)
    if x == 0:
        return abs(y)
    if y == 0:
        return abs(x)
    d = _lcm(x.denominator, y.denominator)
    return Fraction(gcd(int(x * d), int(y * d)), d)


# ----------------------------------------------------------------------------
# orders

@dataclass(frozen=True)
class QuatOrder:
    lattice: QLattice
    level: int = 1

    @property
    def alg(self):
        return self.lattice.alg

    def basis(self):
        return self.lattice.basis()

    def gram(self):
        return self.lattice.gram()

    @cached_property
    def reduced_disc(self):
        # det of the trace pairing trd(x conj y) = 2 * gram is disc^2
        d2 = 16 * det(self.gram())
        r = isqrt(int(d2))
        if r * r != d2:
            raise ValueError("trace form determinant is not a square")
        return r

    def is_order(self):
        L = self.lattice
        one = self.alg(1, 0, 0, 0)
        if one not in L:
            return False
        bs = L.basis()
        return all(x * y in L for x in bs for y in bs)

    def __contains__(self, elem):
        return elem in self.lattice

    def __repr__(self):
        return f"QuatOrder(level={self.level}, disc={self.reduced_disc}, lattice={self.lattice})"


def definite_algebra(ell):
    """B(l): the definite quaternion algebra ramified exactly at {l, inf}."""
    if not is_prime(ell):
        raise ValueError(f"{ell} is not prime")
    if ell == 2:
        a, b = -1, -1
    elif ell % 4 == 3:
        a, b = -1, -ell
    elif ell % 8 == 5:
        a, b = -2, -ell
    else:
        q = 3
        while not (q % 4 == 3 and is_prime(q) and kronecker(-q, ell) == -1):
            q += 4
        a, b = -q, -ell
    B = QuaternionAlgebra(a, b)
    if B.ramification != (ell, "inf"):
        raise AssertionError(f"recipe for l={ell} gave ramification {B.ramification}")
    return B


def _is_integral(e):
    return e.trd().denominator == 1 and e.nrd().denominator == 1


def _ring_closure(L, max_rounds=8):
    """Smallest multiplicatively closed lattice containing L, or None if not integral."""
    for _ in range(max_rounds):
        if not all(_is_integral(e) for e in L.basis()):
            return None
        new = L + L.product(L)
        if new == L:
            return L
        L = new
    return None


def maximal_order(B):
    """A maximal order of B, by saturating Z<1, i, j, k> prime by prime."""
    one, i, j, k = B(1, 0, 0, 0), B(0, 1, 0, 0), B(0, 0, 1, 0), B(0, 0, 0, 1)
    L = QLattice.from_elements(B, [one, i, j, k])
    O = QuatOrder(L)
    ell = B.ell
    target = ell
    while O.reduced_disc != target:
        extra = O.reduced_disc // target
        p = factorize(extra).primes()[0]
        bs = O.basis()
        found = None
        for cs in product(range(p), repeat=4):
            if not any(cs):
                continue
            x = sum((bs[t] * Fraction(cs[t], p) for t in range(4)), B(0, 0, 0, 0))
            if x in O.lattice or not _is_integral(x):
                continue
            closed = _ring_closure(QLattice.from_elements(B, [x] + bs))
            if closed is not None:
                found = closed
                break
        if found is None:
            raise AssertionError(f"could not enlarge order at p={p}")
        O = QuatOrder(found)
    assert O.is_order()
    return O


def _optimal_embedding_in(O, D):
    """Some x in O with Z[x] = O cap Q(x) of discriminant D (fundamental D)."""
    G = gross_lattice(O)
    gram = G.gram()
    U, Gr = lll_gram(gram)
    for v in vectors_of_norm(Gr, -D):
        coeffs = [sum(v[r] * U[r][c] for r in range(3)) for c in range(3)]
        y = sum((G.basis[c] * coeffs[c] for c in range(3)), O.alg(0, 0, 0, 0))
        for t in (0, 1):
            x = (y + t) * Fraction(1, 2)
            if x in O:
                return x
    return None


@dataclass(frozen=True)
class TernaryLattice:
    """Rank-3 lattice of pure quaternions with the reduced-norm form."""

    basis: tuple
    alg: QuaternionAlgebra

    def gram(self):
        B = self.alg.bilinear
        return [[B(x.c, y.c) for y in self.basis] for x in self.basis]

    def coords(self, y):
        # solve in the (i, j, k) coordinates
        M = [[b.c[t] for t in (1, 2, 3)] for b in self.basis]
        v = [y.c[t] for t in (1, 2, 3)]
        return _solve3(M, v)

    def __contains__(self, y):
        if y.c[0] != 0:
            return False
        return all(c.denominator == 1 for c in self.coords(y))


def _solve3(M, v):
    # v = sum c_r M[r]  -> transpose solve with Cramer's rule
    A = [[Fraction(M[r][c]) for r in range(3)] for c in range(3)]
    D = det(A)
    out = []
    for r in range(3):
        Ar = [row[:] for row in A]
        for c in range(3):
            Ar[c][r] = Fraction(v[c])
        out.append(det(Ar) / D)
    return out


def gross_lattice(O):
    """{2x - trd(x) : x in O}, the trace-zero lattice used for embeddings."""
    gens = [(x * 2 - x.trd()) for x in O.basis()]
    d = 1
    for e in gens:
        for t in (1, 2, 3):
            d = _lcm(d, Fraction(e.c[t]).denominator)
    ints = [[int(e.c[t] * d) for t in (1, 2, 3)] for e in gens]
    H = hnf(ints)
    alg = O.alg
    basis = tuple(alg(0, *(Fraction(x, d) for x in r)) for r in H)
    return TernaryLattice(basis, alg)


def eichler_order(O_max, N, field, classes=None):
    """Eichler order of level N: kappa(O_L) + kappa(frak N) O', O' maximal.

    O' is O_max when O_L embeds optimally into it, otherwise the first left
    order of an ideal class of O_max that admits such an embedding.
    """
    field = field if isinstance(field, ImagQuadField) else ImagQuadField(field)
    ell = O_max.alg.ell
    if N == 1:
        return O_max
    if gcd(N, ell * field.D) != 1:
        raise ValueError(f"gcd(N={N}, l*D_L={ell * field.D}) != 1")
    if not heegner_check(field, N):
        raise ValueError(f"Heegner hypothesis fails: some prime of N={N} does not split in {field}")
    if splitting_type(field, ell) is Splitting.SPLIT:
        raise ValueError(f"l={ell} splits in {field}; O_L does not embed in B(l)")
    x = _optimal_embedding_in(O_max, field.D)
    Op = O_max
    if x is None:
        classes = classes if classes is not None else ideal_classes(O_max)
        for c in classes:
            x = _optimal_embedding_in(c.left_order, field.D)
            if x is not None:
                Op = c.left_order
                break
    if x is None:
        raise ValueError("no optimal embedding of O_L found")
    t, m = x.trd(), x.nrd()
    # root r of X^2 - tX + m mod N, built prime by prime with Hensel/CRT
    residues, moduli = [], []
    for p, e in factorize(N):
        pe = p ** e
        roots = [r for r in range(pe) if (r * r - t * r + m) % pe == 0] if pe < 5000 else None
        if roots is None:
            disc = int(t * t - 4 * m)
            s = sqrt_mod_prime_power(disc, p, e)[0]
            r = (int(t) + s) * pow(2, -1, pe) % pe
            roots = [r]
        residues.append(min(roots))
        moduli.append(pe)
    r, _ = crt(residues, moduli)
    one = O_max.alg(1, 0, 0, 0)
    gens = [one, x] + [(x - r) * b for b in Op.basis()] + [b * N for b in Op.basis()]
    L = QLattice.from_elements(O_max.alg, gens)
    L = _ring_closure(L)
    R = QuatOrder(L, level=N)
    if R.reduced_disc != ell * N:
        raise AssertionError(f"Eichler order has discriminant {R.reduced_disc}, expected {ell * N}")
    return R


# ----------------------------------------------------------------------------
# ideal classes

def _reduced(L, scale):
    """LLL-reduced Gram of L with nrd scaled by 1/scale, plus transform."""
    G = [[x / scale for x in row] for row in L.gram()]
    U, Gr = lll_gram(G)
    return U, Gr


def _combine(L, U, v):
    bs = L.rows
    coeffs = [sum(v[r] * U[r][c] for r in range(4)) for c in range(4)]
    num = [sum(coeffs[c] * bs[c][t] for c in range(4)) for t in range(4)]
    return QuatElement(L.alg, tuple(Fraction(x, L.denom) for x in num))


def _elements_of_norm(L, scale, m=1):
    U, Gr = _reduced(L, scale)
    return [_combine(L, U, v) for v in vectors_of_norm(Gr, m)]


@dataclass(eq=False)
class RightIdealClass:
    ideal: QLattice
    order: QuatOrder
    index: int = -1

    @cached_property
    def norm(self):
        return self.ideal.norm()

    @cached_property
    def left_order_lattice(self):
        return self.ideal.product(self.ideal.conj()).scale(1 / self.norm)

    @cached_property
    def left_order(self):
        return QuatOrder(self.left_order_lattice, self.order.level)

    @cached_property
    def units(self):
        return _elements_of_norm(self.left_order_lattice, Fraction(1), 1)

    @property
    def w(self):
        return len(self.units)

    def theta(self, bound=8):
        U, Gr = _reduced(self.left_order_lattice, Fraction(1))
        return tuple(theta_counts(Gr, bound))

    def ideal_theta(self, bound=8):
        U, Gr = _reduced(self.ideal, self.norm)
        return tuple(theta_counts(Gr, bound))

    def __repr__(self):
        return f"RightIdealClass(index={self.index}, w={self.w}, norm={self.norm})"


def right_ideal_equivalence(I, J, nI=None, nJ=None):
    """alpha with J = alpha * I (both right ideals of one order), or None."""
    nI = I.norm() if nI is None else nI
    nJ = J.norm() if nJ is None else nJ
    M = J.product(I.conj())
    for beta in _elements_of_norm(M, nI * nJ, 1):
        return beta * (1 / nI)
    return None


def neighbors(I, R, p, nI=None):
    """The right R-ideals J in I with nrd(J) = p nrd(I) (p coprime to disc(R))."""
    nI = I.norm() if nI is None else nI
    bs = I.basis()
    Rb = R.basis()
    pI = I.scale(p)
    out = []
    seen = set()
    for cs in product(range(p), repeat=4):
        first = next((c for c in cs if c), 0)
        if first != 1:
            continue
        alpha = sum((bs[t] * cs[t] for t in range(4)), R.alg(0, 0, 0, 0))
        q = alpha.nrd() / nI
        if q.denominator != 1 or q.numerator % p:
            continue
        J = pI + QLattice.from_elements(R.alg, [alpha * r for r in Rb] + pI.basis())
        if J.norm() != p * nI or J in seen:
            continue
        seen.add(J)
        out.append(J)
    return out


def expected_mass(ell, N=1):
    m = Fraction(ell - 1, 24) * N
    for p in factorize(N).primes():
        m *= Fraction(p + 1, p)
    return m


def mass(classes):
    return sum((Fraction(1, c.w) for c in classes), Fraction(0))


def _neighbor_prime(ell, N):
    p = 2
    while (ell * N) % p == 0:
        p = p + 1
        while not is_prime(p):
            p += 1
    return p


def ideal_classes(O, max_disc=10 ** 4):
    """Right ideal class representatives, by p-neighbour search, mass-certified."""
    ell = O.alg.ell
    N = O.level
    if ell * N > max_disc:
        raise ValueError(f"l*N = {ell * N} exceeds desk-scale bound {max_disc}")
    target = expected_mass(ell, N)
    p = _neighbor_prime(ell, N)
    first = RightIdealClass(O.lattice, O)
    classes = [first]
    total = Fraction(1, first.w)
    queue = [first]
    while queue and total < target:
        cur = queue.pop(0)
        for J in neighbors(cur.ideal, O, p, cur.norm):
            nJ = J.norm()
            if any(right_ideal_equivalence(c.ideal, J, c.norm, nJ) is not None for c in classes):
                continue
            cls = RightIdealClass(J, O)
            classes.append(cls)
            queue.append(cls)
            total += Fraction(1, cls.w)
            if total >= target:
                break
    if total != target:
        raise MassCertificateError(f"mass {total} != expected {target} for l={ell}, N={N}")
    keyed = [((c.theta(), c.ideal_theta()), pos, c) for pos, c in enumerate(classes)]
    keyed.sort(key=lambda t: (t[0], t[1]))
    out = []
    for idx, (_, _, c) in enumerate(keyed):
        c.index = idx
        out.append(c)
    return out


def class_index_of(I, classes, nI=None):
    """(index, alpha) with I = alpha * I_index."""
    nI = I.norm() if nI is None else nI
    for c in classes:
        alpha = right_ideal_equivalence(c.ideal, I, c.norm, nI)
        if alpha is not None:
            return c.index, alpha
    raise LookupError("ideal not equivalent to any listed class")


# ----------------------------------------------------------------------------
# Brandt matrices

@dataclass
class BrandtMatrix:
    m: int
    matrix: list
    weights: list

    def row_sums(self):
        return [sum(r) for r in self.matrix]

    def __getitem__(self, ij):
        i, j = ij
        return self.matrix[i][j]

    def __matmul__(self, other):
        n = len(self.matrix)
        M = [[sum(self.matrix[i][k] * other.matrix[k][j] for k in range(n)) for j in range(n)]
             for i in range(n)]
        return M

    def weight_symmetric(self):
        """w_j B[i][j] == w_i B[j][i]: both sides count norm-m elements of I_i conj(I_j)."""
        n = len(self.matrix)
        w = self.weights
        return all(w[j] * self.matrix[i][j] == w[i] * self.matrix[j][i]
                   for i in range(n) for j in range(n))


class BrandtData:
    """Theta series of all ideal-pair lattices I_i conj(I_j), cached by bound."""

    def __init__(self, classes):
        self.classes = classes
        self.bound = 0
        self.theta = {}

    def ensure(self, bound):
        if bound <= self.bound:
            return
        bound = max(bound, 2 * self.bound, 16)
        for ci in self.classes:
            for cj in self.classes:
                M = ci.ideal.product(cj.ideal.conj())
                _, Gr = _reduced(M, ci.norm * cj.norm)
                self.theta[ci.index, cj.index] = theta_counts(Gr, bound)
        self.bound = bound

    def matrix(self, m):
        self.ensure(m)
        s = len(self.classes)
        M = [[0] * s for _ in range(s)]
        for ci in self.classes:
            for cj in self.classes:
                cnt = self.theta[ci.index, cj.index][m]
                q, r = divmod(cnt, cj.w)
                if r:
                    raise BrandtIntegralityError(
                        f"B({m})[{ci.index}][{cj.index}] = {cnt}/{cj.w} is not an integer")
                M[ci.index][cj.index] = q
        return BrandtMatrix(m, M, [c.w for c in self.classes])


_BRANDT_CACHE = {}


def brandt_matrix(classes, m, max_m=500):
    if m > max_m:
        raise ValueError(f"m={m} exceeds bound {max_m}")
    O = classes[0].order
    ell = O.alg.ell
    if gcd(m, ell * O.level) != 1:
        raise ValueError(f"gcd(m={m}, l*N={ell * O.level}) != 1")
    key = id(classes)
    data = _BRANDT_CACHE.get(key)
    if data is None or data.classes is not classes:
        data = BrandtData(classes)
        _BRANDT_CACHE[key] = data
    return data.matrix(m)


def brandt_json(classes, ms):
    O = classes[0].order
    payload = {
        "ell": O.alg.ell,
        "level": O.level,
        "weights": [c.w for c in classes],
        "matrices": {str(m): brandt_matrix(classes, m).matrix for m in ms},
    }
    return json.dumps(payload, sort_keys=True)


# ----------------------------------------------------------------------------
# isometry of normalized ideal lattices

def _normalized_gram(cls):
    return _reduced(cls.ideal, cls.norm)[1]


def isometric(c1, c2, theta_bound=None):
    """Whether the norm-scaled lattices of two ideals are isometric."""
    G1 = _normalized_gram(c1) if isinstance(c1, RightIdealClass) else c1
    G2 = _normalized_gram(c2) if isinstance(c2, RightIdealClass) else c2
    if det(G1) != det(G2):
        return False
    bound = theta_bound or int(max(max(G1[i][i] for i in range(4)), max(G2[i][i] for i in range(4))))
    if theta_counts(G1, bound) != theta_counts(G2, bound):
        return False
    return _find_isometry(G1, G2) is not None


def _find_isometry(G1, G2):
    """Integer matrix X (rows in G1-coordinates) with X G1 X^T = G2."""
    n = len(G2)
    cands = {}
    bound = max(G2[i][i] for i in range(n))
    pool = {}
    for v, val in short_vectors(G1, bound):
        pool.setdefault(val, []).append(v)
    for i in range(n):
        cands[i] = pool.get(G2[i][i], [])

    def bil(u, v):
        return sum(u[a] * G1[a][b] * v[b] for a in range(n) for b in range(n))

    chosen = []

    def rec(i):
        if i == n:
            return det([list(c) for c in chosen]) in (1, -1)
        for v in cands[i]:
            if all(bil(v, chosen[k]) == G2[i][k] for k in range(i)):
                chosen.append(v)
                if rec(i + 1):
                    return True
                chosen.pop()
        return False

    return [list(c) for c in chosen] if rec(0) else None
