"""Imaginary quadratic orders, binary quadratic forms and ring class groups.

Classes of invertible O_n-ideals are represented by reduced, primitive,
positive definite forms (a, b, c) of discriminant n^2 * D_L.  The form
(a, b, c) corresponds to the ideal Z*a + Z*(-b + sqrt(disc))/2.
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import gcd, isqrt
from typing import NamedTuple

from .arith import factorize, is_prime, kronecker, sqrt_mod_prime_power, xgcd

MAX_ABS_DISC = 10 ** 7


class Splitting(str, Enum):
    SPLIT = "split"
    INERT = "inert"
    RAMIFIED = "ramified"


def is_fundamental(D):
    if D >= 0 or D % 4 not in (0, 1):
        return False
    if D % 4 == 1:
        return _squarefree(-D)
    m = D // 4
    if m % 4 not in (2, 3):
        return False
    return _squarefree(-m)


def _squarefree(n):
    return all(e == 1 for _, e in factorize(n))


@dataclass(frozen=True)
class ImagQuadField:
    D: int

    def __post_init__(self):
        if not is_fundamental(self.D):
            raise ValueError(f"{self.D} is not a negative fundamental discriminant")

    def order(self, n=1):
        return QuadOrder(self, n)

    def __str__(self):
        return f"Q(sqrt({self.D}))"


@dataclass(frozen=True)
class QuadOrder:
    field: ImagQuadField
    conductor: int = 1

    def __post_init__(self):
        if self.conductor < 1:
            raise ValueError("conductor must be positive")

    @property
    def disc(self):
        return self.conductor ** 2 * self.field.D


class BQForm(NamedTuple):
    a: int
    b: int
    c: int

    @property
    def disc(self):
        return self.b * self.b - 4 * self.a * self.c

    def is_primitive(self):
        return gcd(gcd(self.a, self.b), self.c) == 1

    def is_reduced(self):
        a, b, c = self
        if not (abs(b) <= a <= c):
            return False
        if (abs(b) == a or a == c) and b < 0:
            return False
        return True

    def inverse(self):
        return reduce_form(BQForm(self.a, -self.b, self.c))

    def __call__(self, x, y):
        return self.a * x * x + self.b * x * y + self.c * y * y


def reduce_form(f):
    """Unique reduced representative of a positive definite form's class."""
    a, b, c = f
    if b * b - 4 * a * c >= 0 or a <= 0:
        raise ValueError(f"{tuple(f)} is not positive definite")
    while True:
        # normalize -a < b <= a
        if not (-a < b <= a):
            r = (a - b) // (2 * a)
            b, c = b + 2 * r * a, a * r * r + b * r + c
        if a > c:
            a, b, c = c, -b, a
            continue
        if a == c and b < 0:
            b = -b
        return BQForm(a, b, c)


def _xgcd3(x, y, z):
    g1, u1, v1 = xgcd(x, y)
    g, u2, w = xgcd(g1, z)
    return g, u1 * u2, v1 * u2, w


def compose(f, g):
    """Gauss composition (Dirichlet's united forms), reduced."""
    a1, b1, _ = f
    a2, b2, c2 = g
    D = f.disc
    if g.disc != D:
        raise ValueError("forms of different discriminants")
    s = (b1 + b2) // 2
    e, p, q, r = _xgcd3(a1, a2, s)
    A = a1 * a2 // (e * e)
    B = (p * a1 * b2 + q * a2 * b1 + r * (b1 * b2 + D) // 2) // e
    B %= 2 * A
    C = (B * B - D) // (4 * A)
    return reduce_form(BQForm(A, B, C))


def reduced_forms(D):
    """All reduced primitive forms of discriminant D < 0."""
    if D >= 0 or D % 4 not in (0, 1):
        raise ValueError(f"{D} is not a negative discriminant")
    out = []
    amax = isqrt(-D // 3)
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            if (b - D) % 2:
                continue
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if gcd(gcd(a, b), c) != 1:
                continue
            out.append(BQForm(a, b, c))
    return out


def principal_form(D):
    return reduce_form(BQForm(1, D % 2, (D % 2 - D) // 4))


@dataclass
class ClassGroup:
    order: QuadOrder
    elements: list
    identity: int = 0
    _index: dict = field(default_factory=dict, repr=False)
    _table: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._index = {f: i for i, f in enumerate(self.elements)}

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    @property
    def disc(self):
        return self.order.disc

    def index(self, f):
        return self._index[reduce_form(f)]

    def mul(self, f, g):
        key = (f, g)
        if key not in self._table:
            self._table[key] = compose(f, g)
        return self._table[key]

    def mul_index(self, i, j):
        return self._index[self.mul(self.elements[i], self.elements[j])]

    def inverse(self, f):
        return f.inverse()

    def power(self, f, k):
        result = self.elements[self.identity]
        base = f if k >= 0 else f.inverse()
        for _ in range(abs(k)):
            result = self.mul(result, base)
        return result

    def table(self):
        h = len(self.elements)
        return [[self.mul_index(i, j) for j in range(h)] for i in range(h)]

    def generated_subgroup(self, gens):
        seen = {self.elements[self.identity]}
        frontier = list(seen)
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.mul(g, x)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return seen


def class_group(order):
    D = order.disc if isinstance(order, QuadOrder) else order
    if abs(D) > MAX_ABS_DISC:
        raise ValueError(f"|disc| = {abs(D)} exceeds desk-scale bound {MAX_ABS_DISC}")
    if not isinstance(order, QuadOrder):
        order = order_from_disc(D)
    forms = reduced_forms(D)
    ident = principal_form(D)
    forms.remove(ident)
    return ClassGroup(order, [ident] + forms, 0)


def order_from_disc(D):
    """Split a negative discriminant into fundamental part and conductor."""
    sq = 1
    for p, e in factorize(-D):
        sq *= p ** (e // 2)
    for f in sorted((d for d in range(1, sq + 1) if sq % d == 0), reverse=True):
        D0, r = divmod(D, f * f)
        if r == 0 and is_fundamental(D0):
            return QuadOrder(ImagQuadField(D0), f)
    raise ValueError(f"{D} is not a discriminant")


def class_number(D):
    return len(reduced_forms(D))


def splitting_type(field, p):
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    k = kronecker(field.D, p)
    if k == 1:
        return Splitting.SPLIT
    if k == -1:
        return Splitting.INERT
    return Splitting.RAMIFIED


def heegner_check(field, N):
    """True iff every prime factor of N splits in the field."""
    if gcd(N, field.D) != 1:
        raise ValueError(f"gcd(N={N}, D_L={field.D}) != 1")
    return all(splitting_type(field, p) is Splitting.SPLIT for p in factorize(N).primes())


def weak_heegner(field, N):
    """The quadratic character of L evaluated at N equals 1."""
    return kronecker(field.D, N) == 1


def d_of_n(n, field):
    """Density #S_n / deg a(n): product of (p-1)/(p+1) over split p | n."""
    if gcd(n, field.D) != 1:
        raise ValueError(f"n={n} shares a factor with D_L={field.D}")
    d = Fraction(1)
    for p in factorize(n).primes():
        if splitting_type(field, p) is Splitting.SPLIT:
            d *= Fraction(p - 1, p + 1)
    return d


def prime_form_above(order, p):
    """Reduced form in the class of the prime (p, b, c) with b >= 0."""
    return reduce_form(prime_ideal_form(order, p))


def prime_ideal_form(order, p, sign=1):
    """Unreduced form (p, b, c) for one of the (up to) two primes above p.

    sign=+1 picks the least b >= 0, sign=-1 the conjugate prime.
    """
    D = order.disc
    if order.conductor % p == 0:
        raise ValueError(f"p={p} divides the conductor {order.conductor}")
    if kronecker(D, p) == -1:
        raise ValueError(f"p={p} is inert in disc {D}: no ideal of norm p")
    roots = sqrt_mod_prime_power(D, p, 1)
    if p == 2:
        bs = [b for b in range(0, 4) if (b * b - D) % 8 == 0]
    else:
        bs = []
        for r in roots:
            b = r if (r - D) % 2 == 0 else r + p
            bs.append(b % (2 * p))
    b = min(bs)
    c = (b * b - D) // (4 * p)
    return BQForm(p, b if sign > 0 else -b, c)
