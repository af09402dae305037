"""Exact integer, rational, finite-field and polynomial arithmetic.

Everything here is pure and works on Python ints and ``fractions.Fraction``.
Polynomials over F_l and F_{l^2} are plain coefficient lists (lowest degree
first) wrapped in :class:`FpPoly`.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt
import random

__all__ = [
    "PrimeFactorization", "factorize", "is_prime", "primes_up_to", "next_prime",
    "kronecker", "legendre", "rational_valuation", "sigma1", "sqrt_mod",
    "sqrt_mod_prime_power", "xgcd", "crt", "smallest_nonresidue",
    "Fq2", "Fq2Element", "FpPoly", "poly_roots",
]

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n):
    """Deterministic Miller-Rabin (exact for n < 3.3e24)."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_up_to(n):
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p::p] = bytearray(len(range(p * p, n + 1, p)))
    return [i for i, v in enumerate(sieve) if v]


def next_prime(n):
    """Smallest prime strictly greater than n."""
    n += 1
    while not is_prime(n):
        n += 1
    return n


@dataclass(frozen=True)
class PrimeFactorization:
    factors: tuple

    def __post_init__(self):
        ps = [p for p, _ in self.factors]
        if ps != sorted(set(ps)):
            raise ValueError("primes must be strictly increasing")
        if any(e < 1 or not is_prime(p) for p, e in self.factors):
            raise ValueError("invalid prime power in factorization")

    def value(self):
        n = 1
        for p, e in self.factors:
            n *= p ** e
        return n

    def primes(self):
        return [p for p, _ in self.factors]

    def prime_powers(self):
        return [(p, e, p ** e) for p, e in self.factors]

    def __iter__(self):
        return iter(self.factors)

    def __len__(self):
        return len(self.factors)


@lru_cache(maxsize=4096)
def factorize(n):
    """Trial division, stopping early once the cofactor is prime."""
    if n < 1:
        raise ValueError("factorize expects a positive integer")
    out = []
    m = n
    p = 2
    cofactor_prime = is_prime(m)
    while p * p <= m and not cofactor_prime:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
            cofactor_prime = is_prime(m)
        p += 1 if p == 2 else 2
    if m > 1:
        out.append((m, 1))
    return PrimeFactorization(tuple(out))


def sigma1(n):
    total = 1
    for p, e in factorize(n):
        total *= (p ** (e + 1) - 1) // (p - 1)
    return total


def legendre(a, p):
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def kronecker(D, m):
    """Kronecker symbol (D/m) for arbitrary integers D, m."""
    if m == 0:
        return 1 if D in (1, -1) else 0
    result = 1
    if m < 0:
        m = -m
        if D < 0:
            result = -result
    while m % 2 == 0:
        m //= 2
        if D % 2 == 0:
            return 0
        if D % 8 in (3, 5):
            result = -result
    # Jacobi symbol (D/m) for odd m > 0
    a = D % m if m > 1 else 0
    if m == 1:
        return result
    while a:
        while a % 2 == 0:
            a //= 2
            if m % 8 in (3, 5):
                result = -result
        a, m = m, a
        if a % 4 == 3 and m % 4 == 3:
            result = -result
        a %= m
    return result if m == 1 else 0


def rational_valuation(r, q):
    """q-adic valuation of a nonzero rational."""
    r = Fraction(r)
    if r == 0:
        raise ValueError("valuation of zero is undefined")
    v = 0
    num, den = r.numerator, r.denominator
    while num % q == 0:
        num //= q
        v += 1
    while den % q == 0:
        den //= q
        v -= 1
    return v


def xgcd(a, b):
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def crt(residues, moduli):
    x, m = 0, 1
    for r, n in zip(residues, moduli):
        g, s, _ = xgcd(m, n)
        if (r - x) % g:
            raise ValueError("incompatible congruences")
        x += m * ((r - x) // g * s % (n // g))
        m = m // g * n
        x %= m
    return x, m


def smallest_nonresidue(p):
    if p == 2:
        raise ValueError("no quadratic non-residue mod 2")
    u = 2
    while legendre(u, p) != -1:
        u += 1
    return u


def sqrt_mod(a, p):
    """Tonelli-Shanks; returns the smaller of the two roots, or None."""
    a %= p
    if p == 2 or a == 0:
        return a
    if legendre(a, p) != 1:
        return None
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = smallest_nonresidue(p)
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return min(r, p - r)


def sqrt_mod_prime_power(a, p, e):
    """All square roots of a modulo p**e (brute force for p = 2)."""
    mod = p ** e
    a %= mod
    if p == 2 or a % p == 0:
        return sorted(x for x in range(mod) if x * x % mod == a)
    r = sqrt_mod(a, p)
    if r is None:
        return []
    for k in range(1, e):
        m = p ** (k + 1)
        # Hensel step for odd p
        r = (r - (r * r - a) * pow(2 * r, -1, m)) % m
    return sorted({r % mod, (-r) % mod})


# ----------------------------------------------------------------------------
# F_{l^2} = F_l(t), t^2 = u with u the least non-residue

class Fq2:
    """The field F_{l^2} realized as F_l[t]/(t^2 - u)."""

    _cache = {}

    def __new__(cls, ell):
        if ell in cls._cache:
            return cls._cache[ell]
        self = super().__new__(cls)
        self.ell = ell
        self.u = smallest_nonresidue(ell) if ell > 2 else None
        cls._cache[ell] = self
        return self

    def __repr__(self):
        return f"Fq2({self.ell})"

    def __call__(self, a, b=0):
        return Fq2Element(a % self.ell, b % self.ell, self.ell, self.u)

    def elements(self):
        for b in range(self.ell):
            for a in range(self.ell):
                yield self(a, b)

    def zero(self):
        return self(0)

    def one(self):
        return self(1)


@dataclass(frozen=True, order=True)
class Fq2Element:
    a: int
    b: int
    ell: int
    u: int

    def _coerce(self, other):
        if isinstance(other, Fq2Element):
            return other
        return Fq2Element(other % self.ell, 0, self.ell, self.u)

    def __add__(self, other):
        o = self._coerce(other)
        return Fq2Element((self.a + o.a) % self.ell, (self.b + o.b) % self.ell, self.ell, self.u)

    __radd__ = __add__

    def __neg__(self):
        return Fq2Element(-self.a % self.ell, -self.b % self.ell, self.ell, self.u)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        p = self.ell
        return Fq2Element((self.a * o.a + self.u * self.b * o.b) % p,
                          (self.a * o.b + self.b * o.a) % p, p, self.u)

    __rmul__ = __mul__

    def norm(self):
        return (self.a * self.a - self.u * self.b * self.b) % self.ell

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in F_{l^2}")
        ni = pow(n, -1, self.ell)
        return Fq2Element(self.a * ni % self.ell, -self.b * ni % self.ell, self.ell, self.u)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __pow__(self, k):
        result = Fq2Element(1, 0, self.ell, self.u)
        base = self
        if k < 0:
            base, k = base.inverse(), -k
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __bool__(self):
        return bool(self.a or self.b)

    def __eq__(self, other):
        if isinstance(other, int):
            return self.b == 0 and self.a == other % self.ell
        if isinstance(other, Fq2Element):
            return (self.a, self.b, self.ell) == (other.a, other.b, other.ell)
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.ell))

    def frobenius(self):
        return Fq2Element(self.a, -self.b % self.ell, self.ell, self.u)

    def in_prime_field(self):
        return self.b == 0

    def __repr__(self):
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}t"
        return f"{self.a}+{self.b}t"


# ----------------------------------------------------------------------------
# polynomials over F_l or F_{l^2}

class FpPoly:
    """Dense polynomial over F_l (int coefficients) or F_{l^2} (Fq2Element)."""

    __slots__ = ("coeffs", "ell", "ext")

    def __init__(self, coeffs, ell, ext=False):
        self.ell = ell
        self.ext = ext
        if ext:
            F = Fq2(ell)
            cs = [c if isinstance(c, Fq2Element) else F(c) for c in coeffs]
        else:
            cs = [int(c) % ell for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def _zero(self):
        return Fq2(self.ell).zero() if self.ext else 0

    def _one(self):
        return Fq2(self.ell).one() if self.ext else 1

    def _new(self, cs):
        return FpPoly(cs, self.ell, self.ext)

    def _pairs(self):
        return [(c.a, c.b) for c in self.coeffs]

    def _from_pairs(self, ps):
        F = Fq2(self.ell)
        return FpPoly([Fq2Element(a, b, self.ell, F.u) for a, b in ps], self.ell, True)

    def lift(self):
        return self if self.ext else FpPoly(self.coeffs, self.ell, True)

    def __eq__(self, other):
        return isinstance(other, FpPoly) and self.ell == other.ell and \
            self.lift().coeffs == other.lift().coeffs

    def __hash__(self):
        return hash((self.ell, self.lift().coeffs))

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        z = self._zero()
        a = list(self.coeffs) + [z] * (n - len(self.coeffs))
        b = list(other.coeffs) + [z] * (n - len(other.coeffs))
        return self._new([x + y for x, y in zip(a, b)])

    def __neg__(self):
        return self._new([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, FpPoly):
            return self._new([c * other for c in self.coeffs])
        if self.is_zero() or other.is_zero():
            return self._new([])
        if self.ext:
            return self._from_pairs(_pair_mul(self._pairs(), other._pairs(), self.ell,
                                              Fq2(self.ell).u))
        out = [self._zero()] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if not x:
                continue
            for j, y in enumerate(other.coeffs):
                out[i + j] = out[i + j] + x * y
        if not self.ext:
            out = [c % self.ell for c in out]
        return self._new(out)

    def _inv(self, c):
        return c.inverse() if self.ext else pow(c, -1, self.ell)

    def divmod(self, other):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        dq = len(r) - len(other.coeffs)
        if dq < 0:
            return self._new([]), self
        if self.ext:
            q, r = _pair_divmod(self._pairs(), other._pairs(), self.ell, Fq2(self.ell).u)
            return self._from_pairs(q), self._from_pairs(r)
        q = [self._zero()] * (dq + 1)
        lead_inv = self._inv(other.coeffs[-1])
        for k in range(dq, -1, -1):
            c = r[k + len(other.coeffs) - 1] * lead_inv
            if not self.ext:
                c %= self.ell
            q[k] = c
            if c:
                for i, oc in enumerate(other.coeffs):
                    v = r[k + i] - c * oc
                    r[k + i] = v if self.ext else v % self.ell
        return self._new(q), self._new(r[:len(other.coeffs) - 1])

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def monic(self):
        if self.is_zero():
            return self
        inv = self._inv(self.coeffs[-1])
        return self._new([c * inv for c in self.coeffs])

    def gcd(self, other):
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def derivative(self):
        return self._new([c * i for i, c in enumerate(self.coeffs)][1:])

    def __call__(self, x):
        acc = self._zero()
        for c in reversed(self.coeffs):
            acc = acc * x + c
        if not self.ext and not isinstance(x, Fq2Element):
            acc %= self.ell
        return acc

    def powmod(self, k, modulus):
        result = self._new([self._one()])
        base = self % modulus
        while k:
            if k & 1:
                result = (result * base) % modulus
            base = (base * base) % modulus
            k >>= 1
        return result

    def __repr__(self):
        return f"FpPoly({list(self.coeffs)}, ell={self.ell}, ext={self.ext})"


def _pair_mul(A, B, p, u):
    # raw (a, b) coefficient pairs representing a + b t, t^2 = u
    out_a = [0] * (len(A) + len(B) - 1)
    out_b = [0] * (len(A) + len(B) - 1)
    for i, (xa, xb) in enumerate(A):
        if not (xa or xb):
            continue
        for j, (ya, yb) in enumerate(B):
            out_a[i + j] += xa * ya + u * xb * yb
            out_b[i + j] += xa * yb + xb * ya
    return [(a % p, b % p) for a, b in zip(out_a, out_b)]


def _pair_divmod(A, B, p, u):
    la, lb = B[-1]
    n = (la * la - u * lb * lb) % p
    ni = pow(n, -1, p)
    ia, ib = la * ni % p, -lb * ni % p
    r = [list(c) for c in A]
    m = len(B)
    q = [(0, 0)] * (len(A) - m + 1)
    for k in range(len(A) - m, -1, -1):
        ra, rb = r[k + m - 1]
        ca, cb = (ra * ia + u * rb * ib) % p, (ra * ib + rb * ia) % p
        q[k] = (ca, cb)
        if ca or cb:
            for i, (oa, ob) in enumerate(B):
                cell = r[k + i]
                cell[0] = (cell[0] - ca * oa - u * cb * ob) % p
                cell[1] = (cell[1] - ca * ob - cb * oa) % p
    return q, [tuple(c) for c in r[:m - 1]]


def _split_linear(f, q, rng):
    """Split a monic squarefree product of distinct linear factors over F_q."""
    if f.degree <= 0:
        return []
    if f.degree == 1:
        c = f.coeffs[0]
        return [-c if f.ext else -c % f.ell]
    ell = f.ell
    F = Fq2(ell) if f.ext else None
    while True:
        if f.ext:
            r = F(rng.randrange(ell), rng.randrange(ell))
        else:
            r = rng.randrange(ell)
        h = f._new([r, f._one()]).powmod((q - 1) // 2, f) - f._new([f._one()])
        g = h.gcd(f)
        if 0 < g.degree < f.degree:
            return _split_linear(g, q, rng) + _split_linear(f // g, q, rng)


def poly_roots(f, field="base", seed=0):
    """Roots with multiplicity of f in F_l (field='base') or F_{l^2} ('ext').

    Returns a sorted list of (root, multiplicity).
    """
    if f.is_zero():
        raise ValueError("the zero polynomial has no well-defined root set")
    ell = f.ell
    ext = field == "ext"
    if f.ext and not ext:
        raise ValueError("polynomial over F_{l^2} needs field='ext'")
    g = f.lift() if ext else f
    if g.degree <= 0:
        return []
    if ell == 2:
        if ext:
            raise ValueError("F_4 is not supported")
        roots = [r for r in (0, 1) if g(r) == 0]
    else:
        roots = None
    q = ell * ell if ext else ell
    X = g._new([g._zero(), g._one()])
    # gcd with X^q - X picks out the product of distinct linear factors
    if roots is None:
        split = (X.powmod(q, g) - X).gcd(g)
        roots = _split_linear(split.monic(), q, random.Random(seed))
    out = []
    for r in roots:
        m = 0
        h = g
        lin = g._new([-r, g._one()])
        while True:
            qq, rem = h.divmod(lin)
            if not rem.is_zero():
                break
            h = qq
            m += 1
        out.append((r, m))
    return sorted(out, key=lambda rm: _root_key(rm[0]))


def _root_key(r):
    if isinstance(r, Fq2Element):
        return (r.b, r.a)
    return (0, r)
