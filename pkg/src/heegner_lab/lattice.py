"""Small exact lattice toolkit: Hermite normal form, LLL and Fincke-Pohst.

Lattices live in Q^k and are given by generator rows of Fractions.  All
enumeration results are verified in exact arithmetic; floating point is only
used to prune the search tree.
"""

from fractions import Fraction
from math import floor, ceil, gcd, sqrt

__all__ = ["hnf", "lattice_basis", "lll_gram", "short_vectors", "vectors_of_norm",
           "theta_counts", "det", "integral_scale"]

_EPS = 1e-7


def _lcm(a, b):
    return a // gcd(a, b) * b


def integral_scale(rows):
    """Return (d, int_rows) with rows = int_rows / d."""
    d = 1
    for r in rows:
        for x in r:
            d = _lcm(d, Fraction(x).denominator)
    return d, [[int(Fraction(x) * d) for x in r] for r in rows]


def hnf(rows):
    """Row-style Hermite normal form of an integer matrix; zero rows dropped."""
    A = [list(r) for r in rows if any(r)]
    if not A:
        return []
    ncols = len(A[0])
    out = []
    for col in range(ncols):
        piv_rows = [r for r in A if r[col] != 0]
        rest = [r for r in A if r[col] == 0]
        if not piv_rows:
            continue
        # gcd-reduce the pivot column
        while len(piv_rows) > 1:
            piv_rows.sort(key=lambda r: abs(r[col]))
            p = piv_rows[0]
            new = [p]
            for r in piv_rows[1:]:
                q = r[col] // p[col]
                rr = [x - q * y for x, y in zip(r, p)]
                if rr[col] != 0:
                    new.append(rr)
                elif any(rr):
                    rest.append(rr)
            piv_rows = new
        p = piv_rows[0]
        if p[col] < 0:
            p = [-x for x in p]
        out.append(p)
        A = rest
    # reduce entries above pivots
    for i in range(len(out)):
        col = next(c for c, x in enumerate(out[i]) if x)
        for k in range(i):
            q = out[k][col] // out[i][col]
            if q:
                out[k] = [x - q * y for x, y in zip(out[k], out[i])]
    return out


def lattice_basis(gens):
    """Canonical basis (HNF rows of Fractions) of the Z-span of rational rows."""
    d, ints = integral_scale(gens)
    return [tuple(Fraction(x, d) for x in r) for r in hnf(ints)]


def det(M):
    """Exact determinant (Fraction) by Gaussian elimination."""
    n = len(M)
    A = [[Fraction(x) for x in r] for r in M]
    result = Fraction(1)
    for i in range(n):
        piv = next((r for r in range(i, n) if A[r][i] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != i:
            A[i], A[piv] = A[piv], A[i]
            result = -result
        result *= A[i][i]
        for r in range(i + 1, n):
            f = A[r][i] / A[i][i]
            if f:
                A[r] = [x - f * y for x, y in zip(A[r], A[i])]
    return result


def lll_gram(G, delta=Fraction(3, 4)):
    """LLL-reduce a positive definite Gram matrix.

    Returns (U, G') with U unimodular (rows = new basis in old coordinates)
    and G' = U G U^T.
    """
    n = len(G)
    G = [[Fraction(x) for x in r] for r in G]
    U = [[int(i == j) for j in range(n)] for i in range(n)]

    def bil(i, j):
        return G[i][j]

    def gso():
        mu = [[Fraction(0)] * n for _ in range(n)]
        Bn = [Fraction(0)] * n
        for i in range(n):
            for j in range(i):
                s = bil(i, j)
                for k in range(j):
                    s -= mu[j][k] * mu[i][k] * Bn[k]
                mu[i][j] = s / Bn[j]
            s = bil(i, i)
            for k in range(i):
                s -= mu[i][k] ** 2 * Bn[k]
            Bn[i] = s
        return mu, Bn

    def add_row(i, j, q):
        # b_i <- b_i - q b_j
        U[i] = [x - q * y for x, y in zip(U[i], U[j])]
        for k in range(n):
            G[i][k] -= q * G[j][k]
        for k in range(n):
            G[k][i] -= q * G[k][j]

    def swap(i, j):
        U[i], U[j] = U[j], U[i]
        G[i], G[j] = G[j], G[i]
        for r in G:
            r[i], r[j] = r[j], r[i]

    k = 1
    mu, Bn = gso()
    while k < n:
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                add_row(k, j, q)
                mu, Bn = gso()
        if Bn[k] >= (delta - mu[k][k - 1] ** 2) * Bn[k - 1]:
            k += 1
        else:
            swap(k, k - 1)
            mu, Bn = gso()
            k = max(k - 1, 1)
    return U, G


def _cholesky_like(G):
    """q[i][i], q[i][j] (j > i) with Q(x) = sum_i q_ii (x_i + sum_j q_ij x_j)^2."""
    n = len(G)
    q = [[float(Fraction(G[i][j])) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k][l] -= q[k][i] * q[i][l]
    return q


def _exact_form(G):
    d, ints = integral_scale(G)
    return d, ints


def _qval(ints, x):
    n = len(x)
    s = 0
    for i in range(n):
        xi = x[i]
        if xi:
            row = ints[i]
            s += xi * sum(row[j] * x[j] for j in range(n))
    return s


def _enumerate(G, bound, exact=False):
    """Yield integer vectors x != 0 with Q(x) <= bound (or == bound if exact)."""
    n = len(G)
    q = _cholesky_like(G)
    d, ints = _exact_form(G)
    target = Fraction(bound) * d
    if target != int(target) and exact:
        return
    C = float(bound) * (1 + _EPS) + _EPS
    x = [0] * n

    def rec(i, remaining):
        center = -sum(q[i][j] * x[j] for j in range(i + 1, n))
        qi = q[i][i]
        if i == 0 and exact:
            t = float(bound) - (C - remaining)
            # remaining budget; solve qi (x0 - center)^2 = t
            if t < -_EPS * (1 + float(bound)):
                return
            s = sqrt(max(t, 0.0) / qi)
            cands = {round(center + s), round(center - s)}
            for v in sorted(cands):
                x[0] = v
                if any(x) and _qval(ints, x) == target:
                    yield tuple(x)
            x[0] = 0
            return
        r = sqrt(max(remaining, 0.0) / qi)
        lo, hi = ceil(center - r - _EPS), floor(center + r + _EPS)
        for v in range(lo, hi + 1):
            x[i] = v
            rem = remaining - qi * (v - center) ** 2
            if rem < -_EPS * (1 + C):
                continue
            if i == 0:
                if any(x):
                    val = _qval(ints, x)
                    if val <= target:
                        yield tuple(x)
            else:
                yield from rec(i - 1, rem)
        x[i] = 0

    yield from rec(n - 1, C)


def short_vectors(G, bound):
    """All (x, Q(x)) with 0 < Q(x) <= bound; Q(x) returned as Fraction."""
    d, ints = _exact_form(G)
    for x in _enumerate(G, bound):
        yield x, Fraction(_qval(ints, x), d)


def vectors_of_norm(G, m):
    """All integer x with Q(x) == m exactly."""
    return list(_enumerate(G, m, exact=True))


def theta_counts(G, bound):
    """[#{x : Q(x) = k}] for k = 0..bound, for an integral form Q."""
    counts = [0] * (int(bound) + 1)
    counts[0] = 1
    for _, v in short_vectors(G, bound):
        if v.denominator == 1:
            counts[int(v)] += 1
    return counts
