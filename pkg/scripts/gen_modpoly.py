"""Generate the classical modular polynomials Phi_p from the q-expansion of j.

The roots of Phi_p(X, j(tau)) are j(p tau) and j((tau + k)/p), k = 0..p-1.
Their power sums are integral q-series; Newton's identities give the
elementary symmetric functions, and each is rewritten as a polynomial in j
by peeling off leading terms.

    python3 scripts/gen_modpoly.py 2 3 5 7 --out src/heegner_lab/data
"""

import argparse
from fractions import Fraction
from pathlib import Path


def _sigma3(n):
    return sum(d ** 3 for d in range(1, n + 1) if n % d == 0)


def _mul(a, b, N):
    out = [0] * N
    for i, x in enumerate(a):
        if x:
            for k, y in enumerate(b[:N - i]):
                out[i + k] += x * y
    return out


def j_coefficients(N):
    """c[0..N-1] with j = q^-1 * sum c[k] q^k."""
    E4 = [1] + [240 * _sigma3(n) for n in range(1, N)]
    E4c = _mul(_mul(E4, E4, N), E4, N)
    # Delta / q = prod (1 - q^n)^24
    eta = [1] + [0] * (N - 1)
    for n in range(1, N):
        for _ in range(24):
            for k in range(N - 1, n - 1, -1):
                eta[k] -= eta[k - n]
    # invert eta
    inv = [0] * N
    inv[0] = 1
    for k in range(1, N):
        inv[k] = -sum(eta[i] * inv[k - i] for i in range(1, k + 1))
    return _mul(E4c, inv, N)


class Laurent:
    """Truncated Laurent series sum_{k >= v} c[k - v] q^k, known up to q^top."""

    def __init__(self, v, coeffs, top):
        self.v, self.c, self.top = v, list(coeffs), top
        self.c = self.c[:top - v + 1]

    def __mul__(self, o):
        v = self.v + o.v
        top = min(self.top + o.v, o.top + self.v)
        n = top - v + 1
        out = [0] * n
        for i, x in enumerate(self.c):
            if x and i < n:
                for k, y in enumerate(o.c[:n - i]):
                    out[i + k] += x * y
        return Laurent(v, out, top)

    def __add__(self, o):
        v = min(self.v, o.v)
        top = min(self.top, o.top)
        out = [0] * (top - v + 1)
        for s in (self, o):
            for i, x in enumerate(s.c):
                k = s.v + i
                if k <= top:
                    out[k - v] += x
        return Laurent(v, out, top)

    def scale(self, r):
        return Laurent(self.v, [x * r for x in self.c], self.top)

    def coeff(self, k):
        i = k - self.v
        return self.c[i] if 0 <= i < len(self.c) else 0


def phi(p):
    M = p * (p + 1) + 2            # highest q-power we must keep exact
    N = p * (M + p * (p + 1)) + 4  # j coefficients needed
    jc = j_coefficients(N)
    j = Laurent(-1, jc, N - 2)
    jp = Laurent(-p, [c if k % p == 0 else 0 for k, c in enumerate(_spread(jc, p))], p * (N - 2))
    powers = [Laurent(0, [1], 10 ** 9)]
    for _ in range(p + 1):
        powers.append(powers[-1] * j)
    jpp = [Laurent(0, [1], 10 ** 9)]
    for _ in range(p + 1):
        jpp.append(jpp[-1] * jp)
    # power sums of the p + 1 roots
    psums = []
    for m in range(1, p + 2):
        Jm = powers[m]
        # sum_k j((tau+k)/p)^m = p * sum_n c_m(p n) q^n
        lo = -(-Jm.v // p)
        hi = Jm.top // p
        up = Laurent(lo, [p * Jm.coeff(p * n) for n in range(lo, hi + 1)], hi)
        psums.append(jpp[m] + up)
    # Newton: k e_k = sum_{i=1}^k (-1)^(i-1) e_{k-i} p_i
    e = [Laurent(0, [1], 10 ** 9)]
    for k in range(1, p + 2):
        acc = None
        for i in range(1, k + 1):
            term = (e[k - i] * psums[i - 1]).scale((-1) ** (i - 1))
            acc = term if acc is None else acc + term
        e.append(acc.scale(Fraction(1, k)))
    coeffs = {}
    for k in range(1, p + 2):
        poly = _as_j_polynomial(e[k], powers, p + 1)
        sign = (-1) ** k
        for d, c in poly.items():
            if c:
                coeffs[(p + 1 - k, d)] = sign * c
    coeffs[(p + 1, 0)] = 1
    return coeffs


def _spread(jc, p):
    out = []
    for c in jc:
        out.append(c)
        out.extend([0] * (p - 1))
    return out


def _as_j_polynomial(f, powers, maxdeg):
    f = Laurent(f.v, f.c, min(f.top, 0))
    poly = {}
    for d in range(maxdeg, -1, -1):
        c = f.coeff(-d)
        if c:
            if Fraction(c).denominator != 1:
                raise ArithmeticError("non-integral coefficient")
            poly[d] = int(c)
            f = f + powers[d].scale(-c)
    if any(f.coeff(k) for k in range(f.v, 1)):
        raise ArithmeticError("series is not a polynomial in j of the expected degree")
    return poly


def write(p, coeffs, out_dir):
    lines = [f"p {p}"]
    for (i, jdeg), c in sorted(coeffs.items()):
        if i <= jdeg:
            lines.append(f"{i} {jdeg} {c}")
    path = Path(out_dir) / f"modpoly_{p}.txt"
    path.write_text("\n".join(lines) + "\n")
    return path


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("primes", nargs="+", type=int)
    ap.add_argument("--out", default="src/heegner_lab/data")
    args = ap.parse_args()
    for p in args.primes:
        c = phi(p)
        for (i, k), v in c.items():
            if c.get((k, i)) != v:
                raise ArithmeticError(f"Phi_{p} is not symmetric at {(i, k)}")
        print(write(p, c, args.out))


if __name__ == "__main__":
    main()
