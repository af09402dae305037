"""Write the bundled multiplication tables for A5 and PSL(2,7).

A5 is generated by the permutations (0 1 2 3 4) and (0 1 2); PSL(2,7) by the
matrices (1 1; 0 1) and (0 -1; 1 0) mod 7, taken modulo -1.

    python3 scripts/gen_groups.py --out src/heegner_lab/data
"""

import argparse
from pathlib import Path


def closure(gens, mul, identity):
    elems = [identity]
    seen = {identity}
    i = 0
    while i < len(elems):
        for g in gens:
            y = mul(elems[i], g)
            if y not in seen:
                seen.add(y)
                elems.append(y)
        i += 1
    return elems


def perm_mul(p, q):
    # (p q)(x) = p(q(x))
    return tuple(p[q[x]] for x in range(len(q)))


def a5():
    gens = [(1, 2, 3, 4, 0), (1, 2, 0, 3, 4)]
    return "A5", closure(gens, perm_mul, tuple(range(5))), gens, perm_mul


def _canon(m):
    a, b, c, d = (x % 7 for x in m)
    neg = tuple(-x % 7 for x in (a, b, c, d))
    return min((a, b, c, d), neg)


def mat_mul(x, y):
    a, b, c, d = x
    e, f, g, h = y
    return _canon((a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h))


def psl27():
    gens = [_canon((1, 1, 0, 1)), _canon((0, -1, 1, 0))]
    return "PSL(2,7)", closure(gens, mat_mul, _canon((1, 0, 0, 1))), gens, mat_mul


def write(name, elems, gens, mul, path):
    index = {e: i for i, e in enumerate(elems)}
    lines = [f"name {name}", f"order {len(elems)}", "identity 0",
             "generators " + " ".join(str(index[g]) for g in gens), "table"]
    for x in elems:
        lines.append(" ".join(str(index[mul(x, y)]) for y in elems))
    Path(path).write_text("\n".join(lines) + "\n")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="src/heegner_lab/data")
    args = ap.parse_args()
    for fname, build in (("a5.txt", a5), ("psl27.txt", psl27)):
        name, elems, gens, mul = build()
        write(name, elems, gens, mul, Path(args.out) / fname)
        print(fname, len(elems))


if __name__ == "__main__":
    main()
