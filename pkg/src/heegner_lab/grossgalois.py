"""Gross points, the class-group action on them, and the reduction experiments.

A Gross point of conductor n is a pair (i, x): i indexes a right ideal class
I_i and x lies in the left order O_l(I_i) with Z[x] = O_l(I_i) cap Q(x) of
discriminant n^2 D_L.  It is stored modulo conjugation by O_l(I_i)^x.

Pic(O_n) acts by (i, x) -> class of f(a) I_i, where f(a) is the ideal a of
O_n embedded through x, after transporting x to the left order of the class
representative.  The Galois orbit of the base point is this Pic(O_n)-orbit.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import factorial, gcd
import csv
import io
import json

from .arith import factorize, kronecker, next_prime
from .lattice import lll_gram, vectors_of_norm
from .quadratic import (BQForm, ImagQuadField, QuadOrder, Splitting, class_group, d_of_n,
                        prime_ideal_form, principal_form, reduce_form, splitting_type)
from .quaternion import (QLattice, brandt_matrix, class_index_of, definite_algebra,
                         eichler_order, gross_lattice, ideal_classes, maximal_order)

PRIME_SEARCH_BOUND = 10 ** 5
ELL_SEARCH_BOUND = 10 ** 4


# ----------------------------------------------------------------------------
# configuration and class data

@dataclass(frozen=True)
class ExperimentConfig:
    t1: int = 1
    t2: int = 1
    dimA: int = 1
    r: int = 1

    def __post_init__(self):
        for name in ("t1", "t2", "dimA", "r"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 1:
                raise ValueError(f"{name} must be a positive integer, got {v!r}")

    def bound(self):
        """(t1 * r!)^(2 dimA) * t2."""
        return (self.t1 * factorial(self.r)) ** (2 * self.dimA) * self.t2


def class_data(ell, N=1, D=None):
    """Ideal classes of the level-N Eichler order in B(ell) (cached per process)."""
    return _class_data(ell, N, D if N > 1 else None)


@lru_cache(maxsize=None)
def _class_data(ell, N, D):
    O = maximal_order(definite_algebra(ell))
    if N > 1:
        if D is None:
            raise ValueError("a level N > 1 needs the field D_L to build the Eichler order")
        O = eichler_order(O, N, D)
    return tuple(ideal_classes(O))


def weight_measure(classes):
    inv = [Fraction(1, c.w) for c in classes]
    s = sum(inv)
    return [x / s for x in inv]


def c_constant(classes, r):
    """min_i (w_i^-1 / sum_j w_j^-1)^r."""
    if r < 1:
        raise ValueError("r must be positive")
    return min(weight_measure(classes)) ** r


def total_variation(p, q):
    keys = set(p) | set(q) if isinstance(p, dict) else range(len(p))
    if isinstance(p, dict):
        return sum(abs(Fraction(p.get(k, 0)) - Fraction(q.get(k, 0))) for k in keys) / 2
    return sum(abs(Fraction(a) - Fraction(b)) for a, b in zip(p, q)) / 2


# ----------------------------------------------------------------------------
# Gross points

@dataclass(frozen=True)
class GrossPoint:
    class_index: int
    embedding: object
    conductor: int

    def key(self):
        return (self.class_index, self.embedding.c)

    def __lt__(self, other):
        return self.key() < other.key()

    @property
    def disc(self):
        return self.embedding.disc()

    def __repr__(self):
        coords = ", ".join(str(x) for x in self.embedding.c)
        return f"GrossPoint(class={self.class_index}, x=({coords}), n={self.conductor})"


def _canonical(x, cls):
    best = None
    for u in cls.units:
        y = u * x * u.conj()
        if best is None or y.c < best.c:
            best = y
    return best


def is_optimal(x, order_lattice, n):
    """Z[x] = L cap Q(x), given disc(x) = n^2 D_L with D_L fundamental."""
    for p in factorize(n).primes():
        for s in range(p):
            if (x - s) * Fraction(1, p) in order_lattice:
                return False
    return True


def _field_of(field_or_order):
    if isinstance(field_or_order, QuadOrder):
        return field_or_order.field, field_or_order.conductor
    if isinstance(field_or_order, ImagQuadField):
        return field_or_order, 1
    return ImagQuadField(field_or_order), 1


def _check_inert(ell, fld):
    if splitting_type(fld, ell) is not Splitting.INERT:
        raise ValueError(f"l={ell} is not inert in {fld}: reduction is not supersingular")


@lru_cache(maxsize=None)
def _reduced_gross(cls):
    G = gross_lattice(cls.left_order)
    U, Gr = lll_gram(G.gram())
    return G, U, Gr


def _embeddings_in_class(cls, fld, n):
    G, U, Gr = _reduced_gross(cls)
    target = n * n * -fld.D
    t = (n * fld.D) % 2
    O = cls.left_order_lattice
    alg = O.alg
    out = set()
    for v in vectors_of_norm(Gr, target):
        coeffs = [sum(v[r] * U[r][c] for r in range(3)) for c in range(3)]
        y = sum((G.basis[c] * coeffs[c] for c in range(3)), alg(0, 0, 0, 0))
        x = (y + t) * Fraction(1, 2)
        if x in O and is_optimal(x, O, n):
            out.add(_canonical(x, cls))
    return sorted((GrossPoint(cls.index, x, n) for x in out), key=GrossPoint.key)


def optimal_embeddings(classes, order, first_only=False):
    """All Gross points of the given conductor, sorted by (class index, coordinates)."""
    fld, n = _field_of(order)
    ell = classes[0].order.alg.ell
    N = classes[0].order.level
    _check_inert(ell, fld)
    if gcd(n, ell * N) != 1:
        raise ValueError(f"conductor {n} must be coprime to l*N = {ell * N}")
    out = []
    for cls in sorted(classes, key=lambda c: c.index):
        pts = _embeddings_in_class(cls, fld, n)
        if first_only and pts:
            return pts[:1]
        out.extend(pts)
    return out


def base_point(classes, order):
    """The lexicographically least Gross point of the conductor of `order`."""
    pts = optimal_embeddings(classes, order, first_only=True)
    if not pts:
        raise LookupError("no optimal embedding found")
    return pts[0]


def validate_point(pt, classes, D):
    cls = classes[pt.class_index]
    x = pt.embedding
    n = pt.conductor
    return (x.disc() == n * n * D and x in cls.left_order_lattice
            and is_optimal(x, cls.left_order_lattice, n))


# ----------------------------------------------------------------------------
# the class-group action

def act_by_ideal(pt, form, classes):
    """Act on pt by the O_n-ideal Z a + Z (-b + sqrt(disc))/2 of the form (a, b, c)."""
    x = pt.embedding
    t = x.trd()
    a, b, _ = form
    if (t - b) % 2:
        raise ValueError("form discriminant does not match the point's conductor")
    if form.disc != x.disc():
        raise ValueError(f"form of disc {form.disc} cannot act on a point of disc {x.disc()}")
    gens = [x.alg(a, 0, 0, 0), x - (t + b) * Fraction(1, 2)]
    I = classes[pt.class_index].ideal
    J = QLattice.from_elements(x.alg, [g * e for g in gens for e in I.basis()])
    k, alpha = class_index_of(J, classes)
    y = alpha.inverse() * x * alpha
    return GrossPoint(k, _canonical(y, classes[k]), pt.conductor)


def prime_representatives(g, order, avoid, limit=PRIME_SEARCH_BOUND):
    """Unreduced prime forms (p, b, c) in the class of g, p coprime to avoid."""
    target = reduce_form(g)
    D = order.disc
    p = 1
    while True:
        p = next_prime(p)
        if p > limit:
            return
        if avoid % p == 0 or order.conductor % p == 0 or kronecker(D, p) == -1:
            continue
        for sign in (1, -1):
            f = prime_ideal_form(order, p, sign)
            if reduce_form(f) == target:
                yield f
                break


def class_action(pt, g, classes, order=None, avoid=1):
    """The Gross point g * pt, computed through the least suitable prime in g's class."""
    order = order or _order_of_point(pt, classes)
    ell = classes[0].order.alg.ell
    N = classes[0].order.level
    rep = next(prime_representatives(g, order, ell * N * pt.conductor * avoid), None)
    if rep is None:
        raise LookupError(f"no prime representative of {tuple(g)} below {PRIME_SEARCH_BOUND}")
    return act_by_ideal(pt, rep, classes)


def _order_of_point(pt, classes):
    disc = pt.embedding.disc()
    n = pt.conductor
    return QuadOrder(ImagQuadField(disc // (n * n)), n)


def _generators(G, order, avoid):
    """Small prime forms generating Pic(O_n): (reduced, unreduced) pairs."""
    ident = G.elements[G.identity]
    gens, sub = [], {ident}
    p = 1
    while len(sub) < len(G):
        p = next_prime(p)
        if p > PRIME_SEARCH_BOUND:
            raise LookupError("could not find generators for the class group")
        if avoid % p == 0 or order.conductor % p == 0 or kronecker(order.disc, p) == -1:
            continue
        f = prime_ideal_form(order, p)
        g = reduce_form(f)
        if g not in sub:
            gens.append((g, f))
            sub = G.generated_subgroup([h for h, _ in gens])
    return gens


def galois_orbit(base, classes, order):
    """{class-group element: Gross point} for the Pic(O_n)-orbit of base."""
    G = class_group(order)
    ell = classes[0].order.alg.ell
    N = classes[0].order.level
    gens = _generators(G, order, ell * N * order.conductor)
    ident = G.elements[G.identity]
    points = {ident: base}
    frontier = [ident]
    while frontier:
        nxt = []
        for e in frontier:
            for g, f in gens:
                e2 = G.mul(g, e)
                if e2 not in points:
                    points[e2] = act_by_ideal(points[e], f, classes)
                    nxt.append(e2)
        frontier = nxt
    return G, points


# ----------------------------------------------------------------------------
# twists and the simultaneous reduction table

@dataclass(frozen=True)
class Twist:
    """A Galois element given by a class of Pic(O_c), lifted through a prime of L."""

    conductor: int
    form: BQForm

    @staticmethod
    def identity(D):
        return Twist(1, principal_form(D))

    def __str__(self):
        a, b, c = self.form
        return f"{self.conductor}:({a},{b},{c})"


def parse_twists(text, D):
    """'id' or 'c:a,b,c' items separated by ';'."""
    out = []
    for item in text.split(";"):
        item = item.strip()
        if not item:
            continue
        if item in ("id", "1"):
            out.append(Twist.identity(D))
            continue
        cond, _, coeffs = item.partition(":")
        a, b, c = (int(v) for v in coeffs.split(","))
        f = BQForm(a, b, c)
        if f.disc != int(cond) ** 2 * D:
            raise ValueError(f"twist form {item} does not have discriminant {int(cond) ** 2 * D}")
        out.append(Twist(int(cond), reduce_form(f)))
    return out


def twist_to_pic(tw, order, avoid):
    """Image in Pic(O_n) of the Frobenius at the least split prime in tw's class."""
    D = order.field.D
    c = tw.conductor
    src = QuadOrder(order.field, c)
    n = order.conductor
    if tw.form == principal_form(src.disc):
        return principal_form(order.disc)
    for f in prime_representatives(tw.form, src, 2 * avoid * c * n * D):
        p, b, _ = f
        # the prime of O_L with sqrt(D) = b / c mod p
        s = b * pow(c, -1, p) % p
        bn = n * s % p
        if (bn - order.disc) % 2:
            bn += p
        return reduce_form(BQForm(p, bn, (bn * bn - order.disc) // (4 * p)))
    raise LookupError(f"no split prime represents twist {tw}")


@dataclass
class GaloisOrbitTable:
    n: int
    ell: int
    D: int
    twists: list
    rows: list
    entries: list
    num_classes: int
    distinct_points: int

    def __len__(self):
        return len(self.rows)

    def image(self):
        return [tuple(r) for r in self.entries]

    def column(self, j):
        return [r[j] for r in self.entries]

    def coverage(self, partition=None):
        """Fraction of the product-of-diagonals target hit by the image."""
        blocks = partition or default_partition(self.twists)
        target = self.num_classes ** len(blocks)
        hit = {tup for tup in self.image() if _on_diagonals(tup, blocks)}
        return Fraction(len(hit), target)


def _on_diagonals(tup, blocks):
    return all(len({tup[j] for j in b}) == 1 for b in blocks)


def default_partition(twists):
    """Identical twists share a block; all others are singletons."""
    blocks = {}
    for j, tw in enumerate(twists):
        blocks.setdefault(tw, []).append(j)
    return sorted(blocks.values())


def simultaneous_reduction(n, twists, classes, fld):
    fld = fld if isinstance(fld, ImagQuadField) else ImagQuadField(fld)
    order = QuadOrder(fld, n)
    ell = classes[0].order.alg.ell
    N = classes[0].order.level
    base = base_point(classes, order)
    G, points = galois_orbit(base, classes, order)
    avoid = ell * N
    shifts = [twist_to_pic(tw, order, avoid) for tw in twists]
    entries = []
    for nu in G.elements:
        entries.append([points[G.mul(s, nu)].class_index for s in shifts])
    distinct = len({p.key() for p in points.values()})
    return GaloisOrbitTable(n, ell, fld.D, list(twists), list(G.elements), entries,
                            len(classes), distinct)


def column_translation(table, j1, j2):
    """Class-group element s with column j2 = column j1 shifted by s, else None."""
    order = QuadOrder(ImagQuadField(table.D), table.n)
    G = class_group(order)
    idx = {f: i for i, f in enumerate(table.rows)}
    col1, col2 = table.column(j1), table.column(j2)
    for s in G.elements:
        if all(col2[i] == col1[idx[G.mul(s, nu)]] for i, nu in enumerate(table.rows)):
            return s
    return None


# ----------------------------------------------------------------------------
# reports

SCHEMA_KEYS = ("ell", "n", "d", "c", "in_regime", "coverage", "tv")


@dataclass
class EquidistReport:
    kind: str
    rows: list
    summary: dict = field(default_factory=dict)

    def to_dict(self):
        return {"kind": self.kind, "rows": self.rows, "summary": self.summary}

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def to_csv(self):
        if not self.rows:
            return ""
        keys = sorted({k for r in self.rows for k in r})
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
        w.writeheader()
        for r in self.rows:
            w.writerow({k: _csv_cell(r.get(k)) for k in keys})
        return buf.getvalue()


def _csv_cell(v):
    if isinstance(v, (list, tuple)):
        return "/".join(str(x) for x in v)
    return v


def _frac(x):
    return [x.numerator, x.denominator]


def _pmap(func, items, workers):
    items = list(items)
    if workers and workers > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(func, items))
    return [func(it) for it in items]


def _surjectivity_row(args):
    ell, N, D, twists, n, partition = args
    classes = class_data(ell, N, D)
    fld = ImagQuadField(D)
    table = simultaneous_reduction(n, twists, classes, fld)
    blocks = partition or default_partition(twists)
    k = len(blocks)
    d = d_of_n(n, fld)
    c = c_constant(classes, len(twists))
    mu = weight_measure(classes)
    emp = {}
    for tup in table.image():
        emp[tup] = emp.get(tup, 0) + Fraction(1, len(table))
    pred = {}
    for tup in _target_tuples(len(classes), blocks, len(twists)):
        p = Fraction(1)
        for b in blocks:
            p *= mu[tup[b[0]]]
        pred[tup] = p
    return {
        "ell": ell,
        "n": n,
        "d": _frac(d),
        "c": _frac(c),
        "k": k,
        "in_regime": 1 - d < c,
        "coverage": float(table.coverage(blocks)),
        "tv": float(total_variation(emp, pred)),
        "rows": len(table),
        "distinct_points": table.distinct_points,
    }


def _target_tuples(s, blocks, r):
    from itertools import product
    for vals in product(range(s), repeat=len(blocks)):
        tup = [0] * r
        for v, b in zip(vals, blocks):
            for j in b:
                tup[j] = v
        yield tuple(tup)


def _check_n(n, ell, N, fld):
    if gcd(n, ell * N * fld.D) != 1:
        raise ValueError(f"n={n} must be coprime to l*N*D_L = {ell * N * fld.D}")


def surjectivity_experiment(ell, fld, N=1, twists=None, n_list=(), partition=None, workers=1):
    fld = fld if isinstance(fld, ImagQuadField) else ImagQuadField(fld)
    _check_inert(ell, fld)
    twists = list(twists) if twists else [Twist.identity(fld.D)]
    for n in n_list:
        _check_n(n, ell, N, fld)
    jobs = [(ell, N, fld.D, tuple(twists), n, partition) for n in sorted(n_list)]
    rows = _pmap(_surjectivity_row, jobs, workers)
    full = [r["n"] for r in rows if r["coverage"] == 1.0]
    summary = {
        "ell": ell,
        "D": fld.D,
        "twists": [str(t) for t in twists],
        "smallest_full_coverage_n": min(full) if full else None,
        "full_coverage_from": _full_from(rows),
    }
    return EquidistReport("surjectivity", rows, summary)


def _full_from(rows):
    """Least n in the run from which every later n has full coverage."""
    best = None
    for r in reversed(rows):
        if r["coverage"] != 1.0:
            break
        best = r["n"]
    return best


def hecke_equidist_stats(ell, N=1, x0_class=None, n_list=(), classes=None, D=None):
    """TV between rows of B(n)/deg and the weight measure.

    x0_class=None reports every row; `tv` is then the maximum over rows.
    """
    classes = classes if classes is not None else class_data(ell, N, D)
    mu = weight_measure(classes)
    rows = []
    for n in sorted(n_list):
        if gcd(n, ell * N) != 1:
            raise ValueError(f"n={n} must be coprime to l*N = {ell * N}")
        B = brandt_matrix(classes, n)
        deg = sum(B.matrix[0])
        which = range(len(classes)) if x0_class is None else [x0_class]
        tvs = [total_variation([Fraction(v, deg) for v in B.matrix[i]], mu) for i in which]
        rows.append({
            "ell": ell,
            "n": n,
            "deg": deg,
            "tv": float(max(tvs)),
            "tv_rows": [float(t) for t in tvs],
            "tv_exact": _frac(max(tvs)),
        })
    env = 0.0
    for r in reversed(rows):
        env = max(env, r["tv"])
        r["envelope"] = env
    summary = {"ell": ell, "weights": [c.w for c in classes],
               "measure": [_frac(m) for m in mu],
               "x0_class": x0_class}
    return EquidistReport("hecke_equidist", rows, summary)


# ----------------------------------------------------------------------------
# choosing l, the empirical partition of T, and the multi-l scan

@dataclass
class EllSelection:
    ell: int
    bound: int
    num_classes: int
    certificate: list

    def to_dict(self):
        return {"ell": self.ell, "bound": self.bound, "num_classes": self.num_classes,
                "certificate": [list(c) for c in self.certificate]}


def select_ell(cfg, fld, N=1, limit=ELL_SEARCH_BOUND):
    """Least l inert in L, coprime to N D_L, with #classes(l, N) > cfg.bound()."""
    fld = fld if isinstance(fld, ImagQuadField) else ImagQuadField(fld)
    bound = cfg.bound()
    cert = []
    ell = 1
    while True:
        ell = next_prime(ell)
        if ell > limit:
            raise LookupError(f"no l <= {limit} with more than {bound} classes")
        if (N * fld.D) % ell == 0 or splitting_type(fld, ell) is not Splitting.INERT:
            continue
        s = len(class_data(ell, N, fld.D))
        cert.append((ell, s))
        if s > bound:
            return EllSelection(ell, bound, s, cert)


class InsufficientDataError(ValueError):
    pass


def partition_T(twists, tables, min_data=3):
    """Group twists whose paired columns stay on a graph of a bijection for every table."""
    tables = list(tables)
    if len(tables) < min_data:
        raise InsufficientDataError(f"need at least {min_data} orbit tables, got {len(tables)}")
    r = len(twists)
    parent = list(range(r))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in combinations(range(r), 2):
        if all(_is_bijection_graph(t.column(i), t.column(j)) for t in tables):
            parent[find(j)] = find(i)
    blocks = {}
    for i in range(r):
        blocks.setdefault(find(i), []).append(i)
    return sorted(blocks.values())


def _is_bijection_graph(c1, c2):
    fwd, bwd = {}, {}
    for a, b in zip(c1, c2):
        if fwd.setdefault(a, b) != b or bwd.setdefault(b, a) != a:
            return False
    return True


def _distinct_pair_fraction(table):
    img = table.image()
    h = len(img)
    if h < 2:
        return 1.0
    pairs = h * (h - 1) // 2
    same = 0
    counts = {}
    for tup in img:
        counts[tup] = counts.get(tup, 0) + 1
    for v in counts.values():
        same += v * (v - 1) // 2
    return (pairs - same) / pairs


def _scan_row(args):
    ell, N, D, twists, n = args
    classes = class_data(ell, N, D)
    table = simultaneous_reduction(n, list(twists), classes, ImagQuadField(D))
    return {"ell": ell, "n": n, "rows": len(table),
            "distinct_pair_fraction": _distinct_pair_fraction(table),
            "coverage": float(table.coverage())}


def multi_ell_scan(S, fld, N=1, twists=None, n_list=(), cfg=None, workers=1):
    fld = fld if isinstance(fld, ImagQuadField) else ImagQuadField(fld)
    cfg = cfg or ExperimentConfig()
    twists = list(twists) if twists else [Twist.identity(fld.D)]
    for ell in S:
        _check_inert(ell, fld)
        for n in n_list:
            _check_n(n, ell, N, fld)
    per_ell = []
    jobs = [(ell, N, fld.D, tuple(twists), n) for ell in sorted(S) for n in sorted(n_list)]
    scan = _pmap(_scan_row, jobs, workers)
    for ell in sorted(S):
        s = len(class_data(ell, N, fld.D))
        ratio = Fraction(cfg.t1, s)
        per_ell.append({
            "ell": ell,
            "s": s,
            "bound_ratio": _frac(ratio),
            "bound_ratio_float": float(ratio),
            "n_rows": [r for r in scan if r["ell"] == ell],
        })
    ratios = [Fraction(*e["bound_ratio"]) for e in per_ell]
    summary = {
        "D": fld.D,
        "t1": cfg.t1,
        "strictly_decreasing": all(a > b for a, b in zip(ratios, ratios[1:])),
    }
    return EquidistReport("multi_ell", per_ell, summary)


def vertical_scan(ell, fld, p, K, N=1, twists=None, workers=1):
    """Surjectivity reports along n = p^k, k = 1..K."""
    return surjectivity_experiment(ell, fld, N, twists, [p ** k for k in range(1, K + 1)],
                                   workers=workers)
