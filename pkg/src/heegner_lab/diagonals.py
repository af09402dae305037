"""Subgroups of G^r normalized by the diagonal, for small non-abelian simple G.

Such subgroups should be exactly the products of diagonals
prod_i Delta^{T_i}(G) over families of pairwise disjoint nonempty T_i.
This module checks that by exhaustive Goursat enumeration.
"""

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from math import comb
import random

from ._data import data_dir

MAX_ORDER = {1: 168, 2: 168, 3: 60}


# ----------------------------------------------------------------------------
# groups

class FiniteGroup:
    """A finite group on 0..n-1 given by its multiplication table."""

    def __init__(self, table, identity=0, generators=None, name="G"):
        self.table = [list(r) for r in table]
        self.identity = identity
        self.name = name
        n = len(self.table)
        if any(len(r) != n for r in self.table):
            raise ValueError("multiplication table is not square")
        self.inv = [None] * n
        for a in range(n):
            if self.table[a][identity] != a or self.table[identity][a] != a:
                raise ValueError(f"{identity} is not an identity")
            for b in range(n):
                if self.table[a][b] == identity:
                    self.inv[a] = b
                    break
            if self.inv[a] is None:
                raise ValueError(f"element {a} has no inverse")
        self.generators = list(generators) if generators else self._greedy_generators()
        if len(closure(self.generators, self.mul, identity)) != n:
            raise ValueError("listed generators do not generate the group")

    @property
    def order(self):
        return len(self.table)

    def __len__(self):
        return len(self.table)

    def mul(self, a, b):
        return self.table[a][b]

    def conj(self, g, x):
        """g x g^-1."""
        return self.table[self.table[g][x]][self.inv[g]]

    def elements(self):
        return range(len(self.table))

    def check_associative(self, samples=2000, seed=0):
        rng = random.Random(seed)
        n = len(self.table)
        t = self.table
        for _ in range(samples):
            a, b, c = rng.randrange(n), rng.randrange(n), rng.randrange(n)
            if t[t[a][b]][c] != t[a][t[b][c]]:
                return False
        return True

    def is_abelian(self):
        return all(self.mul(a, b) == self.mul(b, a) for a in self.generators for b in self.generators)

    def _greedy_generators(self):
        gens, C = [], {self.identity}
        for x in self.elements():
            if x not in C:
                gens.append(x)
                C = closure(gens, self.mul, self.identity)
        return gens

    def is_normal(self, S):
        return all(self.conj(g, s) in S for g in self.generators for s in S)

    @cached_property
    def subgroups(self):
        """All subgroups as frozensets, sorted by (order, sorted elements)."""
        return enumerate_subgroups(list(self.elements()), self.mul, self.identity)

    def normal_subgroups(self):
        return [S for S in self.subgroups if self.is_normal(S)]

    def is_simple(self):
        return len(self.normal_subgroups()) == 2

    def automorphisms(self):
        """All automorphisms as tuples phi[x]."""
        return quotient_isomorphisms(_Quotient.trivial(self), _Quotient.trivial(self))

    def inner_automorphisms(self):
        return sorted({tuple(self.conj(g, x) for x in self.elements()) for g in self.elements()})

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order})"


def closure(gens, mul, identity):
    elems = [identity]
    seen = {identity}
    i = 0
    while i < len(elems):
        x = elems[i]
        for g in gens:
            y = mul(x, g)
            if y not in seen:
                seen.add(y)
                elems.append(y)
        i += 1
    return frozenset(seen)


def _small_generators(S, mul, identity):
    gens, C = [], frozenset([identity])
    for x in sorted(S):
        if x not in C:
            gens.append(x)
            C = closure(gens, mul, identity)
    return gens


def enumerate_subgroups(elements, mul, identity):
    """Every subgroup, by joining cyclic subgroups until nothing new appears."""
    cyclic = {}
    for x in elements:
        C = closure([x], mul, identity)
        cyclic.setdefault(C, x)
    found = {frozenset([identity]): []}
    frontier = list(found)
    while frontier:
        nxt = []
        for S in frontier:
            for C, x in cyclic.items():
                if C <= S:
                    continue
                gens = found[S] + [x]
                T = closure(gens, mul, identity)
                if T not in found:
                    found[T] = gens
                    nxt.append(T)
        frontier = nxt
    return sorted(found, key=lambda S: (len(S), sorted(S)))


def load_group(path):
    """Read 'name', 'order', 'identity', 'generators' headers and a 'table' block."""
    lines = [ln.split() for ln in open(path).read().splitlines() if ln.strip()]
    header = {}
    i = 0
    while lines[i][0] != "table":
        header[lines[i][0]] = lines[i][1:]
        i += 1
    rows = [[int(v) for v in ln] for ln in lines[i + 1:]]
    n = int(header["order"][0])
    if len(rows) != n:
        raise ValueError(f"{path}: expected {n} table rows, found {len(rows)}")
    G = FiniteGroup(rows, int(header.get("identity", ["0"])[0]),
                    [int(v) for v in header.get("generators", [])] or None,
                    " ".join(header.get("name", ["G"])))
    if not G.check_associative():
        raise ValueError(f"{path}: table is not associative")
    return G


def bundled_group(name, directory=None):
    files = {"A5": "a5.txt", "PSL(2,7)": "psl27.txt", "PSL27": "psl27.txt"}
    if name not in files:
        raise ValueError(f"no bundled group {name!r}; choose from A5, PSL(2,7)")
    return load_group(data_dir(directory) / files[name])


# ----------------------------------------------------------------------------
# quotients and their isomorphisms

class _Quotient:
    """S/N for S a subgroup (element set) and N normal in S."""

    def __init__(self, S, N, mul, identity):
        self.mul_full = mul
        coset = {}
        reps = []
        for s in sorted(S):
            if s in coset:
                continue
            cid = len(reps)
            reps.append(s)
            for n in N:
                coset[mul(s, n)] = cid
        self.coset = coset
        self.reps = reps
        self.table = [[coset[mul(a, b)] for b in reps] for a in reps]
        self.identity = coset[identity]

    @staticmethod
    def trivial(G):
        return _Quotient(G.elements(), [G.identity], G.mul, G.identity)

    def __len__(self):
        return len(self.reps)

    def mul(self, a, b):
        return self.table[a][b]

    def element_order(self, a):
        k, x = 1, a
        while x != self.identity:
            x = self.table[x][a]
            k += 1
        return k


def quotient_isomorphisms(Q1, Q2):
    """All isomorphisms Q1 -> Q2 as tuples over coset ids."""
    if len(Q1) != len(Q2):
        return []
    n = len(Q1)
    gens = _small_generators(range(n), Q1.mul, Q1.identity)
    ords1 = [Q1.element_order(g) for g in gens]
    by_order = {}
    for y in range(n):
        by_order.setdefault(Q2.element_order(y), []).append(y)
    out = []
    for imgs in product(*(by_order.get(o, []) for o in ords1)):
        phi = _extend(Q1, Q2, gens, imgs)
        if phi is not None:
            out.append(phi)
    return out


def _extend(Q1, Q2, gens, imgs):
    phi = {Q1.identity: Q2.identity}
    queue = [Q1.identity]
    while queue:
        x = queue.pop()
        for g, gi in zip(gens, imgs):
            y = Q1.mul(x, g)
            v = Q2.mul(phi[x], gi)
            if y in phi:
                if phi[y] != v:
                    return None
            else:
                phi[y] = v
                queue.append(y)
    if len(set(phi.values())) != len(Q1):
        return None
    return tuple(phi[x] for x in range(len(Q1)))


# ----------------------------------------------------------------------------
# subgroups of G^r

@dataclass(frozen=True)
class SubgroupDescriptor:
    elements: frozenset
    r: int
    certificate: tuple = None

    def __len__(self):
        return len(self.elements)


def _tuple_mul(G):
    t = G.table

    def mul(x, y):
        return tuple(t[a][b] for a, b in zip(x, y))
    return mul


def _is_delta_normalized(H, G):
    for g in G.generators:
        for h in H:
            if tuple(G.conj(g, x) for x in h) not in H:
                return False
    return True


def is_delta_normalized(H, G):
    H = H.elements if isinstance(H, SubgroupDescriptor) else frozenset(H)
    return _is_delta_normalized(H, G)


def _normal_subgroups_of(S, G, mul, identity, conj):
    """Normal subgroups of the subgroup S (tuples), via normal closures of its classes."""
    gens_S = _small_generators(S, mul, identity)
    classes = []
    seen = set()
    for x in sorted(S):
        if x in seen:
            continue
        cls = {x}
        queue = [x]
        while queue:
            y = queue.pop()
            for g in gens_S:
                z = conj(g, y)
                if z not in cls:
                    cls.add(z)
                    queue.append(z)
        seen |= cls
        classes.append(cls)
    closures = {}
    for cls in classes:
        gens, C = [], frozenset([identity])
        for c in sorted(cls):
            if c not in C:
                gens.append(c)
                C = closure(gens, mul, identity)
        closures.setdefault(C, gens)
    normals = dict(closures)
    changed = True
    while changed:
        changed = False
        for A, B in list(product(list(normals), repeat=2)):
            if A <= B or B <= A:
                continue
            gens = normals[A] + normals[B]
            C = closure(gens, mul, identity)
            if C not in normals:
                normals[C] = gens
                changed = True
    return sorted(normals, key=len)


def _tuple_conj(G):
    t, inv = G.table, G.inv

    def conj(g, x):
        return tuple(t[t[a][b]][inv[a]] for a, b in zip(g, x))
    return conj


def _goursat(G, P_list, prune=True):
    """Subgroups H <= P x G with projection P in P_list, normalized by Delta.

    Elements of P are tuples; the result is a list of frozensets of tuples.
    """
    mul_G = G.mul
    e = G.identity
    subs_G = [S for S in G.subgroups if not prune or G.is_normal(S)]
    normals_G = {S: [N for N in G.subgroups if N <= S and _normal_in(N, S, G)
                     and (not prune or G.is_normal(N))] for S in subs_G}
    out = []
    for P in P_list:
        k = len(next(iter(P)))
        mul_P = _tuple_mul(G)
        idP = (e,) * k
        conj_P = _tuple_conj(G)
        nP = _normal_subgroups_of(P, G, mul_P, idP, conj_P)
        if prune:
            nP = [N for N in nP if _is_delta_normalized(N, G)]
        for A1 in nP:
            Q1 = _Quotient(P, A1, mul_P, idP)
            for B in subs_G:
                for B1 in normals_G[B]:
                    if len(B) // len(B1) != len(Q1):
                        continue
                    Q2 = _Quotient(B, B1, mul_G, e)
                    for theta in quotient_isomorphisms(Q1, Q2):
                        H = frozenset(p + (b,) for p in P for b in B
                                      if theta[Q1.coset[p]] == Q2.coset[b])
                        out.append(H)
    return out


def _normal_in(N, S, G):
    return all(G.conj(s, n) in N for s in S for n in N)


def delta_normalized_subgroups(G, r, prune=True):
    """All subgroups of G^r normalized by the diagonal, with certificates.

    r = 1 scans the subgroups of G; r = 2 runs Goursat over pairs of subgroups,
    normal subgroups and quotient isomorphisms; r = 3 runs Goursat again on
    P x G for each diagonal-normalized P <= G^2.  With prune=True only data whose
    projections and kernels are themselves diagonal-normalized are expanded;
    this is a necessary condition, so nothing is lost.
    """
    if r not in MAX_ORDER:
        raise ValueError("r must be 1, 2 or 3")
    if G.order > MAX_ORDER[r]:
        raise ValueError(f"|G| = {G.order} exceeds the bound {MAX_ORDER[r]} for r = {r}")
    if G.is_abelian():
        raise ValueError("G must be non-abelian")
    if r == 1:
        found = [frozenset((x,) for x in S) for S in G.subgroups if G.is_normal(S)]
    else:
        P_list = [frozenset((x,) for x in S) for S in G.subgroups
                  if not prune or G.is_normal(S)]
        cands = _goursat(G, P_list, prune)
        found = [H for H in cands if _is_delta_normalized(H, G)]
        if r == 3:
            cands = _goursat(G, found, prune)
            found = [H for H in cands if _is_delta_normalized(H, G)]
    found = sorted(set(found), key=lambda H: (len(H), sorted(H)))
    return [SubgroupDescriptor(H, r, is_product_of_diagonals(H, G, r)) for H in found]


def _is_subgroup(H, G):
    mul = _tuple_mul(G)
    r = len(next(iter(H)))
    e = (G.identity,) * r
    if e not in H:
        return False
    gens, C = [], frozenset([e])
    for h in sorted(H):
        if h not in C:
            gens.append(h)
            C = closure(gens, mul, e)
            if not C <= H:
                return False
    return C == H


def product_of_diagonals(G, r, partition):
    """prod_i Delta^{T_i}(G) in G^r for 1-based blocks T_i."""
    blocks = [sorted(b) for b in partition]
    used = [j for b in blocks for j in b]
    if len(used) != len(set(used)) or any(not 1 <= j <= r for j in used) or any(not b for b in blocks):
        raise ValueError(f"{partition} is not a family of disjoint nonempty subsets of 1..{r}")
    out = set()
    for vals in product(G.elements(), repeat=len(blocks)):
        tup = [G.identity] * r
        for v, b in zip(vals, blocks):
            for j in b:
                tup[j - 1] = v
        out.add(tuple(tup))
    return frozenset(out)


def is_product_of_diagonals(H, G, r):
    """The partition certificate of H if H is a product of diagonals, else None."""
    H = H.elements if isinstance(H, SubgroupDescriptor) else frozenset(H)
    if not H or any(len(h) != r for h in H) or not _is_subgroup(H, G):
        raise ValueError("input is not a subgroup of G^r")
    full = []
    for i in range(r):
        proj = {h[i] for h in H}
        if len(proj) == G.order:
            full.append(i)
        elif len(proj) != 1:
            return None
    blocks = []
    for i in full:
        for b in blocks:
            j = b[0]
            if all(h[i] == h[j] for h in H):
                b.append(i)
                break
        else:
            blocks.append([i])
    cert = tuple(tuple(j + 1 for j in b) for b in blocks)
    if len(H) != G.order ** len(blocks):
        return None
    if product_of_diagonals(G, r, cert) != H:
        return None
    return cert


def twisted_diagonal(G, phi):
    """{(g, phi(g))} for an automorphism phi given as a tuple."""
    return frozenset((g, phi[g]) for g in G.elements())


def outer_automorphisms(G):
    inner = set(G.inner_automorphisms())
    return [phi for phi in G.automorphisms() if phi not in inner]


def bell(n):
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


def expected_count(r):
    """Families of pairwise disjoint nonempty subsets of an r-set: sum C(r,j) Bell(j)."""
    if not 0 <= r <= 6:
        raise ValueError("r must lie in 0..6")
    return sum(comb(r, j) * bell(j) for j in range(r + 1))
