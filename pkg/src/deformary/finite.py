"""Finite groups by multiplication table, a catalogue of all groups of order <= 16,
and enumeration of matrix representations of them over small prime fields."""

from __future__ import annotations

import itertools
from collections import Counter, deque
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Hashable, Iterable, Sequence

from deformary.groups import GroupRep, MarkedGroup
from deformary.ring import FieldSpec, GaloisRing, Matrix


@dataclass(frozen=True)
class FiniteGroup:
    """Elements are 0..n-1 with 0 the identity; ``table[a][b]`` is the index of a*b."""

    name: str
    table: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.table)
        if any(len(r) != n for r in self.table):
            raise ValueError("table is not square")
        if list(self.table[0]) != list(range(n)) or [r[0] for r in self.table] != list(range(n)):
            raise ValueError("element 0 must be the identity")
        full = set(range(n))
        if any(set(r) != full for r in self.table) or any({r[j] for r in self.table} != full for j in range(n)):
            raise ValueError("table is not a Latin square")

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    @cached_property
    def inverses(self) -> tuple[int, ...]:
        return tuple(self.table[a].index(0) for a in range(self.order))

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        x = 0
        for _ in range(k):
            x = self.mul(x, a)
        return x

    def element_order(self, a: int) -> int:
        x, k = a, 1
        while x != 0:
            x = self.mul(x, a)
            k += 1
        return k

    def is_abelian(self) -> bool:
        t = self.table
        return all(t[a][b] == t[b][a] for a in range(self.order) for b in range(a))

    def is_associative(self) -> bool:
        t = self.table
        r = range(self.order)
        return all(t[t[a][b]][c] == t[a][t[b][c]] for a in r for b in r for c in r)

    def subgroup(self, gens: Iterable[int]) -> set[int]:
        seen = {0}
        frontier = [0]
        gens = list(gens)
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = self.mul(x, g)
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        return seen

    @cached_property
    def generating_set(self) -> tuple[int, ...]:
        """Greedy small generating set, preferring elements of large order."""
        order = sorted(range(1, self.order), key=lambda a: (-self.element_order(a), a))
        gens: list[int] = []
        H = {0}
        while len(H) < self.order:
            best = max((a for a in order if a not in H), key=lambda a: len(self.subgroup(gens + [a])))
            gens.append(best)
            H = self.subgroup(gens)
        return tuple(gens)

    def center(self) -> set[int]:
        t = self.table
        return {a for a in range(self.order) if all(t[a][b] == t[b][a] for b in range(self.order))}

    def derived_subgroup(self) -> set[int]:
        comms = {self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
                 for a in range(self.order) for b in range(self.order)}
        return self.subgroup(comms)

    def invariants(self) -> tuple:
        """Isomorphism invariants used to certify the catalogue has no duplicates."""
        n = self.order
        t = self.table
        sq = Counter(t[a][a] for a in range(n))
        profile = sorted(
            (self.element_order(a), sum(1 for b in range(n) if t[a][b] == t[b][a]), sq.get(a, 0))
            for a in range(n)
        )
        return (n, self.is_abelian(), len(self.center()), len(self.derived_subgroup()), tuple(profile))

    def presentation(self) -> MarkedGroup:
        """Table presentation: one generator per non-identity element, relations g_a g_b = g_ab."""
        name = lambda a: f"g{a}"  # noqa: E731
        rels = []
        for a in range(1, self.order):
            for b in range(1, self.order):
                c = self.mul(a, b)
                w = [name(a), name(b)]
                if c:
                    w.append(f"{name(c)}^-1")
                rels.append(w)
        return MarkedGroup(tuple(name(a) for a in range(1, self.order)), tuple(rels))

    @classmethod
    def from_closure(cls, name: str, gens: Sequence[Hashable], mul: Callable, identity: Hashable) -> "FiniteGroup":
        elems = [identity]
        index = {identity: 0}
        queue = deque([identity])
        while queue:
            x = queue.popleft()
            for g in gens:
                y = mul(x, g)
                if y not in index:
                    index[y] = len(elems)
                    elems.append(y)
                    queue.append(y)
        table = tuple(tuple(index[mul(a, b)] for b in elems) for a in elems)
        return cls(name, table)


def _closure_elements(gens, mul, identity) -> list:
    """Elements in the order ``FiniteGroup.from_closure`` indexes them."""
    elems = [identity]
    seen = {identity}
    queue = deque([identity])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = mul(x, g)
            if y not in seen:
                seen.add(y)
                elems.append(y)
                queue.append(y)
    return elems


# -- catalogue --------------------------------------------------------------------

def cyclic(n: int) -> FiniteGroup:
    return FiniteGroup.from_closure(f"C{n}", [1 % n] if n > 1 else [], lambda a, b: (a + b) % n, 0)


def direct_product(*groups: FiniteGroup) -> FiniteGroup:
    name = "x".join(g.name for g in groups)
    gens = []
    for i, g in enumerate(groups):
        for s in g.generating_set:
            e = [0] * len(groups)
            e[i] = s
            gens.append(tuple(e))
    mul = lambda a, b: tuple(g.mul(x, y) for g, x, y in zip(groups, a, b))  # noqa: E731
    return FiniteGroup.from_closure(name, gens, mul, tuple(0 for _ in groups))


def semidirect(name: str, N: FiniteGroup, n: int, phi: Callable[[int], int]) -> FiniteGroup:
    """N x| C_n with the generator of C_n acting by the automorphism ``phi``."""
    powers = [list(range(N.order))]
    for _ in range(1, n):
        powers.append([phi(x) for x in powers[-1]])
    if [phi(x) for x in powers[-1]] != list(range(N.order)):
        raise ValueError("phi^n is not the identity")

    def mul(a, b):
        return (N.mul(a[0], powers[a[1]][b[0]]), (a[1] + b[1]) % n)

    gens = [(s, 0) for s in N.generating_set] + [(0, 1 % n)]
    return FiniteGroup.from_closure(name, gens, mul, (0, 0))


def metacyclic(name: str, m: int, n: int, k: int) -> FiniteGroup:
    """C_m x| C_n with a -> a^k."""
    Cm = cyclic(m)
    return semidirect(name, Cm, n, lambda x: (x * k) % m)


def dicyclic(m: int, name: str | None = None) -> FiniteGroup:
    """<a, x | a^2m, x^2 = a^m, x a x^-1 = a^-1>, order 4m."""
    M = 2 * m

    def mul(u, v):
        (i, j), (k, l) = u, v
        if j == 0:
            return ((i + k) % M, l)
        if l == 0:
            return ((i - k) % M, 1)
        return ((i - k + m) % M, 0)

    return FiniteGroup.from_closure(name or f"Dic{4 * m}", [(1, 0), (0, 1)], mul, (0, 0))


def _permutation_group(name: str, gens: list[tuple[int, ...]]) -> FiniteGroup:
    n = len(gens[0])
    return FiniteGroup.from_closure(name, gens, lambda a, b: tuple(a[b[i]] for i in range(n)), tuple(range(n)))


def _matrix_group(name: str, p: int, gens: list[tuple[int, ...]]) -> FiniteGroup:
    def mul(a, b):
        return ((a[0] * b[0] + a[1] * b[2]) % p, (a[0] * b[1] + a[1] * b[3]) % p,
                (a[2] * b[0] + a[3] * b[2]) % p, (a[2] * b[1] + a[3] * b[3]) % p)

    return FiniteGroup.from_closure(name, gens, mul, (1, 0, 0, 1))


def catalogue() -> list[FiniteGroup]:
    """All 42 isomorphism classes of groups of order at most 16."""
    C = cyclic
    C4xC2 = direct_product(C(4), C(2))
    # (C4 x C2) x| C2 with a -> ab, b -> b, where a = (1, 0) and b = (0, 1)
    ab = FiniteGroup.from_closure("C4xC2", [(1, 0), (0, 1)], lambda x, y: ((x[0] + y[0]) % 4, (x[1] + y[1]) % 2), (0, 0))
    elems = _closure_elements([(1, 0), (0, 1)], lambda x, y: ((x[0] + y[0]) % 4, (x[1] + y[1]) % 2), (0, 0))
    pos = {e: i for i, e in enumerate(elems)}
    phi = lambda x: pos[(elems[x][0], (elems[x][1] + elems[x][0]) % 2)]  # noqa: E731
    G16_3 = semidirect("(C4xC2)x|C2", ab, 2, phi)

    groups = [
        C(1), C(2), C(3), C(4), direct_product(C(2), C(2)), C(5),
        C(6), metacyclic("S3", 3, 2, 2), C(7),
        C(8), C4xC2, direct_product(C(2), C(2), C(2)), metacyclic("D8", 4, 2, 3), dicyclic(2, "Q8"),
        C(9), direct_product(C(3), C(3)),
        C(10), metacyclic("D10", 5, 2, 4), C(11),
        C(12), direct_product(C(2), C(6)), metacyclic("D12", 6, 2, 5), dicyclic(3),
        _permutation_group("A4", [(1, 2, 0, 3), (1, 0, 3, 2)]),
        C(13), C(14), metacyclic("D14", 7, 2, 6), C(15),
        C(16), direct_product(C(4), C(4)), direct_product(C(2), C(8)), direct_product(C(2), C(2), C(4)),
        direct_product(C(2), C(2), C(2), C(2)), metacyclic("D16", 8, 2, 7), dicyclic(4, "Q16"),
        metacyclic("SD16", 8, 2, 3), metacyclic("M16", 8, 2, 5), metacyclic("C4x|C4", 4, 4, 3),
        direct_product(C(2), metacyclic("D8", 4, 2, 3)), direct_product(C(2), dicyclic(2, "Q8")),
        G16_3, _matrix_group("Pauli", 5, [(0, 1, 1, 0), (1, 0, 0, 4), (2, 0, 0, 2)]),
    ]
    return groups


# -- representations over small prime fields ---------------------------------------

def _gl(d: int, p: int) -> list[tuple[int, ...]]:
    out = []
    for entries in itertools.product(range(p), repeat=d * d):
        m = [entries[i * d:(i + 1) * d] for i in range(d)]
        if _det_int(m, p) % p:
            out.append(tuple(entries))
    return out


def _det_int(m, p):
    d = len(m)
    if d == 1:
        return m[0][0] % p
    if d == 2:
        return (m[0][0] * m[1][1] - m[0][1] * m[1][0]) % p
    raise ValueError("only d <= 2 supported")


def _mm(a, b, d, p):
    return tuple(sum(a[i * d + k] * b[k * d + j] for k in range(d)) % p for i in range(d) for j in range(d))


def _inv_int(a, d, p):
    if d == 1:
        return (pow(a[0], -1, p),)
    det = (a[0] * a[3] - a[1] * a[2]) % p
    di = pow(det, -1, p)
    return ((a[3] * di) % p, (-a[1] * di) % p, (-a[2] * di) % p, (a[0] * di) % p)


def homomorphisms(G: FiniteGroup, d: int, p: int, up_to_conjugacy: bool = True) -> list[list[tuple[int, ...]]]:
    """All homomorphisms G -> GL_d(F_p), as lists of images of every element (flattened matrices)."""
    gl = _gl(d, p)
    ident = tuple(1 if i == j else 0 for i in range(d) for j in range(d))
    order_of = {}
    for m in gl:
        x, k = m, 1
        while x != ident:
            x = _mm(x, m, d, p)
            k += 1
        order_of[m] = k
    gens = G.generating_set
    results = []

    def extend(assigned: list):
        # BFS over the Cayley graph of <assigned gens>; every edge must be consistent
        k = len(assigned)
        img = {0: ident}
        queue = deque([0])
        while queue:
            x = queue.popleft()
            for s, ms in zip(gens[:k], assigned):
                y = G.mul(x, s)
                v = _mm(img[x], ms, d, p)
                if y in img:
                    if img[y] != v:
                        return None
                else:
                    img[y] = v
                    queue.append(y)
        return img

    def rec(assigned: list):
        k = len(assigned)
        if k == len(gens):
            img = extend(assigned)
            if img is not None:
                results.append([img[a] for a in range(G.order)])
            return
        o = G.element_order(gens[k])
        for m in gl:
            if o % order_of[m]:
                continue
            if extend(assigned + [m]) is not None:
                rec(assigned + [m])

    rec([])
    if not up_to_conjugacy:
        return results
    seen = set()
    out = []
    for h in results:
        key = min(tuple(_mm(_mm(c, h[g], d, p), _inv_int(c, d, p), d, p) for g in gens) for c in gl)
        if key not in seen:
            seen.add(key)
            out.append(h)
    return out


def table_rep(G: FiniteGroup, images: Sequence[tuple[int, ...]], d: int, p: int) -> GroupRep:
    """The representation of the table presentation given by element images."""
    ring = GaloisRing(FieldSpec(p), 1)
    pres = G.presentation()
    mats = {}
    for a in range(1, G.order):
        flat = images[a]
        mats[f"g{a}"] = Matrix.from_rows(ring, [flat[i * d:(i + 1) * d] for i in range(d)])
    return GroupRep(pres, ring, d, mats)
