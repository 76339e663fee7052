"""Finitely presented groups with marked local elements, and their matrix representations."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from deformary import linalg
from deformary.errors import ReductionMismatch, SpecMismatch, UnknownMark
from deformary.ring import GaloisRing, GaloisRingElement, Matrix, field_nullspace

Letter = tuple[str, int]
Word = tuple[Letter, ...]

_LETTER = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*(?:\^\s*(-?\d+))?\s*$")


def parse_letter(s: str) -> Letter:
    m = _LETTER.match(s)
    if not m:
        raise ValueError(f"cannot parse word letter {s!r}")
    return m.group(1), int(m.group(2) or 1)


def parse_word(w) -> Word:
    """A word is a list of letters like ``"g"``, ``"g^-1"``, ``"g^3"``, or one space-separated string."""
    if isinstance(w, str):
        w = w.split()
    out = []
    for s in w:
        g, e = parse_letter(s) if isinstance(s, str) else (s[0], int(s[1]))
        if e:
            out.append((g, e))
    return tuple(out)


def word_to_json(w: Word) -> list[str]:
    return [g if e == 1 else f"{g}^{e}" for g, e in w]


def invert_word(w: Word) -> Word:
    return tuple((g, -e) for g, e in reversed(w))


def _parse_mark(v) -> tuple[Word, ...]:
    """A string is one marked word; a list holds several, each a string or a list of letters."""
    if isinstance(v, str):
        return (parse_word(v),)
    return tuple(parse_word(x) for x in v)


@dataclass(frozen=True)
class MarkedGroup:
    generators: tuple[str, ...]
    relations: tuple[Word, ...] = ()
    marks: Mapping[str, tuple[Word, ...]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        if len(set(self.generators)) != len(self.generators):
            raise ValueError("repeated generator names")
        rels = tuple(parse_word(r) if not _is_parsed(r) else tuple(r) for r in self.relations)
        marks = {k: (_parse_mark(v) if not _is_parsed_mark(v) else tuple(v)) for k, v in dict(self.marks).items()}
        gens = set(self.generators)
        for w in rels + tuple(x for ws in marks.values() for x in ws):
            for g, _ in w:
                if g not in gens:
                    raise ValueError(f"word uses undeclared generator {g!r}")
        object.__setattr__(self, "relations", rels)
        object.__setattr__(self, "marks", marks)

    def __hash__(self):
        return hash((self.generators, self.relations, tuple(sorted(self.marks.items()))))

    def mark(self, label: str) -> tuple[Word, ...]:
        if label not in self.marks or not self.marks[label]:
            raise UnknownMark(f"no elements marked {label!r}")
        return self.marks[label]

    def with_marks(self, **marks) -> "MarkedGroup":
        merged = dict(self.marks)
        merged.update({k.replace("_", "-"): _parse_mark(v) for k, v in marks.items()})
        return MarkedGroup(self.generators, self.relations, merged)

    def to_json(self) -> dict:
        return {
            "generators": list(self.generators),
            "relations": [word_to_json(r) for r in self.relations],
            "marks": {k: [word_to_json(w) for w in ws] for k, ws in sorted(self.marks.items())},
        }


def _is_parsed(w) -> bool:
    return isinstance(w, tuple) and all(isinstance(x, tuple) and len(x) == 2 for x in w)


def _is_parsed_mark(v) -> bool:
    return isinstance(v, tuple) and all(_is_parsed(w) for w in v)


@dataclass(frozen=True)
class GroupRep:
    group: MarkedGroup
    ring: GaloisRing
    dim: int
    images: Mapping[str, Matrix]

    def __post_init__(self):
        imgs = dict(self.images)
        if set(imgs) != set(self.group.generators):
            raise ValueError("images must be given for exactly the declared generators")
        for g, m in imgs.items():
            if m.ring != self.ring or m.rows != self.dim or m.cols != self.dim:
                raise SpecMismatch(f"image of {g} has the wrong shape or ring")
        object.__setattr__(self, "images", imgs)

    def __hash__(self):
        return hash((self.group, self.ring, self.dim, tuple(sorted(self.images.items()))))

    @classmethod
    def from_lists(cls, group: MarkedGroup, ring: GaloisRing, images: Mapping[str, Sequence[Sequence]]) -> "GroupRep":
        mats = {g: Matrix.from_rows(ring, rows) for g, rows in images.items()}
        dim = next(iter(mats.values())).rows if mats else 0
        return cls(group, ring, dim, mats)

    @classmethod
    def trivial(cls, group: MarkedGroup, ring: GaloisRing, dim: int) -> "GroupRep":
        return cls(group, ring, dim, {g: Matrix.identity(ring, dim) for g in group.generators})

    def __call__(self, word) -> Matrix:
        return self.evaluate(word)

    def evaluate(self, word) -> Matrix:
        w = word if _is_parsed(word) else parse_word(word)
        out = Matrix.identity(self.ring, self.dim)
        for g, e in w:
            out = out @ (self.images[g] ** e)
        return out

    def reduce(self) -> "GroupRep":
        return GroupRep(self.group, self.ring.residue(), self.dim, {g: m.reduce() for g, m in self.images.items()})

    def to_precision(self, l: int) -> "GroupRep":
        return GroupRep(self.group, self.ring.with_precision(l), self.dim,
                        {g: m.to_precision(l) for g, m in self.images.items()})

    def marked_images(self, label: str) -> list[Matrix]:
        return [self.evaluate(w) for w in self.group.mark(label)]

    def to_json(self) -> dict:
        return {
            "group": self.group.to_json(),
            "dim": self.dim,
            "field": self.ring.spec.to_json(),
            "l": self.ring.l,
            "images": {g: m.to_json() for g, m in sorted(self.images.items())},
        }


@dataclass(frozen=True)
class Character:
    group: MarkedGroup
    ring: GaloisRing
    values: Mapping[str, GaloisRingElement]

    def __post_init__(self):
        vals = {g: self.ring.element(v) for g, v in dict(self.values).items()}
        if set(vals) != set(self.group.generators):
            raise ValueError("character values must cover the generators")
        for g, v in vals.items():
            if not v.is_unit():
                raise ValueError(f"character value at {g} is not a unit")
        object.__setattr__(self, "values", vals)

    def __hash__(self):
        return hash((self.group, self.ring, tuple(sorted(self.values.items()))))

    def evaluate(self, word) -> GaloisRingElement:
        w = word if _is_parsed(word) else parse_word(word)
        out = self.ring.one()
        for g, e in w:
            out = out * self.values[g] ** e
        return out

    __call__ = evaluate

    def is_valid(self) -> bool:
        return all(self.evaluate(r) == self.ring.one() for r in self.group.relations)

    def __mul__(self, other: "Character") -> "Character":
        return Character(self.group, self.ring, {g: self.values[g] * other.values[g] for g in self.values})

    def __pow__(self, k: int) -> "Character":
        return Character(self.group, self.ring, {g: v ** k for g, v in self.values.items()})

    @classmethod
    def trivial(cls, group: MarkedGroup, ring: GaloisRing) -> "Character":
        return cls(group, ring, {g: ring.one() for g in group.generators})

    def to_json(self) -> dict:
        return {g: v.to_json() for g, v in sorted(self.values.items())}


@dataclass(frozen=True)
class RepCheck:
    ok: bool
    relation: Word | None = None
    value: Matrix | None = None
    reason: str = ""

    def to_json(self) -> dict:
        out: dict = {"ok": self.ok}
        if not self.ok:
            out["reason"] = self.reason
            if self.relation is not None:
                out["relation"] = word_to_json(self.relation)
            if self.value is not None:
                out["value"] = self.value.to_json()
        return out


def rep_verify(r: GroupRep) -> RepCheck:
    for g, m in r.images.items():
        if not m.det().is_unit():
            return RepCheck(False, ((g, 1),), m, "image not invertible")
    for rel in r.group.relations:
        v = r.evaluate(rel)
        if not v.is_identity():
            return RepCheck(False, rel, v, "relation does not evaluate to the identity")
    return RepCheck(True)


# -- constructions -----------------------------------------------------------

def _same_base(reps: Sequence[GroupRep]):
    g0, ring0 = reps[0].group, reps[0].ring
    for r in reps[1:]:
        if r.group != g0 or r.ring != ring0:
            raise SpecMismatch("representations of different groups or over different rings")


def direct_sum(reps: Sequence[GroupRep]) -> GroupRep:
    _same_base(reps)
    g0 = reps[0].group
    imgs = {g: Matrix.block_diag([r.images[g] for r in reps]) for g in g0.generators}
    return GroupRep(g0, reps[0].ring, sum(r.dim for r in reps), imgs)


def kron(a: Matrix, b: Matrix) -> Matrix:
    rows = []
    for i in range(a.rows):
        for k in range(b.rows):
            rows.append([a[i, j] * b[k, m] for j in range(a.cols) for m in range(b.cols)])
    return Matrix.from_rows(a.ring, rows)


def ad(r: GroupRep) -> GroupRep:
    """Conjugation action on N x N matrices in the row-major basis E_ij: rho (x) rho^-T."""
    imgs = {g: kron(m, m.inverse().transpose()) for g, m in r.images.items()}
    return GroupRep(r.group, r.ring, r.dim * r.dim, imgs)


def trace_zero_basis(N: int) -> list[tuple[int, int]]:
    """Coordinates used for Ad^0: off-diagonal (i, j) then diagonal (i, i) for i < N-1."""
    off = [(i, j) for i in range(N) for j in range(N) if i != j]
    return off + [(i, i) for i in range(N - 1)]


def ad0(r: GroupRep) -> GroupRep:
    """Trace-zero submodule of ``ad``; basis E_ij (i != j) and E_ii - E_NN."""
    N = r.dim
    ring = r.ring
    coords = trace_zero_basis(N)
    A = ad(r)
    d = len(coords)
    imgs = {}
    for g, m in A.images.items():
        cols = []
        for (i, j) in coords:
            v = [ring.zero()] * (N * N)
            if i != j:
                v[i * N + j] = ring.one()
            else:
                v[i * N + i] = ring.one()
                v[N * N - 1] = -ring.one()
            w = [sum((m[a, b] * v[b] for b in range(N * N)), ring.zero()) for a in range(N * N)]
            cols.append([w[u * N + t] for (u, t) in coords])
        imgs[g] = Matrix.from_rows(ring, [[cols[c][rr] for c in range(d)] for rr in range(d)])
    return GroupRep(r.group, ring, d, imgs)


def twist(r: GroupRep, chi: Character) -> GroupRep:
    if chi.group != r.group or chi.ring != r.ring:
        raise SpecMismatch("character and representation differ in group or ring")
    return GroupRep(r.group, r.ring, r.dim, {g: m.scale(chi.values[g]) for g, m in r.images.items()})


def det(r: GroupRep) -> Character:
    return Character(r.group, r.ring, {g: m.det() for g, m in r.images.items()})


def rep_construct(op: str, *args):
    table = {"direct_sum": direct_sum, "ad": ad, "ad0": ad0, "twist": twist, "det": det}
    if op not in table:
        raise ValueError(f"unknown construction {op!r}")
    return table[op](*args)


def conjugate(r: GroupRep, m: Matrix) -> GroupRep:
    mi = m.inverse()
    return GroupRep(r.group, r.ring, r.dim, {g: m @ x @ mi for g, x in r.images.items()})


# -- linear problems -------------------------------------------------------------

def _commutator_operator(a: Matrix, b: Matrix) -> Matrix:
    """Matrix of X -> a X - X b on row-major vec(X) (X has shape a.rows x b.rows)."""
    Ia = Matrix.identity(a.ring, a.rows)
    Ib = Matrix.identity(a.ring, b.rows)
    return kron(a, Ib) - kron(Ia, b.transpose())


def intertwiner_space(r1: GroupRep, r2: GroupRep) -> tuple[int, list[Matrix]]:
    """{X : r1(g) X = X r2(g) for all generators g} over k."""
    if r1.group.generators != r2.group.generators:
        raise SpecMismatch("representations of different groups")
    ring = r1.ring
    if ring.l != 1 or r2.ring != ring:
        raise ValueError("intertwiners are computed over the residue field")
    rows: list = []
    for g in r1.group.generators:
        rows.extend(_commutator_operator(r1.images[g], r2.images[g]).tolist())
    nc = r1.dim * r2.dim
    if not rows:
        rows = [[ring.zero()] * nc]
    basis = field_nullspace(rows, nc, ring)
    mats = [Matrix.from_rows(ring, [v[i * r2.dim:(i + 1) * r2.dim] for i in range(r1.dim)]) for v in basis]
    return len(mats), mats


def _vec_to_ints(vals: Sequence[GaloisRingElement]) -> list[int]:
    return [c for v in vals for c in v.coeffs]


def lift_equivalent(r1: GroupRep, r2: GroupRep) -> Matrix | None:
    """A witness M = Id mod p with M r1(g) M^-1 = r2(g) for all g, or None."""
    if r1.group.generators != r2.group.generators or r1.ring != r2.ring or r1.dim != r2.dim:
        raise SpecMismatch("lifts differ in group, ring or dimension")
    ring = r1.ring
    if any(not (r1.images[g] - r2.images[g]).reduce().is_zero() for g in r1.group.generators):
        raise ReductionMismatch("the two lifts have different reductions mod p")
    N = r1.dim
    p = ring.p
    # M = Id + p X; X r1 - r2 X = (r2 - r1)/p ... solved as p (X r1 - r2 X) = r2 - r1 over Z/p^l
    ops = []
    rhs: list[GaloisRingElement] = []
    for g in r1.group.generators:
        a, b = r1.images[g], r2.images[g]
        # vec(X a) - vec(b X) = (I (x) a^T - b (x) I) vec X
        op = kron(Matrix.identity(ring, N), a.transpose()) - kron(b, Matrix.identity(ring, N))
        ops.extend(op.scale(p).tolist())
        rhs.extend((b - a).entries)
    if not ops:
        return Matrix.identity(ring, N)
    big = Matrix.from_rows(ring, ops)
    sol = linalg.solve_mod(big.to_int_rows(), _vec_to_ints(rhs), N * N * ring.n, p, ring.l)
    if sol is None:
        return None
    n = ring.n
    xs = [ring.element(sol[k * n:(k + 1) * n]) for k in range(N * N)]
    X = Matrix.from_rows(ring, [xs[i * N:(i + 1) * N] for i in range(N)])
    return Matrix.identity(ring, N) + X.scale(p)
