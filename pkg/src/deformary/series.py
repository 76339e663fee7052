"""Multivariate power series over a Galois ring, truncated at a global total degree.

A ``SeriesRing`` fixes (coefficient ring, variable names, degree bound D); every
series keeps only the terms of total degree < D, so "equal" always means equal
at that truncation. Storage is sparse: a dict from exponent tuples to nonzero
coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from deformary.errors import NonUnitConstantTerm, SpecMismatch, VariableCollision
from deformary.ring import GaloisRing, GaloisRingElement, Matrix, field_rank, mat_inv


@dataclass(frozen=True)
class SeriesRing:
    ring: GaloisRing
    varnames: tuple[str, ...]
    degree_bound: int = 3

    def __post_init__(self):
        object.__setattr__(self, "varnames", tuple(self.varnames))
        if len(set(self.varnames)) != len(self.varnames):
            raise VariableCollision(f"repeated variable names in {self.varnames}")
        if self.degree_bound < 1:
            raise ValueError("degree bound must be >= 1")

    @property
    def nvars(self) -> int:
        return len(self.varnames)

    def index(self, name: str) -> int:
        try:
            return self.varnames.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r}") from None

    def zero(self) -> "TruncatedSeries":
        return TruncatedSeries(self, {})

    def const(self, c) -> "TruncatedSeries":
        c = self.ring.element(c)
        return TruncatedSeries(self, {(0,) * self.nvars: c} if c else {})

    def one(self) -> "TruncatedSeries":
        return self.const(1)

    def gen(self, name: str) -> "TruncatedSeries":
        if self.degree_bound < 2:
            return self.zero()
        e = [0] * self.nvars
        e[self.index(name)] = 1
        return TruncatedSeries(self, {tuple(e): self.ring.one()})

    def gens(self) -> list["TruncatedSeries"]:
        return [self.gen(v) for v in self.varnames]

    def from_terms(self, terms: Mapping[Sequence[int], object]) -> "TruncatedSeries":
        out = {}
        for exps, c in terms.items():
            exps = tuple(int(x) for x in exps)
            if len(exps) != self.nvars or any(x < 0 for x in exps):
                raise ValueError(f"bad exponent vector {exps}")
            c = self.ring.element(c)
            if c and sum(exps) < self.degree_bound:
                out[exps] = out[exps] + c if exps in out else c
        return TruncatedSeries(self, {k: v for k, v in out.items() if v})

    def embed(self, s: "TruncatedSeries") -> "TruncatedSeries":
        """Re-express a series from a ring whose variables are a subset of ours."""
        if s.parent == self:
            return s
        if s.parent.ring != self.ring:
            raise SpecMismatch("different coefficient rings")
        pos = [self.index(v) for v in s.parent.varnames]
        out = {}
        for exps, c in s.terms.items():
            if sum(exps) >= self.degree_bound:
                continue
            e = [0] * self.nvars
            for i, x in zip(pos, exps):
                e[i] = x
            out[tuple(e)] = c
        return TruncatedSeries(self, out)

    def with_degree(self, D: int) -> "SeriesRing":
        return SeriesRing(self.ring, self.varnames, D)


class TruncatedSeries:
    __slots__ = ("parent", "terms")

    def __init__(self, parent: SeriesRing, terms: dict):
        self.parent = parent
        self.terms = terms

    # -- basic structure -------------------------------------------------
    @property
    def ring(self) -> GaloisRing:
        return self.parent.ring

    def __eq__(self, other):
        if isinstance(other, TruncatedSeries):
            return self.parent == other.parent and self.terms == other.terms
        if isinstance(other, (int, GaloisRingElement)):
            return self == self.parent.const(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.parent, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def constant_term(self) -> GaloisRingElement:
        return self.terms.get((0,) * self.parent.nvars, self.ring.zero())

    def coefficient(self, exps: Sequence[int]) -> GaloisRingElement:
        return self.terms.get(tuple(exps), self.ring.zero())

    def degree_part(self, d: int) -> "TruncatedSeries":
        return TruncatedSeries(self.parent, {e: c for e, c in self.terms.items() if sum(e) == d})

    def min_degree(self) -> int | None:
        return min((sum(e) for e in self.terms), default=None)

    def linear_coefficients(self) -> list[GaloisRingElement]:
        out = []
        for i in range(self.parent.nvars):
            e = [0] * self.parent.nvars
            e[i] = 1
            out.append(self.coefficient(e))
        return out

    def sorted_terms(self) -> list[tuple[tuple[int, ...], GaloisRingElement]]:
        """Canonical order: ascending total degree, then descending exponent vector."""
        return sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), tuple(-x for x in kv[0])))

    # -- arithmetic ------------------------------------------------------
    def _coerce(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            if other.parent != self.parent:
                raise SpecMismatch("series from different rings")
            return other
        if isinstance(other, (int, GaloisRingElement)):
            return self.parent.const(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        out = dict(self.terms)
        for e, c in o.terms.items():
            if e in out:
                s = out[e] + c
                if s:
                    out[e] = s
                else:
                    del out[e]
            else:
                out[e] = c
        return TruncatedSeries(self.parent, out)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(self.parent, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not self.terms or not o.terms:
            return self.parent.zero()
        D = self.parent.degree_bound
        left = _by_degree(self.terms)
        right = _by_degree(o.terms)
        out: dict = {}
        for da, ta in left.items():
            for db, tb in right.items():
                if da + db >= D:
                    continue
                for ea, ca in ta:
                    for eb, cb in tb:
                        c = ca * cb
                        if not c:
                            continue
                        e = tuple(x + y for x, y in zip(ea, eb))
                        if e in out:
                            out[e] = out[e] + c
                        else:
                            out[e] = c
        return TruncatedSeries(self.parent, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def scale(self, c) -> "TruncatedSeries":
        c = self.ring.element(c)
        out = {}
        for e, x in self.terms.items():
            y = c * x
            if y:
                out[e] = y
        return TruncatedSeries(self.parent, out)

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.parent.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self) -> "TruncatedSeries":
        c0 = self.constant_term()
        if not c0.is_unit():
            raise NonUnitConstantTerm("constant term is not a unit")
        c0inv = c0.inverse()
        u = (self - self.parent.const(c0)).scale(c0inv)  # self = c0 (1 + u)
        # 1/(1+u) = sum_{k<D} (-u)^k since u^D vanishes at truncation
        acc = self.parent.one()
        power = self.parent.one()
        neg_u = -u
        for _ in range(1, self.parent.degree_bound):
            power = power * neg_u
            if not power:
                break
            acc = acc + power
        return acc.scale(c0inv)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def reduce(self) -> "TruncatedSeries":
        """Coefficients reduced modulo p."""
        parent = SeriesRing(self.ring.residue(), self.parent.varnames, self.parent.degree_bound)
        out = {}
        for e, c in self.terms.items():
            r = c.reduce()
            if r:
                out[e] = r
        return TruncatedSeries(parent, out)

    def substitute(self, values: Mapping[str, "TruncatedSeries"]) -> "TruncatedSeries":
        """Replace named variables by series of the same parent ring."""
        parent = self.parent
        idx = {parent.index(k): parent.embed(v) if v.parent != parent else v for k, v in values.items()}
        acc = parent.zero()
        cache: dict = {}
        for exps, c in self.terms.items():
            mono = parent.const(c)
            keep = list(exps)
            for i, k in enumerate(exps):
                if k and i in idx:
                    keep[i] = 0
                    key = (i, k)
                    if key not in cache:
                        cache[key] = idx[i] ** k
                    mono = mono * cache[key]
            mono = mono * TruncatedSeries(parent, {tuple(keep): parent.ring.one()}) if any(keep) else mono
            acc = acc + mono
        return acc

    def restrict(self, parent: SeriesRing) -> "TruncatedSeries":
        """Drop variables absent from ``parent`` (they must not occur)."""
        pos = [self.parent.index(v) for v in parent.varnames]
        dropped = [i for i in range(self.parent.nvars) if i not in pos]
        out = {}
        for e, c in self.terms.items():
            if any(e[i] for i in dropped):
                raise ValueError("series involves a dropped variable")
            if sum(e) < parent.degree_bound:
                out[tuple(e[i] for i in pos)] = c
        return TruncatedSeries(parent, out)

    # -- output ----------------------------------------------------------
    def to_json(self) -> list:
        return [{"exps": list(e), "coeff": c.to_json()} for e, c in self.sorted_terms()]

    def __repr__(self):
        return self.pretty()

    def pretty(self) -> str:
        if not self.terms:
            return "0"
        names = self.parent.varnames
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                (names[i] if k == 1 else f"{names[i]}^{k}") for i, k in enumerate(e) if k
            )
            cs = repr(c)
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts)


def _by_degree(terms: dict) -> dict[int, list]:
    out: dict[int, list] = {}
    for e, c in terms.items():
        out.setdefault(sum(e), []).append((e, c))
    return out


def ts_arith(a: TruncatedSeries, b: TruncatedSeries | None, op: str) -> TruncatedSeries:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "inv":
        return a.inverse()
    raise ValueError(f"unknown op {op!r}")


# -- matrices of series ------------------------------------------------------

SMatrix = list  # list of rows of TruncatedSeries


def smat_identity(R: SeriesRing, n: int) -> SMatrix:
    return [[R.one() if i == j else R.zero() for j in range(n)] for i in range(n)]


def smat_const(R: SeriesRing, m: Matrix) -> SMatrix:
    return [[R.const(m[i, j]) for j in range(m.cols)] for i in range(m.rows)]


def smat_add(a: SMatrix, b: SMatrix) -> SMatrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def smat_sub(a: SMatrix, b: SMatrix) -> SMatrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def smat_mul(a: SMatrix, b: SMatrix) -> SMatrix:
    if not a:
        return []
    R = a[0][0].parent
    cols = list(zip(*b))
    out = []
    for row in a:
        new = []
        for col in cols:
            s = R.zero()
            for x, y in zip(row, col):
                if x.terms and y.terms:
                    s = s + x * y
            new.append(s)
        out.append(new)
    return out


def smat_constant_part(a: SMatrix) -> Matrix:
    ring = a[0][0].ring
    return Matrix.from_rows(ring, [[x.constant_term() for x in row] for row in a])


def smat_inv(a: SMatrix) -> SMatrix:
    """Inverse via the constant part: A = C (I + C^-1 U), so A^-1 = sum_k (-C^-1 U)^k C^-1."""
    R = a[0][0].parent
    n = len(a)
    C = smat_constant_part(a)
    Cinv = smat_const(R, mat_inv(C))
    U = smat_sub(a, smat_const(R, C))
    step = [[-x for x in row] for row in smat_mul(Cinv, U)]
    acc = smat_identity(R, n)
    power = smat_identity(R, n)
    for _ in range(1, R.degree_bound):
        power = smat_mul(power, step)
        if all(not x.terms for row in power for x in row):
            break
        acc = smat_add(acc, power)
    return smat_mul(acc, Cinv)


def smat_equal(a: SMatrix, b: SMatrix) -> bool:
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def smat_reduce_to_residue(a: SMatrix) -> Matrix:
    """Image modulo (p, all variables)."""
    return smat_constant_part(a).reduce()


def series_mat_conjugate(t: SMatrix, m: SMatrix) -> SMatrix:
    """(1 + m) t (1 + m)^-1 at the common truncation."""
    R = t[0][0].parent
    n = len(t)
    if len(m) != n:
        raise ValueError("size mismatch")
    if any(x.constant_term() for row in m for x in row):
        raise ValueError("m must have zero constant term")
    one_m = smat_add(smat_identity(R, n), m)
    return smat_mul(smat_mul(one_m, t), smat_inv(one_m))


# -- presentations -----------------------------------------------------------

@dataclass(frozen=True)
class RingPresentation:
    """W_l(k)[[vars]] / (relations), plus a count of unspecified relation slots.

    Unspecified slots stand for relations known only to exist (an upper bound on
    their number); smoothness checks treat them as absent.
    """

    ring: GaloisRing
    varnames: tuple[str, ...]
    relations: tuple[TruncatedSeries, ...] = ()
    degree_bound: int = 3
    unspecified_relations: int = 0
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "varnames", tuple(self.varnames))
        if len(set(self.varnames)) != len(self.varnames):
            raise VariableCollision(f"repeated variable names in {self.varnames}")
        R = self.series_ring()
        rels = []
        for f in self.relations:
            f = R.embed(f) if f.parent != R else f
            if f.constant_term():
                raise ValueError(f"relation {f} has a nonzero constant term")
            rels.append(f)
        object.__setattr__(self, "relations", tuple(rels))

    @classmethod
    def power_series(cls, ring: GaloisRing, varnames: Iterable[str], degree_bound: int = 3, name: str = "") -> "RingPresentation":
        return cls(ring, tuple(varnames), (), degree_bound, 0, name)

    def series_ring(self) -> SeriesRing:
        return SeriesRing(self.ring, self.varnames, self.degree_bound)

    @property
    def nvars(self) -> int:
        return len(self.varnames)

    def quotient(self, fs: Iterable[TruncatedSeries]) -> "RingPresentation":
        return RingPresentation(self.ring, self.varnames, self.relations + tuple(fs), self.degree_bound,
                                self.unspecified_relations, self.name)

    def add_vars(self, k: int, prefix: str = "x") -> "RingPresentation":
        names = list(self.varnames)
        i = 1
        while len(names) < self.nvars + k:
            cand = f"{prefix}{i}"
            if cand not in names:
                names.append(cand)
            i += 1
        R = SeriesRing(self.ring, tuple(names), self.degree_bound)
        rels = tuple(R.embed(f) for f in self.relations)
        return RingPresentation(self.ring, tuple(names), rels, self.degree_bound, self.unspecified_relations, self.name)

    def add_unspecified(self, t: int) -> "RingPresentation":
        return RingPresentation(self.ring, self.varnames, self.relations, self.degree_bound,
                                self.unspecified_relations + t, self.name)

    def krull_lower_bound(self) -> int:
        """dim >= 1 + #vars - #relations (principal ideal theorem), counting unspecified slots."""
        return 1 + self.nvars - len(self.relations) - self.unspecified_relations

    def krull_dimension(self) -> int | None:
        """Exact only for pure power-series rings."""
        if not self.relations and not self.unspecified_relations:
            return 1 + self.nvars
        return None

    def to_json(self) -> dict:
        return {
            "vars": list(self.varnames),
            "relations": [f.to_json() for f in self.relations],
            "unspecified_relations": self.unspecified_relations,
            "degree_bound": self.degree_bound,
        }


def compose(presentations: Sequence[RingPresentation], prefixes: Sequence[str] | None = None) -> RingPresentation:
    """Completed tensor product over the base: variable-disjoint union of presentations."""
    if not presentations:
        raise ValueError("nothing to compose")
    ring = presentations[0].ring
    if any(P.ring != ring for P in presentations):
        raise SpecMismatch("presentations over different bases")
    D = min(P.degree_bound for P in presentations)
    prefixes = list(prefixes) if prefixes is not None else [""] * len(presentations)
    names: list[str] = []
    renamed = []
    for P, pre in zip(presentations, prefixes):
        new = tuple(pre + v for v in P.varnames)
        renamed.append(new)
        names.extend(new)
    if len(set(names)) != len(names):
        raise VariableCollision("renaming is not injective; pass distinct prefixes")
    R = SeriesRing(ring, tuple(names), D)
    rels = []
    for P, new in zip(presentations, renamed):
        src = SeriesRing(ring, new, P.degree_bound)
        for f in P.relations:
            rels.append(R.embed(TruncatedSeries(src, f.terms)))
    return RingPresentation(ring, tuple(names), tuple(rels), D,
                            sum(P.unspecified_relations for P in presentations))


@dataclass(frozen=True)
class SmoothnessReport:
    power_series: bool
    witness: TruncatedSeries | None
    jacobian_rank: int
    krull_dimension: int | None

    def to_json(self) -> dict:
        return {
            "power_series": self.power_series,
            "witness": None if self.witness is None else self.witness.pretty(),
            "jacobian_rank_mod_p": self.jacobian_rank,
            "krull_dimension": self.krull_dimension,
        }


def formal_smoothness_check(pres: RingPresentation) -> SmoothnessReport:
    """Is the presentation a pure power-series ring at this truncation?"""
    nonzero = [f for f in pres.relations if not f.is_zero()]
    k = pres.ring.residue()
    rows = [[c.reduce() for c in f.linear_coefficients()] for f in pres.relations]
    rank = field_rank(rows, pres.nvars, k) if rows and pres.nvars else 0
    if nonzero:
        return SmoothnessReport(False, nonzero[0], rank, None)
    return SmoothnessReport(True, None, rank, 1 + pres.nvars)
