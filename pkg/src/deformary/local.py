"""Checkers for local deformation conditions and the explicit archimedean ring."""

from __future__ import annotations

from dataclasses import dataclass, field

from deformary import linalg
from deformary.errors import CaseCharMismatch, InvalidCertificate, SpecMismatch
from deformary.fontaine_laffaille import FLModule, fl_connected, fl_ext1, fl_validate
from deformary.groups import Character, GroupRep, word_to_json
from deformary.ring import FieldSpec, GaloisRing, Matrix, field_nullspace
from deformary.series import RingPresentation, SeriesRing, formal_smoothness_check


@dataclass(frozen=True)
class LocalConditionReport:
    place: str
    condition: str
    verdict: bool
    witness: object = None
    warnings: tuple[str, ...] = ()
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        w = self.witness
        if isinstance(w, Matrix):
            w = w.to_json()
        elif isinstance(w, (list, tuple)):
            w = [x.to_json() if hasattr(x, "to_json") else x for x in w]
        return {
            "place": self.place,
            "condition": self.condition,
            "verdict": self.verdict,
            "witness": w,
            "warnings": list(self.warnings),
            "details": self.details,
        }


def steinberg_check(r: GroupRep, inertia: str = "ell-inertia") -> LocalConditionReport:
    """(rho(g) - Id)^2 = 0 for every element marked as inertia."""
    words = r.group.mark(inertia)
    ident = Matrix.identity(r.ring, r.dim)
    for w in words:
        u = r.evaluate(w) - ident
        sq = u @ u
        if not sq.is_zero():
            return LocalConditionReport("ell", "steinberg", False, sq,
                                        details={"element": word_to_json(w)})
    return LocalConditionReport("ell", "steinberg", True, details={"checked": len(words)})


@dataclass(frozen=True)
class ChiLine:
    vector: tuple
    unique: bool

    def to_json(self) -> dict:
        return {"vector": [v.to_json() for v in self.vector], "unique": self.unique}


def chi_line_find(r: GroupRep, chi: Character) -> ChiLine | None:
    """A vector v with rho(g) v = chi(g) v for every generator; unique means a rank-1 solution module."""
    if chi.group.generators != r.group.generators or chi.ring != r.ring:
        raise SpecMismatch("character and representation differ in group or ring")
    ring = r.ring
    rows = []
    for g in r.group.generators:
        m = r.images[g] - Matrix.identity(ring, r.dim).scale(chi.values[g])
        rows.extend(m.tolist())
    if not rows:
        rows = [[ring.zero()] * r.dim]
    if ring.l == 1:
        basis = field_nullspace(rows, r.dim, ring)
        if not basis:
            return None
        return ChiLine(tuple(basis[0]), len(basis) == 1)
    big = Matrix.from_rows(ring, rows)
    logcard, gens = linalg.kernel_mod(big.to_int_rows(), r.dim * ring.n, ring.p, ring.l)
    n = ring.n
    for g in gens:
        vec = tuple(ring.element(g[j * n:(j + 1) * n]) for j in range(r.dim))
        if any(x.is_unit() for x in vec):
            return ChiLine(vec, logcard == ring.l * n)
    return None


def parity_det_check(r: GroupRep, chi: Character | None = None, condition: str = "odd",
                     infinity: str = "infinity") -> LocalConditionReport:
    """``odd``: det rho(gamma) = -1 and rho(gamma)^2 = Id; ``fixed-det``: det rho = chi."""
    ring = r.ring
    if condition == "odd":
        for w in r.group.mark(infinity):
            m = r.evaluate(w)
            d = m.det()
            if d != ring.element(-1):
                return LocalConditionReport("infinity", "odd", False, m, details={"det": d.to_json()})
            if not (m @ m).is_identity():
                return LocalConditionReport("infinity", "odd", False, m @ m,
                                            details={"reason": "image of complex conjugation has order > 2"})
        return LocalConditionReport("infinity", "odd", True)
    if condition == "fixed-det":
        if chi is None:
            raise ValueError("fixed-det needs a character")
        for g, m in r.images.items():
            if m.det() != chi.values[g]:
                return LocalConditionReport("global", "fixed-det", False, m, details={"generator": g})
        return LocalConditionReport("global", "fixed-det", True)
    raise ValueError(f"unknown condition {condition!r}")


def flat_certificate_check(r: GroupRep, cert: FLModule) -> LocalConditionReport:
    """Flatness at p as certified by a user-paired Fontaine-Laffaille module."""
    v = fl_validate(cert)
    if not v.ok:
        raise InvalidCertificate(v.reason)
    if r.dim != 2:
        raise InvalidCertificate("certificates pair with 2-dimensional representations")
    if cert.ring.spec != r.ring.spec:
        raise InvalidCertificate("certificate and representation live over different fields")
    connected = fl_connected(cert)
    warnings = []
    p = cert.ring.p
    verdict = True
    if not connected:
        if p == 2:
            # weight 2 = p: full faithfulness needs phi_0 nilpotent
            verdict = False
            warnings.append("phi_0 is not nilpotent; at p = 2 the certificate does not pin down the group scheme")
        else:
            warnings.append("phi_0 is not nilpotent (harmless for p > 2)")
    details = {"connected": connected}
    if cert.ring.n == 1 and cert.m1 == 1:
        details["ext1_dim"] = fl_ext1(cert).dimension
    return LocalConditionReport("p", "flat", verdict, cert.to_json(), tuple(warnings), details)


# -- the archimedean ring ------------------------------------------------------------------

INF_CASES = {
    1: ("p > 2", [[1, 0], [0, -1]]),
    2: ("p = 2", [[1, 1], [0, 1]]),
    3: ("p = 2", [[1, 0], [0, 1]]),
}

DET_NOTE = ("det(M) = -1 is imposed (characteristic polynomial x^2 - 1); "
            "normalizing det(M) = +1 instead would not give this relation")


@dataclass(frozen=True)
class InfRingReport:
    case: int
    presentation: RingPresentation
    eliminated: str
    jacobian_rank: int
    warnings: tuple[str, ...]

    @property
    def relation(self):
        return self.presentation.relations[0]

    def to_json(self) -> dict:
        return {
            "case": self.case,
            "vars": list(self.presentation.varnames),
            "relations": [f.pretty() for f in self.presentation.relations],
            "relation_terms": [f.to_json() for f in self.presentation.relations],
            "eliminated": self.eliminated,
            "jacobian_rank_mod_p": self.jacobian_rank,
            "warnings": list(self.warnings),
        }


def inf_ring_compute(case: int, p: int | None = None, l: int = 4, degree: int = 3, n: int = 1) -> InfRingReport:
    if case not in INF_CASES:
        raise ValueError("case must be 1, 2 or 3")
    if p is None:
        p = 3 if case == 1 else 2
    if (case == 1) == (p == 2):
        raise CaseCharMismatch(f"case {case} requires {INF_CASES[case][0]}")
    ring = GaloisRing(FieldSpec(p, n), l)
    S = SeriesRing(ring, ("a", "b", "c", "d"), max(degree, 3))
    a, b, c, d = S.gens()
    base = INF_CASES[case][1]
    M = [[S.const(base[0][0]) + a, S.const(base[0][1]) + b],
         [S.const(base[1][0]) + c, S.const(base[1][1]) + d]]
    trace = M[0][0] + M[1][1]
    # the trace is d plus terms free of d: solve for d
    d_value = -(trace - d)
    det_plus_one = M[0][0] * M[1][1] - M[0][1] * M[1][0] + 1
    rel = -det_plus_one.substitute({"d": d_value})
    T = SeriesRing(ring, ("a", "b", "c"), S.degree_bound)
    pres = RingPresentation(ring, ("a", "b", "c"), (rel.restrict(T),), S.degree_bound, name=f"R_inf case {case}")
    rank = formal_smoothness_check(pres).jacobian_rank
    return InfRingReport(case, pres, "d", rank, (DET_NOTE,))


GEOMETRIC_TABLE = {"p": 4, "infinity": 2, "finite": 3}


def place_kind(place: str) -> str:
    if place in ("p",):
        return "p"
    if place in ("infinity", "inf", "oo"):
        return "infinity"
    return "finite"


@dataclass(frozen=True)
class TableCheck:
    place: str
    supplied: int
    expected: int

    @property
    def matches(self) -> bool:
        return self.supplied == self.expected

    def to_json(self) -> dict:
        return {"place": self.place, "supplied": self.supplied, "expected": self.expected, "matches": self.matches}


def geometric_table_check(place: str, framed_dim_after_inverting_p: int) -> TableCheck:
    return TableCheck(place, framed_dim_after_inverting_p, GEOMETRIC_TABLE[place_kind(place)])
