"""Rank-2 weight-2 Fontaine-Laffaille data encoded by a single structure matrix X_M.

With M_1 spanned by ``fil_line`` = v and a complement w, the structure maps are
phi_0(w) = X_M w, phi_1(v) = X_M v and phi_0(v) = p X_M v, i.e.
phi_0 = X_M (Pi + p (1 - Pi)) where Pi projects onto w along v.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from deformary import kernels
from deformary.errors import BudgetExceeded, UnsupportedField, UnsupportedFiltration
from deformary.ring import GaloisRing, Matrix, field_nullspace, field_rank

DEFAULT_BUDGET = 1 << 24


@dataclass(frozen=True)
class FLModule:
    ring: GaloisRing
    xm: Matrix
    fil_dims: tuple[int, int, int] = (2, 1, 0)
    fil_line: tuple[int, ...] = (0, 1)

    def __post_init__(self):
        object.__setattr__(self, "fil_dims", tuple(self.fil_dims))
        object.__setattr__(self, "fil_line", tuple(self.fil_line))
        if self.xm.ring != self.ring or (self.xm.rows, self.xm.cols) != (2, 2):
            raise ValueError("X_M must be a 2 x 2 matrix over the module's ring")

    @classmethod
    def from_lists(cls, ring: GaloisRing, xm: Sequence[Sequence], fil_dims=(2, 1, 0), fil_line=(0, 1)) -> "FLModule":
        return cls(ring, Matrix.from_rows(ring, xm), tuple(fil_dims), tuple(fil_line))

    @property
    def m1(self) -> int:
        return self.fil_dims[1]

    def line(self) -> tuple:
        return tuple(self.ring.element(x) for x in self.fil_line)

    def basis_change(self) -> Matrix:
        """P = [w | v] with v the filtration line and w a standard complement."""
        v = self.line()
        w = (self.ring.one(), self.ring.zero()) if v[1].is_unit() else (self.ring.zero(), self.ring.one())
        return Matrix.from_rows(self.ring, [[w[0], v[0]], [w[1], v[1]]])

    def projection(self) -> Matrix:
        """Pi: projection onto the complement w along the line v."""
        P = self.basis_change()
        return P @ Matrix.diag(self.ring, [1, 0]) @ P.inverse()

    def phi0(self) -> Matrix:
        ring = self.ring
        ident = Matrix.identity(ring, 2)
        if self.m1 == 0:
            return self.xm
        if self.m1 == 2:
            return self.xm.scale(ring.p)
        Pi = self.projection()
        return self.xm @ (Pi + (ident - Pi).scale(ring.p))

    def phi1(self) -> Matrix:
        """phi_1 on M_1 (columns outside M_1 are zero)."""
        if self.m1 == 0:
            return Matrix.zero(self.ring, 2)
        if self.m1 == 2:
            return self.xm
        return self.xm @ (Matrix.identity(self.ring, 2) - self.projection())

    def to_json(self) -> dict:
        return {"xm": self.xm.to_json(), "fil_dims": list(self.fil_dims),
                "fil_line": [int(c) if isinstance(c, int) else c for c in self.fil_line]}


@dataclass(frozen=True)
class FLValidation:
    ok: bool
    reason: str = ""

    def __bool__(self):
        return self.ok


def fl_validate(m: FLModule) -> FLValidation:
    d = m.fil_dims
    if len(d) != 3 or d[0] != 2 or d[2] != 0:
        return FLValidation(False, "filtration dimensions must have the shape (2, m1, 0)")
    if d[1] not in (0, 1, 2):
        return FLValidation(False, f"dim M_1 = {d[1]} exceeds the rank")
    if d[1] == 1:
        if len(m.fil_line) != 2 or not any(m.ring.element(x).is_unit() for x in m.fil_line):
            return FLValidation(False, "filtration line must be a nonzero vector mod p")
    # sum of Im(phi_i) = M, checked over k; it holds iff X_M is invertible mod p
    k = m.ring.residue()
    cols = [[e.reduce() for e in row] for row in m.phi0().tolist()]
    cols1 = [[e.reduce() for e in row] for row in m.phi1().tolist()]
    span = [[cols[0][j], cols[1][j]] for j in range(2)] + [[cols1[0][j], cols1[1][j]] for j in range(2)]
    if field_rank(span, 2, k) < 2:
        return FLValidation(False, "images of phi_0 and phi_1 do not span M")
    return FLValidation(True)


def phi0_nilpotent(phi0: Matrix) -> bool:
    """2 x 2 nilpotency over k: phi0^2 = 0."""
    m = phi0.reduce()
    return (m @ m).is_zero()


def fl_connected(m: FLModule) -> bool:
    return phi0_nilpotent(m.phi0())


# -- Ext^1 via the commutator formula ------------------------------------------------

def _filtration_algebra(m: FLModule) -> list[Matrix]:
    """Basis of the endomorphisms of M preserving the filtration (over k)."""
    k = m.ring.residue()
    E = [Matrix.from_rows(k, [[int(2 * i + j == t) for j in range(2)] for i in range(2)]) for t in range(4)]
    if m.m1 != 1:
        return E
    v = [k.element(x) for x in m.fil_line]
    # R v parallel to v: (Rv)_0 v_1 - (Rv)_1 v_0 = 0, linear in the entries (r00, r01, r10, r11)
    row = [v[0] * v[1], v[1] * v[1], -v[0] * v[0], -v[1] * v[0]]
    basis = field_nullspace([row], 4, k)
    return [Matrix.from_rows(k, [[b[0], b[1]], [b[2], b[3]]]) for b in basis]


def _commutator_images(m: FLModule) -> tuple[list[list], int]:
    k = m.ring.residue()
    X = m.xm.reduce()
    H = _filtration_algebra(m)
    imgs = [list((R @ X - X @ R).entries) for R in H]
    rank = field_rank(imgs, 4, k) if imgs else 0
    return imgs, rank


def fl_endomorphism_dim(m: FLModule) -> int:
    """dim of {R in the filtration algebra : [R, X_M] = 0} over k."""
    H = _filtration_algebra(m)
    _, rank = _commutator_images(m)
    return len(H) - rank


@dataclass(frozen=True)
class ExtReport:
    dimension: int
    filtration_algebra_dim: int
    commutator_kernel_dim: int
    classes: list[Matrix]

    def to_json(self) -> dict:
        return {
            "ext1_dim": self.dimension,
            "filtration_algebra_dim": self.filtration_algebra_dim,
            "commutator_kernel_dim": self.commutator_kernel_dim,
            "classes": [c.to_json() for c in self.classes],
        }


def fl_ext1(m: FLModule) -> ExtReport:
    """dim Hom(M, M) - dim {[R, X_M] : R preserves the filtration}, with class representatives."""
    if m.ring.n != 1:
        raise UnsupportedField("the commutator formula is implemented for k = F_p")
    if m.m1 != 1:
        raise UnsupportedFiltration("Ext^1 is computed for dim M_1 = 1 only")
    k = m.ring.residue()
    imgs, rank = _commutator_images(m)
    H = _filtration_algebra(m)
    # representatives: standard basis matrices completing the image to a basis
    span = list(imgs)
    current = rank
    classes = []
    for t in range(4):
        e = [k.one() if s == t else k.zero() for s in range(4)]
        if field_rank(span + [e], 4, k) > current:
            span.append(e)
            current += 1
            classes.append(Matrix.from_rows(k, [e[:2], e[2:]]))
    return ExtReport(4 - rank, len(H), len(H) - rank, classes)


def fl_ext1_bruteforce(m: FLModule) -> int:
    """Exhaustive oracle: log_q of #M_2(k) / #{[R, X_M]} with both sets enumerated."""
    k = m.ring.residue()
    q = k.spec.q
    X = m.xm.reduce()
    elems = list(k.elements())
    all_mats = [Matrix.from_rows(k, [[a, b], [c, d]]) for a in elems for b in elems for c in elems for d in elems]
    H = [R for R in all_mats if _preserves_line(R, m)]
    image = {(R @ X - X @ R).entries for R in H}
    cosets = len(all_mats) // len(image)
    dim = 0
    while q ** dim < cosets:
        dim += 1
    assert q ** dim == cosets
    return dim


def _preserves_line(R: Matrix, m: FLModule) -> bool:
    if m.m1 != 1:
        return True
    k = R.ring
    v = [k.element(x) for x in m.fil_line]
    w = [R[0, 0] * v[0] + R[0, 1] * v[1], R[1, 0] * v[0] + R[1, 1] * v[1]]
    return (w[0] * v[1] - w[1] * v[0]).is_zero()


# -- counting lifts ----------------------------------------------------------------------

@dataclass(frozen=True)
class LiftCount:
    p: int
    l: int
    lifts: int
    group_order: int
    orbits: int
    orbit_sizes: tuple[int, ...]
    expected: int

    @property
    def stabilizers(self) -> tuple[int, ...]:
        return tuple(self.group_order // s for s in self.orbit_sizes)

    @property
    def stabilizers_central(self) -> bool:
        """Every stabilizer has exactly p^(l-1) elements (the scalar matrices)."""
        return all(s == self.p ** (self.l - 1) for s in self.stabilizers)

    def to_json(self) -> dict:
        return {
            "p": self.p, "l": self.l, "lifts": self.lifts, "group_order": self.group_order,
            "orbits": self.orbits, "expected": self.expected,
            "stabilizers_central": self.stabilizers_central,
            "stabilizer_sizes": sorted(set(self.stabilizers)),
        }


def fl_lift_count(m: FLModule, l: int, budget: int = DEFAULT_BUDGET, backend: str | None = None) -> LiftCount:
    """Orbits of lifts X_N = X_M mod p in M_2(Z/p^l) under conjugation by filtration-preserving
    matrices congruent to Id mod p."""
    if m.ring.n != 1:
        raise UnsupportedField("lift counting is implemented for k = F_p")
    if m.m1 != 1:
        raise UnsupportedFiltration("lift counting is implemented for dim M_1 = 1")
    p = m.ring.p
    if l < 1:
        raise ValueError("l must be >= 1")
    nlift = p ** (4 * (l - 1))
    if nlift > budget:
        raise BudgetExceeded(f"{nlift} lifts exceed the budget {budget}")
    k = m.ring.residue()
    P = Matrix.from_rows(k, [[e.reduce() for e in row] for row in m.basis_change().tolist()])
    X = P.inverse() @ m.xm.reduce() @ P  # now the filtration line is e_2
    xm = tuple(int(e.coeffs[0]) for e in X.entries)
    impl = kernels.backends()[backend] if backend else kernels
    sizes = tuple(impl.fl_orbit_sizes(xm, p, l))
    return LiftCount(p, l, nlift, p ** (3 * (l - 1)), len(sizes), sizes, p ** (2 * (l - 1)))
