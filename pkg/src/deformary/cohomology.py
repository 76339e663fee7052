"""Low-degree group cohomology with coefficients in finite-dimensional modules over k.

H^0 and H^1 of a presented group come from Fox derivatives of the relations;
H^1 and H^2 of a finite group come from the normalized bar resolution. Modules
over k = F_q with q = p^n are handled by restriction of scalars to F_p, and every
F_p-dimension is divided by n at the end.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from deformary import linalg
from deformary.errors import (
    BadOrder,
    GroupTooLarge,
    Inconsistent,
    NotACocycle,
    NotAHomomorphism,
    SpecMismatch,
    Underdetermined,
)
from deformary.finite import FiniteGroup
from deformary.groups import GroupRep, kron
from deformary.ring import GaloisRing, GaloisRingElement, Matrix, kernel_dim

IntMat = list[list[int]]


@dataclass(frozen=True)
class CohomologyReport:
    h0: int
    h1: int
    h2: int | None = None
    z1: int | None = None
    b1: int | None = None
    cocycle_basis: tuple = field(default=(), compare=False)
    method: str = "fox"

    def __post_init__(self):
        for name in ("h0", "h1", "h2", "z1", "b1"):
            v = getattr(self, name)
            if v is not None and v < 0:
                raise Inconsistent(f"{name} = {v} is negative")
        if self.z1 is not None and self.b1 is not None and self.h1 != self.z1 - self.b1:
            raise Inconsistent("h1 must equal dim Z1 - dim B1")

    @property
    def euler_characteristic(self) -> int | None:
        return None if self.h2 is None else self.h0 - self.h1 + self.h2

    def to_json(self) -> dict:
        out = {"h0": self.h0, "h1": self.h1, "h2": self.h2, "method": self.method}
        if self.z1 is not None:
            out["z1"] = self.z1
            out["b1"] = self.b1
        return out


# -- integer matrices over F_p ----------------------------------------------------

def _ident(D: int) -> IntMat:
    return [[int(i == j) for j in range(D)] for i in range(D)]


def _mm(a: IntMat, b: IntMat, p: int) -> IntMat:
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(r, c)) % p for c in bt] for r in a]


def _add(a: IntMat, b: IntMat, p: int) -> IntMat:
    return [[(x + y) % p for x, y in zip(r, s)] for r, s in zip(a, b)]


def _neg(a: IntMat, p: int) -> IntMat:
    return [[(-x) % p for x in r] for r in a]


def _fp_images(rep: GroupRep) -> tuple[dict[str, IntMat], dict[str, IntMat], int]:
    if rep.ring.l != 1:
        raise SpecMismatch("cohomology is computed for modules over the residue field")
    fwd = {g: m.to_int_rows() for g, m in rep.images.items()}
    bwd = {g: m.inverse().to_int_rows() for g, m in rep.images.items()}
    return fwd, bwd, rep.dim * rep.ring.n


def _fp_dim(rows: list[list[int]], ncols: int, p: int) -> tuple[int, list[list[int]]]:
    if ncols == 0:
        return 0, []
    if not rows:
        return ncols, [[int(i == j) for j in range(ncols)] for i in range(ncols)]
    return linalg.kernel_mod(rows, ncols, p, 1)


# -- Fox calculus --------------------------------------------------------------------

def fox_jacobian(rep: GroupRep) -> list[IntMat]:
    """For each relation r, the D x (D * #gens) matrix of c -> c(r) on cocycle values c(g_j)."""
    fwd, bwd, D = _fp_images(rep)
    p = rep.ring.p
    gens = rep.group.generators
    col = {g: i for i, g in enumerate(gens)}
    out = []
    for rel in rep.group.relations:
        blocks = {g: [[0] * D for _ in range(D)] for g in gens}
        prefix = _ident(D)
        for g, e in rel:
            if e > 0:
                # c(g^e) = (1 + g + ... + g^(e-1)) c(g)
                acc = prefix
                for _ in range(e):
                    blocks[g] = _add(blocks[g], acc, p)
                    acc = _mm(acc, fwd[g], p)
                prefix = acc
            else:
                # c(g^-k) = -(g^-1 + ... + g^-k) c(g)
                acc = prefix
                for _ in range(-e):
                    acc = _mm(acc, bwd[g], p)
                    blocks[g] = _add(blocks[g], _neg(acc, p), p)
                prefix = acc
        big = [[0] * (D * len(gens)) for _ in range(D)]
        for g, b in blocks.items():
            j0 = col[g] * D
            for i in range(D):
                big[i][j0:j0 + D] = b[i]
        out.append(big)
    return out


def h01_fox(module: GroupRep) -> CohomologyReport:
    """H^0 and H^1 of the presented group ``module.group`` with coefficients in ``module``."""
    fwd, _, D = _fp_images(module)
    p = module.ring.p
    n = module.ring.n
    gens = module.group.generators
    fixed_rows = []
    for g in gens:
        m = fwd[g]
        fixed_rows.extend([[(m[i][j] - (i == j)) % p for j in range(D)] for i in range(D)])
    h0, _ = _fp_dim(fixed_rows, D, p)
    rows = [r for big in fox_jacobian(module) for r in big]
    z1, basis = _fp_dim(rows, D * len(gens), p)
    b1 = D - h0
    cocycles = tuple(tuple(tuple(v[k * D:(k + 1) * D]) for k in range(len(gens))) for v in basis)
    return CohomologyReport(h0 // n, (z1 - b1) // n, None, z1 // n, b1 // n, cocycles, "fox")


# -- finite groups, bar resolution -------------------------------------------------------

@dataclass(frozen=True)
class TableModule:
    """A k[G]-module for a table group: ``action[a]`` is the F_p-matrix of element a."""

    group: FiniteGroup
    p: int
    dim: int
    action: tuple
    n: int = 1

    @classmethod
    def from_images(cls, G: FiniteGroup, images: Sequence[Sequence[int]], d: int, p: int) -> "TableModule":
        mats = tuple(tuple(tuple(im[i * d:(i + 1) * d]) for i in range(d)) for im in images)
        return cls(G, p, d, mats)

    @classmethod
    def trivial(cls, G: FiniteGroup, p: int, d: int = 1) -> "TableModule":
        ident = tuple(tuple(int(i == j) for j in range(d)) for i in range(d))
        return cls(G, p, d, (ident,) * G.order)

    @classmethod
    def from_rep(cls, G: FiniteGroup, rep: GroupRep, element_words: Sequence) -> "TableModule":
        """Module from a representation, given a word for each group element."""
        mats = tuple(tuple(map(tuple, rep.evaluate(w).to_int_rows())) for w in element_words)
        return cls(G, rep.ring.p, rep.dim * rep.ring.n, mats, rep.ring.n)

    def is_module(self) -> bool:
        G = self.group
        p = self.p
        return all(
            _mm([list(r) for r in self.action[a]], [list(r) for r in self.action[b]], p)
            == [list(r) for r in self.action[G.mul(a, b)]]
            for a in range(G.order) for b in range(G.order)
        )


def _h0_table(M: TableModule) -> int:
    D, p = M.dim, M.p
    rows = []
    for a in range(1, M.group.order):
        m = M.action[a]
        rows.extend([[(m[i][j] - (i == j)) % p for j in range(D)] for i in range(D)])
    return _fp_dim(rows, D, p)[0]


def _z1_table(M: TableModule) -> int:
    G, D, p = M.group, M.dim, M.p
    n = G.order

    def rows():
        for g in range(n):
            for h in range(n):
                gh = G.mul(g, h)
                act = M.action[g]
                for i in range(D):
                    r: dict[int, int] = {}
                    # f(gh) - f(g) - g f(h)
                    r[gh * D + i] = r.get(gh * D + i, 0) + 1
                    r[g * D + i] = r.get(g * D + i, 0) - 1
                    for j in range(D):
                        if act[i][j]:
                            r[h * D + j] = r.get(h * D + j, 0) - act[i][j]
                    yield r

    return n * D - linalg.sparse_rank_mod_p(rows(), p)


def h1_bar(M: TableModule) -> CohomologyReport:
    h0 = _h0_table(M)
    z1 = _z1_table(M)
    b1 = M.dim - h0
    return CohomologyReport(h0 // M.n, (z1 - b1) // M.n, None, z1 // M.n, b1 // M.n, (), "bar")


DEFAULT_MAX_ORDER = 32


def h2_bar(M: TableModule, max_order: int = DEFAULT_MAX_ORDER) -> CohomologyReport:
    """h0, h1, h2 from the normalized bar complex of a table group."""
    G, D, p = M.group, M.dim, M.p
    n = G.order
    if n > max_order:
        raise GroupTooLarge(f"|G| = {n} exceeds the bound {max_order}")
    h0 = _h0_table(M)
    z1 = _z1_table(M)
    m = n - 1

    def idx(g, h, i):
        return ((g - 1) * m + (h - 1)) * D + i

    def rows():
        for g in range(1, n):
            act = M.action[g]
            for h in range(1, n):
                gh = G.mul(g, h)
                for k in range(1, n):
                    hk = G.mul(h, k)
                    for i in range(D):
                        r: dict[int, int] = {}

                        def put(c, v):
                            r[c] = r.get(c, 0) + v

                        for j in range(D):
                            if act[i][j]:
                                put(idx(h, k, j), act[i][j])
                        if gh:
                            put(idx(gh, k, i), -1)
                        if hk:
                            put(idx(g, hk, i), 1)
                        put(idx(g, h, i), -1)
                        yield r

    rank2 = linalg.sparse_rank_mod_p(rows(), p) if m else 0
    z2 = m * m * D - rank2
    b2 = m * D - z1  # image of normalized C^1, whose kernel is Z^1
    b1 = D - h0
    return CohomologyReport(h0 // M.n, (z1 - b1) // M.n, (z2 - b2) // M.n, z1 // M.n, b1 // M.n, (), "bar")


# -- T_g -----------------------------------------------------------------------------

def _check_alpha(p: int, alpha: GaloisRingElement) -> GaloisRing:
    ring = alpha.ring
    if ring.p != p or ring.n != 2 or ring.l != 1:
        raise SpecMismatch(f"alpha must lie in F_{{{p}^2}}")
    if not alpha.is_unit() or alpha.multiplicative_order() != p * p - 1:
        raise BadOrder(f"alpha must have multiplicative order {p * p - 1}")
    return ring


def tg_matrix(p: int, alpha: GaloisRingElement) -> Matrix:
    """The diagonal operator on R = [[x, y], [z, w]] (basis x, y, z, w) as displayed."""
    ring = _check_alpha(p, alpha)
    d = alpha ** (p + 1)
    diag = [1 - d, alpha ** (1 - p) - d, alpha ** (p - 1) - d, 1 - d]
    return Matrix.diag(ring, diag)


def tg_from_definition(p: int, alpha: GaloisRingElement) -> Matrix:
    """R -> rho R rho^-1 - det(rho) R with rho = diag(alpha, alpha^p), on row-major vec(R)."""
    ring = _check_alpha(p, alpha)
    rho = Matrix.diag(ring, [alpha, alpha ** p])
    conj = kron(rho, rho.inverse().transpose())
    return conj - Matrix.identity(ring, 4).scale(rho.det())


def tg_kernel_dim(p: int, alpha: GaloisRingElement) -> int:
    return kernel_dim(tg_matrix(p, alpha), "field").size


# -- Euler-Poincare ------------------------------------------------------------------------

PLACES = ("global", "p", "infinity", "finite")


@dataclass(frozen=True)
class EPLedger:
    """``dims`` holds ``dim`` (the module's k-dimension) and, for the global formula,
    ``h0_inf`` (invariants under complex conjugation)."""

    place: str
    dims: Mapping[str, int]

    def __post_init__(self):
        if self.place not in PLACES:
            raise ValueError(f"place must be one of {PLACES}")
        if any(v < 0 for v in self.dims.values()):
            raise Inconsistent("ledger entries must be nonnegative")


def c_ep(ledger: EPLedger, h0: int | None = None) -> int:
    """Tate's value of h0 - h1 + h2 for the place."""
    d = ledger.dims
    if ledger.place == "global":
        return -d["dim"] + d.get("h0_inf", 0)
    if ledger.place == "p":
        return -d["dim"]
    if ledger.place == "infinity":
        if h0 is None:
            raise Underdetermined("the archimedean value is h0 itself")
        return h0
    return 0


def ep_solve(ledger: EPLedger, h0: int | None = None, h1: int | None = None,
             h2: int | None = None) -> CohomologyReport:
    known = [x is not None for x in (h0, h1, h2)]
    if ledger.place == "infinity":
        # c = h0, so the identity reads h1 = h2 and says nothing about h0
        if h0 is None:
            raise Underdetermined("h0 is not determined at the archimedean place")
        if h1 is None and h2 is None:
            raise Underdetermined("need one of h1, h2")
        h1 = h2 if h1 is None else h1
        h2 = h1 if h2 is None else h2
        if h1 != h2:
            raise Inconsistent("archimedean identity h1 = h2 fails")
        return CohomologyReport(h0, h1, h2, method="ep-derived")
    c = c_ep(ledger)
    if all(known):
        if h0 - h1 + h2 != c:
            raise Inconsistent(f"h0 - h1 + h2 = {h0 - h1 + h2} but c_EP = {c}")
    elif sum(known) < 2:
        raise Underdetermined("exactly one of h0, h1, h2 may be unknown")
    elif h0 is None:
        h0 = c + h1 - h2
    elif h1 is None:
        h1 = h0 + h2 - c
    else:
        h2 = c - h0 + h1
    return CohomologyReport(h0, h1, h2, method="ep-derived")


def duality_identity_check(h0: int, h2_twist: int, h1: int) -> bool:
    """Local duality at a place away from p and infinity: h1 = h0 + h2 of the Tate twist."""
    return h1 == h0 + h2_twist


# -- obstruction cocycles ------------------------------------------------------------------

@dataclass(frozen=True)
class CocycleReport:
    cochain: dict
    trivial: bool
    coboundary: bool
    primitive: dict | None = None

    def to_json(self) -> dict:
        return {
            "trivial": self.trivial,
            "coboundary": self.coboundary,
            "cochain": {f"{g},{h}": m.to_json() for (g, h), m in sorted(self.cochain.items())},
        }


def two_cocycle_report(G: FiniteGroup, rhobar: Sequence[Matrix], C: Mapping[tuple[int, int], Matrix]) -> CocycleReport:
    """Check g.C(h,k) - C(gh,k) + C(g,hk) - C(g,h) = 0 for the conjugation action and
    decide whether C = d f for some f: G -> M_N(k)."""
    n = G.order
    ring = rhobar[0].ring
    N = rhobar[0].rows
    inv = [m.inverse() for m in rhobar]
    for g in range(n):
        for h in range(n):
            for k in range(n):
                lhs = (rhobar[g] @ C[h, k] @ inv[g]) - C[G.mul(g, h), k] + C[g, G.mul(h, k)] - C[g, h]
                if not lhs.is_zero():
                    raise NotACocycle(f"cocycle identity fails at ({g}, {h}, {k})")
    trivial = all(m.is_zero() for m in C.values())
    if trivial:
        zero = Matrix.zero(ring, N)
        return CocycleReport(dict(C), True, True, {g: zero for g in range(n)})
    # unknown f(g) for all g; equations g.f(h) - f(gh) + f(g) = C(g, h)
    nn = N * N
    block = [kron(rhobar[g], inv[g].transpose()).to_int_rows() for g in range(n)]
    D = nn * ring.n
    rows: list[list[int]] = []
    rhs: list[int] = []
    p = ring.p
    for g in range(n):
        for h in range(n):
            gh = G.mul(g, h)
            eq = [[0] * (n * D) for _ in range(D)]
            for i in range(D):
                for j in range(D):
                    eq[i][h * D + j] += block[g][i][j]
                eq[i][gh * D + i] -= 1
                eq[i][g * D + i] += 1
            rows.extend([[x % p for x in r] for r in eq])
            rhs.extend(c for e in C[g, h].entries for c in e.coeffs)
    sol = linalg.solve_mod(rows, rhs, n * D, p, 1)
    prim = None
    if sol is not None:
        prim = {}
        for g in range(n):
            vals = sol[g * D:(g + 1) * D]
            es = [ring.element(vals[t * ring.n:(t + 1) * ring.n]) for t in range(nn)]
            prim[g] = Matrix.from_rows(ring, [es[i * N:(i + 1) * N] for i in range(N)])
    return CocycleReport(dict(C), False, sol is not None, prim)


def obstruction_class(G: FiniteGroup, lift: Sequence[Matrix]) -> CocycleReport:
    """Obstruction to a set-map lift over W_l(k) that is a homomorphism mod p^(l-1).

    c(g, h) = rho(gh) rho(h)^-1 rho(g)^-1 lies in Id + p^(l-1) M_N, and the class of
    (c - Id) / p^(l-1) in H^2(G, Ad) vanishes iff the lift can be corrected.
    """
    ring = lift[0].ring
    l = ring.l
    if l < 2:
        raise ValueError("the lift must live at precision l >= 2")
    if len(lift) != G.order:
        raise ValueError("need one matrix per group element")
    for g in range(G.order):
        for h in range(G.order):
            if (lift[G.mul(g, h)].to_precision(l - 1) - (lift[g] @ lift[h]).to_precision(l - 1)).is_zero():
                continue
            raise NotAHomomorphism(f"lift is not multiplicative mod p^{l - 1} at ({g}, {h})")
    k = ring.residue()
    inv = [m.inverse() for m in lift]
    C = {}
    N = lift[0].rows
    ident = Matrix.identity(ring, N)
    for g in range(G.order):
        for h in range(G.order):
            c = lift[G.mul(g, h)] @ inv[h] @ inv[g] - ident
            entries = [e.divide_p_power(l - 1) for e in c.entries]
            C[g, h] = Matrix(k, N, N, tuple(entries))
    return two_cocycle_report(G, [m.reduce() for m in lift], C)
