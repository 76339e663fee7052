"""The universal framed deformation of a direct sum of 2-dimensional residual representations.

Given residual representations rho_i (pairwise without intertwiners) with
multiplicities e_i and lifts over W_l(k), conjugate the block-diagonal lift T by
1 + M with M a matrix of 4n^2 variables, then absorb 1 + Y (Y in the centralizer
of T) to kill sum e_i^2 variables. The survivors are free power-series variables.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from deformary.errors import NoSolution
from deformary.fontaine_laffaille import FLModule, fl_ext1
from deformary.groups import GroupRep, MarkedGroup, direct_sum, intertwiner_space, rep_verify
from deformary.local import flat_certificate_check, parity_det_check, steinberg_check
from deformary.errors import DeformaryError
from deformary.ring import FieldSpec, GaloisRing, Matrix
from deformary.series import (
    RingPresentation,
    SeriesRing,
    formal_smoothness_check,
    smat_add,
    smat_const,
    smat_equal,
    smat_identity,
    smat_inv,
    smat_mul,
    smat_reduce_to_residue,
    smat_sub,
)


@dataclass(frozen=True)
class BundleRep:
    residual: GroupRep
    lift: GroupRep
    multiplicity: int = 1
    certificate: FLModule | None = None


@dataclass(frozen=True)
class InputBundle:
    reps: tuple[BundleRep, ...]
    inertia: str = "ell-inertia"
    infinity: str = "infinity"

    def __post_init__(self):
        object.__setattr__(self, "reps", tuple(self.reps))
        if not self.reps:
            raise ValueError("empty bundle")
        g = self.reps[0].residual.group
        ring = self.reps[0].lift.ring
        for br in self.reps:
            if br.residual.group != g or br.lift.group != g:
                raise ValueError("all representations must share one group")
            if br.lift.ring != ring:
                raise ValueError("all lifts must share one coefficient ring")
            if br.multiplicity < 1:
                raise ValueError("multiplicities are positive")
            if br.residual.dim != 2 or br.lift.dim != 2:
                raise ValueError("the construction takes 2-dimensional representations")

    @property
    def group(self) -> MarkedGroup:
        return self.reps[0].residual.group

    @property
    def ring(self) -> GaloisRing:
        return self.reps[0].lift.ring

    @property
    def multiplicities(self) -> tuple[int, ...]:
        return tuple(br.multiplicity for br in self.reps)

    @property
    def n(self) -> int:
        return sum(self.multiplicities)

    @property
    def N(self) -> int:
        return 4 * self.n ** 2 - sum(e * e for e in self.multiplicities)


@dataclass(frozen=True)
class BlockLayout:
    multiplicities: tuple[int, ...]

    @property
    def h(self) -> int:
        return 2 * sum(self.multiplicities)

    @property
    def offsets(self) -> tuple[int, ...]:
        """h_j = sum_{i<j} 2 e_i, followed by h_{r+1} = 2n."""
        out = [0]
        for e in self.multiplicities:
            out.append(out[-1] + 2 * e)
        return tuple(out)

    def block(self, i: int, j: int) -> tuple[range, range]:
        o = self.offsets
        return range(o[i], o[i + 1]), range(o[j], o[j + 1])

    def designated(self) -> list[tuple[int, int]]:
        """0-based positions (h_i + 2s - 1, h_i + 2t - 1) of the 1-based (h_i + 2s, h_i + 2t)."""
        out = []
        for i, e in enumerate(self.multiplicities):
            h = self.offsets[i]
            out.extend((h + 2 * s + 1, h + 2 * t + 1) for s in range(e) for t in range(e))
        return out

    def column_block(self, v: int) -> tuple[int, int]:
        """(block index, pair index t) of a 0-based column."""
        o = self.offsets
        for i in range(len(self.multiplicities)):
            if o[i] <= v < o[i + 1]:
                return i, (v - o[i]) // 2
        raise IndexError(v)


def var_name(u: int, v: int) -> str:
    """Name of the entry in (1-based) row u and column v."""
    return f"x{u}_{v}"


# -- hypotheses ----------------------------------------------------------------------------

@dataclass(frozen=True)
class HypothesesReport:
    ok: bool
    failures: tuple[str, ...]
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"ok": self.ok, "failures": list(self.failures), "details": self.details}


def hypotheses_check(b: InputBundle, ext_dims: Mapping[tuple[int, int], int] | None) -> HypothesesReport:
    failures = []
    details: dict = {"hom": {}, "ext": {}, "local": {}}
    r = len(b.reps)
    for i in range(r):
        for j in range(r):
            d, _ = intertwiner_space(b.reps[i].residual, b.reps[j].residual)
            details["hom"][f"{i},{j}"] = d
            want = 1 if i == j else 0
            if d != want:
                failures.append(f"Hom(rho_{i}, rho_{j}) has dimension {d}, expected {want}")
            e = None if ext_dims is None else ext_dims.get((i, j))
            details["ext"][f"{i},{j}"] = e
            if e is None:
                failures.append(f"ext dimension for ({i}, {j}) not supplied")
            elif e != 0:
                failures.append(f"Ext^1(rho_{i}, rho_{j}) is nonzero ({e})")
    for i, br in enumerate(b.reps):
        loc: dict = {}
        for name, rep in (("residual", br.residual), ("lift", br.lift)):
            chk = rep_verify(rep)
            if not chk.ok:
                failures.append(f"{name} of rho_{i} is not a representation: {chk.reason}")
        if not (br.lift.reduce().images == br.residual.images):
            failures.append(f"lift of rho_{i} does not reduce to the residual representation")
        try:
            st = steinberg_check(br.lift, b.inertia)
            loc["steinberg"] = st.verdict
            if not st.verdict:
                failures.append(f"rho_{i} fails the Steinberg condition")
            od = parity_det_check(br.lift, infinity=b.infinity)
            loc["odd"] = od.verdict
            if not od.verdict:
                failures.append(f"rho_{i} is not odd")
        except DeformaryError as e:
            failures.append(f"rho_{i}: {e}")
        if br.certificate is None:
            failures.append(f"rho_{i} has no flat certificate")
            loc["flat"] = False
        else:
            try:
                fl = flat_certificate_check(br.residual, br.certificate)
                loc["flat"] = fl.verdict
                loc["fl_ext1_dim"] = fl.details.get("ext1_dim")
                if not fl.verdict:
                    failures.append(f"flat certificate of rho_{i} rejected: {'; '.join(fl.warnings)}")
            except DeformaryError as e:
                loc["flat"] = False
                failures.append(f"flat certificate of rho_{i} invalid: {e}")
        details["local"][str(i)] = loc
    return HypothesesReport(not failures, tuple(failures), details)


# -- the construction ------------------------------------------------------------------------

def block_lift(b: InputBundle) -> GroupRep:
    """T: the direct sum of e_i copies of each lift, in order."""
    return direct_sum([br.lift for br in b.reps for _ in range(br.multiplicity)])


def block_residual(b: InputBundle) -> GroupRep:
    return direct_sum([br.residual for br in b.reps for _ in range(br.multiplicity)])


def conjugate_series(T: Matrix, M: list, R: SeriesRing) -> list:
    """(1 + M) T (1 + M)^-1 for a constant matrix T."""
    one_m = smat_add(smat_identity(R, T.rows), M)
    return smat_mul(smat_mul(one_m, smat_const(R, T)), smat_inv(one_m))


@dataclass(frozen=True)
class EliminationReport:
    A: list
    Y: list
    Mtilde: list
    iterations: int
    zeroed: int
    designated_all_zero: bool
    y_shape_ok: bool
    closed_form_agrees: bool
    a_display: dict
    x_display: dict

    def to_json(self) -> dict:
        return {
            "iterations": self.iterations,
            "zeroed": self.zeroed,
            "designated_all_zero": self.designated_all_zero,
            "y_shape_ok": self.y_shape_ok,
            "closed_form_agrees": self.closed_form_agrees,
            "a_display": self.a_display,
            "x_display": self.x_display,
        }


def eliminate_centralizer(M: list, layout: BlockLayout, D: int | None = None) -> EliminationReport:
    """Find Y = diag(A_i (x) id_2) with (1 + M)(1 + Y) = 1 + Mtilde zero at the designated entries.

    Column t of A_i solves (I + X_i) a = -X_i[:, t], X_i the designated entries of block i;
    it is found by the fixed-point iteration a <- -X_i[:, t] - X_i a, exact after D steps.
    """
    R = M[0][0].parent
    D = R.degree_bound if D is None else D
    h = layout.h
    if len(M) != h:
        raise ValueError("matrix size does not match the layout")
    if any(x.constant_term() for row in M for x in row):
        raise ValueError("M must have zero constant term")
    zero = R.zero()
    Y = [[zero] * h for _ in range(h)]
    As = []
    iterations = 0
    closed_ok = True
    a_blocks = []
    for i, e in enumerate(layout.multiplicities):
        o = layout.offsets[i]
        X = [[M[o + 2 * s + 1][o + 2 * t + 1] for t in range(e)] for s in range(e)]
        A = [[zero] * e for _ in range(e)]
        for it in range(D + 2):
            new = [[-X[s][t] - sum((X[s][k] * A[k][t] for k in range(e)), zero) for t in range(e)] for s in range(e)]
            if new == A:
                break
            A = new
        else:
            raise NoSolution("fixed-point iteration did not stabilize")
        iterations = max(iterations, it)
        # closed form (I + X)^-1 - I
        IX = smat_add(smat_identity(R, e), X)
        closed = smat_sub(smat_inv(IX), smat_identity(R, e))
        closed_ok = closed_ok and smat_equal(closed, A)
        # entrywise display -x / (1 + x)
        blk = {"block": i, "e": e, "entries": e * e, "agree": 0, "first_differing_degree": None}
        for s in range(e):
            for t in range(e):
                x = X[s][t]
                diff = A[s][t] + x * (1 + x).inverse()
                if diff.is_zero():
                    blk["agree"] += 1
                else:
                    d = diff.min_degree()
                    cur = blk["first_differing_degree"]
                    blk["first_differing_degree"] = d if cur is None else min(cur, d)
        blk["all_agree"] = blk["agree"] == blk["entries"]
        a_blocks.append(blk)
        As.append(A)
        for s in range(e):
            for t in range(e):
                Y[o + 2 * s][o + 2 * t] = A[s][t]
                Y[o + 2 * s + 1][o + 2 * t + 1] = A[s][t]
    Mt = smat_add(smat_add(M, Y), smat_mul(M, Y))
    designated = layout.designated()
    dset = set(designated)
    zeroed = sum(1 for (u, v) in designated if Mt[u][v].is_zero())

    # structural shape of Y: A_i (x) id_2 inside diagonal blocks, zero elsewhere
    shape_ok = True
    for u in range(h):
        for v in range(h):
            bu, su = layout.column_block(u)
            bv, tv = layout.column_block(v)
            par = (u - layout.offsets[bu]) % 2 == (v - layout.offsets[bv]) % 2
            if not (bu == bv and par):
                shape_ok = shape_ok and Y[u][v].is_zero()
            else:
                shape_ok = shape_ok and Y[u][v] == As[bu][su][tv]

    # the closed-form display for the surviving entries, denominator read off the column's pair
    x_cmp = {"entries": 0, "agree": 0, "first_differing_degree": None, "examples": []}
    for u in range(h):
        for v in range(h):
            if (u, v) in dset:
                continue
            j, t = layout.column_block(v)
            o = layout.offsets[j]
            xd = M[o + 2 * t + 1][o + 2 * t + 1]
            disp = M[u][v] * (1 + xd).inverse()
            diff = Mt[u][v] - disp
            x_cmp["entries"] += 1
            if diff.is_zero():
                x_cmp["agree"] += 1
            else:
                d = diff.min_degree()
                cur = x_cmp["first_differing_degree"]
                x_cmp["first_differing_degree"] = d if cur is None else min(cur, d)
                if len(x_cmp["examples"]) < 4:
                    x_cmp["examples"].append({"entry": [u + 1, v + 1], "degree": d})
    a_cmp = {"blocks": a_blocks, "degree_bound": D}
    x_cmp["all_agree"] = x_cmp["agree"] == x_cmp["entries"]
    return EliminationReport(As, Y, Mt, iterations, zeroed, zeroed == len(designated), shape_ok,
                             closed_ok, a_cmp, x_cmp)


@dataclass(frozen=True)
class UniversalResult:
    presentation: RingPresentation
    images: dict
    elimination: EliminationReport
    checks: dict
    N: int

    def to_json(self, with_matrix: bool = True) -> dict:
        out = {
            "N": self.N,
            "var_count": len(self.presentation.varnames),
            "relations": len(self.presentation.relations),
            "vars": list(self.presentation.varnames),
            "checks": self.checks,
            "elimination": self.elimination.to_json(),
        }
        if with_matrix:
            out["universal_matrix"] = {g: [[s.pretty() for s in row] for row in m] for g, m in sorted(self.images.items())}
        return out


def build_universal(b: InputBundle, D: int = 3) -> UniversalResult:
    layout = BlockLayout(b.multiplicities)
    h = layout.h
    ring = b.ring
    names = tuple(var_name(u + 1, v + 1) for u in range(h) for v in range(h))
    R = SeriesRing(ring, names, D)
    M = [[R.gen(var_name(u + 1, v + 1)) for v in range(h)] for u in range(h)]
    T = block_lift(b)
    rbar = block_residual(b)
    elim = eliminate_centralizer(M, layout, D)

    dset = set(layout.designated())
    survivors = tuple(var_name(u + 1, v + 1) for u in range(h) for v in range(h) if (u, v) not in dset)
    pres = RingPresentation(ring, survivors, (), D, name="universal framed ring")
    RN = SeriesRing(ring, survivors, D)
    Xt = [[RN.zero() if (u, v) in dset else RN.gen(var_name(u + 1, v + 1)) for v in range(h)] for u in range(h)]

    invariance = True
    reduces = True
    images = {}
    for g in b.group.generators:
        Tg = T.images[g]
        before = conjugate_series(Tg, M, R)
        after = conjugate_series(Tg, elim.Mtilde, R)
        invariance = invariance and smat_equal(before, after)
        reduces = reduces and smat_reduce_to_residue(before) == rbar.images[g]
        univ = conjugate_series(Tg, Xt, RN)
        reduces = reduces and smat_reduce_to_residue(univ) == rbar.images[g]
        images[g] = univ
    smooth = formal_smoothness_check(pres)
    checks = {
        "var_count_is_N": len(survivors) == b.N,
        "zero_relations": not pres.relations,
        "power_series": smooth.power_series,
        "reduces_to_residual": reduces,
        "conjugation_invariance": invariance,
        "designated_zeroed": elim.designated_all_zero and elim.zeroed == sum(e * e for e in b.multiplicities),
        "y_shape": elim.y_shape_ok,
        "closed_form_a": elim.closed_form_agrees,
    }
    return UniversalResult(pres, images, elim, checks, b.N)


# -- tangent dimension -------------------------------------------------------------------------

@dataclass(frozen=True)
class TangentReport:
    ad_invariants: int
    expected_ad_invariants: int
    framed_tangent: int
    N: int

    @property
    def ok(self) -> bool:
        return self.ad_invariants == self.expected_ad_invariants and self.framed_tangent == self.N

    def to_json(self) -> dict:
        return {"ad_invariants": self.ad_invariants, "expected_ad_invariants": self.expected_ad_invariants,
                "framed_tangent": self.framed_tangent, "N": self.N, "ok": self.ok}


def tangent_dim_check(b: InputBundle) -> TangentReport:
    """dim Ad^G by intertwiners of the full residual sum; framed tangent = dim Ad - dim Ad^G."""
    rbar = block_residual(b)
    d, _ = intertwiner_space(rbar, rbar)
    n = b.n
    return TangentReport(d, sum(e * e for e in b.multiplicities), 4 * n * n - d, b.N)


# -- the Schoof-type example ---------------------------------------------------------------------

def proxy_group() -> MarkedGroup:
    """<c, u, f | c^2> with c complex conjugation and u a generator of inertia at ell."""
    return MarkedGroup(("c", "u", "f"), (["c^2"],), {"infinity": "c", "ell-inertia": "u"})


def proxy_rep(l: int = 4, variant: int = 1) -> BundleRep:
    """A residual representation over F_2 with its lift over Z/2^l and an FL certificate.

    variant 1 sends f to Id; variant 2 sends f to an element of order 3, giving a
    second representation with no intertwiners to the first.
    """
    G = proxy_group()
    k = GaloisRing(FieldSpec(2), 1)
    W = GaloisRing(FieldSpec(2), l)
    c = [[0, 1], [1, 0]]
    u = [[1, 1], [0, 1]]
    f_bar, f_lift = ([[1, 0], [0, 1]], [[1, 0], [0, 1]]) if variant == 1 else ([[0, 1], [1, 1]], [[0, -1], [1, -1]])
    residual = GroupRep.from_lists(G, k, {"c": c, "u": u, "f": f_bar})
    lift = GroupRep.from_lists(G, W, {"c": c, "u": u, "f": f_lift})
    cert = FLModule.from_lists(k, [[0, 1], [1, 0]], (2, 1, 0), (0, 1))
    return BundleRep(residual, lift, 1, cert)


@dataclass(frozen=True)
class SchoofReport:
    g: int
    var_count: int
    expected: int
    hypotheses: HypothesesReport
    tangent: TangentReport
    universal: UniversalResult

    @property
    def ok(self) -> bool:
        return (self.var_count == self.expected and self.hypotheses.ok and self.tangent.ok
                and all(self.universal.checks.values()))

    def to_json(self, with_matrix: bool = True) -> dict:
        return {
            "g": self.g, "var_count": self.var_count, "expected": self.expected, "ok": self.ok,
            "hypotheses": self.hypotheses.to_json(), "tangent": self.tangent.to_json(),
            "universal": self.universal.to_json(with_matrix),
        }


def schoof_example(g: int, base: BundleRep | None = None, D: int = 3, l: int = 4) -> SchoofReport:
    base = base or proxy_rep(l)
    br = BundleRep(base.residual, base.lift, g, base.certificate)
    b = InputBundle((br,))
    hyp = hypotheses_check(b, {(0, 0): 0})
    tan = tangent_dim_check(b)
    res = build_universal(b, D)
    return SchoofReport(g, len(res.presentation.varnames), 3 * g * g, hyp, tan, res)


def fl_ext_corroboration(b: InputBundle) -> dict:
    """fl_ext1 of each certificate, for comparison with the supplied Ext data."""
    out = {}
    for i, br in enumerate(b.reps):
        if br.certificate is not None and br.certificate.ring.n == 1 and br.certificate.m1 == 1:
            out[str(i)] = fl_ext1(br.certificate).dimension
    return out
