"""Dimension bookkeeping between global and local deformation problems.

The restriction maps theta_1 (on H^1) and theta_2 (on H^2) are never built; only
their kernel and cokernel dimensions enter, and those are tied to the cohomology
dimensions by rank-nullity and by Tate's Euler-Poincare formulas.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from deformary.cohomology import CohomologyReport, EPLedger, c_ep, ep_solve
from deformary.errors import Inconsistent, InconsistentLedger
from deformary.local import GEOMETRIC_TABLE, place_kind
from deformary.series import RingPresentation, compose


@dataclass(frozen=True)
class ThetaLedger:
    """Cohomology of Ad^0 globally and at each place of Sigma, plus theta dimensions."""

    sigma: tuple[str, ...]
    global_: CohomologyReport
    locals: Mapping[str, CohomologyReport]
    r1: int
    r2: int
    framed_r: int
    t1: int | None = None
    delta: int | None = None
    n: int = 2
    s_minus_sigma_nonempty: bool = False

    @property
    def sigma_size(self) -> int:
        return len(self.sigma)

    @property
    def dim_ad0(self) -> int:
        return self.n * self.n - 1

    def to_json(self) -> dict:
        return {
            "sigma": list(self.sigma),
            "n": self.n,
            "global": self.global_.to_json(),
            "locals": {v: rep.to_json() for v, rep in self.locals.items()},
            "r1": self.r1, "t1": self.t1, "r2": self.r2, "delta": self.delta,
            "framed_r": self.framed_r,
            "s_minus_sigma_nonempty": self.s_minus_sigma_nonempty,
        }


@dataclass(frozen=True)
class LedgerReport:
    derived: dict
    identities: dict
    verdicts: dict

    @property
    def ok(self) -> bool:
        return all(self.verdicts.values())

    def to_json(self) -> dict:
        return {"derived": self.derived, "identities": self.identities, "verdicts": self.verdicts}


def _fail(msg: str):
    raise InconsistentLedger(msg)


def ltg_bookkeeping(ledger: ThetaLedger) -> LedgerReport:
    kinds = [place_kind(v) for v in ledger.sigma]
    if kinds.count("p") != 1 or kinds.count("infinity") != 1:
        _fail("Sigma must contain the place p and the archimedean place exactly once")
    if set(ledger.locals) != set(ledger.sigma):
        _fail("local reports must be given for exactly the places of Sigma")
    d0 = ledger.dim_ad0
    n2 = ledger.n * ledger.n
    S = ledger.sigma_size
    inf = ledger.sigma[kinds.index("infinity")]
    h0_inf = ledger.locals[inf].h0
    g = ledger.global_
    if g.h2 is None or any(rep.h2 is None for rep in ledger.locals.values()):
        _fail("every report needs h0, h1 and h2")

    # Euler-Poincare at every place and globally
    try:
        for v, kind in zip(ledger.sigma, kinds):
            rep = ledger.locals[v]
            ep_solve(EPLedger(kind, {"dim": d0}), rep.h0, rep.h1, rep.h2)
        ep_solve(EPLedger("global", {"dim": d0, "h0_inf": h0_inf}), g.h0, g.h1, g.h2)
    except Inconsistent as e:
        raise InconsistentLedger(f"Euler-Poincare check failed: {e}") from None

    sum_h0 = sum(r.h0 for r in ledger.locals.values())
    sum_h1 = sum(r.h1 for r in ledger.locals.values())
    sum_h2 = sum(r.h2 for r in ledger.locals.values())

    # rank-nullity for theta_1 and theta_2
    if not 0 <= ledger.r1 <= g.h1:
        _fail("r1 must lie in [0, h1(G_S)]")
    if not 0 <= ledger.r2 <= g.h2:
        _fail("r2 must lie in [0, h2(G_S)]")
    t1 = ledger.r1 - g.h1 + sum_h1
    if ledger.t1 is not None and ledger.t1 != t1:
        _fail(f"t1 = {ledger.t1} violates rank-nullity (expected {t1})")
    if t1 < 0 or t1 > sum_h1:
        _fail("theta_1 data violate rank-nullity")
    delta = ledger.r2 - g.h2 + sum_h2
    if ledger.delta is not None and ledger.delta != delta:
        _fail(f"delta = {ledger.delta} violates rank-nullity (expected {delta})")
    if delta < 0:
        _fail("theta_2 data violate rank-nullity")
    if ledger.s_minus_sigma_nonempty and delta != 0:
        _fail("delta must vanish when S minus Sigma is nonempty")

    # framed tangent spaces and the framed theta_1
    framed_global = g.h1 - g.h0 - 1 + S * n2
    framed_locals = sum(r.h1 - r.h0 - 1 + n2 for r in ledger.locals.values())
    if not 0 <= ledger.framed_r <= framed_global:
        _fail("framed r must lie in [0, dim of the framed tangent space]")
    framed_coker = ledger.framed_r - (framed_global - framed_locals)
    if framed_coker < 0:
        _fail("framed theta_1 data violate rank-nullity")
    framed_t = framed_coker + ledger.r2

    lhs = ledger.framed_r - framed_t + delta
    c_global = g.h0 - g.h1 + g.h2
    c_locals = sum(r.h0 - r.h1 + r.h2 for r in ledger.locals.values())
    ep_chain = -c_global + c_locals + S - 1
    tate = -c_ep(EPLedger("global", {"dim": d0, "h0_inf": h0_inf})) + sum(
        c_ep(EPLedger(k, {"dim": d0}), ledger.locals[v].h0) for v, k in zip(ledger.sigma, kinds)) + S - 1
    tangent_difference = framed_global - framed_locals - g.h2 + sum_h2

    derived = {
        "t1": t1, "delta": delta, "framed_r": ledger.framed_r, "framed_t": framed_t,
        "framed_coker_theta1": framed_coker,
        "framed_tangent_dim": framed_global,
        "unframed_tangent_dim": g.h1,
        "framed_aux_vars": n2 * S - 1,
        "sum_local_h0": sum_h0,
        "relation_bound_unframed": t1 + ledger.r2,
    }
    identities = {
        "r - t + delta": lhs,
        "tangent difference": tangent_difference,
        "-c_EP(G_S) + sum c_EP(G_v) + |Sigma| - 1": ep_chain,
        "Tate evaluation": tate,
        "|Sigma| - 1": S - 1,
    }
    verdicts = {
        "r - t + delta = |Sigma| - 1": lhs == S - 1,
        "direct value = tangent difference": lhs == tangent_difference,
        "tangent difference = EP chain": tangent_difference == ep_chain,
        "EP chain = Tate evaluation": ep_chain == tate,
        "framed aux vars = 4|Sigma| - 1": ledger.n != 2 or n2 * S - 1 == 4 * S - 1,
    }
    return LedgerReport(derived, identities, verdicts)


def random_consistent_ledger(rng: random.Random, sigma_size: int, n: int = 2,
                             s_minus_sigma_nonempty: bool | None = None) -> ThetaLedger:
    """A ledger whose entries satisfy every Euler-Poincare and rank-nullity constraint."""
    if sigma_size < 2:
        raise ValueError("Sigma contains at least p and the archimedean place")
    d0 = n * n - 1
    sigma = ("p", "infinity") + tuple(f"ell{i}" for i in range(1, sigma_size - 1))
    if s_minus_sigma_nonempty is None:
        s_minus_sigma_nonempty = rng.random() < 0.5
    while True:
        locals_ = {}
        for v in sigma:
            kind = place_kind(v)
            h0 = rng.randint(0, 2)
            h2 = rng.randint(0, 2)
            if kind == "infinity":
                h0 = rng.randint(1, d0)
                h1 = h2
            elif kind == "p":
                h1 = h0 + h2 + d0
            else:
                h1 = h0 + h2
            locals_[v] = CohomologyReport(h0, h1, h2, method="ep-derived")
        h0_inf = locals_["infinity"].h0
        sum_h1 = sum(r.h1 for r in locals_.values())
        sum_h2 = sum(r.h2 for r in locals_.values())
        gh0 = rng.randint(0, 1)
        gh2 = rng.randint(sum_h2 if s_minus_sigma_nonempty else 0, sum_h2 + 3)
        gh1 = gh0 + gh2 + d0 - h0_inf
        if gh1 < 0:
            continue
        g = CohomologyReport(gh0, gh1, gh2, method="ep-derived")
        r1 = rng.randint(max(0, gh1 - sum_h1), gh1)
        lo2 = max(0, gh2 - sum_h2)
        r2 = lo2 if s_minus_sigma_nonempty else rng.randint(lo2, gh2)
        framed_global = gh1 - gh0 - 1 + sigma_size * n * n
        framed_locals = sum(r.h1 - r.h0 - 1 + n * n for r in locals_.values())
        lo = max(0, framed_global - framed_locals)
        if lo > framed_global:
            continue
        framed_r = rng.randint(lo, framed_global)
        return ThetaLedger(sigma, g, locals_, r1, r2, framed_r, n=n, s_minus_sigma_nonempty=s_minus_sigma_nonempty)


# -- gluing -------------------------------------------------------------------------------

@dataclass(frozen=True)
class GlueResult:
    presentation: RingPresentation
    local_dim_bound: int
    dim_bound: int
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "vars": len(self.presentation.varnames),
            "relations": len(self.presentation.relations),
            "unspecified_relations": self.presentation.unspecified_relations,
            "local_dim_bound": self.local_dim_bound,
            "dim_bound": self.dim_bound,
            **self.details,
        }


def glue_presentation(locals_: Sequence[RingPresentation], r: int, t: int,
                      local_dims: Sequence[int] | None = None, prefixes: Sequence[str] | None = None) -> GlueResult:
    """Completed tensor product of the local rings, r fresh variables, t relation slots.

    ``local_dims`` are Krull dimensions after inverting p; each local ring is flat
    over the base so contributes one more, and the tensor product over the base
    drops one per extra factor. Without them each local presentation's own bound
    1 + #vars - #relations is used.
    """
    if r < 0 or t < 0:
        raise ValueError("r and t must be nonnegative")
    if prefixes is None and len(locals_) > 1:
        prefixes = [f"v{i}_" for i in range(len(locals_))]
    pres = compose(locals_, prefixes) if len(locals_) > 1 else locals_[0]
    if r:
        pres = pres.add_vars(r, "x")
    if t:
        pres = pres.add_unspecified(t)
    if local_dims is not None:
        loc = sum(local_dims) + 1
    else:
        loc = sum(P.krull_lower_bound() - 1 for P in locals_) + 1
    return GlueResult(pres, loc, loc + r - t, {"r": r, "t": t})


@dataclass(frozen=True)
class GeometricBounds:
    sigma_size: int
    delta: int
    local: int
    framed: int
    unframed: int

    def to_json(self) -> dict:
        return {"sigma_size": self.sigma_size, "delta": self.delta, "R_loc": self.local,
                "framed": self.framed, "unframed": self.unframed}


def geometric_bounds(sigma: Sequence[str], delta: int, n: int = 2) -> GeometricBounds:
    """Lower bounds on Krull dimensions for geometric local conditions.

    R_loc from the table, framed global ring via r - t = |Sigma| - 1 - delta,
    and the unframed ring by removing the n^2 |Sigma| - 1 framing variables.
    """
    kinds = [place_kind(v) for v in sigma]
    S = len(sigma)
    loc = sum(GEOMETRIC_TABLE[k] for k in kinds) + 1
    framed = loc + (S - 1 - delta)
    unframed = framed - (n * n * S - 1)
    return GeometricBounds(S, delta, loc, framed, unframed)
