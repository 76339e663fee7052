import dataclasses
import random

import pytest
from hypothesis import given, strategies as st

from deformary.cohomology import CohomologyReport
from deformary.errors import InconsistentLedger
from deformary.local_global import (ThetaLedger, geometric_bounds, glue_presentation, ltg_bookkeeping,
                                    random_consistent_ledger)
from deformary.local import inf_ring_compute
from deformary.ring import FieldSpec, GaloisRing
from deformary.series import RingPresentation


@given(st.integers(0, 10 ** 6), st.integers(2, 6), st.booleans())
def test_identity_on_random_ledgers(seed, size, nonempty):
    led = random_consistent_ledger(random.Random(seed), size, s_minus_sigma_nonempty=nonempty)
    rep = ltg_bookkeeping(led)
    assert rep.ok
    assert rep.identities["r - t + delta"] == size - 1
    assert rep.derived["framed_aux_vars"] == 4 * size - 1
    if nonempty:
        assert rep.derived["delta"] == 0


def _ledger(**kw):
    base = dict(
        sigma=("p", "infinity"),
        global_=CohomologyReport(0, 3, 1),
        locals={"p": CohomologyReport(0, 3, 0), "infinity": CohomologyReport(1, 0, 0)},
        r1=1, r2=1, framed_r=5,
    )
    base.update(kw)
    return ThetaLedger(**base)


def test_hand_ledger():
    # global: 0 - 3 + 1 = -3 + 1 (h0_inf = 1); p: 0 - 3 + 0 = -3; infinity: h1 = h2
    rep = ltg_bookkeeping(_ledger())
    assert rep.ok
    assert rep.derived["t1"] == 1 - 3 + 3
    assert rep.derived["delta"] == 1 - 1 + 0
    assert ltg_bookkeeping(_ledger(s_minus_sigma_nonempty=True)).ok


@pytest.mark.parametrize("kw", [
    {"sigma": ("p", "ell")},
    {"locals": {"p": CohomologyReport(0, 3, 0)}},
    {"global_": CohomologyReport(0, 4, 1)},
    {"locals": {"p": CohomologyReport(0, 2, 0), "infinity": CohomologyReport(1, 0, 0)}},
    {"r1": 9},
    {"t1": 0},
    {"delta": 5},
])
def test_inconsistent_ledgers(kw):
    with pytest.raises(InconsistentLedger):
        ltg_bookkeeping(_ledger(**kw))


def test_nonempty_complement_forces_delta_zero():
    rng = random.Random(0)
    for _ in range(200):
        led = random_consistent_ledger(rng, 3, s_minus_sigma_nonempty=False)
        if ltg_bookkeeping(led).derived["delta"] > 0:
            break
    else:
        pytest.fail("no ledger with positive delta generated")
    with pytest.raises(InconsistentLedger):
        ltg_bookkeeping(dataclasses.replace(led, s_minus_sigma_nonempty=True))


@pytest.mark.parametrize("size", [2, 3, 4, 5])
@pytest.mark.parametrize("delta", [0, 1, 2])
def test_geometric_bounds(size, delta):
    sigma = ["p", "infinity"] + [f"ell{i}" for i in range(size - 2)]
    gb = geometric_bounds(sigma, delta)
    assert gb.local == 3 * size + 1
    assert gb.framed == 4 * size - delta
    assert gb.unframed == 1 - delta


def test_glue_with_real_archimedean_ring():
    W = GaloisRing(FieldSpec(2), 4)
    inf = inf_ring_compute(3).presentation
    p_ring = RingPresentation.power_series(W, ("s1", "s2", "s3", "s4"))
    ell = RingPresentation.power_series(W, ("t1", "t2", "t3"))
    res = glue_presentation([p_ring, inf, ell], r=2, t=0)
    assert res.local_dim_bound == 4 + 2 + 3 + 1
    assert res.dim_bound == 12
    assert len(res.presentation.varnames) == 12
    assert res.presentation.krull_lower_bound() == 12


def test_glue_rejects_negative():
    W = GaloisRing(FieldSpec(2), 4)
    with pytest.raises(ValueError):
        glue_presentation([RingPresentation.power_series(W, ("x",))], -1, 0)
