import random

import pytest
from hypothesis import given, settings, strategies as st

from deformary.acceptance import bundle_for, zero_ext
from deformary.ring import FieldSpec, GaloisRing
from deformary.series import SeriesRing
from deformary.universal import (BlockLayout, BundleRep, InputBundle, build_universal, eliminate_centralizer,
                                 hypotheses_check, proxy_rep, schoof_example, tangent_dim_check, var_name)

Z4 = GaloisRing(FieldSpec(2), 2)


def n_formula(es):
    n = sum(es)
    return 4 * n * n - sum(e * e for e in es)


def test_layout():
    lay = BlockLayout((2, 1))
    assert lay.h == 6 and lay.offsets == (0, 4, 6)
    # 1-based (2,2), (2,4), (4,2), (4,4) and (6,6)
    assert lay.designated() == [(1, 1), (1, 3), (3, 1), (3, 3), (5, 5)]
    assert [lay.column_block(v) for v in range(6)] == [(0, 0), (0, 0), (0, 1), (0, 1), (1, 0), (1, 0)]
    assert var_name(3, 12) == "x3_12"


@pytest.mark.parametrize("es", [(1,), (2,), (1, 1), (2, 1)])
def test_universal_bundles(es):
    b = bundle_for(es)
    assert b.N == n_formula(es)
    assert hypotheses_check(b, zero_ext(b)).ok
    res = build_universal(b)
    assert all(res.checks.values()), res.checks
    assert len(res.presentation.varnames) == n_formula(es)
    assert not res.presentation.relations
    tan = tangent_dim_check(b)
    assert tan.ok and tan.ad_invariants == sum(e * e for e in es)


@pytest.mark.parametrize("g,count", [(1, 3), (2, 12), (3, 27)])
def test_schoof(g, count):
    rep = schoof_example(g)
    assert rep.ok and rep.var_count == count


def test_hypotheses_failures():
    br = proxy_rep()
    twice = InputBundle((br, br))
    rep = hypotheses_check(twice, zero_ext(twice))
    assert not rep.ok and any("Hom(rho_0, rho_1)" in f for f in rep.failures)
    bare = InputBundle((BundleRep(br.residual, br.lift, 1, None),))
    assert any("flat certificate" in f for f in hypotheses_check(bare, {(0, 0): 0}).failures)
    assert any("not supplied" in f for f in hypotheses_check(InputBundle((br,)), None).failures)
    assert any("nonzero" in f for f in hypotheses_check(InputBundle((br,)), {(0, 0): 1}).failures)


def test_bundle_validation():
    br = proxy_rep()
    with pytest.raises(ValueError):
        InputBundle(())
    with pytest.raises(ValueError):
        InputBundle((BundleRep(br.residual, br.lift, 0, br.certificate),))
    with pytest.raises(ValueError):
        InputBundle((br, proxy_rep(l=3, variant=2)))


def test_zero_matrix_gives_zero_y():
    lay = BlockLayout((2,))
    R = SeriesRing(Z4, ("x",), 3)
    M = [[R.zero()] * 4 for _ in range(4)]
    rep = eliminate_centralizer(M, lay)
    assert all(y.is_zero() for row in rep.Y for y in row)
    assert rep.designated_all_zero


def _naive_product_minus_one(M, Y):
    h = len(M)
    R = M[0][0].parent
    one = R.one()
    I = [[one if u == v else R.zero() for v in range(h)] for u in range(h)]
    A = [[I[u][v] + M[u][v] for v in range(h)] for u in range(h)]
    B = [[I[u][v] + Y[u][v] for v in range(h)] for u in range(h)]
    out = []
    for u in range(h):
        row = []
        for v in range(h):
            acc = R.zero()
            for k in range(h):
                acc = acc + A[u][k] * B[k][v]
            row.append(acc - I[u][v])
        out.append(row)
    return out


def _random_matrix(R, h, rng):
    gens = R.gens()
    def entry():
        s = R.zero()
        for g in gens:
            s = s + g * rng.randrange(4)
        a, b = rng.choice(gens), rng.choice(gens)
        return s + a * b * rng.randrange(4)
    return [[entry() for _ in range(h)] for _ in range(h)]


@settings(max_examples=25)
@given(st.sampled_from([(1,), (2,), (1, 1)]), st.integers(0, 10 ** 6))
def test_elimination_random(es, seed):
    lay = BlockLayout(es)
    R = SeriesRing(Z4, ("s", "t", "w"), 4)
    M = _random_matrix(R, lay.h, random.Random(seed))
    rep = eliminate_centralizer(M, lay)
    prod = _naive_product_minus_one(M, rep.Y)
    assert prod == rep.Mtilde
    assert all(prod[u][v].is_zero() for u, v in lay.designated())
    assert rep.y_shape_ok and rep.closed_form_agrees


def test_scalar_block_neumann():
    # e = 1: a = -x + x^2 - x^3 below total degree 4
    R = SeriesRing(Z4, ("x",), 4)
    x = R.gen("x")
    M = [[R.zero(), R.zero()], [R.zero(), x]]
    rep = eliminate_centralizer(M, BlockLayout((1,)))
    assert rep.A[0][0][0] == -x + x * x - x * x * x
    assert rep.a_display["blocks"][0]["all_agree"]


def test_single_block_display_mismatch():
    # with 1 + Y = Id / (1 + x), Mtilde = (Id + M) / (1 + x) - Id; only (1,1) differs from M / (1 + x)
    res = build_universal(bundle_for((1,)))
    xd = res.elimination.x_display
    assert xd["entries"] == 3 and xd["agree"] == 2
    assert xd["examples"] == [{"entry": [1, 1], "degree": 1}]
