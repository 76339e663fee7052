import pytest

from deformary.cohomology import (CohomologyReport, EPLedger, TableModule, c_ep, duality_identity_check, ep_solve,
                                  h01_fox, h1_bar, h2_bar, obstruction_class, tg_from_definition, tg_kernel_dim,
                                  tg_matrix, two_cocycle_report)
from deformary.errors import BadOrder, GroupTooLarge, Inconsistent, NotACocycle, NotAHomomorphism, SpecMismatch, Underdetermined
from deformary.finite import catalogue, cyclic, homomorphisms, table_rep
from deformary.groups import GroupRep, MarkedGroup
from deformary.ring import FieldSpec, GaloisRing, Matrix

BY = {G.name: G for G in catalogue()}
F2 = GaloisRing(FieldSpec(2), 1)
F3 = GaloisRing(FieldSpec(3), 1)


@pytest.mark.parametrize("name", ["C2", "C4", "C2xC2", "S3", "D8", "Q8", "C6", "A4"])
def test_fox_matches_bar(name):
    G = BY[name]
    for p in (2, 3):
        for d in (1, 2):
            for images in homomorphisms(G, d, p):
                fox = h01_fox(table_rep(G, images, d, p))
                bar = h1_bar(TableModule.from_images(G, images, d, p))
                assert (fox.h0, fox.h1) == (bar.h0, bar.h1)


@pytest.mark.parametrize("name,p,h1,h2", [
    ("C2", 2, 1, 1), ("C3", 3, 1, 1), ("C2", 3, 0, 0), ("C4", 2, 1, 1),
    ("C2xC2", 2, 2, 3), ("C2xC2xC2", 2, 3, 6), ("Q8", 2, 2, 2), ("D8", 2, 2, 3), ("S3", 3, 0, 0),
])
def test_trivial_coefficients_known_values(name, p, h1, h2):
    """Textbook mod-p cohomology of small groups with trivial coefficients."""
    rep = h2_bar(TableModule.trivial(BY[name], p))
    assert (rep.h0, rep.h1, rep.h2) == (1, h1, h2)


def test_h2_scales_with_dimension():
    G = BY["C2xC2"]
    assert h2_bar(TableModule.trivial(G, 2, 2)).h2 == 2 * h2_bar(TableModule.trivial(G, 2)).h2


def test_h2_refuses_large_groups():
    with pytest.raises(GroupTooLarge):
        h2_bar(TableModule.trivial(cyclic(40), 2), max_order=32)


def test_fox_one_relator_and_free():
    G = MarkedGroup(("g",), ("g^3",))
    assert h01_fox(GroupRep.from_lists(G, F3, {"g": [[1]]})).h1 == 1
    assert h01_fox(GroupRep.from_lists(G, F2, {"g": [[1]]})).h1 == 0
    free = MarkedGroup(("a", "b"), ())
    rep = h01_fox(GroupRep.from_lists(free, F3, {"a": [[1]], "b": [[1]]}))
    assert (rep.h0, rep.h1) == (1, 2)


def test_fox_over_extension_field_counts_k_dimension():
    k = GaloisRing(FieldSpec(2, 2), 1)
    G = MarkedGroup(("g",), ("g^2",))
    assert h01_fox(GroupRep.from_lists(G, k, {"g": [[1]]})).h1 == 1


def test_report_validation():
    with pytest.raises(Inconsistent):
        CohomologyReport(-1, 0)
    with pytest.raises(Inconsistent):
        CohomologyReport(0, 2, z1=3, b1=0)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_tg_display_matches_definition(p):
    k = GaloisRing(FieldSpec(p, 2), 1)
    gens = [a for a in k.units() if a.multiplicative_order() == p * p - 1]
    for a in gens:
        assert tg_matrix(p, a) == tg_from_definition(p, a)


def test_tg_kernel_values():
    k9 = GaloisRing(FieldSpec(3, 2), 1)
    gens = [a for a in k9.units() if a.multiplicative_order() == 8]
    assert len(gens) == 4 and all(tg_kernel_dim(3, a) == 0 for a in gens)
    k4 = GaloisRing(FieldSpec(2, 2), 1)
    gens = [a for a in k4.units() if a.multiplicative_order() == 3]
    assert all(tg_kernel_dim(2, a) == 2 for a in gens)


def test_tg_rejects_bad_alpha():
    k9 = GaloisRing(FieldSpec(3, 2), 1)
    with pytest.raises(BadOrder):
        tg_matrix(3, k9.element(2))
    with pytest.raises(SpecMismatch):
        tg_matrix(3, F3.element(2))


def test_ep_values():
    assert ep_solve(EPLedger("p", {"dim": 4}), h0=1, h2=0).h1 == 5
    assert c_ep(EPLedger("p", {"dim": 3})) == -3
    assert c_ep(EPLedger("finite", {"dim": 3})) == 0
    assert c_ep(EPLedger("infinity", {"dim": 3}), h0=2) == 2
    assert c_ep(EPLedger("global", {"dim": 3, "h0_inf": 1})) == -2
    assert ep_solve(EPLedger("global", {"dim": 3, "h0_inf": 1}), h1=5, h2=2).h0 == 1
    assert ep_solve(EPLedger("finite", {"dim": 3}), h0=1, h1=1).h2 == 0


def test_ep_errors():
    with pytest.raises(Underdetermined):
        ep_solve(EPLedger("p", {"dim": 3}), h0=1)
    with pytest.raises(Inconsistent):
        ep_solve(EPLedger("p", {"dim": 3}), 1, 1, 1)
    with pytest.raises(Underdetermined):
        ep_solve(EPLedger("infinity", {"dim": 3}), h1=1)
    with pytest.raises(Inconsistent):
        ep_solve(EPLedger("infinity", {"dim": 3}), 1, 1, 2)
    assert ep_solve(EPLedger("infinity", {"dim": 3}), h0=2, h2=0).h1 == 0
    with pytest.raises(ValueError):
        EPLedger("moon", {"dim": 1})


def test_duality_identity():
    assert duality_identity_check(1, 0, 1)
    assert not duality_identity_check(1, 1, 1)


def _c2_lift(entries, l=2):
    R = GaloisRing(FieldSpec(2), l)
    return [Matrix.identity(R, 2), Matrix.from_rows(R, entries)]


def test_obstruction_of_liftable_rep_is_coboundary():
    G = cyclic(2)
    rep = obstruction_class(G, _c2_lift([[1, 1], [0, 1]]))  # squares to [[1,2],[0,1]] mod 4
    assert not rep.trivial and rep.coboundary
    # the primitive corrects the lift: rho'(g) = (1 + 2 f(g)) rho(g) squares to Id
    assert obstruction_class(G, _c2_lift([[1, 1], [0, 3]])).trivial


def test_obstruction_requires_homomorphism_mod_lower_power():
    with pytest.raises(NotAHomomorphism):
        obstruction_class(cyclic(2), _c2_lift([[0, 1], [1, 1]]))


def test_cocycle_identity_checked():
    G = cyclic(2)
    rb = [Matrix.identity(F2, 1)] * 2
    one, zero = Matrix.identity(F2, 1), Matrix.zero(F2, 1)
    # C(1,1) = 1, else 0: the nontrivial class in H^2(C2, F2)
    C = {(0, 0): zero, (0, 1): zero, (1, 0): zero, (1, 1): one}
    rep = two_cocycle_report(G, rb, C)
    assert not rep.coboundary
    with pytest.raises(NotACocycle):
        two_cocycle_report(G, rb, {(0, 0): one, (0, 1): zero, (1, 0): zero, (1, 1): zero})
