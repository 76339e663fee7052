import pytest

from deformary.finite import FiniteGroup, catalogue, cyclic, direct_product, homomorphisms, table_rep
from deformary.groups import rep_verify

CAT = catalogue()


def test_catalogue_size_and_orders():
    assert len(CAT) == 42
    counts = {}
    for G in CAT:
        counts[G.order] = counts.get(G.order, 0) + 1
    # numbers of groups of order 1..16
    assert counts == {1: 1, 2: 1, 3: 1, 4: 2, 5: 1, 6: 2, 7: 1, 8: 5, 9: 2, 10: 2,
                      11: 1, 12: 5, 13: 1, 14: 2, 15: 1, 16: 14}


@pytest.mark.parametrize("G", CAT, ids=lambda G: G.name)
def test_group_axioms(G):
    assert G.is_associative()
    for a in range(G.order):
        assert G.mul(a, G.inv(a)) == 0
        assert G.mul(0, a) == a == G.mul(a, 0)


def test_pairwise_non_isomorphic():
    inv = [G.invariants() for G in CAT]
    assert len(set(inv)) == len(inv)


def test_known_structure():
    by = {G.name: G for G in CAT}
    assert len(by["S3"].center()) == 1
    assert len(by["A4"].derived_subgroup()) == 4
    assert len(by["Q8"].center()) == 2
    assert not by["D8"].is_abelian() and by["C4xC4"].is_abelian()
    assert sorted(by["Q8"].element_order(a) for a in range(8)).count(4) == 6


def test_presentation_holds():
    G = direct_product(cyclic(2), cyclic(3))
    P = G.presentation()
    assert len(P.generators) == G.order - 1


@pytest.mark.parametrize("name,d,p,count", [("C2", 1, 3, 2), ("C3", 1, 2, 1), ("S3", 2, 2, 3)])
def test_homomorphism_counts(name, d, p, count):
    G = {g.name: g for g in CAT}[name]
    homs = homomorphisms(G, d, p)
    assert len(homs) == count
    for h in homs:
        assert rep_verify(table_rep(G, h, d, p)).ok


def test_bad_table_rejected():
    with pytest.raises(ValueError):
        FiniteGroup("bad", ((0, 1), (1, 1)))
    with pytest.raises(ValueError):
        FiniteGroup("bad", ((0, 1), (0, 1)))
