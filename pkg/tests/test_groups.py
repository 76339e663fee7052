import pytest
from hypothesis import given, strategies as st

from deformary.errors import ReductionMismatch, UnknownMark
from deformary.groups import (Character, GroupRep, MarkedGroup, ad, ad0, conjugate, det, direct_sum, intertwiner_space,
                              invert_word, lift_equivalent, parse_word, rep_construct, rep_verify, twist)
from deformary.ring import FieldSpec, GaloisRing, Matrix
from deformary.universal import proxy_group, proxy_rep

F2 = GaloisRing(FieldSpec(2), 1)
Z8 = GaloisRing(FieldSpec(2), 3)


def test_parse_word_forms():
    assert parse_word("g h^-1 g^3") == (("g", 1), ("h", -1), ("g", 3))
    assert parse_word(["g", "h^0"]) == (("g", 1),)
    assert parse_word("") == ()
    assert invert_word(parse_word("g h^2")) == (("h", -2), ("g", -1))
    with pytest.raises(ValueError):
        parse_word("g^x")


def test_marks():
    G = MarkedGroup(("a", "b"), (), {"inf": "a", "inertia": ["a b", ["b^2"]]})
    assert G.mark("inf") == ((("a", 1),),)
    assert G.mark("inertia") == ((("a", 1), ("b", 1)), (("b", 2),))
    with pytest.raises(UnknownMark):
        G.mark("ell")
    with pytest.raises(ValueError):
        MarkedGroup(("a",), ("b",))


def test_proxy_representations_are_valid():
    for variant in (1, 2):
        br = proxy_rep(4, variant)
        assert rep_verify(br.residual).ok and rep_verify(br.lift).ok
        assert br.lift.reduce().images == br.residual.images


def test_rep_verify_reports_failing_relation():
    G = MarkedGroup(("g",), ("g^2",))
    r = GroupRep.from_lists(G, F2, {"g": [[1, 1], [0, 1]]})
    assert rep_verify(r).ok
    bad = GroupRep.from_lists(MarkedGroup(("g",), ("g",)), F2, {"g": [[1, 1], [0, 1]]})
    chk = rep_verify(bad)
    assert not chk.ok and chk.to_json()["relation"] == ["g"]
    sing = GroupRep.from_lists(G, F2, {"g": [[1, 1], [1, 1]]})
    assert rep_verify(sing).reason == "image not invertible"


def test_hom_dimensions_of_proxies():
    r1, r2 = proxy_rep(4, 1).residual, proxy_rep(4, 2).residual
    assert intertwiner_space(r1, r1)[0] == 1
    assert intertwiner_space(r1, r2)[0] == 0
    assert intertwiner_space(r2, r2)[0] == 1
    s = direct_sum([r1, r1, r2])
    assert intertwiner_space(s, s)[0] == 5


def test_intertwiner_basis_commutes():
    r = direct_sum([proxy_rep(4, 1).residual] * 2)
    d, basis = intertwiner_space(r, r)
    assert d == 4
    for X in basis:
        for g, m in r.images.items():
            assert m @ X == X @ m


def test_adjoint_dimensions_and_homomorphism():
    r = proxy_rep(4, 2).lift
    A, A0 = ad(r), ad0(r)
    assert (A.dim, A0.dim) == (4, 3)
    assert rep_verify(A).ok and rep_verify(A0).ok
    assert rep_construct("ad", r).dim == 4


def test_trivial_action_on_scalars():
    r = proxy_rep(4, 1).residual
    A = ad(r)
    ident = [1, 0, 0, 1]
    for m in A.images.values():
        v = [sum(int(m[i, j]) * ident[j] for j in range(4)) % 2 for i in range(4)]
        assert v == ident


def test_det_and_twist():
    r = proxy_rep(4, 1).lift
    d = det(r)
    assert int(d.values["c"]) == Z8.with_precision(4).N - 1
    chi = Character(r.group, r.ring, {"c": -1, "u": 1, "f": 1})
    t = twist(r, chi)
    assert t.images["c"] == r.images["c"].scale(-1)
    assert (chi * chi).values["c"] == r.ring.one()
    assert chi.is_valid()


@given(st.integers(0, 7), st.integers(0, 7), st.integers(0, 7), st.integers(0, 7))
def test_lift_equivalence_finds_witness(a, b, c, d):
    """Conjugating by Id + 2X is detected and the witness conjugates back."""
    G = proxy_group()
    r1 = GroupRep.from_lists(G, Z8, {"c": [[0, 1], [1, 0]], "u": [[1, 1], [0, 1]], "f": [[1, 0], [0, 1]]})
    M = Matrix.from_rows(Z8, [[1 + 2 * a, 2 * b], [2 * c, 1 + 2 * d]])
    r2 = conjugate(r1, M)
    W = lift_equivalent(r1, r2)
    assert W is not None
    assert all(W @ r1.images[g] @ W.inverse() == r2.images[g] for g in G.generators)


def test_lift_equivalence_rejects():
    G = proxy_group()
    base = {"c": [[0, 1], [1, 0]], "u": [[1, 1], [0, 1]], "f": [[1, 0], [0, 1]]}
    r1 = GroupRep.from_lists(G, Z8, base)
    r2 = GroupRep.from_lists(G, Z8, {**base, "f": [[3, 0], [0, 3]]})
    assert lift_equivalent(r1, r2) is None  # scalar 3 is central, no conjugate equals it
    r3 = GroupRep.from_lists(G, Z8, {**base, "f": [[0, 1], [1, 1]]})
    with pytest.raises(ReductionMismatch):
        lift_equivalent(r1, r3)


def test_lift_equivalence_galois_ring():
    R = GaloisRing(FieldSpec(2, 2), 2)
    G = MarkedGroup(("g",), ())
    z = R.gen()
    r1 = GroupRep.from_lists(G, R, {"g": [[z, 1], [0, z * z]]})
    M = Matrix.from_rows(R, [[1, 2], [2 * z, 1]])
    assert lift_equivalent(r1, conjugate(r1, M)) is not None
