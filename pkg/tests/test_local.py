import pytest

from deformary.errors import CaseCharMismatch, InvalidCertificate, SpecMismatch
from deformary.fontaine_laffaille import FLModule
from deformary.groups import Character, GroupRep, MarkedGroup
from deformary.local import (chi_line_find, flat_certificate_check, geometric_table_check, inf_ring_compute,
                             parity_det_check, place_kind, steinberg_check)
from deformary.ring import FieldSpec, GaloisRing
from deformary.universal import proxy_group, proxy_rep

F2 = GaloisRing(FieldSpec(2), 1)
F3 = GaloisRing(FieldSpec(3), 1)
Z16 = GaloisRing(FieldSpec(2), 4)


def rep(ring, **images):
    return GroupRep.from_lists(proxy_group(), ring, images)


def test_steinberg():
    assert steinberg_check(proxy_rep(4).lift).verdict
    bad = rep(Z16, c=[[0, 1], [1, 0]], u=[[3, 0], [0, 1]], f=[[1, 0], [0, 1]])
    res = steinberg_check(bad)
    assert not res.verdict and res.to_json()["witness"] is not None


def test_odd_and_fixed_det():
    assert parity_det_check(proxy_rep(4).lift).verdict
    even = rep(Z16, c=[[1, 0], [0, 1]], u=[[1, 1], [0, 1]], f=[[1, 0], [0, 1]])
    assert not parity_det_check(even).verdict
    # det -1 but not an involution
    twisted = rep(Z16, c=[[1, 1], [0, -1]], u=[[1, 1], [0, 1]], f=[[1, 0], [0, 1]])
    assert parity_det_check(twisted).verdict
    r = proxy_rep(4).lift
    chi = Character(r.group, r.ring, {"c": -1, "u": 1, "f": 1})
    assert parity_det_check(r, chi, "fixed-det").verdict
    assert not parity_det_check(r, Character.trivial(r.group, r.ring), "fixed-det").verdict


def test_chi_line_field_and_ring():
    for ring in (F2, Z16):
        r = rep(ring, c=[[1, 1], [0, -1]], u=[[1, 1], [0, 1]], f=[[1, 0], [0, 1]])
        line = chi_line_find(r, Character.trivial(r.group, ring))
        assert line is not None and line.unique
        assert [int(x) for x in line.vector] == [1, 0]
    r = rep(F2, c=[[1, 0], [0, 1]], u=[[1, 0], [0, 1]], f=[[1, 0], [0, 1]])
    line = chi_line_find(r, Character.trivial(r.group, F2))
    assert line is not None and not line.unique
    assert chi_line_find(proxy_rep(4).residual, Character.trivial(proxy_group(), F2)) is None


def test_chi_line_rejects_mismatch():
    r = proxy_rep(4).residual
    with pytest.raises(SpecMismatch):
        chi_line_find(r, Character.trivial(r.group, F3))


def test_flat_certificates():
    r = proxy_rep(4).residual
    ok = flat_certificate_check(r, FLModule.from_lists(F2, [[0, 1], [1, 0]]))
    assert ok.verdict and ok.details["connected"] and ok.details["ext1_dim"] == 2
    etale = flat_certificate_check(r, FLModule.from_lists(F2, [[1, 0], [0, 1]]))
    assert not etale.verdict and etale.warnings
    with pytest.raises(InvalidCertificate):
        flat_certificate_check(r, FLModule.from_lists(F2, [[0, 0], [0, 0]]))
    r3 = GroupRep.from_lists(MarkedGroup(("g",), ()), F3, {"g": [[1, 0], [0, 1]]})
    soft = flat_certificate_check(r3, FLModule.from_lists(F3, [[1, 0], [0, 1]]))
    assert soft.verdict and soft.warnings
    with pytest.raises(InvalidCertificate):
        flat_certificate_check(r3, FLModule.from_lists(F2, [[0, 1], [1, 0]]))


# M = B + [[a, b], [c, d]] with trace 0 gives d = -a - tr B; the relation is -(det M + 1).
#   B = Id (case 3) or diag(1, -1) (case 1):  -(-(1 + a)^2 - bc + 1) = 2a + a^2 + bc
#   B = [[1, 1], [0, 1]] (case 2):            2a + c + a^2 + bc
@pytest.mark.parametrize("case,p,relation,rank", [
    (1, 3, "2*a + a^2 + b*c", 1), (1, 5, "2*a + a^2 + b*c", 1),
    (2, 2, "2*a + c + a^2 + b*c", 1), (3, 2, "2*a + a^2 + b*c", 0),
])
def test_inf_ring(case, p, relation, rank):
    res = inf_ring_compute(case, p)
    assert res.relation.pretty() == relation
    assert res.presentation.varnames == ("a", "b", "c")
    assert res.jacobian_rank == rank
    assert res.presentation.krull_lower_bound() == 3
    assert res.warnings


def test_inf_ring_case_char():
    with pytest.raises(CaseCharMismatch):
        inf_ring_compute(1, 2)
    with pytest.raises(CaseCharMismatch):
        inf_ring_compute(3, 3)


def test_geometric_table():
    assert place_kind("p") == "p" and place_kind("infinity") == "infinity" and place_kind("ell7") == "finite"
    assert geometric_table_check("p", 4).matches
    assert geometric_table_check("ell", 3).matches
    assert not geometric_table_check("infinity", 3).matches
