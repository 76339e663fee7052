import itertools

import pytest
from hypothesis import given, strategies as st

from deformary.errors import NonUnitConstantTerm, VariableCollision
from deformary.ring import FieldSpec, GaloisRing, Matrix
from deformary.series import (RingPresentation, SeriesRing, compose, formal_smoothness_check, series_mat_conjugate,
                              smat_const, smat_equal, smat_identity, smat_inv, smat_mul)

W = GaloisRing(FieldSpec(2), 4)
R = SeriesRing(W, ("a", "b", "c"), 3)


@st.composite
def series(draw, ring=R):
    terms = {}
    for d in range(ring.degree_bound):
        for e in itertools.product(range(d + 1), repeat=ring.nvars):
            if sum(e) == d and draw(st.booleans()):
                terms[e] = draw(st.integers(0, ring.ring.N - 1))
    return ring.from_terms(terms)


def naive_mul(f, g, D):
    """Schoolbook product of the term dictionaries, truncated at total degree D."""
    out = {}
    for (e1, c1), (e2, c2) in itertools.product(f.terms.items(), g.terms.items()):
        e = tuple(x + y for x, y in zip(e1, e2))
        if sum(e) < D:
            out[e] = out.get(e, 0) + int(c1) * int(c2)
    return {e: c % W.N for e, c in out.items() if c % W.N}


@given(series(), series(), series())
def test_ring_axioms(f, g, h):
    assert f + g == g + f
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h


@given(series(), series())
def test_product_matches_schoolbook(f, g):
    got = {e: int(c) for e, c in (f * g).terms.items()}
    assert got == naive_mul(f, g, R.degree_bound)


@given(series())
def test_inverse(f):
    if f.constant_term().is_unit():
        assert f * f.inverse() == R.one()
    else:
        with pytest.raises(NonUnitConstantTerm):
            f.inverse()


def test_geometric_series():
    a = R.gen("a")
    inv = (R.one() + a).inverse()
    assert inv == R.one() - a + a * a


def test_pretty_ordering():
    a, b, c = R.gens()
    f = b * c + a * a + a.scale(2)
    assert f.pretty() == "2*a + a^2 + b*c"
    assert (R.zero()).pretty() == "0"


def test_truncation():
    a = R.gen("a")
    assert (a ** 3).is_zero()
    assert (a * a).min_degree() == 2


def test_substitute_and_restrict():
    a, b, c = R.gens()
    f = a * b + c
    g = f.substitute({"c": a + b})
    assert g == a * b + a + b
    T = SeriesRing(W, ("a", "b"), 3)
    assert g.restrict(T).pretty() == "a + b + a*b"
    with pytest.raises(ValueError):
        f.restrict(T)


def test_reduce_mod_p():
    f = R.gen("a").scale(2) + R.gen("b")
    assert f.reduce().pretty() == "b"


def test_series_matrix_inverse():
    a, b, c = R.gens()
    m = [[R.one() + a, b], [c, R.const(3) + a * b]]
    assert smat_equal(smat_mul(m, smat_inv(m)), smat_identity(R, 2))


def test_conjugation_by_zero_is_identity():
    t = smat_const(R, Matrix.from_rows(W, [[0, 1], [1, 0]]))
    zero = [[R.zero()] * 2 for _ in range(2)]
    assert smat_equal(series_mat_conjugate(t, zero), t)


def test_presentation_bounds():
    P = RingPresentation.power_series(W, ("x", "y"))
    assert P.krull_dimension() == 3
    x = P.series_ring().gen("x")
    Q = P.quotient([x * x])
    assert Q.krull_lower_bound() == 2 and Q.krull_dimension() is None
    rep = formal_smoothness_check(Q)
    assert not rep.power_series and rep.jacobian_rank == 0
    assert formal_smoothness_check(P).power_series
    with pytest.raises(ValueError):
        P.quotient([P.series_ring().one()])


def test_compose_and_collisions():
    P = RingPresentation.power_series(W, ("x",))
    Q = RingPresentation.power_series(W, ("x", "y")).add_unspecified(1)
    with pytest.raises(VariableCollision):
        compose([P, Q])
    C = compose([P, Q], ["u_", "v_"])
    assert C.varnames == ("u_x", "v_x", "v_y")
    assert C.krull_lower_bound() == 3
    assert C.add_vars(2).nvars == 5
