import itertools

import pytest
from hypothesis import given, strategies as st

from deformary.errors import NonUnit, Singular, SpecMismatch
from deformary.ring import FieldSpec, GaloisRing, Matrix, field_nullspace, field_rank, kernel_dim

RINGS = [GaloisRing(FieldSpec(2), 1), GaloisRing(FieldSpec(3), 1), GaloisRing(FieldSpec(2, 2), 1),
         GaloisRing(FieldSpec(3, 2), 1), GaloisRing(FieldSpec(2), 3), GaloisRing(FieldSpec(2, 2), 2),
         GaloisRing(FieldSpec(5), 2)]


def elements(ring):
    return st.lists(st.integers(0, ring.N - 1), min_size=ring.n, max_size=ring.n).map(ring.element)


@st.composite
def ring_and_elems(draw, k=3):
    ring = draw(st.sampled_from(RINGS))
    return ring, [draw(elements(ring)) for _ in range(k)]


@given(ring_and_elems())
def test_ring_axioms(data):
    ring, (a, b, c) = data
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == ring.zero()
    assert a * ring.one() == a


@given(ring_and_elems(1))
def test_units_invert(data):
    ring, (a,) = data
    if a.is_unit():
        assert a * a.inverse() == ring.one()
    else:
        assert a.reduce().is_zero()
        with pytest.raises(NonUnit):
            a.inverse()


@pytest.mark.parametrize("p,n", [(2, 2), (2, 3), (3, 2), (5, 2)])
def test_unit_group_orders(p, n):
    k = GaloisRing(FieldSpec(p, n), 1)
    orders = [u.multiplicative_order() for u in k.units()]
    q = p ** n
    assert len(orders) == q - 1
    assert all((q - 1) % o == 0 for o in orders)
    assert max(orders) == q - 1  # cyclic


def test_frobenius_fixes_prime_field():
    k = GaloisRing(FieldSpec(3, 2), 1)
    fixed = [x for x in k.elements() if x.frobenius() == x]
    assert len(fixed) == 3


def test_reducible_modulus_rejected():
    with pytest.raises(ValueError):
        FieldSpec(2, 2, (1, 0, 1))  # x^2 + 1 = (x + 1)^2 over F_2
    with pytest.raises(ValueError):
        FieldSpec(4)


def test_mixed_rings_rejected():
    a = GaloisRing(FieldSpec(2), 2).one()
    with pytest.raises(SpecMismatch):
        GaloisRing(FieldSpec(2), 3).element(a)


def test_divide_p_power():
    R = GaloisRing(FieldSpec(2), 4)
    q = R.element(12).divide_p_power(2)
    assert q.ring == R.with_precision(2) and int(q) == 3
    assert R.element(12).valuation() == 2
    with pytest.raises(ValueError):
        R.element(3).divide_p_power(1)


@st.composite
def square_matrices(draw, size=3):
    ring = draw(st.sampled_from(RINGS))
    rows = [[draw(elements(ring)) for _ in range(size)] for _ in range(size)]
    return Matrix.from_rows(ring, rows)


@given(square_matrices())
def test_inverse_roundtrip(m):
    if m.det().is_unit():
        assert (m @ m.inverse()).is_identity()
        assert (m.inverse() @ m).is_identity()
    else:
        with pytest.raises(Singular):
            m.inverse()


@given(square_matrices(), square_matrices())
def test_det_multiplicative(a, b):
    if a.ring != b.ring:
        return
    assert (a @ b).det() == a.det() * b.det()


def test_kernel_dim_f2_exhaustive():
    """Every 3 x 3 matrix over F_2 against direct enumeration of its null space."""
    F2 = GaloisRing(FieldSpec(2), 1)
    vectors = list(itertools.product(range(2), repeat=3))
    for entries in itertools.product(range(2), repeat=9):
        rows = [entries[0:3], entries[3:6], entries[6:9]]
        count = sum(all(sum(r[j] * v[j] for j in range(3)) % 2 == 0 for r in rows) for v in vectors)
        assert 2 ** kernel_dim(Matrix.from_rows(F2, rows)).size == count


@pytest.mark.parametrize("p,l", [(2, 2), (2, 3), (3, 2)])
def test_howell_kernel_cardinality_small(p, l):
    """log_p of the kernel size over Z/p^l against enumeration for random 2 x 2 matrices."""
    import random
    rng = random.Random(p * 10 + l)
    R = GaloisRing(FieldSpec(p), l)
    N = p ** l
    for _ in range(40):
        rows = [[rng.randrange(N) for _ in range(2)] for _ in range(2)]
        count = sum(1 for x in range(N) for y in range(N)
                    if all((r[0] * x + r[1] * y) % N == 0 for r in rows))
        res = kernel_dim(Matrix.from_rows(R, rows), "howell")
        assert p ** res.size == count
        for v in res.basis:
            assert all((r[0] * int(v[0]) + r[1] * int(v[1])) % N == 0 for r in rows)


def test_howell_over_galois_ring():
    R = GaloisRing(FieldSpec(2, 2), 2)
    m = Matrix.from_rows(R, [[2, 0], [0, 0]])
    # x arbitrary with 2x = 0 (4 choices), y arbitrary (16): 64 = 2^6
    assert kernel_dim(m, "howell").size == 6


def test_field_rank_and_nullspace():
    k = GaloisRing(FieldSpec(3, 2), 1)
    z = k.gen()
    rows = [[k.one(), z], [z, z * z]]
    assert field_rank(rows, 2, k) == 1
    (v,) = field_nullspace(rows, 2, k)
    assert all((r[0] * v[0] + r[1] * v[1]).is_zero() for r in rows)


def test_element_json_and_repr():
    R = GaloisRing(FieldSpec(3, 2), 2)
    x = R.element([1, 1])
    assert x.to_json() == {"p": 3, "n": 2, "l": 2, "coeffs": [1, 1]}
    assert repr(x) == "(1 + 1*z)"
