"""The compiled and pure-Python kernels must agree bit for bit."""

import random

import pytest
from hypothesis import given, strategies as st

from deformary import kernels
from deformary._kernels_py import fl_orbit_sizes as py_orbits, howell_form as py_howell

BACKENDS = kernels.backends()
needs_cython = pytest.mark.skipif("cython" not in BACKENDS, reason="extension not built")


def test_backend_selected():
    assert kernels.BACKEND in BACKENDS


@needs_cython
@given(st.sampled_from([(2, 1), (2, 3), (3, 2), (5, 1), (2, 5)]), st.integers(1, 5), st.integers(1, 5), st.randoms())
def test_howell_agrees(pl, m, n, rnd):
    p, l = pl
    N = p ** l
    rows = [[rnd.randrange(N) for _ in range(n)] for _ in range(m)]
    assert BACKENDS["cython"].howell_form([r[:] for r in rows], p, l) == py_howell([r[:] for r in rows], p, l)


@needs_cython
@pytest.mark.parametrize("p,l", [(2, 2), (3, 2), (2, 3)])
def test_orbits_agree(p, l):
    rng = random.Random(p + l)
    for _ in range(6):
        xm = tuple(rng.randrange(p) for _ in range(4))
        assert BACKENDS["cython"].fl_orbit_sizes(xm, p, l) == py_orbits(xm, p, l)


def test_howell_idempotent():
    rng = random.Random(1)
    for _ in range(30):
        rows = [[rng.randrange(8) for _ in range(3)] for _ in range(3)]
        h = py_howell(rows, 2, 3)
        assert py_howell([r[:] for r in h], 2, 3) == h


def test_orbit_sizes_partition_lifts():
    for p, l in [(2, 2), (3, 2), (2, 3)]:
        sizes = py_orbits((0, 1, 1, 0), p, l)
        assert sum(sizes) == p ** (4 * (l - 1))
