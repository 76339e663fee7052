"""Acceptance gate: one PASS/FAIL line per criterion.

All comparisons are exact integer or string equality. The only tolerance is the
wall-clock limit on point counting, pinned below.
"""

import pytest

from deformary import acceptance as A

LIFT_SECONDS = 10.0          # per (p, l) case
SEED = 0
DEGREE = 3
PRECISION = 4

PINNED = {
    1: ("FL tangent dimension", {"ext1_dim": 2, "filtration_algebra_dim": 3, "endomorphisms": 1}),
    3: ("Euler-Poincare", {"h1": 5, "local_c_ep": {"p": -3, "finite": 0, "infinity": 1}}),
    5: ("Infinite place", {"relations": {"1": "2*a + a^2 + b*c", "2": "2*a + c + a^2 + b*c",
                                         "3": "2*a + a^2 + b*c"}}),
}
LIFT_ORBITS = {(2, 2): 4, (3, 2): 9, (2, 3): 16}          # p^(2(l-1))
UNIVERSAL_N = {(1,): 3, (2,): 12, (1, 1): 14, (2, 1): 31}  # 4n^2 - sum e^2
SCHOOF_N = {1: 3, 2: 12, 3: 27}                            # 3g^2


def _report(crit):
    print(f"\n{crit.line()}", flush=True)


def _check(crit, number, name):
    assert crit.number == number and crit.name == name
    _report(crit)
    assert crit.passed, crit.details


def test_constants_match_module():
    assert A.LIFT_TIME_LIMIT == LIFT_SECONDS
    assert dict(A.UNIVERSAL_CASES) == UNIVERSAL_N
    assert dict(A.SCHOOF_CASES) == SCHOOF_N


@pytest.mark.parametrize("number", [1, 3, 5])
def test_pinned_values(number, capsys):
    crit = {1: A.criterion_fl_ext, 3: A.criterion_ep, 5: A.criterion_inf_ring}[number]()
    name, want = PINNED[number]
    with capsys.disabled():
        _check(crit, number, name)
    for k, v in want.items():
        assert crit.details[k] == v


def test_fl_point_counting(capsys):
    crit = A.criterion_fl_count()
    with capsys.disabled():
        _check(crit, 2, "FL point counting")
    for case in crit.details["cases"]:
        assert case["orbits"] == LIFT_ORBITS[(case["p"], case["l"])] == case["p"] ** (2 * (case["l"] - 1))
        assert case["within_time_limit"] and case["stabilizers_central"]


def test_tg_kernel(capsys):
    crit = A.criterion_tg()
    with capsys.disabled():
        _check(crit, 4, "T_g kernel")
    assert crit.details["p3"]["kernel_dims"] == [0]
    assert crit.details["p2_deviation"]["kernel_dims"] == [2]


def test_local_to_global(capsys):
    crit = A.criterion_ltg(SEED)
    with capsys.disabled():
        _check(crit, 6, "Local-to-global identity")
    assert crit.details["ledgers"] == 20 and crit.details["failures"] == []


def test_geometric(capsys):
    crit = A.criterion_geometric()
    with capsys.disabled():
        _check(crit, 7, "Geometric bounds")
    for c in crit.details["cases"]:
        s, d = c["sigma"], c["delta"]
        assert (c["R_loc"], c["framed"], c["unframed"], c["glued"]) == (3 * s + 1, 4 * s - d, 1 - d, 4 * s - d)


def test_universal(capsys):
    crit = A.criterion_universal(DEGREE, PRECISION)
    with capsys.disabled():
        _check(crit, 8, "Main theorem")
    for row in crit.details["bundles"]:
        assert row["N"] == UNIVERSAL_N[tuple(row["e"])]
        assert all(row["checks"].values())


def test_elimination(capsys):
    crit = A.criterion_elimination(DEGREE)
    with capsys.disabled():
        _check(crit, 9, "Elimination correctness")
    for case in crit.details["cases"]:
        assert case["zeroed"] == sum(e * e for e in case["e"])


def test_oracles(capsys):
    crit = A.criterion_oracles(SEED)
    with capsys.disabled():
        _check(crit, 10, "Oracle suites")
    d = crit.details
    assert d["fl_ext"]["mismatches"] == d["fox_vs_bar"]["mismatches"] == d["kernel_dim"]["mismatches"] == 0
    assert d["fox_vs_bar"]["groups"] == 42 and d["kernel_dim"]["matrices"] == 512
