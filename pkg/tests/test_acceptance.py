"""One test per acceptance criterion, each at exact tolerance.

Criteria 5, 6c and 9 fail as stated. Their tests are strict xfails carrying the
analysis, and a companion test pins the exact reason so that a different
failure cannot hide behind the xfail.
"""

from __future__ import annotations

from functools import lru_cache

import pytest

from qma.acceptance import run_criterion

from conftest import ACCEPTANCE_LINES


@lru_cache(maxsize=None)
def result(key: str):
    res = run_criterion(key)
    line = res.line()
    ACCEPTANCE_LINES.append(line)
    print(line)
    for note in res.notes:
        print("    " + note)
    return res


@pytest.mark.parametrize("key", ["1", "2", "3", "4", "6a", "6b", "7", "8", "10", "11"])
def test_criterion(key):
    res = result(key)
    assert res.holds, res.details


@pytest.mark.xfail(strict=True, reason=(
    "for n = 2 every D^(m-1) t_r lies in the socle, so its dimension is m - 1: "
    "2 at m = 3 but 4 at m = 5, not the stated 2"))
def test_criterion_5():
    assert result("5").holds


def test_criterion_5_failure_is_the_m5_socle_dimension():
    d = result("5").details
    assert d["(n,m)=(2,3)"]["socle_dimension"] == 2
    assert d["(n,m)=(2,5)"]["socle_dimension"] == 4
    assert all(v["witnesses_in_socle"] for v in d.values())
    assert d["(n,m)=(3,3)"]["dimension_requirement_met"]


@pytest.mark.xfail(strict=True, reason=(
    "the displayed exponents for C at m = 3 sum to y-degree 1620 while the Gram "
    "determinant has y-degree 2916; the uniform exponent m^6(m-1) passes"))
def test_criterion_6c():
    assert result("6c").holds


def test_criterion_6c_uniform_exponents_pass():
    res = result("6c")
    assert res.probabilistic
    shown, uniform = res.details["displayed_formula"], res.details["uniform_exponent_formula"]
    assert (shown["claim_y_degree"], shown["determinant_y_degree"]) == ("1620", 2916)
    assert uniform["verdict"] == "pass"


@pytest.mark.xfail(strict=True, reason=(
    "the B3 map is not an endomorphism: x11 x32 - x32 x11 = (q - q^-1) x12 x31 holds "
    "before the map but not after it; the same map on B2 verifies"))
def test_criterion_9():
    assert result("9").holds


def test_criterion_9_only_the_b3_pair_fails():
    d = result("9").details
    failing = [m for m in d["maps"] if not m["two_sided_inverse"]]
    assert [m["map"] for m in failing] == ["b3_phi"]
    assert any(v["relation"] == "x[3,2]*x[1,1]" for v in failing[0]["violations"])
    assert d["leading_forms"]["holds"] and all(d["fixed_ideal"].values())
    assert d["free_witness"]["holds"] and d["phi_psi_differs_from_psi_phi_on_x11"]
    assert d["free_witness"]["words"] == 60
