"""Separation bounds: exact values, sweeps, bucketing vs brute force."""

import itertools
from fractions import Fraction

import pytest

from moduli_sep.forms import class_numbers_upto
from moduli_sep.separation import (
    TABLE1,
    min_pairwise_distance,
    orbit_points,
    separation_bound,
    verify_cderiv,
    verify_separation_theorem,
    weak_separation_bound,
)


def test_separation_bound_examples():
    b = separation_bound(-4, -3)
    assert b.value == Fraction(800, 81) and b.branch == 1
    b = separation_bound(-3, -3)
    assert b.value == Fraction(800, 81) and b.branch == 1
    # ordering is internal: arguments commute
    assert separation_bound(-3, -400).value == separation_bound(-400, -3).value


def test_weak_bound_below_strong_bound_everywhere():
    discs = [dv for dv in class_numbers_upto(400)]
    for dx, dy in itertools.combinations_with_replacement(sorted(discs, key=abs), 2):
        assert weak_separation_bound(dx, dy) <= separation_bound(dx, dy).value


def brute_force_min(limit: int, mode: str) -> Fraction:
    from mpmath import mp

    pts = orbit_points(limit)
    best = None
    with mp.workprec(128):
        for p, q in itertools.combinations(pts, 2):
            if mode == "equal" and p.disc != q.disc:
                continue
            d = (p.value - q.value).abs().upper()
            if best is None or d < best:
                best = d
    return best


@pytest.mark.parametrize("mode", ["all", "equal"])
def test_bucketed_matches_brute_force_small(mode):
    limit = 100
    rep = min_pairwise_distance(limit, mode)
    brute = brute_force_min(limit, mode)
    got = Fraction(rep.min_value["value"])
    # the two routes must agree to within the certified radii
    assert abs(got - brute) < Fraction(1, 10 ** 20) * max(1, abs(brute))


def test_min_distance_k1_table_row():
    limit, dk, dpk = TABLE1[1]
    rep = min_pairwise_distance(limit, "all", hint=dk, threshold=dk)
    assert rep.passed
    assert Fraction(rep.min_value["value"]) <= dk * Fraction(105, 100)
    rep = min_pairwise_distance(limit, "equal", threshold=dpk)
    assert rep.passed
    assert Fraction(rep.min_value["value"]) <= dpk * Fraction(105, 100)


def test_min_distance_threshold_failure_detected():
    rep = min_pairwise_distance(100, "all", threshold=Fraction(10 ** 6))
    assert not rep.passed
    assert rep.extremal_witness is not None


def test_separation_theorem_small_sweep():
    rep = verify_separation_theorem(200)
    assert rep.passed
    assert Fraction(rep.margin) >= 1 if rep.margin else True
    assert rep.extremal_witness is not None


def test_separation_theorem_monotone_subrange():
    # passing at X implies passing at any smaller X (sweeps are supersets)
    assert verify_separation_theorem(150).passed
    assert verify_separation_theorem(100).passed


def test_separation_theorem_negative_control():
    rep = verify_separation_theorem(100, bound_scale=Fraction(10 ** 6))
    assert not rep.passed
    assert rep.extremal_witness is not None
    assert "violations" in rep.notes[0]


def test_cderiv_small_and_exclusions():
    rep = verify_cderiv(300)
    assert rep.passed
    assert rep.extremal_witness is not None
    margins = {item["check"]: Fraction(item["margin"]) for item in rep.items}
    assert set(margins) == {"elliptic-distance", "i-distance", "value", "value-1728", "deriv"}
    assert all(m >= 1 for m in margins.values())


def test_cderiv_excludes_elliptic_cm_points():
    # j'(i) = j'(zeta6) = 0, so a sweep including D = -3, -4 passes only
    # because tau = i and tau = zeta6 are excluded
    rep = verify_cderiv(10)
    assert rep.passed
    # the -3 and -4 orbits contribute no checked point at all
    for item in rep.items:
        assert item["witness"][0] not in (-3, -4)


def test_cderiv_jprime_only_mode():
    rep = verify_cderiv(200, checks=("deriv",))
    assert rep.passed
    assert [item["check"] for item in rep.items] == ["deriv"]
