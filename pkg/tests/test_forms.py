"""Forms layer: reduction, class numbers, dominance, quadratic separation."""

import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st
from mpmath import mp

from moduli_sep.errors import DegenerateInput, NotADiscriminant
from moduli_sep.forms import (
    QuadraticNumber,
    SqrtRational,
    class_number,
    class_numbers_upto,
    dominance_census,
    expected_census,
    reduced_forms,
    separate_quadratic,
    validate_discriminant,
)
from moduli_sep.ball import CertifiedComplex, sqrt_int


def brute_force_reduced(disc: int) -> list[tuple[int, int, int]]:
    """Independent oracle: scan all (a, b, c) in a box and apply the definition."""
    bound = math.isqrt(abs(disc)) + 2
    out = []
    for a in range(1, bound + 1):
        for b in range(-bound, bound + 1):
            num = b * b - disc
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if b * b - 4 * a * c != disc:
                continue
            if math.gcd(math.gcd(a, b), c) != 1:
                continue
            if (-a < b <= a < c) or (0 <= b <= a == c):
                out.append((a, b, c))
    return sorted(out)


def test_validate_discriminant_examples():
    d = validate_discriminant(-3)
    assert (d.value, d.fundamental, d.conductor) == (-3, -3, 1)
    d = validate_discriminant(-12)
    assert (d.value, d.fundamental, d.conductor) == (-12, -3, 2)
    with pytest.raises(NotADiscriminant):
        validate_discriminant(-5)
    with pytest.raises(NotADiscriminant):
        validate_discriminant(4)


@given(st.integers(min_value=1, max_value=3000))
def test_validate_discriminant_factorization(n):
    if (-n) % 4 not in (0, 1):
        with pytest.raises(NotADiscriminant):
            validate_discriminant(-n)
        return
    d = validate_discriminant(-n)
    assert d.value == d.fundamental * d.conductor ** 2
    f = validate_discriminant(d.fundamental)
    assert f.conductor == 1  # the fundamental part is itself fundamental


def test_reduced_forms_against_brute_force_oracle():
    for disc in (-3, -4, -15, -23, -47, -84, -96, -163, -192, -407):
        d = validate_discriminant(disc)
        got = [(f.a, f.b, f.c) for f in reduced_forms(d)]
        assert sorted(got) == brute_force_reduced(disc)


def test_reduced_forms_frozen_examples():
    assert [(f.a, f.b, f.c) for f in reduced_forms(validate_discriminant(-3))] == [(1, 1, 1)]
    assert [(f.a, f.b, f.c) for f in reduced_forms(validate_discriminant(-4))] == [(1, 0, 1)]
    assert [(f.a, f.b, f.c) for f in reduced_forms(validate_discriminant(-15))] == [
        (1, 1, 4), (2, 1, 2)]


def test_class_numbers():
    assert class_number(validate_discriminant(-3)) == 1
    assert class_number(validate_discriminant(-23)) == 3
    assert class_number(validate_discriminant(-39)) == 4


def test_class_numbers_upto_agrees_with_per_disc():
    counts = class_numbers_upto(400)
    for dv, h in counts.items():
        assert h == class_number(validate_discriminant(dv)), dv


def test_dominance_census_examples():
    assert dominance_census(validate_discriminant(-23)) == (1, 2)
    assert dominance_census(validate_discriminant(-20)) == (1, 1)
    assert dominance_census(validate_discriminant(-35)) == (1, 0)


def test_dominance_census_trichotomy_to_10000():
    counts = class_numbers_upto(10000)
    # recompute subdominant counts with the same aggregated scan shape
    for dv in sorted(counts, key=abs):
        d = validate_discriminant(dv)
        assert dominance_census(d) == expected_census(d), dv


def test_cm_points_inside_fundamental_domain():
    for dv in (-3, -4, -23, -407, -996):
        d = validate_discriminant(dv)
        for f in reduced_forms(d):
            re, absd, twoa = f.tau_exact()
            assert abs(re) <= Fraction(1, 2)
            a = twoa // 2
            assert absd >= 3 * a * a  # Im tau = sqrt|D|/(2a) >= sqrt(3)/2


def test_separate_quadratic_paper_examples():
    zeta6 = QuadraticNumber(1, -1, -3)
    i_unit = QuadraticNumber(1, 0, -4)
    branch, bound = separate_quadratic(zeta6, i_unit)
    assert branch == "unequal"
    # 2 * (sqrt3/2) * 1 * min(sqrt3/2, 1) / (3*4) = 1/8
    assert bound == SqrtRational(Fraction(1, 64))

    a = QuadraticNumber(1, 1, -15)
    b = QuadraticNumber(2, 1, -15)
    branch, _ = separate_quadratic(a, b)
    assert branch == "unequal"  # same disc, a != a' forces unequal imaginary parts

    c = QuadraticNumber(1, 1, -7)
    d = QuadraticNumber(1, -1, -7)
    branch, bound = separate_quadratic(c, d)
    assert branch == "equal"
    assert bound == SqrtRational(Fraction(1, 4))  # bound = 1/2

    with pytest.raises(DegenerateInput):
        separate_quadratic(zeta6, QuadraticNumber(1, -1, -3))


@st.composite
def quad_numbers(draw):
    disc = draw(st.integers(min_value=-50, max_value=-3).filter(lambda n: n % 4 in (0, 1)))
    a = draw(st.integers(min_value=1, max_value=6))
    b = draw(st.integers(min_value=-6, max_value=6))
    if (b * b - disc) % (4 * a):
        a, b = 1, disc % 2
    try:
        return QuadraticNumber(a, b, disc)
    except ValueError:
        return QuadraticNumber(1, disc % 2, disc)


@given(quad_numbers(), quad_numbers())
def test_separation_bound_below_true_distance(alpha, beta):
    if alpha.key() == beta.key():
        return
    _, bound = separate_quadratic(alpha, beta)
    with mp.workprec(256):
        def to_ball(q):
            s = sqrt_int(-q.disc)
            return (CertifiedComplex.exact(-q.b)
                    + CertifiedComplex.from_real(s) * 1j) / (2 * q.a)
        dist = (to_ball(alpha) - to_ball(beta)).abs()
        # |alpha - beta| >= bound, compared exactly through squares
        assert dist.lower() > 0
        assert dist.lower() ** 2 >= bound.squared
