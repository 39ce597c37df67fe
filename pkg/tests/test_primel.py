"""The finite checks behind the x + alpha*y classification."""

from fractions import Fraction

import pytest
from mpmath import mp

from moduli_sep.errors import DomainError, InvalidAlpha, NotInClassifiedList
from moduli_sep.forms import validate_discriminant
from moduli_sep.primel import (
    CROSS_PAIRS,
    EXCEPTION_QUAD,
    GENERATES,
    SUM_DIFF,
    TRIVIAL_EQUAL,
    RatPolynomial,
    alpha_ratio_set,
    certify_generation,
    classify_primitive,
    compose_identity_holds,
    conjugate_polynomials,
    cross_pair_polynomials,
    exceptional_alpha,
    exceptional_discriminants,
    is_two_elementary,
    min_imag,
    nonproportional,
    nonproportional_cross,
    two_elementary_subset,
)
from moduli_sep.singular import hilbert_class_polynomial, orbit

# eq-level frozen expectations: the 38 inconclusive discriminants and the 16
# two-elementary (class group [2,2]) members among them
EXPECTED_BAD = [
    -39, -47, -55, -56, -63, -68, -79, -84, -87, -103, -120, -127,
    -132, -135, -136, -168, -175, -180, -184, -196, -207, -228,
    -247, -280, -292, -312, -328, -340, -372, -388, -408, -520,
    -532, -568, -708, -760, -772, -1012,
]
EXPECTED_BOLD = [
    -84, -120, -132, -168, -180, -228, -280, -312, -340, -372,
    -408, -520, -532, -708, -760, -1012,
]


def test_exceptional_discriminants_frozen():
    got = [d.value for d in exceptional_discriminants()]
    assert got == EXPECTED_BAD
    assert len(got) == 38
    assert got[:4] == [-39, -47, -55, -56]
    assert got[-3:] == [-760, -772, -1012]


def test_two_elementary_subset_frozen():
    got = [d.value for d in two_elementary_subset()]
    assert got == EXPECTED_BOLD
    assert len(got) == 16
    assert -39 not in got and -47 not in got


def test_two_elementary_matches_real_orbits():
    # cross-check the combinatorial detection against certified realness
    for dv in (-84, -39, -120, -47):
        d = validate_discriminant(dv)
        all_real = all(m.value.is_certified_real() for m in orbit(d, 96))
        assert all_real == is_two_elementary(d)


def test_min_imag_examples():
    for dv in (-47, -39):
        mi = min_imag(alpha_ratio_set(validate_discriminant(dv)))
        assert mi.certified_ge(345)


def test_alpha_set_shape():
    aset = alpha_ratio_set(validate_discriminant(-47))  # h = 5
    h = 5
    assert len(aset.elements) == (h - 1) * (h - 1) * (h - 2) // 2
    assert all(2 <= i <= h and 2 <= j < k <= h for i, j, k in aset.triples)


def test_conjugate_polynomials_structure():
    d = validate_discriminant(-84)
    fs = conjugate_polynomials(d)
    hpol = hilbert_class_polynomial(d)
    assert fs[0].coefficients == (Fraction(0), Fraction(1))  # f_1 = X
    assert len(fs) == 4
    assert all(f.degree <= 3 for f in fs)
    for f in fs:
        assert compose_identity_holds(hpol, f, hpol)
    ok, certs = nonproportional(fs)
    assert ok
    assert len(certs) == 9  # (i, j, k): 3 * 3 choose 2
    assert all(c.minor_value != 0 for c in certs)


def test_conjugate_polynomials_requires_two_elementary():
    with pytest.raises(DomainError):
        conjugate_polynomials(validate_discriminant(-23))


def test_nonproportional_trivial_cases():
    x = RatPolynomial((Fraction(0), Fraction(1)))
    ok, certs = nonproportional([x, x])
    assert ok and certs == []  # no admissible triple: vacuous
    two_x = RatPolynomial((Fraction(0), Fraction(2)))
    three_x = RatPolynomial((Fraction(0), Fraction(3)))
    ok, certs = nonproportional([x, two_x, three_x])
    assert not ok  # f1 - f2 = -X is proportional to f2 - f3 = -X


def test_cross_pair_first_example():
    fs, gs = cross_pair_polynomials(-96, -192)
    assert len(gs) == 4
    hy = hilbert_class_polynomial(validate_discriminant(-192))
    hx = hilbert_class_polynomial(validate_discriminant(-96))
    for g in gs:
        assert g.degree <= 3
        assert compose_identity_holds(hy, g, hx)
    ok, certs = nonproportional_cross(fs, gs)
    assert ok and len(certs) == 3 * 6


def test_cross_pair_rejects_unlisted():
    with pytest.raises(NotInClassifiedList):
        cross_pair_polynomials(-3, -4)
    assert len(CROSS_PAIRS) == 15


def test_exceptional_alpha_values():
    assert exceptional_alpha(-15, -20) == Fraction(-1323, 8704)
    assert exceptional_alpha(-20, -15) == Fraction(-8704, 1323)
    assert exceptional_alpha(-15, -15) == 1
    assert exceptional_alpha(-3, -4) is None      # class numbers 1
    assert exceptional_alpha(-15, -23) is None    # h(-23) = 3
    assert exceptional_alpha(-15, -24) is None    # different real fields


def test_classify_primitive_matrix():
    assert classify_primitive(-23, -23, 2).kind == GENERATES
    assert classify_primitive(-23, -23, 1) == \
        classify_primitive(-23, -23, Fraction(1))
    v = classify_primitive(-23, -23, 1)
    assert v.kind == SUM_DIFF and v.subfield_index == 2
    v = classify_primitive(-23, -23, -1)
    assert v.kind == SUM_DIFF and v.subfield_index == 1
    assert classify_primitive(-3, -3, 5).kind == TRIVIAL_EQUAL
    assert classify_primitive(-7, -11, 1).kind == GENERATES
    v = classify_primitive(-15, -20, Fraction(1323, 8704))
    assert v.kind == EXCEPTION_QUAD and v.alpha == Fraction(1323, 8704)
    assert classify_primitive(-15, -20, Fraction(-1323, 8704)).kind == EXCEPTION_QUAD
    assert classify_primitive(-15, -20, Fraction(3, 2)).kind == GENERATES
    assert classify_primitive(-15, -15, Fraction(3, 2)).kind == GENERATES
    with pytest.raises(InvalidAlpha):
        classify_primitive(-15, -20, 0)


def test_certify_generation_positive_and_exceptional():
    ok, gap = certify_generation(-15, -20, Fraction(3, 2))
    assert ok and gap.certified_gt(0)
    # the exceptional coefficient collapses two sums to within the radius
    ok, gap = certify_generation(-15, -20, Fraction(1323, 8704))
    assert not ok
    assert gap.upper() < Fraction(1, 10 ** 50)


def test_exception_collapse_is_algebraic():
    # x + alpha y must agree with its conjugate x' + alpha y': their sum with
    # the dominant pairing is rational (certified across both labelings)
    alpha = Fraction(1323, 8704)
    with mp.workprec(300):
        from moduli_sep.ball import CertifiedReal
        ab = CertifiedReal.from_fraction(alpha)
        xs = [m.value for m in orbit(validate_discriminant(-15), 64, abs_bits=150)]
        ys = [m.value for m in orbit(validate_discriminant(-20), 64, abs_bits=150)]
        collide = [(xs[0] + ys[0] * ab), (xs[1] + ys[1] * ab)]
        assert not (collide[0] - collide[1]).abs().certified_gt(0)
