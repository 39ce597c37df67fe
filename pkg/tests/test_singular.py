"""Orbits, dominance size corridors, and Hilbert class polynomials."""

from fractions import Fraction

import pytest
from mpmath import mp

from moduli_sep.ball import mpf_to_fraction, real_exp
from moduli_sep.forms import reduced_forms, validate_discriminant
from moduli_sep.singular import (
    IntPolynomial,
    cm_point,
    dominant_modulus,
    hilbert_class_polynomial,
    orbit,
)

KNOWN_CLASS_POLYNOMIALS = {
    -3: (0, 1),
    -4: (-1728, 1),
    -15: (-121287375, 191025, 1),
    -20: (-681472000, -1264000, 1),
    -23: (12771880859375, -5151296875, 3491750, 1),
}


def test_known_class_polynomials():
    for dv, coeffs in KNOWN_CLASS_POLYNOMIALS.items():
        assert hilbert_class_polynomial(validate_discriminant(dv)).coefficients == coeffs


def test_class_polynomial_doubled_precision_oracle():
    # the rounding gate must produce identical integers at doubled precision
    for dv in (-23, -47, -84, -120):
        d = validate_discriminant(dv)
        base = hilbert_class_polynomial(d)
        doubled = hilbert_class_polynomial(d, prec_bits=4 * len(base.coefficients) * 64 + 512)
        assert base.coefficients == doubled.coefficients


def test_orbit_minus15_frozen():
    d = validate_discriminant(-15)
    orb = orbit(d, 128)
    assert [m.dominance for m in orb] == ["dominant", "subdominant"]
    dom, sub = orb
    assert dom.value.is_certified_real() and sub.value.is_certified_real()
    r = mpf_to_fraction(dom.value.mid.real)
    assert Fraction("-191657.84") < r < Fraction("-191657.83")
    r2 = mpf_to_fraction(sub.value.mid.real)
    assert Fraction("632.83") < r2 < Fraction("632.84")
    # both are roots of X^2 + 191025 X - 121287375
    pol = hilbert_class_polynomial(d)
    with mp.workprec(256):
        for m in orb:
            assert pol.eval_ball(m.value).abs().upper() < Fraction(1, 10 ** 15)


def test_orbit_sizes_and_special_values():
    assert [m.value.contains_int_point(0) for m in orbit(validate_discriminant(-3), 128)] == [True]
    assert [m.value.contains_int_point(1728) for m in orbit(validate_discriminant(-4), 128)] == [True]


def test_dominant_modulus_real_and_corridor():
    for dv in (-4, -15, -23, -163, -407):
        d = validate_discriminant(dv)
        dom = dominant_modulus(d, 128)
        assert dom.form.a == 1
        assert dom.value.is_certified_real()
        with mp.workprec(192):
            from moduli_sep.ball import const_pi, sqrt_int
            grow = real_exp(const_pi() * sqrt_int(abs(d)))
            mag = dom.value.abs()
            assert (mag - grow).upper() <= 2079
            assert (grow - mag).upper() <= 2079


def test_size_corridor_all_members():
    # |x| <= e^{pi sqrt|D|} + 2079; non-dominant <= e^{pi sqrt|D|/2} + 2079;
    # generic <= e^{pi sqrt|D|/3} + 2079
    from moduli_sep.ball import const_pi, sqrt_int
    for dv in (-23, -84, -120, -407, -996):
        d = validate_discriminant(dv)
        with mp.workprec(256):
            s = const_pi() * sqrt_int(abs(d))
            lim1 = real_exp(s).upper() + 2079
            lim2 = real_exp(s / 2).upper() + 2079
            lim3 = real_exp(s / 3).upper() + 2079
            for m in orbit(d, 128):
                mag = m.value.abs().lower()
                assert mag <= lim1
                if m.dominance != "dominant":
                    assert mag <= lim2
                if m.dominance == "generic":
                    assert mag <= lim3


def test_dominant_strictly_largest():
    for dv in (-15, -23, -84, -120, -407):
        d = validate_discriminant(dv)
        orb = orbit(d, 128)
        top = orb[0].value.abs()
        for other in orb[1:]:
            assert top.lower() > other.value.abs().upper()


def test_real_members_match_ambiguous_forms():
    for dv in (-15, -23, -31, -84, -96, -120, -47):
        d = validate_discriminant(dv)
        for m in orbit(d, 128):
            if m.form.is_ambiguous():
                assert m.value.is_certified_real()
            else:
                assert not m.value.imag().contains(0)


def test_cm_point_invariants():
    for dv in (-3, -4, -23, -84):
        d = validate_discriminant(dv)
        for f in reduced_forms(d):
            pt = cm_point(f, 128)
            im = pt.tau.imag()
            # Im tau >= sqrt(3)/2 checked through the square
            assert (im * im).upper() >= Fraction(3, 4) - Fraction(1, 10 ** 20)
            re2 = pt.tau.real()
            assert abs(re2.upper()) <= Fraction(1, 2) + Fraction(1, 10 ** 20)


def test_symmetric_functions_certified_integral_sample():
    # spot check ahead of the exhaustive |D| <= 1000 acceptance run
    for dv in (-47, -71, -96, -191, -311, -479):
        pol = hilbert_class_polynomial(validate_discriminant(dv))
        assert pol.coefficients[-1] == 1
        assert pol.degree == len(reduced_forms(validate_discriminant(dv)))


def test_monicity_enforced():
    with pytest.raises(AssertionError):
        IntPolynomial((1, 2))
