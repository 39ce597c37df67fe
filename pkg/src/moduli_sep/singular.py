"""Singular moduli: certified orbit values and Hilbert class polynomials.

A singular modulus of discriminant D is j((b + sqrt(D))/2a) for a reduced
form (a, b, c); the h(D) of them form one Galois orbit.  Orbit values are
certified balls; the Hilbert class polynomial is recovered exactly by an
integer-rounding gate on the certified symmetric functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp

from .ball import CertifiedComplex, mpf_to_fraction, sqrt_int
from .errors import PrecisionExhausted
from .forms import Discriminant, ReducedForm, dominance_class, reduced_forms
from .modular import PREC_CAP, eval_j_ball, precision_ladder

_LOG2_E_TIMES_PI = math.pi / math.log(2)  # bits of magnitude per unit of sqrt|D|/a


@dataclass
class CMPoint:
    form: ReducedForm
    tau: CertifiedComplex


@dataclass
class SingularModulus:
    form: ReducedForm
    value: CertifiedComplex
    dominance: str

    @property
    def disc(self) -> Discriminant:
        return self.form.disc


def cm_point_ball(form: ReducedForm) -> CertifiedComplex:
    """tau = (b + i sqrt|D|) / (2a) at the current working precision."""
    s = sqrt_int(abs(form.disc))
    num = CertifiedComplex.exact(form.b) + CertifiedComplex.from_real(s) * 1j
    return num / (2 * form.a)


def cm_point(form: ReducedForm, prec_bits: int = 128) -> CMPoint:
    with mp.workprec(prec_bits + 16):
        return CMPoint(form, cm_point_ball(form))


def _magnitude_bits(form: ReducedForm) -> int:
    """Rough bits needed for the integer part of |j(tau)| ~ e^{pi sqrt|D|/a}."""
    return int(_LOG2_E_TIMES_PI * math.isqrt(abs(form.disc)) / form.a) + 8


def singular_modulus(form: ReducedForm, prec_bits: int = 128,
                     abs_bits: int | None = None) -> SingularModulus:
    """Certified j-value of one reduced form.

    prec_bits is the relative target (rad <= 2^{1-prec}(1+|mid|)); abs_bits,
    when given, additionally requires rad <= 2^{-abs_bits}.
    """
    start = prec_bits + _magnitude_bits(form) + 16
    for wp in precision_ladder(start, max(PREC_CAP, start)):
        with mp.workprec(wp):
            tau = cm_point_ball(form)
            val = eval_j_ball(tau)
            rad = mpf_to_fraction(val.rad)
            mag = max(abs(mpf_to_fraction(val.mid.real)), abs(mpf_to_fraction(val.mid.imag)))
            if rad > Fraction(2) ** (1 - prec_bits) * (1 + mag):
                continue
            if abs_bits is not None and rad > Fraction(2) ** (-abs_bits):
                continue
            return SingularModulus(form, val, dominance_class(form))
    raise PrecisionExhausted(f"singular modulus for {form} did not converge", PREC_CAP)


def orbit(d: Discriminant, prec_bits: int = 128,
          abs_bits: int | None = None) -> list[SingularModulus]:
    """All singular moduli of discriminant d, in reduced_forms order."""
    return [singular_modulus(f, prec_bits, abs_bits) for f in reduced_forms(d)]


def dominant_modulus(d: Discriminant, prec_bits: int = 128) -> SingularModulus:
    """The unique a=1 orbit member; certified real."""
    top = orbit(d, prec_bits)[0]
    assert top.form.a == 1 and top.dominance == "dominant"
    if not top.value.is_certified_real():
        raise PrecisionExhausted("dominant modulus not certified real", prec_bits)
    return top


@dataclass(frozen=True)
class IntPolynomial:
    """Monic polynomial with exact integer coefficients (ascending order)."""

    coefficients: tuple[int, ...]

    def __post_init__(self):
        assert self.coefficients[-1] == 1

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def discriminant_quadratic(self) -> int:
        assert self.degree == 2
        c0, c1, _ = self.coefficients
        return c1 * c1 - 4 * c0

    def eval_ball(self, x: CertifiedComplex) -> CertifiedComplex:
        acc = CertifiedComplex.exact(0)
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def __str__(self):
        return " + ".join(f"{c}*X^{k}" for k, c in enumerate(self.coefficients))


def _poly_from_roots_ball(roots: list[CertifiedComplex]) -> list[CertifiedComplex]:
    coeffs = [CertifiedComplex.exact(1)]
    for r in roots:
        nxt = [CertifiedComplex.exact(0) for _ in range(len(coeffs) + 1)]
        for k, c in enumerate(coeffs):
            nxt[k + 1] = nxt[k + 1] + c
            nxt[k] = nxt[k] - c * r
        coeffs = nxt
    return coeffs  # ascending, monic


def _round_coeff(ball: CertifiedComplex) -> int | None:
    """The unique integer in the coefficient ball, or None if the gate fails."""
    rad = mpf_to_fraction(ball.rad)
    if rad >= Fraction(1, 4):
        return None
    im = abs(mpf_to_fraction(ball.mid.imag))
    if im > rad:
        return None  # not certified real
    re = mpf_to_fraction(ball.mid.real)
    n = round(re)
    if abs(re - n) > rad:
        return None  # certified interval contains no integer at all
    # width < 1/2 means at most one integer; containment checked above
    return int(n)


def hilbert_class_polynomial(d: Discriminant, prec_bits: int | None = None) -> IntPolynomial:
    """Exact Hilbert class polynomial via certified orbit symmetric functions.

    Each coefficient is accepted only when its certified interval is narrower
    than 1/2 and contains exactly one integer; otherwise precision escalates.
    """
    forms = reduced_forms(d)
    h = len(forms)
    if prec_bits is None:
        # coefficient magnitudes are governed by sum_i pi sqrt|D| / a_i
        # (the constant term is the product of the root magnitudes e^{pi sqrt|D|/a})
        size = sum(Fraction(1, f.a) for f in forms)
        prec_bits = int(_LOG2_E_TIMES_PI * math.isqrt(abs(d)) * float(size)) + 24 * h + 64
    for wp in precision_ladder(prec_bits, max(4 * prec_bits, PREC_CAP)):
        with mp.workprec(wp):
            roots = [eval_j_ball(cm_point_ball(f)) for f in forms]
            coeffs = _poly_from_roots_ball(roots)
            ints = [_round_coeff(c) for c in coeffs]
            if all(c is not None for c in ints):
                return IntPolynomial(tuple(ints))
    raise PrecisionExhausted(f"class polynomial for {d.value} did not round", PREC_CAP)
