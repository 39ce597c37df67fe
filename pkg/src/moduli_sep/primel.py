"""Finite checks behind the primitive-element classification for x + alpha*y.

For rational alpha != 0, +-1, the field Q(x, y) generated by two singular
moduli is generated by x + alpha*y except in one explicitly classified
quadratic situation.  The verification reduces to:

  * the list of discriminants where the generic size/separation argument is
    inconclusive (h in {4,5,6} with D = 1 mod 8, or h = 4 with
    D = 8,12 mod 16) -- 38 of them;
  * certified imaginary-part floors for the ratio sets of the non
    2-elementary members;
  * exact non-proportionality certificates, via conjugate-expression
    polynomials, for the 2-elementary members and for the 15 classified
    pairs of discriminants sharing a field of moduli.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp

from .ball import CertifiedComplex, CertifiedReal, mpf_to_fraction, real_min
from .errors import (
    DegenerateDenominator,
    DomainError,
    InvalidAlpha,
    NotInClassifiedList,
    ReconstructionFailed,
)
from .forms import Discriminant, class_numbers_upto, reduced_forms, validate_discriminant
from .modular import precision_ladder
from .singular import IntPolynomial, hilbert_class_polynomial, orbit

_SWEEP_HORIZON = 20000
_LARGEST_MEMBER = 1012

CROSS_PAIRS = [
    (-96, -192), (-96, -288), (-120, -160), (-120, -280), (-120, -760),
    (-160, -280), (-160, -760), (-180, -240), (-192, -288), (-195, -520),
    (-195, -715), (-280, -760), (-340, -595), (-480, -960), (-520, -715),
]

_bad_cache: list[Discriminant] | None = None


def exceptional_discriminants(horizon: int = _SWEEP_HORIZON) -> list[Discriminant]:
    """Discriminants with h in {4,5,6}, D = 1 mod 8, or h = 4, D = 8,12 mod 16.

    Swept exhaustively up to ``horizon``; the result is complete provided no
    qualifying discriminant exceeds the horizon (known class-number bounds
    put the largest at -1012, which the sweep asserts).
    """
    global _bad_cache
    if _bad_cache is not None and horizon == _SWEEP_HORIZON:
        return list(_bad_cache)
    counts = class_numbers_upto(horizon)
    out = []
    for dv, h in counts.items():
        if (h in (4, 5, 6) and dv % 8 == 1) or (h == 4 and dv % 16 in (8, 12)):
            out.append(dv)
    out.sort(key=abs)
    if out and abs(out[-1]) > _LARGEST_MEMBER:
        raise AssertionError(f"sweep found a member beyond -{_LARGEST_MEMBER}: {out[-1]}")
    res = [validate_discriminant(dv) for dv in out]
    if horizon == _SWEEP_HORIZON:
        _bad_cache = list(res)
    return res


def is_two_elementary(d: Discriminant) -> bool:
    """Class group exponent <= 2: every reduced form is self-inverse."""
    return all(f.is_ambiguous() for f in reduced_forms(d))


def two_elementary_subset() -> list[Discriminant]:
    """The class-number-4, type-[2,2] members of the exceptional list."""
    return [d for d in exceptional_discriminants()
            if len(reduced_forms(d)) == 4 and is_two_elementary(d)]


# ---------------------------------------------------------------------------
# Ratio sets
# ---------------------------------------------------------------------------


@dataclass
class AlphaSet:
    """Certified ratios (x1 - x_i)/(x_j - x_k) over a single orbit.

    x1 is the dominant modulus; indices run over 2 <= i, j <= h, j < k <= h.
    Rational numbers in this set are the only candidates for a coefficient
    alpha collapsing x + alpha*y across the orbit.
    """

    disc: Discriminant
    elements: list[CertifiedComplex]
    triples: list[tuple[int, int, int]]


def _orbit_abs_bits(d: Discriminant) -> int:
    return 96 + int(math.pi / math.log(2) * math.isqrt(abs(d))) + 16


def alpha_ratio_set(d: Discriminant, prec_bits: int = 128) -> AlphaSet:
    h = len(reduced_forms(d))
    if h < 2:
        raise DomainError("ratio set needs class number >= 2")
    with mp.workprec(_orbit_abs_bits(d) + prec_bits):
        xs = [m.value for m in orbit(d, prec_bits, abs_bits=96)]
        elements, triples = [], []
        for i in range(2, h + 1):
            for j in range(2, h + 1):
                for k in range(j + 1, h + 1):
                    den = xs[j - 1] - xs[k - 1]
                    if not den.certified_distinct(CertifiedComplex.exact(0)):
                        raise DegenerateDenominator(
                            f"x_{j} - x_{k} not certified nonzero for {d.value}")
                    elements.append((xs[0] - xs[i - 1]) / den)
                    triples.append((i, j, k))
        return AlphaSet(d, elements, triples)


def min_imag(aset: AlphaSet) -> CertifiedReal:
    """Certified minimum of |Im z| over the ratio set."""
    acc = None
    for el in aset.elements:
        v = abs(el.imag())
        acc = v if acc is None else real_min(acc, v)
    if acc is None:
        raise DomainError("empty ratio set")
    return acc


# ---------------------------------------------------------------------------
# Exact polynomial helpers (Fraction coefficients, ascending order)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RatPolynomial:
    coefficients: tuple[Fraction, ...]

    def __post_init__(self):
        assert not self.coefficients or self.coefficients[-1] != 0 or len(self.coefficients) == 1

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __sub__(self, other: "RatPolynomial") -> "RatPolynomial":
        n = max(len(self.coefficients), len(other.coefficients))
        a = list(self.coefficients) + [Fraction(0)] * (n - len(self.coefficients))
        b = list(other.coefficients) + [Fraction(0)] * (n - len(other.coefficients))
        out = [x - y for x, y in zip(a, b)]
        while len(out) > 1 and out[-1] == 0:
            out.pop()
        return RatPolynomial(tuple(out))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coefficients)


def _pmul(p: list[Fraction], q: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def _pmod(p: list[Fraction], m: list[Fraction]) -> list[Fraction]:
    """p mod m for monic m."""
    p = list(p)
    dm = len(m) - 1
    while len(p) - 1 >= dm:
        lead = p[-1]
        if lead:
            shift = len(p) - 1 - dm
            for i, c in enumerate(m):
                p[shift + i] -= lead * c
        p.pop()
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p or [Fraction(0)]


def compose_identity_holds(outer: IntPolynomial, inner: RatPolynomial,
                           modulus: IntPolynomial) -> bool:
    """Exact check outer(inner(X)) = 0 (mod modulus(X)) over the rationals."""
    minner = [Fraction(c) for c in inner.coefficients]
    mmod = [Fraction(c) for c in modulus.coefficients]
    acc = [Fraction(0)]
    for c in reversed(outer.coefficients):
        acc = _pmod(_pmul(acc, minner), mmod)
        acc[0] += c
    return all(v == 0 for v in acc)


def _lagrange_ball(xs: list[CertifiedComplex], ys: list[CertifiedComplex]
                   ) -> list[CertifiedComplex]:
    n = len(xs)
    coeffs = [CertifiedComplex.exact(0) for _ in range(n)]
    for i in range(n):
        num = [CertifiedComplex.exact(1)]
        den = CertifiedComplex.exact(1)
        for j in range(n):
            if j == i:
                continue
            nxt = [CertifiedComplex.exact(0) for _ in range(len(num) + 1)]
            for k, c in enumerate(num):
                nxt[k + 1] = nxt[k + 1] + c
                nxt[k] = nxt[k] - c * xs[j]
            num = nxt
            den = den * (xs[i] - xs[j])
        scale = ys[i] / den
        for k, c in enumerate(num):
            coeffs[k] = coeffs[k] + c * scale
    return coeffs


def _reconstruct_rational(ball: CertifiedComplex, max_den: int) -> Fraction | None:
    """Continued-fraction guess for the rational a certified-real ball hides."""
    rad = mpf_to_fraction(ball.rad)
    if abs(mpf_to_fraction(ball.mid.imag)) > rad:
        return None
    re = mpf_to_fraction(ball.mid.real)
    cand = re.limit_denominator(max_den)
    return cand


def _eval_rat_poly_ball(p: RatPolynomial, x: CertifiedComplex) -> CertifiedComplex:
    acc = CertifiedComplex.exact(0)
    for c in reversed(p.coefficients):
        acc = acc * x + CertifiedComplex.from_real(CertifiedReal.from_fraction(c))
    return acc


def _maps_to(p: RatPolynomial, x: CertifiedComplex, target: CertifiedComplex) -> bool:
    return not (_eval_rat_poly_ball(p, x) - target).abs().certified_gt(0)


def conjugate_polynomials(d: Discriminant, prec_bits: int | None = None) -> list[RatPolynomial]:
    """Polynomials f_i with f_i(x_1) = x_i for a 2-elementary orbit.

    Found by interpolating candidate Galois permutations of the certified
    roots and rationally reconstructing; a candidate is accepted only when
    the exact identity H(f_i) = 0 mod H holds over Q.  f_1 = X.
    """
    if not is_two_elementary(d):
        raise DomainError(f"{d.value}: conjugate expressions need a 2-elementary orbit")
    hpol = hilbert_class_polynomial(d)
    h = hpol.degree
    if prec_bits is None:
        prec_bits = 256 + 2 * int(math.pi / math.log(2) * math.isqrt(abs(d))) * h
    srcs = list(range(1, h + 1))  # interpolate at x_1, ..., x_h
    for wp in precision_ladder(prec_bits, 1 << 16):
        with mp.workprec(wp):
            xs = [m.value for m in orbit(d, 64, abs_bits=wp // 2)]
            max_den = 1 << (wp // 3)
            fs: list[RatPolynomial] = [RatPolynomial((Fraction(0), Fraction(1)))]
            ok = True
            for i in range(2, h + 1):
                found = None
                # images of (x_2, ..., x_h) under a bijection sending x_1 -> x_i
                for rest in itertools.permutations(
                        [m for m in range(1, h + 1) if m != i]):
                    images = (i,) + rest
                    pts_x = [xs[m - 1] for m in srcs]
                    pts_y = [xs[p - 1] for p in images]
                    balls = _lagrange_ball(pts_x, pts_y)
                    coeffs = [_reconstruct_rational(b, max_den) for b in balls]
                    if any(c is None for c in coeffs):
                        continue
                    cand = RatPolynomial(tuple(_trim(coeffs)))
                    if compose_identity_holds(hpol, cand, hpol) and _maps_to(
                            cand, xs[0], xs[i - 1]):
                        found = cand
                        break
                if found is None:
                    ok = False
                    break
                fs.append(found)
            if ok:
                return fs
    raise ReconstructionFailed(f"conjugate polynomials for {d.value} did not reconstruct")


def _trim(coeffs: list[Fraction]) -> list[Fraction]:
    out = list(coeffs)
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


@dataclass
class ProportionalityCertificate:
    triple: tuple[int, ...]
    minor_indices: tuple[int, int] | None
    minor_value: Fraction | None


def nonproportional(fs: list[RatPolynomial]) -> tuple[bool, list[ProportionalityCertificate]]:
    """For all admissible (i, j, k): f_1 - f_i is not a rational multiple of
    f_j - f_k; each certificate is a nonzero 2x2 minor of the coefficient
    matrix.  Index ranges match the orbit ratio set: 2 <= i,j <= h, j < k <= h.
    """
    h = len(fs)
    certs = []
    all_ok = True
    for i in range(2, h + 1):
        for j in range(2, h + 1):
            for k in range(j + 1, h + 1):
                p = fs[0] - fs[i - 1]
                q = fs[j - 1] - fs[k - 1]
                cert = _minor_certificate((i, j, k), p, q)
                certs.append(cert)
                if cert.minor_indices is None:
                    all_ok = False
    return all_ok, certs


def nonproportional_cross(fs: list[RatPolynomial], gs: list[RatPolynomial]
                          ) -> tuple[bool, list[ProportionalityCertificate]]:
    """No f_1 - f_i is proportional to any g_j - g_k (j < k, all pairs)."""
    h = len(fs)
    certs = []
    all_ok = True
    for i in range(2, h + 1):
        for j in range(1, len(gs) + 1):
            for k in range(j + 1, len(gs) + 1):
                p = fs[0] - fs[i - 1]
                q = gs[j - 1] - gs[k - 1]
                cert = _minor_certificate((i, j, k), p, q)
                certs.append(cert)
                if cert.minor_indices is None:
                    all_ok = False
    return all_ok, certs


def _minor_certificate(triple, p: RatPolynomial, q: RatPolynomial) -> ProportionalityCertificate:
    if p.is_zero() or q.is_zero():
        return ProportionalityCertificate(triple, None, None)
    n = max(len(p.coefficients), len(q.coefficients))
    a = list(p.coefficients) + [Fraction(0)] * (n - len(p.coefficients))
    b = list(q.coefficients) + [Fraction(0)] * (n - len(q.coefficients))
    for m in range(n):
        for k in range(m + 1, n):
            det = a[m] * b[k] - a[k] * b[m]
            if det != 0:
                return ProportionalityCertificate(triple, (m, k), det)
    return ProportionalityCertificate(triple, None, None)


def cross_pair_polynomials(dx: int, dy: int, prec_bits: int | None = None
                           ) -> tuple[list[RatPolynomial], list[RatPolynomial]]:
    """(f_i, g_i) with x_i = f_i(x), y_i = g_i(x) for a classified pair.

    g candidates come from interpolating every root bijection between the
    two orbits; only exact H_y(g) = 0 mod H_x survivors are kept, and there
    must be exactly h of them.
    """
    pair = tuple(sorted((int(dx), int(dy)), key=abs))
    if pair not in {tuple(p) for p in CROSS_PAIRS}:
        raise NotInClassifiedList(f"({dx}, {dy}) is not a classified cross pair")
    dxv, dyv = pair
    ddx, ddy = validate_discriminant(dxv), validate_discriminant(dyv)
    hx = hilbert_class_polynomial(ddx)
    hy = hilbert_class_polynomial(ddy)
    h = hx.degree
    assert hy.degree == h
    fs = conjugate_polynomials(ddx)
    if prec_bits is None:
        prec_bits = 256 + 2 * int(
            math.pi / math.log(2) * (math.isqrt(abs(dxv)) + math.isqrt(abs(dyv)))) * h
    for wp in precision_ladder(prec_bits, 1 << 16):
        with mp.workprec(wp):
            xs = [m.value for m in orbit(ddx, 64, abs_bits=wp // 2)]
            ys = [m.value for m in orbit(ddy, 64, abs_bits=wp // 2)]
            max_den = 1 << (wp // 3)
            gs: list[RatPolynomial] = []
            for perm in itertools.permutations(range(h)):
                balls = _lagrange_ball(xs, [ys[p] for p in perm])
                coeffs = [_reconstruct_rational(b, max_den) for b in balls]
                if any(c is None for c in coeffs):
                    continue
                cand = RatPolynomial(tuple(_trim(coeffs)))
                if cand in gs:
                    continue
                if compose_identity_holds(hy, cand, hx):
                    gs.append(cand)
            if len(gs) == h:
                return fs, gs
    raise ReconstructionFailed(f"cross polynomials for ({dx}, {dy}) did not reconstruct")


# ---------------------------------------------------------------------------
# The exceptional alpha of the quadratic example, and the classifier
# ---------------------------------------------------------------------------


def exceptional_alpha(dx: int, dy: int) -> Fraction | None:
    """The rational alpha = -(x - x')/(y - y') of the quadratic exception.

    Defined when both class numbers are 2 and the two (real quadratic)
    fields of moduli coincide.  Labeling convention: x is the conjugate with
    the larger real part, so x - x' = +sqrt(disc H_x) and the returned value
    is negative; the classifier treats +-alpha alike, since swapping y with
    y' flips the sign.  For dx = dy the value is 1.
    """
    ddx, ddy = validate_discriminant(int(dx)), validate_discriminant(int(dy))
    if len(reduced_forms(ddx)) != 2 or len(reduced_forms(ddy)) != 2:
        return None
    if ddx.value == ddy.value:
        return Fraction(1)
    dis_x = hilbert_class_polynomial(ddx).discriminant_quadratic()
    dis_y = hilbert_class_polynomial(ddy).discriminant_quadratic()
    assert dis_x > 0 and dis_y > 0
    prod = dis_x * dis_y
    r = math.isqrt(prod)
    if r * r != prod:
        return None  # different real quadratic fields
    return -Fraction(r, dis_y)  # -sqrt(dis_x / dis_y)


GENERATES = "generates"
EXCEPTION_QUAD = "exception-quadratic"
TRIVIAL_EQUAL = "trivial-equal"
SUM_DIFF = "sum-diff"
OUT_OF_CLASSIFICATION = "out-of-classification"


@dataclass(frozen=True)
class PrimitiveVerdict:
    kind: str
    alpha: Fraction | None = None
    subfield_index: int | None = None


def classify_primitive(dx: int, dy: int, alpha) -> PrimitiveVerdict:
    """Published classification of the field generated by x + alpha*y.

    * alpha = +-1 follows the sum/difference theorem: the difference always
      generates; the sum generates up to index 2 when the discriminants are
      equal.
    * other alpha generate Q(x, y) unless both class numbers are 2, the
      fields of moduli coincide, the discriminants differ, and |alpha|
      matches the exceptional ratio.
    """
    alpha = Fraction(alpha)
    if alpha == 0:
        raise InvalidAlpha("alpha must be nonzero")
    ddx, ddy = validate_discriminant(int(dx)), validate_discriminant(int(dy))
    same = ddx.value == ddy.value
    if same and len(reduced_forms(ddx)) == 1:
        return PrimitiveVerdict(TRIVIAL_EQUAL)
    if alpha == 1 and same:
        return PrimitiveVerdict(SUM_DIFF, subfield_index=2)
    if alpha == -1 and same:
        return PrimitiveVerdict(SUM_DIFF, subfield_index=1)
    if alpha in (1, -1):
        return PrimitiveVerdict(GENERATES)
    exc = exceptional_alpha(ddx.value, ddy.value)
    if exc is not None and not same and abs(alpha) == abs(exc):
        return PrimitiveVerdict(EXCEPTION_QUAD, alpha=alpha)
    return PrimitiveVerdict(GENERATES)


def certify_generation(dx: int, dy: int, alpha, prec_bits: int = 128
                       ) -> tuple[bool, CertifiedReal | None]:
    """Certified distinctness of x_a + alpha y_b over all index pairs.

    If every two sums with (a, b) != (c, d) are certified distinct, no
    Galois collision x + alpha y = (x + alpha y)^sigma with sigma moving the
    pair can exist, so x + alpha y generates Q(x, y) for every labeling.
    Returns (all_distinct, smallest certified gap); a collision needs sigma
    to move both coordinates, so when either class number is 1 the check is
    vacuous and (True, None) is returned.
    """
    alpha = Fraction(alpha)
    if alpha == 0:
        raise InvalidAlpha("alpha must be nonzero")
    ddx, ddy = validate_discriminant(int(dx)), validate_discriminant(int(dy))
    start = prec_bits + max(_orbit_abs_bits(ddx), _orbit_abs_bits(ddy))
    last_gap = None
    for wp in (start, 2 * start, 4 * start):
        with mp.workprec(wp):
            ab = CertifiedReal.from_fraction(alpha)
            xs = [m.value for m in orbit(ddx, 64, abs_bits=wp // 2)]
            ys = [m.value * ab for m in orbit(ddy, 64, abs_bits=wp // 2)]
            sums = [(a, b, xs[a] + ys[b]) for a in range(len(xs)) for b in range(len(ys))]
            min_gap = None
            undecided = False
            for t in range(len(sums)):
                for u in range(t + 1, len(sums)):
                    a, b, sab = sums[t]
                    c, dd, scd = sums[u]
                    if a == c or b == dd:
                        continue  # such sigma would fix the pair outright
                    gap = (sab - scd).abs()
                    min_gap = gap if min_gap is None else real_min(min_gap, gap)
                    if not gap.certified_gt(0):
                        undecided = True
            if min_gap is None:
                return True, None  # no sigma can move both coordinates
            last_gap = min_gap
            if not undecided:
                return True, min_gap
    # some gap stayed within its radius of zero at every rung: a collision
    # (to within the final certified radius), as happens for the exceptional
    # alpha of the quadratic example
    return False, last_gap
