"""Imaginary quadratic discriminants and reduced binary quadratic forms.

Everything here is exact integer / rational arithmetic.  A reduced form
(a, b, c) of discriminant D < 0 satisfies b^2 - 4ac = D, gcd(a,b,c) = 1 and
either -a < b <= a < c or 0 <= b <= a = c; these triples index the singular
moduli of discriminant D.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .ball import CertifiedReal, sqrt_int
from .errors import DegenerateInput, NotADiscriminant


def _squarefree_split(n: int) -> tuple[int, int]:
    """n = s * f^2 with s squarefree; trial division up to sqrt(n)."""
    if n <= 0:
        raise ValueError("need n > 0")
    s, f = 1, 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            f *= d ** (e // 2)
            if e % 2:
                s *= d
        d += 1 if d == 2 else 2
    return s * n, f


@dataclass(frozen=True, order=True)
class Discriminant:
    """A negative integer = 0,1 mod 4, factored as value = fundamental * conductor^2."""

    value: int
    fundamental: int
    conductor: int

    def __post_init__(self):
        assert self.value < 0 and self.value % 4 in (0, 1)
        assert self.value == self.fundamental * self.conductor ** 2

    def __abs__(self) -> int:
        return -self.value

    def __int__(self) -> int:
        return self.value


def validate_discriminant(n: int) -> Discriminant:
    """Check n is an imaginary quadratic discriminant and factor out its conductor."""
    if n >= 0 or n % 4 not in (0, 1):
        raise NotADiscriminant(f"{n} is not a negative discriminant (= 0,1 mod 4)")
    m = -n
    if n % 4 == 1:
        # conductor is odd here, so -s = 1 mod 4 automatically
        s, f = _squarefree_split(m)
        return Discriminant(n, -s, f)
    # n = 0 mod 4: write n = -4m', split m' squarefree
    s, f = _squarefree_split(m // 4)
    if (-s) % 4 == 1:
        # -s is already a valid discriminant; the factor 4 joins the conductor
        return Discriminant(n, -s, 2 * f)
    return Discriminant(n, -4 * s, f)


@dataclass(frozen=True, order=True)
class ReducedForm:
    a: int
    b: int
    c: int
    disc: Discriminant

    def __post_init__(self):
        a, b, c = self.a, self.b, self.c
        assert b * b - 4 * a * c == self.disc.value
        assert math.gcd(math.gcd(a, b), c) == 1
        assert a >= 1
        assert (-a < b <= a < c) or (0 <= b <= a == c)

    def is_ambiguous(self) -> bool:
        """Self-inverse class: b = 0, a = b, or a = c (real singular modulus)."""
        return self.b == 0 or self.a == self.b or self.a == self.c

    def tau_exact(self) -> tuple[Fraction, int, int]:
        """CM point (b + sqrt(D))/2a as (real part, |D|, 2a): Re + i sqrt(|D|)/(2a)."""
        return Fraction(self.b, 2 * self.a), abs(self.disc), 2 * self.a


DOMINANT = "dominant"
SUBDOMINANT = "subdominant"
GENERIC = "generic"


def dominance_class(form: ReducedForm) -> str:
    if form.a == 1:
        return DOMINANT
    if form.a == 2:
        return SUBDOMINANT
    return GENERIC


def reduced_forms(d: Discriminant) -> list[ReducedForm]:
    """All reduced forms of discriminant d, ordered lexicographically by (a, b)."""
    disc = d.value
    out = []
    a = 1
    while 4 * a * a <= 3 * (-disc):  # a <= sqrt(|D|/3)
        for b in range(-a + 1, a + 1):
            t = b * b - disc
            if t % (4 * a):
                continue
            c = t // (4 * a)
            if c < a:
                continue
            if a == c and b < 0:
                continue
            if math.gcd(math.gcd(a, b), c) != 1:
                continue
            out.append(ReducedForm(a, b, c, disc=d))
        a += 1
    out.sort(key=lambda f: (f.a, f.b))
    return out


def class_number(d: Discriminant) -> int:
    return len(reduced_forms(d))


def class_numbers_upto(limit: int) -> dict[int, int]:
    """h(D) for every discriminant with |D| <= limit, by one aggregated scan.

    Iterates reduced triples (a, b, c) directly, so the cost is the number of
    forms (~ limit^{3/2}) rather than limit^2.
    """
    counts: dict[int, int] = {}
    for n in range(3, limit + 1):
        if (-n) % 4 in (0, 1):
            counts[-n] = 0
    amax = math.isqrt(limit // 3) + 1
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            gab = math.gcd(a, b)
            c = a
            while 4 * a * c - b * b <= limit:
                # c >= a > |b|/... forces disc = b^2 - 4ac < 0 and = 0,1 mod 4
                disc = b * b - 4 * a * c
                if not (a == c and b < 0) and math.gcd(gab, c) == 1 and disc in counts:
                    counts[disc] += 1
                c += 1
    return counts


def dominance_census(d: Discriminant) -> tuple[int, int]:
    """(#dominant, #subdominant) forms; dominant count is always exactly 1."""
    forms = reduced_forms(d)
    ndom = sum(1 for f in forms if f.a == 1)
    nsub = sum(1 for f in forms if f.a == 2)
    return ndom, nsub


def expected_census(d: Discriminant) -> tuple[int, int]:
    """Subdominant counts predicted by the congruence class of the discriminant.

    For D = 1 mod 8 the two candidate forms are (2, +-1, (1-D)/8); they are
    distinct reduced forms only when (1-D)/8 > 2, so -15 joins -7 as an
    exception (at -15 the two collapse to the single boundary form (2,1,2)).
    """
    v = d.value
    if v % 8 == 1 and v not in (-7, -15):
        return 1, 2
    if (v % 16 in (8, 12) and v not in (-4, -8)) or v == -15:
        return 1, 1
    if v % 8 == 5 or v % 16 in (0, 4) or v in (-7, -4, -8):
        return 1, 0
    raise AssertionError(f"unreachable congruence class for {v}")


class SqrtRational:
    """Exact nonnegative number of the form sqrt(q), q rational >= 0."""

    __slots__ = ("squared",)

    def __init__(self, squared: Fraction):
        squared = Fraction(squared)
        if squared < 0:
            raise ValueError("negative radicand")
        self.squared = squared

    def to_ball(self) -> CertifiedReal:
        return sqrt_int(self.squared.numerator) / sqrt_int(self.squared.denominator)

    def __eq__(self, other):
        if isinstance(other, SqrtRational):
            return self.squared == other.squared
        q = Fraction(other)
        return q >= 0 and q * q == self.squared

    def __repr__(self):
        return f"SqrtRational(sqrt({self.squared}))"


class QuadraticNumber:
    """(-b + sqrt(D)) / 2a with a > 0, D < 0: an imaginary quadratic number.

    The triple must come from an integer polynomial a X^2 + b X + c, i.e.
    (b^2 - D) must be divisible by 4a.
    """

    __slots__ = ("a", "b", "disc")

    def __init__(self, a: int, b: int, disc: int):
        if a <= 0:
            raise ValueError("leading coefficient must be positive")
        if disc >= 0:
            raise ValueError("need a negative discriminant")
        if (b * b - disc) % (4 * a):
            raise ValueError("(a, b, disc) is not integral: 4a must divide b^2 - disc")
        g = math.gcd(math.gcd(a, b), (b * b - disc) // (4 * a))
        if g != 1:
            raise ValueError("minimal polynomial must be primitive")
        self.a, self.b, self.disc = a, b, disc

    def key(self):
        return (self.a, self.b, self.disc)

    def imag_squared(self) -> Fraction:
        return Fraction(-self.disc, 4 * self.a * self.a)


def separate_quadratic(alpha: QuadraticNumber, alpha2: QuadraticNumber) -> tuple[str, SqrtRational]:
    """Explicit lower bound for |alpha - alpha2| between distinct imaginary
    quadratic numbers with positive imaginary part.

    Returns (branch, bound) where branch is "unequal" or "equal" according to
    whether the imaginary parts differ, and bound is an exact sqrt of a
    rational:

      unequal:  2 Im(a) Im(a') min(Im a, Im a') / (|D| |D'|)
      equal:    Im(a) / (|D| |D'|)^{1/4}
    """
    if alpha.key() == alpha2.key():
        raise DegenerateInput("the two quadratic numbers are equal")
    D, D2 = abs(alpha.disc), abs(alpha2.disc)
    a, a2 = alpha.a, alpha2.a
    im2, im2_2 = alpha.imag_squared(), alpha2.imag_squared()
    if im2 == im2_2:  # a'^2 |D| == a^2 |D'|, exact comparison
        # Im(a) / (|D| |D'|)^{1/4}; with equal imaginary parts this collapses
        # to 1 / (2 sqrt(a a')), the square root of a rational.
        return "equal", SqrtRational(Fraction(1, 4 * a * a2))
    m2 = min(im2, im2_2)
    bound_sq = 4 * im2 * im2_2 * m2 / (D * D) / (D2 * D2)
    return "unequal", SqrtRational(bound_sq)
