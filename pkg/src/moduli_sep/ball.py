"""Certified midpoint-radius arithmetic on top of mpmath.

Every approximate quantity in this package is a ball: an mpmath midpoint
together with a nonnegative error radius guaranteed to contain the exact
value.  Radii are ordinary mpf numbers (unbounded exponent range), and all
pass/fail decisions are taken by converting midpoint and radius to exact
`fractions.Fraction` values, so no comparison ever depends on float
rounding.

Rounding model.  mpmath's field operations on mpf are correctly rounded at
the working precision; compound mpc operations and transcendental functions
are accurate to a few ulps.  We absorb both into per-operation slack factors
of 2**(k - prec) with generous k (see the ``_SLACK_*`` constants), and all
radius bookkeeping is done with an additional multiplicative bump so that
float rounding inside the radius computation itself can never shrink a
radius.  The resulting balls are conservative rather than optimal.
"""

from __future__ import annotations

from fractions import Fraction

from mpmath import mp, mpf, mpc

from .errors import DegenerateDenominator

# Upward fudge applied after every radius computation; covers the (tiny)
# rounding error of the radius arithmetic itself.
_BUMP = None
_BUMP_PREC = None

_SLACK_ADD = 2
_SLACK_MUL = 4
_SLACK_DIV = 5
_SLACK_FUN = 8  # exp, log, sqrt, gamma, ... (mpmath: "a few ulps")


def _bump():
    global _BUMP, _BUMP_PREC
    if _BUMP_PREC != mp.prec:
        _BUMP = mpf(1) + mpf(2) ** -20
        _BUMP_PREC = mp.prec
    return _BUMP


def _up(x):
    """Round a nonnegative radius upward (conservatively)."""
    return x * _bump()


def _eps(kind=_SLACK_ADD):
    return mpf(2) ** (kind - mp.prec)


def mpf_to_fraction(x) -> Fraction:
    """Exact conversion of a finite mpf to a Fraction."""
    sign, man, exp, _ = x._mpf_
    man = int(man)  # gmpy2 backend stores an mpz here
    exp = int(exp)
    if man == 0:
        if exp == 0:
            return Fraction(0)
        raise ValueError(f"non-finite mpf {x!r}")
    if exp >= 0:
        r = Fraction(man * (1 << exp))
    else:
        r = Fraction(man, 1 << -exp)
    return -r if sign else r


def fraction_to_mpf(fr) -> mpf:
    """Round a Fraction (or int) to the current working precision."""
    fr = Fraction(fr)
    return mpf(fr.numerator) / mpf(fr.denominator)


class CertifiedReal:
    """A real number known to lie within ``rad`` of ``mid``.

    Construction never re-rounds an mpf midpoint or radius: mpmath
    conversions round to the ambient precision, which would silently move a
    midpoint without widening the radius.
    """

    __slots__ = ("mid", "rad")

    def __init__(self, mid, rad=0):
        self.mid = mid if isinstance(mid, mpf) else mpf(mid)
        self.rad = rad if isinstance(rad, mpf) else mpf(rad)
        if self.rad < 0:
            raise ValueError("negative radius")

    @classmethod
    def exact(cls, value):
        """Ball of radius zero around an exact int (no rounding allowed)."""
        m = mpf(value)
        if int(m) != value:
            raise ValueError(f"{value} not representable exactly")
        return cls(m, 0)

    @classmethod
    def from_fraction(cls, fr):
        fr = Fraction(fr)
        mid = fraction_to_mpf(fr)
        return cls(mid, _up(abs(mid) * _eps(_SLACK_DIV)))

    @classmethod
    def from_endpoints(cls, lo, hi):
        mid = (lo + hi) / 2
        rad = _up((hi - lo) / 2 + abs(mid) * _eps())
        return cls(mid, rad)

    # -- exact views -------------------------------------------------------

    def lower(self) -> Fraction:
        return mpf_to_fraction(self.mid) - mpf_to_fraction(self.rad)

    def upper(self) -> Fraction:
        return mpf_to_fraction(self.mid) + mpf_to_fraction(self.rad)

    def certified_ge(self, bound) -> bool:
        """True iff the whole ball is >= bound (an exact rational)."""
        return self.lower() >= Fraction(bound)

    def certified_le(self, bound) -> bool:
        return self.upper() <= Fraction(bound)

    def certified_gt(self, bound) -> bool:
        return self.lower() > Fraction(bound)

    def certified_lt(self, bound) -> bool:
        return self.upper() < Fraction(bound)

    def straddles(self, bound) -> bool:
        b = Fraction(bound)
        return self.lower() < b < self.upper()

    def contains(self, value) -> bool:
        v = Fraction(value)
        return self.lower() <= v <= self.upper()

    def contains_zero(self) -> bool:
        return self.contains(0)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        other = _as_real(other)
        mid = self.mid + other.mid
        rad = _up(self.rad + other.rad + abs(mid) * _eps())
        return CertifiedReal(mid, rad)

    __radd__ = __add__

    def __neg__(self):
        # binary 0 - x is exactly rounded; unary minus may re-round
        z = mpf(0) - self.mid
        return CertifiedReal(z, _up(self.rad + abs(z) * _eps()))

    def __sub__(self, other):
        other = _as_real(other)
        mid = self.mid - other.mid
        rad = _up(self.rad + other.rad + abs(mid) * _eps())
        return CertifiedReal(mid, rad)

    def __rsub__(self, other):
        return _as_real(other) - self

    def __mul__(self, other):
        other = _as_real(other)
        mid = self.mid * other.mid
        rad = _up(
            abs(self.mid) * other.rad
            + abs(other.mid) * self.rad
            + self.rad * other.rad
            + abs(mid) * _eps(_SLACK_MUL)
        )
        return CertifiedReal(mid, rad)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_real(other)
        if not (mpf_to_fraction(abs(other.mid)) > mpf_to_fraction(other.rad)):
            raise DegenerateDenominator("denominator interval contains zero")
        dlo = abs(other.mid) * (1 - _eps()) - _up(other.rad)
        if dlo <= 0:
            raise DegenerateDenominator("denominator too close to zero at this precision")
        mid = self.mid / other.mid
        rad = _up(
            (abs(self.mid) * other.rad + abs(other.mid) * self.rad
             + self.rad * other.rad) / (abs(other.mid) * dlo)
            + abs(mid) * _eps(_SLACK_DIV)
        )
        return CertifiedReal(mid, rad)

    def __rtruediv__(self, other):
        return _as_real(other) / self

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers")
        out = CertifiedReal(mpf(1), 0)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def __abs__(self):
        if self.certified_ge(0):
            return CertifiedReal(self.mid, self.rad)
        if self.certified_le(0):
            return -self
        # straddles zero: |x| in [0, |mid|+rad]
        hi = _up(abs(self.mid) + self.rad)
        return CertifiedReal(hi / 2, _up(hi / 2))

    def __repr__(self):
        return f"CertifiedReal({self.mid!r}, rad={self.rad!r})"


def _as_real(x) -> CertifiedReal:
    if isinstance(x, CertifiedReal):
        return x
    if isinstance(x, int):
        return CertifiedReal(mpf(x), 0) if _int_exact(x) else CertifiedReal.from_fraction(x)
    if isinstance(x, Fraction):
        return CertifiedReal.from_fraction(x)
    if isinstance(x, mpf) or isinstance(x, float):
        return CertifiedReal(mpf(x), 0)  # taken verbatim as a dyadic
    raise TypeError(f"cannot coerce {type(x)} to CertifiedReal")


def _int_exact(n: int) -> bool:
    m = mpf(n)
    try:
        return int(m) == n
    except (OverflowError, ValueError):
        return False


# -- monotone / special real functions -------------------------------------


def real_sqrt(x: CertifiedReal) -> CertifiedReal:
    """Square root of a certified nonnegative real (lower endpoint clipped at 0)."""
    lo = x.mid - x.rad
    if lo < 0:
        lo = mpf(0)
    hi = x.mid + x.rad
    slo = mp.sqrt(lo) * (1 - _eps(_SLACK_FUN))
    shi = mp.sqrt(hi) * (1 + _eps(_SLACK_FUN))
    if slo < 0:
        slo = mpf(0)
    return CertifiedReal.from_endpoints(slo, shi)


def sqrt_int(n: int) -> CertifiedReal:
    """Certified square root of a nonnegative integer at working precision."""
    if n < 0:
        raise ValueError("sqrt_int needs n >= 0")
    mid = mp.sqrt(mpf(n))
    return CertifiedReal(mid, _up(abs(mid) * _eps(_SLACK_FUN)))


def real_cbrt(x: CertifiedReal) -> CertifiedReal:
    """Cube root of a certified nonnegative real."""
    lo = x.mid - x.rad
    if lo < 0:
        lo = mpf(0)
    hi = x.mid + x.rad
    clo = mp.cbrt(lo) * (1 - _eps(_SLACK_FUN))
    chi = mp.cbrt(hi) * (1 + _eps(_SLACK_FUN))
    if clo < 0:
        clo = mpf(0)
    return CertifiedReal.from_endpoints(clo, chi)


def real_exp(x: CertifiedReal) -> CertifiedReal:
    lo = mp.exp(x.mid - x.rad) * (1 - _eps(_SLACK_FUN))
    hi = mp.exp(x.mid + x.rad) * (1 + _eps(_SLACK_FUN))
    return CertifiedReal.from_endpoints(lo, hi)


def real_log(x: CertifiedReal) -> CertifiedReal:
    """Natural log of a certified positive real."""
    if not x.certified_gt(0):
        raise DegenerateDenominator("log of an interval touching zero")
    xlo = x.mid - x.rad
    if xlo <= 0:
        raise DegenerateDenominator("log interval too close to zero at this precision")
    scale = _eps(_SLACK_FUN) * (1 + abs(mp.log(x.mid)))
    lo = mp.log(xlo) - scale
    hi = mp.log(x.mid + x.rad) + scale
    return CertifiedReal.from_endpoints(lo, hi)


def gamma_fraction(fr) -> CertifiedReal:
    """Certified Gamma(p/q) for a positive rational argument.

    The argument interval must avoid Gamma's interior minimum near 1.4616 so
    that the endpoint evaluations bracket the true range.
    """
    fr = Fraction(fr)
    if fr <= 0:
        raise ValueError("gamma_fraction needs a positive argument")
    if Fraction(14, 10) < fr < Fraction(15, 10):
        raise ValueError("argument too close to Gamma's minimum for endpoint bracketing")
    arg = CertifiedReal.from_fraction(fr)
    mid = mp.gamma(arg.mid)
    lo = mp.gamma(arg.mid - arg.rad)
    hi = mp.gamma(arg.mid + arg.rad)
    spread = max(abs(mid - lo), abs(mid - hi))
    rad = _up(2 * spread + abs(mid) * _eps(_SLACK_FUN))
    return CertifiedReal(mid, rad)


def const_pi() -> CertifiedReal:
    mid = +mp.pi
    return CertifiedReal(mid, _up(mid * _eps(_SLACK_ADD)))


def real_min(a: CertifiedReal, b: CertifiedReal) -> CertifiedReal:
    lo = min(a.mid - a.rad, b.mid - b.rad)
    hi = min(a.mid + a.rad, b.mid + b.rad)
    return CertifiedReal.from_endpoints(lo, hi)


def real_max(a: CertifiedReal, b: CertifiedReal) -> CertifiedReal:
    lo = max(a.mid - a.rad, b.mid - b.rad)
    hi = max(a.mid + a.rad, b.mid + b.rad)
    return CertifiedReal.from_endpoints(lo, hi)


class CertifiedComplex:
    """A complex number known to lie within ``rad`` of ``mid``.

    As with CertifiedReal, construction never re-rounds mpc midpoints.
    """

    __slots__ = ("mid", "rad")

    def __init__(self, mid, rad=0):
        self.mid = mid if isinstance(mid, mpc) else mpc(mid)
        self.rad = rad if isinstance(rad, mpf) else mpf(rad)
        if self.rad < 0:
            raise ValueError("negative radius")

    @classmethod
    def exact(cls, value):
        return cls(mpc(value), 0)

    @classmethod
    def from_real(cls, x: CertifiedReal):
        return cls(mpc(x.mid), x.rad)

    def real(self) -> CertifiedReal:
        return CertifiedReal(self.mid.real, self.rad)

    def imag(self) -> CertifiedReal:
        return CertifiedReal(self.mid.imag, self.rad)

    def conjugate(self) -> "CertifiedComplex":
        return CertifiedComplex(self.mid.conjugate(), self.rad)

    def __add__(self, other):
        other = _as_complex(other)
        mid = self.mid + other.mid
        rad = _up(self.rad + other.rad + _cabs_hi(mid) * _eps())
        return CertifiedComplex(mid, rad)

    __radd__ = __add__

    def __neg__(self):
        z = mpc(0) - self.mid
        return CertifiedComplex(z, _up(self.rad + _cabs_hi(z) * _eps()))

    def __sub__(self, other):
        other = _as_complex(other)
        mid = self.mid - other.mid
        rad = _up(self.rad + other.rad + _cabs_hi(mid) * _eps())
        return CertifiedComplex(mid, rad)

    def __rsub__(self, other):
        return _as_complex(other) - self

    def __mul__(self, other):
        other = _as_complex(other)
        mid = self.mid * other.mid
        rad = _up(
            _cabs_hi(self.mid) * other.rad
            + _cabs_hi(other.mid) * self.rad
            + self.rad * other.rad
            + _cabs_hi(mid) * _eps(_SLACK_MUL)
        )
        return CertifiedComplex(mid, rad)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_complex(other)
        if not self._denominator_ok(other):
            raise DegenerateDenominator("denominator interval contains zero")
        om = _cabs_lo(other.mid)
        dlo = om - _up(other.rad)
        if dlo <= 0:
            raise DegenerateDenominator("denominator too close to zero at this precision")
        mid = self.mid / other.mid
        rad = _up(
            (_cabs_hi(self.mid) * other.rad + _cabs_hi(other.mid) * self.rad
             + self.rad * other.rad) / (om * dlo)
            + _cabs_hi(mid) * _eps(_SLACK_DIV)
        )
        return CertifiedComplex(mid, rad)

    def __rtruediv__(self, other):
        return _as_complex(other) / self

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers")
        out = CertifiedComplex(mpc(1), 0)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    @staticmethod
    def _denominator_ok(other) -> bool:
        re = mpf_to_fraction(other.mid.real)
        im = mpf_to_fraction(other.mid.imag)
        r = mpf_to_fraction(other.rad)
        return re * re + im * im > r * r

    def abs(self) -> CertifiedReal:
        mid = abs(self.mid)
        rad = _up(self.rad + mid * _eps(_SLACK_MUL))
        lo = mid - rad
        if lo < 0:
            return CertifiedReal.from_endpoints(mpf(0), mid + rad)
        return CertifiedReal(mid, rad)

    def __abs__(self):
        return self.abs()

    def distance(self, other: "CertifiedComplex") -> CertifiedReal:
        return (self - other).abs()

    def overlaps(self, other: "CertifiedComplex") -> bool:
        """True iff the two balls intersect (values could be equal)."""
        d = self.distance(other)
        return not d.certified_gt(0)

    def certified_distinct(self, other: "CertifiedComplex") -> bool:
        return self.distance(other).certified_gt(0)

    def contains_int_point(self, re: int, im: int = 0) -> bool:
        dr = mpf_to_fraction(self.mid.real) - re
        di = mpf_to_fraction(self.mid.imag) - im
        return dr * dr + di * di <= mpf_to_fraction(self.rad) ** 2

    def is_certified_real(self) -> bool:
        """Imaginary part cannot be distinguished from 0 at this radius."""
        return abs(mpf_to_fraction(self.mid.imag)) <= mpf_to_fraction(self.rad)

    def __repr__(self):
        return f"CertifiedComplex({self.mid!r}, rad={self.rad!r})"


def _as_complex(x) -> CertifiedComplex:
    if isinstance(x, CertifiedComplex):
        return x
    if isinstance(x, CertifiedReal):
        return CertifiedComplex.from_real(x)
    if isinstance(x, Fraction):
        return CertifiedComplex.from_real(CertifiedReal.from_fraction(x))
    if isinstance(x, (int, mpf, float, mpc, complex)):
        if isinstance(x, int) and not _int_exact(x):
            return CertifiedComplex.from_real(CertifiedReal.from_fraction(x))
        return CertifiedComplex(mpc(x), 0)
    raise TypeError(f"cannot coerce {type(x)} to CertifiedComplex")


def _cabs_hi(z) -> mpf:
    """Upper-ish estimate of |z| (bumped)."""
    return _up(abs(z))


def _cabs_lo(z) -> mpf:
    """Lower-ish estimate of |z| (bumped down)."""
    return abs(z) * (1 - _eps(_SLACK_MUL))


def complex_exp(z: CertifiedComplex) -> CertifiedComplex:
    """exp of a certified complex; |e^w - e^z| <= |e^z| (e^{|w-z|} - 1)."""
    mid = mp.exp(z.mid)
    m = _cabs_hi(mid)
    if z.rad == 0:
        wobble = mpf(0)
    else:
        wobble = _up(mp.expm1(_up(z.rad)))
    rad = _up(m * wobble + m * _eps(_SLACK_FUN))
    return CertifiedComplex(mid, rad)
