"""Certified evaluation of the modular j-function and friends.

All series evaluations are balls: exact integer q-expansion coefficients,
midpoint Horner evaluation, a derivative-based propagation bound for the
argument's radius, a floating-point rounding bound, and a rigorous bound on
the truncated tail.

Tail bounds use c_n <= 2 e^{4 pi sqrt n} for the coefficients of j.  This
follows from positivity of the c_n: c_n e^{-2 pi n y} <= j0(iy) for every
y > 0, and choosing y = 1/sqrt(n) together with j(i/y) = j(iy) gives
c_n <= e^{2 pi sqrt n} (e^{2 pi sqrt n} + j0(i)) with j0(i) < 449.
Eisenstein coefficients are bounded by sigma_k(n) <= zeta(k) n^k.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpf, mpc

from .ball import (
    CertifiedComplex,
    CertifiedReal,
    _as_real,
    _up,
    complex_exp,
    const_pi,
    gamma_fraction,
    mpf_to_fraction,
    real_cbrt,
    real_log,
    real_max,
    real_min,
    sqrt_int,
)
from .errors import DomainError, PrecisionExhausted

DEFAULT_PREC = 128
PREC_CAP = 8192

# Minimum imaginary part accepted by the direct q-series (the spec'd uses all
# have Im z >= 1/2; the envelopes need to reach down to sqrt(3)/2 - R).
MIN_IMAG = Fraction(1, 4)

_GUARD_BITS = 32


def precision_ladder(start: int, cap: int = PREC_CAP):
    """Yield working precisions start, 2*start, ..., capped at ``cap``."""
    p = start
    while True:
        yield p
        if p >= cap:
            return
        p = min(2 * p, cap)


# ---------------------------------------------------------------------------
# Exact integer q-expansions
# ---------------------------------------------------------------------------


def _sigma_list(k: int, n: int) -> list[int]:
    """[sigma_k(1), ..., sigma_k(n)] by a divisor sieve."""
    out = [0] * (n + 1)
    for d in range(1, n + 1):
        dk = d ** k
        for m in range(d, n + 1, d):
            out[m] += dk
    return out[1:]


def _poly_mul_trunc(p: list[int], q: list[int], n: int) -> list[int]:
    out = [0] * (n + 1)
    for i, pi in enumerate(p):
        if pi == 0 or i > n:
            continue
        for j, qj in enumerate(q):
            if i + j > n:
                break
            out[i + j] += pi * qj
    return out


def _poly_inv_trunc(p: list[int], n: int) -> list[int]:
    """Inverse of a power series with p[0] = 1, exact integer recurrence."""
    assert p[0] == 1
    inv = [0] * (n + 1)
    inv[0] = 1
    for m in range(1, n + 1):
        acc = 0
        for i in range(1, min(m, len(p) - 1) + 1):
            acc += p[i] * inv[m - i]
        inv[m] = -acc
    return inv


def _euler_phi24(n: int) -> list[int]:
    """Coefficients of prod_{m>=1} (1 - q^m)^24 up to q^n (exact)."""
    phi = [0] * (n + 1)
    k = 0
    while True:
        for kk in (k, -k) if k else (0,):
            e = kk * (3 * kk - 1) // 2
            if e <= n:
                phi[e] += (-1) ** (kk % 2)
        k += 1
        if k * (3 * k - 1) // 2 > n and k * (3 * k + 1) // 2 > n:
            break
    p2 = _poly_mul_trunc(phi, phi, n)
    p4 = _poly_mul_trunc(p2, p2, n)
    p8 = _poly_mul_trunc(p4, p4, n)
    p16 = _poly_mul_trunc(p8, p8, n)
    return _poly_mul_trunc(p16, p8, n)


_jcoeffs_cache: list[int] = []


def j_coefficients(n: int) -> list[int]:
    """Exact [c_{-1}, c_0, ..., c_n] of j(z) = sum c_m q^m, from E4^3 / Delta."""
    if n < 0:
        raise ValueError("need n >= 0")
    global _jcoeffs_cache
    if len(_jcoeffs_cache) < n + 2:
        m = max(n + 1, 2 * len(_jcoeffs_cache), 64)
        sig3 = _sigma_list(3, m)
        e4 = [1] + [240 * s for s in sig3]
        e4cu = _poly_mul_trunc(_poly_mul_trunc(e4, e4, m), e4, m)
        w = _euler_phi24(m)  # Delta = q * w(q)
        winv = _poly_inv_trunc(w, m)
        c = _poly_mul_trunc(e4cu, winv, m)  # j = q^{-1} * (E4^3 * w^{-1})
        _jcoeffs_cache = c
    out = _jcoeffs_cache[: n + 2]
    assert out[0] == 1 and out[1] == 744
    return list(out)


def eisenstein_coefficients(weight: int, n: int) -> list[int]:
    """Exact [a_0, ..., a_n] of E_weight, weight in {4, 6}."""
    if weight == 4:
        return [1] + [240 * s for s in _sigma_list(3, n)]
    if weight == 6:
        return [1] + [-504 * s for s in _sigma_list(5, n)]
    raise ValueError("weight must be 4 or 6")


@dataclass(frozen=True)
class JSeriesContext:
    """Exact truncated q-expansion of j plus the working precision it serves."""

    coeffs: tuple[int, ...]  # c_{-1} .. c_N
    trunc: int
    prec_bits: int

    def __post_init__(self):
        assert self.coeffs[0] == 1 and self.coeffs[1] == 744
        assert self.coeffs[2:5] == (196884, 21493760, 864299970)[: max(0, len(self.coeffs) - 2)]
        assert all(c > 0 for c in self.coeffs[2:])


def j_series_context(trunc: int, prec_bits: int) -> JSeriesContext:
    return JSeriesContext(tuple(j_coefficients(trunc)), trunc, prec_bits)


# ---------------------------------------------------------------------------
# Tail bounds
# ---------------------------------------------------------------------------


def _tail_bound_j(n_from: int, x_up, weight: int):
    """Upper bound for sum_{n >= n_from} n^weight c_n x^n, 0 < x < 1.

    Uses c_n <= 2 e^{4 pi sqrt n} (see module docstring).  Returns None when
    the geometric domination ratio is not < 1 yet.
    """
    assert n_from >= 1
    sq = mp.sqrt(n_from)
    ratio = _up((1 + mpf(1) / n_from) ** weight * mp.exp(2 * mp.pi / sq) * x_up)
    if ratio >= 1:
        return None
    lead = _up(2 * mpf(n_from) ** weight * mp.exp(4 * mp.pi * sq * (1 + mpf(2) ** -30)) * x_up ** n_from)
    return _up(lead / (1 - ratio))


def _tail_bound_power(n_from: int, x_up, coeff, power: int):
    """Upper bound for sum_{n >= n_from} coeff * n^power * x^n, 0 < x < 1."""
    ratio = _up((1 + mpf(1) / n_from) ** power * x_up)
    if ratio >= 1:
        return None
    lead = _up(mpf(coeff) * mpf(n_from) ** power * x_up ** n_from)
    return _up(lead / (1 - ratio))


def _pick_trunc(x_up, weight: int, target) -> int:
    n = 8
    while True:
        t = _tail_bound_j(n + 1, x_up, weight)
        if t is not None and t <= target:
            return n
        n = n + max(8, n // 2)
        if n > 200000:
            raise PrecisionExhausted("q-series truncation did not converge", mp.prec)


# ---------------------------------------------------------------------------
# Ball evaluation of integer polynomials
# ---------------------------------------------------------------------------


def eval_int_poly(coeffs, w):
    """Certified value of sum coeffs[k] w^k for exact integer coefficients.

    Works for CertifiedComplex or CertifiedReal w; the radius combines the
    derivative bound S1(u) * rad(w) with a Horner rounding term.
    """
    deg = len(coeffs) - 1
    complex_in = isinstance(w, CertifiedComplex)
    wm = w.mid
    acc = wm * 0
    for c in reversed(coeffs):
        acc = acc * wm + c
    u = _up(abs(wm) + w.rad)
    s0 = mpf(0)
    s1 = mpf(0)
    for c in reversed(coeffs):
        s1 = s1 * u + s0
        s0 = s0 * u + abs(c)
    slop = mpf(1) + (4 * deg + 8) * mpf(2) ** -20  # radius-arithmetic fudge
    s0 *= slop
    s1 *= slop
    rad = _up(s1 * w.rad + (4 * deg + 8) * mpf(2) ** (4 - mp.prec) * s0)
    if complex_in:
        return CertifiedComplex(acc, rad)
    return CertifiedReal(acc, rad)


# ---------------------------------------------------------------------------
# Core q-series evaluation
# ---------------------------------------------------------------------------


def _imag_lower(z: CertifiedComplex) -> Fraction:
    return z.imag().lower()


def _qabs_upper(y_lo: Fraction):
    """Upper mpf bound for e^{-2 pi y_lo}."""
    y = _as_real(y_lo)
    t = (-2) * const_pi() * y
    return _up(mp.exp(t.mid + t.rad) * (1 + mpf(2) ** -20))


def eval_j_ball(z: CertifiedComplex, deriv: int = 0, tail_target=None) -> CertifiedComplex:
    """Single-shot certified j(z) (deriv=0) or j'(z) (deriv=1) at mp.prec.

    The caller owns precision selection and escalation.  Requires
    Im z >= MIN_IMAG (certified).
    """
    y_lo = _imag_lower(z)
    if y_lo < MIN_IMAG:
        raise DomainError(f"Im z must be >= {MIN_IMAG} (got lower bound {float(y_lo)})")
    x_up = _qabs_upper(y_lo)
    if tail_target is None:
        tail_target = _up(mp.exp(2 * mp.pi * mpf(float(y_lo)))) * mpf(2) ** (-mp.prec + 10)
    n = _pick_trunc(x_up, deriv, tail_target)
    tail = _tail_bound_j(n + 1, x_up, deriv)
    cs = j_coefficients(n)
    pi_b = const_pi()
    u = z * CertifiedComplex.from_real(2 * pi_b) * 1j
    q = complex_exp(u)
    qinv = complex_exp(-u)
    if deriv == 0:
        # j = q^{-1} + 744 + sum_{n>=1} c_n q^n
        body = eval_int_poly(cs[2:], q) * q  # sum c_n q^{n-1} * q
        val = qinv + 744 + body + CertifiedComplex(0, tail)
        return val
    if deriv == 1:
        # j' = 2 pi i (-q^{-1} + sum_{n>=1} n c_n q^n)
        dcs = [m * c for m, c in enumerate(cs[2:], start=1)]
        body = eval_int_poly(dcs, q) * q
        inner = -qinv + body + CertifiedComplex(0, tail)
        return inner * CertifiedComplex.from_real(2 * pi_b) * 1j
    raise ValueError("deriv must be 0 or 1")


def _contract_ok(val, prec_bits: int) -> bool:
    lim = Fraction(2) ** (1 - prec_bits)
    if isinstance(val, CertifiedComplex):
        # max(|re|, |im|) <= |mid|, so this check is stricter than the contract
        mag = max(abs(mpf_to_fraction(val.mid.real)), abs(mpf_to_fraction(val.mid.imag)))
    else:
        mag = abs(mpf_to_fraction(val.mid))
    return mpf_to_fraction(val.rad) <= lim * (1 + mag)


def _eval_with_ladder(make, prec_bits: int, cap: int = PREC_CAP):
    last = None
    for wp in precision_ladder(prec_bits + _GUARD_BITS, cap):
        with mp.workprec(wp):
            last = make()
            if _contract_ok(last, prec_bits):
                return last
    raise PrecisionExhausted("target radius not reached at the precision cap", cap)


def _exact_mpc(z) -> mpc:
    """Exact-input view: never re-round an mpf/mpc the caller hands over."""
    if isinstance(z, CertifiedComplex):
        return z.mid
    if isinstance(z, mpc):
        return z
    return mpc(z)


def eval_j(z, prec_bits: int = DEFAULT_PREC) -> CertifiedComplex:
    """Certified j(z) with rad <= 2^{1-prec} (1 + |mid|).

    z may be complex/mpc (taken as exact) or a CertifiedComplex; for a ball
    input the contract is best-effort since the input radius is intrinsic.
    """
    if isinstance(z, CertifiedComplex) and z.rad > 0:
        with mp.workprec(prec_bits + _GUARD_BITS):
            return eval_j_ball(z, 0)
    zx = _exact_mpc(z)
    return _eval_with_ladder(lambda: eval_j_ball(CertifiedComplex(zx, 0), 0), prec_bits)


def eval_j_prime(z, prec_bits: int = DEFAULT_PREC) -> CertifiedComplex:
    """Certified j'(z), same contract as eval_j."""
    if isinstance(z, CertifiedComplex) and z.rad > 0:
        with mp.workprec(prec_bits + _GUARD_BITS):
            return eval_j_ball(z, 1)
    zx = _exact_mpc(z)
    return _eval_with_ladder(lambda: eval_j_ball(CertifiedComplex(zx, 0), 1), prec_bits)


# ---------------------------------------------------------------------------
# Eisenstein series and the discriminant form
# ---------------------------------------------------------------------------

_ZETA3_UP = Fraction(121, 100)  # zeta(3) = 1.2020...
_ZETA5_UP = Fraction(104, 100)  # zeta(5) = 1.0369...


def eval_eisenstein_ball(z: CertifiedComplex, weight: int) -> CertifiedComplex:
    y_lo = _imag_lower(z)
    if y_lo < MIN_IMAG:
        raise DomainError("Im z too small for the Eisenstein series")
    x_up = _qabs_upper(y_lo)
    target = mpf(2) ** (-mp.prec + 6)
    const = 240 * _ZETA3_UP if weight == 4 else 504 * _ZETA5_UP
    power = weight - 1
    n = 8
    while True:
        t = _tail_bound_power(n + 1, x_up, mpf(const.numerator) / const.denominator, power)
        if t is not None and t <= target:
            break
        n += max(8, n // 2)
        if n > 200000:
            raise PrecisionExhausted("Eisenstein truncation did not converge", mp.prec)
    cs = eisenstein_coefficients(weight, n)
    pi_b = const_pi()
    q = complex_exp(z * CertifiedComplex.from_real(2 * pi_b) * 1j)
    return eval_int_poly(cs, q) + CertifiedComplex(0, t)


def eval_eisenstein(z, weight: int, prec_bits: int = DEFAULT_PREC) -> CertifiedComplex:
    if weight not in (4, 6):
        raise ValueError("weight must be 4 or 6")
    if isinstance(z, CertifiedComplex) and z.rad > 0:
        with mp.workprec(prec_bits + _GUARD_BITS):
            return eval_eisenstein_ball(z, weight)
    zx = _exact_mpc(z)
    return _eval_with_ladder(
        lambda: eval_eisenstein_ball(CertifiedComplex(zx, 0), weight), prec_bits
    )


def eval_delta_ball(z: CertifiedComplex, method: str = "eisenstein") -> CertifiedComplex:
    if method == "eisenstein":
        e4 = eval_eisenstein_ball(z, 4)
        e6 = eval_eisenstein_ball(z, 6)
        return (e4 ** 3 - e6 ** 2) / 1728
    if method == "product":
        y_lo = _imag_lower(z)
        if y_lo < MIN_IMAG:
            raise DomainError("Im z too small for the product formula")
        x_up = _qabs_upper(y_lo)
        target = mpf(2) ** (-mp.prec + 6)
        n = 8
        while True:
            s = _up(x_up ** (n + 1) / (1 - x_up))
            t = _up(24 * s / (1 - x_up ** (n + 1)))
            if t <= target:
                break
            n += max(8, n // 2)
            if n > 200000:
                raise PrecisionExhausted("product truncation did not converge", mp.prec)
        pi_b = const_pi()
        q = complex_exp(z * CertifiedComplex.from_real(2 * pi_b) * 1j)
        prod = CertifiedComplex(mpc(1), 0)
        qpow = CertifiedComplex(mpc(1), 0)
        for _ in range(1, n + 1):
            qpow = qpow * q
            prod = prod * (1 - qpow) ** 24
        lo = mp.exp(-t) * (1 - mpf(2) ** (8 - mp.prec))
        hi = mp.exp(t) * (1 + mpf(2) ** (8 - mp.prec))
        fudge = CertifiedReal.from_endpoints(lo, hi)
        return q * prod * CertifiedComplex.from_real(fudge)
    raise ValueError("method must be 'eisenstein' or 'product'")


def eval_delta_form(z, prec_bits: int = DEFAULT_PREC, method: str = "eisenstein") -> CertifiedComplex:
    if isinstance(z, CertifiedComplex) and z.rad > 0:
        with mp.workprec(prec_bits + _GUARD_BITS):
            return eval_delta_ball(z, method)
    zx = _exact_mpc(z)
    return _eval_with_ladder(lambda: eval_delta_ball(CertifiedComplex(zx, 0), method), prec_bits)


# ---------------------------------------------------------------------------
# Envelopes f(y) = j(iy) and g(y) = 4 pi e^{2 pi y} + (1/i) j'(iy)
# ---------------------------------------------------------------------------


def _real_series_ball(y, weight: int) -> tuple[CertifiedReal, CertifiedReal]:
    """(e^{2 pi y} ball, sum n^weight c_n e^{-2 pi n y} ball), y >= MIN_IMAG."""
    yb = _as_real(y)
    y_lo = yb.lower()
    if y_lo < MIN_IMAG:
        raise DomainError("envelope argument below the direct-series range")
    pi_b = const_pi()
    t = 2 * pi_b * yb
    egrow = CertifiedReal.from_endpoints(
        mp.exp(t.mid - t.rad) * (1 - mpf(2) ** (8 - mp.prec)),
        mp.exp(t.mid + t.rad) * (1 + mpf(2) ** (8 - mp.prec)),
    )
    r = CertifiedReal.from_endpoints(
        mp.exp(-(t.mid + t.rad)) * (1 - mpf(2) ** (8 - mp.prec)),
        mp.exp(-(t.mid - t.rad)) * (1 + mpf(2) ** (8 - mp.prec)),
    )
    x_up = _up(r.mid + r.rad)
    target = _up(egrow.mid + egrow.rad) * mpf(2) ** (-mp.prec + 10)
    n = _pick_trunc(x_up, weight, target)
    tail = _tail_bound_j(n + 1, x_up, weight)
    cs = j_coefficients(n)
    scaled = [m ** weight * c for m, c in enumerate(cs[2:], start=1)]
    body = eval_int_poly(scaled, r) * r + CertifiedReal(0, tail)
    return egrow, body


def envelope_f(y, prec_bits: int = DEFAULT_PREC) -> CertifiedReal:
    """f(y) = j(iy) = e^{2 pi y} + 744 + sum c_n e^{-2 pi n y}, certified.

    For y below the direct-series range the inversion f(y) = f(1/y) is
    applied first (a modular identity; the spec'd uses never need it).
    """

    def make():
        yb = _as_real(y)
        if yb.lower() < MIN_IMAG:
            if not yb.certified_gt(0):
                raise DomainError("envelope_f needs y > 0")
            yb = 1 / yb
        egrow, body = _real_series_ball(yb, 0)
        return egrow + 744 + body

    return _eval_with_ladder(make, prec_bits)


def envelope_g(y, prec_bits: int = DEFAULT_PREC) -> CertifiedReal:
    """g(y) = 2 pi (e^{2 pi y} + sum n c_n e^{-2 pi n y}), certified."""

    def make():
        egrow, body = _real_series_ball(y, 1)
        return 2 * const_pi() * (egrow + body)

    return _eval_with_ladder(make, prec_bits)


def envelope_g_prime(y, prec_bits: int = DEFAULT_PREC) -> CertifiedReal:
    """g'(y) = (2 pi)^2 (e^{2 pi y} - sum n^2 c_n e^{-2 pi n y}), certified."""

    def make():
        egrow, body = _real_series_ball(y, 2)
        val = (2 * const_pi()) ** 2 * (egrow - body)
        return val

    # g' crosses zero, so the relative contract cannot hold near the root;
    # run a fixed-precision single shot instead.
    with mp.workprec(prec_bits + _GUARD_BITS):
        return make()


def bracket_envelope_min(prec_bits: int = DEFAULT_PREC,
                         width: Fraction = Fraction(1, 10 ** 6)) -> tuple[Fraction, Fraction]:
    """Certified bracket [lo, hi] around the minimum of g inside [1.018, 1.019].

    Bisection on certified signs of g'; the returned bracket has
    g'(lo) < 0 < g'(hi) and hi - lo <= width.
    """
    lo, hi = Fraction(1018, 1000), Fraction(1019, 1000)
    for wp in precision_ladder(prec_bits, PREC_CAP):
        glo = envelope_g_prime(lo, wp)
        ghi = envelope_g_prime(hi, wp)
        if not (glo.certified_lt(0) and ghi.certified_gt(0)):
            continue
        ok = True
        while hi - lo > width:
            mid = (lo + hi) / 2
            gm = envelope_g_prime(mid, wp)
            if gm.certified_lt(0):
                lo = mid
            elif gm.certified_gt(0):
                hi = mid
            else:
                ok = False
                break
        if ok:
            return lo, hi
    raise PrecisionExhausted("could not certify the bracket at the cap", PREC_CAP)


# ---------------------------------------------------------------------------
# Elliptic-point constants and local expansion bounds
# ---------------------------------------------------------------------------


@dataclass
class EllipticConstants:
    """Leading Taylor data of j at the two elliptic points.

    lead_zeta6 = j'''(zeta6)/3!  (purely imaginary, negative imaginary part)
    lead_i     = j''(i)/2!       (real, negative)
    """

    lead_zeta6: CertifiedComplex
    lead_i: CertifiedComplex


def zeta6_ball() -> CertifiedComplex:
    """(1 + i sqrt 3)/2 at working precision."""
    s = sqrt_int(3)
    return (CertifiedComplex.exact(1) + CertifiedComplex.from_real(s) * 1j) / 2


def zeta3_ball() -> CertifiedComplex:
    return zeta6_ball() - 1


def elliptic_constants_gamma(prec_bits: int = DEFAULT_PREC) -> EllipticConstants:
    """Closed-form route: -27 Gamma(1/3)^18 / pi^9 * i and -81 Gamma(1/4)^8 / pi^4."""

    def make():
        g3 = gamma_fraction(Fraction(1, 3))
        g4 = gamma_fraction(Fraction(1, 4))
        p = const_pi()
        a0_mag = 27 * g3 ** 18 / p ** 9
        a1_mag = 81 * g4 ** 8 / p ** 4
        a0 = CertifiedComplex.from_real(a0_mag) * (-1j)
        a1 = CertifiedComplex.from_real(-a1_mag)
        return a0, a1

    for wp in precision_ladder(prec_bits + _GUARD_BITS, PREC_CAP):
        with mp.workprec(wp):
            a0, a1 = make()
            if _contract_ok(a0, prec_bits) and _contract_ok(a1, prec_bits):
                return EllipticConstants(a0, a1)
    raise PrecisionExhausted("gamma route did not meet the contract", PREC_CAP)


def _fd_remainder_zeta6(h, radius: Fraction) -> mpf:
    """Cauchy remainder of the 3rd-order central stencil at zeta6."""
    rr = Fraction(radius)
    f1 = envelope_f(Fraction(866, 1000) - rr, mp.prec)
    f2 = envelope_f(Fraction(867, 1000) + rr, mp.prec)
    b = _up(max(f1.mid + f1.rad, f2.mid + f2.rad))
    r = mpf(rr.numerator) / rr.denominator
    return _up(32 * b * h ** 2 / (r ** 5 * (1 - 2 * h / r)))


def _fd_remainder_i(h, radius: Fraction) -> mpf:
    rr = Fraction(radius)
    f1 = envelope_f(1 - rr, mp.prec)
    f2 = envelope_f(1 + rr, mp.prec)
    b = _up(max(f1.mid + f1.rad, f2.mid + f2.rad))
    r = mpf(rr.numerator) / rr.denominator
    return _up(2 * b * h ** 2 / (r ** 4 * (1 - (h / r) ** 2)))


def elliptic_constants_finite_diff(prec_bits: int = DEFAULT_PREC) -> EllipticConstants:
    """Finite-difference route with rigorous Cauchy-series remainders.

    Central stencils with exact dyadic step h; the stencil truncation error is
    bounded via |j| <= B on a disc around the elliptic point, B coming from
    the certified envelope f.
    """
    wp = max(2 * prec_bits, 160) + 96
    h = mpf(2) ** -max(24, prec_bits // 4)
    with mp.workprec(wp):
        z6 = zeta6_ball()
        hb = CertifiedComplex(mpc(h), 0)
        j_p2 = eval_j_ball(z6 + 2 * hb)
        j_p1 = eval_j_ball(z6 + hb)
        j_m1 = eval_j_ball(z6 - hb)
        j_m2 = eval_j_ball(z6 - 2 * hb)
        d3 = (j_p2 - 2 * j_p1 + 2 * j_m1 - j_m2) / CertifiedComplex(mpc(2 * h ** 3), 0)
        rem0 = _fd_remainder_zeta6(h, Fraction(3, 10))
        a0 = (d3 + CertifiedComplex(0, rem0)) / 6

        ib = CertifiedComplex(mpc(1j), 0)
        j_c = eval_j_ball(ib)
        j_r = eval_j_ball(ib + hb)
        j_l = eval_j_ball(ib - hb)
        d2 = (j_r - 2 * j_c + j_l) / CertifiedComplex(mpc(h ** 2), 0)
        rem1 = _fd_remainder_i(h, Fraction(1, 4))
        a1 = (d2 + CertifiedComplex(0, rem1)) / 2
        return EllipticConstants(a0, a1)


def elliptic_remainder_coeffs(center: str, radius, prec_bits: int = DEFAULT_PREC
                              ) -> tuple[CertifiedReal, CertifiedReal]:
    """Certified coefficients bounding j and j' near an elliptic point.

    For center "zeta6" (0 < R < sqrt(3)/2):
        value_coeff = |A0|/R + f(sqrt3/2 - R)/R^4
        deriv_coeff = 3|A0|/R + max(g(sqrt3/2 - R), g(sqrt3/2 + R))/R^3
    For center "i" (0 < R < 1):
        value_coeff = |A1|/R + f(1 - R)/R^3
        deriv_coeff = 2|A1|/R + max(g(1 - R), g(1 + R))/R^2
    where A0, A1 are the leading Taylor coefficients of j there.
    """
    r = Fraction(radius)
    consts = elliptic_constants_gamma(prec_bits)
    with mp.workprec(prec_bits + _GUARD_BITS):
        rev = CertifiedReal.from_fraction(r)
        if center == "zeta6":
            if not (0 < r and r * r < Fraction(3, 4)):
                raise DomainError("need 0 < R < sqrt(3)/2 at zeta6")
            half_sqrt3 = sqrt_int(3) / 2
            a0 = consts.lead_zeta6.abs()
            kappa = a0 / rev + envelope_f(half_sqrt3 - rev, prec_bits) / rev ** 4
            gmax = real_max(
                envelope_g(half_sqrt3 - rev, prec_bits),
                envelope_g(half_sqrt3 + rev, prec_bits),
            )
            lam = 3 * a0 / rev + gmax / rev ** 3
            return kappa, lam
        if center == "i":
            if not (0 < r < 1):
                raise DomainError("need 0 < R < 1 at i")
            a1 = consts.lead_i.abs()
            kappa = a1 / rev + envelope_f(1 - r, prec_bits) / rev ** 3
            gmax = real_max(envelope_g(1 - r, prec_bits), envelope_g(1 + r, prec_bits))
            lam = 2 * a1 / rev + gmax / rev ** 2
            return kappa, lam
    raise ValueError("center must be 'zeta6' or 'i'")


# ---------------------------------------------------------------------------
# Global lower bound for |j'|
# ---------------------------------------------------------------------------


def jprime_floor(z, prec_bits: int = DEFAULT_PREC) -> CertifiedReal:
    """Certified value of 2 pi min(|j|, |Delta|^{1/3} |j|^{1/3} |j - 1728|).

    This quantity is a lower bound for |j'(z)| on the whole upper half plane
    (it follows from j = E4^3/Delta, j - 1728 = E6^2/Delta and the product
    formula for j').
    """
    with mp.workprec(prec_bits + _GUARD_BITS):
        zb = z if isinstance(z, CertifiedComplex) else CertifiedComplex(_exact_mpc(z), 0)
        j = eval_j_ball(zb)
        dl = eval_delta_ball(zb)
        ja = j.abs()
        branch2 = real_cbrt(dl.abs()) * real_cbrt(ja) * (j - 1728).abs()
        return 2 * const_pi() * real_min(ja, branch2)


def log_delta_cbrt(z, prec_bits: int = DEFAULT_PREC) -> CertifiedReal:
    """Certified log |Delta(z)|^{1/3} (for the explicit floor checks)."""
    with mp.workprec(prec_bits + _GUARD_BITS):
        zb = z if isinstance(z, CertifiedComplex) else CertifiedComplex(_exact_mpc(z), 0)
        dl = eval_delta_ball(zb)
        return real_log(dl.abs()) / 3
