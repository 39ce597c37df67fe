"""Separation bounds between singular moduli and their desk-scale sweeps.

The headline bound: distinct singular moduli x, y with |D_x| >= |D_y| satisfy

    |x - y| >= min(800 |D_y|^-4, 20000 |D_x|^-1 |D_y|^-3, 700 |D_x|^-3)

and the weaker |x - y| >= 800 max(|D_x|, |D_y|)^-4.  This module verifies
those bounds exhaustively up to a discriminant cutoff, reproduces the
small-discriminant minimum-distance table, and checks the per-CM-point
floors for j, j - 1728 and j'.

All comparisons are interval-safe: a check passes only when the entire
certified interval clears the bound; straddling intervals trigger precision
escalation, never a silent pass.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field
from fractions import Fraction
from multiprocessing import Pool

import mpmath
from mpmath import mp, mpf

from .ball import CertifiedComplex, CertifiedReal, mpf_to_fraction, real_min
from .errors import PrecisionExhausted
from .forms import Discriminant, class_numbers_upto, reduced_forms, validate_discriminant
from .modular import eval_j_ball, zeta3_ball, zeta6_ball
from .singular import cm_point_ball, singular_modulus

# Reference cutoffs and published minima for the small-discriminant table.
TABLE1 = {
    1: (300, Fraction("3.82"), Fraction("92.4")),
    2: (1000, Fraction("0.305"), Fraction("15.7")),
    3: (3000, Fraction("0.0292"), Fraction("3.07")),
    4: (10000, Fraction("0.00247"), Fraction("0.494")),
}

_ABS_BITS = 80  # absolute radius target 2^-80 for sweep points


@dataclass
class SeparationBound:
    value: Fraction
    branch: int  # 1, 2, 3 for the three min-terms

    def __iter__(self):
        yield self.value
        yield self.branch


def separation_bound(dx: Discriminant | int, dy: Discriminant | int) -> SeparationBound:
    """Exact value (and attaining branch) of the three-term separation bound."""
    ax, ay = abs(int(dx)), abs(int(dy))
    if ax < ay:
        ax, ay = ay, ax
    terms = (
        Fraction(800, ay ** 4),
        Fraction(20000, ax * ay ** 3),
        Fraction(700, ax ** 3),
    )
    val = min(terms)
    return SeparationBound(val, terms.index(val) + 1)


def weak_separation_bound(dx: Discriminant | int, dy: Discriminant | int) -> Fraction:
    """The one-term bound 800 max(|D_x|, |D_y|)^-4."""
    m = max(abs(int(dx)), abs(int(dy)))
    return Fraction(800, m ** 4)


@dataclass
class CheckReport:
    check_id: str
    params: dict
    passed: bool
    extremal_witness: dict | None = None
    min_value: dict | None = None  # {"value": str, "radius": str}
    margin: str | None = None
    prec_bits: int = 0
    wall_time_ms: int = 0
    items: list = field(default_factory=list)  # per-item margins for CSV export
    notes: list = field(default_factory=list)


def _ball_to_strs(x: CertifiedReal) -> dict:
    return {"value": mpmath.nstr(x.mid, 24), "radius": mpmath.nstr(x.rad, 6)}


@dataclass
class OrbitPoint:
    disc: int
    a: int
    b: int
    c: int
    value: CertifiedComplex

    def key(self):
        return (abs(self.disc), self.a, self.b)

    def as_witness(self):
        return {"disc": self.disc, "form": [self.a, self.b, self.c]}


def _points_for_discs(discs: list[int], abs_bits: int) -> list[OrbitPoint]:
    out = []
    for dv in discs:
        d = validate_discriminant(dv)
        for f in reduced_forms(d):
            sm = singular_modulus(f, 64, abs_bits=abs_bits)
            out.append(OrbitPoint(dv, f.a, f.b, f.c, sm.value))
    return out


def default_workers() -> int:
    env = os.environ.get("MODULI_SEP_WORKERS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def orbit_points(limit: int, abs_bits: int = _ABS_BITS, workers: int = 1) -> list[OrbitPoint]:
    """All singular moduli with |D| <= limit as certified points.

    Each point's radius is <= 2^-abs_bits, so bucketed distance comparisons
    stay sound at the sweep scales.
    """
    discs = sorted(class_numbers_upto(limit), key=abs)
    if workers <= 1 or len(discs) < 32:
        pts = _points_for_discs(discs, abs_bits)
    else:
        chunks = [discs[i::workers] for i in range(workers)]
        with Pool(workers) as pool:
            parts = pool.starmap(_points_for_discs, [(c, abs_bits) for c in chunks])
        pts = [p for part in parts for p in part]
    pts.sort(key=lambda p: p.key())
    return pts


def _refine_point(p: OrbitPoint, abs_bits: int) -> OrbitPoint:
    d = validate_discriminant(p.disc)
    f = next(f for f in reduced_forms(d) if (f.a, f.b, f.c) == (p.a, p.b, p.c))
    sm = singular_modulus(f, 64, abs_bits=abs_bits)
    return OrbitPoint(p.disc, p.a, p.b, p.c, sm.value)


def _float_gap_lower(p: OrbitPoint, q: OrbitPoint) -> float:
    """A float lower bound for |p - q| (conservative against float rounding)."""
    try:
        zp, zq = complex(p.value.mid), complex(q.value.mid)
    except OverflowError:
        return 0.0
    d = abs(zp - zq)
    slack = 2.0 ** -48 * (abs(zp) + abs(zq) + d) + 2.0 ** (-_ABS_BITS + 2)
    return d - slack


def _cert_distance(p: OrbitPoint, q: OrbitPoint) -> CertifiedReal:
    return (p.value - q.value).abs()


def _pair_witness(p: OrbitPoint, q: OrbitPoint, dist: CertifiedReal) -> dict:
    a, b = sorted((p, q), key=lambda t: t.key())
    return {"x": a.as_witness(), "y": b.as_witness(), "distance": _ball_to_strs(dist)}


def _pair_key(p: OrbitPoint, q: OrbitPoint):
    a, b = sorted((p, q), key=lambda t: t.key())
    return a.key() + b.key()


def _cells_exact(pts: list[OrbitPoint], size: Fraction) -> dict[tuple[int, int], list[int]]:
    cells: dict[tuple[int, int], list[int]] = {}
    for i, p in enumerate(pts):
        re = mpf_to_fraction(p.value.mid.real)
        im = mpf_to_fraction(p.value.mid.imag)
        key = (int(re // size), int(im // size))
        cells.setdefault(key, []).append(i)
    return cells


_FORWARD = ((1, 0), (1, 1), (0, 1), (-1, 1))


def _bucket_candidates(pts: list[OrbitPoint], size: Fraction):
    """Yield index pairs from the same or adjacent cells (each pair once).

    Points in cells that are not adjacent are separated by at least ``size``
    in one coordinate; cell assignment uses exact rationals, so no pair at
    distance < size is ever missed.
    """
    cells = _cells_exact(pts, size)
    for key, members in cells.items():
        for ii, i in enumerate(members):
            for j in members[ii + 1:]:
                yield i, j
        for dx, dy in _FORWARD:
            other = cells.get((key[0] + dx, key[1] + dy))
            if other:
                for i in members:
                    for j in other:
                        yield i, j


def min_pairwise_distance(limit: int, mode: str = "all", prec_bits: int = 128,
                          hint: Fraction | None = None, workers: int = 1,
                          threshold: Fraction | None = None) -> CheckReport:
    """Certified minimum distance between distinct singular moduli.

    mode "all" compares all orbits with |D| <= limit using grid bucketing;
    mode "equal" restricts to pairs of the same discriminant (per-orbit
    scan).  When ``threshold`` is given, passed = (min >= threshold).
    """
    t0 = time.monotonic()
    with mp.workprec(prec_bits):
        pts = orbit_points(limit, _ABS_BITS, workers)
        best: CertifiedReal | None = None
        best_pair = None
        min_lower: Fraction | None = None  # inf over certified pair distances
        cur_f = float("inf")

        def consider(i, j):
            nonlocal best, best_pair, min_lower, cur_f
            d = _cert_distance(pts[i], pts[j])
            lo = d.lower()
            if min_lower is None or lo < min_lower:
                min_lower = lo
            if best is None or d.upper() < best.upper() or (
                d.upper() == best.upper()
                and _pair_key(pts[i], pts[j]) < _pair_key(*best_pair)
            ):
                best = d
                best_pair = (pts[i], pts[j])
                cur_f = float(best.upper())

        if mode == "equal":
            # pairs skipped by the float prescreen exceed the current best
            # upper bound, so they can affect neither the minimum nor a
            # threshold that the certified minimum satisfies
            by_disc: dict[int, list[int]] = {}
            for i, p in enumerate(pts):
                by_disc.setdefault(p.disc, []).append(i)
            for members in by_disc.values():
                for ii, i in enumerate(members):
                    for j in members[ii + 1:]:
                        if _float_gap_lower(pts[i], pts[j]) > cur_f:
                            continue
                        consider(i, j)
        elif mode == "all":
            size = Fraction(hint) * Fraction(13, 10) if hint else Fraction(1)
            maxrad = Fraction(2) ** (-_ABS_BITS + 1)
            for _ in range(8):
                for i, j in _bucket_candidates(pts, size):
                    consider(i, j)
                if best is not None and best.upper() <= size - 2 * maxrad:
                    break  # non-candidate pairs all exceed size - 2 maxrad
                size *= 2
                best, best_pair, min_lower, cur_f = None, None, None, float("inf")
            else:
                raise PrecisionExhausted("bucketed search failed to certify a minimum")
        else:
            raise ValueError("mode must be 'all' or 'equal'")

        if best is None or min_lower is None:
            raise PrecisionExhausted("no candidate pair found")
        passed = True if threshold is None else min_lower >= Fraction(threshold)
        return CheckReport(
            check_id=f"min-distance-{mode}",
            params={"limit": limit, "mode": mode},
            passed=passed,
            extremal_witness=_pair_witness(*best_pair, best),
            min_value=_ball_to_strs(best),
            margin=(mpmath.nstr(mpf(float(min_lower / Fraction(threshold))), 10)
                    if threshold else None),
            prec_bits=prec_bits,
            wall_time_ms=int(1000 * (time.monotonic() - t0)),
        )


def verify_separation_theorem(limit: int = 400, prec_bits: int = 128,
                              bound_scale: Fraction = Fraction(1),
                              workers: int = 1) -> CheckReport:
    """Check the three-term bound (and the weak one-term bound) for every
    pair of distinct singular moduli with |D| <= limit.

    bound_scale multiplies the bounds (a >1 scale is a negative control and
    should produce a failing report with a witness).
    """
    t0 = time.monotonic()
    bound_scale = Fraction(bound_scale)
    with mp.workprec(prec_bits):
        pts = orbit_points(limit, _ABS_BITS, workers)
        max_bound = Fraction(800, 81) * bound_scale
        size = max(Fraction(1), max_bound * 2)
        maxrad = Fraction(2) ** (-_ABS_BITS + 1)
        assert size - 2 * maxrad >= max_bound
        worst_ratio = None
        worst = None
        violations = []
        for i, j in _bucket_candidates(pts, size):
            p, q = pts[i], pts[j]
            if p.disc == q.disc and (p.a, p.b, p.c) == (q.a, q.b, q.c):
                continue
            strong = separation_bound(p.disc, q.disc).value * bound_scale
            weak = weak_separation_bound(p.disc, q.disc) * bound_scale
            d = _cert_distance(p, q)
            for attempt in range(4):
                if d.certified_ge(strong) or d.certified_lt(strong):
                    break
                bits = _ABS_BITS * (2 << attempt)
                p = _refine_point(p, bits)
                q = _refine_point(q, bits)
                d = _cert_distance(p, q)
            else:
                raise PrecisionExhausted(f"pair {p.key()} / {q.key()} kept straddling")
            lo = d.lower()
            if lo < strong or lo < weak:
                violations.append(_pair_witness(p, q, d) | {
                    "bound": str(strong), "weak_bound": str(weak)})
                ratio = lo / strong
            else:
                ratio = min(lo / strong, lo / weak)
            if worst_ratio is None or ratio < worst_ratio:
                worst_ratio = ratio
                worst = _pair_witness(p, q, d) | {"bound": str(strong)}
        return CheckReport(
            check_id="separation-theorem",
            params={"limit": limit, "bound_scale": str(bound_scale)},
            passed=not violations,
            extremal_witness=(violations[0] if violations else worst),
            margin=mpmath.nstr(mpf(float(worst_ratio)), 10) if worst_ratio is not None else None,
            prec_bits=prec_bits,
            wall_time_ms=int(1000 * (time.monotonic() - t0)),
            notes=[f"{len(violations)} violations"] if violations else [],
        )


CM_FLOOR_CHECKS = ("elliptic-distance", "i-distance", "value", "value-1728", "deriv")


def _cm_floor_bounds(absd: int) -> dict[str, Fraction]:
    return {
        "elliptic-distance": Fraction(3, 16 * absd * absd),   # squared sqrt(3)/4 |D|^-1
        "i-distance": Fraction(9, 64 * absd * absd),          # squared (3/8) |D|^-1
        "value": Fraction(700, absd ** 3),
        "value-1728": Fraction(2000, absd * absd),
        "deriv": Fraction(40000, absd * absd),
    }


def _cderiv_one_disc(dv: int, prec_bits: int, checks: tuple[str, ...]):
    """Per-form floor margins for one discriminant; returns (worst, violations)."""
    d = validate_discriminant(dv)
    bounds = _cm_floor_bounds(abs(dv))
    worst: dict[str, tuple[Fraction, tuple]] = {}
    violations = []
    for f in reduced_forms(d):
        if (f.a, f.b, f.c) in ((1, 1, 1), (1, 0, 1)):
            continue  # tau = zeta6 (D=-3) and tau = i (D=-4) are excluded
        for wp in (prec_bits, 2 * prec_bits, 4 * prec_bits):
            with mp.workprec(wp):
                tau = cm_point_ball(f)
                vals: dict[str, CertifiedReal] = {}
                if "elliptic-distance" in checks:
                    d6 = (tau - zeta6_ball()).abs()
                    d3 = (tau - zeta3_ball()).abs()
                    vals["elliptic-distance"] = real_min(d6 * d6, d3 * d3)
                if "i-distance" in checks:
                    di = (tau - CertifiedComplex.exact(1j)).abs()
                    vals["i-distance"] = di * di
                need_j = "value" in checks or "value-1728" in checks
                if need_j:
                    j = eval_j_ball(tau)
                    if "value" in checks:
                        vals["value"] = j.abs()
                    if "value-1728" in checks:
                        vals["value-1728"] = (j - 1728).abs()
                if "deriv" in checks:
                    vals["deriv"] = eval_j_ball(tau, deriv=1).abs()
            if all(v.certified_ge(bounds[k]) or v.certified_lt(bounds[k])
                   for k, v in vals.items()):
                break
        for k, v in vals.items():
            lo = v.lower()
            ratio = lo / bounds[k]
            if lo < bounds[k]:
                violations.append((k, dv, (f.a, f.b, f.c), str(lo)))
            if k not in worst or ratio < worst[k][0]:
                worst[k] = (ratio, (dv, f.a, f.b, f.c))
    return worst, violations


def verify_cderiv(limit: int = 3000, prec_bits: int = 128,
                  checks: tuple[str, ...] = CM_FLOOR_CHECKS,
                  workers: int = 1) -> CheckReport:
    """Floors at CM points tau != i, zeta6 of discriminant |D| <= limit:

      min(|tau-zeta6|, |tau-zeta3|) >= sqrt(3)/4 |D|^-1   (checked squared)
      |tau - i|                      >= 3/8 |D|^-1         (checked squared)
      |j(tau)|                       >= 700 |D|^-3
      |j(tau) - 1728|                >= 2000 |D|^-2
      |j'(tau)|                      >= 40000 |D|^-2
    """
    t0 = time.monotonic()
    discs = sorted(class_numbers_upto(limit), key=abs)
    args = [(dv, prec_bits, tuple(checks)) for dv in discs]
    if workers <= 1 or len(discs) < 32:
        results = [_cderiv_one_disc(*a) for a in args]
    else:
        with Pool(workers) as pool:
            results = pool.starmap(_cderiv_one_disc, args)
    worst: dict[str, tuple[Fraction, tuple]] = {}
    violations = []
    for w, v in results:
        violations.extend(v)
        for k, (ratio, wit) in w.items():
            if k not in worst or ratio < worst[k][0]:
                worst[k] = (ratio, wit)
    margin = min((r for r, _ in worst.values()), default=None)
    wit = None
    if worst:
        key = min(worst, key=lambda k: worst[k][0])
        dv, a, b, c = worst[key][1]
        wit = {"check": key, "disc": dv, "form": [a, b, c],
               "margin": mpmath.nstr(mpf(float(worst[key][0])), 10)}
    return CheckReport(
        check_id="cm-floors",
        params={"limit": limit, "checks": list(checks)},
        passed=not violations,
        extremal_witness=wit,
        margin=mpmath.nstr(mpf(float(margin)), 10) if margin is not None else None,
        prec_bits=prec_bits,
        wall_time_ms=int(1000 * (time.monotonic() - t0)),
        items=[{"check": k, "margin": mpmath.nstr(mpf(float(r)), 10),
                "witness": list(w)} for k, (r, w) in sorted(worst.items())],
        notes=[f"{len(violations)} violations"] if violations else [],
    )
