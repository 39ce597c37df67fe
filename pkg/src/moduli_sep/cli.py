"""Batch CLI: every check as a subcommand with uniform machine-readable reports.

Exit codes: 0 all checks passed, 1 mathematical assertion failure, 2
precision exhaustion, 64 usage error, 65 input outside the classified lists.
Reports are newline-delimited JSON records validating against
schema/check_report.schema.json; numbers are decimal strings with explicit
radius fields.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mp, mpf

from . import modular, primel, separation
from .ball import CertifiedReal
from .errors import NotADiscriminant, NotInClassifiedList, PrecisionExhausted
from .forms import validate_discriminant
from .separation import CheckReport, TABLE1, default_workers
from .singular import hilbert_class_polynomial, orbit

SCHEMA_VERSION = "1"

EXIT_OK = 0
EXIT_ASSERTION = 1
EXIT_PRECISION = 2
EXIT_USAGE = 64
EXIT_UNCLASSIFIED = 65


@dataclass
class RunConfig:
    precision_start_bits: int = 128
    precision_cap_bits: int = 8192
    workers: int = 1
    output_format: str = "human"
    long_run: bool = False
    out: str | None = None

    def __post_init__(self):
        if self.precision_start_bits > self.precision_cap_bits:
            raise ValueError("precision start exceeds cap")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def _record(report: CheckReport) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "check_id": report.check_id,
        "params": report.params,
        "passed": report.passed,
        "margin": report.margin,
        "witness": report.extremal_witness,
        "min_value": report.min_value,
        "prec_bits": report.prec_bits,
        "wall_ms": report.wall_time_ms,
        "notes": list(report.notes),
    }


def _emit(reports: list[CheckReport], cfg: RunConfig) -> None:
    records = [_record(r) for r in reports]
    if cfg.output_format == "json":
        text = "\n".join(json.dumps(r, sort_keys=True) for r in records) + "\n"
    elif cfg.output_format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["check_id", "item", "passed", "margin", "witness", "prec_bits", "wall_ms"])
        for rep, rec in zip(reports, records):
            if rep.items:
                for item in rep.items:
                    writer.writerow([rec["check_id"], json.dumps(item), rec["passed"],
                                     item.get("margin", rec["margin"]), json.dumps(rec["witness"]),
                                     rec["prec_bits"], rec["wall_ms"]])
            else:
                writer.writerow([rec["check_id"], "", rec["passed"], rec["margin"],
                                 json.dumps(rec["witness"]), rec["prec_bits"], rec["wall_ms"]])
        text = buf.getvalue()
    else:
        lines = []
        for rec in records:
            status = "PASS" if rec["passed"] else "FAIL"
            extras = " ".join(
                s for s in (
                    f"margin={rec['margin']}" if rec["margin"] else "",
                    f"min={rec['min_value']['value']}" if rec["min_value"] else "",
                    f"notes={';'.join(rec['notes'])}" if rec["notes"] else "",
                ) if s)
            lines.append(f"[{status}] {rec['check_id']} {json.dumps(rec['params'], sort_keys=True)} {extras}")
        text = "\n".join(lines) + "\n"
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _simple_report(check_id: str, params: dict, passed: bool, t0: float,
                   prec: int, margin: str | None = None, witness: dict | None = None,
                   notes: list[str] | None = None,
                   min_value: dict | None = None) -> CheckReport:
    return CheckReport(
        check_id=check_id, params=params, passed=passed,
        extremal_witness=witness, min_value=min_value, margin=margin,
        prec_bits=prec, wall_time_ms=int(1000 * (time.monotonic() - t0)),
        notes=notes or [],
    )


def _ball_window(ball: CertifiedReal, printed: Fraction, ulp: Fraction) -> bool:
    """Certified interval sits inside [printed, printed + ulp): the source
    prints truncated decimals."""
    return ball.certified_ge(printed) and ball.certified_lt(printed + ulp)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_constants(args, cfg: RunConfig) -> list[CheckReport]:
    prec = cfg.precision_start_bits
    reports = []

    t0 = time.monotonic()
    cs = modular.j_coefficients(3)
    reports.append(_simple_report(
        "series-coefficients", {"n": 3}, cs == [1, 744, 196884, 21493760, 864299970],
        t0, 0, notes=[f"c = {cs}"]))

    t0 = time.monotonic()
    cg = modular.elliptic_constants_gamma(prec)
    cf = modular.elliptic_constants_finite_diff(prec)
    a0_ok = (_ball_window(cg.lead_zeta6.abs(), Fraction("45745.0806"), Fraction(1, 10 ** 4))
             and not (cg.lead_zeta6 - cf.lead_zeta6).abs().certified_gt(0)
             and cg.lead_zeta6.real().contains(0)
             and cg.lead_zeta6.imag().certified_lt(0))
    reports.append(_simple_report(
        "elliptic-constant-zeta6", {"printed": "45745.0806"}, a0_ok, t0, prec,
        min_value={"value": mpmath.nstr(cg.lead_zeta6.abs().mid, 24),
                   "radius": mpmath.nstr(cg.lead_zeta6.rad, 6)}))
    a1_ok = (_ball_window(cg.lead_i.abs(), Fraction("24827.5650"), Fraction(1, 10 ** 4))
             and not (cg.lead_i - cf.lead_i).abs().certified_gt(0)
             and cg.lead_i.imag().contains(0)
             and cg.lead_i.real().certified_lt(0))
    reports.append(_simple_report(
        "elliptic-constant-i", {"printed": "24827.5650"}, a1_ok, t0, prec,
        min_value={"value": mpmath.nstr(cg.lead_i.abs().mid, 24),
                   "radius": mpmath.nstr(cg.lead_i.rad, 6)}))

    t0 = time.monotonic()
    lo, hi = modular.bracket_envelope_min(prec)
    glo = modular.envelope_g_prime(Fraction(1018, 1000), prec)
    ghi = modular.envelope_g_prime(Fraction(1019, 1000), prec)
    y0_ok = (Fraction(1018, 1000) <= lo < hi <= Fraction(1019, 1000)
             and hi - lo <= Fraction(1, 10 ** 6)
             and glo.certified_lt(0) and ghi.certified_gt(0)
             and _ball_window(-glo, Fraction("259.31"), Fraction(1, 100))
             and _ball_window(ghi, Fraction("118.15"), Fraction(1, 100)))
    reports.append(_simple_report(
        "envelope-min-bracket", {"printed": "[1.018, 1.019]"}, y0_ok, t0, prec,
        notes=[f"bracket = [{float(lo):.9f}, {float(hi):.9f}]",
               f"g'(1.018) = {mpmath.nstr(glo.mid, 8)}", f"g'(1.019) = {mpmath.nstr(ghi.mid, 8)}"]))

    for cid, center, radius, which, ceiling in (
        ("local-bound-j-zeta6", "zeta6", Fraction(1, 4), 0, Fraction(726, 100) * 10 ** 6),
        ("local-bound-jprime-zeta6", "zeta6", Fraction(19, 100), 1, Fraction(227, 100) * 10 ** 7),
        ("local-bound-j-i", "i", Fraction(29, 100), 0, Fraction(404, 100) * 10 ** 5),
        ("local-bound-jprime-i", "i", Fraction(2, 10), 1, Fraction(91, 10) * 10 ** 5),
    ):
        t0 = time.monotonic()
        pair = modular.elliptic_remainder_coeffs(center, radius, prec)
        val = pair[which]
        ok = val.certified_le(ceiling) and val.certified_ge(ceiling * Fraction(99, 100))
        reports.append(_simple_report(
            cid, {"center": center, "R": str(radius), "ceiling": str(ceiling)},
            ok, t0, prec,
            margin=mpmath.nstr(mpf(float(val.upper() / ceiling)), 10),
            min_value={"value": mpmath.nstr(val.mid, 24), "radius": mpmath.nstr(val.rad, 6)}))
    return reports


def cmd_table1(args, cfg: RunConfig) -> list[CheckReport]:
    if args.k is not None:
        ks = [args.k]
    elif args.X is not None:
        ks = [min((k for k, (xk, _, _) in TABLE1.items() if xk >= args.X),
                  default=4)]
    else:
        ks = [1]
    reports = []
    for k in ks:
        limit, dk, dpk = TABLE1[k]
        if args.X is not None:
            limit = args.X
        for mode, bound in (("all", dk), ("equal", dpk)):
            rep = separation.min_pairwise_distance(
                limit, mode, cfg.precision_start_bits, hint=bound, workers=cfg.workers,
                threshold=bound)
            rep.params["k"] = k
            rep.params["threshold"] = str(bound)
            lo = Fraction(rep.min_value["value"]) if rep.min_value else None
            if rep.passed and lo is not None and lo > bound * Fraction(105, 100):
                rep.notes.append(f"near-tightness warning: min > 1.05 * {bound}")
            reports.append(rep)
    return reports


def cmd_separation(args, cfg: RunConfig) -> list[CheckReport]:
    scale = Fraction(args.bound_scale) if args.bound_scale else Fraction(1)
    return [separation.verify_separation_theorem(
        args.X or 400, cfg.precision_start_bits, bound_scale=scale, workers=cfg.workers)]


def cmd_cderiv(args, cfg: RunConfig) -> list[CheckReport]:
    reports = [separation.verify_cderiv(
        args.X or 3000, cfg.precision_start_bits, workers=cfg.workers)]
    if cfg.long_run:
        reports.append(separation.verify_cderiv(
            20000, cfg.precision_start_bits, checks=("deriv",), workers=cfg.workers))
    return reports


def cmd_bad_list(args, cfg: RunConfig) -> list[CheckReport]:
    t0 = time.monotonic()
    bad = primel.exceptional_discriminants()
    bold = primel.two_elementary_subset()
    ok = len(bad) == 38 and len(bold) == 16
    return [_simple_report(
        "exceptional-discriminants", {"horizon": 20000}, ok, t0, 0,
        notes=[
            "list = " + ",".join(str(d.value) for d in bad),
            "two-elementary = " + ",".join(str(d.value) for d in bold),
            "complete assuming no h in {4,5,6} discriminant exceeds the sweep horizon",
        ])]


def cmd_alpha_sets(args, cfg: RunConfig) -> list[CheckReport]:
    prec = cfg.precision_start_bits
    bold = {d.value for d in primel.two_elementary_subset()}
    reports = []
    for d in primel.exceptional_discriminants():
        t0 = time.monotonic()
        if d.value in bold:
            fs = primel.conjugate_polynomials(d)
            ok, certs = primel.nonproportional(fs)
            reports.append(_simple_report(
                "alpha-set-nonproportional", {"disc": d.value}, ok, t0, prec,
                notes=[f"{len(certs)} certificates"],
                witness={"minors": [
                    {"triple": list(c.triple), "indices": list(c.minor_indices),
                     "value": str(c.minor_value)} for c in certs]}))
        else:
            aset = primel.alpha_ratio_set(d, prec)
            mi = primel.min_imag(aset)
            ok = mi.certified_ge(345)
            reports.append(_simple_report(
                "alpha-set-min-imag", {"disc": d.value, "floor": 345}, ok, t0, prec,
                margin=mpmath.nstr(mpf(float(mi.lower() / 345)), 10),
                min_value={"value": mpmath.nstr(mi.mid, 24),
                           "radius": mpmath.nstr(mi.rad, 6)}))
    return reports


def cmd_cross_pairs(args, cfg: RunConfig) -> list[CheckReport]:
    prec = cfg.precision_start_bits
    if args.pair:
        dx, dy = (int(t) for t in args.pair.split(","))
        pairs = [(dx, dy)]
    else:
        pairs = primel.CROSS_PAIRS
    reports = []
    for dx, dy in pairs:
        t0 = time.monotonic()
        fs, gs = primel.cross_pair_polynomials(dx, dy)
        ok, certs = primel.nonproportional_cross(fs, gs)
        reports.append(_simple_report(
            "cross-pair-nonproportional", {"dx": dx, "dy": dy}, ok, t0, prec,
            notes=[f"{len(certs)} certificates"],
            witness={"minors": [
                {"triple": list(c.triple), "indices": list(c.minor_indices),
                 "value": str(c.minor_value)} for c in certs]}))
    return reports


def cmd_classify(args, cfg: RunConfig) -> list[CheckReport]:
    t0 = time.monotonic()
    alpha = Fraction(args.alpha)
    verdict = primel.classify_primitive(args.dx, args.dy, alpha)
    witness = {"kind": verdict.kind}
    if verdict.alpha is not None:
        witness["alpha"] = str(verdict.alpha)
    if verdict.subfield_index is not None:
        witness["subfield_index"] = verdict.subfield_index
    notes = []
    if args.certify and verdict.kind == primel.GENERATES:
        ok, gap = primel.certify_generation(args.dx, args.dy, alpha, cfg.precision_start_bits)
        notes.append(f"distinctness certified: {ok}; min gap {mpmath.nstr(gap.mid, 8)}")
    return [_simple_report(
        "classify-primitive", {"dx": args.dx, "dy": args.dy, "alpha": str(alpha)},
        True, t0, cfg.precision_start_bits, witness=witness, notes=notes)]


def cmd_orbit(args, cfg: RunConfig) -> list[CheckReport]:
    t0 = time.monotonic()
    d = validate_discriminant(args.d)
    prec = cfg.precision_start_bits
    with mp.workprec(prec + 32):
        values = [
            {"form": [m.form.a, m.form.b, m.form.c],
             "dominance": m.dominance,
             "value": {"re": mpmath.nstr(m.value.mid.real, 24),
                       "im": mpmath.nstr(m.value.mid.imag, 24),
                       "radius": mpmath.nstr(m.value.rad, 6)}}
            for m in orbit(d, prec)
        ]
    pol = hilbert_class_polynomial(d)
    return [_simple_report(
        "orbit-dump", {"disc": d.value, "fundamental": d.fundamental, "conductor": d.conductor},
        True, t0, prec,
        witness={"orbit": values,
                 "class_polynomial": [str(c) for c in pol.coefficients]})]


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def build_parser() -> _Parser:
    p = _Parser(prog="moduli-verify",
                description="Certified checks for singular-moduli separation and "
                            "primitive-element classification")
    p.add_argument("--prec", type=int, default=128, help="starting precision (bits)")
    p.add_argument("--prec-cap", type=int, default=8192, help="precision cap (bits)")
    p.add_argument("--workers", type=int, default=None,
                   help="worker processes (default: MODULI_SEP_WORKERS or cpu count)")
    p.add_argument("--emit", choices=("json", "csv", "human"), default="human")
    p.add_argument("--long-run", action="store_true", help="enable the slow sweeps")
    p.add_argument("--out", help="write the report to this file (UTF-8)")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("constants", help="printed constants: c_n, elliptic leads, "
                                          "envelope minimum, local bound coefficients")
    sp.set_defaults(func=cmd_constants)

    sp = sub.add_parser("table1", help="small-discriminant minimum distances")
    sp.add_argument("--k", type=int, choices=(1, 2, 3, 4))
    sp.add_argument("--X", type=int)
    sp.set_defaults(func=cmd_table1)

    sp = sub.add_parser("separation", help="three-term separation bound sweep")
    sp.add_argument("--X", type=int)
    sp.add_argument("--bound-scale", help="rational scale for negative controls")
    sp.set_defaults(func=cmd_separation)

    sp = sub.add_parser("cderiv", help="per-CM-point floors for j, j-1728, j'")
    sp.add_argument("--X", type=int)
    sp.set_defaults(func=cmd_cderiv)

    sp = sub.add_parser("bad-list", help="the 38 exceptional discriminants")
    sp.set_defaults(func=cmd_bad_list)

    sp = sub.add_parser("alpha-sets", help="ratio-set floors / non-proportionality per "
                                           "exceptional discriminant")
    sp.set_defaults(func=cmd_alpha_sets)

    sp = sub.add_parser("cross-pairs", help="non-proportionality for the classified pairs")
    sp.add_argument("--pair", help="one pair as 'dx,dy'")
    sp.set_defaults(func=cmd_cross_pairs)

    sp = sub.add_parser("classify", help="verdict for x + alpha*y")
    sp.add_argument("--dx", type=int, required=True)
    sp.add_argument("--dy", type=int, required=True)
    sp.add_argument("--alpha", required=True, help="rational, e.g. 3/2")
    sp.add_argument("--certify", action="store_true",
                    help="also certify sum distinctness numerically")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("orbit", help="dump one orbit and its class polynomial")
    sp.add_argument("--d", type=int, required=True)
    sp.set_defaults(func=cmd_orbit)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "table1" and args.k == 4 and not args.long_run:
        parser.error("--k 4 requires --long-run")
    workers = args.workers if args.workers is not None else default_workers()
    try:
        cfg = RunConfig(
            precision_start_bits=args.prec,
            precision_cap_bits=args.prec_cap,
            workers=workers,
            output_format=args.emit,
            long_run=args.long_run,
            out=args.out,
        )
    except ValueError as exc:
        parser.error(str(exc))
    try:
        reports = args.func(args, cfg)
    except NotInClassifiedList as exc:
        sys.stderr.write(f"not in the classified list: {exc}\n")
        return EXIT_UNCLASSIFIED
    except PrecisionExhausted as exc:
        sys.stderr.write(f"precision exhausted: {exc}\n")
        return EXIT_PRECISION
    except NotADiscriminant as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    _emit(reports, cfg)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_ASSERTION


if __name__ == "__main__":
    sys.exit(main())
