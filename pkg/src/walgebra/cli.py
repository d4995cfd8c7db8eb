"""Command-line front end.

Exit codes: 0 success, 1 a verified assertion failed, 2 usage or input error.
All numeric output is exact (rationals as p/q); output is deterministic.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction

from .algebra import Mode, SpecError, central_charge_p1, load_spec, make_virasoro_spec
from .c2 import certificate_to_json, certify_triplet_p2, verify_certificate
from .derivation import alpha_nonzero_report
from .qseries import (
    QSeries,
    chi_tilde,
    diff_at_level,
    triplet_character,
    verma_character,
)
from .scalar import SolveError, render_poly
from .singular import load_triplet_p2_spec, verify_singular_p2

_MODE_ARG = re.compile(r"([A-Za-z_][A-Za-z0-9_]*):(-?\d+)$")


class InputError(ValueError):
    pass


def _parse_mode(text: str) -> Mode:
    m = _MODE_ARG.match(text.strip())
    if not m:
        raise InputError(f"mode must look like FIELD:INDEX, got {text!r}")
    return Mode(m.group(1), int(m.group(2)))


def _load_spec_arg(path: str | None):
    if path is None:
        return load_triplet_p2_spec()
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return load_spec(fh.read())
    except OSError as exc:
        raise InputError(f"cannot read spec {path}: {exc}") from exc


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _series_text(series: QSeries) -> str:
    return "\n".join(series.render_lines())


def _series_json(series: QSeries) -> str:
    return json.dumps(
        [
            {"exponent": line.split(": ")[0], "coefficient": line.split(": ")[1]}
            for line in series.render_lines()
        ],
        indent=2,
    )


def _positive_p(args) -> int:
    if args.p < 2:
        raise InputError("--p must be an integer >= 2")
    return args.p


def _character_series(kind: str, p: int, cutoff: int) -> QSeries:
    if kind == "verma":
        d = 2 * p - 1
        return verma_character([2, d, d, d], central_charge_p1(p), cutoff)
    if kind == "triplet":
        return triplet_character(p, cutoff)
    if kind == "chi-tilde":
        return chi_tilde(p, cutoff)
    raise InputError(f"unknown character {kind!r}")


def cmd_bracket(args) -> int:
    if args.spec:
        spec = _load_spec_arg(args.spec)
    elif args.virasoro:
        spec = make_virasoro_spec(args.c)
    else:
        spec = load_triplet_p2_spec()
    left = _parse_mode(args.left)
    right = _parse_mode(args.right)
    from .algebra import bracket as _bracket

    try:
        ops = _bracket(left, right, spec)
    except SpecError as exc:
        raise InputError(str(exc)) from exc
    if args.format == "json":
        doc = {
            "left": left.render(),
            "right": right.render(),
            "terms": [
                {"coefficient": render_poly(c), "mode": m.render()}
                for c, m in ops.terms
            ],
            "central": render_poly(ops.central),
        }
        _emit(json.dumps(doc, indent=2), args.out)
    else:
        _emit(f"[{left.render()}, {right.render()}] = {ops.render()}", args.out)
    return 0


def cmd_character(args) -> int:
    p = _positive_p(args)
    series = _character_series("triplet", p, args.cutoff)
    _emit(
        _series_json(series) if args.format == "json" else _series_text(series),
        args.out,
    )
    return 0


def cmd_verma_character(args) -> int:
    p = _positive_p(args)
    series = _character_series("verma", p, args.cutoff)
    _emit(
        _series_json(series) if args.format == "json" else _series_text(series),
        args.out,
    )
    return 0


def cmd_char_diff(args) -> int:
    p = _positive_p(args)
    try:
        level = Fraction(args.level)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad level {args.level!r}") from exc
    a = _character_series(args.left, p, args.cutoff)
    b = _character_series(args.right, p, args.cutoff)
    value = diff_at_level(a, b, level)
    if args.format == "json":
        doc = {
            "p": p,
            "left": args.left,
            "right": args.right,
            "level": str(level),
            "difference": str(value),
        }
        _emit(json.dumps(doc, indent=2), args.out)
    else:
        _emit(str(value), args.out)
    return 0


def cmd_derive(args) -> int:
    p = _positive_p(args)
    report = alpha_nonzero_report(p)
    if args.format == "json":
        _emit(report.to_json(), args.out)
    else:
        lines = [
            f"p = {report.p}, Delta = {report.delta}",
            f"beta_ww_prime   = {report.beta_ww_prime}",
            f"beta_ww         = {render_poly(report.beta_ww)}",
            f"gamma_ww        = {render_poly(report.gamma_ww)}",
            f"gamma_sum       = {render_poly(report.gamma_sum)}",
            f"B (quasiprimary route) = {render_poly(report.B_quasiprimary)}",
            f"B (primary route)      = {render_poly(report.B_primary)}",
            f"xi1 = {render_poly(report.xi[0])}",
            f"xi2 = {render_poly(report.xi[1])}",
            f"xi3 = {render_poly(report.xi[2])}",
            f"difference      = {render_poly(report.difference)}",
            f"alpha_zero_consistent = {report.alpha_zero_consistent}",
        ]
        _emit("\n".join(lines), args.out)
    return 1 if report.alpha_zero_consistent else 0


def cmd_certify_c2(args) -> int:
    spec = _load_spec_arg(args.spec)
    cert = certify_triplet_p2(spec=spec)
    ok, reports = verify_certificate(cert, spec)
    payload = certificate_to_json(cert)
    if args.format == "json":
        _emit(payload, args.out)
    else:
        lines = [
            f"step {r.id:2d} [{'ok' if r.ok else 'FAIL'}] {s.label}"
            for r, s in zip(reports, cert.steps)
        ]
        lines.append(f"targets: {cert.targets}")
        lines.append(f"verified: {ok}")
        _emit("\n".join(lines), args.out)
    return 0 if ok else 1


def cmd_verify_singular(args) -> int:
    spec = _load_spec_arg(args.spec)
    ok, report = verify_singular_p2(spec, solve_mode=args.solve_mode)
    if args.format == "json":
        _emit(json.dumps({"ok": ok, "report": report}, indent=2, sort_keys=True),
              args.out)
    else:
        lines = [f"singular vectors annihilated: {ok}"]
        if args.solve_mode:
            for k, v in sorted(report.get("assignment", {}).items()):
                lines.append(f"  {k} = {v}")
            if report.get("free"):
                lines.append(f"  free: {report['free']}")
            lines.append(f"  {report.get('detail', '')}")
        elif report.get("failures"):
            for k, v in sorted(report["failures"].items()):
                lines.append(f"  {k}: {v}")
        _emit("\n".join(lines), args.out)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="walgebra",
        description="Exact W-algebra mode computations, characters, "
        "C2 certificates and the coefficient derivation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p_, cutoff=False, spec=False, pflag=False):
        p_.add_argument("--format", choices=("text", "json"), default="text")
        p_.add_argument("--out", default=None, help="write output to a file")
        if cutoff:
            p_.add_argument("--cutoff", type=int, default=40)
        if spec:
            p_.add_argument("--spec", default=None,
                            help="algebra spec JSON (default: built-in triplet p=2)")
        if pflag:
            p_.add_argument("--p", type=int, required=True)

    p_br = sub.add_parser("bracket", help="mode commutator under an algebra spec")
    p_br.add_argument("--left", required=True, help="mode, e.g. T:2")
    p_br.add_argument("--right", required=True, help="mode, e.g. W1:-3")
    p_br.add_argument("--virasoro", action="store_true",
                      help="use the Virasoro-only spec")
    p_br.add_argument("--c", default="c",
                      help="central charge for --virasoro (rational or symbol)")
    common(p_br, spec=True)
    p_br.set_defaults(func=cmd_bracket)

    p_ch = sub.add_parser("character", help="triplet algebra character")
    common(p_ch, cutoff=True, pflag=True)
    p_ch.set_defaults(func=cmd_character)

    p_vc = sub.add_parser("verma-character", help="vacuum Verma module character")
    common(p_vc, cutoff=True, pflag=True)
    p_vc.set_defaults(func=cmd_verma_character)

    p_cd = sub.add_parser("char-diff",
                          help="coefficient difference of two characters at a level")
    p_cd.add_argument("--left", choices=("verma", "triplet", "chi-tilde"),
                      required=True)
    p_cd.add_argument("--right", choices=("verma", "triplet", "chi-tilde"),
                      required=True)
    p_cd.add_argument("--level", required=True, help="rational level, e.g. 8 or 17/2")
    common(p_cd, cutoff=True, pflag=True)
    p_cd.set_defaults(func=cmd_char_diff)

    p_dv = sub.add_parser("derive", help="run the coefficient derivation pipeline")
    common(p_dv, pflag=True)
    p_dv.set_defaults(func=cmd_derive)

    p_ct = sub.add_parser("certify-c2",
                          help="emit and verify the p=2 C2 membership certificate")
    common(p_ct, spec=True)
    p_ct.set_defaults(func=cmd_certify_c2)

    p_vs = sub.add_parser("verify-singular",
                          help="check the level-6 singular vectors are annihilated")
    p_vs.add_argument("--solve-mode", action="store_true",
                      help="solve for the symbolic structure constants")
    common(p_vs, spec=True)
    p_vs.set_defaults(func=cmd_verify_singular)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, SpecError, SolveError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
