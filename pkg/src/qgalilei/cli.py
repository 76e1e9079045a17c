"""Command-line interface: ``qgalilei <subcommand> ...``.

Exit status 0 on success, 1 when a verification fails, 2 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import math
import sys
from typing import Sequence

from .freealg import NCPolynomial, PRESET_NAMES, freealg_report, limit_a0, verify_flow_lemma
from .hopf import check_pairing_diagonal, hopf_pairing, hopf_report
from .induction import (
    Character,
    casimir_action,
    check_casimir,
    check_classical_limit,
    check_equivalence_alpha,
    check_equivariance,
    check_relations_on_module,
    check_star_consistency,
    induced_action,
    reduced_casimir_action,
    unitarity_precondition,
)
from .lattice import (
    LatticeParams,
    check_unitarity,
    dispersion,
    dispersion_study,
    gaussian_packet,
    kernel_omega,
    omega_continuum,
    study_csv,
)
from .opcalc import VARIABLES, WaveFunction, act_triangleleft, act_triangleright, check_duality, pairing_A
from .parse import ParseError, parse_element, parse_scalar, parse_wavefunction
from .report import VerificationReport
from .scalar import PoleError, Scalar, format_scalar

SUITES = ("hopf", "pairing", "duality", "lemma", "relations", "star", "equivalence")
XT = ("x", "t")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(ValueError):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qgalilei", description="Exact q-Galilei algebra workbench.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("normal-order", help="print the normal form of an element")
    p.add_argument("--alg", choices=PRESET_NAMES, default="uq_kmph")
    p.add_argument("expr")

    p = sub.add_parser("pair", help="evaluate a pairing")
    p.add_argument("--side", choices=("hopf", "A"), default="hopf",
                   help="hopf: uq_iphn against fq; A: uq_kmph against polynomials in v, mu, x, t")
    p.add_argument("u")
    p.add_argument("f")

    p = sub.add_parser("act", help="apply an element to a wavefunction")
    p.add_argument("--action", choices=("right", "left", "induced"), default="induced",
                   help="right: the |> action; left: the <| action; induced: the character-induced action")
    p.add_argument("--alpha", default="0")
    p.add_argument("--beta", default="beta")
    p.add_argument("element")
    p.add_argument("wf")

    p = sub.add_parser("casimir", help="apply the Casimir (or M^-1 times it) to phi(x, t)")
    p.add_argument("--reduced", action="store_true")
    p.add_argument("--alpha", default="0")
    p.add_argument("--beta", default="beta")
    p.add_argument("wf")

    p = sub.add_parser("limit", help="run another subcommand and set a = 0 in its result")
    p.add_argument("rest", nargs=argparse.REMAINDER)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--suite", choices=SUITES + ("all",), default="all")
    p.add_argument("--degree", type=int, default=4)
    p.add_argument("--json", action="store_true", help="emit JSON instead of key=value lines")

    p = sub.add_parser("lattice", help="lattice dispersion and evolution")
    p.add_argument("--a", type=float, default=0.1)
    p.add_argument("--sites", type=int, default=128)
    p.add_argument("--mass", type=float, default=1.0)
    p.add_argument("--hbar", type=float, default=1.0)
    p.add_argument("--k-mode", type=int, default=1)
    p.add_argument("--time", type=float, default=0.0)
    p.add_argument("--study", default=None, help="comma-separated spacings for a convergence table")
    p.add_argument("--k", type=float, default=1.0, help="physical wavenumber used by --study")
    return parser


def _character(args) -> Character:
    return Character(parse_scalar(args.alpha), parse_scalar(args.beta))


def _normal_order(args):
    return parse_element(args.expr, args.alg)


def _pair(args):
    if args.side == "hopf":
        return hopf_pairing(parse_element(args.u, "uq_iphn"), parse_element(args.f, "fq"))
    return pairing_A(parse_element(args.u, "uq_kmph"), parse_wavefunction(args.f))


def _act(args):
    u = parse_element(args.element, "uq_kmph")
    if args.action == "induced":
        return induced_action(_character(args), u, parse_wavefunction(args.wf, XT))
    f = parse_wavefunction(args.wf, VARIABLES)
    if args.action == "right":
        return act_triangleright(u, f)
    return act_triangleleft(u, f)


def _casimir(args):
    phi = parse_wavefunction(args.wf, XT)
    ch = _character(args)
    return reduced_casimir_action(ch, phi) if args.reduced else casimir_action(ch, phi)


def _a_to_zero(value):
    if isinstance(value, NCPolynomial):
        return limit_a0(value)
    if isinstance(value, WaveFunction):
        return value.map_coefficients(lambda c: c.eval({"a": 0}))
    if isinstance(value, Scalar):
        return value.eval({"a": 0})
    raise UsageError("limit applies to normal-order, pair, act and casimir")


def _render(value) -> str:
    if isinstance(value, Scalar):
        return format_scalar(value)
    return str(value)


COMPUTE = {"normal-order": _normal_order, "pair": _pair, "act": _act, "casimir": _casimir}


def run_suite(name: str, degree: int) -> VerificationReport:
    if degree < 1:
        raise UsageError("--degree must be at least 1")
    if name == "hopf":
        return hopf_report(degree)
    if name == "pairing":
        return check_pairing_diagonal(degree)
    if name == "duality":
        return check_duality(degree)
    if name == "lemma":
        return verify_flow_lemma(max(6, degree))
    if name == "relations":
        report = VerificationReport("relations")
        report.extend(freealg_report(random_triples=100, max_degree=degree))
        report.extend(check_relations_on_module(degree_cap=2 * degree))
        report.extend(check_casimir(degree_cap=degree + 2))
        report.extend(check_equivariance(order=max(2, degree), degree_cap=min(degree, 3)))
        report.extend(check_classical_limit(degree_cap=degree + 2))
        report.add(unitarity_precondition())
        return report
    if name == "star":
        return check_star_consistency(min(degree, 3))
    if name == "equivalence":
        return check_equivalence_alpha(degree + 2)
    if name == "all":
        report = VerificationReport("all")
        for s in SUITES:
            report.extend(run_suite(s, degree))
        return report
    raise UsageError(f"unknown suite {name!r}")


def _verify(args, out) -> int:
    report = run_suite(args.suite, args.degree)
    out.write((report.to_json() if args.json else report.to_text()) + "\n")
    return EXIT_OK if report.passed else EXIT_FAIL


def _lattice(args, out) -> int:
    template = LatticeParams(a=args.a, sites=args.sites, mass=args.mass, hbar=args.hbar)
    if args.study:
        try:
            spacings = [float(s) for s in args.study.split(",") if s.strip()]
        except ValueError:
            raise UsageError(f"--study expects comma-separated numbers, got {args.study!r}") from None
        out.write(study_csv(dispersion_study(spacings, args.k, template)))
        return EXIT_OK
    k = 2 * math.pi * args.k_mode / template.length
    lines = [
        f"a={args.a:.10g} sites={args.sites} mode={args.k_mode} k={k:.10g}",
        f"omega_a={dispersion(args.k_mode, template):.10g}",
        f"omega_kernel={kernel_omega(template, args.k_mode):.10g}",
        f"omega_0={omega_continuum(k, args.mass, args.hbar):.10g}",
    ]
    if args.time:
        state = gaussian_packet(template, k0=k)
        drift = check_unitarity(state, args.time) / state.norm()
        verdict = "conserved" if drift <= 1e-12 else "not-conserved"
        lines.append(f"time={args.time:.10g} norm={verdict} tolerance=1e-12")
    out.write("\n".join(lines) + "\n")
    return EXIT_OK


def dispatch(args, out, limit: bool = False) -> int:
    if args.command in COMPUTE:
        value = COMPUTE[args.command](args)
        if limit:
            value = _a_to_zero(value)
        out.write(_render(value) + "\n")
        return EXIT_OK
    if limit:
        raise UsageError(f"limit cannot wrap {args.command!r}")
    if args.command == "verify":
        return _verify(args, out)
    if args.command == "lattice":
        return _lattice(args, out)
    raise UsageError(f"unknown command {args.command!r}")


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    limit = False
    if args.command == "limit":
        if not args.rest:
            err.write("error: limit needs a subcommand\n")
            return EXIT_USAGE
        try:
            args = parser.parse_args(args.rest)
        except SystemExit as exc:
            return int(exc.code or 0)
        limit = True
    try:
        return dispatch(args, out, limit)
    except (ParseError, UsageError, PoleError, ValueError, KeyError, ArithmeticError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
