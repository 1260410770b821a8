"""Command-line front end.

Exit codes: 0 certified / true, 1 unknown / false, 2 input error,
3 precondition violated.  Diagnostics go to stderr prefixed ``error:``.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import certify as C
from .errors import InputError, PreconditionViolated
from .phase import PhaseMatrix, format_phase, parse_phm
from .represent import (DEFAULT_DIM_CAP, build_monomial_rep, check_power_witness,
                        parse_power_witness)
from .rewrite import DEFAULT_MAX_DEPTH, DEFAULT_MAX_LEN, torus_normal_form
from .words import (Generator, default_names, format_presentation,
                    parse_presentation, parse_relation, parse_relations)

EXIT_OK, EXIT_NO, EXIT_INPUT, EXIT_PRECONDITION = 0, 1, 2, 3


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _powers(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise InputError(f"--p expects comma-separated integers, got {text!r}") from None


def _names(text: str | None, n: int) -> tuple[str, ...]:
    if text is None:
        return default_names(n)
    names = tuple(x.strip() for x in text.split(","))
    if len(names) != n:
        raise InputError(f"{len(names)} names given for {n} generators")
    return names


def split_witness(text: str) -> tuple[str, str | None]:
    """Separate an optional ``witness:`` line from a family-member file."""
    kept, witness = [], None
    for line in text.splitlines():
        key, sep, body = line.split("#", 1)[0].partition(":")
        if sep and key.strip() == "witness":
            if witness is not None:
                raise InputError("more than one 'witness:' line")
            witness = body.strip()
        else:
            kept.append(line)
    return "\n".join(kept) + "\n", witness


def load_member(text: str):
    """A presentation plus its nonzero witness.

    ``witness: power u -> (phase) W^k, ...`` gives a power witness;
    ``witness: torus`` builds the monomial representation of a rational
    torus presentation.
    """
    body, witness = split_witness(text)
    pres = parse_presentation(body)
    if witness is None:
        raise InputError("family member has no 'witness:' line")
    kind, _, rest = witness.partition(" ")
    if kind == "power":
        return pres, parse_power_witness(rest, pres.names)
    if kind == "torus":
        found = C.recognize_power_presentation(pres)
        if found is None or any(x != 1 for x in found[1]):
            raise InputError("'witness: torus' needs a presentation u_i u_j = theta_ij u_j u_i")
        return pres, build_monomial_rep(found[0])
    raise InputError(f"unknown witness kind {kind!r}")


def _emit(args, cert: C.Certificate, summary: str) -> None:
    text = cert.to_json()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    sys.stdout.write(text if args.format == "json" else summary + "\n")


def describe(cert: C.Certificate) -> str:
    lines = [f"{cert.kind}", format_presentation(cert.presentation).rstrip()]
    if cert.kind == C.POWER:
        sols = cert.leg("root_solutions")
        i, j = sols["pair"]
        lines.append(f"roots at ({i + 1},{j + 1}): {sols['rho'][i][j]} vs {sols['rho_prime'][i][j]}"
                     f" (difference {sols['difference']})")
        lines.append(f"nonzero quotient: {cert.leg('nonzero')['method']}")
        lines.append("verdict: not simple")
    elif cert.kind == C.GENERAL:
        leg = cert.leg("scalar_conflict")
        lines.append(f"conflict: {leg['relations'][0]}  vs  {leg['relations'][1]}")
        lines.append("verdict: not simple")
    elif cert.kind == C.QUOTIENT:
        inner = C.Certificate.from_dict(cert.leg("embedded")["certificate"])
        lines.append("quotient certificate:")
        lines += ["  " + x for x in describe(inner).splitlines()]
        lines.append("verdict: not simple")
    elif cert.kind == C.TORUS:
        nd = cert.leg("nondegeneracy")
        if nd["nondegenerate"]:
            lines.append("theta nondegenerate; verdict: simple (cited criterion)")
        else:
            lines.append(f"degeneracy witness x = {nd['witness']}; verdict: not simple")
        if nd["genericity_convention"]:
            lines.append("symbols treated as generic (Q-linearly independent)")
    lines.append("provenance: " + ", ".join(cert.provenance))
    return "\n".join(lines)


# subcommands


def cmd_solve_roots(args) -> int:
    z = parse_phm(_read(args.z))
    p = _powers(args.p)
    sols = []
    for k, rho in enumerate(C.solve_root_system(z, p)):
        if args.limit is not None and k >= args.limit:
            break
        sols.append(rho)
    total = C.root_count(p)
    if args.format == "json":
        sys.stdout.write(C.dumps({"count": total, "solutions": [s.to_json() for s in sols]}) + "\n")
    else:
        print(f"{total} solutions")
        for s in sols:
            print("  " + ", ".join(f"rho{i + 1}{j + 1}={format_phase(x)}" for i, j, x in s.upper()))
    return EXIT_OK


def cmd_certify_power(args) -> int:
    z = parse_phm(_read(args.z))
    cert = C.certify_nonsimple_power(z, _powers(args.p), _names(args.names, z.n), args.dim_cap)
    _emit(args, cert, describe(cert))
    return EXIT_OK


def cmd_certify_general(args) -> int:
    target = parse_presentation(_read(args.target))
    family = [load_member(_read(f)) for f in args.family]
    result = C.certify_nonsimple_general(target, family, args.max_len, args.max_depth)
    if isinstance(result, C.Unknown):
        if args.format == "json":
            sys.stdout.write(C.dumps({"kind": "Unknown", "reason": result.reason}) + "\n")
        else:
            print(f"unknown: {result.reason}")
        return EXIT_NO
    _emit(args, result, describe(result))
    return EXIT_OK


def cmd_certify_quotient(args) -> int:
    pres = parse_presentation(_read(args.pres))
    unitary = tuple(Generator(g.name) for g in pres.generators)
    added = parse_relations(_read(args.added), unitary) if args.added else ()
    if args.quotient_cert:
        inner = C.Certificate.from_json(_read(args.quotient_cert))
        cert = C.certify_via_quotient(pres, added, inner)
    else:
        cert = C.certify_via_power_quotient(pres, added, args.dim_cap)
    _emit(args, cert, describe(cert))
    return EXIT_OK


def cmd_torus_simple(args) -> int:
    theta = parse_phm(_read(args.theta))
    cert = C.certify_torus(theta, _names(args.names, theta.n))
    _emit(args, cert, describe(cert))
    return EXIT_OK


def cmd_nf(args) -> int:
    rho = parse_phm(_read(args.rho))
    names = _names(args.names, rho.n)
    gens = tuple(Generator(x) for x in names)
    word = parse_relation(f"{args.word} = (0) 1", gens).lhs
    nf = torus_normal_form(word, rho)
    if args.format == "json":
        sys.stdout.write(C.dumps({"coeff": format_phase(nf.coeff),
                                  "exponents": list(nf.exponents)}) + "\n")
    else:
        body = " * ".join(f"{x}^{k}" for x, k in zip(names, nf.exponents) if k) or "1"
        print(f"({format_phase(nf.coeff)}) {body}")
    return EXIT_OK


def cmd_witness_check(args) -> int:
    text = _read(args.pres)
    body, witness = split_witness(text)
    pres = parse_presentation(body)
    witness = args.witness or witness
    if witness is None:
        raise InputError("no witness given (use --witness or a 'witness: power ...' line)")
    witness = witness.removeprefix("power").strip()
    ok = check_power_witness(parse_power_witness(witness, pres.names), pres)
    if args.format == "json":
        sys.stdout.write(json.dumps({"ok": ok}) + "\n")
    else:
        print("witness satisfies all relations" if ok else "witness fails")
    return EXIT_OK if ok else EXIT_NO


def cmd_validate(args) -> int:
    try:
        data = json.loads(_read(args.cert))
    except json.JSONDecodeError as exc:
        raise InputError(f"certificate is not valid JSON: {exc}") from None
    result = C.validate_certificate(data)
    if args.format == "json":
        sys.stdout.write(C.dumps({"ok": result.ok, "reasons": result.reasons}) + "\n")
    else:
        print("ok" if result.ok else "fail")
        for r in result.reasons:
            print(f"  {r}")
    return EXIT_OK if result.ok else EXIT_NO


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nonsimple", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.set_defaults(func=func)
        return p

    p = add("solve-roots", cmd_solve_roots, "enumerate root matrices rho for (z, p)")
    p.add_argument("--z", required=True, help=".phm file")
    p.add_argument("--p", required=True, help="comma-separated exponents")
    p.add_argument("--limit", type=int, help="print at most this many solutions")

    p = add("certify-power", cmd_certify_power, "certify u_i^p_i u_j^p_j = z_ij u_j^p_j u_i^p_i nonsimple")
    p.add_argument("--z", required=True)
    p.add_argument("--p", required=True)
    p.add_argument("--names", help="comma-separated generator names")
    p.add_argument("--dim-cap", type=int, default=DEFAULT_DIM_CAP)
    p.add_argument("--out")

    p = add("certify-general", cmd_certify_general, "certify from a family of nonzero quotients")
    p.add_argument("--target", required=True, help="DSL file")
    p.add_argument("--family", required=True, action="append", help="member file (repeatable)")
    p.add_argument("--max-len", type=int, default=DEFAULT_MAX_LEN)
    p.add_argument("--max-depth", type=int, default=DEFAULT_MAX_DEPTH)
    p.add_argument("--out")

    p = add("certify-quotient", cmd_certify_quotient, "certify via a unitary quotient")
    p.add_argument("--pres", required=True, help="DSL file")
    p.add_argument("--added", help="file of 'rel:' lines added in the quotient")
    p.add_argument("--quotient-cert", help="certificate for the quotient (else built)")
    p.add_argument("--dim-cap", type=int, default=DEFAULT_DIM_CAP)
    p.add_argument("--out")

    p = add("torus-simple", cmd_torus_simple, "decide simplicity of a noncommutative torus")
    p.add_argument("--theta", required=True, help=".phm file")
    p.add_argument("--names")
    p.add_argument("--out")

    p = add("nf", cmd_nf, "torus normal form of a word")
    p.add_argument("--word", required=True, help="e.g. 'u2^2 * u1^3'")
    p.add_argument("--rho", required=True, help=".phm file")
    p.add_argument("--names")

    p = add("witness-check", cmd_witness_check, "check a power witness against a presentation")
    p.add_argument("--pres", required=True)
    p.add_argument("--witness", help="'u -> (phase) W^k, ...'")

    p = add("validate", cmd_validate, "re-validate a certificate file")
    p.add_argument("--cert", required=True)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return args.func(args)
    except PreconditionViolated as exc:
        print(f"error: precondition: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (InputError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
