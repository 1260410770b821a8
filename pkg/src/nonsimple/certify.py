"""Nonsimplicity certificates for universal C*-algebras given by monomial relations.

Every certificate is a plain JSON-compatible record: the presentation in
DSL form plus a list of evidence legs.  :func:`validate_certificate`
re-checks each leg from that raw data with the phase, lattice, rewrite and
represent primitives only; it never calls the producing functions here.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterator, Sequence, Union

from .errors import InputError, PreconditionViolated, RepresentationError
from .lattice import nondegeneracy_check, satisfies_integrality
from .phase import Phase, PhaseMatrix, format_phase, parse_phase, phase_roots
from .represent import (DEFAULT_DIM_CAP, MonomialMatrix, PowerWitness, build_monomial_rep,
                        check_power_witness, verify_relations)
from .rewrite import (DEFAULT_MAX_DEPTH, DEFAULT_MAX_LEN, Derivation, detect_scalar_conflict,
                      check_torus_relation, implies_bounded, replay_derivation)
from .words import (Generator, OpClass, Presentation, Relation, Word, format_presentation,
                    format_relation, make_power_presentation, make_torus_presentation,
                    parse_presentation, parse_relation)

VERSION = 1

POWER = "PowerNonsimple"
GENERAL = "GeneralNonsimple"
QUOTIENT = "QuotientNonsimple"
TORUS = "TorusVerdict"

COMPUTATIONAL = "computational"
CITED = "cited"

TORI_NONZERO = "noncommutative tori are nonzero"
SIMPLICITY_CRITERION = "a noncommutative torus is simple iff its theta matrix is nondegenerate"

Witness = Union[PowerWitness, Sequence[MonomialMatrix]]


@dataclass
class Certificate:
    kind: str
    presentation: Presentation
    legs: list[dict]
    provenance: list[str]
    version: int = VERSION

    def leg(self, name: str) -> dict:
        for leg in self.legs:
            if leg.get("leg") == name:
                return leg
        raise KeyError(f"certificate has no {name!r} leg")

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "kind": self.kind,
            "presentation": format_presentation(self.presentation),
            "legs": self.legs,
            "provenance": self.provenance,
        }

    def to_json(self) -> str:
        return dumps(self.to_dict()) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "Certificate":
        return cls(
            kind=str(data["kind"]),
            presentation=parse_presentation(data["presentation"]),
            legs=json.loads(json.dumps(data["legs"])),
            provenance=list(data["provenance"]),
            version=int(data["version"]),
        )

    @classmethod
    def from_json(cls, text: str) -> "Certificate":
        return cls.from_dict(json.loads(text))


def dumps(obj, indent: int = 0) -> str:
    """Deterministic JSON: one key per line, lists of scalars kept on one line."""
    pad, inner = "  " * indent, "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(k)}: {dumps(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, list) and any(isinstance(x, (dict, list)) for x in obj):
        items = [inner + dumps(x, indent + 1) for x in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    return json.dumps(obj)


@dataclass(frozen=True)
class Unknown:
    """No certificate within the search bounds; not a proof of simplicity."""

    reason: str

    def __bool__(self) -> bool:
        return False


@dataclass
class Validation:
    ok: bool
    reasons: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


# root system  (p_i p_j) rho_ij = z_ij, rho skew


def _check_powers(z: PhaseMatrix, p: Sequence[int]) -> tuple[int, ...]:
    p = tuple(int(x) for x in p)
    if len(p) != z.n:
        raise InputError(f"{len(p)} exponents given for a {z.n}x{z.n} matrix")
    if any(x < 1 for x in p):
        raise InputError("exponents must be positive")
    return p


def solve_root_system(z: PhaseMatrix, p: Sequence[int]) -> Iterator[PhaseMatrix]:
    """Every skew rho with (p_i p_j) rho_ij = z_ij, in lexicographic branch order."""
    p = _check_powers(z, p)
    pairs = list(z.upper())
    roots = [phase_roots(zij, p[i] * p[j]) for i, j, zij in pairs]
    for choice in itertools.product(*roots):
        yield PhaseMatrix.from_upper(z.n, {(i, j): c for (i, j, _), c in zip(pairs, choice)})


def root_count(p: Sequence[int]) -> int:
    return _prod(p[i] * p[j] for i in range(len(p)) for j in range(i + 1, len(p)))


def _prod(values) -> int:
    out = 1
    for v in values:
        out *= v
    return out


def _branch_solution(z: PhaseMatrix, p: Sequence[int], branches: dict) -> PhaseMatrix:
    upper = {}
    for i, j, zij in z.upper():
        upper[(i, j)] = phase_roots(zij, p[i] * p[j])[branches.get((i, j), 0)]
    return PhaseMatrix.from_upper(z.n, upper)


def _commutation(i: int, j: int, phase: Phase) -> Relation:
    return Relation.make(Word.of((i, 1), (j, 1)), phase, Word.of((j, 1), (i, 1)))


# power presentations: A_{z,p} is not simple once some p_i >= 2


def certify_nonsimple_power(z: PhaseMatrix, p: Sequence[int], names: Sequence[str] | None = None,
                            dim_cap: int = DEFAULT_DIM_CAP) -> Certificate:
    """Certificate that the algebra with ``u_i^{p_i} u_j^{p_j} = z_ij u_j^{p_j} u_i^{p_i}`` is not simple.

    Two distinct root matrices rho, rho' give two torus quotients; simplicity
    would force both commutation phases on the same generators.
    """
    p = _check_powers(z, p)
    if z.n < 2:
        raise PreconditionViolated("at least two generators are required")
    if all(x == 1 for x in p):
        raise PreconditionViolated(
            "all exponents are 1: the algebra is a noncommutative torus (try torus-simple)")
    pres = make_power_presentation(z, p, names)
    i, j = next((i, j) for i, j, _ in z.upper() if p[i] * p[j] >= 2)
    rho = _branch_solution(z, p, {})
    rho_prime = _branch_solution(z, p, {(i, j): 1})
    for sol in (rho, rho_prime):
        if not all(check_torus_relation(sol, r) for r in pres.relations):
            raise AssertionError("root solution fails a defining relation")

    conflict = detect_scalar_conflict([_commutation(i, j, rho[i, j]),
                                       _commutation(i, j, rho_prime[i, j])])
    assert conflict is not None

    nonzero, nonzero_prov = _torus_nonzero_leg(rho, rho_prime, pres, dim_cap)
    legs = [
        {"leg": "power_data", "z": z.to_json(), "p": list(p)},
        {"leg": "root_solutions", "rho": rho.to_json(), "rho_prime": rho_prime.to_json(),
         "pair": [i, j], "branches": [0, 1], "difference": format_phase(conflict.difference)},
        {"leg": "relations_hold", "solutions": ["rho", "rho_prime"],
         "relations": len(pres.relations)},
        nonzero,
        {"leg": "scalar_conflict",
         "relations": [format_relation(_commutation(i, j, rho[i, j]), pres.names),
                       format_relation(_commutation(i, j, rho_prime[i, j]), pres.names)],
         "phases": [format_phase(conflict.phase_a), format_phase(conflict.phase_b)]},
    ]
    prov = [COMPUTATIONAL, COMPUTATIONAL, COMPUTATIONAL, nonzero_prov, COMPUTATIONAL]
    return Certificate(POWER, pres, legs, prov)


def _torus_nonzero_leg(rho: PhaseMatrix, rho_prime: PhaseMatrix, pres: Presentation,
                       dim_cap: int) -> tuple[dict, str]:
    symbols = sorted(set(rho.symbol_names) | set(rho_prime.symbol_names))
    if not symbols:
        try:
            reps = {key: build_monomial_rep(m, dim_cap) for key, m in
                    (("rho", rho), ("rho_prime", rho_prime))}
        except RepresentationError as exc:
            return ({"leg": "nonzero", "method": "cited", "fact": TORI_NONZERO,
                     "reason": str(exc), "genericity_convention": False}, CITED)
        for key, m in (("rho", rho), ("rho_prime", rho_prime)):
            assert verify_relations(reps[key], make_torus_presentation(m, pres.names))
        return ({"leg": "nonzero", "method": "monomial_rep",
                 "rho": [x.to_json() for x in reps["rho"]],
                 "rho_prime": [x.to_json() for x in reps["rho_prime"]]}, COMPUTATIONAL)
    return ({"leg": "nonzero", "method": "cited", "fact": TORI_NONZERO,
             "reason": "symbolic phases", "genericity_convention": True,
             "symbols": symbols}, CITED)


# general schema: several nonzero quotients with incompatible scalars


def _witness_json(w: Witness) -> dict:
    if isinstance(w, PowerWitness):
        return w.to_json()
    return {"type": "monomial_rep", "matrices": [m.to_json() for m in w]}


def _witness_from_json(data: dict) -> Witness:
    if data["type"] == "power":
        return PowerWitness.from_json(data)
    if data["type"] == "monomial_rep":
        return [MonomialMatrix.from_json(m) for m in data["matrices"]]
    raise InputError(f"unknown witness type {data['type']!r}")


def check_witness(w: Witness, pres: Presentation) -> bool:
    if isinstance(w, PowerWitness):
        return check_power_witness(w, pres)
    try:
        return verify_relations(list(w), pres)
    except InputError:
        return False


def certify_nonsimple_general(target: Presentation, family: Sequence[tuple[Presentation, Witness]],
                              max_len: int = DEFAULT_MAX_LEN,
                              max_depth: int = DEFAULT_MAX_DEPTH) -> Union[Certificate, Unknown]:
    """Certify ``target`` nonsimple from a family of nonzero quotients.

    Each member must be nonzero (checked witness) and imply every target
    relation (bounded derivation).  A scalar conflict among the pooled member
    relations then contradicts simplicity.
    """
    if not family:
        raise InputError("the quotient family is empty")
    if not target.all_unitary:
        raise InputError("derivation search needs unitary generators")
    for member, _ in family:
        if member.generators != target.generators:
            raise InputError("family presentations must share the target's generator list")

    legs: list[dict] = []
    pooled: list[tuple[int, Relation]] = []
    for k, (member, witness) in enumerate(family):
        if not check_witness(witness, member):
            return Unknown(f"member {k}: nonzero witness does not satisfy its relations")
        derivations = []
        for r, rel in enumerate(target.relations):
            d = implies_bounded(member.relations, rel, max_len=max_len, max_depth=max_depth)
            if d is None:
                return Unknown(f"member {k}: no derivation of target relation {r} within bounds")
            derivations.append(d.to_json())
        legs.append({"leg": "member", "index": k, "presentation": format_presentation(member),
                     "witness": _witness_json(witness), "derivations": derivations})
        pooled += [(k, rel) for rel in member.relations]

    conflict = detect_scalar_conflict([rel for _, rel in pooled])
    if conflict is None:
        return Unknown("no scalar conflict among the family's relations")
    a, b = pooled[conflict.first], pooled[conflict.second]
    legs.append({"leg": "scalar_conflict", "members": [a[0], b[0]],
                 "relations": [format_relation(a[1], target.names),
                               format_relation(b[1], target.names)],
                 "phases": [format_phase(conflict.phase_a), format_phase(conflict.phase_b)]})
    return Certificate(GENERAL, target, legs, [COMPUTATIONAL] * len(legs))


# quotients: weaker operator classes or fewer relations


def upgrade_to_unitary(pres: Presentation, added: Sequence[Relation] = ()) -> Presentation:
    gens = tuple(Generator(g.name, OpClass.UNITARY) for g in pres.generators)
    return Presentation(gens, pres.relations + tuple(added))


def certify_via_quotient(pres: Presentation, added_relations: Sequence[Relation],
                         quotient_certificate: Certificate) -> Certificate:
    """Nonsimplicity of ``pres`` from a certified nonsimple quotient.

    The quotient makes every generator unitary and adds ``added_relations``;
    a unitary satisfies the isometry and partial isometry relations, so the
    quotient really is one.
    """
    quotient = upgrade_to_unitary(pres, added_relations)
    embedded = quotient_certificate.presentation
    if embedded.names != quotient.names or not embedded.all_unitary:
        raise InputError("generator mismatch between presentation and embedded certificate")
    if embedded.relation_set() != quotient.relation_set():
        raise InputError("embedded certificate is for a different set of relations")
    check = validate_certificate(quotient_certificate)
    if not check:
        raise InputError("invalid embedded certificate: " + "; ".join(check.reasons))
    legs = [
        {"leg": "quotient",
         "upgraded": [g.name for g in pres.generators if g.op_class is not OpClass.UNITARY],
         "added_relations": [format_relation(r, quotient.names) for r in added_relations]},
        {"leg": "embedded", "certificate": quotient_certificate.to_dict()},
    ]
    inner = CITED if CITED in quotient_certificate.provenance else COMPUTATIONAL
    return Certificate(QUOTIENT, pres, legs, [COMPUTATIONAL, inner])


def recognize_power_presentation(pres: Presentation) -> tuple[PhaseMatrix, tuple[int, ...]] | None:
    """Read off (z, p) if ``pres`` is exactly an A_{z,p} presentation up to relation orientation."""
    n = len(pres.generators)
    p: dict[int, int] = {}
    upper: dict[tuple[int, int], Phase] = {}
    for rel in pres.relations:
        for cand in (rel, rel.flipped()):
            L, R = cand.lhs.letters, cand.rhs.word.letters
            if len(L) == 2 and R == (L[1], L[0]) and L[0][0] < L[1][0] \
                    and L[0][1] > 0 and L[1][1] > 0:
                (i, a), (j, b) = L
                break
        else:
            return None
        if (i, j) in upper or p.setdefault(i, a) != a or p.setdefault(j, b) != b:
            return None
        upper[(i, j)] = cand.coeff
    if len(upper) != n * (n - 1) // 2 or len(p) != n:
        return None
    return PhaseMatrix.from_upper(n, upper), tuple(p[i] for i in range(n))


def certify_via_power_quotient(pres: Presentation, added_relations: Sequence[Relation],
                               dim_cap: int = DEFAULT_DIM_CAP) -> Certificate:
    """Build the unitary quotient, recognise it as A_{z,p}, certify it and wrap the result."""
    quotient = upgrade_to_unitary(pres, added_relations)
    found = recognize_power_presentation(quotient)
    if found is None:
        raise PreconditionViolated("the quotient is not of the form u_i^p_i u_j^p_j = z_ij u_j^p_j u_i^p_i")
    z, p = found
    inner = certify_nonsimple_power(z, p, quotient.names, dim_cap)
    return certify_via_quotient(pres, added_relations, inner)


# noncommutative tori


@dataclass(frozen=True)
class TorusVerdict:
    simple: bool
    witness: tuple[int, ...] | None
    genericity_convention: bool
    basis: str = SIMPLICITY_CRITERION


def torus_simplicity(theta: PhaseMatrix) -> TorusVerdict:
    result = nondegeneracy_check(theta)
    return TorusVerdict(result.nondegenerate, result.witness, bool(theta.symbol_names))


def certify_torus(theta: PhaseMatrix, names: Sequence[str] | None = None) -> Certificate:
    verdict = torus_simplicity(theta)
    legs = [
        {"leg": "torus_data", "theta": theta.to_json()},
        {"leg": "nondegeneracy", "nondegenerate": verdict.simple,
         "witness": list(verdict.witness) if verdict.witness else None,
         "genericity_convention": verdict.genericity_convention},
        {"leg": "verdict", "simple": verdict.simple, "basis": verdict.basis},
    ]
    return Certificate(TORUS, make_torus_presentation(theta, names), legs,
                       [COMPUTATIONAL, COMPUTATIONAL, CITED])


# independent validation


def validate_certificate(cert: Union[Certificate, dict]) -> Validation:
    """Re-check every leg of ``cert`` from its raw data."""
    reasons: list[str] = []
    try:
        if isinstance(cert, dict):
            cert = Certificate.from_dict(cert)
        if cert.version != VERSION:
            reasons.append(f"unsupported version {cert.version}")
        if len(cert.provenance) != len(cert.legs):
            reasons.append("provenance list does not match legs")
        elif any(x not in (COMPUTATIONAL, CITED) for x in cert.provenance):
            reasons.append("unknown provenance tag")
        checker = _VALIDATORS.get(cert.kind)
        if checker is None:
            reasons.append(f"unknown certificate kind {cert.kind!r}")
        else:
            checker(cert, reasons)
    except (InputError, KeyError, TypeError, ValueError, IndexError) as exc:
        reasons.append(f"malformed certificate: {exc}")
    return Validation(not reasons, reasons)


def _validate_power(cert: Certificate, reasons: list[str]) -> None:
    pres = cert.presentation
    data = cert.leg("power_data")
    z = PhaseMatrix.from_json(data["z"])
    p = tuple(int(x) for x in data["p"])
    if not pres.all_unitary:
        reasons.append("power presentation must have unitary generators")
    if z.n < 2 or len(p) != z.n or all(x == 1 for x in p) or any(x < 1 for x in p):
        reasons.append("hypothesis fails: need n >= 2 and some exponent >= 2")
        return
    if make_power_presentation(z, p, pres.names) != pres:
        reasons.append("presentation does not match (z, p)")

    sols = cert.leg("root_solutions")
    try:
        rho = PhaseMatrix.from_json(sols["rho"])
        rho_prime = PhaseMatrix.from_json(sols["rho_prime"])
    except InputError as exc:
        reasons.append(f"solution matrix invalid: {exc}")
        return
    if rho.n != z.n or rho_prime.n != z.n:
        reasons.append("solution matrix has wrong size")
        return
    for label, m in (("rho", rho), ("rho_prime", rho_prime)):
        for i, j, zij in z.upper():
            if m[i, j] * (p[i] * p[j]) != zij:
                reasons.append(f"{label} fails the root equation at ({i}, {j})")
        if not all(check_torus_relation(m, r) for r in pres.relations):
            reasons.append(f"{label} does not satisfy the defining relations")

    i, j = (int(x) for x in sols["pair"])
    if not 0 <= i < j < z.n:
        reasons.append("conflict pair out of range")
        return
    conflict = detect_scalar_conflict([_commutation(i, j, rho[i, j]),
                                       _commutation(i, j, rho_prime[i, j])])
    if conflict is None:
        reasons.append("conflict phases equal")
    elif parse_phase(sols["difference"]) != conflict.difference:
        reasons.append("recorded phase difference is wrong")
    leg = cert.leg("scalar_conflict")
    recorded = [parse_relation(t, pres.generators) for t in leg["relations"]]
    expected = [_commutation(i, j, rho[i, j]), _commutation(i, j, rho_prime[i, j])]
    if recorded != expected or [parse_phase(x) for x in leg["phases"]] != [rho[i, j], rho_prime[i, j]]:
        reasons.append("conflict leg does not match the solution matrices")

    nonzero = cert.leg("nonzero")
    prov = cert.provenance[cert.legs.index(nonzero)]
    if nonzero["method"] == "monomial_rep":
        for label, m in (("rho", rho), ("rho_prime", rho_prime)):
            rep = [MonomialMatrix.from_json(x) for x in nonzero[label]]
            if not verify_relations(rep, make_torus_presentation(m, pres.names)):
                reasons.append(f"monomial representation for {label} fails the torus relations")
            elif not verify_relations(rep, pres):
                reasons.append(f"monomial representation for {label} fails the power relations")
    elif nonzero["method"] == "cited":
        if prov != CITED or nonzero.get("fact") != TORI_NONZERO:
            reasons.append("cited nonzero leg must be flagged as cited")
        symbolic = bool(rho.symbol_names or rho_prime.symbol_names)
        if bool(nonzero.get("genericity_convention")) != symbolic:
            reasons.append("genericity flag does not match the phases")
    else:
        reasons.append(f"unknown nonzero method {nonzero['method']!r}")


def _validate_general(cert: Certificate, reasons: list[str]) -> None:
    target = cert.presentation
    if not target.all_unitary:
        reasons.append("target must have unitary generators")
    members = [leg for leg in cert.legs if leg.get("leg") == "member"]
    if not members:
        reasons.append("no family members")
        return
    presentations = []
    for k, leg in enumerate(members):
        member = parse_presentation(leg["presentation"])
        presentations.append(member)
        if member.generators != target.generators:
            reasons.append(f"member {k}: generator list differs from target")
            continue
        if not check_witness(_witness_from_json(leg["witness"]), member):
            reasons.append(f"member {k}: nonzero witness fails")
        derivs = leg["derivations"]
        if len(derivs) != len(target.relations):
            reasons.append(f"member {k}: expected one derivation per target relation")
            continue
        for r, (rel, d) in enumerate(zip(target.relations, derivs)):
            if not replay_derivation(member.relations, rel, Derivation.from_json(d)):
                reasons.append(f"member {k}: derivation of target relation {r} does not replay")
    leg = cert.leg("scalar_conflict")
    a, b = (int(x) for x in leg["members"])
    if not (0 <= a < len(presentations) and 0 <= b < len(presentations)):
        reasons.append("conflict refers to unknown members")
        return
    ra, rb = (parse_relation(t, target.generators) for t in leg["relations"])
    if ra.orientation_key() not in presentations[a].relation_set() \
            or rb.orientation_key() not in presentations[b].relation_set():
        reasons.append("conflict relations are not relations of the stated members")
    conflict = detect_scalar_conflict([ra, rb])
    if conflict is None:
        reasons.append("conflict phases equal")
    elif [parse_phase(x) for x in leg["phases"]] != [conflict.phase_a, conflict.phase_b]:
        reasons.append("recorded conflict phases are wrong")


def _validate_quotient(cert: Certificate, reasons: list[str]) -> None:
    pres = cert.presentation
    q = cert.leg("quotient")
    unitary = tuple(Generator(g.name, OpClass.UNITARY) for g in pres.generators)
    added = [parse_relation(t, unitary) for t in q["added_relations"]]
    quotient = upgrade_to_unitary(pres, added)
    inner = Certificate.from_dict(cert.leg("embedded")["certificate"])
    embedded = inner.presentation
    if embedded.names != quotient.names or not embedded.all_unitary:
        reasons.append("generator mismatch with embedded certificate")
    elif embedded.relation_set() != quotient.relation_set():
        reasons.append("embedded certificate is for a different set of relations")
    if inner.kind == TORUS:
        reasons.append("a torus verdict does not certify nonsimplicity")
    check = validate_certificate(inner)
    reasons += ["embedded: " + r for r in check.reasons]


def _validate_torus(cert: Certificate, reasons: list[str]) -> None:
    theta = PhaseMatrix.from_json(cert.leg("torus_data")["theta"])
    if make_torus_presentation(theta, cert.presentation.names) != cert.presentation:
        reasons.append("presentation does not match theta")
    nd = cert.leg("nondegeneracy")
    verdict = cert.leg("verdict")
    if bool(verdict["simple"]) != bool(nd["nondegenerate"]):
        reasons.append("verdict does not follow from the nondegeneracy result")
    if bool(nd.get("genericity_convention")) != bool(theta.symbol_names):
        reasons.append("genericity flag does not match theta")
    if nd["nondegenerate"]:
        if nd.get("witness") is not None:
            reasons.append("nondegenerate verdict carries a witness")
        if not nondegeneracy_check(theta, minimise=False).nondegenerate:
            reasons.append("theta is degenerate")
    else:
        x = nd.get("witness")
        if not x or not any(x):
            reasons.append("degeneracy witness missing or zero")
        elif not satisfies_integrality(theta, [int(v) for v in x]):
            reasons.append("degeneracy witness fails theta^T x in Z^n")


_VALIDATORS = {
    POWER: _validate_power,
    GENERAL: _validate_general,
    QUOTIENT: _validate_quotient,
    TORUS: _validate_torus,
}
