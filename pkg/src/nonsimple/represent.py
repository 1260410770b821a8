"""Exact nonzero-ness witnesses.

Rational twisted tori get finite monomial (generalised permutation)
representations; general monomial presentations can be checked against
power witnesses sending every generator to ``phase * W^k`` for one unitary W.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import InputError, ParseError, RepresentationError
from .phase import ZERO, Phase, PhaseMatrix, format_phase, parse_phase
from .words import Presentation, Word

DEFAULT_DIM_CAP = 4096

_PLAIN_RATIONAL = re.compile(r"(-?\d+)(?:/(\d+))?")


class MonomialMatrix:
    """The matrix sending basis vector ``e_m`` to ``phase[m] * e_{perm[m]}``.

    Phases are rational and stored as integer numerators over one common
    denominator, so every operation is exact.
    """

    __slots__ = ("perm", "num", "den")

    def __init__(self, perm, num, den: int = 1):
        perm = np.asarray(perm, dtype=np.int64)
        num = np.asarray(num, dtype=np.int64)
        if perm.ndim != 1 or perm.shape != num.shape or den < 1:
            raise InputError("malformed monomial matrix")
        self.perm = perm
        self.den = int(den)
        self.num = num % self.den
        self.perm.setflags(write=False)
        self.num.setflags(write=False)

    @classmethod
    def from_phases(cls, perm: Sequence[int], phases: Sequence[Phase]) -> "MonomialMatrix":
        if any(not p.is_rational for p in phases):
            raise RepresentationError("monomial matrices carry rational phases only")
        den = 1
        for p in phases:
            den = math.lcm(den, p.rational.denominator)
        return cls(perm, [int(p.rational * den) for p in phases], den)

    @classmethod
    def identity(cls, dim: int) -> "MonomialMatrix":
        return cls(np.arange(dim), np.zeros(dim, dtype=np.int64), 1)

    @property
    def dim(self) -> int:
        return len(self.perm)

    @property
    def phases(self) -> tuple[Phase, ...]:
        return tuple(Phase(Fraction(int(x), self.den)) for x in self.num)

    def is_unitary(self) -> bool:
        """Structural check: the permutation is a bijection of range(dim)."""
        return bool(np.array_equal(np.sort(self.perm), np.arange(self.dim)))

    def _with_den(self, den: int) -> np.ndarray:
        return self.num * (den // self.den)

    def __matmul__(self, other: "MonomialMatrix") -> "MonomialMatrix":
        # (A B) e_m = A(b_m e_{pb(m)}) = (b_m + a_{pb(m)}) e_{pa(pb(m))}
        if self.dim != other.dim:
            raise InputError("dimension mismatch")
        den = math.lcm(self.den, other.den)
        a, b = self._with_den(den), other._with_den(den)
        return MonomialMatrix(self.perm[other.perm], b + a[other.perm], den)

    def inverse(self) -> "MonomialMatrix":
        perm = np.empty_like(self.perm)
        perm[self.perm] = np.arange(self.dim)
        num = np.empty_like(self.num)
        num[self.perm] = -self.num
        return MonomialMatrix(perm, num, self.den)

    def __pow__(self, k: int) -> "MonomialMatrix":
        base = self if k >= 0 else self.inverse()
        out = MonomialMatrix.identity(self.dim)
        for _ in range(abs(k)):
            out = out @ base
        return out

    def scaled(self, c: Phase) -> "MonomialMatrix":
        if not c.is_rational:
            raise RepresentationError("cannot scale a monomial matrix by a symbolic phase")
        den = math.lcm(self.den, c.rational.denominator)
        return MonomialMatrix(self.perm, self._with_den(den) + int(c.rational * den), den)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MonomialMatrix):
            return NotImplemented
        if self.dim != other.dim or not np.array_equal(self.perm, other.perm):
            return False
        den = math.lcm(self.den, other.den)
        return bool(np.array_equal(self._with_den(den), other._with_den(den)))

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"MonomialMatrix(dim={self.dim}, den={self.den})"

    def to_json(self) -> dict:
        # same text as format_phase, without building Phase objects per entry
        g = np.gcd(self.num, self.den)
        text = [f"{a}/{b}" if a else "0" for a, b in zip((self.num // g).tolist(), (self.den // g).tolist())]
        return {"dim": self.dim, "perm": [int(x) for x in self.perm], "phases": text}

    @classmethod
    def from_json(cls, data: dict) -> "MonomialMatrix":
        perm, text = data["perm"], data["phases"]
        if int(data["dim"]) != len(perm) or len(perm) != len(text):
            raise InputError("monomial matrix dimension does not match its data")
        fracs = []
        for x in text:
            m = _PLAIN_RATIONAL.fullmatch(x) if isinstance(x, str) else None
            fracs.append(Fraction(int(m[1]), int(m[2] or 1)) if m and m[2] != "0" else parse_phase(x))
        if not all(isinstance(f, Fraction) for f in fracs):
            return cls.from_phases(perm, [Phase.of(f) for f in fracs])
        den = 1
        for f in fracs:
            den = math.lcm(den, f.denominator)
        return cls(perm, [int(f * den) for f in fracs], den)


def build_monomial_rep(rho: PhaseMatrix, dim_cap: int = DEFAULT_DIM_CAP) -> list[MonomialMatrix]:
    """Monomial unitaries ``U_i`` with ``U_i U_j = rho_ij U_j U_i`` on ``C^((Z/Q)^n)``.

    ``U_i e_m = (sum_{j<i} rho_ij m_j) e_{m + e_i}`` where Q is the common
    denominator of ``rho``.
    """
    if not rho.is_rational:
        raise RepresentationError("symbolic phases have no finite monomial representation here")
    n = rho.n
    Q = 1
    for _, _, x in rho.upper():
        Q = math.lcm(Q, x.rational.denominator)
    dim = Q ** n
    if dim > dim_cap:
        raise RepresentationError(f"representation dimension {Q}^{n} = {dim} exceeds cap {dim_cap}")
    idx = np.arange(dim, dtype=np.int64)
    digits = [(idx // Q ** k) % Q for k in range(n)]
    mats = []
    for i in range(n):
        bumped = idx - digits[i] * Q ** i + ((digits[i] + 1) % Q) * Q ** i
        num = np.zeros(dim, dtype=np.int64)
        for j in range(i):
            num += int(rho[i, j].rational * Q) * digits[j]
        mats.append(MonomialMatrix(bumped, num, Q))
    return mats


def monomial_apply_word(rep: Sequence[MonomialMatrix], w: Word) -> MonomialMatrix:
    if not rep:
        raise InputError("empty representation")
    out = MonomialMatrix.identity(rep[0].dim)
    for g, e in w.letters:
        if g >= len(rep):
            raise InputError(f"generator index {g} out of range")
        out = out @ (rep[g] ** e)
    return out


def verify_relations(rep: Sequence[MonomialMatrix], pres: Presentation) -> bool:
    """True iff every relation of ``pres`` holds exactly for the matrices."""
    if len(rep) != len(pres.generators):
        return False
    if len({m.dim for m in rep}) != 1:
        raise InputError("representation matrices have different dimensions")
    if not all(m.is_unitary() for m in rep):
        return False
    for rel in pres.relations:
        if not rel.coeff.is_rational:
            return False
        lhs = monomial_apply_word(rep, rel.lhs)
        rhs = monomial_apply_word(rep, rel.rhs.word).scaled(rel.coeff)
        if lhs != rhs:
            return False
    return True


@dataclass(frozen=True)
class PowerWitness:
    """Generator ``g`` goes to ``images[g][0] * W^images[g][1]``."""

    images: tuple[tuple[Phase, int], ...]

    def evaluate(self, w: Word) -> tuple[Phase, int]:
        # all images commute, so a word is determined by its accumulated phase and power
        phase, power = ZERO, 0
        for g, e in w.letters:
            ph, k = self.images[g]
            phase += ph * e
            power += k * e
        return phase, power

    def to_json(self) -> dict:
        return {"type": "power",
                "images": [{"phase": format_phase(ph), "power": k} for ph, k in self.images]}

    @classmethod
    def from_json(cls, data: dict) -> "PowerWitness":
        return cls(tuple((parse_phase(x["phase"]), int(x["power"])) for x in data["images"]))


def check_power_witness(witness: PowerWitness, pres: Presentation) -> bool:
    if len(witness.images) != len(pres.generators):
        return False
    for rel in pres.relations:
        lhs_phase, lhs_power = witness.evaluate(rel.lhs)
        rhs_phase, rhs_power = witness.evaluate(rel.rhs.word)
        if lhs_power != rhs_power or lhs_phase != rel.coeff + rhs_phase:
            return False
    return True


_IMAGE = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*)\s*->\s*\((.*)\)\s*W(?:\s*\^\s*([+-]?\d+))?\s*$")


def parse_power_witness(text: str, names: Sequence[str], line: int = 1) -> PowerWitness:
    """Parse ``u -> (-1/20) W^2, v -> (0) W^-5``; every generator must appear once."""
    images: dict[str, tuple[Phase, int]] = {}
    for chunk in text.split(","):
        match = _IMAGE.match(chunk)
        if not match:
            raise ParseError(f"malformed witness image {chunk.strip()!r}", line, 1)
        name, phase, power = match.groups()
        if name not in names or name in images:
            raise ParseError(f"unknown or repeated generator {name!r} in witness", line, 1)
        images[name] = (parse_phase(phase, line), 1 if power is None else int(power))
    missing = [x for x in names if x not in images]
    if missing:
        raise ParseError(f"witness has no image for {', '.join(missing)}", line, 1)
    return PowerWitness(tuple(images[x] for x in names))


def format_power_witness(witness: PowerWitness, names: Sequence[str]) -> str:
    return ", ".join(f"{x} -> ({format_phase(ph)}) W^{k}" for x, (ph, k) in zip(names, witness.images))
