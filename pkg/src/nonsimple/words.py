"""Presentations by generators and phase-twisted monomial relations.

DSL example::

    gens: u unitary, v unitary
    rel: u^2 * v = (1/2) v * u^2     # u^2 v = -v u^2

A word is ``name^exp`` factors joined by ``*`` or the literal ``1``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .errors import InputError, ParseError
from .phase import ZERO, Phase, PhaseMatrix, format_phase, parse_phase


class OpClass(str, Enum):
    UNITARY = "unitary"
    ISOMETRY = "isometry"
    PARTIAL_ISOMETRY = "partial_isometry"


@dataclass(frozen=True)
class Generator:
    name: str
    op_class: OpClass = OpClass.UNITARY

    def __post_init__(self) -> None:
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", self.name):
            raise InputError(f"invalid generator name {self.name!r}")
        object.__setattr__(self, "op_class", OpClass(self.op_class))


@dataclass(frozen=True)
class Word:
    """A reduced monomial: (generator index, nonzero exponent) pairs, adjacent indices distinct."""

    letters: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        stack: list[list[int]] = []
        for g, e in self.letters:
            g, e = int(g), int(e)
            if g < 0:
                raise InputError(f"negative generator index {g}")
            if stack and stack[-1][0] == g:
                stack[-1][1] += e
                if stack[-1][1] == 0:
                    stack.pop()
            elif e:
                stack.append([g, e])
        object.__setattr__(self, "letters", tuple((g, e) for g, e in stack))

    @classmethod
    def of(cls, *pairs: tuple[int, int]) -> "Word":
        return cls(tuple(pairs))

    @classmethod
    def from_unit_letters(cls, units: Iterable[tuple[int, int]]) -> "Word":
        return cls(tuple(units))

    def unit_letters(self) -> tuple[tuple[int, int], ...]:
        """Expand into single letters ``(g, +1)`` / ``(g, -1)``."""
        return tuple((g, 1 if e > 0 else -1) for g, e in self.letters for _ in range(abs(e)))

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(tuple((g, -e) for g, e in reversed(self.letters)))

    def __len__(self) -> int:
        return sum(abs(e) for _, e in self.letters)

    @property
    def generators(self) -> set[int]:
        return {g for g, _ in self.letters}


ONE = Word()


@dataclass(frozen=True)
class PhasedWord:
    coeff: Phase
    word: Word


@dataclass(frozen=True)
class Relation:
    """``lhs = rhs.coeff * rhs.word`` in the algebra."""

    lhs: Word
    rhs: PhasedWord

    @classmethod
    def make(cls, lhs: Word, coeff: Phase, rhs: Word) -> "Relation":
        return cls(lhs, PhasedWord(Phase.of(coeff), rhs))

    @property
    def coeff(self) -> Phase:
        return self.rhs.coeff

    def flipped(self) -> "Relation":
        """The same relation read right to left: ``rhs = (-coeff) lhs``."""
        return Relation(self.rhs.word, PhasedWord(-self.coeff, self.lhs))

    def orientation_key(self) -> tuple:
        """Key identifying the relation up to orientation."""
        a = (self.lhs.letters, self.coeff.sort_key(), self.rhs.word.letters)
        f = self.flipped()
        b = (f.lhs.letters, f.coeff.sort_key(), f.rhs.word.letters)
        return min(a, b)


@dataclass(frozen=True)
class Presentation:
    generators: tuple[Generator, ...]
    relations: tuple[Relation, ...] = ()

    def __post_init__(self) -> None:
        gens = tuple(self.generators)
        rels = tuple(self.relations)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "relations", rels)
        if not gens:
            raise InputError("a presentation needs at least one generator")
        names = [g.name for g in gens]
        if len(set(names)) != len(names):
            raise InputError("generator names must be unique")
        for rel in rels:
            for word in (rel.lhs, rel.rhs.word):
                for g, e in word.letters:
                    if g >= len(gens):
                        raise InputError(f"generator index {g} out of range")
                    if e < 0 and gens[g].op_class is not OpClass.UNITARY:
                        raise InputError(
                            f"negative exponent on {gens[g].op_class.value} generator {gens[g].name}"
                        )

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(g.name for g in self.generators)

    @property
    def all_unitary(self) -> bool:
        return all(g.op_class is OpClass.UNITARY for g in self.generators)

    def index(self, name: str) -> int:
        return self.names.index(name)

    def relation_set(self) -> set[tuple]:
        return {r.orientation_key() for r in self.relations}

    def __str__(self) -> str:
        return format_presentation(self)


# printing


def format_word(word: Word, names: Sequence[str]) -> str:
    if not word.letters:
        return "1"
    return " * ".join(names[g] if e == 1 else f"{names[g]}^{e}" for g, e in word.letters)


def format_relation(rel: Relation, names: Sequence[str]) -> str:
    return (f"{format_word(rel.lhs, names)} = ({format_phase(rel.coeff)}) "
            f"{format_word(rel.rhs.word, names)}")


def format_presentation(pres: Presentation) -> str:
    lines = ["gens: " + ", ".join(f"{g.name} {g.op_class.value}" for g in pres.generators)]
    lines += ["rel: " + format_relation(r, pres.names) for r in pres.relations]
    return "\n".join(lines) + "\n"


# parsing

_FACTOR = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)(?:\s*\^\s*([+-]?\d+))?\s*$")


def _parse_word(text: str, generators: Sequence[Generator], line: int, col: int) -> Word:
    names = [g.name for g in generators]
    stripped = text.strip()
    offset = col + len(text) - len(text.lstrip())
    if not stripped:
        raise ParseError("expected a word", line, offset)
    if stripped == "1":
        return ONE
    pairs = []
    pos = 0
    for part in stripped.split("*"):
        part_col = offset + pos + len(part) - len(part.lstrip())
        pos += len(part) + 1
        match = _FACTOR.match(part.strip())
        if not match:
            raise ParseError(f"malformed factor {part.strip()!r}", line, part_col)
        name, exp = match.group(1), match.group(2)
        if name not in names:
            raise ParseError(f"unknown generator {name!r}", line, part_col)
        e = 1 if exp is None else int(exp)
        if e == 0:
            raise ParseError(f"zero exponent on {name!r}", line, part_col)
        g = names.index(name)
        if e < 0 and generators[g].op_class is not OpClass.UNITARY:
            raise ParseError(
                f"negative exponent on {generators[g].op_class.value} generator {name!r}",
                line, part_col,
            )
        pairs.append((g, e))
    return Word(tuple(pairs))


def _matching_paren(text: str, start: int) -> int:
    depth = 0
    for i in range(start, len(text)):
        if text[i] == "(":
            depth += 1
        elif text[i] == ")":
            depth -= 1
            if depth == 0:
                return i
    return -1


def parse_relation(text: str, generators: Sequence[Generator], line: int = 1, col: int = 1) -> Relation:
    """Parse ``WORD = (PHASE) WORD`` against a generator list."""
    if text.count("=") != 1:
        raise ParseError("relation needs exactly one '='", line, col)
    eq = text.index("=")
    lhs = _parse_word(text[:eq], generators, line, col)
    rest = text[eq + 1:]
    open_at = eq + 1 + len(rest) - len(rest.lstrip())
    if open_at >= len(text) or text[open_at] != "(":
        raise ParseError("expected '(PHASE)' after '='", line, col + open_at)
    close_at = _matching_paren(text, open_at)
    if close_at < 0:
        raise ParseError("unbalanced parenthesis", line, col + open_at)
    coeff = parse_phase(text[open_at + 1:close_at], line, col + open_at + 1)
    rhs = _parse_word(text[close_at + 1:], generators, line, col + close_at + 1)
    return Relation(lhs, PhasedWord(coeff, rhs))


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if line.strip():
            yield lineno, line


def parse_generators(body: str, line: int, col: int) -> tuple[Generator, ...]:
    gens = []
    pos = 0
    for chunk in body.split(","):
        chunk_col = col + pos + len(chunk) - len(chunk.lstrip())
        pos += len(chunk) + 1
        fields = chunk.split()
        if len(fields) != 2:
            raise ParseError("expected 'name class'", line, chunk_col)
        name, cls = fields
        try:
            op = OpClass(cls.replace("-", "_"))
        except ValueError:
            raise ParseError(f"unknown operator class {cls!r}", line, chunk_col) from None
        if any(g.name == name for g in gens):
            raise ParseError(f"duplicate generator name {name!r}", line, chunk_col)
        try:
            gens.append(Generator(name, op))
        except InputError as exc:
            raise ParseError(str(exc), line, chunk_col) from None
    return tuple(gens)


def parse_relations(text: str, generators: Sequence[Generator]) -> tuple[Relation, ...]:
    """Parse a block of ``rel:`` lines (no ``gens:`` header)."""
    rels = []
    for lineno, line in _content_lines(text):
        key, _, body = line.partition(":")
        if key.strip() != "rel" or not _:
            raise ParseError("expected 'rel:' line", lineno, 1)
        if body.strip():
            rels.append(parse_relation(body, generators, lineno, len(key) + 2))
    return tuple(rels)


def parse_presentation(text: str) -> Presentation:
    gens: tuple[Generator, ...] | None = None
    rels: list[Relation] = []
    for lineno, line in _content_lines(text):
        key, sep, body = line.partition(":")
        col = len(key) + 2
        key = key.strip()
        if not sep or key not in ("gens", "rel"):
            raise ParseError("expected 'gens:' or 'rel:'", lineno, 1)
        if key == "gens":
            if gens is not None:
                raise ParseError("duplicate 'gens:' line", lineno, 1)
            gens = parse_generators(body, lineno, col)
        else:
            if gens is None:
                raise ParseError("'rel:' before 'gens:'", lineno, 1)
            if body.strip():
                rels.append(parse_relation(body, gens, lineno, col))
    if gens is None:
        raise ParseError("missing 'gens:' line", 1, 1)
    return Presentation(gens, tuple(rels))


# the two families


def default_names(n: int) -> tuple[str, ...]:
    return tuple(f"u{i + 1}" for i in range(n))


def make_power_presentation(z: PhaseMatrix, p: Sequence[int],
                            names: Sequence[str] | None = None) -> Presentation:
    """Unitaries with ``u_i^{p_i} u_j^{p_j} = z_ij u_j^{p_j} u_i^{p_i}`` for i < j."""
    n = z.n
    if len(p) != n:
        raise InputError(f"{len(p)} exponents given for {n} generators")
    if any(int(x) < 1 for x in p):
        raise InputError("exponents must be positive")
    names = tuple(names) if names is not None else default_names(n)
    if len(names) != n:
        raise InputError("wrong number of generator names")
    rels = tuple(
        Relation.make(Word.of((i, p[i]), (j, p[j])), zij, Word.of((j, p[j]), (i, p[i])))
        for i, j, zij in z.upper()
    )
    return Presentation(tuple(Generator(x) for x in names), rels)


def make_torus_presentation(theta: PhaseMatrix, names: Sequence[str] | None = None) -> Presentation:
    """Unitaries with ``u_i u_j = theta_ij u_j u_i`` for i < j."""
    return make_power_presentation(theta, [1] * theta.n, names)


__all__ = [
    "OpClass", "Generator", "Word", "ONE", "PhasedWord", "Relation", "Presentation",
    "format_word", "format_relation", "format_presentation",
    "parse_relation", "parse_relations", "parse_presentation", "parse_generators",
    "make_power_presentation", "make_torus_presentation", "default_names", "ZERO",
]
