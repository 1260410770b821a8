"""Exact arithmetic in the circle group, written additively as R/Z.

A :class:`Phase` is a rational number taken modulo 1 plus a finite
rational combination of formal symbols.  The turn ``a/b`` stands for the
complex unit ``exp(2*pi*i*a/b)``.  Symbols are treated as Q-linearly
independent of 1 and of each other, which makes equality decidable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .errors import InputError, ParseError

PhaseLike = Union["Phase", int, Fraction, str]

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


@dataclass(frozen=True)
class Phase:
    """An element of the subgroup of R/Z spanned by Q and formal symbols."""

    rational: Fraction = Fraction(0)
    symbols: tuple[tuple[str, Fraction], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "rational", Fraction(self.rational) % 1)
        merged: dict[str, Fraction] = {}
        for name, coeff in self.symbols:
            if not isinstance(name, str) or not _IDENT.fullmatch(name):
                raise InputError(f"invalid symbol name {name!r}")
            merged[name] = merged.get(name, Fraction(0)) + Fraction(coeff)
        object.__setattr__(
            self,
            "symbols",
            tuple(sorted((k, v) for k, v in merged.items() if v != 0)),
        )

    # construction

    @classmethod
    def of(cls, value: PhaseLike) -> "Phase":
        if isinstance(value, Phase):
            return value
        if isinstance(value, str):
            return parse_phase(value)
        if isinstance(value, (int, Fraction)):
            return cls(Fraction(value))
        raise TypeError(f"cannot make a Phase from {type(value).__name__}")

    @classmethod
    def symbol(cls, name: str, coeff: Union[int, Fraction] = 1) -> "Phase":
        return cls(Fraction(0), ((name, Fraction(coeff)),))

    # queries

    @property
    def is_zero(self) -> bool:
        return self.rational == 0 and not self.symbols

    @property
    def is_rational(self) -> bool:
        return not self.symbols

    @property
    def symbol_names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.symbols)

    def coefficient(self, name: str) -> Fraction:
        for key, value in self.symbols:
            if key == name:
                return value
        return Fraction(0)

    def sort_key(self) -> tuple:
        return (self.rational, self.symbols)

    # group law

    def __add__(self, other: "Phase") -> "Phase":
        if not isinstance(other, Phase):
            return NotImplemented
        return Phase(self.rational + other.rational, self.symbols + other.symbols)

    def __neg__(self) -> "Phase":
        return Phase(-self.rational, tuple((k, -v) for k, v in self.symbols))

    def __sub__(self, other: "Phase") -> "Phase":
        if not isinstance(other, Phase):
            return NotImplemented
        return self + (-other)

    def __mul__(self, m: int) -> "Phase":
        if not isinstance(m, int) or isinstance(m, bool):
            return NotImplemented
        return Phase(self.rational * m, tuple((k, v * m) for k, v in self.symbols))

    __rmul__ = __mul__

    def __str__(self) -> str:
        return format_phase(self)

    def __repr__(self) -> str:
        return f"Phase({format_phase(self)!r})"


ZERO = Phase()


def phase_add(a: Phase, b: Phase) -> Phase:
    return a + b


def phase_scale(a: Phase, m: int) -> Phase:
    """The m-fold sum of ``a`` (``m`` may be zero or negative)."""
    return a * m


def phase_roots(a: Phase, m: int) -> list[Phase]:
    """All ``m`` solutions ``x`` of ``m*x = a``, ordered by branch index.

    Branch ``k`` is ``(a + k)/m``; symbol coefficients are divided by
    ``m`` exactly and only the rational part carries the branch.
    """
    if m < 1:
        raise InputError(f"root order must be positive, got {m}")
    # a.rational is already reduced into [0, 1), so (r + k)/m stays in [0, 1)
    symbols = tuple((k, v / m) for k, v in a.symbols)
    return [Phase((a.rational + k) / m, symbols) for k in range(m)]


# text form


def _format_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_phase(a: Phase) -> str:
    """Canonical text: ``a/b``, ``a/b + (c/d)t``, ``(c/d)t`` or bare ``t``."""
    terms = [k if v == 1 else f"({_format_fraction(v)}){k}" for k, v in a.symbols]
    if a.rational != 0 or not terms:
        terms.insert(0, _format_fraction(a.rational))
    return " + ".join(terms)


class _PhaseParser:
    def __init__(self, text: str, line: int, column: int):
        self.text = text
        self.line = line
        self.column = column
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            match = _TOKEN.match(text, pos)
            if match.group(0).strip() == "":
                break
            start = match.start(match.lastindex)
            kind = ("num", "ident", "op")[match.lastindex - 1]
            self.tokens.append((kind, match.group(match.lastindex), start))
            pos = match.end()
        self.i = 0

    def error(self, message: str, offset: int | None = None) -> ParseError:
        if offset is None:
            offset = self.tokens[self.i][2] if self.i < len(self.tokens) else len(self.text)
        return ParseError(message, self.line, self.column + offset)

    def peek(self) -> tuple[str, str, int] | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self, kind: str, value: str | None = None) -> str:
        tok = self.peek()
        if tok is None or tok[0] != kind or (value is not None and tok[1] != value):
            expected = value or kind
            raise self.error(f"expected {expected!r} in phase")
        self.i += 1
        return tok[1]

    def signed_fraction(self) -> Fraction:
        sign = 1
        tok = self.peek()
        if tok and tok[:2] in (("op", "-"), ("op", "+")):
            sign = -1 if tok[1] == "-" else 1
            self.i += 1
        return sign * self.fraction()

    def fraction(self) -> Fraction:
        num = int(self.take("num"))
        tok = self.peek()
        if tok and tok[:2] == ("op", "/"):
            self.i += 1
            den = int(self.take("num"))
            if den == 0:
                raise self.error("zero denominator", tok[2])
            return Fraction(num, den)
        return Fraction(num)

    def term(self, sign: int) -> Phase:
        tok = self.peek()
        if tok is None:
            raise self.error("unexpected end of phase")
        kind, value, _ = tok
        if kind == "op" and value == "(":
            self.i += 1
            coeff = self.signed_fraction()
            self.take("op", ")")
            name = self.take("ident")
            return Phase.symbol(name, sign * coeff)
        if kind == "ident":
            self.i += 1
            return Phase.symbol(value, sign)
        if kind == "num":
            coeff = self.fraction()
            nxt = self.peek()
            if nxt and nxt[:2] == ("op", "*"):
                self.i += 1
                return Phase.symbol(self.take("ident"), sign * coeff)
            if nxt and nxt[0] == "ident":
                self.i += 1
                return Phase.symbol(nxt[1], sign * coeff)
            return Phase(sign * coeff)
        raise self.error(f"unexpected {value!r} in phase")

    def parse(self) -> Phase:
        if not self.tokens:
            raise self.error("empty phase", 0)
        total = ZERO
        sign = 1
        tok = self.peek()
        if tok and tok[:2] in (("op", "-"), ("op", "+")):
            sign = -1 if tok[1] == "-" else 1
            self.i += 1
        total += self.term(sign)
        while (tok := self.peek()) is not None:
            if tok[:2] not in (("op", "-"), ("op", "+")):
                raise self.error(f"unexpected {tok[1]!r} in phase")
            self.i += 1
            total += self.term(-1 if tok[1] == "-" else 1)
        return total


def parse_phase(text: str, line: int = 1, column: int = 1) -> Phase:
    """Parse the text form; accepts ``-1/20``, ``1/6 + (1/6)t``, ``-t``, ``2/3*t``."""
    return _PhaseParser(text, line, column).parse()


# phase matrices


@dataclass(frozen=True)
class PhaseMatrix:
    """An n x n matrix of phases, additively skew with zero diagonal."""

    entries: tuple[tuple[Phase, ...], ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(Phase.of(x) for x in row) for row in self.entries)
        object.__setattr__(self, "entries", rows)
        n = len(rows)
        if n < 1:
            raise InputError("phase matrix must be at least 1x1")
        for i, row in enumerate(rows):
            if len(row) != n:
                raise InputError(f"phase matrix row {i} has length {len(row)}, expected {n}")
            if not row[i].is_zero:
                raise InputError(f"diagonal entry ({i}, {i}) is {row[i]}, expected 0")
            for j in range(i):
                if row[j] != -rows[j][i]:
                    raise InputError(f"entries ({i}, {j}) and ({j}, {i}) are not negatives")

    @classmethod
    def zero(cls, n: int) -> "PhaseMatrix":
        return cls(tuple(tuple(ZERO for _ in range(n)) for _ in range(n)))

    @classmethod
    def from_upper(cls, n: int, upper: Mapping[tuple[int, int], PhaseLike]) -> "PhaseMatrix":
        """Build from zero-based strictly-upper entries; the rest is implied."""
        rows = [[ZERO] * n for _ in range(n)]
        for (i, j), value in upper.items():
            if not 0 <= i < j < n:
                raise InputError(f"index pair ({i}, {j}) is not strictly upper triangular")
            rows[i][j] = Phase.of(value)
            rows[j][i] = -rows[i][j]
        return cls(tuple(map(tuple, rows)))

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij: tuple[int, int]) -> Phase:
        i, j = ij
        return self.entries[i][j]

    def upper(self) -> Iterator[tuple[int, int, Phase]]:
        for i in range(self.n):
            for j in range(i + 1, self.n):
                yield i, j, self.entries[i][j]

    @property
    def is_rational(self) -> bool:
        return all(x.is_rational for row in self.entries for x in row)

    @property
    def symbol_names(self) -> tuple[str, ...]:
        return tuple(sorted({s for row in self.entries for x in row for s in x.symbol_names}))

    def to_json(self) -> list[list[str]]:
        return [[format_phase(x) for x in row] for row in self.entries]

    @classmethod
    def from_json(cls, rows: Sequence[Sequence[str]]) -> "PhaseMatrix":
        return cls(tuple(tuple(parse_phase(x) for x in row) for row in rows))


def parse_phm(text: str) -> PhaseMatrix:
    """Read the ``.phm`` format: ``n=<int>`` then ``i j PHASE`` lines, 1-based, i < j."""
    n: int | None = None
    upper: dict[tuple[int, int], Phase] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        col = len(line) - len(line.lstrip()) + 1
        body = line.strip()
        if n is None:
            match = re.fullmatch(r"n\s*=\s*(\d+)", body)
            if not match:
                raise ParseError("expected header 'n=<int>'", lineno, col)
            n = int(match.group(1))
            if n < 1:
                raise ParseError("matrix size must be positive", lineno, col)
            continue
        match = re.match(r"(\d+)\s+(\d+)\s+", body)
        if not match:
            raise ParseError("expected 'i j PHASE'", lineno, col)
        i, j = int(match.group(1)), int(match.group(2))
        if not 1 <= i < j <= n:
            raise ParseError(f"entry ({i}, {j}) must satisfy 1 <= i < j <= {n}", lineno, col)
        if (i - 1, j - 1) in upper:
            raise ParseError(f"duplicate entry ({i}, {j})", lineno, col)
        upper[(i - 1, j - 1)] = parse_phase(body[match.end():], lineno, col + match.end())
    if n is None:
        raise ParseError("missing header 'n=<int>'", 1, 1)
    return PhaseMatrix.from_upper(n, upper)


def format_phm(m: PhaseMatrix) -> str:
    lines = [f"n={m.n}"]
    lines += [f"{i + 1} {j + 1} {format_phase(x)}" for i, j, x in m.upper() if not x.is_zero]
    return "\n".join(lines) + "\n"


def phase_sum(items: Iterable[Phase]) -> Phase:
    total = ZERO
    for x in items:
        total += x
    return total
