"""Normal forms in twisted tori and bounded derivation search over monomial relations."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .errors import InputError
from .phase import ZERO, Phase, PhaseMatrix, format_phase, parse_phase
from .words import PhasedWord, Relation, Word

DEFAULT_MAX_LEN = 32
DEFAULT_MAX_DEPTH = 6
DEFAULT_MAX_STATES = 200_000

FORWARD = "forward"
BACKWARD = "backward"


@dataclass(frozen=True)
class RhoNormalForm:
    """``coeff * u_1^{k_1} ... u_n^{k_n}``."""

    coeff: Phase
    exponents: tuple[int, ...]


def _exchange(rho: PhaseMatrix, exps: Sequence[int], g: int, a: int) -> Phase:
    # moving u_g^a left past u_j^{k_j} for every j > g picks up k_j*a*rho_jg
    total = ZERO
    for j in range(g + 1, rho.n):
        if exps[j]:
            total += rho[j, g] * (exps[j] * a)
    return total


def torus_normal_form(w: Word, rho: PhaseMatrix) -> RhoNormalForm:
    """Sort ``w`` into ascending generator order using ``v_i v_j = rho_ij v_j v_i``."""
    exps = [0] * rho.n
    coeff = ZERO
    for g, a in w.letters:
        if g >= rho.n:
            raise InputError(f"generator index {g} out of range for a {rho.n}-generator torus")
        coeff += _exchange(rho, exps, g, a)
        exps[g] += a
    return RhoNormalForm(coeff, tuple(exps))


def nf_multiply(x: RhoNormalForm, y: RhoNormalForm, rho: PhaseMatrix) -> RhoNormalForm:
    """Twisted product of two normal forms."""
    coeff = x.coeff + y.coeff
    exps = list(x.exponents)
    for g, a in enumerate(y.exponents):
        if a:
            coeff += _exchange(rho, exps, g, a)
            exps[g] += a
    return RhoNormalForm(coeff, tuple(exps))


def check_torus_relation(rho: PhaseMatrix, r: Relation) -> bool:
    lhs = torus_normal_form(r.lhs, rho)
    rhs = torus_normal_form(r.rhs.word, rho)
    return lhs.exponents == rhs.exponents and lhs.coeff == r.coeff + rhs.coeff


# derivations


@dataclass(frozen=True)
class Step:
    rule: int
    position: int
    direction: str
    result: PhasedWord

    def to_json(self) -> dict:
        return {
            "rule": self.rule,
            "position": self.position,
            "direction": self.direction,
            "word": [list(pair) for pair in self.result.word.letters],
            "phase": format_phase(self.result.coeff),
        }

    @classmethod
    def from_json(cls, data: dict) -> "Step":
        word = Word(tuple((int(g), int(e)) for g, e in data["word"]))
        return cls(int(data["rule"]), int(data["position"]), str(data["direction"]),
                   PhasedWord(parse_phase(data["phase"]), word))


@dataclass(frozen=True)
class Derivation:
    steps: tuple[Step, ...]

    @property
    def depth(self) -> int:
        return len(self.steps)

    def to_json(self) -> list[dict]:
        return [s.to_json() for s in self.steps]

    @classmethod
    def from_json(cls, data: Sequence[dict]) -> "Derivation":
        return cls(tuple(Step.from_json(s) for s in data))


def _sides(rule: Relation, direction: str) -> tuple[tuple, Phase, tuple]:
    if direction == FORWARD:
        return rule.lhs.unit_letters(), rule.coeff, rule.rhs.word.unit_letters()
    return rule.rhs.word.unit_letters(), -rule.coeff, rule.lhs.unit_letters()


def _apply(letters: tuple, pos: int, pattern: tuple, replacement: tuple) -> Word | None:
    if not pattern or letters[pos:pos + len(pattern)] != pattern:
        return None
    return Word.from_unit_letters(letters[:pos] + replacement + letters[pos + len(pattern):])


def _successors(state: PhasedWord, rules: Sequence[Relation], max_len: int):
    letters = state.word.unit_letters()
    for idx, rule in enumerate(rules):
        for direction in (FORWARD, BACKWARD):
            pattern, phase, replacement = _sides(rule, direction)
            if not pattern or len(pattern) > len(letters):
                continue
            for pos in range(len(letters) - len(pattern) + 1):
                word = _apply(letters, pos, pattern, replacement)
                if word is not None and len(word) <= max_len:
                    yield Step(idx, pos, direction, PhasedWord(state.coeff + phase, word))


def implies_bounded(rules: Sequence[Relation], target: Relation,
                    max_len: int = DEFAULT_MAX_LEN, max_depth: int = DEFAULT_MAX_DEPTH,
                    max_states: int = DEFAULT_MAX_STATES) -> Derivation | None:
    """Breadth-first search for a chain of rule applications from target.lhs to target.rhs.

    Returns ``None`` when nothing is found within the bounds; that is not a
    refutation.  States are deduplicated on the word together with its phase.
    """
    if max_len < 1 or max_depth < 1:
        raise InputError("search bounds must be positive")
    start = PhasedWord(ZERO, target.lhs)
    goal = target.rhs
    if start == goal:
        return Derivation(())
    parents: dict[PhasedWord, tuple[PhasedWord, Step] | None] = {start: None}
    frontier = deque([(start, 0)])
    while frontier:
        state, depth = frontier.popleft()
        if depth >= max_depth:
            continue
        for step in _successors(state, rules, max_len):
            nxt = step.result
            if nxt in parents:
                continue
            parents[nxt] = (state, step)
            if nxt == goal:
                return _unwind(parents, nxt)
            if len(parents) >= max_states:
                return None
            frontier.append((nxt, depth + 1))
    return None


def _unwind(parents, end: PhasedWord) -> Derivation:
    steps = []
    node = end
    while parents[node] is not None:
        node, step = parents[node]
        steps.append(step)
    return Derivation(tuple(reversed(steps)))


def replay_derivation(rules: Sequence[Relation], target: Relation, derivation: Derivation) -> bool:
    """Re-check every step of ``derivation`` from scratch."""
    current = PhasedWord(ZERO, target.lhs)
    for step in derivation.steps:
        if not 0 <= step.rule < len(rules) or step.direction not in (FORWARD, BACKWARD):
            return False
        pattern, phase, replacement = _sides(rules[step.rule], step.direction)
        letters = current.word.unit_letters()
        if step.position < 0 or step.position + len(pattern) > len(letters):
            return False
        word = _apply(letters, step.position, pattern, replacement)
        if word is None:
            return False
        current = PhasedWord(current.coeff + phase, word)
        if current != step.result:
            return False
    return current == target.rhs


# scalar conflicts


@dataclass(frozen=True)
class ScalarConflict:
    """Two relations ``L = a R`` and ``L = b R`` with ``a != b``, forcing ``(a - b) 1 = 0``."""

    first: int
    second: int
    phase_a: Phase
    phase_b: Phase
    lhs: Word
    rhs: Word

    @property
    def difference(self) -> Phase:
        return self.phase_a - self.phase_b


def detect_scalar_conflict(relations: Sequence[Relation]) -> ScalarConflict | None:
    """First pair (in index order) relating the same two words by different phases.

    A pair written in opposite orientations is compared after flipping the
    second relation.
    """
    for i, a in enumerate(relations):
        for j in range(i + 1, len(relations)):
            b = relations[j]
            for cand in (b, b.flipped()):
                if cand.lhs == a.lhs and cand.rhs.word == a.rhs.word and cand.coeff != a.coeff:
                    return ScalarConflict(i, j, a.coeff, cand.coeff, a.lhs, a.rhs.word)
    return None
