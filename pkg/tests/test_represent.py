import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nonsimple.errors import InputError, RepresentationError
from nonsimple.phase import ZERO, Phase, PhaseMatrix, parse_phase
from nonsimple.represent import (MonomialMatrix, PowerWitness, build_monomial_rep,
                                 check_power_witness, format_power_witness, monomial_apply_word,
                                 parse_power_witness, verify_relations)
from nonsimple.words import (ONE, Generator, Presentation, Word, make_power_presentation,
                             make_torus_presentation, parse_relation)

from . import strategies


def dense(m: MonomialMatrix) -> np.ndarray:
    """Independent oracle: complex matrix with columns e_m -> phase_m e_perm(m)."""
    out = np.zeros((m.dim, m.dim), dtype=complex)
    for col, (row, ph) in enumerate(zip(m.perm, m.phases)):
        out[row, col] = np.exp(2j * np.pi * float(ph.rational))
    return out


def commutation_phase(a, b):
    """The phase c with a b = c b a, read off exactly."""
    ab, ba = a @ b, b @ a
    assert np.array_equal(ab.perm, ba.perm)
    diffs = {x - y for x, y in zip(ab.phases, ba.phases)}
    assert len(diffs) == 1
    return diffs.pop()


def test_third_root_rep():
    rho = PhaseMatrix.from_upper(2, {(0, 1): "1/3"})
    U1, U2 = build_monomial_rep(rho)
    assert U1.dim == U2.dim == 9
    assert commutation_phase(U1, U2) == parse_phase("1/3")
    assert U1 @ U2 == (U2 @ U1).scaled(parse_phase("1/3"))
    d1, d2 = dense(U1), dense(U2)
    assert np.allclose(d1 @ d2, np.exp(2j * np.pi / 3) * d2 @ d1)


def test_trivial_rep():
    U1, U2 = build_monomial_rep(PhaseMatrix.zero(2))
    assert U1 == U2 == MonomialMatrix.identity(1)


def test_half_rep():
    U1, U2 = build_monomial_rep(PhaseMatrix.from_upper(2, {(0, 1): "1/2"}))
    assert U1.dim == 4
    assert commutation_phase(U1, U2) == parse_phase("1/2")


def test_rep_errors():
    with pytest.raises(RepresentationError):
        build_monomial_rep(PhaseMatrix.from_upper(2, {(0, 1): "t"}))
    with pytest.raises(RepresentationError):
        build_monomial_rep(PhaseMatrix.from_upper(3, {(0, 1): "1/17"}))
    assert len(build_monomial_rep(PhaseMatrix.from_upper(3, {(0, 1): "1/17"}), dim_cap=17 ** 3)) == 3


def test_apply_word_examples():
    rep = build_monomial_rep(PhaseMatrix.from_upper(2, {(0, 1): "1/4"}))
    assert monomial_apply_word(rep, ONE) == MonomialMatrix.identity(16)
    assert monomial_apply_word(rep, Word(((0, 1), (0, -1)))) == MonomialMatrix.identity(16)
    assert monomial_apply_word(rep, Word.of((1, 2), (0, 3))) == \
        monomial_apply_word(rep, Word.of((0, 3), (1, 2))).scaled(parse_phase("1/2"))


def test_inverse_and_dense_product():
    rep = build_monomial_rep(PhaseMatrix.from_upper(3, {(0, 1): "1/2", (1, 2): "1/3", (0, 2): "1/6"}))
    a, b = rep[0], rep[2]
    assert a @ a.inverse() == MonomialMatrix.identity(a.dim)
    assert np.allclose(dense(a @ b), dense(a) @ dense(b))
    assert np.allclose(dense(a.inverse()), dense(a).conj().T)


@settings(max_examples=50, deadline=None)
@given(strategies.phase_matrices(n=st.integers(1, 3), entries=strategies.rational_phases(8)))
def test_rep_satisfies_torus_relations(rho):
    try:
        rep = build_monomial_rep(rho)
    except RepresentationError:
        return
    assert all(m.is_unitary() for m in rep)
    assert verify_relations(rep, make_torus_presentation(rho))


@settings(max_examples=40, deadline=None)
@given(strategies.phase_matrices(n=st.integers(2, 3), entries=strategies.rational_phases(4)),
       st.lists(st.integers(1, 3), min_size=3, max_size=3))
def test_rep_satisfies_power_relations(rho, p):
    p = p[:rho.n]
    rep = build_monomial_rep(rho)
    z = PhaseMatrix.from_upper(rho.n, {(i, j): rho[i, j] * (p[i] * p[j]) for i, j, _ in rho.upper()})
    assert verify_relations(rep, make_power_presentation(z, p))


def test_rep_rejects_other_phase():
    rep = build_monomial_rep(PhaseMatrix.from_upper(2, {(0, 1): "1/3"}))
    assert not verify_relations(rep, make_torus_presentation(PhaseMatrix.from_upper(2, {(0, 1): "1/4"})))
    assert not verify_relations(rep, make_torus_presentation(PhaseMatrix.from_upper(2, {(0, 1): "t"})))


def test_dimension_mismatch():
    rep = [MonomialMatrix.identity(2), MonomialMatrix.identity(3)]
    with pytest.raises(InputError):
        verify_relations(rep, make_torus_presentation(PhaseMatrix.zero(2)))


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_apply_word_is_homomorphism(data):
    rho = data.draw(strategies.phase_matrices(n=st.integers(1, 3), entries=strategies.rational_phases(4)))
    rep = build_monomial_rep(rho)
    w1, w2 = data.draw(strategies.words(rho.n)), data.draw(strategies.words(rho.n))
    assert monomial_apply_word(rep, w1 * w2) == monomial_apply_word(rep, w1) @ monomial_apply_word(rep, w2)


@given(strategies.phase_matrices(n=st.integers(1, 2), entries=strategies.rational_phases(3)))
def test_monomial_json_round_trip(rho):
    for m in build_monomial_rep(rho):
        again = MonomialMatrix.from_json(m.to_json())
        assert again == m
        assert set(m.to_json()) == {"dim", "perm", "phases"}


UV = (Generator("u"), Generator("v"))


def pres(*rels):
    return Presentation(UV, tuple(parse_relation(r, UV) for r in rels))


def test_referee_witnesses():
    plus = PowerWitness(((parse_phase("-1/20"), 2), (ZERO, -5)))
    minus = PowerWitness(((parse_phase("1/20"), 2), (ZERO, -5)))
    assert plus.evaluate(Word.of((0, 2), (1, 1))) == (parse_phase("-2/20"), -1)
    assert check_power_witness(plus, pres("u^2 * v = (1/4) v^3 * u^7"))
    assert check_power_witness(minus, pres("u^2 * v = (3/4) v^3 * u^7"))
    assert not check_power_witness(plus, pres("u^2 * v = (3/4) v^3 * u^7"))
    trivial = PowerWitness(((ZERO, 0), (ZERO, 0)))
    assert check_power_witness(trivial, pres("u * v = (0) v * u"))


@given(strategies.phases(), st.integers(-5, 5), st.integers(-5, 5), strategies.phases())
def test_power_witness_shift_invariance(c, a, b, phi):
    # u^a v^b = phi v^b u^a is exponent balanced, so a common phase shift cancels
    p = Presentation(UV, (parse_relation(f"u^{a} * v^{b} = ({phi}) v^{b} * u^{a}", UV),)) if a and b else None
    if p is None:
        return
    w = PowerWitness(((ZERO, 1), (ZERO, 1)))
    shifted = PowerWitness(((c, 1), (c, 1)))
    assert check_power_witness(w, p) == check_power_witness(shifted, p)


def test_power_witness_text():
    w = parse_power_witness("u -> (-1/20) W^2, v -> (0) W^-5", ["u", "v"])
    assert w == PowerWitness(((parse_phase("19/20"), 2), (ZERO, -5)))
    assert parse_power_witness(format_power_witness(w, ["u", "v"]), ["u", "v"]) == w
    assert PowerWitness.from_json(w.to_json()) == w
    with pytest.raises(InputError):
        parse_power_witness("u -> (0) W", ["u", "v"])


@given(strategies.phase_matrices(n=st.integers(1, 2), entries=strategies.rational_phases(6)))
def test_monomial_json_text_matches_phase_format(rho):
    from nonsimple.phase import format_phase  # noqa: PLC0415
    for m in build_monomial_rep(rho):
        assert m.to_json()["phases"] == [format_phase(p) for p in m.phases]
