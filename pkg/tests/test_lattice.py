import itertools
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nonsimple.lattice import (IntMatrix, integer_kernel, nondegeneracy_check, pairing,
                               satisfies_integrality, smith_normal_form)
from nonsimple.phase import PhaseMatrix

from . import strategies

int_matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-30, 30), min_size=c, max_size=c),
                           min_size=r, max_size=r)))


def leibniz_det(rows):
    n = len(rows)
    total = 0
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        total += (-1) ** inversions * math.prod(rows[i][perm[i]] for i in range(n))
    return total


def brute_witnesses(theta, bound):
    return [x for x in itertools.product(range(-bound, bound + 1), repeat=theta.n)
            if any(x) and satisfies_integrality(theta, x)]


def check_snf(A: IntMatrix):
    snf = smith_normal_form(A)
    assert snf.U @ A @ snf.V == snf.D
    assert abs(snf.U.det()) == 1
    assert abs(snf.V.det()) == 1
    d = snf.diagonal
    for i in range(snf.D.rows):
        for j in range(snf.D.cols):
            if i != j:
                assert snf.D[i, j] == 0
    assert all(x >= 0 for x in d)
    for a, b in zip(d, d[1:]):
        assert (b == 0) if a == 0 else (b % a == 0)
    return d


def test_snf_2x2_example():
    rows = [[2, 4], [6, 8]]
    # oracle: d1 = gcd of entries, d1*d2 = |det|
    d1 = math.gcd(*[x for r in rows for x in r])
    d2 = abs(leibniz_det(rows)) // d1
    assert check_snf(IntMatrix.from_rows(rows)) == [d1, d2] == [2, 4]


def test_snf_identity_and_zero():
    assert check_snf(IntMatrix.identity(3)) == [1, 1, 1]
    assert check_snf(IntMatrix.from_rows([[0]])) == [0]


@given(int_matrices)
def test_snf_postconditions(rows):
    A = IntMatrix.from_rows(rows)
    d = check_snf(A)
    nonzero = [x for x in d if x]
    if nonzero:
        assert d[0] == math.gcd(*A.entries)
    if A.rows == A.cols:
        assert math.prod(d) == abs(leibniz_det(rows))


@given(int_matrices)
def test_snf_diagonal_is_invariant(rows):
    # D depends only on A: permuting and negating rows must not change it
    A = IntMatrix.from_rows(rows)
    shuffled = IntMatrix.from_rows([[-x for x in r] for r in reversed(rows)])
    assert smith_normal_form(A).diagonal == smith_normal_form(shuffled).diagonal


@given(st.lists(st.lists(st.integers(-6, 6), min_size=3, max_size=3), min_size=1, max_size=3))
def test_integer_kernel(rows):
    A = IntMatrix.from_rows(rows)
    basis = integer_kernel(A)
    for v in basis:
        assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in rows)
    assert len(basis) == 3 - smith_normal_form(A).rank


def test_det():
    assert IntMatrix.from_rows([[0, 1], [1, 0]]).det() == -1
    assert IntMatrix.from_rows([[2, 0, 1], [1, 3, 2], [1, 1, 1]]).det() == leibniz_det(
        [[2, 0, 1], [1, 3, 2], [1, 1, 1]])


def test_nondegeneracy_half():
    theta = PhaseMatrix.from_upper(2, {(0, 1): "1/2"})
    result = nondegeneracy_check(theta)
    assert not result.nondegenerate
    assert result.witness == (2, 0)
    # oracle: (2, 0) works and nothing of sup-norm 1 does
    found = brute_witnesses(theta, 2)
    assert (2, 0) in found
    assert all(max(map(abs, x)) == 2 for x in found)


def test_nondegeneracy_symbolic():
    assert nondegeneracy_check(PhaseMatrix.from_upper(2, {(0, 1): "t"})).nondegenerate


def test_nondegeneracy_zero():
    assert nondegeneracy_check(PhaseMatrix.zero(2)).witness == (1, 0)


def test_nondegeneracy_mixed_symbol_and_rational():
    # theta_12 = t, theta_13 = t, theta_23 = 1/3: symbol kernel spanned by (0, 1, -1)
    theta = PhaseMatrix.from_upper(3, {(0, 1): "t", (0, 2): "t", (1, 2): "1/3"})
    result = nondegeneracy_check(theta)
    assert not result.nondegenerate
    assert satisfies_integrality(theta, result.witness)
    assert result.witness == (0, 3, -3)


def test_symbol_kernels():
    # odd n with one symbol: the skew coefficient matrix is singular
    theta = PhaseMatrix.from_upper(3, {(0, 1): "s", (0, 2): "s", (1, 2): "s"})
    result = nondegeneracy_check(theta)
    assert result.witness == (1, -1, 1)
    # two independent symbols: the joint kernel of (1,0,1) and (1,-1,0) lines is trivial
    theta = PhaseMatrix.from_upper(3, {(0, 1): "s", (0, 2): "t", (1, 2): "s + t"})
    assert nondegeneracy_check(theta).nondegenerate
    theta4 = PhaseMatrix.from_upper(4, {(0, 1): "s", (2, 3): "t"})
    assert nondegeneracy_check(theta4).nondegenerate


@settings(max_examples=60, deadline=None)
@given(strategies.phase_matrices(n=st.integers(1, 4)))
def test_rational_theta_always_degenerate(theta):
    result = nondegeneracy_check(theta)
    assert not result.nondegenerate
    assert any(result.witness)
    assert satisfies_integrality(theta, result.witness)
    rng = random.Random(0)
    for _ in range(100):
        y = [rng.randint(-50, 50) for _ in range(theta.n)]
        assert pairing(result.witness, theta, y).is_zero


@settings(max_examples=40, deadline=None)
@given(strategies.phase_matrices(n=st.integers(1, 3), entries=strategies.rational_phases(4)))
def test_witness_is_minimal(theta):
    result = nondegeneracy_check(theta)
    norm = max(map(abs, result.witness))
    smaller = brute_witnesses(theta, norm - 1) if norm > 1 else []
    assert smaller == []


@settings(max_examples=40, deadline=None)
@given(strategies.phase_matrices(n=st.integers(2, 3), entries=strategies.phases(6)))
def test_results_agree_with_brute_force_on_small_boxes(theta):
    result = nondegeneracy_check(theta)
    if result.nondegenerate:
        assert brute_witnesses(theta, 2) == []
    else:
        assert satisfies_integrality(theta, result.witness)
