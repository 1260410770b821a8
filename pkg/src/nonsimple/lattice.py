"""Integer matrices, Smith normal form and the nondegeneracy test for skew phase matrices."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .phase import PhaseMatrix, phase_sum

# Witness minimisation is skipped beyond this many candidate vectors.
MAX_WITNESS_CANDIDATES = 10**6


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0 or len(self.entries) != self.rows * self.cols:
            raise ValueError("entries length must equal rows*cols")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = [list(map(int, r)) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged integer matrix")
        return cls(len(rows), cols, tuple(x for r in rows for x in r))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], n)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def to_rows(self) -> list[list[int]]:
        return [list(self.entries[i * self.cols:(i + 1) * self.cols]) for i in range(self.rows)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix.from_rows([[self[i, j] for i in range(self.rows)] for j in range(self.cols)],
                                   self.rows)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        return IntMatrix.from_rows(
            [[sum(self[i, k] * other[k, j] for k in range(self.cols)) for j in range(other.cols)]
             for i in range(self.rows)],
            other.cols,
        )

    def det(self) -> int:
        """Bareiss fraction-free determinant."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        a = self.to_rows()
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
                if swap is None:
                    return 0
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1] if n else 1


@dataclass(frozen=True)
class SmithDecomposition:
    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i, i] for i in range(min(self.D.rows, self.D.cols))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def smith_normal_form(A: IntMatrix) -> SmithDecomposition:
    """Return unimodular U, V with U*A*V = D diagonal, d1 | d2 | ..., d_i >= 0.

    Pivots on the smallest nonzero absolute value of the remaining block.
    """
    r, c = A.rows, A.cols
    a = A.to_rows()
    u = IntMatrix.identity(r).to_rows()
    v = IntMatrix.identity(c).to_rows()

    def swap_rows(i: int, j: int) -> None:
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i: int, j: int) -> None:
        for m in (a, v):
            for row in m:
                row[i], row[j] = row[j], row[i]

    def add_row(dst: int, src: int, q: int) -> None:
        # row_dst += q * row_src
        for m in (a, u):
            m[dst] = [x + q * y for x, y in zip(m[dst], m[src])]

    def add_col(dst: int, src: int, q: int) -> None:
        for m in (a, v):
            for row in m:
                row[dst] += q * row[src]

    for t in range(min(r, c)):
        while True:
            nonzero = [(abs(a[i][j]), i, j) for i in range(t, r) for j in range(t, c) if a[i][j]]
            if not nonzero:
                return _finish(a, u, v)
            _, pi, pj = min(nonzero)
            swap_rows(t, pi)
            swap_cols(t, pj)
            p = a[t][t]
            dirty = False
            for i in range(t + 1, r):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    dirty |= a[i][t] != 0
            for j in range(t + 1, c):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    dirty |= a[t][j] != 0
            if dirty:
                continue
            bad = next((i for i in range(t + 1, r) for j in range(t + 1, c) if a[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return _finish(a, u, v)


def _finish(a, u, v) -> SmithDecomposition:
    cols = len(a[0]) if a else len(v)
    return SmithDecomposition(
        IntMatrix.from_rows(u, len(a)), IntMatrix.from_rows(a, cols), IntMatrix.from_rows(v, cols)
    )


def integer_kernel(A: IntMatrix) -> list[list[int]]:
    """A Z-basis of {x in Z^cols : A x = 0} as a list of vectors."""
    snf = smith_normal_form(A)
    k = snf.rank
    V = snf.V.to_rows()
    return [[V[i][j] for i in range(A.cols)] for j in range(k, A.cols)]


@dataclass(frozen=True)
class Nondegeneracy:
    nondegenerate: bool
    witness: tuple[int, ...] | None = None


def _lcm_all(values) -> int:
    out = 1
    for v in values:
        out = math.lcm(out, v)
    return out


def integrality_constraints(theta: PhaseMatrix) -> tuple[list[list[int]], list[list[int]], int]:
    """Split the condition theta^T x in Z^n into integer data.

    Returns ``(S, C, q)``: x is a witness iff ``S x = 0`` (exactly) and
    ``C x = 0 (mod q)``.  Rows of S come from the symbol coefficients, one
    row per (symbol, column); C is the transposed rational part scaled by q.
    """
    n = theta.n
    S: list[list[int]] = []
    for name in theta.symbol_names:
        for k in range(n):
            coeffs = [theta[i, k].coefficient(name) for i in range(n)]
            scale = _lcm_all(c.denominator for c in coeffs)
            row = [int(c * scale) for c in coeffs]
            if any(row):
                S.append(row)
    q = _lcm_all(theta[i, k].rational.denominator for i in range(n) for k in range(n))
    C = [[int(theta[i, k].rational * q) for i in range(n)] for k in range(n)]
    return S, C, q


def satisfies_integrality(theta: PhaseMatrix, x: Sequence[int]) -> bool:
    """Exact check of theta^T x in Z^n using phase arithmetic."""
    if len(x) != theta.n:
        return False
    return all(
        phase_sum(theta[i, k] * int(x[i]) for i in range(theta.n)).is_zero for k in range(theta.n)
    )


def _witness_key(x: tuple[int, ...]) -> tuple:
    # smallest sup-norm, then smallest 1-norm, then mass on early coordinates
    return (max(map(abs, x)), sum(map(abs, x)), tuple(-v for v in x))


def _sign_normalise(x: tuple[int, ...]) -> tuple[int, ...]:
    first = next(v for v in x if v)
    return x if first > 0 else tuple(-v for v in x)


def _minimise_witness(S, C, q: int, n: int, start: tuple[int, ...]) -> tuple[int, ...]:
    bound = max(map(abs, start))
    coeffs = [abs(v) for row in S + C for v in row] + [q]
    if n * max(coeffs) * bound >= 2**62:
        return start
    S_arr = np.array(S, dtype=np.int64).reshape(len(S), n)
    C_arr = np.array(C, dtype=np.int64).reshape(len(C), n)
    # cubes of doubling radius; the key orders by sup-norm first, so the best
    # hit inside a cube is the global minimum
    r = 1
    while True:
        r = min(r, bound)
        if (2 * r + 1) ** n > MAX_WITNESS_CANDIDATES:
            return start
        axis = np.arange(-r, r + 1, dtype=np.int64)
        grid = np.stack(np.meshgrid(*([axis] * n), indexing="ij"), axis=-1).reshape(-1, n)
        ok = np.all((grid @ S_arr.T) == 0, axis=1) & np.all((grid @ C_arr.T) % q == 0, axis=1)
        ok &= np.any(grid != 0, axis=1)
        hits = grid[ok]
        if len(hits):
            return min((_sign_normalise(tuple(int(v) for v in h)) for h in hits), key=_witness_key)
        if r == bound:
            break
        r *= 2
    return start


def nondegeneracy_check(theta: PhaseMatrix, minimise: bool = True) -> Nondegeneracy:
    """Decide whether the only x in Z^n with theta^T x in Z^n is x = 0.

    Symbols follow the genericity convention, so a witness must lie in the
    integer kernel of every symbol coefficient matrix and satisfy the
    rational congruences modulo the common denominator.
    """
    n = theta.n
    S, C, q = integrality_constraints(theta)
    kernel = integer_kernel(IntMatrix.from_rows(S, n)) if S else IntMatrix.identity(n).to_rows()
    if not kernel:
        return Nondegeneracy(True)
    # x = K y with K the kernel basis (columns); solve (C K) y = 0 mod q.
    K = IntMatrix.from_rows([[kernel[j][i] for j in range(len(kernel))] for i in range(n)])
    CK = IntMatrix.from_rows(C, n) @ K
    snf = smith_normal_form(CK)
    diag = snf.diagonal
    mult = [q // math.gcd(diag[i], q) if i < len(diag) else 1 for i in range(K.cols)]
    y = [snf.V[i, 0] * mult[0] for i in range(K.cols)]
    x = tuple(sum(K[i, j] * y[j] for j in range(K.cols)) for i in range(n))
    x = _sign_normalise(x)
    if minimise:
        x = _minimise_witness(S, C, q, n, x)
    return Nondegeneracy(False, x)


def pairing(x: Sequence[int], theta: PhaseMatrix, y: Sequence[int]):
    """The phase <x, theta y>."""
    n = theta.n
    return phase_sum(theta[i, k] * (int(x[i]) * int(y[k])) for i in range(n) for k in range(n))


__all__ = [
    "IntMatrix",
    "SmithDecomposition",
    "Nondegeneracy",
    "smith_normal_form",
    "integer_kernel",
    "nondegeneracy_check",
    "satisfies_integrality",
    "pairing",
]
