"""Exact linear algebra over the Gaussian rationals.

Row reduction, solving, kernels, an incremental row space with
combination tracking, and a pivoted semidefinite reduction for hermitian
matrices.  Matrices are plain lists of lists of Scalar.  Sizes here are
tens of rows, so clarity wins over asymptotics.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .scalars import Scalar

_ZERO = Scalar(0)
_ONE = Scalar(1)


def _rref(rows):
    """Reduced row echelon form in place; returns list of pivot columns."""
    if not rows:
        return []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, len(rows)):
            if rows[i][c]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = _ONE / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return pivots


def solve_linear(rows, rhs):
    """One exact solution x of (rows) x = rhs, or None if inconsistent."""
    if not rows:
        return [] if all(not b for b in rhs) else None
    ncols = len(rows[0])
    aug = [list(row) + [b] for row, b in zip(rows, rhs)]
    pivots = _rref(aug)
    if ncols in pivots:
        return None
    x = [_ZERO] * ncols
    r = 0
    for c in pivots:
        x[c] = aug[r][ncols]
        r += 1
    return x


def nullspace(rows):
    """Basis of the exact kernel of the matrix given as a list of rows."""
    if not rows:
        return []
    ncols = len(rows[0])
    work = [list(row) for row in rows]
    pivots = _rref(work)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = [_ZERO] * ncols
        vec[free] = _ONE
        for r, c in enumerate(pivots):
            vec[c] = -work[r][free]
        basis.append(vec)
    return basis


class RowSpace:
    """Incremental exact row space with combination tracking.

    Each added generator vector is reduced against the stored echelon
    rows.  represent(v) returns coefficients over the added generators
    whenever v lies in their span, else None.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows = []        # echelon rows
        self.pivot_cols = []
        self.combos = []      # combos[k][j]: row k as combination of gen j
        self.ngens = 0

    def _reduce(self, vec):
        vec = list(vec)
        combo = [_ZERO] * len(self.rows)
        for k, (row, pc) in enumerate(zip(self.rows, self.pivot_cols)):
            f = vec[pc]
            if f:
                vec = [a - f * b for a, b in zip(vec, row)]
                combo[k] = f
        return vec, combo

    def add(self, vec) -> bool:
        """Add a generator; returns True if it enlarged the span."""
        red, combo = self._reduce(vec)
        gen_combo = [_ZERO] * (self.ngens + 1)
        gen_combo[self.ngens] = _ONE
        for k, f in enumerate(combo):
            if f:
                old = self.combos[k]
                for j, v in enumerate(old):
                    if v:
                        gen_combo[j] = gen_combo[j] - f * v
        self.ngens += 1
        for c in range(self.ncols):
            if red[c]:
                inv = _ONE / red[c]
                self.rows.append([v * inv for v in red])
                self.pivot_cols.append(c)
                self.combos.append([v * inv for v in gen_combo])
                return True
        return False

    def represent(self, vec):
        """Coefficients (length ngens) with sum(c_j gen_j) = vec, or None."""
        red, combo = self._reduce(vec)
        if any(red):
            return None
        out = [_ZERO] * self.ngens
        for k, f in enumerate(combo):
            if f:
                for j, v in enumerate(self.combos[k]):
                    if v:
                        out[j] = out[j] + f * v
        return out


@dataclass
class PsdReport:
    psd: bool
    rank: int
    pivots: list = field(default_factory=list)
    kernel: list = field(default_factory=list)
    witness: list | None = None
    failure_index: int | None = None

    def __bool__(self):
        return self.psd


def graded_hermitian_reduce(G, grades=None) -> PsdReport:
    """Pivoted exact reduction of a hermitian matrix.

    Pivots are chosen stage by stage: within stage g only indices i with
    grades[i] <= g are eligible, and among them the largest positive
    diagonal entry is taken.  Any positive diagonal is a valid
    semidefiniteness-preserving pivot, so the verdict is exact: the
    matrix is PSD iff the reduction never meets a negative diagonal
    entry or a zero diagonal with a nonzero row.  For a PSD matrix the
    zero-diagonal columns of the accumulated transform span the kernel.

    The staging makes the pivot set nested along grades, which downstream
    code uses to build nested orthonormal bases.
    """
    n = len(G)
    if grades is None:
        grades = [0] * n
    work = [[G[i][j] for j in range(n)] for i in range(n)]
    # columns of U express current coordinates in terms of the originals
    U = [[_ONE if i == j else _ZERO for j in range(n)] for i in range(n)]
    state = ["open"] * n
    pivots = []

    def eliminate(p):
        d = work[p][p]
        for j in range(n):
            if j == p or state[j] != "open":
                continue
            f = work[p][j] / d
            if not f:
                continue
            for i in range(n):
                U[i][j] = U[i][j] - f * U[i][p]
            fc = f.conjugate()
            for i in range(n):
                work[i][j] = work[i][j] - f * work[i][p]
            for i in range(n):
                work[j][i] = work[j][i] - fc * work[p][i]

    max_grade = max(grades) if n else 0
    for stage in range(max_grade + 1):
        while True:
            best = None
            for i in range(n):
                if state[i] != "open" or grades[i] > stage:
                    continue
                d = work[i][i]
                if not d.is_real():
                    # hermitian matrices have real diagonals; treat as corrupt
                    raise ValueError("matrix is not hermitian")
                if d.re < 0:
                    return PsdReport(False, len(pivots), pivots, [],
                                     [row[i] for row in U], i)
                if d.re > 0 and (best is None or d.re > work[best][best].re):
                    best = i
            if best is None:
                break
            pivots.append(best)
            eliminate(best)
            state[best] = "pivot"
        # zero-diagonal entries of this stage must have fully zero rows
        for i in range(n):
            if state[i] != "open" or grades[i] > stage:
                continue
            bad = None
            for j in range(n):
                if state[j] == "open" and j != i and work[i][j]:
                    bad = j
                    break
            if bad is not None:
                z = work[i][bad]
                witness = [U[r][i] - z.conjugate() * U[r][bad]
                           for r in range(n)]
                return PsdReport(False, len(pivots), pivots, [],
                                 witness, i)
            state[i] = "null"
    kernel = [[U[r][i] for r in range(n)]
              for i in range(n) if state[i] == "null"]
    return PsdReport(True, len(pivots), pivots, kernel, None, None)


def hermitian_quadratic_form(G, x):
    """x* G x as an exact Scalar."""
    n = len(G)
    total = Scalar(0)
    for i in range(n):
        xi = x[i]
        if not xi:
            continue
        row = G[i]
        acc = Scalar(0)
        for j in range(n):
            if x[j]:
                acc = acc + row[j] * x[j]
        total = total + xi.conjugate() * acc
    return total
