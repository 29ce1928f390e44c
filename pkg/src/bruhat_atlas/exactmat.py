"""
Exact rational dense linear algebra.

Everything here works over :class:`fractions.Fraction`; there is no floating
point mode. Matrices are immutable (:class:`QMatrix`), ranks come from a
fraction-free (Bareiss) elimination on integer-scaled rows, and the double
coset extractors read permutations off northwest / southwest rank tables.
"""

from __future__ import annotations

import random
from fractions import Fraction
from functools import reduce
from math import lcm
from typing import Iterable, Sequence

__all__ = [
    "QMatrix", "SingularMatrixError", "MinorError", "RankTable",
    "parse_rational", "format_rational",
    "rank", "det", "nw_rank_table", "sw_rank_table",
    "coset_perm_bminus_b", "coset_perm_b_b",
    "lu_unipotent", "ul_unipotent", "lu_doolittle", "leading_minors", "trailing_minors",
    "column_span", "dim", "subspace_sum", "subspace_intersection",
    "image", "restricted_quotient_rank",
    "random_matrix", "random_invertible", "random_unit_lower",
    "random_unit_upper", "random_invertible_upper",
]


class SingularMatrixError(ValueError):
    pass


class MinorError(ValueError):
    """A unipotent factorization was requested but a principal minor is not 1."""

    def __init__(self, kind: str, index: int, value: Fraction):
        self.kind = kind
        self.index = index
        self.value = value
        super().__init__(f"{kind} principal minor of order {index} is {value}, expected 1")


def parse_rational(s) -> Fraction:
    if isinstance(s, Fraction):
        return s
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, str):
        return Fraction(s.strip())
    raise TypeError(f"cannot read a rational from {s!r}")


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class QMatrix:
    """Immutable dense matrix of rationals, stored row-major."""

    __slots__ = ("_rows", "nrows", "ncols", "_hash")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        data = tuple(tuple(parse_rational(x) for x in row) for row in rows)
        if data:
            width = len(data[0])
            if any(len(r) != width for r in data):
                raise ValueError("ragged rows")
            if ncols is not None and ncols != width:
                raise ValueError("column count mismatch")
        else:
            width = ncols or 0
        self._rows = data
        self.nrows = len(data)
        self.ncols = width
        self._hash = None

    # construction helpers

    @classmethod
    def zeros(cls, nrows: int, ncols: int | None = None) -> QMatrix:
        ncols = nrows if ncols is None else ncols
        return cls([[0] * ncols for _ in range(nrows)], ncols=ncols)

    @classmethod
    def identity(cls, n: int) -> QMatrix:
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], ncols=n)

    @classmethod
    def from_ones(cls, nrows: int, ncols: int, cells: Iterable[tuple[int, int]]) -> QMatrix:
        """0/1 matrix with ones at the given 1-indexed (row, column) cells."""
        rows = [[0] * ncols for _ in range(nrows)]
        for i, j in cells:
            rows[i - 1][j - 1] = 1
        return cls(rows, ncols=ncols)

    @classmethod
    def block(cls, blocks: Sequence[Sequence[QMatrix]]) -> QMatrix:
        rows = []
        for brow in blocks:
            height = brow[0].nrows
            if any(b.nrows != height for b in brow):
                raise ValueError("block heights disagree")
            for k in range(height):
                rows.append([x for b in brow for x in b._rows[k]])
        return cls(rows)

    @classmethod
    def from_json(cls, data) -> QMatrix:
        return cls(data)

    def to_json(self) -> list[list[str]]:
        return [[format_rational(x) for x in row] for row in self._rows]

    # basic protocol

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @property
    def rows(self) -> tuple[tuple[Fraction, ...], ...]:
        return self._rows

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        """0-indexed entry access."""
        i, j = ij
        return self._rows[i][j]

    def entry(self, i: int, j: int) -> Fraction:
        """1-indexed entry access, matching the (row, column) cell convention."""
        return self._rows[i - 1][j - 1]

    def __eq__(self, other) -> bool:
        return isinstance(other, QMatrix) and self.shape == other.shape and self._rows == other._rows

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.shape, self._rows))
        return self._hash

    def __repr__(self) -> str:
        body = "; ".join(" ".join(format_rational(x) for x in r) for r in self._rows)
        return f"QMatrix([{body}])"

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    # arithmetic

    def __add__(self, other: QMatrix) -> QMatrix:
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return QMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)], self.ncols)

    def __sub__(self, other: QMatrix) -> QMatrix:
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return QMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)], self.ncols)

    def __neg__(self) -> QMatrix:
        return QMatrix([[-a for a in r] for r in self._rows], self.ncols)

    def scale(self, c) -> QMatrix:
        c = parse_rational(c)
        return QMatrix([[c * a for a in r] for r in self._rows], self.ncols)

    def __matmul__(self, other: QMatrix) -> QMatrix:
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        zero = Fraction(0)
        out = []
        for r in self._rows:
            acc = [zero] * other.ncols
            for a, brow in zip(r, other._rows):
                if a:
                    for j, b in enumerate(brow):
                        if b:
                            acc[j] += a * b
            out.append(tuple(acc))
        return QMatrix._trusted(tuple(out), other.ncols)

    @classmethod
    def _trusted(cls, data: tuple, ncols: int) -> QMatrix:
        """Wrap rows that are already tuples of Fractions."""
        M = object.__new__(cls)
        M._rows = data
        M.nrows = len(data)
        M.ncols = ncols
        M._hash = None
        return M

    def transpose(self) -> QMatrix:
        return QMatrix(zip(*self._rows), self.nrows) if self.nrows else QMatrix.zeros(self.ncols, 0)

    @property
    def T(self) -> QMatrix:
        return self.transpose()

    def submatrix(self, rows: Iterable[int], cols: Iterable[int]) -> QMatrix:
        """Submatrix on 1-indexed row and column lists (either may be empty)."""
        rows, cols = list(rows), list(cols)
        return QMatrix([[self._rows[i - 1][j - 1] for j in cols] for i in rows], len(cols))

    def nw(self, i: int, j: int) -> QMatrix:
        return self.submatrix(range(1, i + 1), range(1, j + 1))

    def columns(self, cols: Iterable[int]) -> QMatrix:
        return self.submatrix(range(1, self.nrows + 1), cols)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._rows for x in r)

    def is_upper_triangular(self, strict: bool = False) -> bool:
        return all(
            x == 0 for i, r in enumerate(self._rows) for j, x in enumerate(r) if j < i or (strict and i == j)
        )

    def is_lower_triangular(self, strict: bool = False) -> bool:
        return self.transpose().is_upper_triangular(strict)

    def is_unit_lower(self) -> bool:
        return self.is_lower_triangular() and all(self._rows[i][i] == 1 for i in range(self.nrows))

    def is_unit_upper(self) -> bool:
        return self.is_upper_triangular() and all(self._rows[i][i] == 1 for i in range(self.nrows))

    def support(self, off_diagonal: bool = True) -> frozenset[tuple[int, int]]:
        """1-indexed cells holding nonzero entries."""
        return frozenset(
            (i + 1, j + 1)
            for i, r in enumerate(self._rows)
            for j, x in enumerate(r)
            if x != 0 and not (off_diagonal and i == j)
        )

    def inverse(self) -> QMatrix:
        if not self.is_square():
            raise ValueError("inverse of a non-square matrix")
        n = self.nrows
        aug = [list(r) + [Fraction(int(i == k)) for k in range(n)] for i, r in enumerate(self._rows)]
        for c in range(n):
            p = next((r for r in range(c, n) if aug[r][c] != 0), None)
            if p is None:
                raise SingularMatrixError("matrix is singular")
            aug[c], aug[p] = aug[p], aug[c]
            piv = aug[c][c]
            aug[c] = [x / piv for x in aug[c]]
            for r in range(n):
                if r != c and aug[r][c] != 0:
                    f = aug[r][c]
                    aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
        return QMatrix([r[n:] for r in aug], n)

    def conjugate_w0(self) -> QMatrix:
        """w0 M w0: reverse both the row and the column order."""
        return QMatrix([tuple(reversed(r)) for r in reversed(self._rows)], self.ncols)


def _integer_rows(M: QMatrix) -> list[list[int]]:
    # scaling a row by a nonzero constant leaves every rank statistic unchanged
    out = []
    for r in M.rows:
        d = reduce(lcm, (x.denominator for x in r), 1)
        out.append([int(x * d) for x in r])
    return out


def _bareiss_echelon(a: list[list[int]]) -> list[int]:
    """Fraction-free row echelon form in place; returns the pivot columns."""
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    pivots = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((k for k in range(r, nrows) if a[k][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        for k in range(r + 1, nrows):
            ak = a[k]
            f = ak[c]
            for t in range(c + 1, ncols):
                ak[t] = (piv * ak[t] - f * a[r][t]) // prev
            ak[c] = 0
        # entries of skipped columns in rows below r stay zero
        prev = piv
        pivots.append(c)
        r += 1
    return pivots


def rank(M: QMatrix) -> int:
    """Exact rank via Bareiss elimination; empty matrices have rank 0."""
    if M.nrows == 0 or M.ncols == 0:
        return 0
    return len(_bareiss_echelon(_integer_rows(M)))


def det(M: QMatrix) -> Fraction:
    if not M.is_square():
        raise ValueError("determinant of a non-square matrix")
    n = M.nrows
    if n == 0:
        return Fraction(1)
    scale = Fraction(1)
    a = []
    for r in M.rows:
        d = reduce(lcm, (x.denominator for x in r), 1)
        scale /= d
        a.append([int(x * d) for x in r])
    sign = 1
    prev = 1
    for c in range(n):
        p = next((k for k in range(c, n) if a[k][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            sign = -sign
        piv = a[c][c]
        for k in range(c + 1, n):
            f = a[k][c]
            for t in range(c + 1, n):
                a[k][t] = (piv * a[k][t] - f * a[c][t]) // prev
            a[k][c] = 0
        prev = piv
    return sign * scale * a[n - 1][n - 1]


class RankTable:
    """Ranks r(i, j) of the northwest i x j submatrices, with a zero border.

    ``table[i][j]`` is defined for 0 <= i, j <= m, and ``table[0][*]`` and
    ``table[*][0]`` are 0.
    """

    __slots__ = ("m", "table")

    def __init__(self, m: int, table: Sequence[Sequence[int]]):
        self.m = m
        self.table = tuple(tuple(r) for r in table)

    def __call__(self, i: int, j: int) -> int:
        return self.table[i][j]

    def __eq__(self, other) -> bool:
        return isinstance(other, RankTable) and self.table == other.table

    def __hash__(self) -> int:
        return hash(self.table)

    def __repr__(self) -> str:
        return f"RankTable({self.inner()})"

    def inner(self) -> list[list[int]]:
        """The m x m table without the zero border."""
        return [list(r[1:]) for r in self.table[1:]]

    def check(self) -> None:
        t = self.table
        m = self.m
        for i in range(m + 1):
            for j in range(m + 1):
                if t[i][j] > min(i, j):
                    raise AssertionError(f"r({i},{j}) exceeds min(i, j)")
                if i and t[i][j] - t[i - 1][j] not in (0, 1):
                    raise AssertionError(f"row step at ({i},{j})")
                if j and t[i][j] - t[i][j - 1] not in (0, 1):
                    raise AssertionError(f"column step at ({i},{j})")

    def leq(self, other: RankTable) -> bool:
        return all(a <= b for r, s in zip(self.table, other.table) for a, b in zip(r, s))

    def to_permutation(self) -> tuple[int, ...]:
        """One-line word w with w(i) = min{j : r(i,j) = r(i-1,j) + 1}."""
        t = self.table
        word = []
        for i in range(1, self.m + 1):
            j = next((j for j in range(1, self.m + 1) if t[i][j] == t[i - 1][j] + 1), None)
            if j is None:
                raise SingularMatrixError(f"row {i} adds no rank")
            word.append(j)
        return tuple(word)


def nw_rank_table(M: QMatrix) -> RankTable:
    """r(i, j) = rank of rows 1..i, columns 1..j, for every i, j."""
    if not M.is_square():
        raise ValueError("rank tables are defined for square matrices")
    m = M.nrows
    rows = _integer_rows(M)
    table = [[0] * (m + 1)]
    for i in range(1, m + 1):
        pivots = _bareiss_echelon([list(r) for r in rows[:i]])
        line = [0] * (m + 1)
        count = 0
        piv = set(pivots)
        for j in range(1, m + 1):
            if j - 1 in piv:
                count += 1
            line[j] = count
        table.append(line)
    return RankTable(m, table)


def sw_rank_table(M: QMatrix) -> RankTable:
    """q(i, j) = rank of the last i rows restricted to columns 1..j."""
    if not M.is_square():
        raise ValueError("rank tables are defined for square matrices")
    return nw_rank_table(QMatrix(reversed(M.rows), M.ncols))


def coset_perm_bminus_b(M: QMatrix) -> tuple[int, ...]:
    """The permutation w with M in B^- w B, as a one-line word."""
    table = nw_rank_table(M)
    if table(M.nrows, M.ncols) != M.nrows:
        raise SingularMatrixError("matrix is singular")
    return table.to_permutation()


def coset_perm_b_b(M: QMatrix) -> tuple[int, ...]:
    """The permutation w with M in B w B, as a one-line word.

    Row k of the reversed matrix is row m+1-k of M, so the word read off the
    southwest table is w reversed.
    """
    table = sw_rank_table(M)
    if table(M.nrows, M.ncols) != M.nrows:
        raise SingularMatrixError("matrix is singular")
    return tuple(reversed(table.to_permutation()))


def leading_minors(M: QMatrix) -> list[Fraction]:
    return [det(M.nw(k, k)) for k in range(1, M.nrows + 1)]


def trailing_minors(M: QMatrix) -> list[Fraction]:
    n = M.nrows
    return [det(M.submatrix(range(n - k + 1, n + 1), range(n - k + 1, n + 1))) for k in range(1, n + 1)]


def lu_doolittle(M: QMatrix) -> tuple[QMatrix, QMatrix]:
    """M = L U with L unit lower and U invertible upper triangular, no pivoting.

    Requires every leading principal minor to be nonzero.
    """
    if not M.is_square():
        raise ValueError("LU of a non-square matrix")
    n = M.nrows
    U = [list(r) for r in M.rows]
    L = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for k in range(n):
        if U[k][k] == 0:
            raise MinorError("leading", k + 1, Fraction(0))
        for i in range(k + 1, n):
            f = U[i][k] / U[k][k]
            if f:
                L[i][k] = f
                U[i] = [a - f * b for a, b in zip(U[i], U[k])]
    return QMatrix(L, n), QMatrix(U, n)


def lu_unipotent(M: QMatrix) -> tuple[QMatrix, QMatrix]:
    """Factor M = L U with L unit lower and U unit upper triangular.

    Exists (and is unique) exactly when every leading principal minor is 1;
    otherwise :class:`MinorError` names the first offending minor.
    """
    if not M.is_square():
        raise ValueError("LU of a non-square matrix")
    n = M.nrows
    for k, m in enumerate(leading_minors(M), start=1):
        if m != 1:
            raise MinorError("leading", k, m)
    U = [list(r) for r in M.rows]
    L = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for k in range(n):
        # pivots are ratios of consecutive minors, hence all 1
        for i in range(k + 1, n):
            f = U[i][k]
            if f:
                L[i][k] = f
                U[i] = [a - f * b for a, b in zip(U[i], U[k])]
    return QMatrix(L, n), QMatrix(U, n)


def ul_unipotent(M: QMatrix) -> tuple[QMatrix, QMatrix]:
    """Factor M = U L with U unit upper and L unit lower triangular.

    Conjugating by w0 swaps the two triangular shapes, so this is the LU
    factorization of w0 M w0 conjugated back.
    """
    if not M.is_square():
        raise ValueError("UL of a non-square matrix")
    try:
        L, U = lu_unipotent(M.conjugate_w0())
    except MinorError as exc:
        raise MinorError("trailing", exc.index, exc.value) from None
    return L.conjugate_w0(), U.conjugate_w0()


# subspaces are column spans; a basis is stored as an n x k matrix with k >= 0


def column_span(M: QMatrix) -> QMatrix:
    """A basis (as columns) of the column span of M."""
    n = M.nrows
    cols = [list(c) for c in zip(*M.rows)] if M.ncols else []
    if not cols:
        return QMatrix.zeros(n, 0)
    a = _integer_rows(QMatrix(cols, n))
    # row-reduce the transpose; its nonzero rows span the same space
    k = len(_bareiss_echelon(a))
    return QMatrix(a[:k], n).transpose() if k else QMatrix.zeros(n, 0)


def dim(U: QMatrix) -> int:
    return rank(U)


def subspace_sum(U: QMatrix, W: QMatrix) -> QMatrix:
    if U.nrows != W.nrows:
        raise ValueError("subspaces live in different ambient spaces")
    rows = [list(a) + list(b) for a, b in zip(U.rows, W.rows)]
    return column_span(QMatrix(rows, U.ncols + W.ncols))


def _nullspace(M: QMatrix) -> list[list[Fraction]]:
    """Basis of {x : M x = 0} by reduced row echelon form."""
    nrows, ncols = M.shape
    a = [list(r) for r in M.rows]
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((k for k in range(r, nrows) if a[k][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        a[r] = [x / piv for x in a[r]]
        for k in range(nrows):
            if k != r and a[k][c] != 0:
                f = a[k][c]
                a[k] = [x - f * y for x, y in zip(a[k], a[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in enumerate(pivots):
            v[pc] = -a[row][f]
        basis.append(v)
    return basis


def subspace_intersection(U: QMatrix, W: QMatrix) -> QMatrix:
    """Basis of span(U) ∩ span(W)."""
    if U.nrows != W.nrows:
        raise ValueError("subspaces live in different ambient spaces")
    n = U.nrows
    U = column_span(U)
    W = column_span(W)
    if U.ncols == 0 or W.ncols == 0:
        return QMatrix.zeros(n, 0)
    # U a - W b = 0  =>  U a lies in both
    stacked = QMatrix([list(a) + [-x for x in b] for a, b in zip(U.rows, W.rows)], U.ncols + W.ncols)
    vecs = []
    for v in _nullspace(stacked):
        coeff = QMatrix([[x] for x in v[: U.ncols]], 1)
        vecs.append([x for (x,) in (U @ coeff).rows])
    if not vecs:
        return QMatrix.zeros(n, 0)
    return column_span(QMatrix(vecs, n).transpose())


def image(X: QMatrix, U: QMatrix) -> QMatrix:
    """Basis of X·span(U)."""
    if X.ncols != U.nrows:
        raise ValueError("dimension mismatch")
    if U.ncols == 0:
        return QMatrix.zeros(X.nrows, 0)
    return column_span(X @ U)


def restricted_quotient_rank(X: QMatrix, U: QMatrix, W: QMatrix) -> int:
    """Rank of the composite U -> A^n -(X)-> A^n -> A^n / W."""
    if not X.is_square() or X.ncols != U.nrows or X.nrows != W.nrows:
        raise ValueError("dimension mismatch")
    return dim(subspace_sum(image(X, U), W)) - dim(W)


# seeded sampling: integer entries uniform in [-9, 9]

ENTRY_RANGE = (-9, 9)
MAX_RETRIES = 1000


def random_matrix(rng: random.Random, nrows: int, ncols: int | None = None, lo: int = -9, hi: int = 9) -> QMatrix:
    ncols = nrows if ncols is None else ncols
    return QMatrix([[rng.randint(lo, hi) for _ in range(ncols)] for _ in range(nrows)], ncols)


def random_invertible(rng: random.Random, n: int) -> QMatrix:
    for _ in range(MAX_RETRIES):
        M = random_matrix(rng, n)
        if det(M) != 0:
            return M
    raise RuntimeError("could not draw an invertible matrix")


def random_unit_lower(rng: random.Random, n: int, cells: Iterable[tuple[int, int]] | None = None) -> QMatrix:
    """Unit lower triangular; optionally only the given 1-indexed cells are filled."""
    allowed = set(cells) if cells is not None else {(i, j) for i in range(1, n + 1) for j in range(1, i)}
    return QMatrix(
        [[1 if i == j else (rng.randint(-9, 9) if (i, j) in allowed else 0) for j in range(1, n + 1)]
         for i in range(1, n + 1)],
        n,
    )


def random_unit_upper(rng: random.Random, n: int, cells: Iterable[tuple[int, int]] | None = None) -> QMatrix:
    allowed = set(cells) if cells is not None else {(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)}
    return QMatrix(
        [[1 if i == j else (rng.randint(-9, 9) if (i, j) in allowed else 0) for j in range(1, n + 1)]
         for i in range(1, n + 1)],
        n,
    )


def random_invertible_upper(rng: random.Random, n: int) -> QMatrix:
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if j < i:
                row.append(0)
            elif j == i:
                row.append(rng.choice([k for k in range(-9, 10) if k]))
            else:
                row.append(rng.randint(-9, 9))
        rows.append(row)
    return QMatrix(rows, n)
