"""
The Bruhat atlas: for each pi in S_n, an isomorphism between the open set
(pi N^- B/B) x Mat_n and the Bruhat cell B v(pi) B / B of GL_2n / B.

Matrix convention: the permutation pi acts through its matrix P with a 1 at
(i, pi(i)), the same matrix used for the point stratum (pi-flag, 0). Then

    P A P^-1 has (a, b) entry A[pi(a), pi(b)],
    P^-1 A P has (a, b) entry A[pi^-1(a), pi^-1(b)].

Factors of h in pi N^- pi^-1 are written with capitals (B_plus, C_minus, ...);
their conjugates back into N^- are b_plus = P^-1 B_plus P and so on, so
that g = b_minus b_plus = c_plus c_minus for g = P^-1 h P.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exactmat import (
    MinorError, QMatrix, coset_perm_b_b, coset_perm_bminus_b, leading_minors,
    lu_doolittle, lu_unipotent, trailing_minors, ul_unipotent,
)
from .permcomb import Permutation
from .stratmap import FlagPoint, point_stratum_perm, v_of_point, w0_matrix

__all__ = [
    "SupportPattern", "ChartCoords", "PatternError", "ChartError",
    "patterns", "conjugation_pattern", "phi", "phi_factors", "phi_inv",
    "chart_membership", "charts_containing", "normalize_flag",
    "chart_inverse", "chart_forward", "coordinate_matrix",
    "cell_certificate", "stratified_check", "cell_representative",
]


class PatternError(AssertionError):
    """A factor landed outside its support pattern: a convention bug, not bad input."""


class ChartError(ValueError):
    pass


@dataclass(frozen=True)
class SupportPattern:
    n: int
    cells: frozenset

    def __contains__(self, cell) -> bool:
        return cell in self.cells

    def __len__(self) -> int:
        return len(self.cells)

    def is_closed(self) -> bool:
        """(i, j), (j, k) in the pattern forces (i, k) in the pattern."""
        return all(
            (i, k) in self.cells for i, j in self.cells for j2, k in self.cells if j == j2 and i != k
        )

    def admits(self, M: QMatrix) -> bool:
        """M is unipotent with off-diagonal support inside the pattern."""
        return all(M.entry(i, i) == 1 for i in range(1, self.n + 1)) and M.support() <= self.cells


def conjugation_pattern(pi: Permutation) -> frozenset[tuple[int, int]]:
    """Off-diagonal cells available to P N^- P^-1."""
    n = pi.m
    return frozenset((a, b) for a in range(1, n + 1) for b in range(1, n + 1) if pi(a) > pi(b))


def patterns(pi: Permutation) -> tuple[SupportPattern, SupportPattern]:
    """(E+, E-) = (pi N^- pi^-1 ∩ N, pi N^- pi^-1 ∩ N^-) as cell sets."""
    cells = conjugation_pattern(pi)
    return (
        SupportPattern(pi.m, frozenset(c for c in cells if c[0] < c[1])),
        SupportPattern(pi.m, frozenset(c for c in cells if c[0] > c[1])),
    )


def _check(pattern: SupportPattern, M: QMatrix, what: str) -> None:
    if not pattern.admits(M):
        raise PatternError(f"{what} has support {sorted(M.support())} outside {sorted(pattern.cells)}")


@dataclass(frozen=True)
class Factors:
    B_minus: QMatrix
    B_plus: QMatrix
    C_plus: QMatrix
    C_minus: QMatrix


def phi_factors(pi: Permutation, h: QMatrix) -> Factors:
    """Both factorizations h = B_minus B_plus = C_plus C_minus of h in pi N^- pi^-1."""
    Ep, Em = patterns(pi)
    whole = SupportPattern(pi.m, Ep.cells | Em.cells)
    if not whole.admits(h):
        raise PatternError(f"h is not in pi N^- pi^-1 for pi = {pi}")
    for kind, minors in (("leading", leading_minors(h)), ("trailing", trailing_minors(h))):
        for k, m in enumerate(minors, start=1):
            if m != 1:
                raise PatternError(f"{kind} minor {k} of h is {m}")
    B_minus, B_plus = lu_unipotent(h)
    C_plus, C_minus = ul_unipotent(h)
    _check(Em, B_minus, "b_minus")
    _check(Ep, B_plus, "b_plus")
    _check(Ep, C_plus, "c_plus")
    _check(Em, C_minus, "c_minus")
    return Factors(B_minus, B_plus, C_plus, C_minus)


def phi(pi: Permutation, h: QMatrix) -> tuple[QMatrix, QMatrix]:
    f = phi_factors(pi, h)
    return f.B_plus, f.C_minus


def _phi_inv_factors(pi: Permutation, b_plus: QMatrix, c_minus: QMatrix) -> Factors:
    Ep, Em = patterns(pi)
    _check(Ep, b_plus, "b_plus")
    _check(Em, c_minus, "c_minus")
    # c_plus^-1 b_minus = c_minus b_plus^-1 is an upper-times-lower product
    M = c_minus @ b_plus.inverse()
    try:
        U, L = ul_unipotent(M)
    except MinorError as exc:
        raise PatternError(f"UL factorization failed inside the support patterns: {exc}") from None
    c_plus = U.inverse()
    b_minus = L
    _check(Ep, c_plus, "c_plus")
    _check(Em, b_minus, "b_minus")
    return Factors(b_minus, b_plus, c_plus, c_minus)


def phi_inv(pi: Permutation, b_plus: QMatrix, c_minus: QMatrix) -> QMatrix:
    f = _phi_inv_factors(pi, b_plus, c_minus)
    h = f.B_minus @ f.B_plus
    if phi(pi, h) != (b_plus, c_minus):
        raise PatternError("phi(phi_inv(b+, c-)) does not return (b+, c-)")
    return h


def chart_membership(pi: Permutation, p: FlagPoint) -> bool:
    """gB/B lies in pi N^- B/B iff every leading principal minor of P^-1 g is nonzero."""
    if pi.m != p.n:
        raise ValueError("size mismatch")
    return all(m != 0 for m in leading_minors(pi.matrix().transpose() @ p.g))


def charts_containing(p: FlagPoint) -> list[Permutation]:
    from .permcomb import all_permutations

    return [pi for pi in all_permutations(p.n) if chart_membership(pi, p)]


def normalize_flag(pi: Permutation, p: FlagPoint) -> QMatrix:
    """The unique g in N^- with P g B = p.g B."""
    if not chart_membership(pi, p):
        raise ChartError(f"the flag of this point is not in the chart of {pi}")
    L, _ = lu_doolittle(pi.matrix().transpose() @ p.g)
    return L


@dataclass(frozen=True)
class ChartCoords:
    """Coordinates (Z, a', d') on the cell, representing [[Z, P a'], [w0 d' P^-1, 0]].

    a' is unit lower triangular inside pi^-1 N pi, d' unit lower triangular
    inside pi^-1 N^- pi.
    """

    pi: Permutation
    Z: QMatrix
    a_prime: QMatrix
    d_prime: QMatrix

    def __post_init__(self):
        n = self.pi.m
        if any(M.shape != (n, n) for M in (self.Z, self.a_prime, self.d_prime)):
            raise ValueError("coordinate matrices must be n x n")
        a_cells, d_cells = coordinate_patterns(self.pi)
        _check(a_cells, self.a_prime, "a'")
        _check(d_cells, self.d_prime, "d'")

    def to_json(self) -> dict:
        return {
            "pi": self.pi.to_json(),
            "Z": self.Z.to_json(),
            "a_prime": self.a_prime.to_json(),
            "d_prime": self.d_prime.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict) -> ChartCoords:
        pi = Permutation(tuple(data["pi"]))
        n = pi.m
        return cls(pi, QMatrix(data["Z"], n), QMatrix(data["a_prime"], n), QMatrix(data["d_prime"], n))


def coordinate_patterns(pi: Permutation) -> tuple[SupportPattern, SupportPattern]:
    """Cells for a' (N^- ∩ pi^-1 N pi) and d' (N^- ∩ pi^-1 N^- pi)."""
    n = pi.m
    inv = pi.inverse()
    lower = [(i, j) for i in range(1, n + 1) for j in range(1, i)]
    return (
        SupportPattern(n, frozenset((i, j) for i, j in lower if inv(i) < inv(j))),
        SupportPattern(n, frozenset((i, j) for i, j in lower if inv(i) > inv(j))),
    )


def coordinate_matrix(coords: ChartCoords) -> QMatrix:
    n = coords.pi.m
    P = coords.pi.matrix()
    return QMatrix.block([
        [coords.Z, P @ coords.a_prime],
        [w0_matrix(n) @ coords.d_prime @ P.transpose(), QMatrix.zeros(n)],
    ])


def chart_inverse(pi: Permutation, p: FlagPoint) -> ChartCoords:
    """c_pi^{-1}: the cell coordinates of a point in the chart of pi."""
    P = pi.matrix()
    Pinv = P.transpose()
    g = normalize_flag(pi, p)
    h = P @ g @ Pinv
    f = phi_factors(pi, h)
    Z = f.B_minus.inverse() @ p.X @ f.C_plus
    a_prime = Pinv @ f.B_plus @ P
    d_prime = (Pinv @ f.C_minus @ P).inverse()
    return ChartCoords(pi, Z, a_prime, d_prime)


def chart_forward(coords: ChartCoords) -> FlagPoint:
    """c_pi: the point of (pi N^- B/B) x Mat_n with the given cell coordinates."""
    pi = coords.pi
    P = pi.matrix()
    Pinv = P.transpose()
    B_plus = P @ coords.a_prime @ Pinv
    C_minus = P @ coords.d_prime.inverse() @ Pinv
    f = _phi_inv_factors(pi, B_plus, C_minus)
    h = f.B_minus @ f.B_plus
    g = Pinv @ h @ P
    X = f.B_minus @ coords.Z @ f.C_plus.inverse()
    return FlagPoint(pi.m, P @ g, X)


def cell_certificate(coords: ChartCoords) -> Permutation:
    """The B x B double coset of the coordinate matrix; equals v(pi) on the cell."""
    return Permutation(coset_perm_b_b(coordinate_matrix(coords)))


def stratified_check(pi: Permutation, p: FlagPoint) -> tuple[Permutation, Permutation]:
    """(v(p), B^- x B type of the chart coordinates); the two must coincide."""
    coords = chart_inverse(pi, p)
    direct = v_of_point(p)
    via_chart = Permutation(coset_perm_bminus_b(coordinate_matrix(coords)))
    if direct != via_chart:
        raise AssertionError(f"chart {pi}: v(p) = {direct} but the chart image has type {via_chart}")
    return direct, via_chart


def cell_representative(M: QMatrix) -> QMatrix:
    """The canonical representative of the coset M B: reduce columns left to right.

    Each column ends with a 1 at its pivot (lowest surviving nonzero row),
    zeros below it and zeros at the pivot rows of earlier columns.
    """
    n = M.nrows
    cols = [list(c) for c in zip(*M.rows)]
    pivots: list[int] = []
    for c in range(n):
        col = cols[c]
        for b, pr in enumerate(pivots):
            f = col[pr]
            if f:
                col = [x - f * y for x, y in zip(col, cols[b])]
        pr = max((r for r in range(n) if col[r] != 0 and r not in pivots), default=None)
        if pr is None:
            raise ChartError("matrix is singular")
        piv = col[pr]
        col = [x / piv for x in col]
        cols[c] = col
        pivots.append(pr)
    return QMatrix(cols, n).transpose()


def coords_from_cell_matrix(pi: Permutation, M: QMatrix) -> ChartCoords:
    """Read (Z, a', d') from any matrix of B v(pi) B by taking the canonical coset representative."""
    n = pi.m
    if Permutation(coset_perm_b_b(M)) != point_stratum_perm(pi):
        raise ChartError(f"matrix is not in the Bruhat cell of v({pi})")
    R = cell_representative(M)
    rows = range(1, n + 1)
    low = range(n + 1, 2 * n + 1)
    if not R.submatrix(low, low).is_zero():
        raise ChartError("canonical representative has a nonzero southeast block")
    P = pi.matrix()
    Z = R.submatrix(rows, rows)
    a_prime = P.transpose() @ R.submatrix(rows, low)
    d_prime = w0_matrix(n) @ R.submatrix(low, rows) @ P
    return ChartCoords(pi, Z, a_prime, d_prime)
