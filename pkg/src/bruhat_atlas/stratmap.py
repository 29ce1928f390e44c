"""
The invariant v : Fl(n) x Mat_n -> S_2n and the stratification it induces.

A point is a pair (g, X) with g invertible; the flag is F^i = span of the
first i columns of g. The point is sent to the B^- x B double coset of the
2n x 2n matrix [[X, g], [w0 g^-1, 0]].
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

from .exactmat import (
    QMatrix, RankTable, SingularMatrixError, det, dim, nw_rank_table,
    restricted_quotient_rank, subspace_intersection, subspace_sum,
)
from .permcomb import (
    PartialPermutation, Permutation, Poset, all_permutations, bruhat_leq,
    essential_set, identity, max_bigrassmannians_below, order_ideal,
    simple_reflection,
)

__all__ = [
    "FlagPoint", "StratumReport", "Condition", "ResourceGuardError",
    "w0_matrix", "standard_flag", "antistandard_flag", "flag_space",
    "ambient_dimension", "assemble", "v_of_point", "quadrant_statistics",
    "big_ranks_from_statistics", "statistics_from_big_ranks",
    "stratum_membership", "membership_three_ways", "divisor_test",
    "divisor_predicate", "point_stratum_perm", "pi_flag", "ideal_generators",
    "stratification_poset", "stratum_dimension", "rank_conditions",
    "readable_conditions", "stratum_report", "in_ideal", "ideal_violation",
]

MAX_DESK_N = 4


class ResourceGuardError(RuntimeError):
    pass


def w0_matrix(n: int) -> QMatrix:
    return QMatrix.from_ones(n, n, ((i, n + 1 - i) for i in range(1, n + 1)))


def standard_flag(n: int, i: int) -> QMatrix:
    """E^i = span(e_1, ..., e_i)."""
    return QMatrix.from_ones(n, i, ((k, k) for k in range(1, i + 1)))


def antistandard_flag(n: int, j: int) -> QMatrix:
    """E_j = span(e_{n-j+1}, ..., e_n)."""
    return QMatrix.from_ones(n, j, ((n - j + k, k) for k in range(1, j + 1)))


@dataclass(frozen=True)
class FlagPoint:
    n: int
    g: QMatrix
    X: QMatrix
    _ginv: QMatrix = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.g.shape != (self.n, self.n) or self.X.shape != (self.n, self.n):
            raise ValueError(f"g and X must both be {self.n} x {self.n}")
        try:
            object.__setattr__(self, "_ginv", self.g.inverse())
        except SingularMatrixError:
            raise SingularMatrixError("g must be invertible") from None

    @classmethod
    def make(cls, g, X) -> FlagPoint:
        g = g if isinstance(g, QMatrix) else QMatrix(g)
        X = X if isinstance(X, QMatrix) else QMatrix(X)
        return cls(g.nrows, g, X)

    @property
    def g_inverse(self) -> QMatrix:
        return self._ginv

    def flag(self, i: int) -> QMatrix:
        """F^i as a column basis."""
        return self.g.columns(range(1, i + 1))

    def act(self, k: QMatrix) -> FlagPoint:
        """GL_n action k.(g, X) = (k g, k X k^-1)."""
        return FlagPoint(self.n, k @ self.g, k @ self.X @ k.inverse())

    def to_json(self) -> dict:
        return {"n": self.n, "g": self.g.to_json(), "X": self.X.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> FlagPoint:
        n = int(data["n"])
        return cls(n, QMatrix(data["g"], n), QMatrix(data["X"], n))


def flag_space(p: FlagPoint, i: int) -> QMatrix:
    return p.flag(i)


def ambient_dimension(n: int) -> int:
    """dim Fl(n) x Mat_n = n^2 + n(n-1)/2."""
    return n * n + comb(n, 2)


def assemble(p: FlagPoint) -> QMatrix:
    n = p.n
    return QMatrix.block([[p.X, p.g], [w0_matrix(n) @ p.g_inverse, QMatrix.zeros(n)]])


def _big_table(p: FlagPoint) -> RankTable:
    return nw_rank_table(assemble(p))


def v_of_point(p: FlagPoint) -> Permutation:
    return Permutation(_big_table(p).to_permutation())


def quadrant_statistics(p: FlagPoint) -> dict[str, list[list[int]]]:
    """The 4n^2 subspace statistics, computed without the 2n x 2n matrix.

    Each family is an n x n array indexed by (i, j), 1 <= i, j <= n
    (stored 0-indexed):

    NW(i, j) = rank(E^j -X-> V/E_{n-i})
    NE(i, j) = rank(V -X-> V/(E_{n-i} + F^j)) - dim(E_{n-i} ∩ F^j)
    SW(i, j) = rank(F^{n-i} ∩ E^j -X-> V) - dim(F^{n-i} ∩ E^j)
    SE(i, j) = rank(F^{n-i} -X-> V/F^j)
    """
    n, X = p.n, p.X
    full = QMatrix.identity(n)
    zero = QMatrix.zeros(n, 0)
    E = [standard_flag(n, k) for k in range(n + 1)]
    E_ = [antistandard_flag(n, k) for k in range(n + 1)]
    F = [p.flag(k) for k in range(n + 1)]
    out = {q: [[0] * n for _ in range(n)] for q in ("NW", "NE", "SW", "SE")}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            out["NW"][i - 1][j - 1] = restricted_quotient_rank(X, E[j], E_[n - i])
            out["NE"][i - 1][j - 1] = (
                restricted_quotient_rank(X, full, subspace_sum(E_[n - i], F[j]))
                - dim(subspace_intersection(E_[n - i], F[j]))
            )
            meet = subspace_intersection(F[n - i], E[j])
            out["SW"][i - 1][j - 1] = restricted_quotient_rank(X, meet, zero) - dim(meet)
            out["SE"][i - 1][j - 1] = restricted_quotient_rank(X, F[n - i], F[j])
    return out


def big_ranks_from_statistics(stats: dict[str, list[list[int]]], n: int) -> list[list[int]]:
    """Rebuild the 2n x 2n northwest rank table (with zero border) from the statistics."""
    m = 2 * n
    R = [[0] * (m + 1) for _ in range(m + 1)]
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            R[i][j] = stats["NW"][i - 1][j - 1]
            R[i][n + j] = stats["NE"][i - 1][j - 1] + j
            R[n + i][j] = stats["SW"][i - 1][j - 1] + j
            R[n + i][n + j] = stats["SE"][i - 1][j - 1] + i + j
    return R


def statistics_from_big_ranks(R: RankTable | list[list[int]], n: int) -> dict[str, list[list[int]]]:
    t = R.table if isinstance(R, RankTable) else R
    out = {q: [[0] * n for _ in range(n)] for q in ("NW", "NE", "SW", "SE")}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            out["NW"][i - 1][j - 1] = t[i][j]
            out["NE"][i - 1][j - 1] = t[i][n + j] - j
            out["SW"][i - 1][j - 1] = t[n + i][j] - j
            out["SE"][i - 1][j - 1] = t[n + i][n + j] - i - j
    return out


def membership_three_ways(p: FlagPoint, w: Permutation) -> tuple[bool, bool, bool]:
    """(w <= v(p), full rank-table test, essential-box test)."""
    if w.m != 2 * p.n:
        raise ValueError(f"stratum label must lie in S_{2 * p.n}")
    R = _big_table(p)
    v = Permutation(R.to_permutation())
    by_order = bruhat_leq(w, v)
    t = R.table
    by_table = all(t[i][j] <= w.r(i, j) for i in range(1, w.m + 1) for j in range(1, w.m + 1))
    by_ess = all(t[i][j] <= w.r(i, j) for i, j in essential_set(w))
    return by_order, by_table, by_ess


def stratum_membership(p: FlagPoint, w: Permutation) -> bool:
    """Whether p lies in the closed stratum labelled w; the three tests must agree."""
    results = membership_three_ways(p, w)
    if len(set(results)) != 1:
        raise AssertionError(f"membership tests disagree for {w}: {results}")
    return results[0]


def divisor_predicate(p: FlagPoint, k: int) -> bool:
    """The geometric equation of the divisor labelled s_k, evaluated directly."""
    n = p.n
    if not 1 <= k <= 2 * n - 1:
        raise ValueError(f"divisor index must lie in [1, {2 * n - 1}]")
    if k <= n:
        return det(p.X.nw(k, k)) == 0
    i = k - n
    return restricted_quotient_rank(p.X, p.flag(n - i), p.flag(i)) < n - i


def divisor_test(p: FlagPoint, k: int) -> bool:
    geometric = divisor_predicate(p, k)
    combinatorial = stratum_membership(p, simple_reflection(k, 2 * p.n))
    if geometric != combinatorial:
        raise AssertionError(f"divisor s_{k}: equation says {geometric}, Bruhat order says {combinatorial}")
    return geometric


def pi_flag(pi: Permutation) -> QMatrix:
    """The coordinate flag of pi: the permutation matrix with 1 at (i, pi(i))."""
    return pi.matrix()


def point_stratum_perm(pi: Permutation) -> Permutation:
    """v(pi B/B, 0): v(i) = n + pi(i), v(n + i) = pi^{-1}(n + 1 - i)."""
    n = pi.m
    inv = pi.inverse()
    return Permutation(tuple(n + pi(i) for i in range(1, n + 1)) + tuple(inv(n + 1 - i) for i in range(1, n + 1)))


def ideal_generators(n: int) -> list[Permutation]:
    return sorted(point_stratum_perm(pi) for pi in all_permutations(n))


def in_ideal(w: Permutation, n: int) -> bool:
    return any(bruhat_leq(w, v) for v in ideal_generators(n))


def ideal_violation(w: Permutation, n: int) -> str | None:
    """None when w is in the ideal, else a sentence naming a violated bound per maximal element."""
    if in_ideal(w, n):
        return None
    parts = []
    for v in ideal_generators(n):
        i, j = next(
            (i, j) for i in range(1, 2 * n + 1) for j in range(1, 2 * n + 1) if v.r(i, j) > w.r(i, j)
        )
        parts.append(f"{w} is not below {v}: r_w({i},{j}) = {w.r(i, j)} < {v.r(i, j)}")
    return f"{w} is outside the order ideal of S_{2 * n}; " + "; ".join(parts)


def stratum_dimension(w: Permutation, n: int) -> int:
    return ambient_dimension(n) - w.length


def stratification_poset(n: int, allow_large: bool = False) -> Poset:
    """The order ideal generated by the point strata v(pi), pi in S_n."""
    if n < 1:
        raise ValueError("n must be positive")
    if n > MAX_DESK_N and not allow_large:
        raise ResourceGuardError(f"n = {n} exceeds the desk-scale bound {MAX_DESK_N}; pass allow_large to override")
    return order_ideal(ideal_generators(n))


@dataclass(frozen=True)
class Condition:
    """One essential rank condition, both in 2n x 2n form and as a quadrant statistic.

    ``rank(NW big_i x big_j of the assembled matrix) <= rank_bound`` is
    equivalent to ``statistic[quadrant](i, j) <= stat_bound`` where (i, j)
    are the local quadrant indices used by :func:`quadrant_statistics`.
    """

    quadrant: str
    i: int
    j: int
    big_i: int
    big_j: int
    rank_bound: int
    stat_bound: int

    def as_tuple(self) -> tuple:
        return (self.quadrant, self.big_i, self.big_j, self.rank_bound)


def _classify(I: int, J: int, r: int, n: int) -> Condition:
    if I <= n and J <= n:
        return Condition("NW", I, J, I, J, r, r)
    if I <= n:
        b = J - n
        return Condition("NE", I, b, I, J, r, r - b)
    if J <= n:
        a = I - n
        return Condition("SW", a, J, I, J, r, r - J)
    a, b = I - n, J - n
    return Condition("SE", a, b, I, J, r, r - a - b)


def rank_conditions(w: Permutation, n: int) -> list[Condition]:
    return [_classify(i, j, w.r(i, j), n) for i, j in sorted(essential_set(w))]


_SUP = str.maketrans("0123456789-", "⁰¹²³⁴⁵⁶⁷⁸⁹⁻")
_SUB = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")


def _sup(k: int) -> str:
    return str(k).translate(_SUP)


def _sub(k: int) -> str:
    return str(k).translate(_SUB)


def _render(c: Condition, n: int) -> str:
    A = f"𝔸{_sup(n)}"
    if c.quadrant == "NW":
        I, J, r = c.big_i, c.big_j, c.rank_bound
        if r == 0:
            if I == J == n:
                return "X = 0"
            if I == J == 1:
                return "x₁₁ = 0"
            return f"NW {I}×{J} block of X = 0"
        if I == J and r == I - 1:
            return "det X = 0" if I == n else f"det(NW {I}×{I} submatrix of X) = 0"
        return f"rank(NW {I}×{J} submatrix of X) ≤ {r}"
    if c.quadrant == "SE":
        src = n - c.i
        return f"rank(F{_sup(src)} →X→ {A}/F{_sup(c.j)}) < {c.stat_bound + 1}"
    if c.quadrant == "NE":
        e = n - c.i
        if e == 0:
            return f"rank({A} →X→ {A}/F{_sup(c.j)}) ≤ {c.stat_bound}"
        return (
            f"rank({A} →X→ {A}/(E{_sub(e)} + F{_sup(c.j)})) − dim(E{_sub(e)} ∩ F{_sup(c.j)}) ≤ {c.stat_bound}"
        )
    src = n - c.i
    if c.j == n:
        return f"rank(F{_sup(src)} →X→ {A}) ≤ {c.stat_bound + src}"
    return f"rank(F{_sup(src)} ∩ E{_sup(c.j)} →X→ {A}) − dim(F{_sup(src)} ∩ E{_sup(c.j)}) ≤ {c.stat_bound}"


def readable_conditions(w: Permutation, n: int | None = None) -> list[str]:
    n = w.m // 2 if n is None else n
    return [_render(c, n) for c in rank_conditions(w, n)]


@dataclass
class StratumReport:
    w: Permutation
    n: int
    length: int
    dimension: int
    essential: list[tuple[int, int]]
    conditions: list[Condition]
    readable: list[str]
    g_invariant: bool
    rho: PartialPermutation | None
    max_bigrassmannians: list[Permutation]
    special: str | None = None

    def to_json(self) -> dict:
        return {
            "w": self.w.to_json(),
            "length": self.length,
            "dimension": self.dimension,
            "essential_set": [list(c) for c in self.essential],
            "conditions": [
                {"quadrant": c.quadrant, "i": c.big_i, "j": c.big_j, "rank_bound": c.rank_bound,
                 "local": [c.i, c.j], "statistic_bound": c.stat_bound}
                for c in self.conditions
            ],
            "readable": self.readable,
            "g_invariant": self.g_invariant,
            "rho": self.rho.to_json() if self.rho is not None else None,
            "max_bigrassmannians": [g.to_json() for g in self.max_bigrassmannians],
            "special": self.special,
        }

    def to_text(self) -> str:
        lines = [
            f"stratum {self.w}  (n = {self.n})" + (f"  [{self.special}]" if self.special else ""),
            f"  length      {self.length}",
            f"  dimension   {self.dimension}",
            f"  essential   {', '.join(f'({i},{j})' for i, j in self.essential) or '-'}",
            f"  G-invariant {'yes' if self.g_invariant else 'no'}",
        ]
        if self.rho is not None:
            lines.append(f"  rho         {self.rho}")
        lines.append(f"  biGrassmannians below: {', '.join(map(str, self.max_bigrassmannians)) or '-'}")
        lines.append("  conditions:")
        for c, text in zip(self.conditions, self.readable):
            lines.append(f"    {text}    [{c.quadrant} box ({c.big_i},{c.big_j}) rank <= {c.rank_bound}]")
        if not self.conditions:
            lines.append("    (none: open stratum)")
        return "\n".join(lines)


def stratum_report(w: Permutation, n: int | None = None) -> StratumReport:
    from .ginv import is_g_invariant, rho_from_sigma, special_sigmas

    n = w.m // 2 if n is None else n
    g_inv = is_g_invariant(w, n)
    gs, spr = special_sigmas(n)
    special = {gs: "Grothendieck-Springer space Y_GS", spr: "Springer space Y_Spr"}.get(w)
    return StratumReport(
        w=w,
        n=n,
        length=w.length,
        dimension=stratum_dimension(w, n),
        essential=sorted(essential_set(w)),
        conditions=rank_conditions(w, n),
        readable=readable_conditions(w, n),
        g_invariant=g_inv,
        rho=rho_from_sigma(w, n) if g_inv else None,
        max_bigrassmannians=sorted(max_bigrassmannians_below(w)),
        special=special,
    )


def open_stratum(n: int) -> Permutation:
    return identity(2 * n)
