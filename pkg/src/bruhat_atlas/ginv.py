"""
GL_n-invariant strata: the essential-set criterion, the correspondence with
n x n partial permutations, and the fiber of a stratum over the base flag.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exactmat import QMatrix, rank
from .permcomb import (
    PartialPermutation, Permutation, bruhat_leq, covers_up, essential_set,
    simple_reflection,
)
from .stratmap import (
    FlagPoint, in_ideal, readable_conditions, stratification_poset,
    stratum_dimension, stratum_membership,
)

__all__ = [
    "GInvariantStratum", "is_g_invariant", "sigma_from_rho", "rho_from_sigma",
    "descent_criterion", "descent_report", "matrix_closure_membership",
    "fiber_check", "special_sigmas", "mvdk_divisors", "g_invariant_catalog",
]


def is_g_invariant(sigma: Permutation, n: int | None = None) -> bool:
    """Every essential box lies in rows and columns n..2n."""
    n = sigma.m // 2 if n is None else n
    return all(i >= n and j >= n for i, j in essential_set(sigma))


def sigma_from_rho(rho: PartialPermutation) -> Permutation:
    """The unique full permutation of S_2n whose southeast quadrant is rho.

    Block layout (rows | columns):
      rows 1..|R|        -> columns 1..|C| (identity)
      rows |R|+1..n      -> columns n + ([n] minus C), in increasing order
      rows n + ([n] minus R), increasing -> columns |C|+1..n
      rows n + i         -> columns n + j for (i, j) in rho
    """
    n = rho.n
    k = rho.rank
    word = [0] * (2 * n)
    for i in range(1, k + 1):
        word[i - 1] = i
    free_cols = [c for c in range(1, n + 1) if c not in rho.cols]
    for t, c in enumerate(free_cols, start=k + 1):
        word[t - 1] = n + c
    free_rows = [r for r in range(1, n + 1) if r not in rho.rows]
    for t, r in enumerate(free_rows, start=k + 1):
        word[n + r - 1] = t
    for i, j in rho.ones:
        word[n + i - 1] = n + j
    return Permutation(tuple(word))


def rho_from_sigma(sigma: Permutation, n: int | None = None) -> PartialPermutation:
    n = sigma.m // 2 if n is None else n
    return PartialPermutation(
        n, frozenset((i - n, sigma(i) - n) for i in range(n + 1, 2 * n + 1) if sigma(i) > n)
    )


@dataclass(frozen=True)
class GInvariantStratum:
    sigma: Permutation
    rho: PartialPermutation

    def __post_init__(self):
        if rho_from_sigma(self.sigma, self.rho.n) != self.rho:
            raise ValueError("rho is not the southeast quadrant of sigma")
        if sigma_from_rho(self.rho) != self.sigma:
            raise ValueError("sigma is not the block permutation built from rho")

    @property
    def C(self) -> frozenset[int]:
        return self.rho.cols

    @property
    def R(self) -> frozenset[int]:
        return self.rho.rows

    @classmethod
    def from_rho(cls, rho: PartialPermutation) -> GInvariantStratum:
        return cls(sigma_from_rho(rho), rho)


def descent_criterion(sigma: Permutation, n: int | None = None, variant: str = "corrected") -> bool:
    """Neither sigma nor its inverse has a descent in {1..n} (literal) or {1..n-1} (corrected)."""
    n = sigma.m // 2 if n is None else n
    if variant == "literal":
        window = set(range(1, n + 1))
    elif variant == "corrected":
        window = set(range(1, n))
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return not (sigma.descents() & window) and not (sigma.inverse().descents() & window)


def descent_report(n: int) -> dict:
    """Compare both descent readings against the essential-set criterion over the whole ideal."""
    ideal = stratification_poset(n).elements
    out = {"n": n, "ideal_size": len(ideal)}
    for variant in ("literal", "corrected"):
        out[variant] = sorted(
            w for w in ideal if descent_criterion(w, n, variant) != is_g_invariant(w, n)
        )
    out["g_invariant"] = sorted(w for w in ideal if is_g_invariant(w, n))
    return out


def matrix_closure_membership(X: QMatrix, tau: PartialPermutation) -> bool:
    """X lies in the closure of B tau B in Mat_n (Fulton's southwest rank conditions).

    For all i, j in [0, n] the southwest (n-j) x (n-i) rectangle of X
    (rows j+1..n, columns 1..n-i) has rank at most that of tau.
    """
    n = tau.n
    if X.shape != (n, n):
        raise ValueError("size mismatch")
    T = tau.matrix()
    for i in range(n + 1):
        for j in range(n + 1):
            rows, cols = range(j + 1, n + 1), range(1, n - i + 1)
            if rank(X.submatrix(rows, cols)) > rank(T.submatrix(rows, cols)):
                return False
    return True


def fiber_check(X: QMatrix, rho: PartialPermutation) -> bool:
    """Membership of (B/B, X) in the stratum of rho, two ways; they must agree."""
    n = rho.n
    p = FlagPoint(n, QMatrix.identity(n), X)
    by_stratum = stratum_membership(p, sigma_from_rho(rho))
    by_fulton = matrix_closure_membership(X, rho.transpose().times_w0())
    if by_stratum != by_fulton:
        raise AssertionError(f"fiber check disagrees for rho={rho}: stratum {by_stratum}, Fulton {by_fulton}")
    return by_stratum


def special_sigmas(n: int) -> tuple[Permutation, Permutation]:
    """(v(Y_GS), v(Y_Spr)) = (1..n, 2n..n+1) and (1..n-1, 2n..n)."""
    if n < 1:
        raise ValueError("n must be positive")
    gs = Permutation(tuple(range(1, n + 1)) + tuple(range(2 * n, n, -1)))
    spr = Permutation(tuple(range(1, n)) + tuple(range(2 * n, n - 1, -1)))
    return gs, spr


def mvdk_divisors(n: int) -> list[Permutation]:
    """Bruhat covers of sigma_GS inside the ideal; each dominates some s_i with i <= n."""
    gs, _ = special_sigmas(n)
    covers = sorted(w for w in covers_up(gs) if in_ideal(w, n))
    for w in covers:
        if w.length != gs.length + 1:
            raise AssertionError(f"{w} is not a cover of {gs}")
        if not any(bruhat_leq(simple_reflection(i, 2 * n), w) for i in range(1, n + 1)):
            raise AssertionError(f"cover {w} lies over no divisor s_1..s_{n}")
    return covers


def g_invariant_catalog(n: int) -> list[dict]:
    rows = []
    for rho in sorted(PartialPermutation.all(n), key=PartialPermutation.sort_key):
        sigma = sigma_from_rho(rho)
        rows.append({
            "sigma": sigma,
            "rho": rho,
            "dimension": stratum_dimension(sigma, n),
            "conditions": readable_conditions(sigma, n),
        })
    rows.sort(key=lambda r: r["sigma"].sort_key())
    return rows
