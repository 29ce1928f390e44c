"""Brute-force oracles shared by the tests."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations

from bruhat_atlas.exactmat import QMatrix


def leibniz_det(M: QMatrix) -> Fraction:
    n = M.nrows
    total = Fraction(0)
    for p in permutations(range(n)):
        inversions = sum(p[a] > p[b] for a in range(n) for b in range(a + 1, n))
        term = Fraction(-1 if inversions % 2 else 1)
        for i in range(n):
            term *= M[i, p[i]]
        total += term
    return total


def minor_rank(M: QMatrix) -> int:
    """Largest k with a nonzero k x k minor."""
    for k in range(min(M.shape), 0, -1):
        for rows in combinations(range(1, M.nrows + 1), k):
            for cols in combinations(range(1, M.ncols + 1), k):
                if leibniz_det(M.submatrix(rows, cols)) != 0:
                    return k
    return 0


def inversions(word) -> int:
    return sum(word[a] > word[b] for a in range(len(word)) for b in range(a + 1, len(word)))
