"""
Seeded random points, and witness points lying in a prescribed stratum.

Witnesses are built inside a chart: a point of B v B/B ∩ B^- w B/B (an open
Richardson cell) is written as a product of simple reflections and lower
unipotent root elements y_k(t) along the positive distinguished subexpression
of w in a reduced word of v (Marsh–Rietsch), then carried back to
Fl(n) x Mat_n through the chart map.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .charts import chart_forward, coords_from_cell_matrix
from .exactmat import (
    QMatrix, coset_perm_b_b, coset_perm_bminus_b, random_invertible,
    random_invertible_upper, random_matrix,
)
from .permcomb import Permutation, all_permutations, bruhat_leq, reduced_word
from .stratmap import FlagPoint, point_stratum_perm, v_of_point

__all__ = [
    "trial_rng", "random_flag_point", "random_upper_borel", "richardson_point",
    "stratum_witness", "WitnessError",
]

NONZERO = [k for k in range(-9, 10) if k]


class WitnessError(RuntimeError):
    pass


def trial_rng(seed: int, trial: int, label: str = "") -> random.Random:
    """Independent per-trial generator, so results never depend on scheduling."""
    return random.Random(f"{seed}:{label}:{trial}")


def random_flag_point(rng: random.Random, n: int) -> FlagPoint:
    return FlagPoint(n, random_invertible(rng, n), random_matrix(rng, n))


def random_upper_borel(rng: random.Random, n: int) -> QMatrix:
    return random_invertible_upper(rng, n)


def _s_dot(k: int, m: int) -> QMatrix:
    rows = [[Fraction(int(i == j)) for j in range(m)] for i in range(m)]
    rows[k - 1][k - 1] = rows[k][k] = Fraction(0)
    rows[k - 1][k] = Fraction(-1)
    rows[k][k - 1] = Fraction(1)
    return QMatrix(rows, m)


def _y(k: int, t, m: int) -> QMatrix:
    rows = [[Fraction(int(i == j)) for j in range(m)] for i in range(m)]
    rows[k][k - 1] = Fraction(t)
    return QMatrix(rows, m)


def positive_subexpression(word: list[int], target: Permutation) -> list[bool]:
    """Rightmost reduced subword of ``word`` multiplying to ``target`` (True = letter used)."""
    u = list(target.word)
    used = [False] * len(word)
    for pos in range(len(word) - 1, -1, -1):
        k = word[pos]
        if u[k - 1] > u[k]:
            u[k - 1], u[k] = u[k], u[k - 1]
            used[pos] = True
    if u != sorted(u):
        raise WitnessError(f"{target} is not below the word {word}")
    return used


def richardson_point(w: Permutation, v: Permutation, params) -> QMatrix:
    """A matrix in B^- w B ∩ B v B, one parameter per unused letter (all nonzero).

    Matrices multiply as Weyl group elements via e_i -> e_{u(i)}, which is
    the matrix of u^-1 in the row convention; hence the inverses below.
    """
    m = w.m
    word = reduced_word(v.inverse())
    used = positive_subexpression(word, w.inverse())
    params = iter(params)
    M = QMatrix.identity(m)
    for k, take in zip(word, used):
        M = M @ (_s_dot(k, m) if take else _y(k, next(params), m))
    return M


def _free_letters(w: Permutation, v: Permutation) -> int:
    word = reduced_word(v.inverse())
    return sum(not u for u in positive_subexpression(word, w.inverse()))


def stratum_witness(sigma: Permutation, n: int, rng: random.Random, pi: Permutation | None = None,
                    params=None) -> FlagPoint:
    """A rational point p of Fl(n) x Mat_n with v(p) = sigma exactly."""
    if pi is None:
        options = [q for q in all_permutations(n) if bruhat_leq(sigma, point_stratum_perm(q))]
        if not options:
            raise WitnessError(f"{sigma} is not in the order ideal")
        pi = rng.choice(options)
    v = point_stratum_perm(pi)
    if params is None:
        params = [rng.choice(NONZERO) for _ in range(_free_letters(sigma, v))]
    M = richardson_point(sigma, v, params)
    if Permutation(coset_perm_bminus_b(M)) != sigma or Permutation(coset_perm_b_b(M)) != v:
        raise WitnessError(f"Richardson parametrization missed ({sigma}, {v})")
    p = chart_forward(coords_from_cell_matrix(pi, M))
    if v_of_point(p) != sigma:
        raise WitnessError(f"witness for {sigma} landed in {v_of_point(p)}")
    return p
