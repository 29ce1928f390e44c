"""
Permutations of [m] in 1-indexed one-line notation, and Bruhat-order
combinatorics on them.

Conventions: the matrix of w has a 1 at (i, w(i)); r_w(i, j) counts the ones
weakly northwest of (i, j); the Bruhat order has the identity at the bottom,
so that ``bruhat_leq(w, u)`` holds iff r_u <= r_w entrywise.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

from .exactmat import QMatrix

__all__ = [
    "Permutation", "PartialPermutation", "Poset",
    "perm", "identity", "longest", "simple_reflection", "all_permutations",
    "bruhat_leq", "bruhat_leq_subword", "covers_down",
    "diagram", "essential_set", "bigrassmannian", "is_bigrassmannian",
    "max_bigrassmannians_below", "max_bigrassmannians_below_bruteforce",
    "order_ideal", "order_ideal_by_filter",
]


@dataclass(frozen=True, order=False)
class Permutation:
    word: tuple[int, ...]

    def __post_init__(self):
        word = tuple(int(x) for x in self.word)
        if sorted(word) != list(range(1, len(word) + 1)):
            raise ValueError(f"{self.word!r} is not a permutation of 1..{len(word)}")
        object.__setattr__(self, "word", word)

    @classmethod
    def parse(cls, text) -> Permutation:
        """Read '3421', '3 4 2 1', '3,4,2,1', '[3,4,2,1]' or a list of ints."""
        if not isinstance(text, str):
            return cls(tuple(text))
        text = text.strip().strip("[]")
        if any(sep in text for sep in ", "):
            parts = [p for p in text.replace(",", " ").split() if p]
            return cls(tuple(int(p) for p in parts))
        return cls(tuple(int(c) for c in text))

    @property
    def m(self) -> int:
        return len(self.word)

    def __call__(self, i: int) -> int:
        return self.word[i - 1]

    def __len__(self) -> int:
        return len(self.word)

    def __iter__(self):
        return iter(self.word)

    def __str__(self) -> str:
        if self.m <= 9:
            return "".join(map(str, self.word))
        return " ".join(map(str, self.word))

    def __repr__(self) -> str:
        return f"Permutation({self})"

    def sort_key(self) -> tuple:
        return (self.length, self.word)

    def __lt__(self, other: Permutation) -> bool:
        # total order for canonical output, not the Bruhat order
        return self.sort_key() < other.sort_key()

    @cached_property
    def length(self) -> int:
        w = self.word
        return sum(1 for a, b in itertools.combinations(range(len(w)), 2) if w[a] > w[b])

    def inverse(self) -> Permutation:
        inv = [0] * self.m
        for i, x in enumerate(self.word, start=1):
            inv[x - 1] = i
        return Permutation(tuple(inv))

    def compose(self, other: Permutation) -> Permutation:
        """(self ∘ other)(i) = self(other(i))."""
        if self.m != other.m:
            raise ValueError("size mismatch")
        return Permutation(tuple(self.word[x - 1] for x in other.word))

    def descents(self) -> set[int]:
        w = self.word
        return {i for i in range(1, self.m) if w[i - 1] > w[i]}

    def matrix(self) -> QMatrix:
        return QMatrix.from_ones(self.m, self.m, ((i, x) for i, x in enumerate(self.word, start=1)))

    @cached_property
    def rank_table(self) -> tuple[tuple[int, ...], ...]:
        """r[i][j] = #{k <= i : w(k) <= j} with a zero border (0 <= i, j <= m)."""
        m = self.m
        table = [[0] * (m + 1)]
        for i in range(1, m + 1):
            prev = table[-1]
            x = self.word[i - 1]
            table.append([prev[j] + (1 if x <= j else 0) for j in range(m + 1)])
        return tuple(tuple(r) for r in table)

    def r(self, i: int, j: int) -> int:
        return self.rank_table[i][j]

    def to_json(self) -> list[int]:
        return list(self.word)


def perm(x) -> Permutation:
    if isinstance(x, Permutation):
        return x
    if isinstance(x, str):
        return Permutation.parse(x)
    return Permutation(tuple(x))


def identity(m: int) -> Permutation:
    return Permutation(tuple(range(1, m + 1)))


def longest(m: int) -> Permutation:
    return Permutation(tuple(range(m, 0, -1)))


def simple_reflection(k: int, m: int) -> Permutation:
    word = list(range(1, m + 1))
    word[k - 1], word[k] = word[k], word[k - 1]
    return Permutation(tuple(word))


def all_permutations(m: int) -> list[Permutation]:
    return [Permutation(p) for p in itertools.permutations(range(1, m + 1))]


@dataclass(frozen=True)
class PartialPermutation:
    """0/1 n x n matrix with at most one 1 per row and column."""

    n: int
    ones: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        ones = frozenset((int(i), int(j)) for i, j in self.ones)
        rows = [i for i, _ in ones]
        cols = [j for _, j in ones]
        if len(set(rows)) != len(rows) or len(set(cols)) != len(cols):
            raise ValueError("two ones share a row or a column")
        if any(not (1 <= i <= self.n and 1 <= j <= self.n) for i, j in ones):
            raise ValueError("cell outside the n x n grid")
        object.__setattr__(self, "ones", ones)

    @property
    def rank(self) -> int:
        return len(self.ones)

    @property
    def rows(self) -> frozenset[int]:
        return frozenset(i for i, _ in self.ones)

    @property
    def cols(self) -> frozenset[int]:
        return frozenset(j for _, j in self.ones)

    def matrix(self) -> QMatrix:
        return QMatrix.from_ones(self.n, self.n, self.ones)

    def transpose(self) -> PartialPermutation:
        return PartialPermutation(self.n, frozenset((j, i) for i, j in self.ones))

    def times_w0(self) -> PartialPermutation:
        """Right multiplication by w0 reverses the column order."""
        return PartialPermutation(self.n, frozenset((i, self.n + 1 - j) for i, j in self.ones))

    def sort_key(self) -> tuple:
        return (self.rank, sorted(self.ones))

    def __str__(self) -> str:
        if not self.ones:
            return "0"
        return " ".join(f"E{i}{j}" if self.n <= 9 else f"E({i},{j})" for i, j in sorted(self.ones))

    def to_json(self) -> dict:
        return {"n": self.n, "ones": [list(c) for c in sorted(self.ones)]}

    @classmethod
    def from_json(cls, data: dict) -> PartialPermutation:
        return cls(int(data["n"]), frozenset(tuple(c) for c in data["ones"]))

    @classmethod
    def all(cls, n: int) -> list[PartialPermutation]:
        out = []
        for k in range(n + 1):
            for rows in itertools.combinations(range(1, n + 1), k):
                for cols in itertools.permutations(range(1, n + 1), k):
                    out.append(cls(n, frozenset(zip(rows, cols))))
        return out


def _check_same_size(w: Permutation, u: Permutation) -> None:
    if w.m != u.m:
        raise ValueError(f"size mismatch: S_{w.m} vs S_{u.m}")


def bruhat_leq(w: Permutation, u: Permutation) -> bool:
    """w <= u in Bruhat order, by rank-table dominance: r_u <= r_w."""
    _check_same_size(w, u)
    if w.length > u.length:
        return False
    rw, ru = w.rank_table, u.rank_table
    return all(a <= b for x, y in zip(ru, rw) for a, b in zip(x, y))


def reduced_word(w: Permutation) -> list[int]:
    """Indices k with w = s_{k_1} ∘ s_{k_2} ∘ ... ∘ s_{k_l}, l = length(w)."""
    word = list(w.word)
    letters = []
    while True:
        k = next((i for i in range(len(word) - 1) if word[i] > word[i + 1]), None)
        if k is None:
            break
        # w = (w ∘ s_k) ∘ s_k and w ∘ s_k swaps positions k, k+1
        word[k], word[k + 1] = word[k + 1], word[k]
        letters.append(k + 1)
    return letters[::-1]


def bruhat_leq_subword(w: Permutation, u: Permutation) -> bool:
    """Subword-property oracle: w <= u iff w is a product of a subword of a reduced word of u."""
    _check_same_size(w, u)
    reachable = {identity(u.m).word}
    for k in reduced_word(u):
        step = set()
        for x in reachable:
            y = list(x)
            y[k - 1], y[k] = y[k], y[k - 1]
            step.add(tuple(y))
        reachable |= step
    return w.word in reachable


def covers_down(w: Permutation) -> list[Permutation]:
    """All u with u ⋖ w: swap positions a < b with w(a) > w(b) and no value of w strictly between at a position in between."""
    word = w.word
    out = []
    for a in range(len(word)):
        for b in range(a + 1, len(word)):
            hi, lo = word[a], word[b]
            if hi < lo:
                continue
            if any(lo < word[c] < hi for c in range(a + 1, b)):
                continue
            y = list(word)
            y[a], y[b] = lo, hi
            out.append(Permutation(tuple(y)))
    return out


def covers_up(w: Permutation) -> list[Permutation]:
    word = w.word
    out = []
    for a in range(len(word)):
        for b in range(a + 1, len(word)):
            lo, hi = word[a], word[b]
            if lo > hi:
                continue
            if any(lo < word[c] < hi for c in range(a + 1, b)):
                continue
            y = list(word)
            y[a], y[b] = hi, lo
            out.append(Permutation(tuple(y)))
    return out


def diagram(w: Permutation) -> frozenset[tuple[int, int]]:
    """D(w) = {(i, j) : w(i) > j and w^{-1}(j) > i}."""
    inv = w.inverse()
    return frozenset(
        (i, j) for i in range(1, w.m + 1) for j in range(1, w.m + 1) if w(i) > j and inv(j) > i
    )


def essential_set(w: Permutation) -> frozenset[tuple[int, int]]:
    D = diagram(w)
    return frozenset((i, j) for i, j in D if (i + 1, j) not in D and (i, j + 1) not in D)


def diagram_and_essential(w: Permutation) -> tuple[frozenset, frozenset]:
    return diagram(w), essential_set(w)


def is_bigrassmannian(w: Permutation) -> bool:
    return len(w.descents()) <= 1 and len(w.inverse().descents()) <= 1


def bigrassmannian(i: int, j: int, r: int, m: int) -> Permutation:
    """The biGrassmannian element with essential set {(i, j)} and rank r there."""
    if not (max(0, i + j - m) <= r < min(i, j)):
        raise ValueError(f"need max(0, i+j-m) <= r < min(i, j); got i={i} j={j} r={r} m={m}")
    head = list(range(1, r + 1)) + list(range(j + 1, j + i - r + 1))
    rest = sorted(set(range(1, m + 1)) - set(head))
    return Permutation(tuple(head + rest))


def max_bigrassmannians_below(w: Permutation) -> frozenset[Permutation]:
    return frozenset(bigrassmannian(i, j, w.r(i, j), w.m) for i, j in essential_set(w))


@lru_cache(maxsize=None)
def _all_bigrassmannians(m: int) -> tuple[Permutation, ...]:
    return tuple(p for p in all_permutations(m) if is_bigrassmannian(p) and p.length > 0)


def max_bigrassmannians_below_bruteforce(w: Permutation) -> frozenset[Permutation]:
    """Oracle: filter every biGrassmannian of S_m below w and keep the maximal ones."""
    below = [g for g in _all_bigrassmannians(w.m) if bruhat_leq(g, w)]
    return frozenset(g for g in below if not any(h != g and bruhat_leq(g, h) for h in below))


@dataclass
class Poset:
    """Finite poset given by its elements and Hasse covers (lower, upper)."""

    elements: list[Permutation]
    covers: list[tuple[Permutation, Permutation]]

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, w) -> bool:
        return w in self._index

    @cached_property
    def _index(self) -> dict[Permutation, int]:
        return {w: k for k, w in enumerate(self.elements)}

    def maximal(self) -> list[Permutation]:
        lower = {a for a, _ in self.covers}
        return [w for w in self.elements if w not in lower]

    def to_json(self) -> dict:
        return {
            "elements": [w.to_json() for w in self.elements],
            "covers": [[a.to_json(), b.to_json()] for a, b in self.covers],
        }


def order_ideal(generators: Iterable[Permutation]) -> Poset:
    """Union of the intervals [e, g], by downward search through Bruhat covers."""
    gens = sorted(set(generators))
    if not gens:
        return Poset([], [])
    m = gens[0].m
    if any(g.m != m for g in gens):
        raise ValueError("generators live in different symmetric groups")
    seen = set(gens)
    frontier = list(gens)
    covers = set()
    while frontier:
        nxt = []
        for w in frontier:
            for u in covers_down(w):
                covers.add((u, w))
                if u not in seen:
                    seen.add(u)
                    nxt.append(u)
        frontier = nxt
    elements = sorted(seen)
    return Poset(elements, sorted(covers, key=lambda c: (c[0].sort_key(), c[1].sort_key())))


def order_ideal_by_filter(generators: Iterable[Permutation], candidates: Iterable[Permutation] | None = None) -> list[Permutation]:
    """Oracle: keep the candidates (default: all of S_m) below some generator, by dominance."""
    gens = list(generators)
    m = gens[0].m
    pool = all_permutations(m) if candidates is None else candidates
    return sorted(w for w in pool if any(bruhat_leq(w, g) for g in gens))


def hasse_covers_by_definition(elements: Sequence[Permutation]) -> set[tuple[Permutation, Permutation]]:
    """Oracle: u ⋖ w iff u <= w and length(w) = length(u) + 1."""
    by_len: dict[int, list[Permutation]] = {}
    for w in elements:
        by_len.setdefault(w.length, []).append(w)
    out = set()
    for w in elements:
        for u in by_len.get(w.length - 1, []):
            if bruhat_leq(u, w):
                out.add((u, w))
    return out
