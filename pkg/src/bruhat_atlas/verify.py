"""
Seeded verification suites.

Every suite returns a :class:`SuiteResult` whose JSON form is byte-stable for
a given (suite, n, seed, trials). Each trial draws from its own generator
derived from (seed, label, trial), so suites can be split across workers
without changing results. A failure records the module, operation, seed and
trial index needed to replay it.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Callable

from . import charts as ch
from .exactmat import (
    QMatrix, leading_minors, nw_rank_table, random_matrix, random_unit_lower,
    random_unit_upper, trailing_minors,
)
from .ginv import (
    descent_report, fiber_check, is_g_invariant, mvdk_divisors, rho_from_sigma,
    sigma_from_rho, special_sigmas,
)
from .permcomb import (
    PartialPermutation, Permutation, all_permutations, bruhat_leq, bruhat_leq_subword,
    covers_up, max_bigrassmannians_below, max_bigrassmannians_below_bruteforce,
    order_ideal_by_filter,
)
from .sampling import random_flag_point, random_upper_borel, stratum_witness, trial_rng
from .stratmap import (
    FlagPoint, assemble, big_ranks_from_statistics, divisor_test,
    ideal_generators, in_ideal, membership_three_ways, pi_flag, point_stratum_perm,
    quadrant_statistics, statistics_from_big_ranks, stratification_poset, stratum_membership, v_of_point,
)

__all__ = ["SUITES", "DEFAULT_NS", "SuiteResult", "run_suite", "run_suites", "load_fixture"]

SCHEMA = 1


@dataclass
class SuiteResult:
    suite: str
    n: int
    seed: int
    trials: int
    checks: int = 0
    failures: list[dict] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def check(self, ok: bool, module: str, op: str, trial: int | None, message: str) -> bool:
        self.checks += 1
        if not ok:
            self.failures.append({
                "module": module, "op": op, "seed": self.seed, "trial": trial, "message": message,
            })
        return ok

    def attempt(self, module: str, op: str, trial: int | None, fn: Callable[[], object]):
        """Run fn; an exception counts as a failed check. Returns fn's value or None."""
        try:
            return fn()
        except (AssertionError, ArithmeticError, ValueError, RuntimeError) as exc:
            self.check(False, module, op, trial, f"{type(exc).__name__}: {exc}")
            return None

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "n": self.n,
            "seed": self.seed,
            "trials": self.trials,
            "checks": self.checks,
            "passed": self.passed,
            "failures": self.failures,
            "details": self.details,
        }


@lru_cache(maxsize=None)
def _ideal(n: int) -> tuple[Permutation, ...]:
    return stratification_poset(n).elements


def _sample_point(rng: random.Random, n: int) -> FlagPoint:
    """Half generic points, half witnesses of a uniformly chosen stratum."""
    if rng.random() < 0.5:
        return random_flag_point(rng, n)
    return stratum_witness(rng.choice(_ideal(n)), n, rng)


def _perm_json(ws) -> list[str]:
    return [str(w) for w in sorted(ws)]


# --- suites ---------------------------------------------------------------


def suite_welldef(res: SuiteResult) -> None:
    n = res.n
    for t in range(res.trials):
        rng = trial_rng(res.seed, t, "welldef")
        p = res.attempt("sampling", "stratum_witness", t, lambda: _sample_point(rng, n))
        if p is None:
            continue
        q = FlagPoint(n, p.g @ random_upper_borel(rng, n), p.X)
        res.check(v_of_point(p) == v_of_point(q), "stratmap", "v_of_point", t,
                  "v changed under g -> g b")
        res.check(quadrant_statistics(p) == quadrant_statistics(q), "stratmap", "quadrant_statistics", t,
                  "statistics changed under g -> g b")


def suite_prop11(res: SuiteResult) -> None:
    n = res.n
    ideal = _ideal(n)
    for t in range(res.trials):
        rng = trial_rng(res.seed, t, "prop11-equiv")
        p = res.attempt("sampling", "stratum_witness", t, lambda: _sample_point(rng, n))
        if p is None:
            continue
        stats = quadrant_statistics(p)
        R = nw_rank_table(assemble(p))
        res.check(big_ranks_from_statistics(stats, n) == [list(r) for r in R.table], "stratmap", "big_ranks_from_statistics", t,
                  "affine identities fail: statistics do not reproduce the rank table")
        res.check(statistics_from_big_ranks(R, n) == stats, "stratmap", "statistics_from_big_ranks", t,
                  "rank table does not reproduce the statistics")
        w = rng.choice(ideal)
        res.attempt("stratmap", "membership_three_ways", t,
                    lambda: res.check(len(set(membership_three_ways(p, w))) == 1, "stratmap",
                                      "membership_three_ways", t, f"membership tests disagree at {w}"))


def suite_ideal_image(res: SuiteResult) -> None:
    n = res.n
    poset = stratification_poset(n)
    members = set(poset.elements)
    top = n * n + n * (n - 1) // 2
    for pi in all_permutations(n):
        v = point_stratum_perm(pi)
        res.check(v.length == top, "stratmap", "point_stratum_perm", None, f"l(v({pi})) = {v.length} != {top}")
        res.check(v_of_point(FlagPoint(n, pi_flag(pi), QMatrix.zeros(n))) == v, "stratmap", "v_of_point", None,
                  f"closed formula for v({pi}) disagrees with coset extraction")
    res.check(set(poset.maximal()) == set(ideal_generators(n)), "stratmap", "stratification_poset", None,
              "maximal elements are not the point strata")
    if n <= 3:
        filtered = order_ideal_by_filter(ideal_generators(n))
        res.check(sorted(filtered) == sorted(members), "permcomb", "order_ideal", None,
                  "BFS ideal and filter ideal differ")
    for t in range(res.trials):
        rng = trial_rng(res.seed, t, "ideal-image")
        p = random_flag_point(rng, n)
        if rng.random() < 0.5:
            p = FlagPoint(n, p.g, QMatrix.zeros(n))
        v = v_of_point(p)
        res.check(v in members and in_ideal(v, n), "stratmap", "v_of_point", t, f"v(p) = {v} outside the ideal")
    res.details = {"ideal_size": len(members), "covers": len(poset.covers)}


def suite_kobayashi(res: SuiteResult) -> None:
    m = 2 * res.n
    perms = all_permutations(m)

    def one(w: Permutation, u: Permutation, t: int | None) -> None:
        via_big = all(bruhat_leq(b, u) for b in max_bigrassmannians_below(w))
        direct = bruhat_leq(w, u)
        res.check(direct == bruhat_leq_subword(w, u), "permcomb", "bruhat_leq", t,
                  f"rank test and subword oracle disagree on ({w}, {u})")
        res.check(direct == via_big, "permcomb", "max_bigrassmannians_below", t,
                  f"biGrassmannian criterion fails on ({w}, {u})")

    if math.factorial(m) <= 24:
        for w in perms:
            res.check(max_bigrassmannians_below(w) == max_bigrassmannians_below_bruteforce(w), "permcomb",
                      "max_bigrassmannians_below", None, f"disagrees with the brute-force oracle at {w}")
            for u in perms:
                one(w, u, None)
        res.details = {"mode": "exhaustive", "pairs": len(perms) ** 2}
        return
    for t in range(res.trials):
        rng = trial_rng(res.seed, t, "kobayashi")
        w = rng.choice(perms)
        if rng.random() < 0.5:
            u = rng.choice(perms)
        else:
            u = w
            for _ in range(rng.randint(0, 6)):
                ups = sorted(covers_up(u))
                if not ups:
                    break
                u = rng.choice(ups)
        res.check(max_bigrassmannians_below(w) == max_bigrassmannians_below_bruteforce(w), "permcomb",
                  "max_bigrassmannians_below", t, f"disagrees with the brute-force oracle at {w}")
        one(w, u, t)
    res.details = {"mode": "sampled", "pairs": res.trials}


def _fiber_matrix(rng: random.Random, n: int, tau: PartialPermutation) -> QMatrix:
    """Random X, or b1 T b2 for the orbit of tau or of a random partial permutation."""
    kind = rng.randrange(3)
    if kind == 0:
        return random_matrix(rng, n)
    if kind == 2:
        tau = rng.choice(PartialPermutation.all(n))
    return random_upper_borel(rng, n) @ tau.matrix() @ random_upper_borel(rng, n)


def suite_ginv(res: SuiteResult) -> None:
    n = res.n
    ideal = _ideal(n)
    rhos = PartialPermutation.all(n)
    sigmas = [sigma_from_rho(r) for r in rhos]
    invariant = {w for w in ideal if is_g_invariant(w, n)}
    res.check(len(set(sigmas)) == len(rhos), "ginv", "sigma_from_rho", None, "sigma_from_rho is not injective")
    res.check(set(sigmas) == invariant, "ginv", "sigma_from_rho", None,
              "image of sigma_from_rho is not the G-invariant part of the ideal")
    for r, s in zip(rhos, sigmas):
        res.check(rho_from_sigma(s, n) == r, "ginv", "rho_from_sigma", None, f"round trip fails at {r}")
    gs, spr = special_sigmas(n)
    res.check(list(gs.word) == list(range(1, n + 1)) + list(range(2 * n, n, -1)), "ginv", "special_sigmas", None,
              "sigma_GS formula")
    res.check(list(spr.word) == list(range(1, n)) + list(range(2 * n, n - 1, -1)), "ginv", "special_sigmas", None,
              "sigma_Spr formula")
    res.check(gs in invariant and spr in invariant, "ginv", "special_sigmas", None, "special strata not G-invariant")

    fiber_true = 0
    for r in rhos:
        tau = r.transpose().times_w0()
        for t in range(res.trials):
            rng = trial_rng(res.seed, t, f"ginv:fiber:{r}")
            X = _fiber_matrix(rng, n, tau)
            ok = res.attempt("ginv", "fiber_check", t, lambda: fiber_check(X, r))
            if ok is not None:
                res.checks += 1
                fiber_true += bool(ok)

    # invariance is a property of the closed stratum: a point of an invariant
    # stratum may still move into a smaller stratum inside its closure
    moved = []
    for idx, w in enumerate(ideal):
        rng = trial_rng(res.seed, idx, f"ginv:action:{w}")
        p = res.attempt("sampling", "stratum_witness", idx, lambda: stratum_witness(w, n, rng))
        if p is None:
            continue
        if w in invariant:
            for _ in range(3):
                k = random_flag_point(rng, n).g
                res.check(stratum_membership(p.act(k), w), "ginv", "is_g_invariant", idx,
                          f"GL_n moved a point out of the invariant closed stratum {w}")
            continue
        for _ in range(50):
            k = random_flag_point(rng, n).g
            q = p.act(k)
            if not stratum_membership(q, w):
                moved.append({"sigma": str(w), "k": k.to_json(), "moved_to": str(v_of_point(q))})
                break
        res.check(bool(moved) and moved[-1]["sigma"] == str(w), "ginv", "is_g_invariant", idx,
                  f"no group element found moving a point out of non-invariant stratum {w}")
    res.details = {
        "partial_permutations": len(rhos),
        "g_invariant": _perm_json(invariant),
        "sigma_gs": str(gs),
        "sigma_spr": str(spr),
        "fiber_checks": len(rhos) * res.trials,
        "fiber_members": fiber_true,
        "non_invariant_witnesses": moved,
    }


def suite_erratum(res: SuiteResult) -> None:
    n = res.n
    rep = descent_report(n)
    invariant = set(rep["g_invariant"])
    expected = {w for w in invariant if n in w.descents() | w.inverse().descents()}
    res.check(not rep["corrected"], "ginv", "descent_criterion", None,
              f"descents in 1..n-1 disagree on {_perm_json(rep['corrected'])}")
    res.check(set(rep["literal"]) == expected, "ginv", "descent_criterion", None,
              "literal mismatches are not the G-invariant strata with a descent at n")
    res.details = {
        "ideal_size": rep["ideal_size"],
        "literal_mismatch": _perm_json(rep["literal"]),
        "corrected_mismatch": _perm_json(rep["corrected"]),
    }


def _chart_point(rng: random.Random, pi: Permutation) -> FlagPoint:
    n = pi.m
    v = point_stratum_perm(pi)
    if rng.random() < 0.5:
        return stratum_witness(rng.choice([w for w in _ideal(n) if bruhat_leq(w, v)]), n, rng, pi=pi)
    g = pi.matrix() @ random_unit_lower(rng, n) @ random_upper_borel(rng, n)
    X = random_matrix(rng, n) if rng.random() < 0.5 else QMatrix.zeros(n)
    return FlagPoint(n, g, X)


def _random_coords(rng: random.Random, pi: Permutation) -> ch.ChartCoords:
    n = pi.m
    a_cells, d_cells = ch.coordinate_patterns(pi)
    return ch.ChartCoords(pi, random_matrix(rng, n), random_unit_lower(rng, n, a_cells.cells),
                          random_unit_lower(rng, n, d_cells.cells))


def suite_charts(res: SuiteResult) -> None:
    n = res.n
    matrix = {}
    for pi in all_permutations(n):
        before = len(res.failures)
        v = point_stratum_perm(pi)
        for t in range(res.trials):
            rng = trial_rng(res.seed, t, f"charts:{pi}")
            p = res.attempt("sampling", "stratum_witness", t, lambda: _chart_point(rng, pi))
            if p is None:
                continue
            coords = res.attempt("charts", "chart_inverse", t, lambda: ch.chart_inverse(pi, p))
            if coords is None:
                continue
            q = res.attempt("charts", "chart_forward", t, lambda: ch.chart_forward(coords))
            if q is not None:
                res.check(q.X == p.X and ch.normalize_flag(pi, q) == ch.normalize_flag(pi, p), "charts",
                          "chart_forward", t, f"c_pi(c_pi^-1(p)) != p for pi = {pi}")
            res.check(ch.cell_certificate(coords) == v, "charts", "cell_certificate", t,
                      f"coordinate matrix left the cell of v({pi})")
            res.attempt("charts", "stratified_check", t, lambda: ch.stratified_check(pi, p))
            res.checks += 1
            c = _random_coords(rng, pi)
            back = res.attempt("charts", "chart_inverse", t, lambda: ch.chart_inverse(pi, ch.chart_forward(c)))
            if back is not None:
                res.check(back == c, "charts", "chart_inverse", t, f"c_pi^-1(c_pi(z)) != z for pi = {pi}")
        matrix[str(pi)] = "pass" if len(res.failures) == before else "fail"
    res.details = {"by_pi": matrix}


def suite_lemma32(res: SuiteResult) -> None:
    n = res.n
    for pi in all_permutations(n):
        P = pi.matrix()
        Ep, Em = ch.patterns(pi)
        res.check(Ep.is_closed() and Em.is_closed(), "charts", "patterns", None, f"pattern not closed for {pi}")
        for t in range(res.trials):
            rng = trial_rng(res.seed, t, f"lemma32:{pi}")
            h = P @ random_unit_lower(rng, n) @ P.transpose()
            res.check(all(x == 1 for x in leading_minors(h) + trailing_minors(h)), "charts", "phi", t,
                      f"patterned element for {pi} has a non-unit corner minor")
            pair = res.attempt("charts", "phi", t, lambda: ch.phi(pi, h))
            if pair is not None:
                res.check(res.attempt("charts", "phi_inv", t, lambda: ch.phi_inv(pi, *pair)) == h, "charts",
                          "phi_inv", t, f"phi_inv(phi(h)) != h for {pi}")
            bp = random_unit_upper(rng, n, Ep.cells)
            cm = random_unit_lower(rng, n, Em.cells)
            h2 = res.attempt("charts", "phi_inv", t, lambda: ch.phi_inv(pi, bp, cm))
            if h2 is not None:
                res.check(ch.phi(pi, h2) == (bp, cm), "charts", "phi", t, f"phi(phi_inv(b+, c-)) mismatch for {pi}")


def load_fixture() -> dict:
    text = resources.files("bruhat_atlas").joinpath("data/fixture_n2.json").read_text(encoding="utf-8")
    return json.loads(text)


def suite_fixture_n2(res: SuiteResult) -> None:
    data = load_fixture()
    labels = []
    for idx, item in enumerate(data["witnesses"]):
        label = Permutation.parse(item["label"])
        labels.append(label)
        p = FlagPoint.from_json(item["point"])
        got = v_of_point(p)
        res.check(got == label, "stratmap", "v_of_point", idx, f"fixture {label}: v(p) = {got}")
    res.check(sorted(labels) == sorted(_ideal(2)), "stratmap", "stratification_poset", None,
              "fixture labels are not the n=2 ideal")
    res.details = {"witnesses": len(labels), "passed": len(labels) - len(res.failures)}


def suite_divisors(res: SuiteResult) -> None:
    n = res.n
    hits = {}
    for k in range(1, 2 * n):
        count = 0
        for t in range(res.trials):
            rng = trial_rng(res.seed, t, f"divisors:{k}")
            p = res.attempt("sampling", "stratum_witness", t, lambda: _sample_point(rng, n))
            if p is None:
                continue
            ok = res.attempt("stratmap", "divisor_test", t, lambda: divisor_test(p, k))
            res.checks += 1
            count += bool(ok)
        hits[f"s{k}"] = count
    res.details = {"on_divisor": hits}
    if n == 2:
        got = mvdk_divisors(2)
        res.check(set(got) == {Permutation.parse(s) for s in ("2143", "1423", "1342")}, "ginv", "mvdk_divisors",
                  None, f"covers of sigma_GS in the ideal are {_perm_json(got)}")


SUITES: dict[str, Callable[[SuiteResult], None]] = {
    "welldef": suite_welldef,
    "prop11-equiv": suite_prop11,
    "ideal-image": suite_ideal_image,
    "kobayashi": suite_kobayashi,
    "ginv": suite_ginv,
    "erratum": suite_erratum,
    "charts": suite_charts,
    "lemma32": suite_lemma32,
    "fixture-n2": suite_fixture_n2,
    "divisors": suite_divisors,
}

DEFAULT_NS: dict[str, tuple[int, ...]] = {
    "welldef": (2, 3),
    "prop11-equiv": (2, 3),
    "ideal-image": (1, 2, 3),
    "kobayashi": (2, 3),
    "ginv": (2, 3),
    "erratum": (2, 3),
    "charts": (2, 3),
    "lemma32": (2, 3),
    "fixture-n2": (2,),
    "divisors": (2, 3),
}


def run_suite(name: str, n: int, seed: int = 0, trials: int = 20) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    if name == "fixture-n2" and n != 2:
        raise ValueError("the fixture-n2 suite only exists for n = 2")
    if n < 1 or trials < 1:
        raise ValueError("n and trials must be positive")
    res = SuiteResult(name, n, seed, trials)
    SUITES[name](res)
    return res


def run_suites(names, ns: tuple[int, ...] | None, seed: int, trials: int) -> dict:
    results = [
        run_suite(name, n, seed, trials)
        for name in names
        for n in (ns if ns is not None and name != "fixture-n2" else DEFAULT_NS[name])
    ]
    return {
        "schema": SCHEMA,
        "passed": all(r.passed for r in results),
        "suites": [r.to_json() for r in results],
    }
