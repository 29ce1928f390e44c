import random

import pytest
from hypothesis import given, strategies as st

from bruhat_atlas.exactmat import QMatrix, random_invertible_upper, random_matrix, rank
from bruhat_atlas.ginv import (
    GInvariantStratum, descent_criterion, descent_report, fiber_check, g_invariant_catalog,
    is_g_invariant, matrix_closure_membership, mvdk_divisors, rho_from_sigma, sigma_from_rho,
    special_sigmas,
)
from bruhat_atlas.permcomb import PartialPermutation, Permutation, bruhat_leq
from bruhat_atlas.sampling import random_flag_point, stratum_witness
from bruhat_atlas.stratmap import in_ideal, stratification_poset, stratum_membership

P = Permutation.parse
G_INV_N2 = {"1234", "1243", "1324", "1342", "1423", "1432", "3412"}


def test_g_invariant_strata_n2():
    got = {str(w) for w in stratification_poset(2).elements if is_g_invariant(w, 2)}
    assert got == G_INV_N2


@pytest.mark.parametrize("n,count", [(1, 2), (2, 7), (3, 34)])
def test_sigma_from_rho_is_a_bijection_onto_invariant_strata(n, count):
    rhos = PartialPermutation.all(n)
    sigmas = {sigma_from_rho(r) for r in rhos}
    invariant = {w for w in stratification_poset(n).elements if is_g_invariant(w, n)}
    assert len(rhos) == len(sigmas) == len(invariant) == count
    assert sigmas == invariant
    assert all(rho_from_sigma(sigma_from_rho(r), n) == r for r in rhos)


def test_sigma_from_rho_examples():
    assert sigma_from_rho(PartialPermutation(2, frozenset())) == P("3412")
    assert sigma_from_rho(PartialPermutation(2, frozenset({(1, 1)}))) == P("1432")
    assert sigma_from_rho(PartialPermutation(2, frozenset({(1, 1), (2, 2)}))) == P("1234")


def test_g_invariant_stratum_validates_pair():
    rho = PartialPermutation(2, frozenset({(1, 2)}))
    s = GInvariantStratum.from_rho(rho)
    assert s.R == {1} and s.C == {2}
    with pytest.raises(ValueError):
        GInvariantStratum(P("1234"), rho)


def test_special_sigmas():
    assert special_sigmas(2) == (P("1243"), P("1432"))
    assert special_sigmas(3) == (P("123654"), P("126543"))


def test_mvdk_divisors_n2():
    assert set(mvdk_divisors(2)) == {P("2143"), P("1423"), P("1342")}


@pytest.mark.parametrize("n", [2, 3])
def test_corrected_descent_criterion_agrees_exhaustively(n):
    assert descent_report(n)["corrected"] == []


def test_literal_descent_criterion_mismatch_n2():
    assert [str(w) for w in descent_report(2)["literal"]] == ["1324", "1342", "1423", "1432", "3412"]


def test_literal_mismatches_are_invariant_strata_with_descent_at_n():
    rep = descent_report(3)
    expected = [w for w in rep["g_invariant"] if 3 in w.descents() | w.inverse().descents()]
    assert rep["literal"] == expected and len(expected) == 27


def test_descent_variant_name_checked():
    with pytest.raises(ValueError):
        descent_criterion(P("1234"), 2, "bogus")


def _fulton_oracle(X, tau):
    """Closure of B tau B in Mat_n via all southwest submatrix ranks, read directly."""
    n = tau.n
    T = tau.matrix()
    for a in range(1, n + 1):
        for b in range(1, n + 1):
            rows, cols = range(a, n + 1), range(1, b + 1)
            if rank(X.submatrix(rows, cols)) > rank(T.submatrix(rows, cols)):
                return False
    return True


@given(st.integers(0, 2**32), st.sampled_from([2, 3]))
def test_fiber_check_against_orbit_points(seed, n):
    rng = random.Random(seed)
    rho = rng.choice(PartialPermutation.all(n))
    tau = rho.transpose().times_w0()
    X = random_invertible_upper(rng, n) @ tau.matrix() @ random_invertible_upper(rng, n)
    assert fiber_check(X, rho)
    Y = random_matrix(rng, n)
    assert fiber_check(Y, rho) == matrix_closure_membership(Y, tau) == _fulton_oracle(Y, tau)


def test_fiber_of_zero_stratum_is_zero_matrix():
    rho = PartialPermutation(2, frozenset())
    assert fiber_check(QMatrix.zeros(2), rho)
    assert not fiber_check(QMatrix([[0, 0], [1, 0]]), rho)


@pytest.mark.parametrize("n", [2, 3])
def test_group_action_preserves_exactly_the_invariant_closed_strata(n):
    rng = random.Random(5)
    for w in stratification_poset(n).elements:
        p = stratum_witness(w, n, rng)
        stays = [stratum_membership(p.act(random_flag_point(rng, n).g), w) for _ in range(12)]
        if is_g_invariant(w, n):
            assert all(stays)
        else:
            assert not all(stays)


def test_open_invariant_stratum_can_shrink_under_the_action():
    # the closed stratum is stable, but a point may move into a smaller stratum inside it
    w = P("125463")
    assert is_g_invariant(w, 3)
    assert not is_g_invariant(P("152463"), 3) and bruhat_leq(w, P("152463"))


def test_catalog_rows():
    rows = g_invariant_catalog(2)
    assert [str(r["sigma"]) for r in rows] == ["1234", "1243", "1324", "1342", "1423", "1432", "3412"]
    zero = rows[-1]
    assert zero["dimension"] == 1 and zero["conditions"] == ["X = 0"] and zero["rho"].rank == 0
    assert all(in_ideal(r["sigma"], 2) for r in rows)
