import random
from collections import Counter

import pytest
from hypothesis import given, strategies as st

from bruhat_atlas.exactmat import QMatrix, SingularMatrixError, nw_rank_table, rank
from bruhat_atlas.permcomb import (
    Permutation, all_permutations, bruhat_leq, hasse_covers_by_definition, order_ideal_by_filter,
    simple_reflection,
)
from bruhat_atlas.sampling import random_flag_point, random_upper_borel, stratum_witness, trial_rng
from bruhat_atlas.stratmap import (
    FlagPoint, MAX_DESK_N, ResourceGuardError, ambient_dimension, assemble, big_ranks_from_statistics,
    divisor_predicate, divisor_test, ideal_generators, ideal_violation, in_ideal, membership_three_ways,
    pi_flag, point_stratum_perm, quadrant_statistics, readable_conditions, statistics_from_big_ranks,
    stratification_poset, stratum_dimension, stratum_membership, stratum_report, v_of_point, w0_matrix,
)

P = Permutation.parse
seeds = st.integers(0, 2**32)


def point(g, X):
    return FlagPoint.make(QMatrix(g), QMatrix(X))


# --- v on explicit points ---------------------------------------------------


def test_standard_flag_zero_matrix():
    assert v_of_point(point([[1, 0], [0, 1]], [[0, 0], [0, 0]])) == P("3421")


def test_antistandard_flag_zero_matrix():
    assert v_of_point(FlagPoint(2, w0_matrix(2), QMatrix.zeros(2))) == P("4312")


def test_generic_point_is_in_open_stratum():
    assert v_of_point(point([[1, 0], [0, 1]], [[1, 2], [3, 5]])) == P("1234")


def test_identity_matrix_preserves_flag():
    assert v_of_point(point([[1, 0], [0, 1]], [[1, 0], [0, 1]])) == P("1243")


def test_nilpotent_upper_triangular_point():
    # X e1 = 0 and im X = E^1, so X is nilpotent with F^1 = ker X = im X
    p = point([[1, 0], [0, 1]], [[0, 1], [0, 0]])
    v = v_of_point(p)
    assert v == P("2431")
    assert stratum_membership(p, P("1432"))
    assert [k for k in range(1, 4) if divisor_predicate(p, k)] == [1, 2, 3]


def test_n1_strata():
    assert v_of_point(point([[1]], [[0]])) == P("21")
    assert v_of_point(point([[5]], [[3]])) == P("12")


def test_singular_flag_rejected():
    with pytest.raises(SingularMatrixError):
        point([[1, 2], [2, 4]], [[0, 0], [0, 0]])


def test_flag_point_json_round_trip():
    p = point([[2, 1], [1, 1]], [["1/2", 0], [3, -1]])
    assert FlagPoint.from_json(p.to_json()) == p


def test_assemble_shape():
    p = point([[1, 0], [0, 1]], [[1, 2], [3, 4]])
    M = assemble(p)
    assert M.submatrix([1, 2], [1, 2]) == p.X
    assert M.submatrix([3, 4], [3, 4]).is_zero()
    assert M.submatrix([3, 4], [1, 2]) == w0_matrix(2) @ p.g.inverse()


# --- point strata and the ideal -------------------------------------------


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_point_strata_lengths_and_coset_agreement(n):
    for pi in all_permutations(n):
        v = point_stratum_perm(pi)
        assert v.length == ambient_dimension(n) == n * n + n * (n - 1) // 2
        assert v_of_point(FlagPoint(n, pi_flag(pi), QMatrix.zeros(n))) == v


def test_point_stratum_examples():
    assert point_stratum_perm(P("123")) == P("456321")
    assert point_stratum_perm(P("12")) == P("3421")
    assert point_stratum_perm(P("21")) == P("4312")


def test_ideal_n2_is_s4_minus_two():
    poset = stratification_poset(2)
    assert set(all_permutations(4)) - set(poset.elements) == {P("4321"), P("4231")}
    assert set(poset.covers) == hasse_covers_by_definition(poset.elements)


def test_ideal_n2_histogram_from_length_grading():
    poset = stratification_poset(2)
    hist = Counter(stratum_dimension(w, 2) for w in poset.elements)
    assert [hist[d] for d in range(6)] == [2, 5, 6, 5, 3, 1]


def test_ideal_n3_matches_filter_count():
    poset = stratification_poset(3)
    assert len(poset) == 630
    assert poset.elements == order_ideal_by_filter(ideal_generators(3))


def test_resource_guard():
    with pytest.raises(ResourceGuardError):
        stratification_poset(MAX_DESK_N + 1)


def test_ideal_violation_names_bounds():
    assert ideal_violation(P("3421"), 2) is None
    msg = ideal_violation(P("4321"), 2)
    assert "4321" in msg and "3421" in msg and "4312" in msg and "r_w" in msg


@given(seeds)
def test_v_lands_in_ideal(seed):
    rng = random.Random(seed)
    p = random_flag_point(rng, 3)
    if rng.random() < 0.5:
        p = FlagPoint(3, p.g, QMatrix.zeros(3))
    assert in_ideal(v_of_point(p), 3)


# --- statistics and well-definedness ----------------------------------------


@given(seeds, st.sampled_from([1, 2, 3]))
def test_statistics_reproduce_rank_table(seed, n):
    rng = random.Random(seed)
    p = stratum_witness(rng.choice(stratification_poset(n).elements), n, rng)
    stats = quadrant_statistics(p)
    R = nw_rank_table(assemble(p))
    assert big_ranks_from_statistics(stats, n) == [list(r) for r in R.table]
    assert statistics_from_big_ranks(R, n) == stats


def test_nw_statistic_is_a_submatrix_rank():
    rng = random.Random(3)
    p = random_flag_point(rng, 3)
    stats = quadrant_statistics(p)
    for i in range(1, 4):
        for j in range(1, 4):
            assert stats["NW"][i - 1][j - 1] == rank(p.X.nw(i, j))


@given(seeds, st.sampled_from([2, 3]))
def test_v_is_well_defined_on_cosets(seed, n):
    rng = random.Random(seed)
    p = stratum_witness(rng.choice(stratification_poset(n).elements), n, rng)
    q = FlagPoint(n, p.g @ random_upper_borel(rng, n), p.X)
    assert v_of_point(q) == v_of_point(p)
    assert quadrant_statistics(q) == quadrant_statistics(p)


@given(seeds)
def test_three_membership_tests_agree(seed):
    rng = random.Random(seed)
    ideal = stratification_poset(2).elements
    p = stratum_witness(rng.choice(ideal), 2, rng)
    for w in ideal:
        a, b, c = membership_three_ways(p, w)
        assert a == b == c == bruhat_leq(w, v_of_point(p))


# --- divisors ----------------------------------------------------------------


@pytest.mark.parametrize("n", [2, 3])
def test_divisor_equations_match_bruhat_order(n):
    seen = Counter()
    for t in range(60):
        rng = trial_rng(11, t, "divisor-test")
        if t % 2:
            p = random_flag_point(rng, n)
        else:
            p = stratum_witness(rng.choice(stratification_poset(n).elements), n, rng)
        for k in range(1, 2 * n):
            seen[k, divisor_test(p, k)] += 1
    assert all(seen[k, True] and seen[k, False] for k in range(1, 2 * n))


def test_divisor_index_range():
    with pytest.raises(ValueError):
        divisor_predicate(point([[1, 0], [0, 1]], [[0, 0], [0, 0]]), 4)


def test_divisor_membership_is_bruhat_order_at_simple_reflection():
    p = point([[1, 0], [0, 1]], [[0, 5], [1, 0]])
    assert divisor_predicate(p, 1)
    assert stratum_membership(p, simple_reflection(1, 4))
    assert not divisor_predicate(p, 2)


# --- reports -----------------------------------------------------------------


def test_readable_conditions_examples():
    assert readable_conditions(P("2134")) == ["x₁₁ = 0"]
    assert readable_conditions(P("1324")) == ["det X = 0"]
    assert readable_conditions(P("3412")) == ["X = 0"]
    assert readable_conditions(P("1243")) == ["rank(F¹ →X→ 𝔸²/F¹) < 1"]


def test_stratum_report_for_1432():
    rep = stratum_report(P("1432"))
    assert rep.dimension == 2 and rep.length == 3
    assert rep.g_invariant and str(rep.rho) == "E11"
    assert rep.special == "Springer space Y_Spr"
    doc = rep.to_json()
    assert doc["w"] == [1, 4, 3, 2] and doc["rho"] == {"n": 2, "ones": [[1, 1]]}
    assert "dimension   2" in rep.to_text()


def test_stratum_report_for_open_stratum():
    rep = stratum_report(P("1234"))
    assert rep.conditions == [] and "open stratum" in rep.to_text()
