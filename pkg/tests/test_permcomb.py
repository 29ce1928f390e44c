import json
from itertools import product

import pytest
from hypothesis import given, strategies as st

from bruhat_atlas.permcomb import (
    PartialPermutation, Permutation, all_permutations, bigrassmannian, bruhat_leq, bruhat_leq_subword,
    covers_down, covers_up, diagram, essential_set, hasse_covers_by_definition, identity,
    is_bigrassmannian, longest, max_bigrassmannians_below, max_bigrassmannians_below_bruteforce,
    order_ideal, order_ideal_by_filter, reduced_word, simple_reflection,
)

from helpers import inversions

S4 = all_permutations(4)
perms5 = st.permutations(range(1, 6)).map(lambda w: Permutation(tuple(w)))


@pytest.mark.parametrize("text", ["3421", "3 4 2 1", "3,4,2,1", "[3, 4, 2, 1]"])
def test_parse_forms(text):
    assert Permutation.parse(text) == Permutation((3, 4, 2, 1))


def test_parse_list_and_reject_non_permutations():
    assert Permutation.parse([2, 1]) == Permutation((2, 1))
    with pytest.raises(ValueError):
        Permutation.parse("1224")


def test_composition_convention():
    u, v = Permutation.parse("231"), Permutation.parse("213")
    assert u.compose(v)(1) == u(v(1))
    assert u.compose(u.inverse()) == identity(3)


@given(perms5)
def test_length_counts_inversions(w):
    assert w.length == inversions(w.word) == len(reduced_word(w))


@given(perms5, perms5)
def test_matrix_is_a_homomorphism_up_to_inverse(u, v):
    # P_w has a 1 at (i, w(i)), so P_u P_v = P_{v u}
    assert u.matrix() @ v.matrix() == v.compose(u).matrix()


def test_bruhat_order_matches_subword_oracle_on_s4():
    for w, u in product(S4, S4):
        assert bruhat_leq(w, u) == bruhat_leq_subword(w, u)


@given(perms5, perms5)
def test_bruhat_order_matches_subword_oracle_on_s5(w, u):
    assert bruhat_leq(w, u) == bruhat_leq_subword(w, u)


def test_identity_minimal_longest_maximal():
    e, w0 = identity(4), longest(4)
    assert all(bruhat_leq(e, w) and bruhat_leq(w, w0) for w in S4)


def test_covers_match_length_definition():
    expected = hasse_covers_by_definition(S4)
    got = {(u, w) for w in S4 for u in covers_down(w)}
    assert got == expected
    assert {(w, u) for w in S4 for u in covers_up(w)} == expected


def test_diagram_and_essential_set_examples():
    w = Permutation.parse("1432")
    assert diagram(w) == {(2, 2), (2, 3), (3, 2)}
    assert essential_set(w) == {(2, 3), (3, 2)}
    assert essential_set(identity(4)) == frozenset()
    assert essential_set(Permutation.parse("3412")) == {(2, 2)}


@given(perms5)
def test_diagram_size_is_length(w):
    assert len(diagram(w)) == w.length


def test_bigrassmannian_constructor_and_range():
    g = bigrassmannian(2, 2, 0, 4)
    assert g == Permutation.parse("3412") and is_bigrassmannian(g)
    assert essential_set(g) == {(2, 2)} and g.r(2, 2) == 0
    with pytest.raises(ValueError):
        bigrassmannian(2, 2, 2, 4)


def test_max_bigrassmannians_match_bruteforce_on_s4():
    for w in S4:
        assert max_bigrassmannians_below(w) == max_bigrassmannians_below_bruteforce(w)


@given(perms5)
def test_max_bigrassmannians_match_bruteforce_on_s5(w):
    assert max_bigrassmannians_below(w) == max_bigrassmannians_below_bruteforce(w)


@given(perms5, perms5)
def test_bigrassmannian_criterion(w, u):
    assert bruhat_leq(w, u) == all(bruhat_leq(g, u) for g in max_bigrassmannians_below(w))


def test_simple_reflection():
    assert simple_reflection(2, 4) == Permutation.parse("1324")
    assert max_bigrassmannians_below(simple_reflection(2, 4)) == {simple_reflection(2, 4)}


def test_order_ideal_bfs_matches_filter():
    gens = [Permutation.parse("3421"), Permutation.parse("4312")]
    poset = order_ideal(gens)
    assert poset.elements == order_ideal_by_filter(gens)
    assert set(poset.covers) == hasse_covers_by_definition(poset.elements)
    assert sorted(poset.maximal()) == sorted(gens)


def test_order_ideal_json_round_trips():
    poset = order_ideal([Permutation.parse("21")])
    doc = json.loads(json.dumps(poset.to_json()))
    assert doc == {"elements": [[1, 2], [2, 1]], "covers": [[[1, 2], [2, 1]]]}


@pytest.mark.parametrize("n,count", [(1, 2), (2, 7), (3, 34), (4, 209)])
def test_partial_permutation_counts(n, count):
    assert len(PartialPermutation.all(n)) == count


def test_partial_permutation_ops():
    rho = PartialPermutation(2, frozenset({(1, 2)}))
    assert rho.rank == 1 and str(rho) == "E12"
    assert rho.transpose() == PartialPermutation(2, frozenset({(2, 1)}))
    assert rho.times_w0() == PartialPermutation(2, frozenset({(1, 1)}))
    assert PartialPermutation.from_json(rho.to_json()) == rho
    with pytest.raises(ValueError):
        PartialPermutation(2, frozenset({(1, 1), (1, 2)}))
