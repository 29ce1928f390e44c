import random

import pytest
from hypothesis import given, strategies as st

from bruhat_atlas.charts import (
    ChartCoords, ChartError, PatternError, cell_certificate, cell_representative, chart_forward,
    chart_inverse, chart_membership, charts_containing, coordinate_patterns, normalize_flag, patterns,
    phi, phi_factors, phi_inv, stratified_check,
)
from bruhat_atlas.exactmat import (
    QMatrix, coset_perm_b_b, leading_minors, random_invertible_upper, random_matrix,
    random_unit_lower, random_unit_upper, trailing_minors,
)
from bruhat_atlas.permcomb import Permutation, all_permutations
from bruhat_atlas.sampling import random_flag_point
from bruhat_atlas.stratmap import FlagPoint, point_stratum_perm, v_of_point

P = Permutation.parse
pis = st.sampled_from(all_permutations(2) + all_permutations(3))
seeds = st.integers(0, 2**32)


def test_patterns_for_213():
    Ep, Em = patterns(P("213"))
    assert Ep.cells == {(1, 2)}
    assert Em.cells == {(3, 1), (3, 2)}


def test_patterns_follow_conjugation_for_a_non_involution():
    pi = P("231")
    Ep, Em = patterns(pi)
    Pm = pi.matrix()
    h = Pm @ QMatrix([[1, 0, 0], [2, 1, 0], [3, 5, 1]]) @ Pm.transpose()
    assert h.support() == Ep.cells | Em.cells
    assert Ep.cells == {(a, b) for a in range(1, 4) for b in range(1, 4) if a < b and pi(a) > pi(b)}


@pytest.mark.parametrize("pi", all_permutations(3))
def test_patterns_are_closed(pi):
    for pat in patterns(pi) + coordinate_patterns(pi):
        assert pat.is_closed()


@given(pis, seeds)
def test_patterned_elements_have_unit_corner_minors(pi, seed):
    rng = random.Random(seed)
    Pm = pi.matrix()
    h = Pm @ random_unit_lower(rng, pi.m) @ Pm.transpose()
    assert all(m == 1 for m in leading_minors(h) + trailing_minors(h))


@given(pis, seeds)
def test_phi_round_trips(pi, seed):
    rng = random.Random(seed)
    n = pi.m
    Pm = pi.matrix()
    h = Pm @ random_unit_lower(rng, n) @ Pm.transpose()
    f = phi_factors(pi, h)
    assert f.B_minus @ f.B_plus == h == f.C_plus @ f.C_minus
    assert phi_inv(pi, *phi(pi, h)) == h
    Ep, Em = patterns(pi)
    bp, cm = random_unit_upper(rng, n, Ep.cells), random_unit_lower(rng, n, Em.cells)
    assert phi(pi, phi_inv(pi, bp, cm)) == (bp, cm)


def test_phi_rejects_elements_outside_the_pattern():
    with pytest.raises(PatternError):
        phi(P("12"), QMatrix([[1, 1], [0, 1]]))
    with pytest.raises(PatternError):
        phi_inv(P("12"), QMatrix([[1, 1], [0, 1]]), QMatrix.identity(2))


def test_identity_chart_degenerates():
    g = QMatrix([[1, 0], [3, 1]])
    X = QMatrix([[1, 2], [5, 7]])
    c = chart_inverse(P("12"), FlagPoint(2, g, X))
    assert c.a_prime == QMatrix.identity(2)
    assert c.d_prime == g.inverse()
    assert c.Z == g.inverse() @ X


def test_chart_membership():
    p = FlagPoint(2, QMatrix.identity(2), QMatrix.zeros(2))
    assert charts_containing(p) == [P("12")]
    q = FlagPoint(2, QMatrix([[1, 1], [1, 2]]), QMatrix.zeros(2))
    assert charts_containing(q) == [P("12"), P("21")]
    with pytest.raises(ChartError):
        normalize_flag(P("21"), p)


@given(pis, seeds)
def test_chart_round_trips_and_certificates(pi, seed):
    rng = random.Random(seed)
    n = pi.m
    g = pi.matrix() @ random_unit_lower(rng, n) @ random_invertible_upper(rng, n)
    p = FlagPoint(n, g, random_matrix(rng, n))
    assert chart_membership(pi, p)
    c = chart_inverse(pi, p)
    q = chart_forward(c)
    assert q.X == p.X and normalize_flag(pi, q) == normalize_flag(pi, p)
    assert cell_certificate(c) == point_stratum_perm(pi)
    direct, via = stratified_check(pi, p)
    assert direct == via == v_of_point(p)


@given(pis, seeds)
def test_coordinates_round_trip(pi, seed):
    rng = random.Random(seed)
    n = pi.m
    a_cells, d_cells = coordinate_patterns(pi)
    c = ChartCoords(pi, random_matrix(rng, n), random_unit_lower(rng, n, a_cells.cells),
                    random_unit_lower(rng, n, d_cells.cells))
    assert chart_inverse(pi, chart_forward(c)) == c
    assert ChartCoords.from_json(c.to_json()) == c


def test_coords_validate_patterns():
    pi = P("12")
    with pytest.raises(PatternError):
        ChartCoords(pi, QMatrix.zeros(2), QMatrix([[1, 0], [1, 1]]), QMatrix.identity(2))


@given(seeds)
def test_every_point_lies_in_some_chart(seed):
    p = random_flag_point(random.Random(seed), 3)
    assert charts_containing(p)


@given(seeds)
def test_cell_representative_spans_same_coset(seed):
    rng = random.Random(seed)
    M = random_invertible_upper(rng, 4).transpose() @ random_invertible_upper(rng, 4)
    R = cell_representative(M)
    assert coset_perm_b_b(R) == coset_perm_b_b(M)
    # M^-1 R must be upper triangular
    assert (M.inverse() @ R).is_upper_triangular()
