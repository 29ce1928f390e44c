import json

import pytest

from bruhat_atlas import verify
from bruhat_atlas.verify import DEFAULT_NS, SUITES, load_fixture, run_suite, run_suites


@pytest.mark.parametrize("name", sorted(SUITES))
def test_every_suite_passes_small(name):
    for n in DEFAULT_NS[name]:
        res = run_suite(name, n, seed=3, trials=4)
        assert res.passed, res.failures
        assert res.checks > 0


def test_output_is_byte_identical_for_same_seed():
    a = json.dumps(run_suites(["welldef", "charts"], (2,), 9, 5), sort_keys=True)
    b = json.dumps(run_suites(["welldef", "charts"], (2,), 9, 5), sort_keys=True)
    assert a == b
    assert json.loads(a)["schema"] == 1


def test_different_seeds_draw_different_points():
    a = run_suite("divisors", 2, 1, 30).details
    b = run_suite("divisors", 2, 2, 30).details
    assert a != b


def test_unknown_suite_rejected():
    with pytest.raises(KeyError):
        run_suite("nope", 2)


def test_fixture_suite_only_for_n2():
    with pytest.raises(ValueError):
        run_suite("fixture-n2", 3)


def test_fixture_has_22_witnesses():
    data = load_fixture()
    assert data["schema"] == 1 and len(data["witnesses"]) == 22
    res = run_suite("fixture-n2", 2)
    assert res.details == {"witnesses": 22, "passed": 22}


def test_failures_name_module_operation_seed_and_trial(monkeypatch):
    real = verify.quadrant_statistics
    calls = {"k": 0}

    def flaky(p):
        calls["k"] += 1
        stats = real(p)
        if calls["k"] == 4:
            stats["NW"][0][0] += 1
        return stats

    monkeypatch.setattr(verify, "quadrant_statistics", flaky)
    res = run_suite("welldef", 2, seed=42, trials=3)
    assert not res.passed
    (f,) = res.failures
    assert f == {"module": "stratmap", "op": "quadrant_statistics", "seed": 42, "trial": 1,
                 "message": "statistics changed under g -> g b"}


def test_erratum_details():
    res = run_suite("erratum", 2)
    assert res.passed
    assert res.details["literal_mismatch"] == ["1324", "1342", "1423", "1432", "3412"]
    assert res.details["corrected_mismatch"] == []


def test_charts_matrix_by_pi():
    res = run_suite("charts", 3, seed=7, trials=3)
    assert res.details["by_pi"] == {p: "pass" for p in ["123", "132", "213", "231", "312", "321"]}
