import json

import numpy as np
import pytest

from kronsum import InvalidFamilyError, objective, random_feasible_pair
from kronsum.families import d3_saturating_spec, normal_pair
from kronsum.search import SearchConfig, SearchResult, certify, maximize, parametrization


def test_config_validation():
    with pytest.raises(InvalidFamilyError):
        SearchConfig(d=5, family="family1")
    with pytest.raises(InvalidFamilyError):
        SearchConfig(d=3, family="family2")
    with pytest.raises(InvalidFamilyError):
        SearchConfig(d=4, family="banded")
    with pytest.raises(ValueError):
        SearchConfig(d=4, restarts=0)


def test_config_json_round_trip():
    cfg = SearchConfig(d=5, family="family2", restarts=3, seed=9)
    assert SearchConfig.from_dict(json.loads(json.dumps(cfg.to_dict()))) == cfg


@pytest.mark.parametrize("family,d", [(None, 3), ("normal", 4), ("family1", 4), ("family2", 5)])
def test_parametrization_round_trip(family, d, rng):
    param = parametrization(SearchConfig(d=d, family=family))
    theta = rng.standard_normal(param.size)
    A, B = param.matrices(theta)
    np.testing.assert_allclose(param.vector(A, B), theta)


def test_search_is_reproducible():
    cfg = SearchConfig(d=3, family="normal", restarts=3, max_iters=200, seed=11)
    r1, r2 = maximize(cfg), maximize(cfg)
    assert r1.per_restart_best == r2.per_restart_best
    np.testing.assert_array_equal(r1.best_pair.A, r2.best_pair.A)
    assert json.dumps(r1.to_dict(), sort_keys=True) == json.dumps(r2.to_dict(), sort_keys=True)


def test_search_result_is_feasible_and_consistent():
    res = maximize(SearchConfig(d=4, family="normal", restarts=4, max_iters=300, seed=1))
    assert res.best_pair.is_feasible()
    assert res.best_objective == max(res.per_restart_best) or res.best_objective == pytest.approx(
        max(res.per_restart_best), abs=1e-12)
    assert res.best_objective == pytest.approx(objective(res.best_pair).objective, abs=0)
    for traj in res.trajectories:
        assert np.all(np.diff(traj) >= 0)
    back = SearchResult.from_dict(json.loads(json.dumps(res.to_dict(include_trajectories=True))))
    assert back.best_objective == res.best_objective


def test_family_search_stays_in_family():
    res = maximize(SearchConfig(d=4, family="family1", restarts=2, max_iters=200, seed=2))
    A = np.asarray(res.best_pair.A)
    mask = np.zeros((4, 4), bool)
    mask[[0, 1, 2, 3], [1, 0, 3, 2]] = True
    assert np.all(A[~mask] == 0)


def test_search_reaches_known_value():
    res = maximize(SearchConfig(d=4, family="normal", restarts=10, seed=0))
    assert res.best_objective == pytest.approx(0.5, abs=1e-6)


def test_certify_verdicts(rng):
    assert certify(random_feasible_pair(4, rng)).verdict == "SUPPORTS"
    cert = certify(normal_pair(d3_saturating_spec()))
    assert cert.verdict == "VIOLATES"
    assert cert.pair is not None
    assert cert.objective_svd == pytest.approx(5 / 9, abs=1e-12)
    from kronsum.families import d4_saturating_spec

    cert = certify(normal_pair(d4_saturating_spec()))
    assert cert.verdict == "SATURATES" and cert.feasible
