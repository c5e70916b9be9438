import json

import numpy as np
import pytest

from kronsum import ConstrainedPair, ConstraintViolation, build_x, h_split, objective, random_feasible_pair, top_two_sum
from kronsum.exceptions import NotHermitianError
from kronsum.spectrum import SpectrumReport, check_hermitian, eigvalsh_desc, objective_unchecked, objective_value


def test_objective_matches_svd(rng):
    for d in (3, 4, 5):
        for _ in range(10):
            pair = random_feasible_pair(d, rng)
            s = np.linalg.svd(build_x(pair), compute_uv=False)
            rep = objective(pair)
            assert rep.objective == pytest.approx(s[0] ** 2 + s[1] ** 2, abs=1e-12)
            np.testing.assert_allclose(rep.singular_values_sq, s ** 2, atol=1e-12)


def test_report_invariants(rng):
    pair = random_feasible_pair(4, rng)
    rep = objective(pair)
    vals = np.array(rep.singular_values_sq)
    assert len(vals) == 16
    assert np.all(vals >= 0)
    assert np.all(np.diff(vals) <= 0)
    # trace of X^H X is d (tr A^H A + tr B^H B) = 1
    assert rep.trace_check == pytest.approx(1.0, abs=1e-12)
    assert rep.objective == vals[0] + vals[1]


def test_trivial_upper_bound(rng):
    for _ in range(50):
        pair = random_feasible_pair(3, rng)
        assert objective(pair).objective <= 1.0 + 1e-12


def test_report_json_round_trip(rng):
    rep = objective(random_feasible_pair(3, rng))
    back = SpectrumReport.from_dict(json.loads(json.dumps(rep.to_dict())))
    assert back == rep


def test_objective_rejects_infeasible():
    with pytest.raises(ConstraintViolation):
        objective(ConstrainedPair.unchecked(np.eye(3), np.eye(3)))


def test_fast_path_agrees(rng):
    for _ in range(20):
        pair = random_feasible_pair(4, rng)
        assert objective_value(pair.A, pair.B) == pytest.approx(objective(pair).objective, abs=1e-13)
        assert objective_unchecked(pair.A, pair.B).objective == pytest.approx(objective(pair).objective, abs=1e-13)


def test_eigvalsh_desc_and_hermitian_check():
    np.testing.assert_array_equal(eigvalsh_desc(np.diag([1.0, 3.0, 2.0])), [3.0, 2.0, 1.0])
    with pytest.raises(NotHermitianError):
        check_hermitian(np.array([[0, 1], [0, 0]], complex))
    with pytest.raises(ValueError):
        check_hermitian(np.zeros((2, 3)))


def test_h_split_sums_to_gram(rng):
    pair = random_feasible_pair(4, rng)
    split = h_split(pair)
    X = build_x(pair)
    np.testing.assert_allclose(split.H1 + split.H2, X.conj().T @ X, atol=1e-14)
    np.testing.assert_allclose(split.H1, split.H1.conj().T)
    np.testing.assert_allclose(split.H2, split.H2.conj().T)
    assert top_two_sum(split.H1 + split.H2) == pytest.approx(objective(pair).objective, abs=1e-13)


def test_top_two_sum():
    assert top_two_sum(np.diag([1.0, 5.0, -2.0, 4.0])) == 9.0
    with pytest.raises(ValueError):
        top_two_sum(np.ones((1, 1)))
