import json
from fractions import Fraction

import numpy as np
import pytest

from kronsum import ConstraintViolation, objective
from kronsum.families import (
    Family1Spec,
    Family2Spec,
    NormalSpec,
    cyclic_shift,
    d3_saturating_spec,
    d4_saturating_spec,
    family1_blocks,
    family1_blocks_eigs,
    family1_eigs_closed_form,
    family1_matrices,
    family2_lambda1_bound,
    family2_matrices,
    family2_rank1_eigs,
    normal_objective,
    normal_pair,
    pp_ab_maximizer,
    pp_ab_maximum,
    pp_ab_value,
    random_derangement,
    random_family1_spec,
    random_family2_spec,
    random_normal_spec,
    random_rank1_instance,
    rank1_pair,
    spec_from_dict,
)
from kronsum.families._quadratic import psd_quadratic_roots
from kronsum.families.family2 import check_derangement


def _dense(pair):
    return np.array(objective(pair).singular_values_sq)


# --- normal family -------------------------------------------------------


@pytest.mark.parametrize("d", [3, 4, 5, 7])
def test_normal_objective_matches_dense(d, rng):
    for _ in range(30):
        spec = random_normal_spec(d, rng)
        assert normal_objective(spec) == pytest.approx(objective(normal_pair(spec)).objective, abs=1e-12)


def test_normal_spec_validation():
    with pytest.raises(ConstraintViolation):
        NormalSpec(3, [1, 0, 0], [0, 0, 0])
    with pytest.raises(ValueError):
        NormalSpec(3, [0, 0], [0, 0, 0])


def test_reference_pairs():
    assert objective(normal_pair(d3_saturating_spec())).objective == pytest.approx(5 / 9, abs=1e-12)
    assert objective(normal_pair(d4_saturating_spec())).objective == pytest.approx(0.5, abs=1e-12)


def test_pp_ab_exact_values():
    assert pp_ab_maximum(3, exact=True) == Fraction(5, 9)
    assert pp_ab_maximum(4, exact=True) == Fraction(1, 2)
    assert pp_ab_maximum(5, exact=True) == Fraction(11, 25)
    with pytest.raises(ValueError):
        pp_ab_maximum(2)


@pytest.mark.parametrize("d", range(3, 9))
def test_pp_ab_maximizer_attains(d):
    assert pp_ab_value(pp_ab_maximizer(d)) == pytest.approx(pp_ab_maximum(d), abs=1e-12)


@pytest.mark.parametrize("d", [3, 4, 6])
def test_pp_ab_is_an_upper_bound(d, rng):
    cap = pp_ab_maximum(d)
    for _ in range(500):
        assert pp_ab_value(random_normal_spec(d, rng)) <= cap + 1e-12


def test_normal_json_round_trip(rng):
    spec = random_normal_spec(4, rng)
    assert spec_from_dict(json.loads(json.dumps(spec.to_dict()))) == spec


# --- family 1 ------------------------------------------------------------


def test_family1_structure(rng):
    spec = random_family1_spec(rng)
    pair = family1_matrices(spec)
    A = pair.A
    assert A[0, 1] == spec.a[0] and A[1, 0] == spec.a[1]
    assert A[2, 3] == spec.a[2] and A[3, 2] == spec.a[3]
    assert np.count_nonzero(A) == 4
    assert pair.is_feasible()


def test_family1_closed_form_matches_dense(rng):
    for _ in range(200):
        spec = random_family1_spec(rng)
        err = np.max(np.abs(family1_eigs_closed_form(spec) - _dense(family1_matrices(spec))))
        assert err <= 1e-10


def test_family1_blocks_match_dense(rng):
    for _ in range(200):
        spec = random_family1_spec(rng, b_is_diagonal=True)
        blocks = family1_blocks(spec)
        assert len(blocks) == 8
        for M in blocks:
            np.testing.assert_allclose(M, M.conj().T)
        err = np.max(np.abs(family1_blocks_eigs(spec) - _dense(family1_matrices(spec))))
        assert err <= 1e-10


def test_family1_wrong_variant():
    spec = random_family1_spec(1, b_is_diagonal=True)
    with pytest.raises(ValueError):
        family1_eigs_closed_form(spec)
    with pytest.raises(ValueError):
        family1_blocks(random_family1_spec(1))


def test_family1_validation():
    with pytest.raises(ConstraintViolation):
        Family1Spec([0.5, 0, 0, 0], [0.1, 0, 0, 0])
    with pytest.raises(ConstraintViolation):
        Family1Spec([0, 0, 0, 0], [0.5, 0, 0, 0], b_is_diagonal=True)


def test_family1_json_round_trip(rng):
    spec = random_family1_spec(rng, b_is_diagonal=True)
    assert spec_from_dict(json.loads(json.dumps(spec.to_dict()))) == spec


# --- family 2 ------------------------------------------------------------


def test_derangements(rng):
    assert cyclic_shift(4) == (1, 2, 3, 0)
    for _ in range(50):
        p = random_derangement(6, rng)
        assert sorted(p) == list(range(6))
        assert all(p[k] != k for k in range(6))
    with pytest.raises(ValueError):
        check_derangement((0, 2, 1, 3), 4)
    with pytest.raises(ValueError):
        check_derangement((1, 1, 3, 0), 4)


def test_family2_structure(rng):
    spec = random_family2_spec(5, rng)
    pair = family2_matrices(spec)
    for k in range(5):
        assert pair.A[k, spec.sigma[k]] == spec.a[k]
        assert pair.B[k, spec.tau[k]] == spec.b[k]
    assert np.count_nonzero(pair.A) == 5
    assert pair.is_feasible()


@pytest.mark.parametrize("d", [4, 5, 6, 8])
def test_rank1_closed_form(d, rng):
    for _ in range(50):
        a, b, tau = random_rank1_instance(d, rng)
        err = np.max(np.abs(family2_rank1_eigs(d, a, b, tau) - _dense(rank1_pair(d, a, b, tau))))
        assert err <= 1e-10


def test_rank1_extremal():
    for d in range(4, 9):
        eigs = family2_rank1_eigs(d, 1 / np.sqrt(d), np.zeros(d), cyclic_shift(d))
        assert eigs[0] + eigs[1] == pytest.approx(2 / d, abs=1e-15)


@pytest.mark.parametrize("d", [4, 5, 6, 7])
def test_lambda1_bound_dominates(d, rng):
    for _ in range(100):
        spec = random_family2_spec(d, rng)
        assert family2_lambda1_bound(spec) >= _dense(family2_matrices(spec))[0] - 1e-12


@pytest.mark.parametrize("d", [6, 7, 8])
def test_lambda1_bound_cap(d, rng):
    for _ in range(200):
        assert family2_lambda1_bound(random_family2_spec(d, rng)) <= 1.5 / d + 1e-9


def test_family2_json_is_one_based(rng):
    spec = random_family2_spec(5, rng)
    obj = json.loads(json.dumps(spec.to_dict()))
    assert min(obj["sigma"]) == 1 and max(obj["tau"]) == 5
    assert spec_from_dict(obj) == spec


def test_family2_validation():
    with pytest.raises(ValueError):
        Family2Spec(3, [0] * 3, [0] * 3, (1, 2, 0), (1, 2, 0))


def test_spec_from_dict_unknown():
    with pytest.raises(ValueError):
        spec_from_dict({"family": "family3"})


# --- quadratic helper ----------------------------------------------------


def test_psd_quadratic_roots_stable():
    big, small = psd_quadratic_roots(1.0, 1e-20, 0.0)
    assert big == 1.0 and small == pytest.approx(1e-20, rel=1e-12)
    big, small = psd_quadratic_roots(2.0, 3.0, 1.0)
    np.testing.assert_allclose(sorted([big, small]), sorted(np.roots([1, -5, 5])))
    big, small = psd_quadratic_roots(0.0, 0.0, 0.0)
    assert big == 0 and small == 0
