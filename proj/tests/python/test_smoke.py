import math

import numpy as np
import pytest

import ncball


def famous_tuple():
    R = ncball.famous_realization()
    return R.A


def test_row_radius_matches_transfer_matrix():
    rng = np.random.default_rng(3)
    X = [rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)) for _ in range(2)]
    phi = sum(np.kron(x.conj(), x) for x in X)
    expected = math.sqrt(max(abs(np.linalg.eigvals(phi))))
    est = ncball.rho_row_exact(X)
    assert abs(est["lower"] - expected) < 1e-9
    assert abs(est["upper"] - expected) < 1e-9


def test_polydisc_radius_of_famous_tuple():
    est = ncball.rho_estimate(ncball.Space.min_linf(2), famous_tuple(), witness=False)
    assert abs(est["lower"] - 0.5) < 1e-9
    assert est["upper"] - est["lower"] <= 1e-6


def test_holder_jordan_components():
    hj = ncball.holder_jordan(famous_tuple())
    pairs = sorted(tuple(round(c[j][0, 0].real, 9) for j in range(2)) for c in hj["components"])
    assert pairs == [(0.0, 0.0), (0.0, 0.0), (0.5, 0.5)]


def test_decide_jordan_block_is_boundary():
    J = [np.array([[1, 1], [0, 1]], dtype=complex)]
    dec = ncball.decide_similarity_to_ball(ncball.Space.row(1), J)
    assert dec["verdict"] == "boundary"


def test_similarity_witness_is_returned_as_matrix():
    X = [np.array([[0.5, 3.0], [0.0, 0.2]], dtype=complex)]
    w = ncball.minimize_conjugated_norm(ncball.Space.row(1), X, restarts=2)
    S = w["S"]
    Y = np.linalg.solve(S, X[0] @ S)
    assert abs(np.linalg.norm(Y, 2) - w["achieved_norm"]) < 1e-9
    assert w["achieved_norm"] < 0.51


def test_realization_round_trip():
    text = "(2*x1*x2 - x1 - x2) * inv(2 - x1 - x2)"
    R = ncball.realize(text, 2, minimize=True)
    assert R.state_dim == 3
    z, w = 0.3 + 0.1j, -0.2 + 0.4j
    val = ncball.eval_realization(R, [np.array([[z]]), np.array([[w]])])[0, 0]
    assert abs(val - ncball.famous_scalar_value(z, w)) < 1e-12
    again = ncball.Realization.from_json(R.to_json())
    assert np.array_equal(again.b, R.b)


def test_outside_domain_raises_with_sigma_min():
    R = ncball.famous_realization()
    one = [np.eye(1, dtype=complex), np.eye(1, dtype=complex)]
    assert not ncball.domain_contains(R, one)
    with pytest.raises(ncball.OutsideDomainError) as info:
        ncball.eval_realization(R, one)
    assert info.value.sigma_min <= 1e-12
    assert info.value.code == "outside-domain"


def test_errors_carry_codes():
    with pytest.raises(ncball.NcballError) as info:
        ncball.parse_expr("x1 + * x2", 2)
    assert info.value.code == "syntax"
    with pytest.raises(ncball.NcballError):
        ncball.Space.pencil([np.eye(2), np.eye(2)])


def test_case_study_checks():
    assert ncball.word_power_check(10) <= 1e-12
    assert abs(ncball.word_sum_norm(8) - 1) < 1e-10
    assert ncball.lemma_T_check(5, 20)["max_violation"] <= 1e-9
    cert = ncball.domain_ball_certificate(ncball.famous_realization(), ncball.Space.max_l1(2))
    assert abs(cert["exclusion_radius"] - 2.0) < 1e-6
