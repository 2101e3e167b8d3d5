import numpy as np
import pytest

from htcp.hlcp import hlcp_is_unique, solve_hlcp_enumerate


def _ok(A, B, q, p, tol=1e-9):
    return (
        np.max(np.abs(np.minimum(p.x, p.y))) <= tol
        and np.max(np.abs(A @ p.x - B @ p.y - q)) <= tol
    )


def test_identity_pair_splits_q():
    I = np.eye(2)
    res = solve_hlcp_enumerate(I, I, np.array([1.0, -2.0]))
    assert len(res.solutions) == 1 and not res.degenerate_patterns
    s = res.solutions[0]
    assert np.array_equal(s.x, [1.0, 0.0]) and np.array_equal(s.y, [0.0, 2.0])


def test_p_matrix_b_unique_by_hand():
    # x ^ y = 0, x - B y = q with B = [[2,1],[0,1]], q = (-1,-1).
    # Pattern "x free nowhere": -B y = q -> y = (0, 1). Other patterns violate signs.
    A, B, q = np.eye(2), np.array([[2.0, 1.0], [0.0, 1.0]]), np.array([-1.0, -1.0])
    res = solve_hlcp_enumerate(A, B, q)
    assert len(res.solutions) == 1
    s = res.solutions[0]
    assert np.allclose(s.x, [0.0, 0.0]) and np.allclose(s.y, [0.0, 1.0]) and _ok(A, B, q, s)


def test_degenerate_pattern_flagged():
    A, B = np.array([[1.0, 0.0], [0.0, 0.0]]), np.eye(2)
    res = solve_hlcp_enumerate(A, B, np.zeros(2))
    assert any(np.allclose(s.z, 0) for s in res.solutions)
    assert res.degenerate_patterns
    unique, sols = hlcp_is_unique(A, B, np.zeros(2))
    assert not unique and sols


def test_uniqueness_examples():
    I = np.eye(2)
    assert hlcp_is_unique(I, I, np.array([1.0, -2.0]))[0]
    unique, sols = hlcp_is_unique(I, -I, np.zeros(2))
    assert unique and np.allclose(sols[0].z, 0)


def test_identity_pair_random_q(rng):
    I = np.eye(3)
    for _ in range(100):
        q = rng.normal(size=3)
        res = solve_hlcp_enumerate(I, I, q)
        assert len(res.solutions) == 1
        assert np.allclose(res.solutions[0].x, np.maximum(q, 0), atol=1e-12)
        assert np.allclose(res.solutions[0].y, np.maximum(-q, 0), atol=1e-12)


def test_solutions_satisfy_residuals_and_permutation_invariance(rng):
    for _ in range(30):
        n = 3
        A, B, q = rng.normal(size=(n, n)), rng.normal(size=(n, n)), rng.normal(size=n)
        res = solve_hlcp_enumerate(A, B, q)
        assert all(_ok(A, B, q, s) for s in res.solutions)
        perm = rng.permutation(n)
        P = np.eye(n)[perm]
        res_p = solve_hlcp_enumerate(P @ A @ P.T, P @ B @ P.T, P @ q)
        back = sorted(tuple(np.round(np.concatenate([P.T @ s.x, P.T @ s.y]), 8)) for s in res_p.solutions)
        assert back == sorted(tuple(np.round(s.z, 8)) for s in res.solutions)


def test_guard_and_dims():
    with pytest.raises(ValueError):
        solve_hlcp_enumerate(np.eye(25), np.eye(25), np.zeros(25))
    with pytest.raises(ValueError):
        solve_hlcp_enumerate(np.eye(2), np.eye(3), np.zeros(2))
