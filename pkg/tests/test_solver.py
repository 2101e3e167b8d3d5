import numpy as np
import pytest

from conftest import odd_p_pair
from htcp.classifiers import check_r0_pair
from htcp.hlcp import solve_hlcp_enumerate
from htcp.solution import make_pair
from htcp.solver import (
    GuardExceeded,
    HTCPInstance,
    SolverConfig,
    Status,
    generalized_jacobian,
    residual,
    scale_instance,
    scale_solution,
    solve,
    solve_homotopy,
    solve_newton,
    solve_newton_multistart,
    solve_pattern_enumeration,
    tcp_bridge_from_htcp,
    tcp_bridge_to_htcp,
    verify_solution,
)
from htcp.tensor import Tensor, apply_power, identity_tensor


def no_solution_instance():
    I3 = identity_tensor(3, 2)
    return HTCPInstance(I3, Tensor(-I3.data), [0.0, -1.0])


def r_instance():
    I4 = identity_tensor(4, 2)
    return HTCPInstance(I4, I4, np.ones(2))


def pair_of(inst, x, y):
    x, y = np.asarray(x, float), np.asarray(y, float)
    return make_pair(x, y, apply_power(inst.A, x) - apply_power(inst.B, y) - inst.q)


def test_instance_validation():
    with pytest.raises(ValueError):
        HTCPInstance(identity_tensor(3, 2), identity_tensor(4, 2), np.zeros(2))
    with pytest.raises(ValueError):
        HTCPInstance(identity_tensor(3, 2), identity_tensor(3, 2), np.zeros(3))
    with pytest.raises(ValueError):
        HTCPInstance(identity_tensor(3, 2), identity_tensor(3, 2), [np.inf, 0])
    with pytest.raises(ValueError):
        SolverConfig(tol_residual=0)
    with pytest.raises(ValueError):
        SolverConfig(multistart_count=0)


def test_residual_examples():
    assert np.array_equal(residual(no_solution_instance(), np.zeros(2), np.zeros(2)), [0, 0, 0, 1])
    A, B = odd_p_pair()
    assert np.array_equal(residual(HTCPInstance(A, B, np.zeros(2)), np.zeros(2), np.zeros(2)), np.zeros(4))
    assert np.array_equal(residual(r_instance(), np.ones(2), np.zeros(2)), np.zeros(4))
    with pytest.raises(ValueError):
        residual(r_instance(), np.ones(3), np.zeros(2))


def test_generalized_jacobian_selection():
    I = np.eye(2)
    inst = HTCPInstance(I, I, np.zeros(2))
    J = generalized_jacobian(inst, np.array([2.0, 0.0]), np.array([0.0, 3.0]))
    assert np.array_equal(J[:2], [[0, 0, 1, 0], [0, 1, 0, 0]])
    J = generalized_jacobian(inst, np.zeros(2), np.zeros(2))
    assert np.array_equal(J[:2], np.hstack([np.eye(2), np.zeros((2, 2))]))
    assert np.all(np.sum(J[:2], axis=1) == 1)


def test_generalized_jacobian_bottom_block_fd(rng):
    for _ in range(20):
        n, m = 2, int(rng.integers(2, 5))
        inst = HTCPInstance(Tensor(rng.normal(size=(n,) * m)), Tensor(rng.normal(size=(n,) * m)), rng.normal(size=n))
        x, y = rng.normal(size=n), rng.normal(size=n)
        J = generalized_jacobian(inst, x, y)[n:]
        z, h = np.concatenate([x, y]), 1e-6
        fd = np.empty((n, 2 * n))
        for j in range(2 * n):
            e = np.zeros(2 * n)
            e[j] = h
            zp, zm = z + e, z - e
            fd[:, j] = (residual(inst, zp[:n], zp[n:])[n:] - residual(inst, zm[:n], zm[n:])[n:]) / (2 * h)
        assert np.linalg.norm(J - fd) <= 1e-5 * np.linalg.norm(J)


def test_newton_examples():
    rep = solve_newton(r_instance(), (np.ones(2), np.ones(2)))
    assert rep.status is Status.FOUND
    assert np.allclose(rep.solutions[0].x, 1.0, atol=1e-9) and np.allclose(rep.solutions[0].y, 0.0)
    I4 = identity_tensor(4, 2)
    rep = solve_newton(HTCPInstance(I4, I4, np.zeros(2)), np.zeros(4))
    assert rep.status is Status.FOUND and rep.effort["iterations"] == 0
    assert np.array_equal(rep.solutions[0].z, np.zeros(4))
    rep = solve_newton_multistart(no_solution_instance())
    assert rep.status is Status.NONE_FOUND and rep.effort["starts"] == 64


def test_homotopy_examples():
    rep = solve_homotopy(r_instance())
    assert rep.status is Status.FOUND and np.allclose(rep.solutions[0].z, [1, 1, 0, 0], atol=1e-9)
    I4 = identity_tensor(4, 2)
    rep = solve_homotopy(HTCPInstance(I4, I4, np.zeros(2)))
    assert np.array_equal(rep.solutions[0].z, np.zeros(4))


def test_homotopy_reports_last_good_point_on_failure():
    rep = solve_homotopy(no_solution_instance())
    assert rep.status is Status.NONE_FOUND
    end = rep.effort["path_end"]
    assert 0.0 <= end["t"] < 1.0 and len(end["z"]) == 4


def test_homotopy_r0_tensor_small_q_contained_in_enumeration(rng):
    hits = 0
    for k in range(10):
        B = Tensor(identity_tensor(4, 2).data + 0.2 * rng.normal(size=(2,) * 4))
        if check_r0_pair(identity_tensor(4, 2), B).refuted:
            continue
        inst = HTCPInstance(identity_tensor(4, 2), B, 0.1 * rng.normal(size=2))
        rep = solve_homotopy(inst, SolverConfig(rng_seed=k))
        enum = solve_pattern_enumeration(inst)
        for s in rep.solutions:
            hits += 1
            assert any(np.max(np.abs(s.z - e.z)) <= 1e-6 for e in enum.solutions)
    assert hits > 0


def test_enumeration_examples():
    rep = solve_pattern_enumeration(no_solution_instance())
    assert rep.status is Status.PROVEN_EMPTY and rep.effort["grid_step"] == 0.05
    rep = solve_pattern_enumeration(r_instance())
    assert len(rep.solutions) == 1 and np.allclose(rep.solutions[0].z, [1, 1, 0, 0], atol=1e-9)
    A, B = odd_p_pair()
    rep = solve_pattern_enumeration(HTCPInstance(A, B, np.zeros(2)))
    assert len(rep.solutions) == 1 and np.array_equal(rep.solutions[0].z, np.zeros(4))


def test_enumeration_guards():
    with pytest.raises(GuardExceeded):
        solve_pattern_enumeration(HTCPInstance(np.eye(13), np.eye(13), np.zeros(13)))
    with pytest.raises(GuardExceeded):
        solve_pattern_enumeration(HTCPInstance(identity_tensor(7, 1), identity_tensor(7, 1), np.zeros(1)))


def test_proven_empty_requires_small_n(rng):
    # Three coordinates of the infeasible odd-order example: never proven empty at n = 3.
    I3 = identity_tensor(3, 3)
    rep = solve_pattern_enumeration(HTCPInstance(I3, Tensor(-I3.data), [0.0, -1.0, 0.0]))
    assert rep.status is Status.NONE_FOUND


def test_verify_solution():
    inst = r_instance()
    assert verify_solution(inst, pair_of(inst, np.ones(2), np.zeros(2)))
    assert not verify_solution(inst, pair_of(inst, np.ones(2), np.ones(2)))
    assert not verify_solution(inst, pair_of(inst, [1.0, -1e-3], [0.0, 1e-3]))


def test_scaling_examples(rng):
    inst = r_instance()
    p = pair_of(inst, np.ones(2), np.zeros(2))
    assert scale_instance(inst, 1.0).q.tolist() == inst.q.tolist()
    s2, p2 = scale_instance(inst, 2.0), scale_solution(p, 2.0)
    assert np.array_equal(s2.q, [8.0, 8.0]) and np.array_equal(p2.x, [2.0, 2.0])
    assert verify_solution(s2, p2)
    with pytest.raises(ValueError):
        scale_instance(inst, 0.0)


def test_scaling_invariant_random(rng):
    count = 0
    while count < 100:
        n, m = int(rng.integers(1, 3)), int(rng.choice([2, 3, 4]))
        inst = HTCPInstance(Tensor(rng.normal(size=(n,) * m)), Tensor(rng.normal(size=(n,) * m)), rng.normal(size=n))
        for p in solve_pattern_enumeration(inst).solutions:
            for mu in (0.5, 2.0, 10.0):
                si, sp = scale_instance(inst, mu), scale_solution(p, mu)
                r = residual(si, sp.x, sp.y)
                assert np.max(np.abs(r)) <= 1e-10 * max(1.0, mu ** (m - 1) * np.max(np.abs(inst.q)))
            count += 1


def test_tcp_bridge(rng):
    I4 = identity_tensor(4, 2)
    p = tcp_bridge_to_htcp(I4, np.ones(2), np.zeros(2))
    assert np.allclose(p.x, 1.0) and np.array_equal(p.y, np.zeros(2))
    p = tcp_bridge_to_htcp(I4, np.zeros(2), np.zeros(2))
    assert np.array_equal(p.z, np.zeros(4))
    with pytest.raises(ValueError):
        tcp_bridge_to_htcp(identity_tensor(3, 2), np.ones(2), np.zeros(2))
    with pytest.raises(ValueError):
        tcp_bridge_to_htcp(I4, -np.ones(2), np.zeros(2))
    for _ in range(5):
        B = Tensor(I4.data + 0.3 * rng.normal(size=(2,) * 4))
        if check_r0_pair(I4, B).refuted:
            continue
        q = rng.normal(size=2)
        for s in solve_pattern_enumeration(HTCPInstance(I4, B, q)).solutions:
            y = tcp_bridge_from_htcp(s)
            w = apply_power(B, y) + q
            assert np.max(np.abs(np.minimum(y, w))) <= 1e-8


def test_m2_enumeration_matches_hlcp(rng):
    for _ in range(30):
        n = int(rng.integers(1, 4))
        A, B, q = rng.normal(size=(n, n)), rng.normal(size=(n, n)), rng.normal(size=n)
        h = solve_hlcp_enumerate(A, B, q)
        e = solve_pattern_enumeration(HTCPInstance(A, B, q))
        assert len(h.solutions) == len(e.solutions)
        for s in h.solutions:
            assert any(np.max(np.abs(s.z - t.z)) <= 1e-6 for t in e.solutions)


def test_determinism_across_workers():
    inst = HTCPInstance(Tensor(np.random.default_rng(3).normal(size=(3,) * 3)), identity_tensor(3, 3), [0.5, -1, 2])
    a = solve(inst, SolverConfig(rng_seed=4, workers=1)).to_dict()
    b = solve(inst, SolverConfig(rng_seed=4, workers=4)).to_dict()
    assert a == b
