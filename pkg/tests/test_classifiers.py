import numpy as np
import pytest

from conftest import odd_p_pair
from htcp.classifiers import (
    NotApplicable,
    Outcome,
    check_det_condition,
    check_p_pair,
    check_p_pair_via_left_inverse,
    check_p_tensor,
    check_r0_pair,
    check_r_pair,
    check_strong_p_pair,
    det_tensor,
    det_witness_from_pair,
    left_inverse_order2,
    pair_from_det_witness,
    permutation_conjugate,
    tensor_singular_direction,
    verify_certificate,
    verify_p_witness,
    verify_singular_witness,
)
from htcp.solver import SolverConfig
from htcp.tensor import Tensor, apply_power, identity_tensor, shao_product

I4 = identity_tensor(4, 2)
I3 = identity_tensor(3, 2)
ZERO4 = Tensor(np.zeros((2,) * 4))


def _refuted_and_verified(A, B, v, q=None):
    return v.refuted and verify_certificate(A, B, v, q=q)


def test_r0_examples():
    assert not check_r0_pair(I4, I4).refuted
    v = check_r0_pair(ZERO4, I4)
    assert _refuted_and_verified(ZERO4, I4, v)
    assert np.linalg.norm(np.concatenate([v.certificate["x"], v.certificate["y"]])) >= 0.5


def test_r0_holds_certificates():
    assert check_r0_pair(I4, I4).outcome is Outcome.HOLDS
    assert check_r0_pair(np.eye(3), np.eye(3)).outcome is Outcome.HOLDS


def test_p_pair_examples():
    A, B = odd_p_pair()
    assert check_p_pair(A, B).outcome is Outcome.HOLDS
    assert check_p_pair(I3, Tensor(-I3.data)).outcome is Outcome.HOLDS
    v = check_p_pair(I3, I3)
    assert _refuted_and_verified(I3, I3, v)


def test_det_condition_examples():
    A, B = odd_p_pair()
    with pytest.raises(ValueError):
        check_det_condition(A, B)
    C = det_tensor(A, B, np.eye(2), np.eye(2))
    assert C == Tensor(np.zeros((2, 2, 2)))
    assert tensor_singular_direction(C) is not None
    C = det_tensor(I4, I4, np.eye(2), np.zeros((2, 2)))
    assert C == I4 and tensor_singular_direction(C) is None


def test_det_construction_from_refuted_p_pair(rng):
    found = 0
    for _ in range(30):
        A, B = Tensor(rng.normal(size=(2,) * 4)), Tensor(rng.normal(size=(2,) * 4))
        v = check_p_pair(A, B)
        if not v.refuted:
            continue
        found += 1
        x, y = np.asarray(v.certificate["x"]), np.asarray(v.certificate["y"])
        d1, d2, u = det_witness_from_pair(x, y)
        assert np.all(d1 + d2 > 0)
        assert verify_singular_witness(det_tensor(A, B, np.diag(d1), np.diag(d2)), u / np.linalg.norm(u), 1e-8)
        x2, y2 = pair_from_det_witness(d1, d2, u)
        assert np.allclose(x2, x) and np.allclose(y2, y)
    assert found >= 5


def test_det_refutation_converts_to_p_witness():
    v = check_det_condition(I4, Tensor(-I4.data))
    assert v.refuted and verify_certificate(I4, Tensor(-I4.data), v)
    x, y = pair_from_det_witness(v.certificate["d1"], v.certificate["d2"], v.certificate["u"])
    assert verify_p_witness(I4, Tensor(-I4.data), x / np.linalg.norm(np.concatenate([x, y])), y / np.linalg.norm(np.concatenate([x, y])), 1e-8)


def test_left_inverse_examples():
    assert np.allclose(left_inverse_order2(I4), np.eye(2))
    N = np.array([[2.0, 0.0], [1.0, 1.0]])
    A = shao_product(N, I4)
    M = left_inverse_order2(A)
    assert np.allclose(M, np.linalg.inv(N))
    assert shao_product(M, A).allclose(I4, atol=1e-9)
    assert left_inverse_order2(odd_p_pair()[0]) is None


def test_p_tensor_examples():
    assert not check_p_tensor(I4).refuted
    v = check_p_tensor(Tensor(-I4.data))
    assert v.refuted
    x = np.asarray(v.certificate["x"])
    assert np.all(x * apply_power(Tensor(-I4.data), x) <= 1e-9)
    rng = np.random.default_rng(0)
    for _ in range(3):
        T = Tensor(rng.normal(size=(2,) * 3))
        v = check_p_tensor(T)
        assert v.refuted and verify_certificate(T, T, v)


def test_p_tensor_m2_exact():
    assert check_p_tensor(np.array([[2.0, 1.0], [0.0, 1.0]])).outcome is Outcome.HOLDS
    assert check_p_tensor(np.array([[1.0, 2.0], [2.0, 1.0]])).refuted


def test_left_inverse_reduction_examples():
    assert check_p_pair_via_left_inverse(I4, I4).outcome is not Outcome.REFUTED
    A = shao_product(2 * np.eye(2), I4)
    v = check_p_pair_via_left_inverse(A, Tensor(-I4.data))
    assert v.refuted and verify_certificate(A, Tensor(-I4.data), v)
    with pytest.raises(NotApplicable):
        check_p_pair_via_left_inverse(Tensor(np.zeros((2,) * 4)), I4)


def test_r_pair_examples():
    v = check_r_pair(I4, I4, np.ones(2))
    assert v.outcome is Outcome.HOLDS
    assert np.allclose(v.certificate["x"], 1.0) and np.allclose(v.certificate["y"], 0.0)
    assert v.certificate["clauses"]["a"] == "unique-exact"
    v = check_r_pair(I4, I4, np.zeros(2))
    assert v.refuted and v.certificate["clause"] == "b"
    assert verify_certificate(I4, I4, v, q=np.zeros(2))
    v = check_r_pair(ZERO4, I4, np.ones(2))
    assert v.refuted and v.certificate["clause"] == "i"


def test_strong_p_examples():
    A, B = odd_p_pair()
    v = check_strong_p_pair(A, B)
    assert v.refuted and v.certificate["via"] == "parity" and verify_certificate(A, B, v)
    assert not check_strong_p_pair(I4, I4).refuted
    v = check_strong_p_pair(I4, Tensor(-I4.data))
    assert v.refuted and verify_certificate(I4, Tensor(-I4.data), v)


def test_permutation_conjugate():
    A, B = odd_p_pair()
    P = np.array([[0.0, 1.0], [1.0, 0.0]])
    assert permutation_conjugate(A, np.eye(2)) == A
    assert permutation_conjugate(permutation_conjugate(A, P), P.T) == A
    assert check_p_pair(permutation_conjugate(A, P), permutation_conjugate(B, P)).outcome is Outcome.HOLDS
    with pytest.raises(ValueError):
        permutation_conjugate(A, np.array([[1.0, 1.0], [0.0, 1.0]]))


def test_p_verdicts_invariant_under_conjugation(rng):
    P = np.array([[0.0, 1.0], [1.0, 0.0]])
    for _ in range(6):
        A, B = Tensor(rng.normal(size=(2,) * 4)), Tensor(rng.normal(size=(2,) * 4))
        a = check_p_pair(A, B).outcome
        b = check_p_pair(permutation_conjugate(A, P), permutation_conjugate(B, P)).outcome
        assert a == b


def test_refutations_reverify_from_scratch(rng):
    cfg = SolverConfig(rng_seed=3)
    for _ in range(10):
        n, m = int(rng.integers(1, 3)), int(rng.choice([2, 3, 4]))
        A, B = Tensor(rng.normal(size=(n,) * m)), Tensor(rng.normal(size=(n,) * m))
        for check in (check_r0_pair, check_p_pair, check_strong_p_pair):
            v = check(A, B, cfg)
            assert verify_certificate(A, B, v)
            d = v.to_dict()
            assert set(d) == {"property", "outcome", "certificate", "effort", "seed"}


def test_guards():
    from htcp.solver import GuardExceeded

    big = Tensor(np.zeros((1,) * 7))
    with pytest.raises(GuardExceeded):
        check_p_pair(big, big)
