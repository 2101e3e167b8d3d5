import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import naive_power, odd_p_pair
from htcp.tensor import (
    Tensor,
    apply_power,
    contract_to_matrix,
    hadamard,
    identity_tensor,
    inverse_power_vector,
    jacobian,
    partial_symmetrize,
    pointwise_min,
    power_vector,
    shao_product,
)


def test_tensor_validation():
    with pytest.raises(ValueError):
        Tensor(np.zeros(3))
    with pytest.raises(ValueError):
        Tensor(np.zeros((2, 3)))
    with pytest.raises(ValueError):
        Tensor(np.array([[np.nan, 0], [0, 0]]))
    with pytest.raises(ValueError):
        Tensor.from_entries(2, 2, [((0, 0), 1.0), ((0, 0), 2.0)])


def test_tensor_is_immutable():
    T = Tensor(np.eye(2))
    with pytest.raises(ValueError):
        T.data[0, 0] = 5.0


def test_identity_tensor_examples():
    assert np.array_equal(apply_power(identity_tensor(4, 2), [2.0, 1.0]), [8.0, 1.0])
    assert np.array_equal(identity_tensor(2, 3).data, np.eye(3))
    assert np.array_equal(apply_power(identity_tensor(3, 2), [-1.0, 2.0]), [1.0, 4.0])


def test_apply_power_examples(rng):
    A, _ = odd_p_pair()
    x = np.array([0.7, -1.3])
    assert np.allclose(apply_power(A, x), [x[0] ** 2 + x[1] ** 2, 0.0], rtol=0, atol=1e-15)
    T = Tensor(rng.normal(size=(3, 3, 3)))
    assert np.array_equal(apply_power(T, np.zeros(3)), np.zeros(3))
    x = rng.normal(size=3)
    ref = naive_power(T.data, x)
    assert np.max(np.abs(apply_power(T, x) - ref)) <= 1e-12 * np.max(np.abs(ref))
    with pytest.raises(ValueError):
        apply_power(T, np.ones(2))


def test_power_vectors():
    assert np.array_equal(power_vector([2.0, 3.0], 2), [4.0, 9.0])
    assert np.array_equal(power_vector([-2.0, 1.0], 3), [-8.0, 1.0])
    assert np.array_equal(power_vector(np.ones(4), 5), np.ones(4))
    assert np.allclose(inverse_power_vector([8.0, 1.0], 3), [2.0, 1.0])
    assert np.allclose(inverse_power_vector([4.0, 0.0], 2), [2.0, 0.0])
    assert np.allclose(inverse_power_vector([-8.0], 3), [-2.0])
    with pytest.raises(ValueError):
        inverse_power_vector([-1.0, 1.0], 2)


def test_min_and_hadamard():
    assert np.array_equal(pointwise_min([1.0, -2.0], [0.0, 3.0]), [0.0, -2.0])
    assert np.array_equal(hadamard([1.0, -2.0], [0.0, 3.0]), [0.0, -6.0])
    x, y = np.array([1.0, 0.0]), np.array([0.0, 2.0])
    assert np.array_equal(pointwise_min(x, y), [0.0, 0.0]) and x @ y == 0.0
    x, y = np.array([1.0, -1.0]), np.array([3.0, 0.0])
    assert np.array_equal(2 * pointwise_min(x, y), pointwise_min(2 * x, 2 * y))
    assert np.array_equal(2 * pointwise_min(x, y), [2.0, -2.0])
    with pytest.raises(ValueError):
        pointwise_min([1.0], [1.0, 2.0])


small_ints = st.lists(st.integers(-5, 5), min_size=3, max_size=3)


@given(x=small_ints, y=small_ints, u=small_ints, lam=st.integers(0, 4))
def test_min_map_laws_exact(x, y, u, lam):
    x, y, u = (np.array(v, dtype=float) for v in (x, y, u))
    assert np.array_equal(lam * pointwise_min(x, y), pointwise_min(lam * x, lam * y))
    assert np.array_equal(u + pointwise_min(x, y), pointwise_min(u + x, u + y))
    comp = bool(np.all(pointwise_min(x, y) == 0))
    assert comp == bool(np.all(x >= 0) and np.all(y >= 0) and x @ y == 0)


def test_shao_product_examples(rng):
    A, _ = odd_p_pair()
    assert shao_product(A, np.eye(2)) == A
    D = np.diag([2.0, -3.0])
    M = rng.normal(size=(2, 2))
    for _ in range(5):
        x = rng.normal(size=2)
        assert np.allclose(apply_power(shao_product(A, D), x), apply_power(A, D @ x), atol=1e-12)
        assert np.allclose(apply_power(shao_product(M, A), x), M @ apply_power(A, x), atol=1e-12)
    with pytest.raises(ValueError):
        shao_product(A, np.eye(3))
    with pytest.raises(ValueError):
        shao_product(Tensor(np.zeros((8,) * 5)), Tensor(np.zeros((8,) * 5)))


def test_shao_axioms_exact_on_integers():
    rng = np.random.default_rng(7)
    for n in (1, 2, 3):
        for m, k in itertools.product((2, 3), repeat=2):
            A = Tensor(rng.integers(-3, 4, size=(n,) * m))
            B = Tensor(rng.integers(-3, 4, size=(n,) * k))
            E = Tensor(rng.integers(-3, 4, size=(n,) * 2))
            A2 = Tensor(rng.integers(-3, 4, size=(n,) * m))
            M = rng.integers(-3, 4, size=(n, n))
            I = np.eye(n)
            assert shao_product(A, I) == A and shao_product(I, A) == A
            assert shao_product(M, A + A2) == shao_product(M, A) + shao_product(M, A2)
            assert shao_product(A, shao_product(B, E)) == shao_product(shao_product(A, B), E)
            assert shao_product(A, B).order == (m - 1) * (k - 1) + 1


def test_partial_symmetrize_examples(rng):
    S = np.zeros((2, 2, 2))
    S[0, 0, 1] = S[0, 1, 0] = 3.0
    assert partial_symmetrize(Tensor(S)) == Tensor(S)
    T = Tensor.from_entries(3, 2, [((0, 0, 1), 2.0)])
    Tb = partial_symmetrize(T).data
    assert Tb[0, 0, 1] == 1.0 and Tb[0, 1, 0] == 1.0
    T = Tensor(rng.normal(size=(2,) * 4))
    Tb = partial_symmetrize(T)
    for perm in itertools.permutations(range(1, 4)):
        assert np.allclose(np.transpose(Tb.data, (0,) + perm), Tb.data, atol=1e-15)
    for _ in range(20):
        x = rng.normal(size=2)
        ref = apply_power(T, x)
        assert np.max(np.abs(apply_power(Tb, x) - ref)) <= 1e-12 * max(1.0, np.max(np.abs(ref)))
    with pytest.raises(ValueError):
        partial_symmetrize(Tensor(np.zeros((1,) * 8)))


def test_contract_to_matrix_examples(rng):
    M = rng.normal(size=(3, 3))
    assert np.array_equal(contract_to_matrix(Tensor(M), rng.normal(size=3)), M)
    assert np.array_equal(contract_to_matrix(identity_tensor(4, 2), [1.0, 2.0]), np.diag([1.0, 4.0]))
    T = Tensor(rng.normal(size=(3, 3, 3)))
    x = rng.normal(size=3)
    ref = apply_power(T, x)
    assert np.max(np.abs(contract_to_matrix(T, x) @ x - ref)) <= 1e-12 * np.max(np.abs(ref))
    with pytest.raises(ValueError):
        contract_to_matrix(T, np.ones(2))


def test_jacobian_examples(rng):
    M = rng.normal(size=(2, 2))
    assert np.array_equal(jacobian(Tensor(M), [0.3, 0.1]), M)
    assert np.array_equal(jacobian(identity_tensor(4, 2), [1.0, 2.0]), np.diag([3.0, 12.0]))


def _fd_jacobian(T, x, h=1e-6):
    n = x.shape[0]
    J = np.empty((n, n))
    for j in range(n):
        e = np.zeros(n)
        e[j] = h
        J[:, j] = (apply_power(T, x + e) - apply_power(T, x - e)) / (2 * h)
    return J


def test_jacobian_matches_finite_differences():
    rng = np.random.default_rng(2)
    worst = 0.0
    for k in range(100):
        n, m = 1 + k % 3, 2 + k % 4
        T = Tensor(rng.normal(size=(n,) * m))
        x = rng.normal(size=n)
        J = jacobian(T, x)
        worst = max(worst, np.linalg.norm(J - _fd_jacobian(T, x)) / max(np.linalg.norm(J), 1e-12))
    assert worst <= 1e-5


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), lam=st.floats(-3, 3))
def test_homogeneity(seed, lam):
    rng = np.random.default_rng(seed)
    n, m = int(rng.integers(1, 4)), int(rng.integers(2, 5))
    T = Tensor(rng.normal(size=(n,) * m))
    x = rng.normal(size=n)
    lhs = apply_power(T, lam * x)
    rhs = lam ** (m - 1) * apply_power(T, x)
    assert np.max(np.abs(lhs - rhs)) <= 1e-10 * max(1.0, np.max(np.abs(rhs)))


def test_tensor_arithmetic():
    A = Tensor(np.eye(2))
    assert (A + A) == A * 2 and (A - A) == Tensor(np.zeros((2, 2))) and (-A) == A * -1
    with pytest.raises(ValueError):
        A + Tensor(np.eye(3))
