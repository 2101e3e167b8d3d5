"""Dense tensors and the multilinear primitives used throughout the package.

A tensor of order ``m`` and dimension ``n`` is stored as a read-only numpy
array of shape ``(n,) * m`` in row-major order (first index slowest).
Vectors and matrices are plain 1-D / 2-D float arrays.
"""

from __future__ import annotations

import math
from itertools import permutations

import numpy as np

__all__ = [
    "Tensor",
    "as_tensor",
    "identity_tensor",
    "apply_power",
    "power_vector",
    "inverse_power_vector",
    "hadamard",
    "pointwise_min",
    "shao_product",
    "partial_symmetrize",
    "contract_to_matrix",
    "jacobian",
    "MAX_SYMMETRIZE_ORDER",
    "MAX_PRODUCT_ENTRIES",
]

#: partial symmetrization enumerates (m-1)! permutations; refuse beyond this.
MAX_SYMMETRIZE_ORDER = 7
#: refuse Shao products whose dense result would exceed this many entries.
MAX_PRODUCT_ENTRIES = 1 << 22


class Tensor:
    """Immutable dense real tensor of order ``m >= 2`` and dimension ``n >= 1``.

    Parameters
    ----------
    data : array_like
        Nested sequence or array of shape ``(n,) * m``. It is copied.

    Examples
    --------
    >>> A = Tensor(np.zeros((2, 2, 2)))
    >>> A.order, A.dim
    (3, 2)
    """

    __slots__ = ("_data", "_sym")

    def __init__(self, data):
        arr = np.array(data, dtype=float, copy=True)
        if arr.ndim < 2:
            raise ValueError(f"tensor order must be >= 2, got {arr.ndim}")
        n = arr.shape[0]
        if n < 1 or any(s != n for s in arr.shape):
            raise ValueError(f"tensor must be cubical, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("tensor entries must be finite")
        arr.setflags(write=False)
        self._data = arr
        self._sym = None

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def order(self) -> int:
        return self._data.ndim

    @property
    def dim(self) -> int:
        return self._data.shape[0]

    def unfold(self) -> np.ndarray:
        """Mode-1 unfolding, an ``n x n**(m-1)`` matrix."""
        return self._data.reshape(self.dim, -1)

    @classmethod
    def from_entries(cls, order: int, dim: int, entries) -> "Tensor":
        """Build from sparse ``(index_tuple, value)`` pairs; unlisted entries are 0."""
        if order < 2 or dim < 1:
            raise ValueError("need order >= 2 and dim >= 1")
        arr = np.zeros((dim,) * order)
        seen = set()
        for idx, val in entries:
            idx = tuple(int(i) for i in idx)
            if len(idx) != order or any(i < 0 or i >= dim for i in idx):
                raise ValueError(f"index {idx} out of range for T({order},{dim})")
            if idx in seen:
                raise ValueError(f"duplicate index {idx}")
            seen.add(idx)
            arr[idx] = float(val)
        return cls(arr)

    def __add__(self, other):
        other = as_tensor(other)
        _same_shape(self, other)
        return Tensor(self._data + other._data)

    def __sub__(self, other):
        other = as_tensor(other)
        _same_shape(self, other)
        return Tensor(self._data - other._data)

    def __neg__(self):
        return Tensor(-self._data)

    def __mul__(self, scalar):
        if isinstance(scalar, Tensor):
            return NotImplemented
        return Tensor(float(scalar) * self._data)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Tensor):
            return NotImplemented
        return self._data.shape == other._data.shape and bool(np.array_equal(self._data, other._data))

    __hash__ = None

    def allclose(self, other, atol=1e-12, rtol=0.0) -> bool:
        other = as_tensor(other)
        return self._data.shape == other._data.shape and bool(
            np.allclose(self._data, other._data, atol=atol, rtol=rtol)
        )

    def __repr__(self):
        return f"Tensor(order={self.order}, dim={self.dim})"


def _same_shape(a: Tensor, b: Tensor):
    if a.data.shape != b.data.shape:
        raise ValueError(f"shape mismatch: T({a.order},{a.dim}) vs T({b.order},{b.dim})")


def as_tensor(obj) -> Tensor:
    """Return ``obj`` as a :class:`Tensor`; square matrices become order-2 tensors."""
    return obj if isinstance(obj, Tensor) else Tensor(obj)


def _as_vector(x, n=None) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError(f"expected a vector, got shape {x.shape}")
    if n is not None and x.shape[0] != n:
        raise ValueError(f"dimension mismatch: vector of length {x.shape[0]}, expected {n}")
    return x


def identity_tensor(m: int, n: int) -> Tensor:
    """The tensor with ones on the superdiagonal ``i1 = ... = im`` and zeros elsewhere."""
    if m < 2 or n < 1:
        raise ValueError("need m >= 2 and n >= 1")
    arr = np.zeros((n,) * m)
    arr[(np.arange(n),) * m] = 1.0
    return Tensor(arr)


def apply_power(T: Tensor, x) -> np.ndarray:
    """Compute ``T x^{m-1}``, i.e. ``sum a[i, i2..im] x[i2]...x[im]`` for each ``i``."""
    T = as_tensor(T)
    x = _as_vector(x, T.dim)
    res = T.data
    for _ in range(T.order - 1):
        res = res @ x
    return np.asarray(res, dtype=float)


def power_vector(x, k: int) -> np.ndarray:
    """Componentwise power ``x_i**k``."""
    if k < 1:
        raise ValueError("power must be >= 1")
    return _as_vector(x) ** k


def inverse_power_vector(x, k: int) -> np.ndarray:
    """Componentwise real k-th root; odd ``k`` keeps the sign, even ``k`` needs ``x >= 0``."""
    if k < 1:
        raise ValueError("root must be >= 1")
    x = _as_vector(x)
    if k % 2 == 0:
        if np.any(x < 0):
            raise ValueError("negative component under an even root")
        return x ** (1.0 / k)
    return np.sign(x) * np.abs(x) ** (1.0 / k)


def hadamard(x, y) -> np.ndarray:
    x = _as_vector(x)
    return x * _as_vector(y, x.shape[0])


def pointwise_min(x, y) -> np.ndarray:
    x = _as_vector(x)
    return np.minimum(x, _as_vector(y, x.shape[0]))


def shao_product(A, B) -> Tensor:
    """Tensor product of an order-``m`` tensor with an order-``k`` tensor.

    ``c[i, a1, ..., a_{m-1}] = sum a[i, i2..im] b[i2, a1] ... b[im, a_{m-1}]``
    where each ``a_j`` is a multi-index of length ``k - 1``; the result has
    order ``(m-1)(k-1) + 1``. Matrices may be passed as 2-D arrays.
    """
    A = as_tensor(A)
    B = as_tensor(B)
    if A.dim != B.dim:
        raise ValueError(f"dimension mismatch: {A.dim} vs {B.dim}")
    m, k, n = A.order, B.order, A.dim
    out_order = (m - 1) * (k - 1) + 1
    if n**out_order > MAX_PRODUCT_ENTRIES:
        raise ValueError(f"product T({out_order},{n}) exceeds the size guard")
    C = A.data
    # Each pass contracts the next original trailing index of A with the first
    # index of B; tensordot appends B's remaining k-1 axes at the end.
    for _ in range(m - 1):
        C = np.tensordot(C, B.data, axes=([1], [0]))
    return Tensor(C)


def partial_symmetrize(T: Tensor) -> Tensor:
    """Average ``T`` over all permutations of its last ``m - 1`` indices."""
    T = as_tensor(T)
    if T._sym is not None:
        return T._sym
    m = T.order
    if m > MAX_SYMMETRIZE_ORDER:
        raise ValueError(f"partial symmetrization supports m <= {MAX_SYMMETRIZE_ORDER}")
    acc = np.zeros_like(T.data)
    for perm in permutations(range(1, m)):
        acc += np.transpose(T.data, (0,) + perm)
    sym = Tensor(acc / math.factorial(m - 1))
    sym._sym = sym
    T._sym = sym
    return sym


def contract_to_matrix(T: Tensor, x) -> np.ndarray:
    """The matrix ``(Tbar x^{m-2})[i, j] = sum tbar[i, j, i3..im] x[i3]...x[im]``.

    ``T`` is partially symmetrized first, so ``contract_to_matrix(T, x) @ x``
    equals ``apply_power(T, x)`` for any input tensor.
    """
    Tbar = partial_symmetrize(T)
    x = _as_vector(x, Tbar.dim)
    res = Tbar.data
    for _ in range(Tbar.order - 2):
        res = res @ x
    return np.array(res, dtype=float)


def jacobian(T: Tensor, x) -> np.ndarray:
    """Jacobian of ``x -> T x^{m-1}``, equal to ``(m-1) * Tbar x^{m-2}``."""
    T = as_tensor(T)
    return (T.order - 1) * contract_to_matrix(T, x)
