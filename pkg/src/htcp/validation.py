"""Input checks shared by the estimator facade and library entry points."""

from __future__ import annotations

import numpy as np
from sklearn.utils import check_array

from .tensor import Tensor, as_tensor

__all__ = ["check_tensor", "check_pair", "check_q", "check_instance"]


def check_tensor(T, name: str = "T", max_order: int | None = None) -> Tensor:
    """Finite, cubical array of order >= 2 as a ``Tensor``."""
    data = T.data if isinstance(T, Tensor) else T
    data = check_array(data, ensure_2d=False, allow_nd=True, dtype=float, input_name=name)
    if data.ndim < 2 or len(set(data.shape)) != 1:
        raise ValueError(f"{name} must be cubical with order >= 2, got shape {data.shape}")
    if max_order is not None and data.ndim > max_order:
        raise ValueError(f"{name} has order {data.ndim} > {max_order}")
    return as_tensor(data)


def check_pair(A, B, max_order: int | None = None):
    A, B = check_tensor(A, "A", max_order), check_tensor(B, "B", max_order)
    if A.order != B.order or A.dim != B.dim:
        raise ValueError(f"A and B must share order and dimension, got {A.data.shape} and {B.data.shape}")
    return A, B


def check_q(q, n: int) -> np.ndarray:
    q = check_array(np.atleast_1d(np.asarray(q, dtype=float)), ensure_2d=False, dtype=float, input_name="q")
    if q.shape != (n,):
        raise ValueError(f"q must have length {n}, got shape {q.shape}")
    return q


def check_instance(A, B, q, max_order: int | None = None):
    A, B = check_pair(A, B, max_order)
    return A, B, check_q(q, A.dim)
