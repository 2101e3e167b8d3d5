"""JSON file formats for tensors, vectors, instances and reports.

Tensor::

    {"order": m, "dim": n, "entries": [{"idx": [i1, ..., im], "val": r}, ...]}

Indices are 0-based, unlisted entries are zero and a repeated ``idx`` is an
error. Vector::

    {"dim": n, "values": [...]}

Instance::

    {"A": <tensor>, "B": <tensor>, "q": <vector>}

A pair file is an instance file without ``q``. Writers emit only nonzero
entries in row-major order, so load followed by dump is byte-identical.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .tensor import Tensor

__all__ = [
    "FormatError",
    "tensor_to_dict",
    "tensor_from_dict",
    "vector_to_dict",
    "vector_from_dict",
    "instance_to_dict",
    "instance_from_dict",
    "dumps",
    "load_json",
    "load_instance",
    "load_pair",
    "load_tensor",
    "load_vector",
    "write_json",
    "to_jsonable",
]


class FormatError(ValueError):
    """Malformed or inconsistent input file."""


def tensor_to_dict(T: Tensor) -> dict:
    entries = [
        {"idx": [int(i) for i in idx], "val": float(T.data[idx])}
        for idx in zip(*np.nonzero(T.data))
    ]
    return {"order": T.order, "dim": T.dim, "entries": entries}


def tensor_from_dict(d) -> Tensor:
    try:
        order, dim, entries = int(d["order"]), int(d["dim"]), d["entries"]
        pairs = [(e["idx"], e["val"]) for e in entries]
    except (KeyError, TypeError) as exc:
        raise FormatError(f"bad tensor object: {exc}") from exc
    try:
        return Tensor.from_entries(order, dim, pairs)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def vector_to_dict(v) -> dict:
    v = np.asarray(v, dtype=float)
    return {"dim": int(v.shape[0]), "values": [float(x) for x in v]}


def vector_from_dict(d) -> np.ndarray:
    try:
        dim, values = int(d["dim"]), np.asarray(d["values"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad vector object: {exc}") from exc
    if values.shape != (dim,) or not np.all(np.isfinite(values)):
        raise FormatError(f"vector must hold {dim} finite values")
    return values


def instance_to_dict(A: Tensor, B: Tensor, q=None) -> dict:
    d = {"A": tensor_to_dict(A), "B": tensor_to_dict(B)}
    if q is not None:
        d["q"] = vector_to_dict(q)
    return d


def instance_from_dict(d, require_q=True):
    if not isinstance(d, dict) or "A" not in d or "B" not in d:
        raise FormatError("instance needs 'A' and 'B'")
    A, B = tensor_from_dict(d["A"]), tensor_from_dict(d["B"])
    if A.order != B.order or A.dim != B.dim:
        raise FormatError("A and B must share order and dimension")
    q = None
    if "q" in d:
        q = vector_from_dict(d["q"])
        if q.shape[0] != A.dim:
            raise FormatError("q dimension does not match the tensors")
    elif require_q:
        raise FormatError("instance needs 'q'")
    return A, B, q


def to_jsonable(obj):
    """Recursively convert numpy scalars/arrays and enums into JSON-ready values."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, Tensor):
        return tensor_to_dict(obj)
    if hasattr(obj, "value") and hasattr(obj, "name"):
        return obj.value
    return obj


def dumps(obj) -> str:
    return json.dumps(to_jsonable(obj), indent=2) + "\n"


def load_json(path):
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: {exc}") from exc


def load_instance(path):
    return instance_from_dict(load_json(path), require_q=True)


def load_pair(path):
    A, B, _ = instance_from_dict(load_json(path), require_q=False)
    return A, B


def load_tensor(path) -> Tensor:
    return tensor_from_dict(load_json(path))


def load_vector(path) -> np.ndarray:
    return vector_from_dict(load_json(path))


def write_json(path, obj):
    Path(path).write_text(dumps(obj))
