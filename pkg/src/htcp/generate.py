"""Seeded instance families for experiments and the CLI ``gen`` command."""

from __future__ import annotations

import numpy as np

from .io import instance_to_dict
from .tensor import Tensor, identity_tensor

__all__ = ["FAMILIES", "generate", "random_instance", "paper_examples"]

FAMILIES = ("random", "r0-likely", "p-likely", "paper-examples")


def random_instance(rng: np.random.Generator, n: int, m: int):
    """Gaussian ``A``, ``B`` and ``q``."""
    A = Tensor(rng.normal(size=(n,) * m))
    B = Tensor(rng.normal(size=(n,) * m))
    return A, B, rng.normal(size=n)


def _near_identity(rng, n, m, scale):
    return identity_tensor(m, n).data + scale * rng.normal(size=(n,) * m)


def _r0_likely(rng, n, m):
    # Perturbations of {I, +-I}: both signs give R0 pairs.
    sign = 1.0 if rng.random() < 0.5 else -1.0
    A = Tensor(_near_identity(rng, n, m, 0.3))
    B = Tensor(sign * _near_identity(rng, n, m, 0.3))
    return A, B, rng.normal(size=n)


def _p_likely(rng, n, m):
    # Small perturbations of {D1, D2} with positive diagonals.
    d1, d2 = rng.uniform(0.5, 2.0, n), rng.uniform(0.5, 2.0, n)
    A = Tensor(identity_tensor(m, n).data * d1.reshape((n,) + (1,) * (m - 1)) + 0.05 * rng.normal(size=(n,) * m))
    B = Tensor(identity_tensor(m, n).data * d2.reshape((n,) + (1,) * (m - 1)) + 0.05 * rng.normal(size=(n,) * m))
    return A, B, rng.normal(size=n)


def paper_examples():
    """The three canonical instances: an R pair, an odd-order P pair and an odd-order P pair without solutions."""
    I4 = identity_tensor(4, 2)
    A3 = Tensor.from_entries(3, 2, [((0, 0, 0), 1.0), ((0, 1, 1), 1.0)])
    B3 = Tensor.from_entries(3, 2, [((0, 0, 0), -1.0), ((0, 1, 1), -1.0)])
    I3 = identity_tensor(3, 2)
    return [
        ("r-pair-identity-e4", instance_to_dict(I4, I4, np.ones(2))),
        ("p-pair-odd-order", instance_to_dict(A3, B3, np.zeros(2))),
        ("p-pair-no-solution", instance_to_dict(I3, Tensor(-I3.data), np.array([0.0, -1.0]))),
    ]


def generate(family: str, n: int = 2, m: int = 2, count: int = 1, seed: int = 0):
    """List of ``(name, instance_dict)``; identical arguments give identical output."""
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
    if family == "paper-examples":
        return paper_examples()
    if n < 1 or m < 2 or count < 0:
        raise ValueError("need n >= 1, m >= 2, count >= 0")
    make = {"random": random_instance, "r0-likely": _r0_likely, "p-likely": _p_likely}[family]
    out = []
    for k in range(count):
        rng = np.random.default_rng([seed, k])
        A, B, q = make(rng, n, m)
        out.append((f"{family}-n{n}-m{m}-{k:03d}", instance_to_dict(A, B, q)))
    return out
