"""Finite-dimensional vector lattice R^d with the coordinatewise order.

Lattice vectors are plain 1-D float64 numpy arrays. Every operation here is
pure; inputs are never modified.
"""

from __future__ import annotations

from typing import Any, Sequence

import numpy as np

# Witness magnitudes; n-th powers of larger values lose too many digits.
MIN_MAGNITUDE = 0.1
MAX_MAGNITUDE = 10.0


class DimensionError(ValueError):
    """Raised when lattice vectors of different dimensions are combined."""


def as_vector(values: Any) -> np.ndarray:
    """Validate and convert ``values`` to a lattice vector (1-D, finite, d >= 1)."""
    v = np.array(values, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise ValueError(f"lattice vector must be a non-empty 1-D sequence, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("lattice vector entries must be finite")
    return v


def check_same_dim(*vectors: np.ndarray) -> int:
    dims = {v.shape[-1] for v in vectors}
    if len(dims) != 1:
        raise DimensionError(f"dimension mismatch: {sorted(dims)}")
    return dims.pop()


def lattice_join(f: np.ndarray, g: np.ndarray) -> np.ndarray:
    check_same_dim(f, g)
    return np.maximum(f, g)


def lattice_meet(f: np.ndarray, g: np.ndarray) -> np.ndarray:
    check_same_dim(f, g)
    return np.minimum(f, g)


def lattice_abs(f: np.ndarray) -> np.ndarray:
    return np.abs(f)


def pos_neg_decompose(f: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(f+, f-)`` with ``f = f+ - f-``, both positive and disjoint."""
    return np.maximum(f, 0.0), np.maximum(-f, 0.0)


def is_positive(f: np.ndarray) -> bool:
    return bool(np.all(f >= 0))


def is_disjoint(f: np.ndarray, g: np.ndarray) -> bool:
    """Exact disjointness: ``|f| ^ |g| = 0``, i.e. the supports do not meet."""
    check_same_dim(f, g)
    return bool(np.all(np.minimum(np.abs(f), np.abs(g)) == 0))


def support(f: np.ndarray) -> np.ndarray:
    return np.flatnonzero(f)


def random_magnitudes(rng: np.random.Generator, shape, positive_only: bool) -> np.ndarray:
    x = rng.uniform(MIN_MAGNITUDE, MAX_MAGNITUDE, size=shape)
    if not positive_only:
        x *= rng.choice([-1.0, 1.0], size=shape)
    return x


def random_disjoint_pairs(
    rng: np.random.Generator, count: int, dim: int, positive_only: bool, nonempty: bool = True
) -> tuple[np.ndarray, np.ndarray]:
    """Batch of ``count`` disjoint pairs, each array of shape ``(count, dim)``.

    Every coordinate goes to ``f``, to ``g`` or to neither with equal
    probability. With ``nonempty`` two distinct coordinates are first reserved,
    one for each vector. Nonzero entries have magnitude in ``[0.1, 10]``.
    """
    if nonempty and dim < 2:
        raise ValueError(f"a disjoint pair with nonempty supports needs dim >= 2, got {dim}")
    owner = rng.integers(0, 3, size=(count, dim))
    if nonempty:
        # Random distinct (i, j) per row: i uniform, j uniform among the rest.
        i = rng.integers(0, dim, size=count)
        j = (i + rng.integers(1, dim, size=count)) % dim
        rows = np.arange(count)
        owner[rows, i] = 0
        owner[rows, j] = 1
    mags = random_magnitudes(rng, (count, dim), positive_only)
    f = np.where(owner == 0, mags, 0.0)
    g = np.where(owner == 1, mags, 0.0)
    return f, g


def random_disjoint_pair(
    dim: int, positive_only: bool, seed: int | np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """One disjoint pair with nonempty supports, deterministic in ``seed``."""
    f, g = random_disjoint_pairs(np.random.default_rng(seed), 1, dim, positive_only)
    return f[0], g[0]


def vector_to_json(f: np.ndarray) -> dict[str, list[float]]:
    return {"values": [float(x) for x in f]}


def vector_from_json(obj: Any) -> np.ndarray:
    """Accept ``{"values": [...]}`` or a bare list of numbers."""
    if isinstance(obj, dict):
        if "values" not in obj:
            raise ValueError("vector object needs a 'values' field")
        obj = obj["values"]
    return as_vector(obj)


def vectors_from_json(obj: Sequence[Any]) -> list[np.ndarray]:
    if not isinstance(obj, list):
        raise ValueError("expected a JSON array of vectors")
    vectors = [vector_from_json(item) for item in obj]
    if vectors:
        check_same_dim(*vectors)
    return vectors
