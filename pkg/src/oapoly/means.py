"""Root mean power and geometric mean on the positive cone of R^d.

Both means are available in closed form and through their variational
descriptions:

    S_n(f_1..f_r) = sup { sum a_k f_k : a in [0,1]^r, sum a_k^m = 1 },   1/m + 1/n = 1
    G_n(f_1..f_n) = (1/n) inf { sum t_k f_k : t in (0,inf)^n, prod t_k = 1 }

On R^d the sup and inf are taken coordinatewise. The variational evaluators
sample feasible coefficient tuples and can finish with the analytic
optimizer, so they approach the closed form from below (S_n) or above (G_n).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .vlattice import check_same_dim

# Temperatures for the log-normal theta ladder; large values probe the
# unattained infimum on coordinates where some argument vanishes.
THETA_LADDER = (0.1, 0.3, 1.0, 3.0, 10.0, 30.0)


@dataclass(frozen=True)
class VariationalBudget:
    """How hard the variational evaluators try.

    sample_count: random feasible coefficient tuples to draw.
    refine: finish with the per-coordinate analytic optimizer.
    theta_max: cap on the coefficients the geometric-mean refiner may use on
        coordinates where the infimum is not attained.
    """

    sample_count: int = 1000
    refine: bool = True
    theta_max: float = 1e6

    def __post_init__(self):
        if self.sample_count < 1:
            raise ValueError("sample_count must be >= 1")
        if not self.theta_max > 1:
            raise ValueError("theta_max must exceed 1")


def check_degree(n) -> int:
    if isinstance(n, bool) or int(n) != n:
        raise ValueError(f"degree must be an integer, got {n!r}")
    n = int(n)
    if n < 2:
        raise ValueError(f"degree must be >= 2, got {n}")
    return n


def holder_conjugate(n: int) -> float:
    """Return m with 1/m + 1/n = 1."""
    n = check_degree(n)
    return n / (n - 1)


def _stack(fs: Sequence[np.ndarray]) -> np.ndarray:
    fs = [np.asarray(f, dtype=float) for f in fs]
    if not fs:
        raise ValueError("no arguments given")
    check_same_dim(*fs)
    return np.vstack(fs)


def _stack_positive(fs: Sequence[np.ndarray]) -> np.ndarray:
    F = _stack(fs)
    if np.any(F < 0):
        raise ValueError("arguments must lie in the positive cone")
    return F


def _stack_rmp(n: int, fs: Sequence[np.ndarray]) -> np.ndarray:
    check_degree(n)
    F = _stack_positive(fs)
    if F.shape[0] < 2:
        raise ValueError(f"root mean power needs at least 2 arguments, got {F.shape[0]}")
    return F


def _stack_gm(n: int, fs: Sequence[np.ndarray], positive: bool) -> np.ndarray:
    n = check_degree(n)
    F = _stack_positive(fs) if positive else _stack(fs)
    if F.shape[0] != n:
        raise ValueError(f"geometric mean of degree {n} needs exactly {n} arguments, got {F.shape[0]}")
    return F


def rmp_array(n: int, F: np.ndarray) -> np.ndarray:
    """Root mean power over axis -2 of ``F`` (shape ``(..., r, d)``), no validation."""
    top = F.max(axis=-2)
    safe = np.where(top > 0, top, 1.0)
    return top * np.sum((F / safe[..., None, :]) ** n, axis=-2) ** (1.0 / n)


def gm_array(n: int, F: np.ndarray) -> np.ndarray:
    """Geometric mean of ``|F|`` over axis -2, no validation."""
    F = np.abs(F)
    top = F.max(axis=-2)
    safe = np.where(top > 0, top, 1.0)
    return top * np.prod(F / safe[..., None, :], axis=-2) ** (1.0 / n)


def rmp_closed(n: int, fs: Sequence[np.ndarray]) -> np.ndarray:
    """Coordinatewise ``(sum_k f_k^n)^(1/n)`` for positive ``f_k``.

    Entries are scaled by their coordinatewise maximum first, so a coordinate
    with a single nonzero argument returns that argument bit for bit.
    """
    return rmp_array(n, _stack_rmp(n, fs))


def gm_closed(n: int, fs: Sequence[np.ndarray]) -> np.ndarray:
    """Coordinatewise ``(prod_k |f_k|)^(1/n)`` for exactly ``n`` arguments."""
    return gm_array(n, _stack_gm(n, fs, positive=False))


def sample_holder_sphere(rng: np.random.Generator, count: int, r: int, m: float) -> np.ndarray:
    """Feasible tuples ``a in [0,1]^r`` with ``sum a_k^m = 1``.

    Uniform on the simplex in the m-power domain. Rows are drawn in order, so
    a smaller count with the same seed gives a prefix of a larger one.
    """
    e = rng.standard_exponential((count, r))
    s = e / e.sum(axis=1, keepdims=True)
    return s ** (1.0 / m)


def sample_unit_product(
    rng: np.random.Generator, count: int, n: int, theta_max: float
) -> np.ndarray:
    """Feasible tuples ``theta in (0, inf)^n`` with ``prod theta_k = 1``.

    Log-coefficients are centered Gaussians scaled over a temperature ladder
    and shrunk so that no coefficient exceeds ``theta_max`` or drops below
    ``1/theta_max``. Prefix-stable in ``count`` like the sphere sampler.
    """
    u = rng.standard_normal((count, n))
    u -= u.mean(axis=1, keepdims=True)
    tau = np.resize(np.asarray(THETA_LADDER), count)[:, None]
    logs = tau * u
    limit = np.log(theta_max)
    spread = np.abs(logs).max(axis=1, keepdims=True)
    logs *= np.minimum(1.0, limit / np.where(spread > 0, spread, 1.0))
    return np.exp(logs)


def _refine_rmp(n: int, F: np.ndarray) -> np.ndarray:
    # Maximizer a_k = x_k^(n-1) / (sum_i x_i^n)^(1/m), evaluated on scaled entries.
    m = holder_conjugate(n)
    top = F.max(axis=0)
    safe = np.where(top > 0, top, 1.0)
    t = F / safe
    norm = np.sum(t**n, axis=0)
    a = t ** (n - 1) / np.where(norm > 0, norm, 1.0) ** (1.0 / m)
    return np.sum(a * F, axis=0)


def rmp_variational(
    n: int,
    fs: Sequence[np.ndarray],
    budget: VariationalBudget = VariationalBudget(),
    seed: int | np.random.Generator = 0,
) -> np.ndarray:
    """Root mean power as a coordinatewise sup over the Hoelder sphere.

    The unit coordinate tuples are always among the candidates, so the result
    dominates ``f_1 v ... v f_r`` even before refinement.
    """
    n = check_degree(n)
    F = _stack_rmp(n, fs)
    r = F.shape[0]
    rng = np.random.default_rng(seed)
    a = np.vstack([np.eye(r), sample_holder_sphere(rng, budget.sample_count, r, holder_conjugate(n))])
    best = (a @ F).max(axis=0)
    if budget.refine:
        best = np.maximum(best, _refine_rmp(n, F))
    return best


def _refine_gm(n: int, F: np.ndarray, theta_max: float) -> np.ndarray:
    value = np.zeros(F.shape[1])
    zeros = (F == 0).sum(axis=0)

    full = zeros == 0
    if np.any(full):
        X = F[:, full]
        g = gm_closed(n, list(X))
        theta = g / X
        value[full] = np.sum(theta * X, axis=0) / n

    # Some but not all arguments vanish: the infimum 0 is not attained. Put
    # theta_max on the vanishing slots and spread the compensating factor
    # over the others by the AM-GM equality case.
    partial = (zeros > 0) & (zeros < n)
    for i in np.flatnonzero(partial):
        x = F[:, i]
        pos = x > 0
        z = n - int(pos.sum())
        log_c = (np.sum(np.log(x[pos])) - z * np.log(theta_max)) / (n - z)
        theta = np.exp(log_c - np.log(x[pos]))
        value[i] = np.sum(theta * x[pos]) / n
    return value


def gm_variational(
    n: int,
    fs: Sequence[np.ndarray],
    budget: VariationalBudget = VariationalBudget(),
    seed: int | np.random.Generator = 0,
) -> np.ndarray:
    """Geometric mean as ``(1/n)`` times a coordinatewise inf over ``prod theta = 1``.

    ``theta = (1, ..., 1)`` is always a candidate, so the result never exceeds
    the arithmetic mean. On coordinates where some argument is zero the
    returned value is the best upper bound reachable with ``theta_max``.
    """
    n = check_degree(n)
    F = _stack_gm(n, fs, positive=True)
    rng = np.random.default_rng(seed)
    theta = np.vstack([np.ones(n), sample_unit_product(rng, budget.sample_count, n, budget.theta_max)])
    best = (theta @ F).min(axis=0) / n
    if budget.refine:
        best = np.minimum(best, _refine_gm(n, F, budget.theta_max))
    return best
