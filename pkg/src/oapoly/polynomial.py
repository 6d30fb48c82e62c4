"""Homogeneous polynomials R^d -> R^p and their symmetric multilinear maps.

A polynomial is a mapping from multi-indices (exponent tuples of total degree
n) to coefficient vectors in R^p. The associated symmetric n-linear map is
recovered by the polarization identity

    P^(f_1, ..., f_n) = 1/(2^n n!) * sum_{eps in {+-1}^n} (prod eps) P(sum eps_j f_j)

which only uses ring operations, so the same code serves complex arguments.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field
from typing import Any, Iterator, Mapping, Sequence

import numpy as np

from .means import check_degree
from .vlattice import DimensionError

DEFAULT_MAX_DEGREE = 8


def multi_indices(n: int, d: int) -> Iterator[tuple[int, ...]]:
    """All exponent tuples of length ``d`` summing to ``n``, in lexicographic order."""
    if d == 1:
        yield (n,)
        return
    for head in range(n, -1, -1):
        for tail in multi_indices(n - head, d - 1):
            yield (head,) + tail


def is_pure_power(alpha: Sequence[int]) -> bool:
    return sum(1 for a in alpha if a) <= 1


@dataclass(frozen=True, eq=False)
class HomogeneousPolynomial:
    """n-homogeneous polynomial ``P: R^d -> R^p`` in monomial form.

    ``monomials`` maps exponent tuples to length-``p`` coefficient arrays.
    Instances are immutable; the dense exponent and coefficient matrices are
    built once for vectorized evaluation.
    """

    degree: int
    domain_dim: int
    codomain_dim: int
    monomials: Mapping[tuple[int, ...], np.ndarray]
    _exponents: np.ndarray = field(init=False, repr=False)
    _coeffs: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        n = check_degree(self.degree)
        if self.domain_dim < 1 or self.codomain_dim < 1:
            raise ValueError("domain and codomain dimensions must be >= 1")
        clean: dict[tuple[int, ...], np.ndarray] = {}
        for alpha, coeff in self.monomials.items():
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != self.domain_dim or min(alpha) < 0:
                raise ValueError(f"bad multi-index {alpha} for domain dimension {self.domain_dim}")
            if sum(alpha) != n:
                raise ValueError(f"monomial {alpha} has degree {sum(alpha)}, expected {n}")
            c = np.array(coeff, dtype=float).reshape(-1)
            if c.shape != (self.codomain_dim,) or not np.all(np.isfinite(c)):
                raise ValueError(f"coefficient of {alpha} must be {self.codomain_dim} finite reals")
            c.setflags(write=False)
            clean[alpha] = c
        object.__setattr__(self, "monomials", clean)
        keys = sorted(clean)
        exps = np.array(keys, dtype=int).reshape(len(keys), self.domain_dim)
        coeffs = np.array([clean[k] for k in keys], dtype=float).reshape(len(keys), self.codomain_dim)
        exps.setflags(write=False)
        coeffs.setflags(write=False)
        object.__setattr__(self, "_exponents", exps)
        object.__setattr__(self, "_coeffs", coeffs)

    @property
    def mixed_monomials(self) -> list[tuple[int, ...]]:
        return [a for a, c in self.monomials.items() if not is_pure_power(a) and np.any(c != 0)]

    def _monomial_values(self, x: np.ndarray) -> np.ndarray:
        # Power table by repeated multiplication: exact 0^0 = 1, works for complex.
        n, d = self.degree, self.domain_dim
        powers = np.empty(x.shape + (n + 1,), dtype=x.dtype)
        powers[..., 0] = 1
        for k in range(1, n + 1):
            powers[..., k] = powers[..., k - 1] * x
        flat = powers.reshape(-1, d * (n + 1))
        idx = np.arange(d) * (n + 1) + self._exponents
        out = flat[:, idx[:, 0]]
        for i in range(1, d):
            out *= flat[:, idx[:, i]]
        return out.reshape(x.shape[:-1] + (len(idx),))

    def _points(self, x) -> np.ndarray:
        x = np.asarray(x)
        if x.shape[-1] != self.domain_dim:
            raise DimensionError(f"expected points of dimension {self.domain_dim}, got {x.shape[-1]}")
        return x if np.iscomplexobj(x) else x.astype(float)

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        """Evaluate on points of shape ``(..., d)``; returns shape ``(..., p)``."""
        return self._monomial_values(self._points(x)) @ self._coeffs

    def magnitude(self, x: np.ndarray) -> np.ndarray:
        """``sum |c_alpha| |x|^alpha``; bounds the rounding scale of :meth:`evaluate`."""
        return self._monomial_values(np.abs(self._points(x))) @ np.abs(self._coeffs)

    def evaluate_with_magnitude(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        mono = self._monomial_values(self._points(x))
        return mono @ self._coeffs, np.abs(mono) @ np.abs(self._coeffs)

    def __call__(self, f: np.ndarray) -> np.ndarray:
        return poly_eval(self, f)

    def to_json(self) -> dict[str, Any]:
        return {
            "degree": self.degree,
            "domain_dim": self.domain_dim,
            "codomain_dim": self.codomain_dim,
            "monomials": [
                {"alpha": list(alpha), "coeff": [float(c) for c in self.monomials[alpha]]}
                for alpha in sorted(self.monomials)
            ],
        }

    @classmethod
    def from_json(cls, obj: Mapping[str, Any]) -> "HomogeneousPolynomial":
        try:
            degree, d, p = obj["degree"], obj["domain_dim"], obj["codomain_dim"]
            entries = obj["monomials"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed polynomial JSON: {exc}") from exc
        if any(isinstance(v, bool) or not isinstance(v, int) for v in (degree, d, p)):
            raise ValueError("degree, domain_dim and codomain_dim must be integers")
        monomials: dict[tuple[int, ...], Any] = {}
        for entry in entries:
            alpha = tuple(entry["alpha"])
            if alpha in monomials:
                raise ValueError(f"duplicate multi-index {list(alpha)}")
            monomials[alpha] = entry["coeff"]
        return cls(degree, d, p, monomials)


def poly_eval(P: HomogeneousPolynomial, f: np.ndarray) -> np.ndarray:
    f = np.asarray(f)
    if f.ndim != 1:
        raise ValueError("poly_eval takes a single vector; use P.evaluate for batches")
    return P.evaluate(f)


@functools.lru_cache(maxsize=None)
def sign_patterns(multiplicities: tuple[int, ...]) -> tuple[np.ndarray, np.ndarray]:
    """Grouped polarization stencil for arguments repeated ``multiplicities`` times.

    Collecting the 2^n sign vectors by how many minus signs fall in each
    group gives points ``sum_g (m_g - 2 t_g) f_g`` with weight
    ``prod_g C(m_g, t_g) (-1)^t_g``. Since ``P(-x) = (-1)^n P(x)``, the terms
    for ``t`` and its mirror ``m - t`` coincide, so only one of each pair is
    kept, with doubled weight.

    Returns ``(coeffs, weights)``: coefficients of the group arguments in each
    point, shape ``(points, groups)``, and the weights.
    """
    m = np.array(multiplicities)
    coeffs, weights = [], []
    for t in itertools.product(*(range(k + 1) for k in multiplicities)):
        t = np.array(t)
        mirror = m - t
        if tuple(t) > tuple(mirror):
            continue
        w = float(np.prod([math.comb(int(k), int(j)) for k, j in zip(m, t)])) * (-1.0) ** int(t.sum())
        coeffs.append(m - 2 * t)
        weights.append(w if tuple(t) == tuple(mirror) else 2.0 * w)
    coeffs, weights = np.array(coeffs, dtype=float), np.array(weights)
    coeffs.setflags(write=False)
    weights.setflags(write=False)
    return coeffs, weights


def polarize_grouped(
    P: HomogeneousPolynomial, args: np.ndarray, multiplicities: Sequence[int]
) -> tuple[np.ndarray, np.ndarray]:
    """Polarization with argument ``g`` repeated ``multiplicities[g]`` times.

    ``args`` has shape ``(..., groups, d)`` (real or complex). Returns
    ``(value, scale)`` with shapes ``(..., p)``; ``scale`` is the size of the
    cancelling terms and is what rounding errors in ``value`` should be
    measured against.
    """
    n = P.degree
    mult = tuple(int(k) for k in multiplicities)
    if min(mult) < 1 or sum(mult) != n:
        raise ValueError(f"multiplicities {mult} must be positive and sum to the degree {n}")
    args = np.asarray(args)
    if args.shape[-2] != len(mult):
        raise ValueError(f"expected {len(mult)} argument groups, got {args.shape[-2]}")
    if args.shape[-1] != P.domain_dim:
        raise DimensionError(f"expected arguments of dimension {P.domain_dim}, got {args.shape[-1]}")
    coeffs, weights = sign_patterns(mult)
    points = np.einsum("eg,...gd->...ed", coeffs, args)
    values, mags = P.evaluate_with_magnitude(points)
    norm = 2.0**n * math.factorial(n)
    value = np.einsum("e,...ep->...p", weights, values) / norm
    scale = np.einsum("e,...ep->...p", np.abs(weights), mags) / norm
    return value, scale


def polarize_batch(P: HomogeneousPolynomial, args: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Polarization on a batch of argument tuples of shape ``(..., n, d)``."""
    args = np.asarray(args)
    if args.shape[-2] != P.degree:
        raise ValueError(f"degree-{P.degree} polarization needs exactly {P.degree} arguments, got {args.shape[-2]}")
    return polarize_grouped(P, args, (1,) * P.degree)


def _stack_args(P: HomogeneousPolynomial, args: Sequence[np.ndarray]) -> np.ndarray:
    if len(args) != P.degree:
        raise ValueError(f"degree-{P.degree} polarization needs exactly {P.degree} arguments, got {len(args)}")
    dims = {np.shape(a)[-1] for a in args}
    if dims != {P.domain_dim}:
        raise DimensionError(f"expected arguments of dimension {P.domain_dim}, got {sorted(dims)}")
    return np.stack([np.asarray(a) for a in args])


def polarize(P: HomogeneousPolynomial, args: Sequence[np.ndarray]) -> np.ndarray:
    """Value of the symmetric n-linear map of ``P`` at ``args``."""
    return polarize_batch(P, _stack_args(P, args).astype(float))[0]


def power_eval(P: HomogeneousPolynomial, f: np.ndarray, g: np.ndarray, k: int) -> np.ndarray:
    """``P^(f^(n-k) g^k)``: ``n-k`` copies of ``f`` followed by ``k`` copies of ``g``."""
    n = P.degree
    if not 0 <= k <= n:
        raise ValueError(f"k must lie in 0..{n}, got {k}")
    groups = [(f, n - k), (g, k)]
    groups = [(a, m) for a, m in groups if m]
    args = np.stack([np.asarray(a, dtype=float) for a, _ in groups])
    return polarize_grouped(P, args, [m for _, m in groups])[0]


def make_diagonal(n: int, c: Sequence[float] | np.ndarray) -> HomogeneousPolynomial:
    """``P(f) = sum_i c_i f_i^n``.

    ``c`` may be 1-D (scalar codomain) or of shape ``(d, p)``.
    """
    c = np.asarray(c, dtype=float)
    if c.ndim == 1:
        c = c[:, None]
    d, p = c.shape
    monomials = {}
    for i in range(d):
        alpha = [0] * d
        alpha[i] = n
        monomials[tuple(alpha)] = c[i]
    return HomogeneousPolynomial(n, d, p, monomials)


def _random_coeff(rng: np.random.Generator, p: int) -> np.ndarray:
    # Magnitudes kept away from zero so present monomials are visible to the checks.
    return rng.uniform(0.1, 1.0, size=p) * rng.choice([-1.0, 1.0], size=p)


def make_random(n: int, d: int, p: int, density: float, seed: int | np.random.Generator) -> HomogeneousPolynomial:
    """Random polynomial with every pure power and a ``density`` share of mixed monomials.

    Each mixed monomial is kept independently with probability ``density``.
    Coefficients lie in ``[-1, -0.1] u [0.1, 1]``.
    """
    if not 0 < density <= 1:
        raise ValueError(f"density must lie in (0, 1], got {density}")
    rng = np.random.default_rng(seed)
    monomials = {}
    for alpha in multi_indices(check_degree(n), d):
        if is_pure_power(alpha) or rng.random() < density:
            monomials[alpha] = _random_coeff(rng, p)
    return HomogeneousPolynomial(n, d, p, monomials)


def make_random_diagonal(n: int, d: int, p: int, seed: int | np.random.Generator) -> HomogeneousPolynomial:
    rng = np.random.default_rng(seed)
    return make_diagonal(n, rng.uniform(-1.0, 1.0, size=(d, p)))
