"""Complexification E_C = E + iE of R^d and of symmetric multilinear maps."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from .polynomial import HomogeneousPolynomial, polarize_batch, polarize_grouped
from .vlattice import DimensionError, as_vector, check_same_dim


@dataclass(frozen=True, eq=False)
class ComplexLatticeVector:
    """z = re + i im, an element of the complexified lattice."""

    re: np.ndarray
    im: np.ndarray

    def __post_init__(self):
        re, im = as_vector(self.re), as_vector(self.im)
        check_same_dim(re, im)
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)

    @classmethod
    def from_complex(cls, z) -> "ComplexLatticeVector":
        z = np.asarray(z, dtype=complex)
        return cls(z.real, z.imag)

    @classmethod
    def real(cls, x) -> "ComplexLatticeVector":
        x = as_vector(x)
        return cls(x, np.zeros_like(x))

    def to_complex(self) -> np.ndarray:
        return self.re + 1j * self.im

    def to_json(self) -> dict[str, list[float]]:
        return {"re": [float(x) for x in self.re], "im": [float(x) for x in self.im]}

    @classmethod
    def from_json(cls, obj: Any) -> "ComplexLatticeVector":
        if not isinstance(obj, dict) or "re" not in obj or "im" not in obj:
            raise ValueError("complex vector object needs 're' and 'im' fields")
        return cls(obj["re"], obj["im"])


def conjugate(z: ComplexLatticeVector) -> ComplexLatticeVector:
    return ComplexLatticeVector(z.re, -z.im)


def modulus(z: ComplexLatticeVector) -> np.ndarray:
    """Coordinatewise ``sqrt(re^2 + im^2)``, an element of the positive cone."""
    return np.hypot(z.re, z.im)


def _as_complex_array(arg) -> np.ndarray:
    if isinstance(arg, ComplexLatticeVector):
        return arg.to_complex()
    return np.asarray(arg, dtype=complex)


def complex_polarize_batch(
    P: HomogeneousPolynomial, args: np.ndarray, multiplicities: Sequence[int] | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Complex polarization on ``(..., groups, d)`` arrays; returns ``(value, scale)``.

    Without ``multiplicities`` every argument appears once (``groups == n``).
    """
    args = np.asarray(args, dtype=complex)
    if multiplicities is None:
        return polarize_batch(P, args)
    return polarize_grouped(P, args, multiplicities)


def complex_polarize(P: HomogeneousPolynomial, args: Sequence[ComplexLatticeVector | np.ndarray]) -> np.ndarray:
    """Complex-multilinear extension of the symmetric map of ``P`` at ``args``.

    Plain real arrays are accepted as arguments with zero imaginary part.
    Returns a complex array of length ``p``.
    """
    if len(args) != P.degree:
        raise ValueError(f"degree-{P.degree} polarization needs exactly {P.degree} arguments, got {len(args)}")
    stacked = [_as_complex_array(a) for a in args]
    if {a.shape[-1] for a in stacked} != {P.domain_dim}:
        raise DimensionError(f"expected arguments of dimension {P.domain_dim}")
    return complex_polarize_batch(P, np.stack(stacked))[0]


def modulus_identity_args(z: np.ndarray, n: int) -> tuple[np.ndarray, tuple[int, ...]]:
    """Grouped arguments ``z^(n/2) zbar^(n/2)`` (even n) or ``z^((n-1)/2) zbar^((n-1)/2) |z|`` (odd n).

    ``z`` is a complex array of shape ``(..., d)``. Returns the distinct
    arguments, shape ``(..., groups, d)``, and their multiplicities.
    """
    half = n // 2
    parts, mult = [z, np.conj(z)], [half, half]
    if n % 2:
        parts.append(np.abs(z).astype(complex))
        mult.append(1)
    return np.stack(parts, axis=-2), tuple(mult)


def modulus_identity_rhs(P: HomogeneousPolynomial, z: ComplexLatticeVector) -> np.ndarray:
    """Right-hand side of the complex modulus identity at ``z`` (complex, length ``p``)."""
    args, mult = modulus_identity_args(z.to_complex(), P.degree)
    return complex_polarize_batch(P, args, mult)[0]
