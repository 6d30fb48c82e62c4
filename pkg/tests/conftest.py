import itertools
import math

import numpy as np
import pytest
from hypothesis import strategies as st

from oapoly.polynomial import HomogeneousPolynomial, make_diagonal


def symmetrized_multilinear(P: HomogeneousPolynomial, args) -> np.ndarray:
    """Brute-force symmetric multilinear map: average over slot permutations.

    Each monomial x^alpha is the diagonal of the multilinear form that picks
    variable idx[j] from slot j; symmetrizing over all n! slot orders gives the
    unique symmetric form. Independent of the polarization identity.
    """
    n = P.degree
    args = [np.asarray(a) for a in args]
    dtype = complex if any(np.iscomplexobj(a) for a in args) else float
    total = np.zeros(P.codomain_dim, dtype=dtype)
    for alpha, coeff in P.monomials.items():
        idx = [i for i, a in enumerate(alpha) for _ in range(a)]
        acc = 0
        for perm in itertools.permutations(range(n)):
            term = 1
            for slot, var in zip(perm, idx):
                term = term * args[slot][var]
            acc += term
        total = total + coeff * (acc / math.factorial(n))
    return total


@pytest.fixture
def square_of_sum():
    """P(f) = (f1 + f2)^2: the basic polynomial that is not orthogonally additive."""
    return HomogeneousPolynomial(2, 2, 1, {(2, 0): [1.0], (1, 1): [2.0], (0, 2): [1.0]})


@pytest.fixture
def product_form():
    """P(x) = x1 x2."""
    return HomogeneousPolynomial(2, 2, 1, {(1, 1): [1.0]})


@pytest.fixture
def diagonal3():
    return make_diagonal(3, [1.0, -2.0, 0.5])


def vectors(dim, lo=-10.0, hi=10.0):
    return st.lists(st.floats(lo, hi, allow_nan=False), min_size=dim, max_size=dim).map(np.array)


def positive_vectors(dim, hi=10.0):
    return vectors(dim, 0.0, hi)
