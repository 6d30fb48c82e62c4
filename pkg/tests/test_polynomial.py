import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import symmetrized_multilinear
from oapoly.diagnostics import check_oa, equivalence_suite
from oapoly.polynomial import (
    HomogeneousPolynomial,
    make_diagonal,
    make_random,
    multi_indices,
    poly_eval,
    polarize,
    polarize_batch,
    polarize_grouped,
    power_eval,
)
from oapoly.vlattice import DimensionError, random_disjoint_pair


def naive_polarize(P, args):
    # full 2^n signed sum, no grouping or mirror folding
    n = P.degree
    total = 0
    for eps in itertools.product((1, -1), repeat=n):
        point = sum(e * a for e, a in zip(eps, args))
        total = total + np.prod(eps) * poly_eval(P, point)
    return total / (2**n * math.factorial(n))


def close_at_scale(a, b, scale, rtol=1e-10):
    return np.all(np.abs(a - b) <= rtol * np.maximum(scale, np.maximum(np.abs(a), np.abs(b))) + 1e-12)


def test_multi_indices_count():
    for n, d in [(2, 2), (3, 4), (5, 6)]:
        idx = list(multi_indices(n, d))
        assert len(idx) == math.comb(n + d - 1, d - 1) == len(set(idx))
        assert all(sum(a) == n for a in idx)


def test_construction_validation():
    with pytest.raises(ValueError):
        HomogeneousPolynomial(1, 2, 1, {(1, 0): [1.0]})
    with pytest.raises(ValueError):
        HomogeneousPolynomial(2, 2, 1, {(2, 1): [1.0]})
    with pytest.raises(ValueError):
        HomogeneousPolynomial(2, 2, 1, {(2, 0, 0): [1.0]})
    with pytest.raises(ValueError):
        HomogeneousPolynomial(2, 2, 2, {(2, 0): [1.0]})
    with pytest.raises(ValueError):
        HomogeneousPolynomial(2, 2, 1, {(2, 0): [float("inf")]})


def test_json_roundtrip_and_duplicates():
    P = make_random(3, 3, 2, 0.5, seed=4)
    Q = HomogeneousPolynomial.from_json(P.to_json())
    assert Q.to_json() == P.to_json()
    bad = {"degree": 2, "domain_dim": 1, "codomain_dim": 1,
           "monomials": [{"alpha": [2], "coeff": [1.0]}, {"alpha": [2], "coeff": [2.0]}]}
    with pytest.raises(ValueError, match="duplicate"):
        HomogeneousPolynomial.from_json(bad)
    with pytest.raises(ValueError):
        HomogeneousPolynomial.from_json({"degree": 2})


def test_poly_eval_examples():
    P = make_diagonal(2, [1.0, 1.0])
    np.testing.assert_array_equal(poly_eval(P, np.array([1.0, 2.0])), [5.0])
    Q = make_random(4, 3, 2, 1.0, seed=1)
    np.testing.assert_array_equal(poly_eval(Q, np.zeros(3)), np.zeros(2))
    f = np.random.default_rng(0).uniform(-2, 2, 3)
    np.testing.assert_allclose(poly_eval(Q, 2 * f), 2**4 * poly_eval(Q, f), rtol=1e-13)
    with pytest.raises(DimensionError):
        poly_eval(Q, np.zeros(2))


def test_polarize_diagonal_of_symmetric_map():
    P = make_random(3, 4, 2, 1.0, seed=2)
    f = np.array([0.5, -1.0, 2.0, 3.0])
    np.testing.assert_allclose(polarize(P, [f, f, f]), poly_eval(P, f), rtol=1e-12)


def test_polarize_product_form(product_form):
    e1, e2 = np.eye(2)
    assert polarize(product_form, [e1, e2])[0] == 0.5


def test_polarize_symmetric_under_permutations():
    P = make_random(3, 3, 1, 1.0, seed=3)
    rng = np.random.default_rng(3)
    args = list(rng.uniform(-3, 3, size=(3, 3)))
    base = polarize(P, args)
    for perm in itertools.permutations(range(3)):
        np.testing.assert_allclose(polarize(P, [args[i] for i in perm]), base, rtol=1e-12)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_polarize_matches_symmetrization_oracle(n):
    rng = np.random.default_rng(n)
    for seed in range(5):
        P = make_random(n, 3, 2, 0.7, seed=seed)
        args = list(rng.uniform(-5, 5, size=(n, 3)))
        value, scale = polarize_batch(P, np.stack(args))
        assert close_at_scale(value, symmetrized_multilinear(P, args), scale)
        assert close_at_scale(value, naive_polarize(P, args), scale)


@pytest.mark.parametrize("mult", [(1, 1), (2, 1), (2, 2), (3, 2), (1, 1, 1), (2, 2, 1), (4, 1)])
def test_grouped_stencil_matches_naive(mult):
    n = sum(mult)
    P = make_random(n, 3, 1, 1.0, seed=n)
    groups = np.random.default_rng(1).uniform(-3, 3, size=(len(mult), 3))
    args = [g for g, m in zip(groups, mult) for _ in range(m)]
    value, scale = polarize_grouped(P, groups, mult)
    assert close_at_scale(value, naive_polarize(P, args), scale)


def test_polarize_argument_errors():
    P = make_diagonal(3, [1.0, 1.0])
    with pytest.raises(ValueError):
        polarize(P, [np.ones(2)] * 2)
    with pytest.raises(DimensionError):
        polarize(P, [np.ones(3)] * 3)
    with pytest.raises(ValueError):
        polarize_grouped(P, np.ones((2, 2)), (2, 2))


def test_power_eval_boundaries():
    P = make_random(4, 3, 1, 1.0, seed=6)
    f, g = np.array([1.0, -2.0, 0.5]), np.array([0.0, 3.0, 1.0])
    np.testing.assert_allclose(power_eval(P, f, g, 0), poly_eval(P, f), rtol=1e-12)
    np.testing.assert_allclose(power_eval(P, f, g, 4), poly_eval(P, g), rtol=1e-12)
    with pytest.raises(ValueError):
        power_eval(P, f, g, 5)
    with pytest.raises(ValueError):
        power_eval(P, f, g, -1)


def test_power_eval_square_of_sum(square_of_sum):
    e1, e2 = np.eye(2)
    assert power_eval(square_of_sum, e1, e2, 1)[0] == 1.0


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_power_eval_vanishes_for_diagonal_on_disjoint_pairs(n):
    P = make_diagonal(n, np.random.default_rng(n).uniform(-1, 1, 5))
    for seed in range(50):
        f, g = random_disjoint_pair(5, False, seed)
        for k in range(1, n):
            assert abs(power_eval(P, f, g, k)[0]) <= 1e-12 * max(1.0, abs(poly_eval(P, f + g)[0]))


def test_make_diagonal_examples():
    P = make_diagonal(2, [1.0, 1.0])
    assert set(P.monomials) == {(2, 0), (0, 2)}
    np.testing.assert_array_equal(poly_eval(P, np.array([1.0, 2.0])), [5.0])
    Z = make_diagonal(3, [0.0, 0.0, 0.0])
    np.testing.assert_array_equal(poly_eval(Z, np.array([1.0, 2.0, 3.0])), [0.0])
    assert check_oa(make_diagonal(4, [1.0, -0.5, 2.0]), samples=300).passed


def test_make_random_determinism_and_bounds():
    a, b = make_random(3, 4, 2, 0.5, seed=10), make_random(3, 4, 2, 0.5, seed=10)
    assert a.to_json() == b.to_json()
    coeffs = np.array(list(a.monomials.values()))
    assert np.all(np.abs(coeffs) <= 1)
    with pytest.raises(ValueError):
        make_random(3, 4, 2, 0.0, seed=0)


def test_make_random_full_density_has_mixed_monomials():
    for seed in range(100):
        n, d = 2 + seed % 4, 2 + seed % 5
        assert make_random(n, d, 1, 1.0, seed=seed).mixed_monomials


def test_make_random_without_mixed_monomials_is_oa():
    found = 0
    for seed in range(200):
        P = make_random(3, 2, 1, 0.05, seed=seed)
        if P.mixed_monomials:
            continue
        found += 1
        report = equivalence_suite(P)
        assert all(report.pass_flags.values()) and report.coherent
    assert found > 0


# --- invariants -------------------------------------------------------------

cases = st.tuples(st.integers(2, 5), st.integers(1, 4), st.integers(0, 10**6))


@settings(max_examples=60, deadline=None)
@given(cases, st.floats(-2, 2))
def test_binomial_expansion(case, lam):
    n, d, seed = case
    rng = np.random.default_rng(seed)
    P = make_random(n, d, 2, 0.6, seed=rng)
    f, g = rng.uniform(-10, 10, size=(2, d))
    lhs = poly_eval(P, f + lam * g)
    terms = [math.comb(n, k) * lam**k * power_eval(P, f, g, k) for k in range(n + 1)]
    scale = P.magnitude(np.abs(f) + abs(lam) * np.abs(g))
    assert close_at_scale(lhs, sum(terms), scale, rtol=1e-9)


@settings(max_examples=60, deadline=None)
@given(cases, st.floats(-3, 3))
def test_multilinearity(case, lam):
    n, d, seed = case
    rng = np.random.default_rng(seed)
    P = make_random(n, d, 1, 0.6, seed=rng)
    args = rng.uniform(-5, 5, size=(n, d))
    h = rng.uniform(-5, 5, size=d)
    slot = int(rng.integers(n))
    moved = args.copy()
    moved[slot] = lam * args[slot] + h
    other = args.copy()
    other[slot] = h
    v, s1 = polarize_batch(P, moved)
    a, s2 = polarize_batch(P, args)
    b, s3 = polarize_batch(P, other)
    assert close_at_scale(v, lam * a + b, s1 + abs(lam) * s2 + s3, rtol=1e-9)
