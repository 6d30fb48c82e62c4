"""Sampled checks of the seven equivalent characterizations of orthogonal additivity.

Each criterion compares two sides of an identity over a batch of random
witnesses and reports the worst normalized residual

    |lhs - rhs| / (atol + rtol * max(|lhs|, |rhs|, scale))

per output component, where ``scale`` is the magnitude of the terms that
were summed to produce the two sides. A criterion fails iff some residual
exceeds 1. Failures are conclusive; passes hold at the sampled witnesses.

Criterion ids:

    i    P(f+g) = P(f) + P(g)                    f, g disjoint
    ii   same, f, g disjoint and positive
    iii  P^(f_1..f_n) = 0                        some f_i, f_j disjoint
    iv   P^(f^(n-k) g^k) = 0, k = 1..n-1         f, g disjoint
    v    P(S_n(f_1..f_r)) = sum P(f_k)           f_k positive
    vi   P(G_n(f_1..f_n)) = P^(f_1..f_n)         f_k positive
    vii  P(|z|) = P^_C(z^(n/2) zbar^(n/2))       (n even; |z| fills the odd slot)

plus ``decomposition``: P(f) = P(f+) + P(-f-), which holds for positively
orthogonally additive P.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Mapping

import numpy as np

from .complexify import ComplexLatticeVector, complex_polarize_batch, modulus_identity_args
from .means import gm_array, rmp_array
from .polynomial import HomogeneousPolynomial, polarize_batch, polarize_grouped
from .vlattice import pos_neg_decompose, random_disjoint_pairs, random_magnitudes

CRITERIA = ("i", "ii", "iii", "iv", "v", "vi", "vii")
DECOMPOSITION = "decomposition"

DEFAULT_SAMPLES = 200
# Share of entries zeroed in generic witnesses, to exercise support structure.
ZERO_PROB = 0.25


@dataclass(frozen=True)
class TolerancePolicy:
    rtol: float = 1e-9
    atol: float = 1e-9

    def __post_init__(self):
        if not (self.rtol > 0 and self.atol > 0):
            raise ValueError("rtol and atol must be positive")

    def residual(self, lhs, rhs, scale=0.0) -> np.ndarray:
        """Normalized residual, maximized over the last (codomain) axis."""
        lhs, rhs = np.asarray(lhs), np.asarray(rhs)
        size = np.maximum(np.maximum(np.abs(lhs), np.abs(rhs)), scale)
        return (np.abs(lhs - rhs) / (self.atol + self.rtol * size)).max(axis=-1)

    def close(self, lhs, rhs, scale=0.0) -> bool:
        return bool(np.all(self.residual(lhs, rhs, scale) <= 1.0))


@dataclass
class CriterionResult:
    criterion: str
    passed: bool
    max_violation: float
    witness: dict[str, Any] | None
    evaluations: int = 0

    def to_json(self) -> dict[str, Any]:
        return {
            "pass": self.passed,
            "max_violation": self.max_violation,
            "evaluations": self.evaluations,
            "witness": self.witness,
        }


@dataclass
class EquivalenceReport:
    results: dict[str, CriterionResult]
    coherent: bool
    seed: int
    config: dict[str, Any]
    decomposition: CriterionResult | None = None

    @property
    def pass_flags(self) -> dict[str, bool]:
        return {cid: res.passed for cid, res in self.results.items()}

    def to_json(self) -> dict[str, Any]:
        out = {
            "criteria": {cid: res.to_json() for cid, res in self.results.items()},
            "coherent": self.coherent,
            "seed": self.seed,
            "config": self.config,
        }
        if self.decomposition is not None:
            out["decomposition"] = self.decomposition.to_json()
        return out


@dataclass(frozen=True)
class SuiteConfig:
    samples: int = DEFAULT_SAMPLES
    seed: int = 0
    tol: TolerancePolicy = field(default_factory=TolerancePolicy)
    r: int | None = None
    criteria: tuple[str, ...] = CRITERIA
    decomposition: bool = True

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if self.r is not None and self.r < 2:
            raise ValueError("r must be >= 2")
        unknown = set(self.criteria) - set(CRITERIA)
        if unknown:
            raise ValueError(f"unknown criteria: {sorted(unknown)}")

    def arity(self, n: int) -> int:
        return self.r if self.r is not None else max(2, n)

    def to_json(self) -> dict[str, Any]:
        out = asdict(self)
        out["criteria"] = list(self.criteria)
        return out


# --- witness generation ---------------------------------------------------


def _generic(rng: np.random.Generator, shape, positive_only: bool) -> np.ndarray:
    x = random_magnitudes(rng, shape, positive_only)
    return np.where(rng.random(shape) < ZERO_PROB, 0.0, x)


def _pairs(P: HomogeneousPolynomial, rng, count: int, positive_only: bool):
    return random_disjoint_pairs(rng, count, P.domain_dim, positive_only, nonempty=P.domain_dim >= 2)


def _draw_oa(P, rng, samples, r):
    # Half positive pairs, half mixed-sign pairs.
    npos = samples // 2
    f1, g1 = _pairs(P, rng, npos, True)
    f2, g2 = _pairs(P, rng, samples - npos, False)
    return {"f": np.vstack([f1, f2]), "g": np.vstack([g1, g2])}


def _draw_pos_oa(P, rng, samples, r):
    f, g = _pairs(P, rng, samples, True)
    return {"f": f, "g": g}


def _draw_orthosym(P, rng, samples, r):
    n, d = P.degree, P.domain_dim
    args = _generic(rng, (samples, n, d), False)
    f, g = _pairs(P, rng, samples, False)
    rows = np.arange(samples)
    i = rng.integers(0, n, size=samples)
    j = (i + rng.integers(1, n, size=samples)) % n
    args[rows, i] = f
    args[rows, j] = g
    return {"args": args}


def _draw_cross(P, rng, samples, r):
    f, g = _pairs(P, rng, samples, False)
    return {"f": f, "g": g, "k": np.arange(1, P.degree)}


def _draw_rmp(P, rng, samples, r):
    return {"fs": _generic(rng, (samples, r, P.domain_dim), True)}


def _draw_gm(P, rng, samples, r):
    return {"fs": _generic(rng, (samples, P.degree, P.domain_dim), True)}


def _draw_complex(P, rng, samples, r):
    shape = (samples, P.domain_dim)
    return {"z": _generic(rng, shape, False) + 1j * _generic(rng, shape, False)}


def _draw_decomposition(P, rng, samples, r):
    return {"f": _generic(rng, (samples, P.domain_dim), False)}


# --- the two sides of each identity ---------------------------------------
# Each returns (lhs, rhs, scale) with shape (samples, K, p).


def _k1(*arrays):
    return tuple(a[:, None, :] for a in arrays)


def _sides_oa(P, batch):
    f, g = batch["f"], batch["g"]
    lhs = P.evaluate(f + g)
    rhs = P.evaluate(f) + P.evaluate(g)
    scale = P.magnitude(f + g) + P.magnitude(f) + P.magnitude(g)
    return _k1(lhs, rhs, scale)


def _sides_orthosym(P, batch):
    value, scale = polarize_batch(P, batch["args"])
    return _k1(value, np.zeros_like(value), scale)


def _sides_cross(P, batch):
    n = P.degree
    pair = np.stack([batch["f"], batch["g"]], axis=-2)
    values, scales = zip(*(polarize_grouped(P, pair, (n - k, k)) for k in batch["k"]))
    value, scale = np.stack(values, axis=1), np.stack(scales, axis=1)
    return value, np.zeros_like(value), scale


def _sides_rmp(P, batch):
    F = batch["fs"]
    s = rmp_array(P.degree, F)
    lhs = P.evaluate(s)
    rhs = P.evaluate(F).sum(axis=-2)
    scale = P.magnitude(s) + P.magnitude(F).sum(axis=-2)
    return _k1(lhs, rhs, scale)


def _sides_gm(P, batch):
    F = batch["fs"]
    gm = gm_array(P.degree, F)
    lhs = P.evaluate(gm)
    rhs, scale = polarize_batch(P, F)
    return _k1(lhs, rhs, scale + P.magnitude(gm))


def _sides_complex(P, batch):
    z = batch["z"]
    mod = np.abs(z)
    lhs = P.evaluate(mod)
    rhs, scale = complex_polarize_batch(P, *modulus_identity_args(z, P.degree))
    # |lhs - rhs| over complex rhs also forces Im(rhs) to vanish.
    return _k1(lhs, rhs, scale + P.magnitude(mod))


def _sides_decomposition(P, batch):
    f = batch["f"]
    fp, fn = pos_neg_decompose(f)
    lhs = P.evaluate(f)
    rhs = P.evaluate(fp) + P.evaluate(-fn)
    scale = P.magnitude(f) + P.magnitude(fp) + P.magnitude(fn)
    return _k1(lhs, rhs, scale)


# --- witness (de)serialization --------------------------------------------


def _vec(x) -> list[float]:
    return [float(v) for v in x]


def _value_json(v: np.ndarray):
    if np.iscomplexobj(v):
        return {"re": _vec(v.real), "im": _vec(v.imag)}
    return _vec(v)


def _pair_witness(batch, s, k):
    return {"f": _vec(batch["f"][s]), "g": _vec(batch["g"][s])}


def _pair_from(w):
    return {"f": np.array([w["f"]], dtype=float), "g": np.array([w["g"]], dtype=float)}


def _cross_witness(batch, s, k):
    return {"f": _vec(batch["f"][s]), "g": _vec(batch["g"][s]), "k": int(batch["k"][k])}


def _cross_from(w):
    return {**_pair_from(w), "k": np.array([int(w["k"])])}


def _tuple_witness(key):
    def to_json(batch, s, k):
        return {key: [_vec(x) for x in batch[key][s]]}

    return to_json


def _tuple_from(key):
    def from_json(w):
        return {key: np.array([w[key]], dtype=float)}

    return from_json


def _complex_witness(batch, s, k):
    return {"z": ComplexLatticeVector.from_complex(batch["z"][s]).to_json()}


def _complex_from(w):
    return {"z": ComplexLatticeVector.from_json(w["z"]).to_complex()[None, :]}


def _vector_witness(batch, s, k):
    return {"f": _vec(batch["f"][s])}


def _vector_from(w):
    return {"f": np.array([w["f"]], dtype=float)}


@dataclass(frozen=True)
class Criterion:
    cid: str
    description: str
    stream: int
    draw: Callable
    sides: Callable
    to_witness: Callable
    from_witness: Callable


_REGISTRY: dict[str, Criterion] = {
    c.cid: c
    for c in [
        Criterion("i", "orthogonally additive", 1, _draw_oa, _sides_oa, _pair_witness, _pair_from),
        Criterion("ii", "positively orthogonally additive", 2, _draw_pos_oa, _sides_oa, _pair_witness, _pair_from),
        Criterion("iii", "symmetric map orthosymmetric", 3, _draw_orthosym, _sides_orthosym,
                  _tuple_witness("args"), _tuple_from("args")),
        Criterion("iv", "mixed powers of disjoint pairs vanish", 4, _draw_cross, _sides_cross,
                  _cross_witness, _cross_from),
        Criterion("v", "root mean power identity", 5, _draw_rmp, _sides_rmp, _tuple_witness("fs"), _tuple_from("fs")),
        Criterion("vi", "geometric mean identity", 6, _draw_gm, _sides_gm, _tuple_witness("fs"), _tuple_from("fs")),
        Criterion("vii", "complex modulus identity", 7, _draw_complex, _sides_complex, _complex_witness, _complex_from),
        Criterion(DECOMPOSITION, "P(f) = P(f+) + P(-f-)", 8, _draw_decomposition, _sides_decomposition,
                  _vector_witness, _vector_from),
    ]
}


def criterion_rng(seed: int, cid: str) -> np.random.Generator:
    """Independent witness stream for one criterion under a run seed."""
    return np.random.default_rng([int(seed), _REGISTRY[cid].stream])


def _worst(P, crit: Criterion, batch, tol: TolerancePolicy) -> CriterionResult:
    lhs, rhs, scale = crit.sides(P, batch)
    res = tol.residual(lhs, rhs, scale)
    s, k = np.unravel_index(int(np.argmax(res)), res.shape)
    worst = float(res[s, k])
    witness = crit.to_witness(batch, s, k)
    witness["lhs"] = _value_json(lhs[s, k])
    witness["rhs"] = _value_json(rhs[s, k])
    return CriterionResult(crit.cid, worst <= 1.0, worst, witness, int(res.size))


def run_criterion(
    P: HomogeneousPolynomial,
    cid: str,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    tol: TolerancePolicy = TolerancePolicy(),
    r: int | None = None,
) -> CriterionResult:
    if samples < 1:
        raise ValueError("samples must be >= 1")
    crit = _REGISTRY[cid]
    r = max(2, P.degree) if r is None else r
    if r < 2:
        raise ValueError("r must be >= 2")
    batch = crit.draw(P, criterion_rng(seed, cid), samples, r)
    return _worst(P, crit, batch, tol)


def evaluate_witness(
    P: HomogeneousPolynomial, cid: str, witness: Mapping[str, Any], tol: TolerancePolicy = TolerancePolicy()
) -> CriterionResult:
    """Re-run one criterion on a single (e.g. reported) witness."""
    crit = _REGISTRY[cid]
    return _worst(P, crit, crit.from_witness(witness), tol)


def replay(P: HomogeneousPolynomial, result: CriterionResult, tol: TolerancePolicy = TolerancePolicy()) -> CriterionResult:
    return evaluate_witness(P, result.criterion, result.witness, tol)


def check_oa(P, samples=DEFAULT_SAMPLES, seed=0, tol=TolerancePolicy()) -> CriterionResult:
    return run_criterion(P, "i", samples, seed, tol)


def check_pos_oa(P, samples=DEFAULT_SAMPLES, seed=0, tol=TolerancePolicy()) -> CriterionResult:
    return run_criterion(P, "ii", samples, seed, tol)


def check_orthosymmetric(P, samples=DEFAULT_SAMPLES, seed=0, tol=TolerancePolicy()) -> CriterionResult:
    return run_criterion(P, "iii", samples, seed, tol)


def check_cross_terms(P, samples=DEFAULT_SAMPLES, seed=0, tol=TolerancePolicy()) -> CriterionResult:
    return run_criterion(P, "iv", samples, seed, tol)


def check_rmp_identity(P, r=None, samples=DEFAULT_SAMPLES, seed=0, tol=TolerancePolicy()) -> CriterionResult:
    return run_criterion(P, "v", samples, seed, tol, r=r)


def check_gm_identity(P, samples=DEFAULT_SAMPLES, seed=0, tol=TolerancePolicy()) -> CriterionResult:
    return run_criterion(P, "vi", samples, seed, tol)


def check_complex_identity(P, samples=DEFAULT_SAMPLES, seed=0, tol=TolerancePolicy()) -> CriterionResult:
    return run_criterion(P, "vii", samples, seed, tol)


def check_decomposition(P, samples=DEFAULT_SAMPLES, seed=0, tol=TolerancePolicy()) -> CriterionResult:
    return run_criterion(P, DECOMPOSITION, samples, seed, tol)


def equivalence_suite(P: HomogeneousPolynomial, config: SuiteConfig = SuiteConfig()) -> EquivalenceReport:
    """Run the selected criteria; coherent iff their pass flags all agree."""
    r = config.arity(P.degree)
    results = {
        cid: run_criterion(P, cid, config.samples, config.seed, config.tol, r=r) for cid in config.criteria
    }
    decomposition = None
    if config.decomposition:
        decomposition = run_criterion(P, DECOMPOSITION, config.samples, config.seed, config.tol)
    coherent = len({res.passed for res in results.values()}) <= 1
    cfg = config.to_json()
    cfg["r"] = r
    return EquivalenceReport(results, coherent, config.seed, cfg, decomposition)
