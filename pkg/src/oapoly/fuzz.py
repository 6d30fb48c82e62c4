"""Randomized coherence campaigns over generated polynomials.

Every trial draws a polynomial, runs the full equivalence suite on it and
records whether the seven verdicts agree. All randomness comes from the
campaign seed through named sub-streams keyed by trial index, so a trial can
be replayed alone and parallel execution never changes the summary.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any, Sequence

import numpy as np

from .diagnostics import CRITERIA, SuiteConfig, TolerancePolicy, equivalence_suite
from .polynomial import HomogeneousPolynomial, make_random, make_random_diagonal

GENERATORS = ("diagonal", "sparse", "dense")
SPARSE_DENSITY = 0.15

# Sub-stream ids under the campaign seed.
STREAM_GENERATOR = 101
STREAM_WITNESS = 102


@dataclass(frozen=True)
class FuzzConfig:
    trials: int = 100
    degrees: tuple[int, ...] = (2, 3, 4, 5)
    dims: tuple[int, ...] = (2, 3, 4, 5, 6)
    codims: tuple[int, ...] = (1, 2)
    # Arity choices for the root-mean-power criterion; "n" means the degree.
    arities: tuple[int | str, ...] = (2, 3, "n")
    generators: tuple[str, ...] = GENERATORS
    samples: int = 200
    seed: int = 0
    tol: TolerancePolicy = field(default_factory=TolerancePolicy)

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not (self.degrees and self.dims and self.codims and self.arities and self.generators):
            raise ValueError("every choice list must be non-empty")
        if min(self.degrees) < 2:
            raise ValueError("degrees must be >= 2")
        if min(self.dims) < 1 or min(self.codims) < 1:
            raise ValueError("dimensions must be >= 1")
        for a in self.arities:
            if a != "n" and (not isinstance(a, int) or a < 2):
                raise ValueError(f"arity must be an integer >= 2 or 'n', got {a!r}")
        unknown = set(self.generators) - set(GENERATORS)
        if unknown:
            raise ValueError(f"unknown generators: {sorted(unknown)}")

    def to_json(self) -> dict[str, Any]:
        out = asdict(self)
        for key in ("degrees", "dims", "codims", "arities", "generators"):
            out[key] = list(out[key])
        return out


@dataclass(frozen=True)
class Trial:
    index: int
    degree: int
    dim: int
    codim: int
    arity: int
    generator: str
    polynomial: HomogeneousPolynomial
    suite_seed: int


def draw_trial(config: FuzzConfig, index: int) -> Trial:
    rng = np.random.default_rng([config.seed, STREAM_GENERATOR, index])
    n = int(rng.choice(config.degrees))
    d = int(rng.choice(config.dims))
    p = int(rng.choice(config.codims))
    arity = config.arities[int(rng.integers(len(config.arities)))]
    r = n if arity == "n" else int(arity)
    gen = config.generators[int(rng.integers(len(config.generators)))]
    if gen == "diagonal":
        P = make_random_diagonal(n, d, p, rng)
    else:
        P = make_random(n, d, p, SPARSE_DENSITY if gen == "sparse" else 1.0, rng)
    suite_seed = int(np.random.default_rng([config.seed, STREAM_WITNESS, index]).integers(2**31))
    return Trial(index, n, d, p, r, gen, P, suite_seed)


def run_trial(config: FuzzConfig, index: int) -> dict[str, Any]:
    trial = draw_trial(config, index)
    suite = SuiteConfig(samples=config.samples, seed=trial.suite_seed, tol=config.tol, r=trial.arity)
    report = equivalence_suite(trial.polynomial, suite)
    flags = report.pass_flags
    decomposition_ok = report.decomposition.passed or not flags["ii"]
    # On R^d the orthogonally additive polynomials are exactly the diagonal ones.
    expected = not trial.polynomial.mixed_monomials
    record = {
        "trial": index,
        "degree": trial.degree,
        "dim": trial.dim,
        "codim": trial.codim,
        "r": trial.arity,
        "generator": trial.generator,
        "pass": flags,
        "coherent": report.coherent,
        "pos_oa_agrees": flags["i"] == flags["ii"],
        "decomposition_ok": decomposition_ok,
        "matches_structure": report.coherent and flags["i"] == expected,
    }
    if not (report.coherent and decomposition_ok):
        record["bundle"] = {"polynomial": trial.polynomial.to_json(), "report": report.to_json()}
    return record


def _run_chunk(args: tuple[FuzzConfig, Sequence[int]]) -> list[dict[str, Any]]:
    config, indices = args
    return [run_trial(config, i) for i in indices]


def run_campaign(config: FuzzConfig, jobs: int = 1) -> dict[str, Any]:
    """Run all trials and summarize; output is independent of ``jobs``."""
    indices = list(range(config.trials))
    if jobs == 0:
        jobs = os.cpu_count() or 1
    if jobs <= 1:
        records = _run_chunk((config, indices))
    else:
        chunks = [indices[i::jobs] for i in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_run_chunk, [(config, c) for c in chunks]))
        records = sorted((rec for part in parts for rec in part), key=lambda rec: rec["trial"])
    return summarize(config, records)


def summarize(config: FuzzConfig, records: list[dict[str, Any]]) -> dict[str, Any]:
    per_criterion = {
        cid: {"pass": sum(rec["pass"][cid] for rec in records), "fail": sum(not rec["pass"][cid] for rec in records)}
        for cid in CRITERIA
    }
    by_generator: dict[str, dict[str, int]] = {}
    for rec in records:
        bucket = by_generator.setdefault(rec["generator"], {"trials": 0, "all_pass": 0, "all_fail": 0})
        bucket["trials"] += 1
        flags = set(rec["pass"].values())
        bucket["all_pass"] += flags == {True}
        bucket["all_fail"] += flags == {False}
    incoherent = [rec for rec in records if not rec["coherent"]]
    return {
        "config": config.to_json(),
        "trials": len(records),
        "coherent": not incoherent,
        "incoherent_count": len(incoherent),
        "pos_oa_disagreements": sum(not rec["pos_oa_agrees"] for rec in records),
        "decomposition_violations": sum(not rec["decomposition_ok"] for rec in records),
        "structure_mismatches": sum(not rec["matches_structure"] for rec in records),
        "per_criterion": per_criterion,
        "by_generator": dict(sorted(by_generator.items())),
        "incoherent": incoherent,
        "decomposition_failures": [rec for rec in records if not rec["decomposition_ok"] and rec["coherent"]],
    }
