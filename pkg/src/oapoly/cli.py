"""Command-line front end.

    oapoly means {rmp,gm} VECTORS.json --n N [--method closed|variational]
    oapoly check POLY.json [--criteria i,ii,...]
    oapoly fuzz [--n 2,3,4,5] [--dim 2,3,4,5,6] [--trials T]
    oapoly polarize POLY.json ARGS.json

Exit codes: 0 success (or coherent report), 1 incoherent report, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass
from typing import Any, Sequence

import numpy as np

from . import means
from .complexify import ComplexLatticeVector, complex_polarize
from .diagnostics import CRITERIA, SuiteConfig, TolerancePolicy, equivalence_suite
from .fuzz import GENERATORS, FuzzConfig, run_campaign
from .polynomial import DEFAULT_MAX_DEGREE, HomogeneousPolynomial, polarize
from .vlattice import vector_from_json, vectors_from_json

EXIT_OK = 0
EXIT_INCOHERENT = 1
EXIT_INPUT = 2


class InputError(Exception):
    """Bad user input; reported on stderr with exit code 2."""


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    samples: int = 200
    rtol: float = 1e-9
    atol: float = 1e-9
    r: int | None = None
    max_degree: int = DEFAULT_MAX_DEGREE

    def __post_init__(self):
        if self.seed < 0 or self.samples < 1 or self.max_degree < 2:
            raise InputError("seed must be >= 0, samples >= 1 and max-degree >= 2")
        if not (self.rtol > 0 and self.atol > 0):
            raise InputError("rtol and atol must be positive")
        if self.r is not None and self.r < 2:
            raise InputError("--r must be >= 2")

    @property
    def tol(self) -> TolerancePolicy:
        return TolerancePolicy(self.rtol, self.atol)


def _load_json(path: str) -> Any:
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def _emit(payload: Any, out: str | None) -> None:
    text = json.dumps(payload, indent=2) + "\n"
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load_polynomial(path: str, max_degree: int) -> HomogeneousPolynomial:
    try:
        P = HomogeneousPolynomial.from_json(_load_json(path))
    except (ValueError, TypeError, KeyError) as exc:
        raise InputError(f"invalid polynomial: {exc}") from exc
    if P.degree > max_degree:
        raise InputError(f"degree {P.degree} exceeds the cap {max_degree}")
    return P


def _int_list(text: str) -> tuple[int, ...]:
    try:
        values = tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    return values


def _arity_list(text: str) -> tuple[int | str, ...]:
    out: list[int | str] = []
    for tok in text.split(","):
        tok = tok.strip()
        if tok == "n":
            out.append("n")
        else:
            try:
                out.append(int(tok))
            except ValueError:
                raise argparse.ArgumentTypeError(f"arity must be an integer or 'n', got {tok!r}")
    return tuple(out)


def _run_config(args, r: int | None = None) -> RunConfig:
    return RunConfig(
        seed=args.seed, samples=args.samples, rtol=args.rtol, atol=args.atol, r=r, max_degree=args.max_degree,
    )


def cmd_means(args) -> int:
    try:
        vectors = vectors_from_json(_load_json(args.input))
    except ValueError as exc:
        raise InputError(f"invalid vectors: {exc}") from exc
    if any(np.any(v < 0) for v in vectors):
        raise InputError("means are defined on the positive cone; negative entry found")
    if args.budget < 1:
        raise InputError("--budget must be >= 1")
    budget = means.VariationalBudget(args.budget, refine=args.refine, theta_max=args.theta_max)
    closed_fn = means.rmp_closed if args.kind == "rmp" else means.gm_closed
    variational_fn = means.rmp_variational if args.kind == "rmp" else means.gm_variational
    try:
        closed = closed_fn(args.n, vectors)
        payload: dict[str, Any] = {"kind": args.kind, "n": args.n, "method": args.method}
        if args.method == "closed":
            payload["result"] = closed.tolist()
        else:
            result = variational_fn(args.n, vectors, budget, seed=args.seed)
            payload["result"] = result.tolist()
            payload["budget"] = asdict(budget)
            payload["seed"] = args.seed
            # Gap relative to the largest closed-form entry, absolute below 1.
            payload["gap_to_closed"] = float(np.max(np.abs(result - closed)) / max(1.0, float(np.max(closed))))
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    _emit(payload, args.out)
    return EXIT_OK


def cmd_check(args) -> int:
    cfg = _run_config(args, args.r)
    P = _load_polynomial(args.poly, cfg.max_degree)
    criteria = tuple(c.strip() for c in args.criteria.split(","))
    try:
        suite = SuiteConfig(samples=cfg.samples, seed=cfg.seed, tol=cfg.tol, r=cfg.r, criteria=criteria)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    report = equivalence_suite(P, suite)
    payload = report.to_json()
    payload["run_config"] = asdict(cfg)
    _emit(payload, args.out)
    if not report.coherent:
        print("incoherent report: criteria disagree, see witnesses", file=sys.stderr)
        return EXIT_INCOHERENT
    return EXIT_OK


def cmd_fuzz(args) -> int:
    cfg = _run_config(args)
    if max(args.n) > cfg.max_degree:
        raise InputError(f"degree {max(args.n)} exceeds the cap {cfg.max_degree}")
    generators = GENERATORS if args.generator == "mixed" else (args.generator,)
    try:
        config = FuzzConfig(
            trials=args.trials, degrees=args.n, dims=args.dim, codims=args.p, arities=args.r,
            generators=generators, samples=cfg.samples, seed=cfg.seed, tol=cfg.tol,
        )
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    summary = run_campaign(config, jobs=args.jobs)
    _emit(summary, args.out)
    if not summary["coherent"]:
        print(f"{summary['incoherent_count']} incoherent trial(s)", file=sys.stderr)
        return EXIT_INCOHERENT
    return EXIT_OK


def cmd_polarize(args) -> int:
    P = _load_polynomial(args.poly, args.max_degree)
    raw = _load_json(args.args)
    if not isinstance(raw, list):
        raise InputError("argument file must hold a JSON array of vectors")
    try:
        if any(isinstance(a, dict) and "re" in a for a in raw):
            zs = [ComplexLatticeVector.from_json(a) if isinstance(a, dict) and "re" in a
                  else ComplexLatticeVector.real(vector_from_json(a)) for a in raw]
            value = complex_polarize(P, zs)
            payload = {"value": {"re": value.real.tolist(), "im": value.imag.tolist()}}
        else:
            payload = {"value": polarize(P, vectors_from_json(raw)).tolist()}
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    _emit(payload, args.out)
    return EXIT_OK


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=200, help="witnesses per criterion")
    p.add_argument("--rtol", type=float, default=1e-9)
    p.add_argument("--atol", type=float, default=1e-9)
    p.add_argument("--max-degree", type=int, default=DEFAULT_MAX_DEGREE)
    p.add_argument("--out", help="write JSON here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="oapoly", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("means", help="root mean power / geometric mean of positive vectors")
    p.add_argument("kind", choices=["rmp", "gm"])
    p.add_argument("input", help="JSON array of vectors ('-' for stdin)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--method", choices=["closed", "variational"], default="closed")
    p.add_argument("--budget", type=int, default=1000, help="sampled coefficient tuples")
    p.add_argument("--no-refine", dest="refine", action="store_false")
    p.add_argument("--theta-max", type=float, default=1e6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_means)

    p = sub.add_parser("check", help="run the equivalence criteria on a polynomial")
    p.add_argument("poly")
    p.add_argument("--criteria", default=",".join(CRITERIA))
    p.add_argument("--r", type=int, default=None, help="root-mean-power arity (default max(2, n))")
    _add_run_flags(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("fuzz", help="coherence campaign over generated polynomials")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--n", type=_int_list, default=(2, 3, 4, 5), help="degrees, comma-separated")
    p.add_argument("--dim", type=_int_list, default=(2, 3, 4, 5, 6))
    p.add_argument("--p", type=_int_list, default=(1, 2), help="codomain dimensions")
    p.add_argument("--r", type=_arity_list, default=(2, 3, "n"), help="arities, e.g. 2,3,n")
    p.add_argument("--generator", choices=["mixed", *GENERATORS], default="mixed")
    p.add_argument("--jobs", type=int, default=1, help="worker processes (0: all cores)")
    _add_run_flags(p)
    p.set_defaults(func=cmd_fuzz)

    p = sub.add_parser("polarize", help="evaluate the symmetric multilinear map on a tuple")
    p.add_argument("poly")
    p.add_argument("args", help="JSON array of n vectors (real or {re, im})")
    p.add_argument("--max-degree", type=int, default=DEFAULT_MAX_DEGREE)
    p.add_argument("--out")
    p.set_defaults(func=cmd_polarize)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
