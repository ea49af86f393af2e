"""``exlp`` command line front end."""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Optional

from .estimator import solve
from .model import LPFormatError, GeneralLP, read_lp, recover_original, to_standard_form
from .ratcore import ZERO, lcm_of_denominators
from .refine import compute_residuals
from .verify import is_exactly_optimal

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_ORACLE = 2
EXIT_PARSE = 3
EXIT_LIMIT = 4


def fmt_rational(v: Optional[Fraction]) -> Optional[str]:
    if v is None:
        return None
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


@dataclass
class RunReport:
    status: str
    mode: str
    objective: Optional[str] = None
    x: dict = field(default_factory=dict)
    y: dict = field(default_factory=dict)
    rounds: int = 0
    oracle_calls: int = 0
    factorizations: int = 0
    factorization_time: float = 0.0
    reconstruction_attempts: int = 0
    reconstruction_time: float = 0.0
    final_scale: Optional[str] = None
    final_delta: Optional[str] = None
    dlcm: Optional[float] = None
    reason: Optional[str] = None

    def to_text(self) -> str:
        lines = [f"status: {self.status}", f"mode: {self.mode}"]
        if self.objective is not None:
            lines.append(f"objective: {self.objective}")
        for name, v in self.x.items():
            lines.append(f"  {name} = {v}")
        if self.y:
            lines.append("duals:")
            for name, v in self.y.items():
                lines.append(f"  {name} = {v}")
        lines.append(f"rounds: {self.rounds}  oracle calls: {self.oracle_calls}")
        lines.append(f"factorizations: {self.factorizations} ({self.factorization_time:.4f}s)")
        lines.append(f"reconstructions: {self.reconstruction_attempts} ({self.reconstruction_time:.4f}s)")
        lines.append(f"final scale: {self.final_scale}  final delta: {self.final_delta}")
        if self.dlcm is not None:
            lines.append(f"dlcm: {self.dlcm:.3f}")
        if self.reason:
            lines.append(f"reason: {self.reason}")
        return "\n".join(lines)


def _random_lp(seed: int, m: int, n: int) -> GeneralLP:
    from .testkit import random_feasible_lp

    slp = random_feasible_lp(seed, m, n)
    return GeneralLP(
        "min", slp.c, slp.A, ("=",) * m, slp.b, slp.l, (None,) * n,
        tuple(f"x{j + 1}" for j in range(n)), tuple(f"r{i + 1}" for i in range(m)),
        name=f"random-{seed}", objective_offset=ZERO,
    )


def build_report(glp: GeneralLP, slp, sol, tau: Fraction) -> RunReport:
    rep = RunReport(
        sol.status, sol.method, rounds=sol.rounds, oracle_calls=sol.oracle_calls,
        factorizations=sol.factorizations, factorization_time=sol.factorization_time,
        reconstruction_attempts=sol.reconstruction_attempts, reconstruction_time=sol.reconstruction_time,
        final_scale=fmt_rational(sol.final_scale), final_delta=fmt_rational(sol.final_delta), reason=sol.reason,
    )
    if not sol.x:
        return rep
    # re-check right before emitting
    if sol.status == "optimal" and not is_exactly_optimal(slp, sol.x, sol.y):
        rep.status, rep.reason = "verification-failed", "exact re-check rejected the solution"
        return rep
    if sol.status == "converged" and compute_residuals(slp, sol.x, sol.y)[3] > tau:
        rep.status, rep.reason = "verification-failed", "residual re-check exceeds tau"
        return rep
    values, duals, objective = recover_original(slp, sol.x, sol.y)
    if sol.status in ("optimal", "converged"):
        rep.objective = fmt_rational(objective)
    rep.x = {name: fmt_rational(v) for name, v in zip(glp.var_names, values)}
    rep.y = {name: fmt_rational(v) for name, v in zip(glp.row_names, duals)}
    d = lcm_of_denominators(list(values) + list(duals))
    rep.dlcm = math.log10(d)
    return rep


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def make_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="exlp", description="Exact rational LP solver built on a floating-point simplex.")
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("solve", help="solve an LP file exactly")
    s.error = p.error
    s.add_argument("file", nargs="?", help="exact-lp text file or .mps file")
    s.add_argument("--mode", choices=("refine", "fac", "rec"), default="fac")
    s.add_argument("--tau", type=_rational, default=Fraction(0))
    s.add_argument("--alpha", type=int, default=2**30)
    s.add_argument("--beta", type=_rational, default=Fraction(11, 10))
    s.add_argument("--freq", type=_rational, default=Fraction(6, 5))
    s.add_argument("--stall", type=int, default=2)
    s.add_argument("--eta", type=_rational, default=Fraction(1, 10**6))
    s.add_argument("--sigma", type=_rational, default=Fraction(1, 10**4))
    s.add_argument("--max-rounds", type=int, default=100)
    s.add_argument("--format", choices=("text", "json"), default="text")
    s.add_argument("--require-basic", action="store_true")
    s.add_argument("--seed", type=int, help="solve a seeded random instance instead of a file")
    s.add_argument("--rows", type=int, default=2, help="rows of the random instance")
    s.add_argument("--cols", type=int, default=4, help="columns of the random instance")
    return p


def run(argv=None) -> int:
    args = make_parser().parse_args(argv)
    if args.file is None and args.seed is None:
        print("exlp: error: give an LP file or --seed", file=sys.stderr)
        return EXIT_USAGE
    try:
        glp = read_lp(args.file) if args.file is not None else _random_lp(args.seed, args.rows, args.cols)
    except LPFormatError as exc:
        print(f"exlp: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"exlp: cannot read {args.file}: {exc.strerror}", file=sys.stderr)
        return EXIT_PARSE
    if args.mode == "refine" and args.tau <= 0:
        print("exlp: warning: refine mode with tau = 0 runs until the residual is exactly zero", file=sys.stderr)
    try:
        slp = to_standard_form(glp)
        sol = solve(
            slp, args.mode, alpha=args.alpha, tau=args.tau, beta=args.beta, freq=args.freq, stall=args.stall,
            eta=args.eta, sigma=args.sigma, max_rounds=args.max_rounds, require_basic=args.require_basic,
        )
    except ValueError as exc:
        print(f"exlp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    rep = build_report(glp, slp, sol, args.tau)
    if args.format == "json":
        print(json.dumps(asdict(rep), indent=2))
    else:
        print(rep.to_text())
    if rep.status in ("optimal", "converged"):
        return EXIT_OK
    if rep.status == "oracle-failure":
        print(f"exlp: oracle failure: {rep.reason}", file=sys.stderr)
        return EXIT_ORACLE
    if rep.status == "round-limit":
        print("exlp: round limit reached", file=sys.stderr)
        return EXIT_LIMIT
    print(f"exlp: {rep.status}: {rep.reason}", file=sys.stderr)
    return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
