"""Estimator-style front end over the three solve modes."""

from __future__ import annotations

from fractions import Fraction

from sklearn.base import BaseEstimator

from .model import GeneralLP, StandardLP, recover_original, to_standard_form
from .oracle import OracleConfig, SimplexOracle
from .reconstruct import ReconConfig, solve_with_reconstruction
from .refine import RefineConfig, iterative_refine
from .verify import ExactSolution, is_exactly_optimal, solve_with_basis_verification

MODES = ("refine", "fac", "rec")


def check_lp(lp) -> StandardLP:
    """Validate ``lp`` and return it in standard form."""
    if isinstance(lp, GeneralLP):
        lp = to_standard_form(lp)
    if not isinstance(lp, StandardLP):
        raise TypeError(f"expected GeneralLP or StandardLP, got {type(lp).__name__}")
    if lp.m < 1:
        raise ValueError("LP has no constraint rows")
    return lp


def check_mode(mode: str) -> str:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    return mode


def solve(lp, mode: str = "fac", *, alpha=2**30, tau=0, beta=Fraction(11, 10), freq=Fraction(6, 5),
          stall=2, eta=Fraction(1, 10**6), sigma=Fraction(1, 10**4), max_rounds=100,
          require_basic=False) -> ExactSolution:
    """Solve ``lp`` in one of the modes ``refine``, ``fac`` or ``rec``."""
    lp = check_lp(lp)
    check_mode(mode)
    oracle = SimplexOracle(OracleConfig(eta=Fraction(eta), sigma=Fraction(sigma)))
    cfg = RefineConfig(alpha=int(alpha), tau=Fraction(tau), max_rounds=int(max_rounds))
    if mode == "fac":
        return solve_with_basis_verification(lp, oracle, cfg, stall=int(stall))
    if mode == "rec":
        rcfg = ReconConfig(beta=Fraction(beta), freq=Fraction(freq), require_basic=require_basic)
        return solve_with_reconstruction(lp, oracle, rcfg, cfg)
    out = iterative_refine(lp, oracle, cfg)
    return ExactSolution(
        out.status, out.x, out.y, lp.objective(out.x) if out.x else None, out.basis, "refine", out.rounds,
        out.oracle_calls, final_scale=out.scale, final_delta=out.delta, reason=out.reason, history=out.history,
    )


class ExactLPSolver(BaseEstimator):
    """Exact rational LP solver with an estimator interface.

    ``fit(lp)`` solves ``lp`` and sets ``x_``, ``y_``, ``objective_`` and
    ``status_`` (all in the original variables when ``lp`` is a
    :class:`GeneralLP`) and keeps the full result in ``solution_``.
    """

    def __init__(self, mode="fac", alpha=2**30, tau=0, beta=Fraction(11, 10), freq=Fraction(6, 5),
                 stall=2, eta=Fraction(1, 10**6), sigma=Fraction(1, 10**4), max_rounds=100,
                 require_basic=False):
        self.mode = mode
        self.alpha = alpha
        self.tau = tau
        self.beta = beta
        self.freq = freq
        self.stall = stall
        self.eta = eta
        self.sigma = sigma
        self.max_rounds = max_rounds
        self.require_basic = require_basic

    def fit(self, lp, y=None):
        slp = check_lp(lp)
        sol = solve(slp, **self.get_params())
        self.standard_lp_ = slp
        self.solution_ = sol
        self.status_ = sol.status
        if sol.x:
            self.x_, self.y_, self.objective_ = recover_original(slp, sol.x, sol.y)
        else:
            self.x_, self.y_, self.objective_ = (), (), None
        return self

    def is_optimal(self) -> bool:
        """Exact re-check of the fitted primal-dual pair."""
        sol = self.solution_
        return bool(sol.x) and is_exactly_optimal(self.standard_lp_, sol.x, sol.y)
