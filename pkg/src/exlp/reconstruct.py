"""Rational reconstruction of exact solutions from refined iterates."""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .model import StandardLP
from .oracle import SimplexOracle
from .ratcore import ZERO, RatMatrix
from .refine import RefineConfig, RefinementState, iterative_refine
from .verify import ExactSolution, _finish_from_outcome

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ReconConfig:
    beta: Fraction = Fraction(11, 10)
    freq: Fraction = Fraction(6, 5)
    dlcm: bool = True
    require_basic: bool = False

    def __post_init__(self):
        object.__setattr__(self, "beta", Fraction(self.beta))
        object.__setattr__(self, "freq", Fraction(self.freq))
        if self.beta <= 1:
            raise ValueError("beta must be > 1")
        if self.freq < 1:
            raise ValueError("freq must be >= 1")


@dataclass
class ReconState:
    next_round: int = 0
    last_bound: Optional[int] = None
    attempt_rounds: list = field(default_factory=list)
    bounds: list = field(default_factory=list)
    running_lcm: int = 1
    candidate: Optional[tuple] = None


def _admissible(p: int, q: int, alpha: Fraction, M: int) -> bool:
    # |p/q - alpha| < 1/(2 M q)  <=>  2 M |p * a_den - q * a_num| < a_den
    return 2 * M * abs(p * alpha.denominator - q * alpha.numerator) < alpha.denominator


def reconstruct_scalar(alpha: Fraction, M: int) -> Optional[Fraction]:
    """The unique ``p/q`` with ``1 <= q <= M`` and ``|p/q - alpha| < 1/(2Mq)``, or ``None``.

    Any such fraction is a continued-fraction convergent of ``alpha``, so the
    extended Euclidean recurrence over the convergents with ``q <= M`` finds it.
    """
    if M < 1:
        raise ValueError("denominator bound M must be >= 1")
    alpha = Fraction(alpha)
    a, b = alpha.numerator, alpha.denominator
    p0, q0, p1, q1 = 0, 1, 1, 0
    while b:
        t, r = divmod(a, b)
        p0, p1 = p1, t * p1 + p0
        q0, q1 = q1, t * q1 + q0
        if q1 > M:
            break
        if _admissible(p1, q1, alpha, M):
            return Fraction(p1, q1)
        a, b = b, r
    return None


def reconstruct_vector(
    v: Sequence[Fraction],
    M: int,
    skip: Iterable[int] = (),
    dlcm: bool = True,
) -> Optional[tuple]:
    """Componentwise reconstruction; ``None`` if any entry has no admissible fraction.

    Entries listed in ``skip`` are copied unchanged.  With ``dlcm`` the lcm
    ``d`` of the denominators found so far is tried first as a fast path:
    ``round(d * v_i) / d`` is accepted when it passes the admissibility test.
    """
    if M < 1:
        raise ValueError("denominator bound M must be >= 1")
    skip = set(skip)
    d = 1
    out = []
    for i, val in enumerate(v):
        val = Fraction(val)
        if i in skip:
            out.append(val)
            continue
        found = None
        if dlcm and d > 1 and d <= M:
            cand = Fraction(round(val * d), d)
            if cand.denominator <= M and _admissible(cand.numerator, cand.denominator, val, M):
                found = cand
        if found is None:
            found = reconstruct_scalar(val, M)
            if found is None:
                return None
        d = math.lcm(d, found.denominator)
        out.append(found)
    return tuple(out)


def compute_Mk(scale_next: Fraction, beta: Fraction, k: int) -> int:
    """``max(1, floor(sqrt(Delta_{k+1} / (2 beta^k))))`` evaluated exactly."""
    if k < 1:
        raise ValueError("round index must be >= 1")
    val = Fraction(scale_next) / (2 * Fraction(beta) ** k)
    return max(1, math.isqrt(math.floor(val)))


def _columns_independent(A: RatMatrix, cols: Sequence[int]) -> bool:
    """Exact rank test: do the columns ``cols`` of ``A`` have full column rank?"""
    if len(cols) > A.rows:
        return False
    if not cols:
        return True
    rows = [dict((k, A[i, j]) for k, j in enumerate(cols) if A[i, j]) for i in range(A.rows)]
    rank = 0
    active = [r for r in rows if r]
    for k in range(len(cols)):
        pivot = next((r for r in active if r.get(k)), None)
        if pivot is None:
            return False
        active.remove(pivot)
        pv = pivot[k]
        for r in active:
            f = r.get(k)
            if f:
                f = f / pv
                for pos, v in pivot.items():
                    nv = r.get(pos, ZERO) - f * v
                    if nv:
                        r[pos] = nv
                    else:
                        r.pop(pos, None)
        rank += 1
    return rank == len(cols)


def is_basic_primal(lp: StandardLP, x: Sequence[Fraction]) -> bool:
    """Whether the columns with ``x_i != l_i`` are linearly independent."""
    support = [i for i in range(lp.n) if x[i] != lp.l[i]]
    return _columns_independent(lp.A, support)


def _primal_feasible(lp: StandardLP, x) -> bool:
    return lp.A.matvec(x) == tuple(lp.b) and all(xi >= li for xi, li in zip(x, lp.l))


def _dual_optimal(lp: StandardLP, x, y) -> bool:
    z = [ci - ai for ci, ai in zip(lp.c, lp.A.rmatvec(y))]
    if any(zi < 0 for zi in z):
        return False
    return all(zi == 0 or xi == li for xi, li, zi in zip(x, lp.l, z))


def solve_with_reconstruction(
    lp: StandardLP,
    oracle: SimplexOracle | None = None,
    rcfg: ReconConfig | None = None,
    cfg: RefineConfig | None = None,
    observer=None,
) -> ExactSolution:
    """Refine with ``tau = 0`` and try to round iterates to an exact optimum.

    Attempts happen at rounds ``k >= k*``; after a failed attempt
    ``k* = ceil(freq * k)``.  The primal vector is rounded and checked for
    feasibility before the dual vector is touched.
    """
    oracle = oracle or SimplexOracle()
    rcfg = rcfg or ReconConfig()
    base = cfg or RefineConfig()
    cfg = RefineConfig(alpha=base.alpha, tau=0, max_rounds=base.max_rounds)
    eps = max(oracle.config.eta, Fraction(1, cfg.alpha))
    if rcfg.beta >= 1 / eps:
        raise ValueError(f"beta={rcfg.beta} must be below 1/eps={1 / eps}")
    rs = ReconState()
    stats = {"reconstruction_attempts": 0, "reconstruction_time": 0.0}

    def hook(state: RefinementState):
        if observer is not None:
            observer(state)
        k = state.k
        if k < rs.next_round:
            return None
        t0 = time.perf_counter()
        try:
            return _attempt(state)
        finally:
            stats["reconstruction_time"] += time.perf_counter() - t0

    def _attempt(state: RefinementState):
        k = state.k
        M = compute_Mk(state.next_scale, rcfg.beta, k)
        stats["reconstruction_attempts"] += 1
        rs.attempt_rounds.append(k)
        rs.bounds.append(M)
        rs.last_bound = M
        in_basis = set(state.basis)
        skip = [i for i in range(lp.n) if i not in in_basis and state.x[i] == lp.l[i]]
        x = reconstruct_vector(state.x, M, skip, rcfg.dlcm)
        if x is not None and _primal_feasible(lp, x):
            y = reconstruct_vector(state.y, M, (), rcfg.dlcm)
            if y is not None and _dual_optimal(lp, x, y):
                if not rcfg.require_basic or is_basic_primal(lp, x):
                    rs.candidate = (x, y)
                    return (x, y)
        rs.next_round = math.ceil(rcfg.freq * k)
        logger.debug("round %d: reconstruction with M=%d failed, next at %d", k, M, rs.next_round)
        return None

    outcome = iterative_refine(lp, oracle, cfg, hook)
    stats["attempt_rounds"] = list(rs.attempt_rounds)
    if outcome.status == "stopped":
        x, y = outcome.result
        return ExactSolution(
            "optimal", x, y, lp.objective(x), _basis_of(lp, x, outcome.basis), "rec", outcome.rounds,
            outcome.oracle_calls, final_scale=outcome.scale, final_delta=outcome.delta,
            history=outcome.history, **stats,
        )
    return _finish_from_outcome(lp, outcome, "rec", stats)


def _basis_of(lp: StandardLP, x, oracle_basis) -> tuple:
    """The last oracle basis if ``x`` sits at its bounds off that basis, else ``()``."""
    basis = set(oracle_basis)
    if len(basis) == lp.m and all(x[i] == lp.l[i] for i in range(lp.n) if i not in basis):
        return tuple(oracle_basis)
    return ()
