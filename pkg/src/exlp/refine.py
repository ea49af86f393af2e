"""Iterative refinement of an approximate primal-dual LP solution.

Each round computes the exact residuals of the current iterate, zooms into
them by a power-of-two scaling factor, asks the floating-point oracle for a
corrector and adds the corrector back divided by the scaling factor.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Optional

from .model import OracleInputError, StandardLP, round_to_oracle_precision
from .oracle import SimplexOracle
from .ratcore import ZERO

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RefineConfig:
    alpha: int = 2**30
    tau: Fraction = Fraction(0)
    max_rounds: int = 100

    def __post_init__(self):
        object.__setattr__(self, "tau", Fraction(self.tau))
        if int(self.alpha) != self.alpha or self.alpha < 2:
            raise ValueError("alpha must be an integer >= 2")
        if self.tau < 0:
            raise ValueError("tau must be nonnegative")
        if self.max_rounds < 1:
            raise ValueError("max_rounds must be >= 1")


@dataclass
class RefinementState:
    """Snapshot handed to observers after the residual of round ``k`` is known.

    ``scale`` is the factor ``Delta_k`` used to obtain ``x_k`` and
    ``next_scale`` is ``Delta_{k+1}``, already rounded to a power of two.
    """

    k: int
    x: tuple
    y: tuple
    basis: tuple
    delta: Fraction
    scale: Fraction
    next_scale: Fraction
    b_hat: tuple
    l_hat: tuple
    c_hat: tuple
    eps: Fraction
    oracle_calls: int


@dataclass
class RoundRecord:
    k: int
    delta: Fraction
    scale: Fraction
    basis: tuple


@dataclass
class RefinementOutcome:
    status: str  # "converged", "oracle-failure", "round-limit" or "stopped"
    x: tuple
    y: tuple
    rounds: int
    oracle_calls: int
    delta: Optional[Fraction]
    scale: Fraction
    basis: tuple = ()
    result: Any = None
    reason: Optional[str] = None
    history: list = field(default_factory=list)


def compute_residuals(lp: StandardLP, x, y):
    """Exact residual vectors and the scalar violation ``delta``.

    ``b_hat = b - A x``, ``l_hat = l - x``, ``c_hat = c - A^T y`` and
    ``delta = max(|b_hat|_inf, max l_hat, max -c_hat, |sum l_hat * c_hat|)``.
    """
    if len(x) != lp.n or len(y) != lp.m:
        raise ValueError("iterate dimensions do not match the LP")
    Ax = lp.A.matvec(x)
    Aty = lp.A.rmatvec(y)
    b_hat = tuple(bi - ai for bi, ai in zip(lp.b, Ax))
    l_hat = tuple(li - xi for li, xi in zip(lp.l, x))
    c_hat = tuple(ci - ai for ci, ai in zip(lp.c, Aty))
    delta = max(
        max((abs(v) for v in b_hat), default=ZERO),
        max(l_hat, default=ZERO),
        max((-v for v in c_hat), default=ZERO),
        abs(sum((lv * cv for lv, cv in zip(l_hat, c_hat) if lv and cv), ZERO)),
    )
    return b_hat, l_hat, c_hat, max(delta, ZERO)


def _ceil_log2(q: Fraction) -> int:
    """Exact ``ceil(log2(q))`` for positive rational ``q``."""
    num, den = q.numerator, q.denominator
    e = num.bit_length() - den.bit_length()
    # 2^(e-1) < q < 2^(e+1); find smallest t with q <= 2^t
    for t in (e - 1, e, e + 1):
        if (num << max(0, -t)) <= (den << max(0, t)):
            return t
    return e + 1


def update_scaling(delta: Fraction, scale: Fraction, alpha: int) -> Fraction:
    """Next power-of-two scaling factor ``2^ceil(log2(1 / max(delta, 1/(alpha*scale))))``."""
    delta = max(Fraction(delta), 1 / (Fraction(alpha) * Fraction(scale)))
    return Fraction(2) ** _ceil_log2(1 / delta)


def apply_correction(x, y, x_hat, y_hat, scale: Fraction):
    inv = 1 / Fraction(scale)
    return (
        tuple(a + b * inv if b else a for a, b in zip(x, x_hat)),
        tuple(a + b * inv if b else a for a, b in zip(y, y_hat)),
    )


def _oracle_round(lp: StandardLP, oracle: SimplexOracle):
    try:
        data = round_to_oracle_precision(lp, oracle.config.p)
    except OracleInputError as exc:
        return None, str(exc)
    sol = oracle.solve(data, lp)
    if not sol.ok:
        return None, sol.reason
    return sol, None


Observer = Callable[[RefinementState], Any]


def iterative_refine(
    lp: StandardLP,
    oracle: SimplexOracle | None = None,
    cfg: RefineConfig | None = None,
    observer: Observer | None = None,
) -> RefinementOutcome:
    """Refine until the exact violation drops to ``cfg.tau``.

    ``observer(state)`` runs once per round after the residual and the next
    scaling factor are known and before the corrector solve; a non-``None``
    return value stops the loop and is stored in ``outcome.result``.
    """
    oracle = oracle or SimplexOracle()
    cfg = cfg or RefineConfig()
    eps = max(oracle.config.eta, Fraction(1, cfg.alpha))
    calls = 0
    history: list[RoundRecord] = []

    scale = Fraction(1)
    sol, reason = _oracle_round(lp, oracle)
    calls += 1
    if sol is None:
        zeros_x = tuple(ZERO for _ in range(lp.n))
        zeros_y = tuple(ZERO for _ in range(lp.m))
        return RefinementOutcome("oracle-failure", zeros_x, zeros_y, 0, calls, None, scale, reason=reason)
    x, y, basis = sol.x, sol.y, sol.basis

    k = 1
    while True:
        b_hat, l_hat, c_hat, delta = compute_residuals(lp, x, y)
        if delta <= cfg.tau:
            history.append(RoundRecord(k, delta, scale, basis))
            return RefinementOutcome("converged", x, y, k, calls, delta, scale, basis, history=history)
        next_scale = update_scaling(delta, scale, cfg.alpha)
        history.append(RoundRecord(k, delta, scale, basis))
        logger.debug("round %d: delta=%.3e next scale=2^%d", k, float(delta), _ceil_log2(next_scale))
        if observer is not None:
            state = RefinementState(k, x, y, basis, delta, scale, next_scale, b_hat, l_hat, c_hat, eps, calls)
            result = observer(state)
            if result is not None:
                return RefinementOutcome("stopped", x, y, k, calls, delta, scale, basis, result=result, history=history)
        if k >= cfg.max_rounds:
            return RefinementOutcome("round-limit", x, y, k, calls, delta, scale, basis, history=history)

        corrector = lp.with_data(
            tuple(next_scale * v for v in b_hat),
            tuple(next_scale * v for v in l_hat),
            tuple(next_scale * v for v in c_hat),
        )
        sol, reason = _oracle_round(corrector, oracle)
        calls += 1
        if sol is None:
            logger.info("oracle failed in round %d: %s", k + 1, reason)
            return RefinementOutcome("oracle-failure", x, y, k, calls, delta, scale, basis, reason=reason, history=history)
        x, y = apply_correction(x, y, sol.x, sol.y, next_scale)
        basis = sol.basis
        scale = next_scale
        k += 1


def is_power_of_two(q: Fraction) -> bool:
    q = Fraction(q)
    if q <= 0:
        return False
    return (q.numerator & (q.numerator - 1)) == 0 and (q.denominator & (q.denominator - 1)) == 0


def ceil_log2(q) -> int:
    return _ceil_log2(Fraction(q))


__all__ = [
    "RefineConfig",
    "RefinementState",
    "RefinementOutcome",
    "RoundRecord",
    "compute_residuals",
    "update_scaling",
    "apply_correction",
    "iterative_refine",
    "is_power_of_two",
    "ceil_log2",
]
