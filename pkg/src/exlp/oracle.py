"""Limited-precision LP-basis oracle.

A bounded revised simplex in double precision.  Every solution it reports
has been re-checked in exact rational arithmetic against the unrounded LP,
so a ``"solution"`` status carries the residual guarantees

* ``||A x - b||_inf <= eta``, ``x >= l - eta``, ``c - A^T y >= -eta``,
* ``|(x - l)^T (c - A^T y)| <= sigma``,
* ``|x_i - l_i| <= eta`` off the basis and ``|c_i - y^T A_i| <= eta`` on it.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional

import numpy as np
import scipy.linalg

from .model import DOUBLE_PRECISION, FloatData, OracleInputError, StandardLP, round_to_oracle_precision, round_to_precision
from .ratcore import ZERO

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OracleConfig:
    p: int = DOUBLE_PRECISION
    eta: Fraction = Fraction(1, 10**6)
    sigma: Fraction = Fraction(1, 10**4)
    pivot_rule: str = "dantzig-with-bland-fallback"
    iteration_limit: int = 10000
    refactor_every: int = 100
    bland_after: int = 1000
    feas_tol: float = 1e-9
    opt_tol: float = 1e-9
    pivot_tol: float = 1e-9

    def __post_init__(self):
        object.__setattr__(self, "eta", Fraction(self.eta))
        object.__setattr__(self, "sigma", Fraction(self.sigma))
        if not 0 < self.eta < 1:
            raise ValueError("eta must lie in (0, 1)")
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")
        if self.p < 1:
            raise ValueError("p must be >= 1")
        if self.pivot_rule != "dantzig-with-bland-fallback":
            raise ValueError(f"unsupported pivot rule {self.pivot_rule!r}")


@dataclass
class OracleSolution:
    status: str
    x: tuple = ()
    y: tuple = ()
    basis: tuple = ()
    reason: Optional[str] = None
    iterations: int = 0

    @property
    def ok(self) -> bool:
        return self.status == "solution"


@dataclass(frozen=True)
class ResidualCheck:
    passed: bool
    reason: Optional[str] = None
    index: Optional[int] = None
    amount: Fraction = ZERO

    def __bool__(self) -> bool:
        return self.passed


def check_oracle_residuals(sol: OracleSolution, exact: StandardLP, cfg: OracleConfig = OracleConfig()) -> ResidualCheck:
    """Check every residual bound of an oracle answer in exact arithmetic."""
    eta, sigma = cfg.eta, cfg.sigma
    A, b, l, c = exact.A, exact.b, exact.l, exact.c
    x, y = sol.x, sol.y
    if len(x) != exact.n or len(y) != exact.m:
        return ResidualCheck(False, "dimension")
    Ax = A.matvec(x)
    for i in range(exact.m):
        r = abs(Ax[i] - b[i])
        if r > eta:
            return ResidualCheck(False, "primal-residual", i, r)
    for i in range(exact.n):
        if x[i] < l[i] - eta:
            return ResidualCheck(False, "primal-bound", i, l[i] - x[i])
    z = [ci - ai for ci, ai in zip(c, A.rmatvec(y))]
    for i in range(exact.n):
        if z[i] < -eta:
            return ResidualCheck(False, "dual-feasibility", i, -z[i])
    gap = abs(sum(((xi - li) * zi for xi, li, zi in zip(x, l, z) if zi and xi != li), ZERO))
    if gap > sigma:
        return ResidualCheck(False, "complementarity", None, gap)
    basic = set(sol.basis)
    for i in range(exact.n):
        if i not in basic and abs(x[i] - l[i]) > eta:
            return ResidualCheck(False, "basis-condition", i, abs(x[i] - l[i]))
    for i in basic:
        if abs(z[i]) > eta:
            return ResidualCheck(False, "basis-condition", i, abs(z[i]))
    return ResidualCheck(True)


class _Failure(Exception):
    pass


class _Basis:
    """Dense LU of the basis matrix plus a product-form eta file."""

    def __init__(self, cols: np.ndarray, refactor_every: int):
        self.refactor_every = refactor_every
        self.factor(cols)

    def factor(self, cols):
        try:
            with np.errstate(all="raise"):
                self.lu = scipy.linalg.lu_factor(cols, check_finite=True)
        except (ValueError, FloatingPointError, np.linalg.LinAlgError) as exc:
            raise _Failure(f"basis factorization failed: {exc}") from None
        diag = np.abs(np.diag(self.lu[0]))
        if diag.size and diag.min() <= 1e-13 * max(1.0, diag.max()):
            raise _Failure("singular basis matrix")
        self.etas: list[tuple[int, np.ndarray]] = []

    def ftran(self, v):
        w = scipy.linalg.lu_solve(self.lu, v, check_finite=False)
        for r, d in self.etas:
            wr = w[r] / d[r]
            w = w - wr * d
            w[r] = wr
        return w

    def btran(self, v):
        v = np.array(v, dtype=np.float64)
        for r, d in reversed(self.etas):
            v[r] = (v[r] - (d @ v - d[r] * v[r])) / d[r]
        return scipy.linalg.lu_solve(self.lu, v, trans=1, check_finite=False)

    def update(self, r: int, d: np.ndarray, cols_fn):
        self.etas.append((r, d.copy()))
        if len(self.etas) >= self.refactor_every:
            self.factor(cols_fn())


def _simplex(A, b, l, c, cfg: OracleConfig, pivot_tol: float):
    """Two-phase revised simplex for ``min c x, Ax = b, x >= l``.

    Returns ``(x, y, basis, iterations)`` in floating point; ``basis`` lists
    structural columns only.
    """
    m, n = A.shape
    if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b)) and np.all(np.isfinite(l)) and np.all(np.isfinite(c))):
        raise _Failure("non-finite input data")
    scale = max(1.0, float(np.max(np.abs(b))) if m else 1.0, float(np.max(np.abs(l))) if n else 1.0)
    with np.errstate(over="raise", invalid="raise"):
        try:
            resid = b - A @ l
        except FloatingPointError:
            raise _Failure("overflow in phase-one setup") from None
    signs = np.where(resid >= 0, 1.0, -1.0)
    full = np.hstack([A, np.diag(signs)])
    lower = np.concatenate([l, np.zeros(m)])
    basis = list(range(n, n + m))
    nonbasic = np.ones(n + m, dtype=bool)
    nonbasic[basis] = False
    total = [0]

    def cols():
        return full[:, basis]

    fac = _Basis(cols(), cfg.refactor_every)

    def primal_values():
        rhs = b - full[:, nonbasic] @ lower[nonbasic]
        return fac.ftran(rhs)

    def run(cost, allowed):
        degenerate = 0
        bland = False
        while True:
            if total[0] >= cfg.iteration_limit:
                raise _Failure("iteration limit reached")
            xb = primal_values()
            y = fac.btran(cost[basis])
            d = cost - full.T @ y
            cand = np.flatnonzero(allowed & nonbasic & (d < -cfg.opt_tol))
            if cand.size == 0:
                return
            q = int(cand[0]) if bland else int(cand[np.argmin(d[cand])])
            u = fac.ftran(full[:, q])
            umax = max(1.0, float(np.max(np.abs(u))))
            rows = np.flatnonzero(u > pivot_tol * umax)
            if rows.size == 0:
                raise _Failure("unbounded direction")
            lb = lower[basis]
            slack = np.maximum(xb[rows] - lb[rows], 0.0)
            ratios = slack / u[rows]
            tmin = ratios.min()
            ties = rows[ratios <= tmin + 1e-12 * max(1.0, abs(tmin))]
            if bland:
                r = int(min(ties, key=lambda i: basis[i]))
            else:
                r = int(ties[np.argmax(np.abs(u[ties]))])
            degenerate = degenerate + 1 if tmin <= cfg.feas_tol * scale else 0
            if degenerate >= cfg.bland_after:
                bland = True
            leaving = basis[r]
            basis[r] = q
            nonbasic[q] = False
            nonbasic[leaving] = True
            total[0] += 1
            fac.update(r, u, cols)

    # phase one: minimise the artificials
    cost1 = np.concatenate([np.zeros(n), np.ones(m)])
    allowed = np.ones(n + m, dtype=bool)
    run(cost1, allowed)
    xb = primal_values()
    infeas = float(sum(xb[i] for i, j in enumerate(basis) if j >= n))
    if infeas > cfg.feas_tol * scale * max(1, m):
        raise _Failure("primal infeasible in working precision")

    # drive zero-valued artificials out of the basis where possible
    for r in range(m):
        if basis[r] < n:
            continue
        e = np.zeros(m)
        e[r] = 1.0
        row = fac.btran(e) @ full[:, :n]
        cand = [j for j in range(n) if nonbasic[j] and abs(row[j]) > 1e-7]
        if not cand:
            continue  # redundant row: artificial stays basic at zero
        q = max(cand, key=lambda j: abs(row[j]))
        u = fac.ftran(full[:, q])
        leaving = basis[r]
        basis[r] = q
        nonbasic[q] = False
        nonbasic[leaving] = True
        fac.update(r, u, cols)

    # phase two, artificials may not re-enter
    cost2 = np.concatenate([c, np.zeros(m)])
    allowed = np.concatenate([np.ones(n, dtype=bool), np.zeros(m, dtype=bool)])
    run(cost2, allowed)

    fac.factor(cols())
    xb = primal_values()
    y = fac.btran(cost2[basis])
    x = l.copy()
    for i, j in enumerate(basis):
        if j < n:
            x[j] = xb[i]
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise _Failure("non-finite solution")
    return x, y, tuple(sorted(j for j in basis if j < n)), total[0]


class SimplexOracle:
    """Floating-point simplex that answers with verified approximate solutions."""

    def __init__(self, config: OracleConfig | None = None):
        self.config = config or OracleConfig()
        self.calls = 0
        self.failures = 0

    def _to_output(self, values, p):
        out = []
        for v in values:
            fv = Fraction(float(v))
            out.append(fv if p == DOUBLE_PRECISION else round_to_precision(fv, p))
        return tuple(out)

    def solve(self, data: FloatData, exact: StandardLP) -> OracleSolution:
        cfg = self.config
        self.calls += 1
        pivot_tol = cfg.pivot_tol
        reason = None
        for attempt in range(2):
            try:
                x, y, basis, its = _simplex(data.A, data.b, data.l, data.c, cfg, pivot_tol)
            except _Failure as exc:
                reason = str(exc)
                break
            except OracleInputError as exc:
                reason = str(exc)
                break
            sol = OracleSolution("solution", self._to_output(x, data.p), self._to_output(y, data.p), basis, iterations=its)
            check = check_oracle_residuals(sol, exact, cfg)
            if check:
                return sol
            reason = f"residual check failed: {check.reason}"
            logger.debug("oracle attempt %d rejected: %s", attempt, reason)
            pivot_tol *= 0.1
        self.failures += 1
        return OracleSolution("failure", reason=reason)

    __call__ = solve


def oracle_solve(data: FloatData, exact: StandardLP, cfg: OracleConfig | None = None) -> OracleSolution:
    return SimplexOracle(cfg).solve(data, exact)


def solve_lp(lp: StandardLP, oracle: SimplexOracle | None = None) -> OracleSolution:
    """Round ``lp`` to working precision and hand it to the oracle."""
    oracle = oracle or SimplexOracle()
    try:
        data = round_to_oracle_precision(lp, oracle.config.p)
    except OracleInputError as exc:
        return OracleSolution("failure", reason=str(exc))
    return oracle.solve(data, lp)
