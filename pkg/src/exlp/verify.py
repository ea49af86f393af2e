"""Exact basis verification.

A rational LU factorization of the basis matrix gives the exact basic
primal-dual solution of a candidate basis, which is then checked for primal
and dual feasibility (complementary slackness holds by construction).
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .model import StandardLP
from .oracle import SimplexOracle
from .ratcore import ZERO, RatMatrix
from .refine import RefineConfig, RefinementState, iterative_refine

logger = logging.getLogger(__name__)


class SingularBasisError(ArithmeticError):
    """The selected columns do not form a nonsingular basis matrix."""


@dataclass
class BasisFactorization:
    """``P B Q = L U`` with ``B = A[:, basis]``.

    ``row_order[k]``/``col_order[k]`` are the row of ``B`` and the position in
    ``basis`` chosen as the ``k``-th pivot.  ``L`` is unit lower triangular
    and stored without its diagonal, ``U`` holds the diagonal; both are lists
    of sparse rows indexed by pivot position.
    """

    basis: tuple
    row_order: list
    col_order: list
    L: list
    U: list
    fill_in: int = 0

    @property
    def size(self) -> int:
        return len(self.basis)

    def solve(self, rhs: Sequence[Fraction]) -> list:
        """Solve ``B w = rhs``; ``w[j]`` belongs to column ``basis[j]``."""
        m = self.size
        z = [rhs[self.row_order[k]] for k in range(m)]
        for k in range(m):
            s = z[k]
            for j, v in self.L[k].items():
                s -= v * z[j]
            z[k] = s
        w = [ZERO] * m
        for k in range(m - 1, -1, -1):
            s = z[k]
            diag = ZERO
            for j, v in self.U[k].items():
                if j == k:
                    diag = v
                else:
                    s -= v * w[j]
            w[k] = s / diag
        out = [ZERO] * m
        for k in range(m):
            out[self.col_order[k]] = w[k]
        return out

    def solve_transpose(self, rhs: Sequence[Fraction]) -> list:
        """Solve ``B^T y = rhs`` with ``rhs[j]`` belonging to column ``basis[j]``."""
        m = self.size
        v = [rhs[self.col_order[k]] for k in range(m)]
        # U^T t = v
        t = [ZERO] * m
        for k in range(m):
            s = v[k]
            for j in range(k):
                u = self.U[j].get(k)
                if u:
                    s -= u * t[j]
            t[k] = s / self.U[k][k]
        # L^T u = t
        u = [ZERO] * m
        for k in range(m - 1, -1, -1):
            s = t[k]
            for j in range(k + 1, m):
                lv = self.L[j].get(k)
                if lv:
                    s -= lv * u[j]
            u[k] = s
        out = [ZERO] * m
        for k in range(m):
            out[self.row_order[k]] = u[k]
        return out

    def permuted_product(self) -> list:
        """Dense ``L U`` for checking against ``P B Q``."""
        m = self.size
        out = [[ZERO] * m for _ in range(m)]
        for i in range(m):
            for k in range(i + 1):
                lik = ONE if k == i else self.L[i].get(k, ZERO)
                if not lik:
                    continue
                for j, u in self.U[k].items():
                    out[i][j] += lik * u
        return out


ONE = Fraction(1)


def rational_lu_factorize(A: RatMatrix, basis: Sequence[int]) -> BasisFactorization:
    """Exact LU of ``A[:, basis]`` with Markowitz pivot selection.

    Raises :class:`SingularBasisError` when ``basis`` does not have ``m``
    entries or no nonzero pivot remains at some stage.
    """
    m = A.rows
    basis = tuple(basis)
    if len(basis) != m or len(set(basis)) != m:
        raise SingularBasisError(f"basis has {len(set(basis))} distinct columns, need {m}")
    # active submatrix as row dicts keyed by basis position
    rows: dict[int, dict[int, Fraction]] = {i: {} for i in range(m)}
    for pos, j in enumerate(basis):
        for i, v in A.col(j).items():
            rows[i][pos] = v
    cols: dict[int, set] = {pos: set() for pos in range(m)}
    for i, r in rows.items():
        for pos in r:
            cols[pos].add(i)
    initial_nnz = sum(len(r) for r in rows.values())

    row_order: list[int] = []
    col_order: list[int] = []
    pivot_rows: list[dict[int, Fraction]] = []  # U rows keyed by basis position
    multipliers: list[dict[int, Fraction]] = []  # per stage: row -> multiplier

    for _stage in range(m):
        best = None
        for i in sorted(rows):
            r = rows[i]
            rc = len(r) - 1
            for pos in sorted(r):
                cost = rc * (len(cols[pos]) - 1)
                key = (cost, i, pos)
                if best is None or key < best:
                    best = key
        if best is None:
            raise SingularBasisError("no nonzero pivot available")
        _, pi, pc = best
        prow = rows.pop(pi)
        pval = prow[pc]
        for pos in prow:
            cols[pos].discard(pi)
        mults = {}
        for i in sorted(cols[pc]):
            r = rows[i]
            f = r[pc] / pval
            mults[i] = f
            for pos, v in prow.items():
                nv = r.get(pos, ZERO) - f * v
                if nv:
                    if pos not in r:
                        cols[pos].add(i)
                    r[pos] = nv
                elif pos in r:
                    del r[pos]
                    cols[pos].discard(i)
        del cols[pc]
        row_order.append(pi)
        col_order.append(pc)
        pivot_rows.append(prow)
        multipliers.append(mults)

    stage_of_row = {r: k for k, r in enumerate(row_order)}
    stage_of_col = {c: k for k, c in enumerate(col_order)}
    U = [{stage_of_col[pos]: v for pos, v in pr.items()} for pr in pivot_rows]
    L: list[dict[int, Fraction]] = [dict() for _ in range(m)]
    for k, mults in enumerate(multipliers):
        for i, f in mults.items():
            L[stage_of_row[i]][k] = f
    fill = sum(len(u) for u in U) + sum(len(x) for x in L) - initial_nnz
    return BasisFactorization(basis, row_order, col_order, L, U, fill_in=fill)


@dataclass
class BasicSolution:
    x: tuple
    y: tuple
    z: dict  # nonbasic index -> dual slack
    basis: tuple


def basic_solution(lp: StandardLP, fac: BasisFactorization) -> BasicSolution:
    """Exact basic solution: ``x_N = l_N``, ``B x_B = b - N l_N``, ``B^T y = c_B``."""
    basis = fac.basis
    in_basis = set(basis)
    rhs = list(lp.b)
    for j in range(lp.n):
        if j in in_basis or not lp.l[j]:
            continue
        for i, v in lp.A.col(j).items():
            rhs[i] -= v * lp.l[j]
    xb = fac.solve(rhs)
    x = list(lp.l)
    for pos, j in enumerate(basis):
        x[j] = xb[pos]
    y = fac.solve_transpose([lp.c[j] for j in basis])
    Aty = lp.A.rmatvec(y)
    z = {j: lp.c[j] - Aty[j] for j in range(lp.n) if j not in in_basis}
    return BasicSolution(tuple(x), tuple(y), z, basis)


@dataclass(frozen=True)
class FeasibilityResult:
    status: str  # "optimal", "primal-infeasible" or "dual-infeasible"
    index: Optional[int] = None
    amount: Fraction = ZERO

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


def check_exact_feasibility(lp: StandardLP, sol: BasicSolution) -> FeasibilityResult:
    """Report the largest primal violation, else the largest dual violation."""
    worst, idx = ZERO, None
    for j in sol.basis:
        v = lp.l[j] - sol.x[j]
        if v > worst:
            worst, idx = v, j
    if idx is not None:
        return FeasibilityResult("primal-infeasible", idx, worst)
    for j, zj in sol.z.items():
        if -zj > worst:
            worst, idx = -zj, j
    if idx is not None:
        return FeasibilityResult("dual-infeasible", idx, worst)
    return FeasibilityResult("optimal")


@dataclass
class ExactSolution:
    """Result of an exact solve, with run statistics."""

    status: str  # "optimal", "oracle-failure", "round-limit"
    x: tuple = ()
    y: tuple = ()
    objective: Optional[Fraction] = None
    basis: tuple = ()
    method: str = ""
    rounds: int = 0
    oracle_calls: int = 0
    factorizations: int = 0
    factorization_time: float = 0.0
    reconstruction_attempts: int = 0
    reconstruction_time: float = 0.0
    attempt_rounds: list = field(default_factory=list)
    final_scale: Optional[Fraction] = None
    final_delta: Optional[Fraction] = None
    reason: Optional[str] = None
    history: list = field(default_factory=list)

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


def is_exactly_optimal(lp: StandardLP, x: Sequence[Fraction], y: Sequence[Fraction]) -> bool:
    """``Ax = b``, ``x >= l``, ``A^T y <= c`` and zero complementarity gap, all exact."""
    if len(x) != lp.n or len(y) != lp.m:
        return False
    if lp.A.matvec(x) != tuple(lp.b):
        return False
    if any(xi < li for xi, li in zip(x, lp.l)):
        return False
    z = [ci - ai for ci, ai in zip(lp.c, lp.A.rmatvec(y))]
    if any(zi < 0 for zi in z):
        return False
    return all(zi == 0 or xi == li for xi, li, zi in zip(x, lp.l, z))


def _finish_from_outcome(lp, outcome, method, stats):
    if outcome.status == "converged":
        return ExactSolution(
            "optimal", outcome.x, outcome.y, lp.objective(outcome.x), outcome.basis, method,
            outcome.rounds, outcome.oracle_calls, final_scale=outcome.scale, final_delta=outcome.delta,
            history=outcome.history, **stats,
        )
    return ExactSolution(
        outcome.status, outcome.x, outcome.y, None, outcome.basis, method, outcome.rounds,
        outcome.oracle_calls, final_scale=outcome.scale, final_delta=outcome.delta,
        reason=outcome.reason, history=outcome.history, **stats,
    )


def solve_with_basis_verification(
    lp: StandardLP,
    oracle: SimplexOracle | None = None,
    cfg: RefineConfig | None = None,
    stall: int = 2,
    observer=None,
) -> ExactSolution:
    """Refine with ``tau = 0`` and verify the oracle basis once it stops changing.

    A basis is factorized after it has been returned by ``stall`` consecutive
    oracle calls; rejected bases are remembered and never factorized again.
    """
    if stall < 1:
        raise ValueError("stall must be >= 1")
    cfg = RefineConfig(alpha=(cfg or RefineConfig()).alpha, tau=0, max_rounds=(cfg or RefineConfig()).max_rounds)
    rejected: set = set()
    stats = {"factorizations": 0, "factorization_time": 0.0}
    streak = {"basis": None, "count": 0}

    def hook(state: RefinementState):
        if observer is not None:
            observer(state)
        key = frozenset(state.basis)
        if key == streak["basis"]:
            streak["count"] += 1
        else:
            streak["basis"], streak["count"] = key, 1
        if streak["count"] < stall or key in rejected:
            return None
        t0 = time.perf_counter()
        stats["factorizations"] += 1
        try:
            fac = rational_lu_factorize(lp.A, sorted(key))
            sol = basic_solution(lp, fac)
            verdict = check_exact_feasibility(lp, sol)
        except SingularBasisError:
            verdict, sol = None, None
        stats["factorization_time"] += time.perf_counter() - t0
        if verdict is not None and verdict.optimal:
            logger.debug("round %d: basis verified optimal", state.k)
            return sol
        logger.debug("round %d: basis rejected (%s)", state.k, verdict.status if verdict else "singular")
        rejected.add(key)
        return None

    outcome = iterative_refine(lp, oracle, cfg, hook)
    if outcome.status == "stopped":
        sol = outcome.result
        return ExactSolution(
            "optimal", sol.x, sol.y, lp.objective(sol.x), sol.basis, "fac", outcome.rounds,
            outcome.oracle_calls, final_scale=outcome.scale, final_delta=outcome.delta,
            history=outcome.history, **stats,
        )
    return _finish_from_outcome(lp, outcome, "fac", stats)
