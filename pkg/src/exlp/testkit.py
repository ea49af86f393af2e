"""Independent exact oracles and a-priori bound evaluators for testing.

Nothing here is used by the solver drivers.  The brute-force enumerator has
its own Gaussian elimination so that it does not share code with
:mod:`exlp.verify`.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .model import StandardLP
from .ratcore import ZERO, RatMatrix, encoding_length
from .verify import BasicSolution

MAX_BASES = 10**6


class EnumerationLimitError(RuntimeError):
    pass


class NoOptimalBasisError(RuntimeError):
    pass


def _solve_dense(M: list, rhs: list) -> Optional[list]:
    """Gauss-Jordan on a square rational system; ``None`` when singular."""
    n = len(M)
    aug = [list(row) + [r] for row, r in zip(M, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        row = [v / pv for v in aug[col]]
        aug[col] = row
        for r in range(n):
            f = aug[r][col]
            if r != col and f:
                aug[r] = [a - f * b for a, b in zip(aug[r], row)]
    return [aug[r][n] for r in range(n)]


def _rank(rows: list) -> int:
    rows = [list(r) for r in rows]
    rank, ncols = 0, len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for r in range(rank + 1, len(rows)):
            f = rows[r][col] / rows[rank][col]
            if f:
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


@dataclass
class BruteForceResult:
    optimum: Fraction
    optimal_vertices: list
    classification: dict = field(default_factory=dict)  # basis -> status
    solutions: dict = field(default_factory=dict)  # basis -> BasicSolution (nonsingular only)

    def vertices(self) -> set:
        """Distinct primal-feasible basic solutions."""
        return {s.x for b, s in self.solutions.items() if self.classification[b] in ("optimal", "dual-infeasible")}


def enumerate_bases(lp: StandardLP):
    """Yield ``(basis, BasicSolution or None)`` for every m-subset of columns."""
    m, n = lp.m, lp.n
    if math.comb(n, m) > MAX_BASES:
        raise EnumerationLimitError(f"C({n}, {m}) bases exceeds {MAX_BASES}")
    dense = lp.A.to_dense()
    for basis in itertools.combinations(range(n), m):
        B = [[dense[i][j] for j in basis] for i in range(m)]
        rhs = [lp.b[i] - sum((dense[i][j] * lp.l[j] for j in range(n) if j not in basis), ZERO) for i in range(m)]
        xb = _solve_dense(B, rhs)
        if xb is None:
            yield basis, None
            continue
        Bt = [[B[i][k] for i in range(m)] for k in range(m)]
        y = _solve_dense(Bt, [lp.c[j] for j in basis])
        x = list(lp.l)
        for k, j in enumerate(basis):
            x[j] = xb[k]
        z = {j: lp.c[j] - sum((dense[i][j] * y[i] for i in range(m)), ZERO) for j in range(n) if j not in basis}
        yield basis, BasicSolution(tuple(x), tuple(y), z, basis)


def classify(lp: StandardLP, sol: Optional[BasicSolution]) -> str:
    if sol is None:
        return "singular"
    if any(sol.x[j] < lp.l[j] for j in sol.basis):
        return "infeasible"
    if any(v < 0 for v in sol.z.values()):
        return "dual-infeasible"
    return "optimal"


def brute_force_optimum(lp: StandardLP) -> BruteForceResult:
    """Exact optimum by enumerating every basis."""
    classes, sols, best = {}, {}, []
    for basis, sol in enumerate_bases(lp):
        status = classify(lp, sol)
        classes[basis] = status
        if sol is not None:
            sols[basis] = sol
        if status == "optimal":
            best.append(sol)
    if not best:
        raise NoOptimalBasisError("no basis is both primal and dual feasible")
    optimum = lp.objective(best[0].x)
    return BruteForceResult(optimum, best, classes, sols)


def _pair_length(A: RatMatrix, v: Sequence[Fraction]) -> int:
    return encoding_length(A) + encoding_length(tuple(v))


def min_violation_thresholds(lp: StandardLP) -> tuple:
    """Lower bounds on any nonzero primal and dual violation of a basic solution.

    Returns ``(2^-(4<A,b> + 5<l> + 2n^2 + 4n), 2^-(4<A,c> + 2n^2 + 4n))`` with
    ``<A,v> = <A> + <v>``.
    """
    n = lp.n
    ep = 4 * _pair_length(lp.A, lp.b) + 5 * encoding_length(tuple(lp.l)) + 2 * n * n + 4 * n
    ed = 4 * _pair_length(lp.A, lp.c) + 2 * n * n + 4 * n
    return Fraction(1, 2**ep), Fraction(1, 2**ed)


def basis_violation(lp: StandardLP, sol: BasicSolution) -> tuple:
    """``(max primal violation, max dual violation)`` of a basic solution."""
    primal = max((lp.l[j] - sol.x[j] for j in sol.basis), default=ZERO)
    dual = max((-v for v in sol.z.values()), default=ZERO)
    return max(primal, ZERO), max(dual, ZERO)


def _min_power(base: Fraction, target: Fraction) -> int:
    """Smallest integer ``t`` with ``base^t <= target`` for ``0 < base < 1``."""
    est = math.log(target.numerator) - math.log(target.denominator)
    est /= math.log(base.numerator) - math.log(base.denominator)
    t = math.ceil(est) if math.isfinite(est) else 0

    def ok(e):
        return (base**e if e >= 0 else (1 / base) ** -e) <= target

    while ok(t - 1):
        t -= 1
    while not ok(t):
        t += 1
    return t


def iteration_bound(tau, eps, sigma) -> int:
    """``ceil(max(log tau / log eps, log(tau eps / sigma) / log eps^2))``, exactly."""
    tau, eps, sigma = Fraction(tau), Fraction(eps), Fraction(sigma)
    if tau <= 0:
        raise ValueError("tau must be positive; the bound is undefined for tau = 0")
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    return max(_min_power(eps, tau), _min_power(eps * eps, tau * eps / sigma))


def basis_round_bounds(lp: StandardLP, eps) -> tuple:
    """``(K_P, K_D, K)``: rounds after which every oracle basis is optimal."""
    m, n = lp.m, lp.n
    la = encoding_length(lp.A)
    logeps = -math.log2(Fraction(eps))
    kp = (4 * m * m * la + 4 * _pair_length(lp.A, lp.b) + 5 * encoding_length(tuple(lp.l)) + 2 * n * n + 4 * n + 2) / logeps
    kd = (4 * m * m * la + 4 * _pair_length(lp.A, lp.c) + 2 * n * n + 4 * n + 1) / logeps
    return kp, kd, max(kp, kd) + 1


def reconstruction_round_bounds(q_tilde: int, eps, beta, p: int = 1074) -> tuple:
    """``(K1, K2)`` past which ``M_k >= q_tilde`` and rounding succeeds."""
    eps, beta = float(Fraction(eps)), float(Fraction(beta))
    if not beta * eps < 1:
        raise ValueError("need beta < 1/eps")
    k1 = (2 * math.log2(q_tilde) + 1) / -math.log2(beta * eps)
    k2 = (p - math.log2(1 - eps)) / math.log2(beta)
    return k1, k2


def _rand_rational(rng: random.Random, coeff: int) -> Fraction:
    return Fraction(rng.randint(-coeff, coeff), rng.randint(1, 4))


def random_feasible_lp(seed: int, m: int, n: int, coeff: int = 9, budget: int = 200) -> StandardLP:
    """Seeded LP with full-row-rank ``A``, an interior feasible point and a finite optimum."""
    if not 1 <= m <= n:
        raise ValueError("need 1 <= m <= n")
    rng = random.Random(seed)
    for _ in range(budget):
        A = [[_rand_rational(rng, coeff) for _ in range(n)] for _ in range(m)]
        if _rank(A) < m:
            continue
        l = [Fraction(rng.randint(-2, 2), rng.randint(1, 2)) for _ in range(n)]
        x0 = [li + Fraction(rng.randint(1, 8), rng.randint(1, 4)) for li in l]
        b = [sum((a * x for a, x in zip(row, x0)), ZERO) for row in A]
        c = [_rand_rational(rng, coeff) for _ in range(n)]
        lp = StandardLP.from_dense(A, b, l, c)
        try:
            brute_force_optimum(lp)
        except NoOptimalBasisError:
            continue
        return lp
    raise RuntimeError(f"no bounded instance found in {budget} draws for seed {seed}")


def suite(count: int = 100, base_seed: int = 0) -> list:
    """The seeded random instances used by the equivalence suite (m <= 3, n <= 6)."""
    out = []
    for k in range(count):
        rng = random.Random(10_000 + base_seed + k)
        m = rng.randint(1, 3)
        n = rng.randint(m + 1, 6)
        out.append(random_feasible_lp(base_seed + k, m, n))
    return out
