"""Acceptance criteria 1-9; criterion 10 (benchmark timing ratios) is out of scope."""

import math
import random
import time
from fractions import Fraction as F

import numpy as np
import pytest

from exlp.model import StandardLP
from exlp.oracle import OracleConfig, SimplexOracle
from exlp.ratcore import encoding_length
from exlp.reconstruct import reconstruct_scalar, solve_with_reconstruction
from exlp.refine import RefineConfig, compute_residuals, is_power_of_two, iterative_refine
from exlp.testkit import (
    basis_violation,
    brute_force_optimum,
    iteration_bound,
    min_violation_thresholds,
    random_feasible_lp,
    suite,
)
from exlp.verify import (
    SingularBasisError,
    basic_solution,
    check_exact_feasibility,
    is_exactly_optimal,
    rational_lu_factorize,
    solve_with_basis_verification,
)

ETA = F(1, 10**6)
SIGMA = F(1, 10**4)
ALPHA = 2**30
EPS = max(ETA, F(1, ALPHA))
P = 1074
TAUS = (F(1, 10**10), F(1, 10**30), F(1, 10**50))


@pytest.fixture(scope="module")
def instances():
    return suite(100)


def _trace(lp, tau):
    """Refine to ``tau`` and return the outcome plus every iterate ``(k, x, y)``."""
    iterates = []
    out = iterative_refine(lp, SimplexOracle(), RefineConfig(alpha=ALPHA, tau=tau),
                           lambda s: iterates.append((s.k, s.x, s.y)))
    if out.status == "converged":
        iterates.append((out.rounds, out.x, out.y))
    return out, iterates


@pytest.fixture(scope="module")
def traces(instances):
    return {(i, tau): _trace(lp, tau) for i, lp in enumerate(instances) for tau in TAUS}


def test_criterion_1_example1(example1, acceptance_log):
    problems = []
    for solver in (solve_with_basis_verification, solve_with_reconstruction):
        t0 = time.perf_counter()
        sol = solver(example1)
        elapsed = time.perf_counter() - t0
        x = sol.x
        if not sol.optimal or not is_exactly_optimal(example1, x, sol.y):
            problems.append(f"{sol.method}: not exactly optimal")
            continue
        dual_obj = sum((bi * yi for bi, yi in zip(example1.b, sol.y)), F(0))
        z = [ci - ai for ci, ai in zip(example1.c, example1.A.rmatvec(sol.y))]
        dual_obj += sum((li * zi for li, zi in zip(example1.l, z)), F(0))
        if example1.objective(x) != dual_obj:
            problems.append(f"{sol.method}: duality gap {example1.objective(x) - dual_obj}")
        if max(v.denominator for v in x) > 8:
            problems.append(f"{sol.method}: denominator above 8")
        size = encoding_length(tuple(x[:6]))
        if size > 27:
            problems.append(f"{sol.method}: vertex size {size}")
        if elapsed >= 1.0:
            problems.append(f"{sol.method}: {elapsed:.2f}s")
    ok = acceptance_log(1, not problems, "Example 1 exact in fac and rec, denominators <= 8, size <= 27, < 1 s "
                        + "; ".join(problems))
    assert ok, problems


def test_criterion_2_oracle_equivalence(instances, acceptance_log):
    t0 = time.perf_counter()
    mismatches = []
    for i, lp in enumerate(instances):
        best = brute_force_optimum(lp).optimum
        fac = solve_with_basis_verification(lp)
        rec = solve_with_reconstruction(lp)
        if fac.objective != best or rec.objective != best:
            mismatches.append(i)
    elapsed = time.perf_counter() - t0
    ok = acceptance_log(2, not mismatches and elapsed < 60,
                        f"{100 - len(mismatches)}/100 instances agree with brute force in {elapsed:.1f}s")
    assert ok, mismatches


def test_criterion_3_residual_decay(traces, instances, acceptance_log):
    violations = []
    checked = 0
    for (i, tau), (_, iterates) in traces.items():
        lp = instances[i]
        for k, x, y in iterates:
            checked += 1
            bound = EPS**k
            b_hat = [bi - ai for bi, ai in zip(lp.b, lp.A.matvec(x))]
            z = [ci - ai for ci, ai in zip(lp.c, lp.A.rmatvec(y))]
            gap = abs(sum(((xi - li) * zi for xi, li, zi in zip(x, lp.l, z)), F(0)))
            if (max(abs(v) for v in b_hat) > bound
                    or any(xi - li < -bound for xi, li in zip(x, lp.l))
                    or any(zi < -bound for zi in z)
                    or gap > SIGMA * EPS ** (2 * (k - 1))):
                violations.append((i, float(tau), k))
    ok = acceptance_log(3, not violations, f"{checked} iterates checked against the four residual decay bounds, {len(violations)} violations")
    assert ok, violations


def test_criterion_4_iteration_bound(traces, acceptance_log):
    bad = []
    for (i, tau), (out, _) in traces.items():
        limit = iteration_bound(tau, EPS, SIGMA)
        if out.status != "converged" or out.delta > tau or out.oracle_calls > limit:
            bad.append((i, f"1e{round(math.log10(tau))}", out.status, out.oracle_calls, limit, out.reason))
    ok = acceptance_log(4, not bad, f"{len(traces) - len(bad)}/{len(traces)} refine runs reach tau within the "
                        f"iteration bound (2, 5, 9 calls); failures: {bad}")
    assert ok, bad


def test_criterion_5_size_growth(traces, acceptance_log):
    log_alpha = math.ceil(math.log2(ALPHA))
    violations = []
    checked = 0
    for (i, tau), (_, iterates) in traces.items():
        for k, x, y in iterates:
            limit = 2 * log_alpha * k + 3 * P + 2
            for v in x + y:
                checked += 1
                if encoding_length(v) > limit or not is_power_of_two(F(v.denominator)):
                    violations.append((i, k, v))
    ok = acceptance_log(5, not violations, f"{checked} iterate entries within the size bound with dyadic denominators")
    assert ok, violations[:5]


def _unique_within(a, d, M):
    """Brute force: all p/q with q <= M and 2M|p d - q a| < d, for alpha = a/d."""
    q = np.arange(1, M + 1, dtype=np.int64)
    p = np.floor((2 * q * a + d) / (2 * d)).astype(np.int64)
    hits = []
    for shift in (-1, 0, 1):
        pp = p + shift
        mask = 2 * M * np.abs(pp * d - q * a) < d
        hits.extend(F(int(x), int(y)) for x, y in zip(pp[mask], q[mask]))
    return set(hits)


def test_criterion_6_theorem1(acceptance_log):
    rng = random.Random(2024)
    M = 10**6
    misses = 0
    for _ in range(1000):
        q = rng.randint(1, M)
        exact = F(rng.randint(-(10**9), 10**9), q)
        # |e| < 1 / (2 * 10^12)
        e = F(rng.randint(-(10**6) + 1, 10**6 - 1), 2 * 10**18)
        if reconstruct_scalar(exact + e, M) != exact:
            misses += 1
    bad_unique = 0
    alphas = {F(a, d) for d in range(1, 65) for a in range(-d, d + 1)}
    for alpha in alphas:
        for m in range(1, 101):
            hits = _unique_within(alpha.numerator, alpha.denominator, m)
            got = reconstruct_scalar(alpha, m)
            if len(hits) > 1 or (got is None) != (not hits) or (got is not None and got not in hits):
                bad_unique += 1
    ok = acceptance_log(6, misses == 0 and bad_unique == 0,
                        f"1000 perturbed rationals, {misses} misses; {len(alphas)} alphas x M <= 100 exhaustive, "
                        f"{bad_unique} uniqueness failures")
    assert ok


def test_criterion_7_violation_thresholds(example1, acceptance_log):
    lps = [example1] + [random_feasible_lp(500 + s, 1 + s % 3, min(6, 3 + s % 4)) for s in range(20)]
    violations = 0
    checked = 0
    for lp in lps:
        primal, dual = min_violation_thresholds(lp)
        res = brute_force_optimum(lp)
        for basis, sol in res.solutions.items():
            if res.classification[basis] == "optimal":
                continue
            checked += 1
            p, d = basis_violation(lp, sol)
            if (p and p < primal) or (d and d < dual) or not (p or d):
                violations += 1
    ok = acceptance_log(7, violations == 0, f"{checked} non-optimal bases over {len(lps)} LPs, {violations} below threshold")
    assert ok


def test_criterion_8_basis_stabilization(instances, acceptance_log):
    bad = []
    max_fac = 0
    for i, lp in enumerate(instances):
        sol = solve_with_basis_verification(lp, SimplexOracle(), RefineConfig(), stall=2)
        max_fac = max(max_fac, sol.factorizations)
        last = sol.history[-1].basis
        try:
            final = check_exact_feasibility(lp, basic_solution(lp, rational_lu_factorize(lp.A, last)))
        except SingularBasisError:
            final = None
        stable = sol.factorizations == 0 or sol.history[-1].basis == sol.history[-2].basis
        if not sol.optimal or final is None or not final.optimal or not stable or sol.factorizations > 3:
            bad.append((i, sol.status, sol.factorizations))
    ok = acceptance_log(8, not bad, f"final oracle basis optimal on {100 - len(bad)}/100, max {max_fac} factorizations")
    assert ok, bad


def test_criterion_9_reconstruction_schedule(acceptance_log):
    lp = StandardLP.from_dense([[7]], [1], [0], [1])
    oracle = SimplexOracle(OracleConfig())
    sol = solve_with_reconstruction(lp, oracle, cfg=RefineConfig(alpha=2))
    rounds = sol.attempt_rounds
    follows = all(b == math.ceil(F(6, 5) * a) for a, b in zip(rounds, rounds[1:]))
    ok = acceptance_log(9, sol.optimal and sol.x == (F(1, 7),) and len(rounds) >= 5 and follows,
                        f"attempt rounds {rounds} follow k' = ceil(1.2 k)")
    assert ok
