from fractions import Fraction as F

import pytest

from exlp.model import StandardLP
from exlp.refine import (
    RefineConfig,
    apply_correction,
    ceil_log2,
    compute_residuals,
    is_power_of_two,
    iterative_refine,
    update_scaling,
)
from exlp.testkit import iteration_bound


def test_residuals_at_optimum(tiny):
    assert compute_residuals(tiny, (F(1),), (F(1),))[3] == 0


def test_residuals_at_zero(tiny):
    b_hat, l_hat, c_hat, delta = compute_residuals(tiny, (F(0),), (F(0),))
    assert b_hat == (1,) and delta == 1


def test_residuals_perturbed_basic(example1):
    x = [F(0), F(2), F(0), F(0), F(1), F(0), F(0), F(1), F(0)]
    y = (F(-2), F(0), F(-1, 2))
    assert compute_residuals(example1, x, y)[3] == 0
    x[1] += F(1, 1024)
    assert compute_residuals(example1, x, y)[3] == F(2, 1024)


@pytest.mark.parametrize(
    "delta,scale,alpha,expected",
    [(F(3, 10), 1, 2, 2), (0, 1, 4, 4), (F(1, 5), 2, 1024, 8), (F(1, 8), 1, 2**30, 8)],
)
def test_update_scaling(delta, scale, alpha, expected):
    assert update_scaling(delta, scale, alpha) == expected


def test_apply_correction():
    assert apply_correction((F(0),), (F(0),), (F(1),), (F(0),), 2) == ((F(1, 2),), (F(0),))
    assert apply_correction((F(3, 4),), (F(1),), (F(-1, 2),), (F(0),), 4) == ((F(5, 8),), (F(1),))
    assert apply_correction((F(1),), (F(2),), (F(0),), (F(0),), 8) == ((F(1),), (F(2),))


def test_helpers():
    assert ceil_log2(F(1, 3)) == -1
    assert ceil_log2(8) == 3 and ceil_log2(9) == 4
    assert is_power_of_two(F(1, 4)) and not is_power_of_two(F(3, 4)) and not is_power_of_two(0)


def test_tiny_converges_first_round(tiny):
    out = iterative_refine(tiny)
    assert out.status == "converged" and out.rounds == 1 and out.delta == 0 and out.x == (1,)


def test_example1_deep_tolerance(example1):
    tau = F(1, 10**50)
    out = iterative_refine(example1, cfg=RefineConfig(tau=tau))
    assert out.status == "converged" and out.delta <= tau
    assert out.oracle_calls <= iteration_bound(tau, F(1, 10**6), F(1, 10**4))


def test_nondyadic_optimum_refines(seventh):
    tau = F(1, 10**40)
    out = iterative_refine(seventh, cfg=RefineConfig(tau=tau))
    assert out.status == "converged"
    assert abs(out.x[0] - F(1, 7)) <= tau
    assert all(is_power_of_two(r.scale) for r in out.history)


def test_round_limit(seventh):
    out = iterative_refine(seventh, cfg=RefineConfig(max_rounds=2))
    assert out.status == "round-limit" and out.rounds == 2


def test_observer_can_stop(seventh):
    seen = []

    def obs(state):
        seen.append(state.k)
        return "stop" if state.k == 3 else None

    out = iterative_refine(seventh, observer=obs)
    assert out.status == "stopped" and out.result == "stop" and seen == [1, 2, 3]


def test_oracle_failure_on_infeasible():
    lp = StandardLP.from_dense([[1]], [-1], [0], [1])
    assert iterative_refine(lp).status == "oracle-failure"


def test_degenerate_lp_stays_in_envelope():
    # min x1 - x2 with two copies of x1 = x2
    lp = StandardLP.from_dense([[1, -1], [-1, 1]], [0, 0], [0, 0], [1, -1])
    out = iterative_refine(lp, cfg=RefineConfig(tau=F(1, 10**30)))
    assert out.status == "converged"
    envelope = F(2) ** 1074 * sum(1 / r.scale for r in out.history)
    assert all(abs(v) <= envelope for v in out.x + out.y)


def test_config_validation():
    with pytest.raises(ValueError):
        RefineConfig(alpha=1)
    with pytest.raises(ValueError):
        RefineConfig(tau=-1)
    with pytest.raises(ValueError):
        RefineConfig(max_rounds=0)
