import math

import numpy as np
from hypothesis import given, settings, strategies as st

from fracstefan import analysis, verify
from fracstefan.similarity import (
    front_position,
    solve_flux,
    solve_temperature,
    theta_liquid,
    theta_solid,
)
from fracstefan.special_functions import (
    log_wright_negative,
    mainardi,
    wright,
    wright_complement,
)

SETTINGS = settings(max_examples=60, deadline=None)
seeds = st.integers(min_value=0, max_value=2**32 - 1)
orders = st.floats(min_value=0.02, max_value=0.98)
args = st.floats(min_value=1e-3, max_value=20.0)


def _check_ordering(sol, rng):
    p = sol.problem
    head = theta_liquid(sol, 0.0, 1.0)
    for _ in range(10):
        t = float(10.0 ** rng.uniform(-1, 1))
        r = front_position(sol, t)
        tl = theta_liquid(sol, float(rng.uniform(0.0, 0.9)) * r, t)
        assert p.T_m < tl <= head * (1 + 1e-15)
        if not p.one_phase:
            ts = theta_solid(sol, r * (1.0 + float(rng.uniform(0.1, 3.0))), t)
            assert p.T_i <= ts < p.T_m


@SETTINGS
@given(seeds, st.booleans())
def test_flux_solutions_order_temperatures(seed, one_phase):
    rng = np.random.default_rng(seed)
    sol = solve_flux(analysis.random_flux_problem(rng, one_phase))
    assert sol.mu > 0 and sol.relative_residual <= 1e-12
    _check_ordering(sol, rng)
    assert verify.stefan_residual(sol, 1.0) <= 1e-10 * verify.stefan_scale(sol, 1.0)


@SETTINGS
@given(seeds, st.booleans())
def test_temperature_solutions_order_temperatures(seed, one_phase):
    rng = np.random.default_rng(seed)
    sol = solve_temperature(analysis.random_temperature_problem(rng, one_phase))
    _check_ordering(sol, rng)
    if not one_phase:
        assert analysis.interface_inequality_check(sol)[2]


@SETTINGS
@given(seeds, st.lists(st.floats(min_value=0.0, max_value=1e3), min_size=2, max_size=8))
def test_front_is_monotone_in_time(seed, times):
    sol = solve_flux(analysis.random_flux_problem(np.random.default_rng(seed)))
    times = sorted(times)
    r = [front_position(sol, t) for t in times]
    assert r == sorted(r)
    assert front_position(sol, 0.0) == 0.0


@SETTINGS
@given(args, orders)
def test_wright_kernel_is_a_decreasing_probability(x, alpha):
    nu = alpha / 2
    w = wright(-x, -nu, 1.0)
    assert 0.0 < w < 1.0
    assert wright(-1.1 * x, -nu, 1.0) <= w
    assert math.isclose(w + wright_complement(x, nu), 1.0, rel_tol=2e-15)
    assert mainardi(x, nu) > 0.0


@SETTINGS
@given(st.floats(min_value=0.1, max_value=60.0), orders, st.floats(min_value=0.0, max_value=1.5))
def test_log_wright_consistent(x, alpha, beta):
    log_abs, sign = log_wright_negative(x, alpha / 2, beta)
    w = wright(-x, -alpha / 2, beta)
    if w != 0.0 and abs(w) > 1e-250:
        assert math.isclose(sign * math.exp(log_abs), w, rel_tol=1e-11)


@SETTINGS
@given(args, orders)
def test_chain_inequality_holds(x, alpha):
    m1, m2, m3 = analysis.chain_inequality_margins(x, alpha)
    assert m1 > 0 and m2 > 0 and m3 > 0


@SETTINGS
@given(args, st.integers(min_value=1, max_value=20))
def test_turan_margin_positive_on_lattice(x, k):
    assert analysis.turan_margin(x, 0.05 * k) > 0.0


@SETTINGS
@given(seeds)
def test_solver_is_deterministic(seed):
    p = analysis.random_flux_problem(np.random.default_rng(seed))
    assert solve_flux(p) == solve_flux(p)
