import json
import math

import numpy as np
import pytest

from conftest import WATER, ice_water, ice_water_temperature
from fracstefan import verify
from fracstefan.errors import GridError
from fracstefan.similarity import (
    assemble_flux,
    conduction_solution,
    g_alpha,
    make_one_phase,
    solve_flux,
    solve_temperature,
)


@pytest.mark.parametrize("alpha", [0.2, 0.5, 0.9, 1.0])
def test_l1_exact_for_linear(alpha):
    h, n = 0.01, 100
    t = h * n
    got = verify.caputo_l1(h * np.arange(n + 1), alpha, h)
    assert got == pytest.approx(t ** (1 - alpha) / math.gamma(2 - alpha), rel=1e-12)


@pytest.mark.parametrize("alpha", [0.3, 0.7])
def test_l1_order_on_quadratic(alpha):
    exact = 2.0 / math.gamma(3 - alpha)
    pairs = []
    for n in (32, 64, 128, 256):
        h = 1.0 / n
        pairs.append((h, abs(verify.caputo_l1((h * np.arange(n + 1)) ** 2, alpha, h) - exact)))
    assert verify.observed_order(pairs) == pytest.approx(2 - alpha, abs=0.05)


def test_l1_weights():
    w = verify.l1_weights(4, 0.5)
    assert w[0] == 1.0
    assert np.all(np.diff(w) < 0)
    assert verify.l1_weights(3, 1.0).tolist() == [1.0, 0.0, 0.0]


def test_l1_grid_errors():
    with pytest.raises(GridError):
        verify.caputo_l1([1.0], 0.5, 0.1)
    with pytest.raises(GridError):
        verify.caputo_l1([0.0, 1.0], 0.5, 0.0)
    with pytest.raises(ValueError):
        verify.caputo_l1([0.0, 1.0], 1.5, 0.1)
    sol = solve_flux(ice_water())
    with pytest.raises(GridError):
        verify.pde_residual(sol, "liquid", 1e-4, 1.0, 0.3)


def test_observed_order_with_zero_residual():
    assert verify.observed_order([(0.1, 1e-3), (0.05, 0.0)]) == math.inf


def test_conduction_pde_order():
    cs = conduction_solution(ice_water(0.6, 1e4))
    x = verify.sample_points(cs, 1.0, "solid")[2]
    ref = verify.time_refinement(cs, "solid", x, 1.0)
    assert verify.observed_order(ref) == pytest.approx(2 - 0.6, abs=0.3)
    assert ref[-1][1] < ref[0][1]


def test_sample_points_scale_with_phase():
    sol = solve_flux(ice_water(0.5))
    liquid = verify.sample_points(sol, 4.0, "liquid")
    solid = verify.sample_points(sol, 4.0, "solid")
    scale = 4.0**sol.params.nu
    assert liquid[0] == pytest.approx(1.5 * sol.params.lambda_l * scale)
    assert solid[-1] == pytest.approx(3.5 * sol.params.lambda_s * scale)


@pytest.mark.parametrize("alpha", [0.3, 0.5, 0.8, 1.0])
def test_report_gates_pass(alpha):
    report = verify.build_report(solve_flux(ice_water(alpha)))
    assert report.passed, report.gates
    assert report.convergence_rate >= 2 - alpha - 0.3
    assert len(report.pde_residuals) == 10
    d = report.to_dict()
    json.dumps(d)
    assert d["passed"] is True and set(d["gates"]) == {"pde_order", "boundary", "stefan"}


def test_report_temperature_and_one_phase():
    assert verify.build_report(solve_temperature(ice_water_temperature(0.6))).passed
    p = make_one_phase("flux", WATER, 1000.0, 334000.0, 273.15, 5e4, 0.6)
    report = verify.build_report(solve_flux(p))
    assert report.passed
    assert {s.phase for s in report.pde_residuals} == {"liquid"}


def test_small_order_initial_layer_is_unresolved():
    # at alpha = 0.1 the layer tau ~ t eta^(-1/nu) is finer than most of the
    # 2^-4..2^-8 t steps, so only the order gate fails
    report = verify.build_report(solve_flux(ice_water(0.1)))
    assert not report.gates["pde_order"]["passed"]
    assert report.gates["boundary"]["passed"] and report.gates["stefan"]["passed"]


def test_failing_gate_is_reported():
    report = verify.build_report(solve_flux(ice_water(0.5)), order_slack=-1.0)
    assert not report.passed
    assert not report.gates["pde_order"]["passed"]


def test_boundary_residuals_keys_and_validation():
    flux = verify.boundary_residuals(solve_flux(ice_water()), [0.5, 2.0])
    assert set(flux) == {"flux_at_0", "interface_liquid", "interface_solid", "far_field"}
    assert max(flux.values()) < 1e-9
    temp = verify.boundary_residuals(solve_temperature(ice_water_temperature()), [1.0])
    assert "face_temperature" in temp
    with pytest.raises(ValueError):
        verify.boundary_residuals(solve_flux(ice_water()), [0.0, 1.0])


def test_errata_pin_separates_the_two_root_functions():
    pin = verify.errata_pin(ice_water(0.5))
    assert pin["corrected"] < 1e-10 * pin["scale"]
    assert pin["printed_at_corrected_root"] > 1e-3 * pin["scale"]
    if pin["printed"] is not None:
        assert pin["printed"] > 1e3 * pin["corrected"]


def test_g_alpha_as_printed_differs_by_lambda_l():
    p = ice_water(0.5)
    # with lambda_l != 1 the printed form is a different function
    assert verify.g_alpha_as_printed(0.3, p) != pytest.approx(g_alpha(0.3, p), rel=1e-3)


def test_stefan_residual_properties():
    sol = solve_flux(ice_water(0.6))
    dp = sol.params
    t = 1.0
    assert verify.stefan_residual(sol, t) < 1e-10 * verify.stefan_scale(sol, t)
    off = assemble_flux(sol.problem, 1.01 * sol.mu)
    assert verify.stefan_residual(off, t) > 1e3 * verify.stefan_residual(sol, t)
    # self-similar scaling: every term carries t^(-alpha/2)
    r1, r4 = verify.stefan_residual(off, 1.0), verify.stefan_residual(off, 4.0)
    assert r4 == pytest.approx(r1 / 4**dp.nu, rel=1e-9)
    # algebraic identity with the root function
    root = abs(g_alpha(off.mu, off.problem) - dp.c_alpha * off.mu)
    factor = off.problem.density * off.problem.latent_heat * dp.lambda_s
    assert r1 == pytest.approx(root * factor, rel=1e-9)


def test_alpha_limit_scan():
    alphas = [0.9, 0.99, 0.999, 0.9999]
    rows, mu1 = verify.alpha_limit_scan(ice_water(0.5), alphas)
    assert [r.status for r in rows] == ["ok"] * 4
    gaps = [r.gap for r in rows]
    assert gaps == sorted(gaps, reverse=True)
    assert gaps[-1] < 1e-3 * mu1


def test_alpha_limit_scan_marks_subcritical_rows():
    # q_crit grows as alpha falls, so a modest flux is subcritical at small orders
    p = ice_water(1.0, 1.5e4)
    rows, _ = verify.alpha_limit_scan(p, [0.05, 1.0])
    assert rows[0].status == "subcritical" and rows[0].mu is None
    assert rows[1].status == "ok"
