"""Numerical probes of the monotonicity conjecture and the equivalence results.

None of these functions prove anything. They evaluate the quantities whose
signs the theory predicts and report what they find, so that a violation
shows up as data rather than as an exception.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .errors import InvalidProblemError, UnderflowGuardError
from .similarity import (
    FluxProblem,
    Material,
    SimilaritySolution,
    SolutionKind,
    TemperatureProblem,
    critical_flux,
    f2_alpha,
    face_flux_coefficient,
    face_temperature,
    front_position,
    induced_flux_problem,
    induced_temperature_problem,
    make_one_phase,
    solve_flux,
    solve_temperature,
    theta_liquid,
    theta_solid,
)
from .special_functions import (
    DEFAULT_CONFIG,
    gamma,
    mainardi,
    reciprocal_gamma,
    wright,
    wright_complement,
)

__all__ = [
    "ScanReport",
    "turan_margin",
    "chain_inequality_margins",
    "f2_monotonicity_scan",
    "EquivalenceResult",
    "equivalence_roundtrip",
    "reverse_roundtrip",
    "interface_inequality_check",
    "random_flux_problem",
    "random_temperature_problem",
    "FIGURE_ALPHAS",
]

#: orders plotted in the two figures of the monotonicity remark
FIGURE_ALPHAS = (1 / 16, 1 / 8, 1 / 4, 3 / 8, 1 / 2, 5 / 8, 3 / 4, 7 / 8, 15 / 16)
MONOTONE_RTOL = 1e-13
GROWTH_FACTOR = 10.0


def _check_x_alpha(x, alpha, alpha_max_open=True):
    if not (x > 0.0 and math.isfinite(x)):
        raise ValueError(f"x must be positive and finite, got {x!r}")
    upper_ok = alpha < 1.0 if alpha_max_open else alpha <= 1.0
    if not (alpha > 0.0 and upper_ok):
        interval = "(0, 1)" if alpha_max_open else "(0, 1]"
        raise ValueError(f"alpha must lie in {interval}, got {alpha!r}")


def turan_margin(x: float, alpha: float, cfg=DEFAULT_CONFIG) -> float:
    """``M_nu(x)^2 - W(-x; -nu; 1) W(-x; -nu; 1 - alpha)`` with ``nu = alpha/2``.

    F2 = M_nu / W(-x; -nu; 1) is increasing at x exactly when this is
    positive. ``alpha = 1`` is accepted (the classical pair erfc and its
    derivatives), since no Gamma pole enters.
    """
    _check_x_alpha(x, alpha, alpha_max_open=False)
    nu = 0.5 * alpha
    m = mainardi(x, nu, cfg)
    return m * m - wright(-x, -nu, 1.0, cfg) * wright(-x, -nu, 1.0 - alpha, cfg)


def chain_inequality_margins(x: float, alpha: float, cfg=DEFAULT_CONFIG):
    """Margins of ``Gamma(1-a) W(.;1-a) > Gamma(1-a/2) M > W(.;1) > 0``.

    Returns ``(m1, m2, m3)``, each positive when its link of the chain holds.
    """
    _check_x_alpha(x, alpha)
    nu = 0.5 * alpha
    w_low = gamma(1.0 - alpha) * wright(-x, -nu, 1.0 - alpha, cfg)
    w_mid = gamma(1.0 - nu) * mainardi(x, nu, cfg)
    w_one = wright(-x, -nu, 1.0, cfg)
    return w_low - w_mid, w_mid - w_one, w_one


@dataclass
class ScanReport:
    """Samples of F2 on an ascending grid with the monotonicity verdict.

    ``first_violation`` holds ``((x_k, x_k+1), (F_k, F_k+1))`` for the first
    adjacent decrease beyond the tolerance. ``truncated_at`` is the first x
    where the denominator underflowed; the grid stops before it.
    ``start_limit`` is the x -> 0+ limit 1/Gamma(1 - alpha/2) and
    ``start_gap`` the relative distance of the first sample from it.
    ``growth_ratio`` is F(last)/F(first); the theory predicts unbounded
    growth, and ``grows`` records whether the ratio exceeds 10 on this grid.
    """

    alpha: float
    grid: list
    values: list
    monotone: bool
    first_violation: Optional[tuple] = None
    margins: list = field(default_factory=list)
    truncated_at: Optional[float] = None
    start_limit: float = 0.0
    start_gap: float = 0.0
    growth_ratio: float = 1.0
    grows: bool = False

    @property
    def min_margin(self) -> float:
        finite = [m for m in self.margins if m is not None]
        return min(finite) if finite else math.nan


def f2_monotonicity_scan(alpha: float, x_max: float = 20.0, n_points: int = 200,
                         x_min: float = 1e-3, with_margins: bool = True,
                         cfg=DEFAULT_CONFIG) -> ScanReport:
    """Sample F2 on a log-spaced grid in ``[x_min, x_max]`` and judge monotonicity.

    Args:
        alpha: Order in (0, 1].
        x_max: Right end of the grid.
        n_points: Number of grid points, at least 2.
        x_min: Left end, positive.
        with_margins: Also evaluate the Turan margin at every grid point.
        cfg: Series configuration passed to the special functions.

    Returns:
        ScanReport. An underflowing denominator truncates the scan instead
        of raising.
    """
    if n_points < 2:
        raise ValueError(f"n_points must be at least 2, got {n_points!r}")
    if not (0.0 < x_min < x_max):
        raise ValueError(f"need 0 < x_min < x_max, got {x_min!r}, {x_max!r}")
    if not (0.0 < alpha <= 1.0):
        raise ValueError(f"alpha must lie in (0, 1], got {alpha!r}")
    xs = np.geomspace(x_min, x_max, n_points)
    grid, values, margins = [], [], []
    truncated = None
    for x in xs:
        x = float(x)
        try:
            v = f2_alpha(x, alpha, cfg)
        except UnderflowGuardError:
            truncated = x
            break
        grid.append(x)
        values.append(v)
        if with_margins:
            margins.append(turan_margin(x, alpha, cfg))
    violation = None
    for k in range(len(values) - 1):
        if values[k + 1] - values[k] < -MONOTONE_RTOL * abs(values[k]):
            violation = ((grid[k], grid[k + 1]), (values[k], values[k + 1]))
            break
    limit = reciprocal_gamma(1.0 - 0.5 * alpha)
    ratio = values[-1] / values[0] if values else math.nan
    return ScanReport(
        alpha=float(alpha),
        grid=grid,
        values=values,
        monotone=violation is None and len(values) >= 2,
        first_violation=violation,
        margins=margins,
        truncated_at=truncated,
        start_limit=limit,
        start_gap=abs(values[0] - limit) / limit if values else math.nan,
        growth_ratio=ratio,
        grows=ratio > GROWTH_FACTOR,
    )


class EquivalenceResult(NamedTuple):
    """Outcome of a flux/temperature round trip.

    ``mu`` is the coefficient of the starting problem, ``xi`` that of the
    induced one; ``dual`` is the induced face temperature (forward) or flux
    coefficient (reverse). ``temperature_gap`` is the largest absolute
    difference in kelvin between the two solutions on a random grid.
    """

    mu: float
    dual: float
    xi: float
    gap: float
    temperature_gap: float


def _random_grid(sol, rng, n):
    """(x, t, phase) triples inside the physical regions for t in [0.1, 10]."""
    dp = sol.params
    pts = []
    for _ in range(n):
        t = float(10.0 ** rng.uniform(-1.0, 1.0))
        r = front_position(sol, t)
        pts.append((float(rng.uniform(0.0, 1.0)) * r, t, "liquid"))
        if not sol.problem.one_phase:
            pts.append((r + float(rng.uniform(0.0, 8.0)) * dp.lambda_s * t**dp.nu, t, "solid"))
    return pts


def _temperature_gap(a: SimilaritySolution, b: SimilaritySolution, rng, n):
    gap = 0.0
    for x, t, phase in _random_grid(a, rng, n):
        # the fronts differ by |xi - mu|; extend mode keeps a point on the same formula
        f = theta_liquid if phase == "liquid" else theta_solid
        gap = max(gap, abs(f(a, x, t) - f(b, x, t, extend=True)))
    return gap


def equivalence_roundtrip(p: FluxProblem, tol: float = 1e-12, rng=None,
                          n_grid: int = 20) -> EquivalenceResult:
    """Flux problem, its face temperature, and the temperature problem built from it.

    Both problems should have the same similarity solution. ``rng`` (a
    numpy Generator, default seed 0) draws the comparison grid.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    sol = solve_flux(p, tol)
    t0 = face_temperature(sol)
    other = solve_temperature(induced_temperature_problem(sol), tol)
    gap = abs(other.mu - sol.mu)
    return EquivalenceResult(sol.mu, t0, other.mu, gap, _temperature_gap(sol, other, rng, n_grid))


def reverse_roundtrip(p: TemperatureProblem, tol: float = 1e-12, rng=None,
                      n_grid: int = 20) -> EquivalenceResult:
    """Temperature problem, its flux coefficient, and the flux problem built from it."""
    rng = np.random.default_rng(0) if rng is None else rng
    sol = solve_temperature(p, tol)
    q0 = face_flux_coefficient(sol)
    other = solve_flux(induced_flux_problem(sol), tol)
    gap = abs(other.mu - sol.mu)
    return EquivalenceResult(sol.mu, q0, other.mu, gap, _temperature_gap(sol, other, rng, n_grid))


def interface_inequality_check(sol: SimilaritySolution):
    """Left and right side of the bound on the front coefficient of a temperature problem.

    ``lhs = 1 - W(-lambda xi; -nu; 1)`` and
    ``rhs = (T_0 - T_m)/(T_m - T_i) * k_l lambda_s / (k_s lambda_l)``.
    Returns ``(lhs, rhs, lhs < rhs)``.
    """
    if sol.kind is not SolutionKind.TEMPERATURE:
        raise ValueError("interface_inequality_check needs a temperature-kind solution")
    p, dp = sol.problem, sol.params
    if p.one_phase or not p.T_i < p.T_m:
        raise InvalidProblemError("the inequality needs T_i < T_m; it is undefined for one-phase problems")
    lhs = wright_complement(dp.lam * sol.mu, dp.nu)
    rhs = (p.T_0 - p.T_m) / (p.T_m - p.T_i) * p.liquid.k * dp.lambda_s / (p.solid.k * dp.lambda_l)
    return lhs, rhs, lhs < rhs


def _log_uniform(rng, center, decades=2.0):
    return float(center * 10.0 ** rng.uniform(-decades, decades))


def _random_thermal(rng):
    solid = Material(_log_uniform(rng, 1.0), _log_uniform(rng, 1000.0))
    liquid = Material(_log_uniform(rng, 1.0), _log_uniform(rng, 1000.0))
    return solid, liquid, _log_uniform(rng, 1000.0), _log_uniform(rng, 3e5)


def random_flux_problem(rng, one_phase: bool = False, T_m: float = 273.15) -> FluxProblem:
    """Draw a valid flux problem.

    Conductivities, specific heats, density and latent heat are log-uniform
    over four decades; alpha is uniform in [0.1, 0.99]; T_m - T_i is
    log-uniform in [0.1, 100] K; q0 exceeds the critical flux by a factor
    ``1 + 10^U(-2, 2)``. One-phase problems draw q0 log-uniform around the
    liquid's natural flux scale ``k_l * (1 K) / lambda_l``.
    """
    solid, liquid, rho, lat = _random_thermal(rng)
    alpha = float(rng.uniform(0.1, 0.99))
    if one_phase:
        lam_l = math.sqrt(liquid.k / (rho * liquid.c))
        return make_one_phase("flux", liquid, rho, lat, T_m, _log_uniform(rng, liquid.k / lam_l), alpha)
    dT = float(10.0 ** rng.uniform(-1.0, 2.0))
    probe = FluxProblem(solid, liquid, rho, lat, T_m - dT, T_m, 1.0, alpha)
    q0 = critical_flux(probe) * (1.0 + 10.0 ** rng.uniform(-2.0, 2.0))
    return FluxProblem(solid, liquid, rho, lat, T_m - dT, T_m, q0, alpha)


def random_temperature_problem(rng, one_phase: bool = False, T_m: float = 273.15) -> TemperatureProblem:
    """Draw a valid temperature problem (parameters as in :func:`random_flux_problem`).

    ``T_0 - T_m`` and ``T_m - T_i`` are independently log-uniform in [0.1, 100] K.
    """
    solid, liquid, rho, lat = _random_thermal(rng)
    alpha = float(rng.uniform(0.1, 0.99))
    superheat = float(10.0 ** rng.uniform(-1.0, 2.0))
    if one_phase:
        return make_one_phase("temperature", liquid, rho, lat, T_m, T_m + superheat, alpha)
    dT = float(10.0 ** rng.uniform(-1.0, 2.0))
    return TemperatureProblem(solid, liquid, rho, lat, T_m - dT, T_m, T_m + superheat, alpha)
