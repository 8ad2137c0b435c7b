"""Independent checks of the assembled solutions.

The fractional PDE residual uses the L1 discretization of the Caputo
derivative in time and central differences in space, so it does not rely
on the Wright-function identities used to build the solutions. Interface
and boundary conditions are checked pointwise with the analytic gradients.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import GridError, NoBracketError, SubcriticalFluxError
from .similarity import (
    ConductionSolution,
    FluxProblem,
    SimilaritySolution,
    SolutionKind,
    _first_root,
    _g_terms,
    _guarded,
    assemble_flux,
    conduction_temperature,
    derive_params,
    front_position,
    solve_classical_flux,
    solve_flux,
    temperature_gradient,
    theta_liquid,
    theta_solid,
)
from .special_functions import gamma

__all__ = [
    "PdeSample",
    "ResidualReport",
    "caputo_l1",
    "l1_weights",
    "pde_residual",
    "time_refinement",
    "observed_order",
    "stefan_residual",
    "stefan_scale",
    "boundary_residuals",
    "alpha_limit_scan",
    "AlphaLimitRow",
    "g_alpha_as_printed",
    "errata_pin",
    "build_report",
    "sample_points",
]

DEFAULT_LEVELS = (4, 5, 6, 7, 8)
SPACE_STEP_FRACTION = 1e-2


def l1_weights(n: int, alpha: float) -> np.ndarray:
    """Weights ``b_j = (j+1)^(1-alpha) - j^(1-alpha)``, j = 0..n-1."""
    j = np.arange(n, dtype=float)
    e = 1.0 - alpha
    b = (j + 1.0) ** e - j**e
    # 0**0 would give b_0 = 0 at alpha = 1; the limit is 1
    b[0] = 1.0
    return b


def caputo_l1(samples, alpha: float, h: float) -> float:
    """L1 approximation of the Caputo derivative at the last sample.

    Parameters
    ----------
    samples : array_like
        f(0), f(h), ..., f(N h) on a uniform grid, N >= 1.
    alpha : float
        Order in (0, 1]; alpha = 1 gives the backward difference.
    h : float
        Grid step.

    Notes
    -----
    ``D^alpha f(t_N) ~ h^-alpha / Gamma(2-alpha) * sum_j b_j (f_{N-j} - f_{N-j-1})``,
    exact for piecewise-linear f, with error O(h^(2-alpha)) for smooth f.
    """
    f = np.asarray(samples, dtype=float)
    if f.ndim != 1 or f.size < 2:
        raise GridError("caputo_l1 needs at least two samples on a 1-D grid")
    if not (h > 0.0 and math.isfinite(h)):
        raise GridError(f"grid step must be positive, got {h!r}")
    if not (0.0 < alpha <= 1.0):
        raise ValueError(f"alpha must lie in (0, 1], got {alpha!r}")
    n = f.size - 1
    diffs = np.diff(f)[::-1]
    return float(h ** (-alpha) / gamma(2.0 - alpha) * np.dot(l1_weights(n, alpha), diffs))


def _phase_fn(sol, phase):
    """(theta(x, t) in extend mode, diffusivity scale, alpha) for a solution and phase."""
    if isinstance(sol, ConductionSolution):
        return (lambda x, t: conduction_temperature(sol, x, t, extend=True)), sol.lambda_s, sol.alpha
    if phase == "liquid":
        return (lambda x, t: theta_liquid(sol, x, t, extend=True)), sol.params.lambda_l, sol.alpha
    if phase == "solid":
        return (lambda x, t: theta_solid(sol, x, t, extend=True)), sol.params.lambda_s, sol.alpha
    raise ValueError(f"phase must be 'liquid' or 'solid', got {phase!r}")


def _length_scale(sol, t):
    if isinstance(sol, ConductionSolution):
        return sol.lambda_s * t ** (0.5 * sol.alpha)
    return max(front_position(sol, t), sol.params.lambda_s * t**sol.params.nu * 1e-2)


def _diffusion_term(theta, lam, x, t, h):
    """lambda^2 Theta_xx by Richardson-extrapolated central differences."""
    h = min(h, 0.5 * x)
    f0 = theta(x, t)

    def d2(step):
        return (theta(x + step, t) - 2.0 * f0 + theta(x - step, t)) / step**2

    return lam**2 * (4.0 * d2(0.5 * h) - d2(h)) / 3.0


def _steps(t, h_time):
    n = int(round(t / h_time))
    if n < 1 or abs(n * h_time - t) > 1e-9 * t:
        raise GridError(f"t = {t!r} is not an integer multiple of h_time = {h_time!r}")
    return n


def pde_residual(sol, phase: str, x: float, t: float, h_time: float,
                 h_space: Optional[float] = None) -> float:
    """``|D^alpha_t Theta - lambda^2 Theta_xx|`` at (x, t).

    The time derivative is the L1 scheme with step ``h_time`` applied to the
    phase formula evaluated over the whole interval [0, t] (extend mode).
    ``h_space`` defaults to 1e-2 times the front position (or the diffusion
    length for a conduction solution).
    """
    theta, lam, alpha = _phase_fn(sol, phase)
    n = _steps(t, h_time)
    if h_space is None:
        h_space = SPACE_STEP_FRACTION * _length_scale(sol, t)
    samples = [theta(x, k * h_time) for k in range(n + 1)]
    return abs(caputo_l1(samples, alpha, h_time) - _diffusion_term(theta, lam, x, t, h_space))


def time_refinement(sol, phase: str, x: float, t: float, levels=DEFAULT_LEVELS,
                    h_space: Optional[float] = None):
    """PDE residuals for ``h_time = 2^-k t``, k in ``levels``.

    Samples the finest grid once and reuses them for the coarser levels.
    Returns a list of ``(h_time, residual)`` pairs ordered from coarse to fine.
    """
    theta, lam, alpha = _phase_fn(sol, phase)
    levels = sorted(levels)
    n_max = 2 ** levels[-1]
    h_min = t / n_max
    samples = np.array([theta(x, k * h_min) for k in range(n_max + 1)])
    if h_space is None:
        h_space = SPACE_STEP_FRACTION * _length_scale(sol, t)
    diffusion = _diffusion_term(theta, lam, x, t, h_space)
    out = []
    for k in levels:
        stride = 2 ** (levels[-1] - k)
        h = t / 2**k
        out.append((h, abs(caputo_l1(samples[::stride], alpha, h) - diffusion)))
    return out


def observed_order(pairs) -> float:
    """Least-squares slope of log(residual) against log(h)."""
    h = np.array([p[0] for p in pairs])
    r = np.array([p[1] for p in pairs])
    if np.any(r <= 0.0):
        return math.inf
    slope, _ = np.polyfit(np.log(h), np.log(r), 1)
    return float(slope)


def _stefan_terms(sol, t):
    p = sol.problem
    r = front_position(sol, t)
    solid = p.solid.k * temperature_gradient(sol, "solid", r, t, extend=True)
    liquid = p.liquid.k * temperature_gradient(sol, "liquid", r, t, extend=True)
    latent = p.density * p.latent_heat * sol.mu * sol.params.lambda_s * sol.params.c_alpha * t ** (-sol.params.nu)
    return solid, liquid, latent


def stefan_residual(sol: SimilaritySolution, t: float) -> float:
    """``|k_s Theta_s,x(r,t) - k_l Theta_l,x(r,t) - rho l D^alpha r(t)|``.

    Uses ``D^alpha t^(alpha/2) = c_alpha t^(-alpha/2)`` for the front.
    """
    solid, liquid, latent = _stefan_terms(sol, t)
    return abs(solid - liquid - latent)


def stefan_scale(sol: SimilaritySolution, t: float) -> float:
    """Sum of magnitudes of the three Stefan-condition terms."""
    solid, liquid, latent = _stefan_terms(sol, t)
    return abs(solid) + abs(liquid) + abs(latent)


def _far_x(sol, t_max):
    return (2.0 * sol.mu + 40.0) * sol.params.lambda_s * t_max**sol.params.nu


def boundary_residuals(sol: SimilaritySolution, t_samples, x_far: Optional[float] = None) -> dict:
    """Maximum boundary-condition violations over ``t_samples``.

    Keys: ``flux_at_0`` (relative to q0, flux kinds) or ``face_temperature``
    (kelvin, temperature kind), ``interface_liquid``, ``interface_solid`` and
    ``far_field`` (kelvin).
    """
    t_samples = [float(t) for t in t_samples]
    if not t_samples or min(t_samples) <= 0.0:
        raise ValueError("t_samples must be positive")
    if x_far is None:
        x_far = _far_x(sol, max(t_samples))
    p = sol.problem
    out = {"interface_liquid": 0.0, "interface_solid": 0.0, "far_field": 0.0}
    face_key = "face_temperature" if sol.kind is SolutionKind.TEMPERATURE else "flux_at_0"
    out[face_key] = 0.0
    for t in t_samples:
        if face_key == "flux_at_0":
            flux = p.liquid.k * temperature_gradient(sol, "liquid", 0.0, t) * t**sol.params.nu
            face = abs(flux + p.q0) / p.q0
        else:
            face = abs(theta_liquid(sol, 0.0, t) - p.T_0)
        r = front_position(sol, t)
        out[face_key] = max(out[face_key], face)
        out["interface_liquid"] = max(out["interface_liquid"], abs(theta_liquid(sol, r, t) - p.T_m))
        out["interface_solid"] = max(out["interface_solid"], abs(theta_solid(sol, r, t) - p.T_m))
        out["far_field"] = max(out["far_field"], abs(theta_solid(sol, max(x_far, r), t) - p.T_i))
    return out


@dataclass(frozen=True)
class AlphaLimitRow:
    alpha: float
    mu: Optional[float]
    gap: Optional[float]
    status: str


def alpha_limit_scan(p: FluxProblem, alphas, tol: float = 1e-12):
    """Front coefficients for a ladder of orders against the classical value.

    Returns ``(rows, mu_classical)``. Rows whose flux is subcritical at that
    order carry ``status="subcritical"`` instead of aborting the scan.
    """
    mu1 = solve_classical_flux(dataclasses.replace(p, alpha=1.0), tol).mu
    rows = []
    for a in alphas:
        try:
            mu = solve_flux(dataclasses.replace(p, alpha=float(a)), tol).mu
        except SubcriticalFluxError:
            rows.append(AlphaLimitRow(float(a), None, None, "subcritical"))
            continue
        except NoBracketError:
            rows.append(AlphaLimitRow(float(a), None, None, "no-bracket"))
            continue
        rows.append(AlphaLimitRow(float(a), mu, abs(mu - mu1), "ok"))
    return rows, mu1


def g_alpha_as_printed(x: float, p: FluxProblem) -> float:
    """The root function with the extra lambda_l factor on its first term, as typeset.

    Kept only to document the correction in :func:`similarity.g_alpha`.
    """
    dp = derive_params(p)
    lead, solid = _g_terms(x, p, dp, lambda_l_factor=dp.lambda_l)
    return lead - solid


def errata_pin(p: FluxProblem, t: float = 1.0) -> dict:
    """Stefan residuals of the corrected and the as-printed root function.

    Returns a mapping with

    * ``corrected``: Stefan residual of the solution at the corrected root;
    * ``printed_at_corrected_root``: the Stefan residual implied by the
      printed root function at that root, ``|G_printed(mu) - c mu| rho l lambda_s t^-nu``;
    * ``printed_root`` and ``printed``: the root of the printed equation and
      the Stefan residual of the solution assembled there (``None`` when the
      printed equation has no root);
    * ``scale``: the Stefan-term magnitude at the corrected root.
    """
    sol = solve_flux(p)
    dp = sol.params
    factor = p.density * p.latent_heat * dp.lambda_s * t ** (-dp.nu)
    out = {
        "corrected": stefan_residual(sol, t),
        "printed_at_corrected_root": abs(g_alpha_as_printed(sol.mu, p) - dp.c_alpha * sol.mu) * factor,
        "scale": stefan_scale(sol, t),
        "printed_root": None,
        "printed": None,
    }
    terms = lambda x: _g_terms(x, p, dp, lambda_l_factor=dp.lambda_l)  # noqa: E731
    try:
        mu_v, _ = _first_root(_guarded(terms, dp.c_alpha))
    except NoBracketError:
        return out
    out["printed_root"] = mu_v
    out["printed"] = stefan_residual(assemble_flux(p, mu_v), t)
    return out


@dataclass
class PdeSample:
    phase: str
    x: float
    t: float
    value: float
    h: float


@dataclass
class ResidualReport:
    """Structured residual record for one solution.

    ``convergence_rate`` is the smallest observed time-refinement order over
    the sampled points; ``h_pairs`` lists, per point, consecutive step pairs
    with the local order between them.
    """

    pde_residuals: list
    boundary_residuals: dict
    stefan_residuals: list
    max_abs: float
    convergence_rate: float
    h_pairs: list = field(default_factory=list)
    orders: list = field(default_factory=list)
    stefan_relative: float = 0.0
    gates: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(g["passed"] for g in self.gates.values())

    def to_dict(self) -> dict:
        return dataclasses.asdict(self) | {"passed": self.passed}


#: similarity-variable positions of the PDE sample points
SAMPLE_ETAS = (1.5, 2.0, 2.5, 3.0, 3.5)


def sample_points(sol, t: float, phase: str, etas=SAMPLE_ETAS):
    """Sample abscissae ``x = eta * lambda_phase * t^nu`` for the PDE residual.

    On a uniform grid the L1 scheme reaches its asymptotic order only once
    the step resolves the initial layer of ``tau -> Theta(x, tau)``, which
    sits at ``tau ~ t * eta^(-1/nu)``. At ``eta = O(1)`` that happens inside
    ``h = 2^-4 t .. 2^-8 t``; near the face (eta << 1) the same steps only
    show the first-order behaviour of an unresolved jump.
    """
    if isinstance(sol, ConductionSolution):
        lam, nu = sol.lambda_s, 0.5 * sol.alpha
    else:
        lam = sol.params.lambda_l if phase == "liquid" else sol.params.lambda_s
        nu = sol.params.nu
    return [eta * lam * t**nu for eta in etas]


def build_report(sol: SimilaritySolution, t: float = 1.0, t_samples=(0.1, 1.0, 10.0),
                 levels=DEFAULT_LEVELS, order_slack: float = 0.3,
                 boundary_tol: float = 1e-9, stefan_tol: float = 1e-10) -> ResidualReport:
    """Run every residual check on ``sol`` and evaluate the gates."""
    phases = ["liquid"] if sol.problem.one_phase else ["liquid", "solid"]
    pde, pairs, orders = [], [], []
    for phase in phases:
        for x in sample_points(sol, t, phase):
            ref = time_refinement(sol, phase, x, t, levels)
            h_fine, r_fine = ref[-1]
            pde.append(PdeSample(phase, x, t, r_fine, h_fine))
            order = observed_order(ref)
            orders.append({"phase": phase, "x": x, "order": order})
            for (h1, r1), (h2, r2) in zip(ref, ref[1:]):
                local = math.log(r1 / r2) / math.log(h1 / h2) if r1 > 0 and r2 > 0 else math.inf
                pairs.append({"phase": phase, "x": x, "h_coarse": h1, "h_fine": h2, "order": local})
    rate = min(o["order"] for o in orders)
    boundary = boundary_residuals(sol, t_samples)
    stefan = [(float(ts), stefan_residual(sol, ts)) for ts in t_samples]
    stefan_rel = max(res / stefan_scale(sol, ts) for ts, res in stefan)
    max_abs = max([s.value for s in pde] + list(boundary.values()) + [v for _, v in stefan])
    target = (2.0 - sol.alpha) - order_slack
    gates = {
        "pde_order": {"value": rate, "threshold": target, "passed": rate >= target},
        "boundary": {"value": max(boundary.values()), "threshold": boundary_tol,
                     "passed": max(boundary.values()) < boundary_tol},
        "stefan": {"value": stefan_rel, "threshold": stefan_tol, "passed": stefan_rel < stefan_tol},
    }
    return ResidualReport(pde, boundary, stefan, max_abs, rate, pairs, orders, stefan_rel, gates)
