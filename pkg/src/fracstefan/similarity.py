"""Similarity solutions of the two-phase fractional Stefan problem.

The flux problem prescribes ``k_l dTheta_l/dx (0, t) = -q0 t^(-alpha/2)``,
the temperature problem prescribes ``Theta_l(0, t) = T_0``. In both cases
the front moves as ``r(t) = mu lambda_s t^(alpha/2)`` and the temperatures
are affine in ``W(-x / (lambda t^(alpha/2)); -alpha/2; 1)``:

    Theta_l = A + B [1 - W(-x/(lambda_l t^nu))]
    Theta_s = C + D [1 - W(-x/(lambda_s t^nu))],   nu = alpha/2.

The coefficient ``mu`` is the first positive root of a scalar equation
(``G_alpha(x) = c_alpha x`` or ``F_alpha(x) = c_alpha x``), bracketed on a
geometric grid and refined by Brent's method.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from scipy import optimize, special

from .errors import (
    ConvergenceError,
    DomainError,
    InvalidProblemError,
    NoBracketError,
    SubcriticalFluxError,
    UnderflowGuardError,
)
from .special_functions import (
    DEFAULT_CONFIG,
    gamma,
    log_wright_negative,
    mainardi,
    mainardi_increment,
    wright,
    wright_complement,
)

__all__ = [
    "Material",
    "FluxProblem",
    "TemperatureProblem",
    "DerivedParams",
    "SolutionKind",
    "Coefficients",
    "SimilaritySolution",
    "ConductionSolution",
    "derive_params",
    "critical_flux",
    "conduction_solution",
    "conduction_temperature",
    "f1_alpha",
    "f2_alpha",
    "g_alpha",
    "f_alpha",
    "solve_flux",
    "solve_temperature",
    "solve_classical_flux",
    "assemble_flux",
    "front_position",
    "theta_liquid",
    "theta_solid",
    "temperature_gradient",
    "face_temperature",
    "face_flux_coefficient",
    "induced_temperature_problem",
    "induced_flux_problem",
    "make_one_phase",
]

DEFAULT_TOL = 1e-12
UNDERFLOW_FLOOR = 1e-300
SCAN_START = 1e-6
_MAX_DOUBLINGS = 80
_MAX_HALVINGS = 200
_MULTIPLICITY_DOUBLINGS = 8
_SQRT_PI = math.sqrt(math.pi)
_LOG_SQRT_PI = math.log(_SQRT_PI)
_LOG_MAX = 709.0
# below this argument the root function is assembled from series increments
_SMALL_ARG = 0.1


def _positive(name, value):
    if not (math.isfinite(value) and value > 0.0):
        raise InvalidProblemError(f"{name} must be a positive finite number, got {value!r}")


def _finite(name, value):
    if not math.isfinite(value):
        raise InvalidProblemError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class Material:
    """Thermal conductivity ``k`` (W/(m K)) and specific heat ``c`` (J/(kg K))."""

    k: float
    c: float

    def __post_init__(self):
        _positive("conductivity k", self.k)
        _positive("specific heat c", self.c)


def _check_thermal(p):
    _positive("density", p.density)
    _positive("latent_heat", p.latent_heat)
    _finite("T_i", p.T_i)
    _finite("T_m", p.T_m)
    if not (0.0 < p.alpha <= 1.0):
        raise InvalidProblemError(f"alpha must lie in (0, 1], got {p.alpha!r}")
    if p.one_phase:
        if p.T_i != p.T_m or p.solid != p.liquid:
            raise InvalidProblemError(
                "one-phase problems need T_i == T_m and identical materials; use make_one_phase"
            )
    elif not p.T_i < p.T_m:
        raise InvalidProblemError(
            f"two-phase problems need T_i < T_m (got T_i={p.T_i!r}, T_m={p.T_m!r}); "
            "T_i == T_m is only allowed through make_one_phase"
        )


@dataclass(frozen=True)
class FluxProblem:
    """Two-phase melting problem driven by the face flux ``q0 t^(-alpha/2)``."""

    solid: Material
    liquid: Material
    density: float
    latent_heat: float
    T_i: float
    T_m: float
    q0: float
    alpha: float
    one_phase: bool = field(default=False)

    def __post_init__(self):
        _check_thermal(self)
        _positive("q0", self.q0)


@dataclass(frozen=True)
class TemperatureProblem:
    """Two-phase melting problem driven by the face temperature ``T_0 > T_m``."""

    solid: Material
    liquid: Material
    density: float
    latent_heat: float
    T_i: float
    T_m: float
    T_0: float
    alpha: float
    one_phase: bool = field(default=False)

    def __post_init__(self):
        _check_thermal(self)
        _finite("T_0", self.T_0)
        if not self.T_0 > self.T_m:
            raise InvalidProblemError(f"T_0 must exceed T_m (got T_0={self.T_0!r}, T_m={self.T_m!r})")


@dataclass(frozen=True)
class DerivedParams:
    """Diffusivity scales and the Stefan slope ``c_alpha = Gamma(1+nu)/Gamma(1-nu)``."""

    lambda_s: float
    lambda_l: float
    lam: float
    c_alpha: float
    nu: float


class SolutionKind(str, enum.Enum):
    FLUX = "flux"
    TEMPERATURE = "temperature"
    CLASSICAL_FLUX = "classical-flux"


@dataclass(frozen=True)
class Coefficients:
    """Constants of ``Theta_l = A + B(1-W)`` and ``Theta_s = C + D(1-W)``."""

    A: float
    B: float
    C: float
    D: float


@dataclass(frozen=True)
class SimilaritySolution:
    """Solved front coefficient plus everything needed to evaluate the fields.

    Attributes
    ----------
    kind : SolutionKind
    mu : float
        Front coefficient (``mu_alpha`` or ``xi_alpha``).
    coeffs : Coefficients
    params : DerivedParams
    problem : FluxProblem or TemperatureProblem
    residual : float
        ``|H(mu)|`` of the root equation that produced ``mu``.
    relative_residual : float
        ``residual`` divided by the sum of magnitudes of the terms of ``H``.
    warnings : tuple of str
        Non-fatal findings, e.g. a second sign change of ``H``.
    """

    kind: SolutionKind
    mu: float
    coeffs: Coefficients
    params: DerivedParams
    problem: object
    residual: float = 0.0
    relative_residual: float = 0.0
    warnings: tuple = ()
    # W(-mu; -nu; 1), or erfc(mu/2) for the classical kind, and its logarithm
    w_front: float = 1.0
    log_w_front: float = 0.0

    @property
    def alpha(self) -> float:
        return self.problem.alpha


@dataclass(frozen=True)
class ConductionSolution:
    """No-phase-change solution ``Theta = a + b [1 - W(-x/(lambda_s t^nu))]``."""

    a: float
    b: float
    lambda_s: float
    alpha: float
    problem: FluxProblem


def derive_params(p) -> DerivedParams:
    """Diffusivity coefficients and the Stefan slope for a problem."""
    lambda_s = math.sqrt(p.solid.k / (p.density * p.solid.c))
    lambda_l = math.sqrt(p.liquid.k / (p.density * p.liquid.c))
    nu = 0.5 * p.alpha
    c_alpha = gamma(1.0 + nu) / gamma(1.0 - nu)
    return DerivedParams(lambda_s, lambda_l, lambda_s / lambda_l, c_alpha, nu)


def critical_flux(p) -> float:
    """Flux coefficient above which the face melts instantly.

    ``q_crit = k_s (T_m - T_i) / (lambda_s Gamma(1 - alpha/2))``; zero for
    one-phase problems.
    """
    dp = derive_params(p)
    return p.solid.k * (p.T_m - p.T_i) / (dp.lambda_s * gamma(1.0 - dp.nu))


def conduction_solution(p: FluxProblem) -> ConductionSolution:
    """Solid heated by the face flux without reaching T_m (needs q0 <= q_crit)."""
    q_crit = critical_flux(p)
    if p.q0 > q_crit:
        raise InvalidProblemError(
            f"q0 = {p.q0!r} exceeds q_crit = {q_crit!r}; the face melts and the conduction "
            "solution does not apply"
        )
    dp = derive_params(p)
    b = -p.q0 * dp.lambda_s * gamma(1.0 - dp.nu) / p.solid.k
    return ConductionSolution(a=p.T_i - b, b=b, lambda_s=dp.lambda_s, alpha=p.alpha, problem=p)


def _check_time(t, extend):
    if not math.isfinite(t) or t < 0.0 or (t == 0.0 and not extend):
        raise DomainError(f"time must be positive, got {t!r}")


def conduction_temperature(cs: ConductionSolution, x: float, t: float, extend: bool = False) -> float:
    """Temperature of the conduction solution; ``extend`` admits t = 0 for sampling."""
    if not (x > 0.0):
        raise DomainError(f"conduction temperature needs x > 0, got {x!r}")
    _check_time(t, extend)
    if t == 0.0:
        return cs.problem.T_i
    nu = 0.5 * cs.alpha
    eta = x / (cs.lambda_s * t**nu)
    return cs.problem.T_i + (cs.a - cs.problem.T_i) * wright(-eta, -nu, 1.0)


def f2_alpha(x: float, alpha: float, cfg=DEFAULT_CONFIG) -> float:
    """``M_nu(x) / W(-x; -nu; 1)`` with ``nu = alpha/2``.

    Once the denominator drops below 1e-300 the quotient is formed from
    logarithms, so it stays finite where both factors underflow.

    Raises
    ------
    UnderflowGuardError
        When the quotient itself overflows.
    """
    if not (x > 0.0):
        raise DomainError(f"F2 needs x > 0, got {x!r}")
    nu = 0.5 * alpha
    den = wright(-x, -nu, 1.0, cfg)
    if den >= UNDERFLOW_FLOOR:
        return mainardi(x, nu, cfg) / den
    log_m, s_m = log_wright_negative(x, nu, 1.0 - nu, cfg)
    log_w, s_w = log_wright_negative(x, nu, 1.0, cfg)
    if s_w <= 0 or log_m - log_w > _LOG_MAX:
        raise UnderflowGuardError(f"F2({x!r}) overflows: W(-{x!r}; -{nu!r}; 1) = {den!r}")
    return s_m * math.exp(log_m - log_w)


def f1_alpha(x: float, alpha: float, cfg=DEFAULT_CONFIG) -> float:
    """``M_nu(x) / (1 - W(-x; -nu; 1))``, singular at x = 0."""
    if not (x > 0.0):
        raise DomainError(f"F1 is singular at x <= 0, got {x!r}")
    nu = 0.5 * alpha
    return mainardi(x, nu, cfg) / wright_complement(x, nu, cfg)


def _g_terms(x, p, dp, lambda_l_factor=1.0):
    """The two terms of G_alpha, returned separately for residual scaling."""
    lead = (
        lambda_l_factor * p.q0 * gamma(1.0 - dp.nu) / (p.density * p.latent_heat * dp.lambda_s)
        * mainardi(dp.lam * x, dp.nu)
    )
    if p.one_phase:
        return lead, 0.0
    stefan = p.solid.k * (p.T_m - p.T_i) / (p.density * p.latent_heat * dp.lambda_s**2)
    return lead, stefan * f2_alpha(x, p.alpha)


def _g_accurate(x, p, dp):
    """G_alpha(x) arranged so that it keeps relative accuracy as x -> 0.

    ``G(0) = (q0 - q_crit)/(rho l lambda_s)``, so near the critical flux the
    two terms of G nearly cancel. Here the constant parts are combined
    analytically and only the increments ``M(lambda x) - M(0)`` and
    ``F2(x) - F2(0)`` are evaluated, each from its series tail.
    """
    if max(1.0, dp.lam) * x > _SMALL_ARG:
        lead, solid = _g_terms(x, p, dp)
        return lead - solid
    g1 = gamma(1.0 - dp.nu)
    rho_l_lam = p.density * p.latent_heat * dp.lambda_s
    g = (p.q0 - critical_flux(p)) / rho_l_lam
    g += p.q0 * g1 / rho_l_lam * mainardi_increment(dp.lam * x, dp.nu)
    if p.one_phase:
        return g
    stefan = p.solid.k * (p.T_m - p.T_i) / (p.density * p.latent_heat * dp.lambda_s**2)
    comp = wright_complement(x, dp.nu)
    # F2(x) - 1/Gamma(1-nu) = (M(x) - M(0) + (1 - W(x)) / Gamma(1-nu)) / W(x)
    d_f2 = (mainardi_increment(x, dp.nu) + comp / g1) / (1.0 - comp)
    return g - stefan * d_f2


def g_alpha(x: float, p: FluxProblem) -> float:
    """Left side of the flux-problem root equation ``G_alpha(x) = c_alpha x``.

    ``G(x) = q0 Gamma(1-nu) M_nu(lambda x) / (rho l lambda_s)
    - k_s (T_m - T_i) F2(x) / (rho l lambda_s^2)``.
    """
    if not (x > 0.0):
        raise DomainError(f"G_alpha needs x > 0, got {x!r}")
    lead, solid = _g_terms(x, p, derive_params(p))
    return lead - solid


def _f_terms(x, p, dp):
    lead = (
        p.liquid.k * (p.T_0 - p.T_m) / (p.density * p.latent_heat * dp.lambda_s * dp.lambda_l)
        * f1_alpha(dp.lam * x, p.alpha)
    )
    if p.one_phase:
        return lead, 0.0
    stefan = p.solid.k * (p.T_m - p.T_i) / (p.density * p.latent_heat * dp.lambda_s**2)
    return lead, stefan * f2_alpha(x, p.alpha)


def f_alpha(x: float, p: TemperatureProblem) -> float:
    """Left side of the temperature-problem root equation ``F_alpha(x) = c_alpha x``."""
    if not (x > 0.0):
        raise DomainError(f"F_alpha needs x > 0, got {x!r}")
    lead, solid = _f_terms(x, p, derive_params(p))
    return lead - solid


def _guarded(terms, slope):
    """Root function x -> lead - solid - slope x, with F2 divergence mapped to -inf."""

    def h(x):
        try:
            lead, solid = terms(x)
        except UnderflowGuardError:
            return -math.inf
        return lead - solid - slope * x

    return h


def _first_root(h, x0=SCAN_START):
    """First sign change of ``h`` (positive near 0, negative far out), then Brent.

    Returns ``(root, warnings)``.
    """
    lo, h_lo = x0, h(x0)
    if not h_lo > 0.0:
        hi, hi_val = lo, h_lo
        for _ in range(_MAX_HALVINGS):
            lo *= 0.5
            h_lo = h(lo)
            if h_lo > 0.0:
                break
            hi, hi_val = lo, h_lo
        else:
            raise NoBracketError(f"root function is not positive anywhere on (0, {x0!r}]")
    else:
        for _ in range(_MAX_DOUBLINGS):
            hi = 2.0 * lo
            hi_val = h(hi)
            if hi_val <= 0.0:
                break
            lo, h_lo = hi, hi_val
        else:
            raise NoBracketError(
                f"no sign change of the root function on the scan grid up to {lo!r}"
            )
    for _ in range(_MAX_HALVINGS):
        if math.isfinite(hi_val):
            break
        mid = 0.5 * (lo + hi)
        m_val = h(mid)
        if m_val > 0.0:
            lo, h_lo = mid, m_val
        else:
            hi, hi_val = mid, m_val
    if hi_val == 0.0:
        root = hi
    else:
        root = optimize.brentq(h, lo, hi, xtol=1e-300, rtol=4.0 * 2.0**-52, maxiter=500)

    notes = []
    x = hi
    for _ in range(_MULTIPLICITY_DOUBLINGS):
        x *= 2.0
        if h(x) > 0.0:
            notes.append(
                f"root function changes sign again below x = {x!r}; the first root is returned "
                "(uniqueness rests on the monotonicity conjecture for F2)"
            )
            break
    return root, tuple(notes)


def _check_residual(lead, solid, slope, mu, tol):
    res = abs(lead - solid - slope * mu)
    scale = abs(lead) + abs(solid) + slope * mu
    if res > tol * scale:
        raise ConvergenceError(
            f"root residual {res!r} exceeds tol times the term magnitudes ({scale!r}) at mu = {mu!r}"
        )
    return res, res / scale


def _liquid_complement(kind, eta, nu):
    if kind is SolutionKind.CLASSICAL_FLUX:
        return math.erf(0.5 * eta)
    return wright_complement(eta, nu)


def _w_front(kind, mu, nu):
    if kind is SolutionKind.CLASSICAL_FLUX:
        w = math.erfc(0.5 * mu)
    else:
        w = wright(-mu, -nu, 1.0)
    return w


def _log_w(kind, eta, nu):
    """log of the solid profile function (W(-eta; -nu; 1) or erfc(eta/2))."""
    if kind is SolutionKind.CLASSICAL_FLUX:
        y = 0.5 * eta
        return -y * y + math.log(special.erfcx(y))
    log_w, _ = log_wright_negative(eta, nu, 1.0)
    return log_w


def _log_m(kind, eta, nu):
    if kind is SolutionKind.CLASSICAL_FLUX:
        return -0.25 * eta * eta - _LOG_SQRT_PI
    log_m, _ = log_wright_negative(eta, nu, 1.0 - nu)
    return log_m


def _exp_capped(v):
    return math.inf if v > _LOG_MAX else math.exp(v)


def _solid_coeffs(p, w_front, log_w_front):
    """(C, D); D overflows to -inf when W(-mu) underflows, the fields then use logarithms."""
    if p.one_phase:
        return p.T_m, 0.0
    if w_front >= UNDERFLOW_FLOOR:
        d = -(p.T_m - p.T_i) / w_front
    else:
        d = -(p.T_m - p.T_i) * _exp_capped(-log_w_front)
    return p.T_i - d, d


def assemble_flux(p: FluxProblem, mu: float, kind=SolutionKind.FLUX, residual=0.0,
                  relative_residual=0.0, warnings=()) -> SimilaritySolution:
    """Build the flux-kind solution for a given front coefficient ``mu``.

    Used by the solvers and by the verifier, which assembles solutions at
    roots of alternative root equations.
    """
    dp = derive_params(p)
    kind = SolutionKind(kind)
    g1 = _SQRT_PI if kind is SolutionKind.CLASSICAL_FLUX else gamma(1.0 - dp.nu)
    b0 = p.q0 * dp.lambda_l * g1 / p.liquid.k
    a = p.T_m + b0 * _liquid_complement(kind, dp.lam * mu, dp.nu)
    w_front = _w_front(kind, mu, dp.nu)
    log_wf = _log_w(kind, mu, dp.nu) if w_front < UNDERFLOW_FLOOR else math.log(w_front)
    c, d = _solid_coeffs(p, w_front, log_wf)
    return SimilaritySolution(kind, mu, Coefficients(a, -b0, c, d), dp, p,
                              residual, relative_residual, tuple(warnings), w_front, log_wf)


def _require_supercritical(p):
    q_crit = critical_flux(p)
    if not p.q0 > q_crit:
        raise SubcriticalFluxError(p.q0, q_crit)


def solve_flux(p: FluxProblem, tol: float = DEFAULT_TOL) -> SimilaritySolution:
    """Solve ``G_alpha(mu) = c_alpha mu`` and assemble the flux-kind solution.

    Raises
    ------
    SubcriticalFluxError
        If ``q0 <= critical_flux(p)``.
    NoBracketError
        If the scan grid shows no sign change.
    """
    _require_supercritical(p)
    dp = derive_params(p)
    terms = lambda x: _g_terms(x, p, dp)  # noqa: E731
    mu, notes = _first_root(_guarded(lambda x: (_g_accurate(x, p, dp), 0.0), dp.c_alpha))
    res, rel = _check_residual(*terms(mu), dp.c_alpha, mu, tol)
    return assemble_flux(p, mu, SolutionKind.FLUX, res, rel, notes)


def solve_temperature(p: TemperatureProblem, tol: float = DEFAULT_TOL) -> SimilaritySolution:
    """Solve ``F_alpha(xi) = c_alpha xi`` and assemble the temperature-kind solution."""
    dp = derive_params(p)
    terms = lambda x: _f_terms(x, p, dp)  # noqa: E731
    xi, notes = _first_root(_guarded(terms, dp.c_alpha))
    res, rel = _check_residual(*terms(xi), dp.c_alpha, xi, tol)
    b = -(p.T_0 - p.T_m) / wright_complement(dp.lam * xi, dp.nu)
    w_front = wright(-xi, -dp.nu, 1.0)
    log_wf = _log_w(SolutionKind.TEMPERATURE, xi, dp.nu) if w_front < UNDERFLOW_FLOOR else math.log(w_front)
    c, d = _solid_coeffs(p, w_front, log_wf)
    return SimilaritySolution(SolutionKind.TEMPERATURE, xi, Coefficients(p.T_0, b, c, d), dp, p,
                              res, rel, notes, w_front, log_wf)


def _classical_terms(y, p, dp):
    lead = p.q0 / (p.density * p.latent_heat * dp.lambda_s) * math.exp(-((dp.lam * y) ** 2))
    if p.one_phase:
        return lead, 0.0
    stefan = p.solid.k * (p.T_m - p.T_i) / (p.density * p.latent_heat * dp.lambda_s**2 * _SQRT_PI)
    # exp(-y^2) / erfc(y) = 1 / erfcx(y), finite where erfc underflows
    return lead, stefan / special.erfcx(y)


def solve_classical_flux(p: FluxProblem, tol: float = DEFAULT_TOL) -> SimilaritySolution:
    """Classical (alpha = 1) Neumann solution from erf, erfc and exp only.

    Solves ``q0 e^{-lambda^2 y^2}/(rho l lambda_s)
    - k_s (T_m - T_i) e^{-y^2} / (rho l lambda_s^2 sqrt(pi) erfc y) = y``
    and returns ``mu = 2 y``.
    """
    if p.alpha != 1.0:
        raise InvalidProblemError(f"the classical solver needs alpha = 1, got {p.alpha!r}")
    _require_supercritical(p)
    dp = derive_params(p)
    terms = lambda y: _classical_terms(y, p, dp)  # noqa: E731
    y, notes = _first_root(_guarded(terms, 1.0))
    res, rel = _check_residual(*terms(y), 1.0, y, tol)
    return assemble_flux(p, 2.0 * y, SolutionKind.CLASSICAL_FLUX, res, rel, notes)


def front_position(sol: SimilaritySolution, t: float) -> float:
    """``r(t) = mu lambda_s t^(alpha/2)``."""
    if not (math.isfinite(t) and t >= 0.0):
        raise DomainError(f"time must be non-negative, got {t!r}")
    return sol.mu * sol.params.lambda_s * t**sol.params.nu


def _region_check(sol, x, t, liquid, extend):
    _check_time(t, extend)
    if not (math.isfinite(x) and x >= 0.0):
        raise DomainError(f"x must be finite and non-negative, got {x!r}")
    if extend:
        return
    r = front_position(sol, t)
    if liquid and x > r:
        raise DomainError(f"x = {x!r} lies in the solid region (front at {r!r}); pass extend=True")
    if not liquid and x < r:
        raise DomainError(f"x = {x!r} lies in the liquid region (front at {r!r}); pass extend=True")


def theta_liquid(sol: SimilaritySolution, x: float, t: float, extend: bool = False) -> float:
    """Liquid temperature on ``0 <= x <= r(t)``.

    ``extend=True`` evaluates the same formula anywhere in x >= 0, t >= 0,
    with the t -> 0+ limit at t = 0.
    """
    _region_check(sol, x, t, True, extend)
    cf = sol.coeffs
    if x == 0.0:
        return cf.A
    if t == 0.0:
        return cf.A + cf.B
    eta = x / (sol.params.lambda_l * t**sol.params.nu)
    return cf.A + cf.B * _liquid_complement(sol.kind, eta, sol.params.nu)


def theta_solid(sol: SimilaritySolution, x: float, t: float, extend: bool = False) -> float:
    """Solid temperature on ``x >= r(t)`` (``extend`` as for :func:`theta_liquid`)."""
    _region_check(sol, x, t, False, extend)
    p = sol.problem
    if p.one_phase:
        return p.T_m
    if x == 0.0:
        return sol.coeffs.C
    if t == 0.0:
        return p.T_i
    eta = x / (sol.params.lambda_s * t**sol.params.nu)
    if sol.w_front >= UNDERFLOW_FLOOR:
        ratio = _w_front(sol.kind, eta, sol.params.nu) / sol.w_front
    else:
        ratio = _exp_capped(_log_w(sol.kind, eta, sol.params.nu) - sol.log_w_front)
    return p.T_i + (p.T_m - p.T_i) * ratio


def _mainardi_kind(kind, eta, nu):
    if kind is SolutionKind.CLASSICAL_FLUX:
        return math.exp(-0.25 * eta * eta) / _SQRT_PI
    return mainardi(eta, nu)


def temperature_gradient(sol: SimilaritySolution, phase: str, x: float, t: float,
                         extend: bool = False) -> float:
    """Analytic x-derivative of the liquid or solid temperature.

    ``dTheta/dx = coeff * M_nu(eta) / (lambda t^nu)`` with ``coeff = B``
    (liquid) or ``D`` (solid).
    """
    if phase not in ("liquid", "solid"):
        raise ValueError(f"phase must be 'liquid' or 'solid', got {phase!r}")
    liquid = phase == "liquid"
    _region_check(sol, x, t, liquid, extend)
    if t == 0.0:
        raise DomainError("the gradient is not defined at t = 0")
    lam = sol.params.lambda_l if liquid else sol.params.lambda_s
    scale = lam * t**sol.params.nu
    eta = x / scale
    if liquid or sol.w_front >= UNDERFLOW_FLOOR:
        coeff = sol.coeffs.B if liquid else sol.coeffs.D
        return coeff * _mainardi_kind(sol.kind, eta, sol.params.nu) / scale
    if sol.problem.one_phase:
        return 0.0
    ratio = _exp_capped(_log_m(sol.kind, eta, sol.params.nu) - sol.log_w_front)
    return -(sol.problem.T_m - sol.problem.T_i) * ratio / scale


def face_temperature(sol: SimilaritySolution) -> float:
    """Face temperature of a flux-kind solution, constant in time."""
    if sol.kind is SolutionKind.TEMPERATURE:
        raise ValueError("face_temperature needs a flux-kind solution")
    return sol.coeffs.A


def face_flux_coefficient(sol: SimilaritySolution) -> float:
    """Flux coefficient ``q0`` reproducing a temperature-kind solution.

    ``q0 = (T_0 - T_m) k_l / ((1 - W(-lambda xi)) lambda_l Gamma(1 - nu))``.
    """
    if sol.kind is not SolutionKind.TEMPERATURE:
        raise ValueError("face_flux_coefficient needs a temperature-kind solution")
    p, dp = sol.problem, sol.params
    comp = wright_complement(dp.lam * sol.mu, dp.nu)
    return (p.T_0 - p.T_m) * p.liquid.k / (comp * dp.lambda_l * gamma(1.0 - dp.nu))


def induced_temperature_problem(sol: SimilaritySolution) -> TemperatureProblem:
    """Temperature problem whose face temperature is that of a flux-kind solution."""
    p = sol.problem
    t0 = face_temperature(sol)
    if not t0 > p.T_m:
        raise InvalidProblemError(
            f"face temperature {t0!r} rounds to T_m = {p.T_m!r}: the superheat "
            f"{t0 - p.T_m!r} K is below the resolution of T_0 in double precision"
        )
    return TemperatureProblem(p.solid, p.liquid, p.density, p.latent_heat, p.T_i, p.T_m,
                              t0, p.alpha, p.one_phase)


def induced_flux_problem(sol: SimilaritySolution) -> FluxProblem:
    """Flux problem whose flux coefficient reproduces a temperature-kind solution."""
    p = sol.problem
    return FluxProblem(p.solid, p.liquid, p.density, p.latent_heat, p.T_i, p.T_m,
                       face_flux_coefficient(sol), p.alpha, p.one_phase)


def make_one_phase(kind: str, liquid: Material, density: float, latent_heat: float, T_m: float,
                   value: float, alpha: float):
    """One-phase problem: solid already at T_m, solid material equal to the liquid.

    ``kind`` is ``"flux"`` (``value`` is q0) or ``"temperature"`` (``value``
    is T_0).
    """
    if kind == "flux":
        return FluxProblem(liquid, liquid, density, latent_heat, T_m, T_m, value, alpha, True)
    if kind == "temperature":
        return TemperatureProblem(liquid, liquid, density, latent_heat, T_m, T_m, value, alpha, True)
    raise ValueError(f"kind must be 'flux' or 'temperature', got {kind!r}")
