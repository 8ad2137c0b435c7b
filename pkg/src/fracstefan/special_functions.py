"""Gamma, error, Wright and Mainardi functions in double precision.

The Wright function

    W(z; rho; beta) = sum_{n>=0} z^n / (n! Gamma(rho n + beta)),   rho > -1,

is evaluated by one of three routes, chosen per call:

* the power series with compensated summation, whenever the terms do not
  cancel badly (largest term at most ``MAX_CANCELLATION`` times the sum);
* for z < 0 otherwise, the trapezoid rule on the steepest-descent contour of
  the Hankel integral ``(1/2 pi i) int exp(s + z s^nu) s^-beta ds``;
* for z > 0 otherwise, the same Hankel integral on a keyhole contour
  (adaptive Gauss-Kronrod from scipy).

The plain series loses about log10(max term / sum) digits, which is already
ten digits at W(-10; -1/2; 1); the contour routes keep roughly 1e-14
relative accuracy, including for values near the underflow threshold.
"""
from __future__ import annotations

import math
import warnings
from contextlib import contextmanager
from dataclasses import dataclass

from scipy import integrate

from . import _backend
from .errors import ConvergenceError, DomainError, GammaPoleError

__all__ = [
    "ACCURACY_ENVELOPE",
    "MAX_CANCELLATION",
    "SeriesConfig",
    "WrightArgs",
    "DEFAULT_CONFIG",
    "gamma",
    "reciprocal_gamma",
    "erf",
    "erfc",
    "wright",
    "wright_dz",
    "mainardi",
    "wright_complement",
    "mainardi_increment",
    "log_wright_negative",
    "backend",
    "use_backend",
]

#: Largest positive argument accepted by :func:`wright`. Measured accuracy
#: relative to max(1, |W|) is 4e-14 for z <= 10 and 1e-11 at z = 25; beyond
#: that both the series and the keyhole integral cancel catastrophically.
#: Negative arguments are unrestricted: the contour route keeps about
#: 1e-13 relative accuracy down to the underflow threshold.
ACCURACY_ENVELOPE = 25.0

#: Accept the series when max|term| <= MAX_CANCELLATION * |sum|.
MAX_CANCELLATION = 32.0

# a priori: try the series only if log(max term / W) is expected below this
_SERIES_BUDGET = math.log(1e4)
_CONTOUR_TOL_FLOOR = 4e-15
_QUAD_RTOL = 1.2e-14

_kern = _backend.kernels


@dataclass(frozen=True)
class SeriesConfig:
    """Truncation settings shared by every special-function evaluation.

    Attributes
    ----------
    tol : float
        Relative truncation tolerance, in (0, 1).
    max_terms : int
        Hard cap on the number of series terms.
    """

    tol: float = 1e-15
    max_terms: int = 400

    def __post_init__(self):
        if not (0.0 < self.tol < 1.0):
            raise ValueError(f"SeriesConfig.tol must lie in (0, 1), got {self.tol!r}")
        if int(self.max_terms) != self.max_terms or self.max_terms < 1:
            raise ValueError(f"SeriesConfig.max_terms must be a positive integer, got {self.max_terms!r}")


DEFAULT_CONFIG = SeriesConfig()


@dataclass(frozen=True)
class WrightArgs:
    """Validated argument triple (z, rho, beta) of the Wright function."""

    z: float
    rho: float
    beta: float

    def __post_init__(self):
        for name in ("z", "rho", "beta"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"Wright argument {name} must be finite")
        if not (-1.0 < self.rho <= 0.0):
            raise DomainError(f"rho must lie in (-1, 0], got {self.rho!r}")
        if self.z > ACCURACY_ENVELOPE:
            raise DomainError(
                f"z = {self.z!r} exceeds the accuracy envelope z <= {ACCURACY_ENVELOPE}"
            )

    def value(self, cfg: SeriesConfig = DEFAULT_CONFIG) -> float:
        return _wright(self.z, self.rho, self.beta, cfg)

    def derivative(self, cfg: SeriesConfig = DEFAULT_CONFIG) -> float:
        return _wright(self.z, self.rho, self.beta + self.rho, cfg)


def backend() -> str:
    """Name of the active kernel backend, ``"compiled"`` or ``"python"``."""
    return "compiled" if _kern is _backend.compiled_kernels else "python"


@contextmanager
def use_backend(name: str):
    """Temporarily switch the kernel backend (for tests and benchmarks)."""
    global _kern
    if name == "python":
        new = _backend.python_kernels
    elif name == "compiled":
        if _backend.compiled_kernels is None:
            raise RuntimeError("compiled kernels are not available in this installation")
        new = _backend.compiled_kernels
    else:
        raise ValueError(f"unknown backend {name!r}")
    old, _kern = _kern, new
    try:
        yield
    finally:
        _kern = old


def gamma(x: float) -> float:
    """Gamma function; raises :class:`GammaPoleError` at 0, -1, -2, ..."""
    if x <= 0.0 and x == math.floor(x):
        raise GammaPoleError(f"Gamma has a pole at {x!r}")
    return math.gamma(x)


def reciprocal_gamma(x: float) -> float:
    """1/Gamma(x), exactly zero at the poles of Gamma."""
    return _kern.rgamma(float(x))


def erf(x: float) -> float:
    return math.erf(x)


def erfc(x: float) -> float:
    return math.erfc(x)


def _series(z, rho, beta, cfg, start=0):
    s, mx, n = _kern.series(z, rho, beta, cfg.tol, cfg.max_terms, start)
    if n < 0:
        raise ConvergenceError(
            f"Wright series W({z!r}; {rho!r}; {beta!r}) did not converge in {cfg.max_terms} terms"
        )
    return s, mx


def _series_plausible(x, nu):
    c = (x * nu) ** (1.0 / (1.0 - nu))
    return 2.0 * c * (1.0 - nu) / nu <= _SERIES_BUDGET


def _contour_scaled(x, nu, beta, cfg):
    q, logpref, n = _kern.contour_negative(x, nu, beta, max(cfg.tol, _CONTOUR_TOL_FLOOR))
    if n < 0:
        raise ConvergenceError(f"contour quadrature for W({-x!r}; {-nu!r}; {beta!r}) did not converge")
    return q, logpref


def _contour(x, nu, beta, cfg):
    q, logpref = _contour_scaled(x, nu, beta, cfg)
    if q == 0.0:
        return 0.0
    return math.copysign(math.exp(logpref + math.log(abs(q))), q)


def _keyhole(x, nu, beta):
    """W(x; -nu; beta) for x > 0 from the Hankel integral on a keyhole contour."""
    eps = min(1.0, max(1e-3, x ** (-1.0 / nu)))
    cpn = math.cos(math.pi * nu)
    spn = math.sin(math.pi * nu)
    pb = math.pi * beta

    def ray(r):
        rn = x * r**nu
        return math.exp(-r + rn * cpn) * r ** (-beta) * math.sin(pb - rn * spn)

    en = x * eps**nu

    def circle(phi):
        re = eps * math.cos(phi) + en * math.cos(nu * phi)
        im = eps * math.sin(phi) + en * math.sin(nu * phi) + (1.0 - beta) * phi
        return math.exp(re) * math.cos(im)

    opts = dict(epsabs=0.0, epsrel=_QUAD_RTOL, limit=400)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        near, _ = integrate.quad(ray, eps, eps + 40.0, **opts)
        far, _ = integrate.quad(ray, eps + 40.0, math.inf, **opts)
        arc, _ = integrate.quad(circle, 0.0, math.pi, **opts)
    return (near + far + eps ** (1.0 - beta) * arc) / math.pi


def _wright(z, rho, beta, cfg, start=0):
    if rho == 0.0:
        v = math.exp(z) * reciprocal_gamma(beta)
        return v - reciprocal_gamma(beta) if start else v
    if z == 0.0:
        return 0.0 if start else reciprocal_gamma(beta)
    nu = -rho
    x = abs(z)
    if z < 0.0 and _series_plausible(x, nu):
        s, mx = _series(z, rho, beta, cfg, start)
        if mx <= MAX_CANCELLATION * abs(s):
            return s
    elif z > 0.0:
        # positive arguments: the series rarely cancels, so try it first
        s, mx, n = _kern.series(z, rho, beta, cfg.tol, cfg.max_terms, start)
        if n > 0 and mx <= MAX_CANCELLATION * abs(s):
            return s
    if z < 0.0:
        v = _contour(x, nu, beta, cfg)
    else:
        v = _keyhole(x, nu, beta)
    return v - reciprocal_gamma(beta) if start else v


def wright(z: float, rho: float, beta: float, cfg: SeriesConfig = DEFAULT_CONFIG) -> float:
    """Wright function W(z; rho; beta) for real arguments.

    Parameters
    ----------
    z : float
        Argument, z <= ACCURACY_ENVELOPE.
    rho : float
        Series parameter in (-1, 0].
    beta : float
        Offset parameter.
    cfg : SeriesConfig
        Series truncation settings.

    Raises
    ------
    DomainError
        For rho outside (-1, 0], non-finite input or z above the envelope.
    ConvergenceError
        If the series reaches ``cfg.max_terms`` before its stopping rule.
    """
    args = WrightArgs(float(z), float(rho), float(beta))
    return _wright(args.z, args.rho, args.beta, cfg)


def wright_dz(z: float, rho: float, beta: float, cfg: SeriesConfig = DEFAULT_CONFIG) -> float:
    """Derivative of W(z; rho; beta) in z, which equals W(z; rho; beta + rho)."""
    args = WrightArgs(float(z), float(rho), float(beta))
    return _wright(args.z, args.rho, args.beta + args.rho, cfg)


def mainardi(x: float, nu: float, cfg: SeriesConfig = DEFAULT_CONFIG) -> float:
    """Mainardi function M_nu(x) = W(-x; -nu; 1 - nu), x >= 0, 0 < nu < 1."""
    if not (x >= 0.0):
        raise DomainError(f"Mainardi function needs x >= 0, got {x!r}")
    if not (0.0 < nu < 1.0):
        raise DomainError(f"Mainardi order must lie in (0, 1), got {nu!r}")
    return _wright(-float(x), -float(nu), 1.0 - nu, cfg)


def wright_complement(x: float, nu: float, cfg: SeriesConfig = DEFAULT_CONFIG) -> float:
    """1 - W(-x; -nu; 1) for x >= 0 without cancellation at small x."""
    if not (x >= 0.0):
        raise DomainError(f"wright_complement needs x >= 0, got {x!r}")
    if not (0.0 < nu < 1.0):
        raise DomainError(f"order must lie in (0, 1), got {nu!r}")
    if x == 0.0:
        return 0.0
    w = _wright(-float(x), -float(nu), 1.0, cfg)
    # once W <= 1/2 the subtraction is exact to an ulp, the tail series may cancel
    if w <= 0.5:
        return 1.0 - w
    return -_wright(-float(x), -float(nu), 1.0, cfg, start=1)


def mainardi_increment(x: float, nu: float, cfg: SeriesConfig = DEFAULT_CONFIG) -> float:
    """``M_nu(x) - M_nu(0)`` for x >= 0, summed without the constant term."""
    if not (x >= 0.0):
        raise DomainError(f"mainardi_increment needs x >= 0, got {x!r}")
    if not (0.0 < nu < 1.0):
        raise DomainError(f"order must lie in (0, 1), got {nu!r}")
    if x == 0.0:
        return 0.0
    return _wright(-float(x), -float(nu), 1.0 - nu, cfg, start=1)


#: below this magnitude log_wright_negative switches to the scaled contour
_LOG_SWITCH = 1e-280


def log_wright_negative(x: float, nu: float, beta: float, cfg: SeriesConfig = DEFAULT_CONFIG):
    """``(log|W(-x; -nu; beta)|, sign)`` for x >= 0, 0 < nu < 1.

    Stays finite where W itself underflows, so that quotients such as
    ``W(-eta)/W(-mu)`` can be formed for large arguments. The sign is 0 (and
    the logarithm -inf) only when W is exactly zero.
    """
    if not (x >= 0.0 and math.isfinite(x)):
        raise DomainError(f"log_wright_negative needs finite x >= 0, got {x!r}")
    if not (0.0 < nu < 1.0):
        raise DomainError(f"order must lie in (0, 1), got {nu!r}")
    v = _wright(-float(x), -float(nu), float(beta), cfg)
    if abs(v) < _LOG_SWITCH and x > 0.0:
        q, logpref = _contour_scaled(float(x), float(nu), float(beta), cfg)
        if q != 0.0:
            return logpref + math.log(abs(q)), (1 if q > 0.0 else -1)
    if v == 0.0:
        return -math.inf, 0
    return math.log(abs(v)), (1 if v > 0.0 else -1)
