"""Pure-Python kernels for the Wright function.

Used when the compiled extension is unavailable (or disabled through the
``FRACSTEFAN_PURE_PYTHON`` environment variable). The compiled module
``_kernels`` exposes the same three functions with identical semantics.
"""
import math

import numpy as np

_LOG_PI = math.log(math.pi)
_BIG_GAMMA = 170.0
# exp(-_TAIL) is the relative size of the discarded contour tail
_TAIL = 60.0
_MAX_NODES = 1 << 17
_EPS = 2.0**-52


def sinpi(x):
    """sin(pi*x) with exact zeros at the integers."""
    if x == math.floor(x):
        return 0.0
    r = math.fmod(x, 2.0)
    if r > 1.0:
        r -= 2.0
    elif r < -1.0:
        r += 2.0
    if r > 0.5:
        r = 1.0 - r
    elif r < -0.5:
        r = -1.0 - r
    return math.sin(math.pi * r)


def rgamma(x):
    """1/Gamma(x), zero at the poles, reflection formula left of 1/2."""
    if x <= 0.0 and x == math.floor(x):
        return 0.0
    if x >= 0.5:
        if x < _BIG_GAMMA:
            return 1.0 / math.gamma(x)
        return math.exp(-math.lgamma(x))
    y = 1.0 - x
    s = sinpi(x)
    if y < _BIG_GAMMA:
        return s * math.gamma(y) / math.pi
    lg = math.lgamma(y) - _LOG_PI
    if lg > 709.0:
        return math.copysign(math.inf, s)
    return s * math.exp(lg)


def series(z, rho, beta, tol, max_terms, start):
    """Compensated partial sum of sum_{n>=start} z^n / (n! Gamma(rho n + beta)).

    Returns ``(value, max_abs_term, n_terms)``; ``n_terms`` is -1 when the
    stopping rule did not fire within ``max_terms`` terms.

    The stopping rule compares the envelope |z^n/n!| * max|1/Gamma| (the sine
    factor of the reflection formula replaced by 1) against ``tol`` times the
    partial sum, and must hold for two consecutive terms.
    """
    s = 0.0
    comp = 0.0
    mx = 0.0
    small = 0
    az = abs(z)
    p = 1.0
    for n in range(max_terms):
        if n > 0:
            p *= z / n
        if n < start:
            continue
        x = rho * n + beta
        if x >= 0.5:
            g = 1.0 / math.gamma(x) if x < _BIG_GAMMA else math.exp(-math.lgamma(x))
            t = p * g
            env = abs(t)
        else:
            y = 1.0 - x
            if y < _BIG_GAMMA and p != 0.0:
                e = abs(p) * math.gamma(y) / math.pi
            elif p == 0.0:
                e = 0.0
            else:
                e = math.exp(math.log(abs(p)) + math.lgamma(y) - _LOG_PI)
            t = math.copysign(e, p) * sinpi(x)
            env = e
        # Neumaier two-sum
        u = s + t
        if abs(s) >= abs(t):
            comp += (s - u) + t
        else:
            comp += (t - u) + s
        s = u
        if abs(t) > mx:
            mx = abs(t)
        total = abs(s + comp)
        if env <= tol * max(total, 1e-16 * mx) and n >= az:
            small += 1
            if small >= 2:
                return s + comp, mx, n + 1
        else:
            small = 0
        if not math.isfinite(s):
            break
    return s + comp, mx, -1


def _parts(th, nu):
    sn = np.sin(nu * th)
    st = np.sin(th)
    r = (sn / (nu * st)) ** (1.0 / (1.0 - nu))
    rp = r / (1.0 - nu) * (nu * np.cos(nu * th) / sn - np.cos(th) / st)
    h = -r * np.sin((1.0 - nu) * th) / sn
    return r, rp, h


def _h(th, nu):
    sn = math.sin(nu * th)
    r = (sn / (nu * math.sin(th))) ** (1.0 / (1.0 - nu))
    return -r * math.sin((1.0 - nu) * th) / sn


def theta_max(c, nu, h0):
    """Angle beyond which exp(c (h - h0)) < exp(-_TAIL)."""
    lo, hi = 0.0, math.pi
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if c * (h0 - _h(mid, nu)) > _TAIL:
            hi = mid
        else:
            lo = mid
    return hi


def contour_negative(x, nu, beta, tol):
    """W(-x; -nu; beta) for x > 0 by the trapezoid rule on a steepest-descent contour.

    The Hankel integral is deformed onto the contour through the saddle
    point ``c = (nu x)^(1/(1-nu))`` along which the exponent stays real, then
    reduced to a real integral over the angle. Returns
    ``(q, logpref, nodes)`` with ``W = q * exp(logpref)``, so callers can
    work with the logarithm when the value underflows; ``nodes`` is -1 if
    the node budget ran out before convergence.
    """
    c = (x * nu) ** (1.0 / (1.0 - nu))
    h0 = -(1.0 - nu) / nu
    a = 1.0 - beta
    logpref = a * math.log(c) + c * h0 - _LOG_PI
    # rounding of c*h limits the attainable relative accuracy to about c*eps
    tol = tol + 4.0 * c * _EPS
    tm = theta_max(c, nu, h0)

    def f(th):
        r, rp, h = _parts(th, nu)
        return np.exp(c * (h - h0)) * r ** (-beta) * (r * np.cos(a * th) + rp * np.sin(a * th))

    n = 32
    vals = f(np.arange(1, n + 1) * (tm / n))
    # integrand equals 1 at theta = 0; the far end gets half weight too
    s = 0.5 + vals[:-1].sum() + 0.5 * vals[-1]
    sabs = 0.5 + np.abs(vals[:-1]).sum() + 0.5 * abs(vals[-1])
    q = s * tm / n
    ok = False
    while n < _MAX_NODES:
        mids = f((np.arange(n) + 0.5) * (tm / n))
        s += mids.sum()
        sabs += np.abs(mids).sum()
        n *= 2
        qn = s * tm / n
        if abs(qn - q) <= tol * sabs * tm / n:
            q = qn
            ok = True
            break
        q = qn
    return q, logpref, (n if ok else -1)
