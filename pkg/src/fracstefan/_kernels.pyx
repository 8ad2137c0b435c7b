# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the Wright function (same contract as ``_kernels_py``)."""
from libc.math cimport (sin, cos, exp, log, fabs, floor, fmod, tgamma, lgamma,
                        copysign, isfinite, M_PI)

cdef double _LOG_PI = log(M_PI)
cdef double _BIG_GAMMA = 170.0
cdef double _TAIL = 60.0
cdef long _MAX_NODES = 1 << 17
cdef double _EPS = 2.0 ** -52


cdef inline double _sinpi(double x) nogil:
    cdef double r
    if x == floor(x):
        return 0.0
    r = fmod(x, 2.0)
    if r > 1.0:
        r -= 2.0
    elif r < -1.0:
        r += 2.0
    if r > 0.5:
        r = 1.0 - r
    elif r < -0.5:
        r = -1.0 - r
    return sin(M_PI * r)


def sinpi(double x):
    return _sinpi(x)


def rgamma(double x):
    cdef double y, s, lg
    if x <= 0.0 and x == floor(x):
        return 0.0
    if x >= 0.5:
        if x < _BIG_GAMMA:
            return 1.0 / tgamma(x)
        return exp(-lgamma(x))
    y = 1.0 - x
    s = _sinpi(x)
    if y < _BIG_GAMMA:
        return s * tgamma(y) / M_PI
    lg = lgamma(y) - _LOG_PI
    if lg > 709.0:
        return copysign(float("inf"), s)
    return s * exp(lg)


def series(double z, double rho, double beta, double tol, long max_terms, long start):
    cdef double s = 0.0, comp = 0.0, mx = 0.0, p = 1.0
    cdef double x, y, t, e, env, u, total, g
    cdef double az = fabs(z)
    cdef long n, small = 0
    for n in range(max_terms):
        if n > 0:
            p *= z / n
        if n < start:
            continue
        x = rho * n + beta
        if x >= 0.5:
            if x < _BIG_GAMMA:
                g = 1.0 / tgamma(x)
            else:
                g = exp(-lgamma(x))
            t = p * g
            env = fabs(t)
        else:
            y = 1.0 - x
            if p == 0.0:
                e = 0.0
            elif y < _BIG_GAMMA:
                e = fabs(p) * tgamma(y) / M_PI
            else:
                e = exp(log(fabs(p)) + lgamma(y) - _LOG_PI)
            t = copysign(e, p) * _sinpi(x)
            env = e
        u = s + t
        if fabs(s) >= fabs(t):
            comp += (s - u) + t
        else:
            comp += (t - u) + s
        s = u
        if fabs(t) > mx:
            mx = fabs(t)
        total = fabs(s + comp)
        if env <= tol * max(total, 1e-16 * mx) and n >= az:
            small += 1
            if small >= 2:
                return s + comp, mx, n + 1
        else:
            small = 0
        if not isfinite(s):
            break
    return s + comp, mx, -1


cdef inline double _h(double th, double nu) nogil:
    cdef double sn = sin(nu * th)
    cdef double r = (sn / (nu * sin(th))) ** (1.0 / (1.0 - nu))
    return -r * sin((1.0 - nu) * th) / sn


cdef inline double _f(double th, double nu, double c, double h0, double beta) nogil:
    cdef double sn = sin(nu * th), st = sin(th)
    cdef double a = 1.0 - beta
    cdef double r = (sn / (nu * st)) ** (1.0 / (1.0 - nu))
    cdef double rp = r / (1.0 - nu) * (nu * cos(nu * th) / sn - cos(th) / st)
    cdef double h = -r * sin((1.0 - nu) * th) / sn
    return exp(c * (h - h0)) * r ** (-beta) * (r * cos(a * th) + rp * sin(a * th))


def theta_max(double c, double nu, double h0):
    cdef double lo = 0.0, hi = M_PI, mid
    cdef int i
    for i in range(60):
        mid = 0.5 * (lo + hi)
        if c * (h0 - _h(mid, nu)) > _TAIL:
            hi = mid
        else:
            lo = mid
    return hi


def contour_negative(double x, double nu, double beta, double tol):
    cdef double c = (x * nu) ** (1.0 / (1.0 - nu))
    cdef double h0 = -(1.0 - nu) / nu
    cdef double a = 1.0 - beta
    cdef double logpref = a * log(c) + c * h0 - _LOG_PI
    cdef long n = 32, k
    cdef double v, s, sabs, q, qn, step, tm
    cdef bint ok = False
    tol = tol + 4.0 * c * _EPS
    tm = theta_max(c, nu, h0)
    s = 0.5
    sabs = 0.5
    step = tm / n
    for k in range(1, n):
        v = _f(k * step, nu, c, h0, beta)
        s += v
        sabs += fabs(v)
    v = _f(tm, nu, c, h0, beta)
    s += 0.5 * v
    sabs += 0.5 * fabs(v)
    q = s * step
    while n < _MAX_NODES:
        step = tm / n
        for k in range(n):
            v = _f((k + 0.5) * step, nu, c, h0, beta)
            s += v
            sabs += fabs(v)
        n *= 2
        qn = s * tm / n
        if fabs(qn - q) <= tol * sabs * tm / n:
            q = qn
            ok = True
            break
        q = qn
    return q, logpref, (n if ok else -1)
