# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled numeric kernels: vector fields and the Dormand-Prince 5(4) loop.

Mirrors ``_pykernels`` operation for operation.
"""

from libc.math cimport sqrt, pow, fabs, isfinite, INFINITY

DEF NMAX = 8

AUTONOMOUS = 0
PIII = 1
EXPONENTIAL = 2

COMPLETED = 0
BLOWUP = 1
STEP_LIMIT = 2

cdef double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9
cdef double A21 = 1.0 / 5
cdef double A31 = 3.0 / 40, A32 = 9.0 / 40
cdef double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9
cdef double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561
cdef double A54 = -212.0 / 729
cdef double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247
cdef double A64 = 49.0 / 176, A65 = -5103.0 / 18656
cdef double A71 = 35.0 / 384, A73 = 500.0 / 1113, A74 = 125.0 / 192
cdef double A75 = -2187.0 / 6784, A76 = 11.0 / 84
cdef double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920
cdef double E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40

cdef double SAFETY = 0.9
cdef double FAC_MIN = 0.2
cdef double FAC_MAX = 10.0
cdef double BETA = 0.04
cdef double EXPO1 = 0.2 - 0.75 * 0.04
cdef double EPS = 2.220446049250313e-16


cdef inline void _autonomous(const double* y, const double* a, double* out) noexcept nogil:
    cdef double f0 = y[0], f1 = y[1], f2 = y[2], f3 = y[3], f4 = y[4]
    cdef double g1 = y[5], g2 = y[6]
    cdef double s01 = f0 + f1
    cdef double s34 = f3 + f4
    out[0] = -(2.0 * f1 * g1 + a[1]) * f0 - a[0] * f1
    out[1] = -(2.0 * f0 * g1 + a[0]) * f1 - a[1] * f0
    out[2] = (s01 * g1 + s34 * g2 + 1.0) * f2 - 2.0 * a[2] * g1 * g2
    out[3] = -(2.0 * f4 * g2 + a[4]) * f3 - a[3] * f4
    out[4] = -(2.0 * f3 * g2 + a[3]) * f4 - a[4] * f3
    out[5] = s01 * g1 * g1 - (s34 * g2 - a[0] - a[1]) * g1 + s34 * f2
    out[6] = s34 * g2 * g2 - (s01 * g1 - a[3] - a[4]) * g2 + s01 * f2


cdef inline void _piii(const double* y, double T, const double* a, double* out) noexcept nogil:
    cdef double x = y[0], yy = y[1], z = y[2], w = y[3]
    cdef double s01 = a[0] + a[1]
    cdef double s34 = a[3] + a[4]
    out[0] = (2.0 * x * x * yy - x * x + s01 * x) / T - 1.0 + 2.0 * w
    out[1] = (-2.0 * x * yy * yy + 2.0 * x * yy - s01 * yy + a[1]) / T
    out[2] = (2.0 * z * z * w - z * z + s34 * z) / T - 1.0 + 2.0 * yy
    out[3] = (-2.0 * z * w * w + 2.0 * z * w - s34 * w + a[4]) / T


cdef inline void _rhs(int system, double t, const double* y, const double* a,
                      int n, double* out) noexcept nogil:
    cdef int i
    if system == 0:
        _autonomous(y, a, out)
    elif system == 1:
        _piii(y, t, a, out)
    else:
        for i in range(n):
            out[i] = a[0] * y[i]


cdef inline bint _finite(const double* v, int n) noexcept nogil:
    cdef int i
    for i in range(n):
        if not isfinite(v[i]):
            return False
    return True


cdef void _stages(int system, double t, const double* y, const double* k1, double h,
                  const double* a, int n, double* k2, double* k3, double* k4,
                  double* k5, double* k6, double* yn) noexcept nogil:
    cdef double tmp[NMAX]
    cdef int i
    for i in range(n):
        tmp[i] = y[i] + h * (A21 * k1[i])
    _rhs(system, t + C2 * h, tmp, a, n, k2)
    for i in range(n):
        tmp[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i])
    _rhs(system, t + C3 * h, tmp, a, n, k3)
    for i in range(n):
        tmp[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i])
    _rhs(system, t + C4 * h, tmp, a, n, k4)
    for i in range(n):
        tmp[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i])
    _rhs(system, t + C5 * h, tmp, a, n, k5)
    for i in range(n):
        tmp[i] = y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i]
                             + A65 * k5[i])
    _rhs(system, t + h, tmp, a, n, k6)
    for i in range(n):
        yn[i] = y[i] + h * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i]
                            + A76 * k6[i])


cdef int _load(object seq, double* buf, int nmax) except -1:
    cdef int n = len(seq)
    cdef int i
    if n > nmax:
        raise ValueError(f"kernel supports at most {nmax} components")
    for i in range(n):
        buf[i] = float(seq[i])
    return n


def field_autonomous(y, a):
    cdef double yb[NMAX]
    cdef double ab[5]
    cdef double out[NMAX]
    if _load(y, yb, NMAX) != 7 or _load(a, ab, 5) != 5:
        raise ValueError("autonomous field expects 7 states and 5 parameters")
    _autonomous(yb, ab, out)
    return [out[i] for i in range(7)]


def field_piii(y, double T, a):
    cdef double yb[NMAX]
    cdef double ab[5]
    cdef double out[NMAX]
    if _load(y, yb, NMAX) != 4 or _load(a, ab, 5) != 5:
        raise ValueError("piii field expects 4 states and 5 parameters")
    if T == 0.0:
        raise ZeroDivisionError("piii field singular at T = 0")
    _piii(yb, T, ab, out)
    return [out[i] for i in range(4)]


def field_exponential(y, a):
    return [float(a[0]) * float(v) for v in y]


def fixed_rk5(int system, a, y0, double t0, double h, int nsteps):
    cdef double ab[5]
    cdef double y[NMAX]
    cdef double k1[NMAX]
    cdef double k2[NMAX]
    cdef double k3[NMAX]
    cdef double k4[NMAX]
    cdef double k5[NMAX]
    cdef double k6[NMAX]
    cdef double yn[NMAX]
    cdef int i, k
    _load(a, ab, 5)
    cdef int n = _load(y0, y, NMAX)
    cdef double t = t0
    for k in range(nsteps):
        _rhs(system, t, y, ab, n, k1)
        _stages(system, t, y, k1, h, ab, n, k2, k3, k4, k5, k6, yn)
        for i in range(n):
            y[i] = yn[i]
        t = t0 + (k + 1) * h
    return [y[i] for i in range(n)]


cdef double _initial_step(int system, double t, const double* y, const double* k1,
                          double direction, double span, double rtol, double atol,
                          const double* a, int n) noexcept nogil:
    cdef double d0 = 0.0, d1 = 0.0, d2 = 0.0, sk, h0, h1, m
    cdef double y1[NMAX]
    cdef double k2[NMAX]
    cdef int i
    for i in range(n):
        sk = atol + rtol * fabs(y[i])
        d0 += (y[i] / sk) * (y[i] / sk)
        d1 += (k1[i] / sk) * (k1[i] / sk)
    d0 = sqrt(d0 / n)
    d1 = sqrt(d1 / n)
    if d0 < 1e-5 or d1 < 1e-5:
        h0 = 1e-6
    else:
        h0 = 0.01 * d0 / d1
    if span < h0:
        h0 = span
    for i in range(n):
        y1[i] = y[i] + direction * h0 * k1[i]
    _rhs(system, t + direction * h0, y1, a, n, k2)
    if not _finite(k2, n):
        return h0
    for i in range(n):
        sk = atol + rtol * fabs(y[i])
        d2 += ((k2[i] - k1[i]) / sk) * ((k2[i] - k1[i]) / sk)
    d2 = sqrt(d2 / n) / h0
    m = d1 if d1 > d2 else d2
    if m <= 1e-15:
        h1 = h0 * 1e-3
        if h1 < 1e-6:
            h1 = 1e-6
    else:
        h1 = pow(0.01 / m, 0.2)
    h0 = 100.0 * h0
    if h1 < h0:
        h0 = h1
    if span < h0:
        h0 = span
    return h0


def dopri54(int system, a, y0, grid, double rtol, double atol, double max_step,
            double blowup, long max_steps, bint record_steps):
    """Adaptive integration landing exactly on every time in ``grid``.

    Returns ``(times, states, status, nfev, naccept, nreject)``.
    """
    cdef double ab[5]
    cdef double y[NMAX]
    cdef double k1[NMAX]
    cdef double k2[NMAX]
    cdef double k3[NMAX]
    cdef double k4[NMAX]
    cdef double k5[NMAX]
    cdef double k6[NMAX]
    cdef double k7[NMAX]
    cdef double yn[NMAX]
    cdef int i
    _load(a, ab, 5)
    cdef int n = _load(y0, y, NMAX)
    cdef list g = [float(v) for v in grid]
    cdef Py_ssize_t ng = len(g)
    cdef Py_ssize_t gi = 1
    cdef double t = g[0]
    cdef double tend = g[ng - 1]
    cdef list times = [t]
    cdef list states = [[y[i] for i in range(n)]]
    if ng == 1 or t == tend:
        return times, states, COMPLETED, 0, 0, 0
    cdef double direction = 1.0 if tend > t else -1.0
    cdef long nfev = 1, naccept = 0, nreject = 0
    cdef int status = COMPLETED
    cdef bint last_rejected = False, landing
    cdef double h, hs, hh, target, remaining, tn, err, ei, sk, fac11, fac, hnew, big
    cdef double facold = 1e-4
    cdef double ay, ayn
    _rhs(system, t, y, ab, n, k1)
    h = _initial_step(system, t, y, k1, direction, fabs(tend - t), rtol, atol, ab, n)
    nfev += 1
    if max_step < h:
        h = max_step
    while gi < ng:
        if naccept + nreject >= max_steps:
            status = STEP_LIMIT
            break
        target = g[gi]
        remaining = fabs(target - t)
        hs = h if h < max_step else max_step
        landing = hs >= remaining
        if landing:
            hs = remaining
        if hs <= 16.0 * EPS * (fabs(t) if fabs(t) > 1.0 else 1.0) and not landing:
            status = BLOWUP
            break
        hh = direction * hs
        _stages(system, t, y, k1, hh, ab, n, k2, k3, k4, k5, k6, yn)
        tn = target if landing else t + hh
        nfev += 6
        if _finite(yn, n):
            _rhs(system, tn, yn, ab, n, k7)
            nfev += 1
            if _finite(k7, n):
                err = 0.0
                for i in range(n):
                    ei = hh * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i]
                               + E6 * k6[i] + E7 * k7[i])
                    ay = fabs(y[i])
                    ayn = fabs(yn[i])
                    sk = atol + rtol * (ay if ay >= ayn else ayn)
                    err += (ei / sk) * (ei / sk)
                err = sqrt(err / n)
            else:
                err = INFINITY
        else:
            err = INFINITY
        if err <= 1.0:
            naccept += 1
            fac11 = pow(err, EXPO1)
            fac = fac11 / pow(facold, BETA)
            fac = fac / SAFETY
            if fac > 1.0 / FAC_MIN:
                fac = 1.0 / FAC_MIN
            if fac < 1.0 / FAC_MAX:
                fac = 1.0 / FAC_MAX
            hnew = hs / fac
            if last_rejected and hs < hnew:
                hnew = hs
            facold = err if err > 1e-4 else 1e-4
            last_rejected = False
            if landing and hs < h:
                if hnew > h:
                    h = hnew
            else:
                h = hnew
            t = tn
            for i in range(n):
                y[i] = yn[i]
                k1[i] = k7[i]
            if landing:
                gi += 1
                times.append(t)
                states.append([y[i] for i in range(n)])
            elif record_steps:
                times.append(t)
                states.append([y[i] for i in range(n)])
            big = 0.0
            for i in range(n):
                if fabs(y[i]) > big:
                    big = fabs(y[i])
            if big > blowup:
                if not landing and not record_steps:
                    times.append(t)
                    states.append([y[i] for i in range(n)])
                status = BLOWUP
                break
        else:
            nreject += 1
            last_rejected = True
            if err == INFINITY:
                h = hs * 0.25
            else:
                fac = pow(err, EXPO1) / SAFETY
                if fac > 1.0 / FAC_MIN:
                    fac = 1.0 / FAC_MIN
                h = hs / fac
    return times, states, status, nfev, naccept, nreject
