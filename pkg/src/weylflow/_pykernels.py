"""Pure-Python numeric kernels (fallback for the compiled ``_ckernels``).

Must stay operation-for-operation identical to ``_ckernels.pyx`` so both
backends produce the same trajectories to rounding.
"""

import math

AUTONOMOUS = 0
PIII = 1
EXPONENTIAL = 2

COMPLETED = 0
BLOWUP = 1
STEP_LIMIT = 2

# Dormand-Prince 5(4)
C2, C3, C4, C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9
A21 = 1 / 5
A31, A32 = 3 / 40, 9 / 40
A41, A42, A43 = 44 / 45, -56 / 15, 32 / 9
A51, A52, A53, A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
A61, A62, A63, A64, A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
A71, A73, A74, A75, A76 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
E1, E3, E4, E5, E6, E7 = (71 / 57600, -71 / 16695, 71 / 1920, -17253 / 339200,
                          22 / 525, -1 / 40)

SAFETY = 0.9
FAC_MIN = 0.2
FAC_MAX = 10.0
BETA = 0.04
EXPO1 = 0.2 - 0.75 * BETA
EPS = 2.220446049250313e-16


def field_autonomous(y, a):
    f0, f1, f2, f3, f4, g1, g2 = y
    a0, a1, a2, a3, a4 = a
    s01 = f0 + f1
    s34 = f3 + f4
    return [
        -(2.0 * f1 * g1 + a1) * f0 - a0 * f1,
        -(2.0 * f0 * g1 + a0) * f1 - a1 * f0,
        (s01 * g1 + s34 * g2 + 1.0) * f2 - 2.0 * a2 * g1 * g2,
        -(2.0 * f4 * g2 + a4) * f3 - a3 * f4,
        -(2.0 * f3 * g2 + a3) * f4 - a4 * f3,
        s01 * g1 * g1 - (s34 * g2 - a0 - a1) * g1 + s34 * f2,
        s34 * g2 * g2 - (s01 * g1 - a3 - a4) * g2 + s01 * f2,
    ]


def field_piii(y, T, a):
    x, yy, z, w = y
    a0, a1, a2, a3, a4 = a
    s01 = a0 + a1
    s34 = a3 + a4
    return [
        (2.0 * x * x * yy - x * x + s01 * x) / T - 1.0 + 2.0 * w,
        (-2.0 * x * yy * yy + 2.0 * x * yy - s01 * yy + a1) / T,
        (2.0 * z * z * w - z * z + s34 * z) / T - 1.0 + 2.0 * yy,
        (-2.0 * z * w * w + 2.0 * z * w - s34 * w + a4) / T,
    ]


def field_exponential(y, a):
    lam = a[0]
    return [lam * v for v in y]


def _rhs(system, t, y, a):
    if system == AUTONOMOUS:
        return field_autonomous(y, a)
    if system == PIII:
        return field_piii(y, t, a)
    if system == EXPONENTIAL:
        return field_exponential(y, a)
    raise ValueError(f"unknown kernel system {system}")


def _finite(v):
    for x in v:
        if not math.isfinite(x):
            return False
    return True


def _stages(system, t, y, k1, h, a):
    n = len(y)
    y2 = [y[i] + h * (A21 * k1[i]) for i in range(n)]
    k2 = _rhs(system, t + C2 * h, y2, a)
    y3 = [y[i] + h * (A31 * k1[i] + A32 * k2[i]) for i in range(n)]
    k3 = _rhs(system, t + C3 * h, y3, a)
    y4 = [y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]) for i in range(n)]
    k4 = _rhs(system, t + C4 * h, y4, a)
    y5 = [y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i])
          for i in range(n)]
    k5 = _rhs(system, t + C5 * h, y5, a)
    y6 = [y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i]
                      + A65 * k5[i]) for i in range(n)]
    k6 = _rhs(system, t + h, y6, a)
    yn = [y[i] + h * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i]
                      + A76 * k6[i]) for i in range(n)]
    return k2, k3, k4, k5, k6, yn


def fixed_rk5(system, a, y0, t0, h, nsteps):
    """Fifth-order Dormand-Prince solution after ``nsteps`` fixed steps."""
    t = float(t0)
    y = [float(v) for v in y0]
    a = [float(v) for v in a]
    for k in range(nsteps):
        k1 = _rhs(system, t, y, a)
        y = _stages(system, t, y, k1, h, a)[5]
        t = t0 + (k + 1) * h
    return y


def _initial_step(system, t, y, k1, direction, span, rtol, atol, a):
    n = len(y)
    d0 = d1 = 0.0
    for i in range(n):
        sk = atol + rtol * abs(y[i])
        d0 += (y[i] / sk) * (y[i] / sk)
        d1 += (k1[i] / sk) * (k1[i] / sk)
    d0 = math.sqrt(d0 / n)
    d1 = math.sqrt(d1 / n)
    if d0 < 1e-5 or d1 < 1e-5:
        h0 = 1e-6
    else:
        h0 = 0.01 * d0 / d1
    h0 = min(h0, span)
    y1 = [y[i] + direction * h0 * k1[i] for i in range(n)]
    k2 = _rhs(system, t + direction * h0, y1, a)
    if not _finite(k2):
        return h0
    d2 = 0.0
    for i in range(n):
        sk = atol + rtol * abs(y[i])
        d2 += ((k2[i] - k1[i]) / sk) * ((k2[i] - k1[i]) / sk)
    d2 = math.sqrt(d2 / n) / h0
    m = max(d1, d2)
    if m <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / m) ** 0.2
    return min(100.0 * h0, h1, span)


def dopri54(system, a, y0, grid, rtol, atol, max_step, blowup, max_steps, record_steps):
    """Adaptive integration landing exactly on every time in ``grid``.

    Returns ``(times, states, status, nfev, naccept, nreject)``.
    """
    a = [float(v) for v in a]
    y = [float(v) for v in y0]
    grid = [float(v) for v in grid]
    n = len(y)
    t = grid[0]
    tend = grid[-1]
    times = [t]
    states = [list(y)]
    if len(grid) == 1 or t == tend:
        return times, states, COMPLETED, 0, 0, 0
    direction = 1.0 if tend > t else -1.0
    k1 = _rhs(system, t, y, a)
    nfev = 1
    h = _initial_step(system, t, y, k1, direction, abs(tend - t), rtol, atol, a)
    nfev += 1
    h = min(h, max_step)
    facold = 1e-4
    naccept = nreject = 0
    last_rejected = False
    status = COMPLETED
    gi = 1
    while gi < len(grid):
        if naccept + nreject >= max_steps:
            status = STEP_LIMIT
            break
        target = grid[gi]
        remaining = abs(target - t)
        hs = min(h, max_step)
        landing = hs >= remaining
        if landing:
            hs = remaining
        if hs <= 16.0 * EPS * max(abs(t), 1.0) and not landing:
            status = BLOWUP
            break
        hh = direction * hs
        k2, k3, k4, k5, k6, yn = _stages(system, t, y, k1, hh, a)
        tn = target if landing else t + hh
        nfev += 6
        if _finite(yn):
            k7 = _rhs(system, tn, yn, a)
            nfev += 1
        else:
            k7 = yn
        if _finite(k7):
            err = 0.0
            for i in range(n):
                ei = hh * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i]
                           + E6 * k6[i] + E7 * k7[i])
                sk = atol + rtol * max(abs(y[i]), abs(yn[i]))
                err += (ei / sk) * (ei / sk)
            err = math.sqrt(err / n)
        else:
            err = math.inf
        if err <= 1.0:
            naccept += 1
            fac11 = err ** EXPO1
            fac = fac11 / facold ** BETA
            fac = max(1.0 / FAC_MAX, min(1.0 / FAC_MIN, fac / SAFETY))
            hnew = hs / fac
            if last_rejected:
                hnew = min(hnew, hs)
            facold = max(err, 1e-4)
            last_rejected = False
            if landing and hs < h:
                h = max(hnew, h)
            else:
                h = hnew
            t = tn
            y = yn
            k1 = k7
            if landing:
                gi += 1
                times.append(t)
                states.append(list(y))
            elif record_steps:
                times.append(t)
                states.append(list(y))
            big = 0.0
            for v in y:
                if abs(v) > big:
                    big = abs(v)
            if big > blowup:
                if not landing and not record_steps:
                    times.append(t)
                    states.append(list(y))
                status = BLOWUP
                break
        else:
            nreject += 1
            last_rejected = True
            if err == math.inf:
                h = hs * 0.25
            else:
                h = hs / min(1.0 / FAC_MIN, err ** EXPO1 / SAFETY)
    return times, states, status, nfev, naccept, nreject
