"""Numerical integration, first-integral monitoring and Backlund action on trajectories."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import kernels
from .backlund.maps import POLE_RTOL, RationalMap
from .backlund.verify import FAIL, PASS, VerificationReport
from .errors import AllSamplesPoles, DomainError, StepLimit
from .model import ParameterVector, SystemDefinition, build_piii_system
from .ratcalc import ALPHAS

TERMINATIONS = {kernels.COMPLETED: "completed", kernels.BLOWUP: "blowup",
                kernels.STEP_LIMIT: "step_limit"}


@dataclass(frozen=True)
class IntegrationConfig:
    rtol: float = 1e-10
    atol: float = 1e-12
    max_step: float = math.inf
    blowup_threshold: float = 1e8
    max_steps: int = 10 ** 6
    n_grid: int = 257
    record_steps: bool = False

    def __post_init__(self):
        if not (self.rtol > 0 and self.atol > 0):
            raise ValueError("rtol and atol must be positive")
        if not self.blowup_threshold > 1:
            raise ValueError("blowup_threshold must exceed 1")
        if self.max_step <= 0 or self.max_steps < 1 or self.n_grid < 2:
            raise ValueError("max_step, max_steps and n_grid must be positive")


@dataclass(frozen=True)
class Trajectory:
    system: str
    alpha: ParameterVector
    times: np.ndarray
    states: np.ndarray
    termination: str
    config: IntegrationConfig
    phase_vars: tuple = ()
    time_var: str = "t"
    stats: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        self.times.setflags(write=False)
        self.states.setflags(write=False)

    def __len__(self):
        return len(self.times)

    @property
    def completed(self):
        return self.termination == "completed"

    def header(self):
        return (self.time_var,) + tuple(self.phase_vars)

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(self.header())
            for t, y in zip(self.times, self.states):
                w.writerow([f"{t:.17g}"] + [f"{v:.17g}" for v in y])


def read_csv(path):
    """``(header, times, states)`` from a trajectory CSV."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    data = np.array([[float(v) for v in r] for r in rows[1:]])
    return tuple(rows[0]), data[:, 0], data[:, 1:]


def _check_domain(sys, t0, t1):
    if sys.time_var == "T" and min(t0, t1) <= 0 <= max(t0, t1):
        raise DomainError(f"interval [{min(t0, t1)}, {max(t0, t1)}] contains the fixed "
                          "singularity T = 0")


def _run(sys, alpha, y0, grid, cfg):
    a = [float(v) for v in alpha]
    y0 = [float(v) for v in y0]
    if not all(math.isfinite(v) for v in y0):
        raise ValueError("initial state must be finite")
    if len(y0) != sys.dimension:
        raise ValueError(f"{sys.name} expects {sys.dimension} initial values, got {len(y0)}")
    if sys.kernel_id < 0:
        raise ValueError(f"no numeric kernel for system {sys.name!r}")
    times, states, status, nfev, nacc, nrej = kernels.dopri54(
        sys.kernel_id, a, y0, grid, cfg.rtol, cfg.atol, cfg.max_step,
        cfg.blowup_threshold, cfg.max_steps, cfg.record_steps)
    if not isinstance(alpha, ParameterVector):
        alpha = ParameterVector(tuple(a), normalized=False)
    return Trajectory(sys.name, alpha, np.asarray(times, dtype=float),
                      np.asarray(states, dtype=float).reshape(len(times), sys.dimension),
                      TERMINATIONS[status], cfg, sys.phase_vars, sys.time_var,
                      {"nfev": nfev, "naccept": nacc, "nreject": nrej,
                       "backend": kernels.BACKEND})


def integrate(sys: SystemDefinition, alpha, y0: Sequence[float], t0: float, t1: float,
              cfg: IntegrationConfig | None = None, grid: Sequence[float] | None = None,
              raise_on_step_limit: bool = False) -> Trajectory:
    """Adaptive Dormand-Prince 5(4) run sampled on an evenly spaced grid.

    The integrator lands exactly on every grid time; pass ``grid`` to use
    custom sample times instead (monotone, from ``t0`` to ``t1``).
    Termination is ``blowup`` once the max-norm exceeds the threshold.
    """
    cfg = cfg or IntegrationConfig()
    t0, t1 = float(t0), float(t1)
    _check_domain(sys, t0, t1)
    if grid is None:
        grid = np.linspace(t0, t1, cfg.n_grid)
        grid[0], grid[-1] = t0, t1
    else:
        grid = np.asarray(grid, dtype=float)
        steps = np.diff(grid)
        if grid[0] != t0 or grid[-1] != t1 or not (np.all(steps > 0) or np.all(steps < 0)):
            raise ValueError("grid must run strictly monotonically from t0 to t1")
    traj = _run(sys, alpha, y0, grid.tolist(), cfg)
    if raise_on_step_limit and traj.termination == "step_limit":
        raise StepLimit(f"{sys.name}: exceeded {cfg.max_steps} steps")
    return traj


# -- first integrals ---------------------------------------------------------

@dataclass(frozen=True)
class InvariantDrift:
    """Max deviation from the initial value for f0-f1, f3-f4, (f2-g1 g2) e^{-t}."""

    drift: dict
    values: dict = field(compare=False, default_factory=dict)

    def within(self, tol_linear=1e-9, tol_exp=1e-8):
        return (self.drift["f0-f1"] <= tol_linear and self.drift["f3-f4"] <= tol_linear
                and self.drift["(f2-g1*g2)*exp(-t)"] <= tol_exp)

    def to_report(self, tol_linear=1e-9, tol_exp=1e-8):
        details = tuple((f"max drift of {k}", f"{v:.3e}") for k, v in self.drift.items())
        return VerificationReport("drift.autonomous", PASS if self.within(tol_linear, tol_exp)
                                  else FAIL, "sampled", details)


def invariant_series(times, states):
    f0, f1, f2, f3, f4, g1, g2 = (states[:, k] for k in range(7))
    return {
        "f0-f1": f0 - f1,
        "f3-f4": f3 - f4,
        "(f2-g1*g2)*exp(-t)": (f2 - g1 * g2) * np.exp(-np.asarray(times)),
    }


def monitor_invariants(traj: Trajectory) -> InvariantDrift:
    if traj.system != "autonomous":
        raise ValueError("first integrals are defined for the autonomous system only")
    series = invariant_series(traj.times, traj.states)
    drift = {k: float(np.max(np.abs(v - v[0]))) for k, v in series.items()}
    return InvariantDrift(drift, series)


# -- Backlund action ---------------------------------------------------------

@dataclass(frozen=True)
class EquivarianceReport:
    map_name: str
    discrepancy: float
    n_compared: int
    n_dropped: int
    reintegrated: Trajectory | None = None

    def to_report(self, tol=1e-6):
        return VerificationReport(
            f"equivariance.{self.map_name.replace(' ', '.')}",
            PASS if self.discrepancy <= tol else FAIL, "sampled",
            (("max pointwise discrepancy", f"{self.discrepancy:.3e}"),
             ("samples compared", str(self.n_compared)),
             ("samples dropped at poles", str(self.n_dropped))))


def _map_samples(m: RationalMap, traj: Trajectory, alpha):
    """Float images of all samples; ``None`` where a denominator is below the pole filter."""
    ctx = m.context
    nums = [img.numerator for img in m.images]
    dens = [img.denominator for img in m.images]
    base = dict(zip(ALPHAS, alpha))
    out = []
    for t, y in zip(traj.times, traj.states):
        point = dict(base)
        point.update(zip(m.phase_vars, y))
        point[m.time_var] = t
        vec = [float(point.get(s, 0.0)) for s in ctx.names]
        scale = max(1.0, float(np.max(np.abs(y))), abs(float(t)))
        img = []
        for n, d in zip(nums, dens):
            dv = d.evaluate_float(vec)
            if abs(dv) < POLE_RTOL * scale:
                img = None
                break
            img.append(n.evaluate_float(vec) / dv)
        out.append(img)
    return out


def map_trajectory(traj: Trajectory, m: RationalMap, sys: SystemDefinition | None = None,
                   cfg: IntegrationConfig | None = None):
    """Apply ``m`` samplewise and validate by re-integrating the image system.

    Returns ``(image_trajectory, EquivarianceReport)``.
    """
    sys = sys or build_piii_system()
    if sys.name != traj.system or sys.phase_vars != m.phase_vars:
        raise ValueError(f"map {m.name} does not act on {traj.system} trajectories")
    cfg = cfg or traj.config
    alpha = traj.alpha.as_floats()
    new_alpha = ParameterVector(tuple(m.apply_params(alpha)), normalized=False)
    images = _map_samples(m, traj, alpha)
    keep = [k for k, img in enumerate(images) if img is not None]
    if not keep:
        raise AllSamplesPoles(f"every sample of the trajectory lies on a pole of {m.name}")
    times = np.array([m.time_sign * traj.times[k] for k in keep])
    states = np.array([images[k] for k in keep], dtype=float)
    image = Trajectory(traj.system, new_alpha, times, states, traj.termination, cfg,
                       traj.phase_vars, traj.time_var, {"dropped": len(images) - len(keep)})
    if len(times) == 1:
        return image, EquivarianceReport(m.name, 0.0, 1, len(images) - 1)
    again = integrate(sys, new_alpha, states[0], times[0], times[-1], cfg, grid=times)
    n = min(len(again), len(times))
    disc = float(np.max(np.abs(again.states[:n] - states[:n])))
    if n < len(times):
        # re-integration stopped short of the image samples: not equivariant
        disc = math.inf
    return image, EquivarianceReport(m.name, disc, n, len(images) - len(keep), again)


# -- reduction -----------------------------------------------------------------

def lift_to_autonomous(x, y, z, w, T0):
    """Autonomous initial point at t = 0 corresponding to a PIII point at T = T0."""
    return [y - 1.0, y, x * z + T0, w - 1.0, w, x, z]


def reduction_discrepancy(point, T0, alpha, t1=1.0, cfg=None):
    """Max pointwise gap between (g1, f1, g2, f4)(t) and a PIII run at T = T0 e^t."""
    cfg = cfg or IntegrationConfig()
    from .model import build_autonomous_system
    x, y, z, w = (float(v) for v in point)
    auto = integrate(build_autonomous_system(), alpha, lift_to_autonomous(x, y, z, w, T0),
                     0.0, t1, cfg)
    Tgrid = T0 * np.exp(auto.times)
    Tgrid[0] = T0
    piii = integrate(build_piii_system(), alpha, [x, y, z, w], Tgrid[0], Tgrid[-1], cfg,
                     grid=Tgrid)
    n = min(len(auto), len(piii))
    reduced = auto.states[:n][:, [5, 1, 6, 4]]
    return float(np.max(np.abs(reduced - piii.states[:n]))), auto, piii
