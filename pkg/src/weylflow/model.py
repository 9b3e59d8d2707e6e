"""The autonomous 7-variable system, the coupled PIII system and its Hamiltonian."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from . import kernels
from .errors import SingularEvaluation
from .ratcalc import ALPHAS, AUTONOMOUS, REDUCED, Context, RationalFunction, parse

NORMALIZATION_WEIGHTS = (1, 1, 2, 1, 1)


@dataclass(frozen=True)
class ParameterVector:
    """The five parameters alpha0..alpha4.

    Values are either all exact (``Fraction``) or all ``float``. With
    ``normalized=True`` the construction checks
    alpha0 + alpha1 + 2 alpha2 + alpha3 + alpha4 = 1 (exactly, or to 1e-12).
    """

    values: tuple
    normalized: bool = True

    def __post_init__(self):
        vals = tuple(self.values)
        if len(vals) != 5:
            raise ValueError(f"expected five parameters, got {len(vals)}")
        if all(isinstance(v, (int, Fraction)) for v in vals):
            vals = tuple(Fraction(v) for v in vals)
        else:
            vals = tuple(float(v) for v in vals)
        object.__setattr__(self, "values", vals)
        if self.normalized and not self.satisfies_normalization():
            raise ValueError(
                f"parameters {self} violate a0+a1+2a2+a3+a4 = 1 (sum {self.weighted_sum()})")

    @classmethod
    def symmetric(cls):
        """The point alpha_i = 1/6 for all i."""
        return cls((Fraction(1, 6),) * 5)

    @property
    def exact(self) -> bool:
        return isinstance(self.values[0], Fraction)

    def weighted_sum(self):
        return sum(w * v for w, v in zip(NORMALIZATION_WEIGHTS, self.values))

    def satisfies_normalization(self) -> bool:
        s = self.weighted_sum()
        return s == 1 if self.exact else abs(s - 1.0) <= 1e-12

    def as_floats(self):
        return tuple(float(v) for v in self.values)

    def as_dict(self):
        return dict(zip(ALPHAS, self.values))

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def __str__(self):
        return "(" + ", ".join(str(v) for v in self.values) + ")"


@dataclass(frozen=True)
class SystemDefinition:
    name: str
    context: Context
    phase_vars: tuple
    time_var: str
    components: tuple
    autonomous: bool
    kernel_id: int = field(default=-1, compare=False)

    def component(self, var: str) -> RationalFunction:
        return self.components[self.phase_vars.index(var)]

    def field_map(self):
        return dict(zip(self.phase_vars, self.components))

    @property
    def dimension(self):
        return len(self.phase_vars)


@dataclass(frozen=True)
class Hamiltonian:
    H: RationalFunction

    @property
    def context(self):
        return self.H.context


# Transcriptions of the two vector fields, one string per phase variable.
_AUTONOMOUS_FIELD = {
    "f0": "-(2*f1*g1 + alpha1)*f0 - alpha0*f1",
    "f1": "-(2*f0*g1 + alpha0)*f1 - alpha1*f0",
    "f2": "((f0 + f1)*g1 + (f3 + f4)*g2 + 1)*f2 - 2*alpha2*g1*g2",
    "f3": "-(2*f4*g2 + alpha4)*f3 - alpha3*f4",
    "f4": "-(2*f3*g2 + alpha3)*f4 - alpha4*f3",
    "g1": "(f0 + f1)*g1^2 - ((f3 + f4)*g2 - alpha0 - alpha1)*g1 + (f3 + f4)*f2",
    "g2": "(f3 + f4)*g2^2 - ((f0 + f1)*g1 - alpha3 - alpha4)*g2 + (f0 + f1)*f2",
}

_PIII_FIELD = {
    "x": "(2*x^2*y - x^2 + (alpha0 + alpha1)*x)/T - 1 + 2*w",
    "y": "(-2*x*y^2 + 2*x*y - (alpha0 + alpha1)*y + alpha1)/T",
    "z": "(2*z^2*w - z^2 + (alpha3 + alpha4)*z)/T - 1 + 2*y",
    "w": "(-2*z*w^2 + 2*z*w - (alpha3 + alpha4)*w + alpha4)/T",
}

_HAMILTONIAN = (
    "(x^2*y^2 - x^2*y + (alpha0 + alpha1)*x*y - alpha1*x)/T - y"
    " + (z^2*w^2 - z^2*w + (alpha3 + alpha4)*z*w - alpha4*z)/T - w + 2*y*w"
)


@lru_cache(maxsize=None)
def build_autonomous_system() -> SystemDefinition:
    phase = tuple(_AUTONOMOUS_FIELD)
    comps = tuple(parse(_AUTONOMOUS_FIELD[v], AUTONOMOUS) for v in phase)
    return SystemDefinition("autonomous", AUTONOMOUS, phase, "t", comps, True,
                            kernel_id=kernels.AUTONOMOUS)


@lru_cache(maxsize=None)
def build_piii_system() -> SystemDefinition:
    phase = tuple(_PIII_FIELD)
    comps = tuple(parse(_PIII_FIELD[v], REDUCED) for v in phase)
    return SystemDefinition("piii", REDUCED, phase, "T", comps, False,
                            kernel_id=kernels.PIII)


@lru_cache(maxsize=None)
def build_hamiltonian() -> Hamiltonian:
    return Hamiltonian(parse(_HAMILTONIAN, REDUCED))


def build_system(name: str) -> SystemDefinition:
    if name == "autonomous":
        return build_autonomous_system()
    if name == "piii":
        return build_piii_system()
    raise ValueError(f"unknown system {name!r} (expected 'autonomous' or 'piii')")


def eval_field(sys: SystemDefinition, state: Sequence[float], time: float,
               alpha: ParameterVector | Sequence[float]) -> list:
    """Binary64 vector field through the selected numeric kernel."""
    a = [float(v) for v in alpha]
    y = [float(v) for v in state]
    if len(y) != sys.dimension:
        raise ValueError(f"{sys.name} expects {sys.dimension} state components, got {len(y)}")
    if sys.kernel_id == kernels.PIII:
        if time == 0:
            raise SingularEvaluation("piii vector field is singular at T = 0")
        return list(kernels.field_piii(y, float(time), a))
    if sys.kernel_id == kernels.AUTONOMOUS:
        return list(kernels.field_autonomous(y, a))
    return eval_field_generic(sys, y, time, a)


def eval_field_generic(sys: SystemDefinition, state, time, alpha) -> list:
    """Float evaluation straight from the symbolic components (slow path)."""
    point = dict(zip(sys.phase_vars, state))
    point[sys.time_var] = float(time)
    point.update(zip(ALPHAS, alpha))
    out = []
    for comp in sys.components:
        try:
            out.append(comp.evaluate_float(point))
        except ZeroDivisionError:
            raise SingularEvaluation(f"{sys.name} field singular at {sys.time_var}={time}")
    if not all(math.isfinite(v) for v in out):
        raise SingularEvaluation(f"{sys.name} field not finite at the given point")
    return out
