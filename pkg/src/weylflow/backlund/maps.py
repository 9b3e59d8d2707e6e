"""Birational maps with affine parameter action: the generators s0..s4, pi1..pi3."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

from ..errors import DegenerateComposition, DivisionByZero, ParseError, PoleHit
from ..model import NORMALIZATION_WEIGHTS, ParameterVector
from ..ratcalc import (ALPHAS, AUTONOMOUS, REDUCED, RationalFunction,
                       constraint_residual, parse)

VARIANTS = {
    "autonomous": (AUTONOMOUS, ("f0", "f1", "f2", "f3", "f4", "g1", "g2"), "t"),
    "reduced": (REDUCED, ("x", "y", "z", "w"), "T"),
}

GENERATORS = ("s0", "s1", "s2", "s3", "s4", "pi1", "pi2", "pi3")

# name -> (phase images, parameter images, time sign); unlisted variables are fixed.
_AUTONOMOUS_S = {
    0: ({"f2": "f2 + alpha0*g2/f0", "g1": "g1 + alpha0/f0"},
        ("-alpha0", "alpha1", "alpha2 + alpha0", "alpha3", "alpha4")),
    1: ({"f2": "f2 + alpha1*g2/f1", "g1": "g1 + alpha1/f1"},
        ("alpha0", "-alpha1", "alpha2 + alpha1", "alpha3", "alpha4")),
    2: ({"f0": "f0 - alpha2*g2/f2", "f1": "f1 - alpha2*g2/f2",
         "f3": "f3 - alpha2*g1/f2", "f4": "f4 - alpha2*g1/f2"},
        ("alpha0 + alpha2", "alpha1 + alpha2", "-alpha2", "alpha3 + alpha2",
         "alpha4 + alpha2")),
    3: ({"f2": "f2 + alpha3*g1/f3", "g2": "g2 + alpha3/f3"},
        ("alpha0", "alpha1", "alpha2 + alpha3", "-alpha3", "alpha4")),
    4: ({"f2": "f2 + alpha4*g1/f4", "g2": "g2 + alpha4/f4"},
        ("alpha0", "alpha1", "alpha2 + alpha4", "alpha3", "-alpha4")),
}

_REDUCED_S = {
    0: ({"x": "x + alpha0/(y - 1)"},
        ("-alpha0", "alpha1", "alpha2 + alpha0", "alpha3", "alpha4")),
    1: ({"x": "x + alpha1/y"},
        ("alpha0", "-alpha1", "alpha2 + alpha1", "alpha3", "alpha4")),
    2: ({"y": "y - alpha2*z/(x*z + T)", "w": "w - alpha2*x/(x*z + T)"},
        ("alpha0 + alpha2", "alpha1 + alpha2", "-alpha2", "alpha3 + alpha2",
         "alpha4 + alpha2")),
    3: ({"z": "z + alpha3/(w - 1)"},
        ("alpha0", "alpha1", "alpha2 + alpha3", "-alpha3", "alpha4")),
    4: ({"z": "z + alpha4/w"},
        ("alpha0", "alpha1", "alpha2 + alpha4", "alpha3", "-alpha4")),
}

_REDUCED_PI = {
    1: ({"x": "-x", "y": "1 - y"},
        ("alpha1", "alpha0", "alpha2", "alpha3", "alpha4"), -1),
    2: ({"z": "-z", "w": "1 - w"},
        ("alpha0", "alpha1", "alpha2", "alpha4", "alpha3"), -1),
    3: ({"x": "z", "y": "w", "z": "x", "w": "y"},
        ("alpha3", "alpha4", "alpha2", "alpha0", "alpha1"), 1),
}


def _affine_from_exprs(exprs, ctx):
    """Read ``alpha -> M alpha + b`` off five expressions linear in the alphas."""
    idx = [ctx.index(a) for a in ALPHAS]
    M, b = [], []
    for text in exprs:
        rf = parse(text, ctx) if isinstance(text, str) else text
        if not rf.is_polynomial():
            raise ValueError(f"parameter action {rf} is not affine")
        p = rf.numerator
        row = [Fraction(0)] * 5
        shift = Fraction(0)
        for e, c in p.terms.items():
            deg = sum(e)
            if deg == 0:
                shift = c
                continue
            hit = [k for k, i in enumerate(idx) if e[i]]
            if deg != 1 or len(hit) != 1:
                raise ValueError(f"parameter action {rf} is not affine in the alphas")
            row[hit[0]] = c
        M.append(tuple(row))
        b.append(shift)
    return tuple(M), tuple(b)


@dataclass(frozen=True)
class RationalMap:
    """A map on phase variables, parameters and time.

    ``images[k]`` is the image of ``phase_vars[k]``; parameters transform as
    ``alpha -> param_matrix @ alpha + param_shift``; time as
    ``time -> time_sign * time``.
    """

    name: str
    variant: str
    images: tuple
    param_matrix: tuple
    param_shift: tuple
    time_sign: int = 1

    @property
    def context(self):
        return VARIANTS[self.variant][0]

    @property
    def phase_vars(self):
        return VARIANTS[self.variant][1]

    @property
    def time_var(self):
        return VARIANTS[self.variant][2]

    @classmethod
    def from_strings(cls, name, variant, images: Mapping[str, str],
                     params: Sequence[str] = ALPHAS, time_sign=1):
        ctx, phase, _ = VARIANTS[variant]
        imgs = []
        for v in phase:
            text = images.get(v, v)
            imgs.append(parse(text, ctx) if isinstance(text, str) else text)
        M, b = _affine_from_exprs(params, ctx)
        return cls(name, variant, tuple(imgs), M, b, time_sign)

    @classmethod
    def identity(cls, variant):
        return cls.from_strings("id", variant, {})

    def image(self, var):
        return self.images[self.phase_vars.index(var)]

    def param_images(self):
        ctx = self.context
        alphas = [RationalFunction.var(ctx, a) for a in ALPHAS]
        out = {}
        for k, a in enumerate(ALPHAS):
            expr = RationalFunction.constant(ctx, self.param_shift[k])
            for j in range(5):
                if self.param_matrix[k][j]:
                    expr = expr + alphas[j] * self.param_matrix[k][j]
            out[a] = expr
        return out

    def bindings(self):
        """Substitution realizing the map on every symbol of the context."""
        out = dict(zip(self.phase_vars, self.images))
        out.update(self.param_images())
        if self.time_sign != 1:
            out[self.time_var] = RationalFunction.var(self.context, self.time_var) * self.time_sign
        return out

    def apply_params(self, alpha):
        vals = list(alpha)
        exact = all(isinstance(v, (int, Fraction)) for v in vals)
        if not exact:
            vals = [float(v) for v in vals]
        out = []
        for k in range(5):
            acc = self.param_shift[k] if exact else float(self.param_shift[k])
            for j in range(5):
                m = self.param_matrix[k][j]
                if m:
                    acc = acc + (m if exact else float(m)) * vals[j]
            out.append(acc)
        return out

    def is_identity(self) -> bool:
        ctx = self.context
        eye = tuple(tuple(Fraction(int(i == j)) for j in range(5)) for i in range(5))
        return (self.time_sign == 1
                and self.param_matrix == eye
                and all(s == 0 for s in self.param_shift)
                and all(img == RationalFunction.var(ctx, v)
                        for v, img in zip(self.phase_vars, self.images)))

    def preserves_normalization(self) -> bool:
        """Weighted parameter sum is invariant, modulo the normalization itself."""
        ctx = self.context
        pimg = self.param_images()
        before = sum((RationalFunction.var(ctx, a) * w
                      for a, w in zip(ALPHAS, NORMALIZATION_WEIGHTS)),
                     RationalFunction.constant(ctx, 0))
        after = sum((pimg[a] * w for a, w in zip(ALPHAS, NORMALIZATION_WEIGHTS)),
                    RationalFunction.constant(ctx, 0))
        return constraint_residual(after, before).is_zero()

    def with_image(self, var, image, name=None):
        imgs = list(self.images)
        imgs[self.phase_vars.index(var)] = image
        return RationalMap(name or self.name, self.variant, tuple(imgs), self.param_matrix,
                           self.param_shift, self.time_sign)

    def __str__(self):
        parts = [f"{v} -> {img}" for v, img in zip(self.phase_vars, self.images)]
        return f"{self.name}: " + ", ".join(parts)


@lru_cache(maxsize=None)
def build_s(i: int, variant: str = "reduced") -> RationalMap:
    table = {"autonomous": _AUTONOMOUS_S, "reduced": _REDUCED_S}[variant]
    if i not in table:
        raise ValueError(f"no generator s{i}")
    images, params = table[i]
    return RationalMap.from_strings(f"s{i}", variant, images, params)


@lru_cache(maxsize=None)
def build_pi(j: int) -> RationalMap:
    if j not in _REDUCED_PI:
        raise ValueError(f"no generator pi{j}")
    images, params, sign = _REDUCED_PI[j]
    return RationalMap.from_strings(f"pi{j}", "reduced", images, params, sign)


def generator(name: str, variant: str = "reduced") -> RationalMap:
    if name.startswith("pi") and name[2:].isdigit():
        if variant != "reduced":
            raise ParseError(f"{name} exists only for the reduced system")
        return build_pi(int(name[2:]))
    if name.startswith("s") and name[1:].isdigit():
        return build_s(int(name[1:]), variant)
    raise ParseError(f"unknown generator {name!r} (expected one of {', '.join(GENERATORS)})")


def parse_word(word) -> list:
    """Whitespace-separated generator names; ``id`` and empty tokens are dropped."""
    tokens = word.split() if isinstance(word, str) else list(word)
    for tok in tokens:
        if tok not in GENERATORS:
            raise ParseError(f"unknown generator {tok!r} in word (allowed: {', '.join(GENERATORS)})")
    return tokens


def compose(a: RationalMap, b: RationalMap) -> RationalMap:
    """``a`` after ``b``."""
    if a.variant != b.variant:
        raise ValueError(f"cannot compose {a.variant} and {b.variant} maps")
    binds = b.bindings()
    try:
        images = tuple(img.substitute(binds) for img in a.images)
    except DivisionByZero as exc:
        raise DegenerateComposition(f"{a.name} after {b.name}: {exc}") from None
    Ma, Mb = a.param_matrix, b.param_matrix
    M = tuple(tuple(sum(Ma[i][k] * Mb[k][j] for k in range(5)) for j in range(5))
              for i in range(5))
    shift = tuple(sum(Ma[i][k] * b.param_shift[k] for k in range(5)) + a.param_shift[i]
                  for i in range(5))
    return RationalMap(f"{a.name} {b.name}", a.variant, images, M, shift,
                       a.time_sign * b.time_sign)


def compose_word(word, variant="reduced") -> RationalMap:
    names = parse_word(word)
    if not names:
        return RationalMap.identity(variant)
    result = generator(names[-1], variant)
    for name in reversed(names[:-1]):
        result = compose(generator(name, variant), result)
    return result


def compose_params(word, variant="reduced"):
    """Affine parameter action ``(M, b)`` of a word, without touching the images."""
    names = parse_word(word)
    M = [[Fraction(int(i == j)) for j in range(5)] for i in range(5)]
    b = [Fraction(0)] * 5
    for name in reversed(names):
        g = generator(name, variant)
        M = [[sum(g.param_matrix[i][k] * M[k][j] for k in range(5)) for j in range(5)]
             for i in range(5)]
        b = [sum(g.param_matrix[i][k] * b[k] for k in range(5)) + g.param_shift[i]
             for i in range(5)]
    return tuple(tuple(r) for r in M), tuple(b)


# -- pointwise application --------------------------------------------------

POLE_RTOL = 1e-10


def _is_exact(v):
    return isinstance(v, (int, Fraction))


def apply_map_point(m: RationalMap, state, alpha, time):
    """Image ``(state', alpha', time')`` of one point.

    Exact inputs (ints/Fractions) give exact outputs. A vanishing image
    denominator raises :class:`PoleHit`; for exact points the image is first
    specialized at the given parameters and time so that removable
    singularities (e.g. ``alpha_i = 0``) do not count as poles.
    """
    state = list(state)
    alpha_vals = list(alpha.values if isinstance(alpha, ParameterVector) else alpha)
    if len(state) != len(m.phase_vars):
        raise ValueError(f"{m.name} expects {len(m.phase_vars)} coordinates")
    exact = all(_is_exact(v) for v in state + alpha_vals + [time])
    point = dict(zip(m.phase_vars, state))
    point.update(zip(ALPHAS, alpha_vals))
    point[m.time_var] = time
    out = []
    if exact:
        spec = None
        for var, img in zip(m.phase_vars, m.images):
            try:
                out.append(img.evaluate(point))
                continue
            except DivisionByZero:
                pass
            if spec is None:
                spec = {a: Fraction(v) for a, v in zip(ALPHAS, alpha_vals)}
                spec[m.time_var] = Fraction(time)
            reduced = img.substitute(spec)
            try:
                out.append(reduced.evaluate(point))
            except DivisionByZero:
                raise PoleHit(m.name, var, str(img.denominator)) from None
        new_alpha = m.apply_params([Fraction(v) for v in alpha_vals])
        return out, new_alpha, m.time_sign * time
    fpoint = {k: float(v) for k, v in point.items()}
    scale = max([1.0] + [abs(float(v)) for v in state] + [abs(float(time))])
    vec = [fpoint.get(s, 0.0) for s in m.context.names]
    for var, img in zip(m.phase_vars, m.images):
        den = img.denominator.evaluate_float(vec)
        if abs(den) < POLE_RTOL * scale:
            raise PoleHit(m.name, var, str(img.denominator))
        num = img.numerator.evaluate_float(vec)
        out.append(num / den)
    return out, m.apply_params([float(v) for v in alpha_vals]), m.time_sign * float(time)


def apply_word_point(word, state, alpha, time, variant="reduced"):
    """Apply generators right to left, one at a time."""
    for name in reversed(parse_word(word)):
        state, alpha, time = apply_map_point(generator(name, variant), state, alpha, time)
    return state, alpha, time
