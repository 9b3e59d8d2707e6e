"""Canonical exact multivariate rational functions.

A :class:`RationalFunction` is stored as ``scalar * N / D`` with ``N`` and
``D`` integer-primitive polynomials sharing no nonconstant factor, ``D``
with positive grlex leading coefficient and ``scalar`` a rational. The
public numerator and denominator are rescaled so that the denominator's
leading coefficient is 1, which makes the representation unique: two
rational functions are equal exactly when their stored data match.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from ..errors import ContextMismatch, DivisionByZero
from . import intpoly
from .polynomial import ALPHAS, Context, Polynomial, _as_fraction


def _primitive_with_sign(raw):
    """Split ``raw`` into ``(c, p)`` with ``p`` primitive and positive leading coefficient."""
    c = intpoly.content(raw)
    if raw[intpoly.leading_exp(raw)] < 0:
        c = -c
    return c, (raw if c == 1 else intpoly.divexact_int(raw, c))


class RationalFunction:
    __slots__ = ("context", "_s", "_n", "_d", "_num", "_den", "_hash")

    def __init__(self, *args, **kwargs):
        raise TypeError("use RationalFunction.from_polynomials / constant / var or parse()")

    @classmethod
    def _raw(cls, context, scalar, n, d, reduced):
        """Build from integer polys ``scalar * n / d``; ``reduced`` skips the gcd."""
        if not d:
            raise DivisionByZero("rational function with zero denominator")
        self = object.__new__(cls)
        object.__setattr__(self, "context", context)
        object.__setattr__(self, "_num", None)
        object.__setattr__(self, "_den", None)
        object.__setattr__(self, "_hash", None)
        if not n or not scalar:
            object.__setattr__(self, "_s", Fraction(0))
            object.__setattr__(self, "_n", {})
            object.__setattr__(self, "_d", intpoly.const(len(context), 1))
            return self
        if not reduced and not intpoly.is_constant(d):
            g = intpoly.gcd(n, d)
            if not intpoly.is_constant(g):
                n = intpoly.divexact(n, g)
                d = intpoly.divexact(d, g)
        cd, d = _primitive_with_sign(d)
        cn, n = _primitive_with_sign(n)
        object.__setattr__(self, "_s", Fraction(scalar) * Fraction(cn, cd))
        object.__setattr__(self, "_n", n)
        object.__setattr__(self, "_d", d)
        return self

    def __setattr__(self, key, value):
        raise AttributeError("RationalFunction is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_polynomials(cls, num: Polynomial, den: Polynomial | None = None):
        ctx = num.context
        if den is None:
            den = Polynomial.constant(ctx, 1)
        if den.context != ctx:
            raise ContextMismatch(f"{ctx!r} vs {den.context!r}")
        if den.is_zero():
            raise DivisionByZero("rational function with zero denominator")
        n, dn = num.to_int()
        d, dd = den.to_int()
        return cls._raw(ctx, Fraction(dd, dn), n, d, reduced=False)

    @classmethod
    def constant(cls, context: Context, c):
        c = _as_fraction(c)
        one = intpoly.const(len(context), 1)
        return cls._raw(context, c, one, one, reduced=True)

    @classmethod
    def var(cls, context: Context, symbol: str):
        return cls.from_polynomials(Polynomial.var(context, symbol))

    # -- canonical parts ---------------------------------------------------

    @property
    def numerator(self) -> Polynomial:
        if self._num is None:
            lc = self._d[intpoly.leading_exp(self._d)]
            f = self._s / lc
            object.__setattr__(self, "_num", Polynomial(
                self.context, {e: c * f for e, c in self._n.items()}, _trusted=True))
        return self._num

    @property
    def denominator(self) -> Polynomial:
        if self._den is None:
            lc = self._d[intpoly.leading_exp(self._d)]
            object.__setattr__(self, "_den", Polynomial(
                self.context, {e: Fraction(c, lc) for e, c in self._d.items()},
                _trusted=True))
        return self._den

    num = numerator
    den = denominator

    def is_zero(self):
        return not self._n

    def is_polynomial(self):
        return intpoly.is_constant(self._d)

    def is_constant(self):
        return not self._n or (intpoly.is_constant(self._n) and intpoly.is_constant(self._d))

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self._s if self._n else Fraction(0)

    def free_symbols(self):
        vs = intpoly.variables(self._n) | intpoly.variables(self._d)
        return {self.context.names[i] for i in vs}

    def as_polynomial(self) -> Polynomial:
        if not self.is_polynomial():
            raise ValueError(f"{self} is not a polynomial")
        return self.numerator

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            if other.context != self.context:
                raise ContextMismatch(f"{self.context!r} vs {other.context!r}")
            return other
        if isinstance(other, Polynomial):
            if other.context != self.context:
                raise ContextMismatch(f"{self.context!r} vs {other.context!r}")
            return RationalFunction.from_polynomials(other)
        if isinstance(other, (int, Fraction)):
            return RationalFunction.constant(self.context, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other._n:
            return self
        if not self._n:
            return other
        sa, sb = self._s, other._s
        pa, qa = sa.numerator, sa.denominator
        pb, qb = sb.numerator, sb.denominator
        da, db = self._d, other._d
        g = intpoly.gcd(da, db)
        ctx = self.context
        if intpoly.is_constant(g):
            n = intpoly.add(intpoly.scale(intpoly.mul(self._n, db), pa * qb),
                            intpoly.scale(intpoly.mul(other._n, da), pb * qa))
            return RationalFunction._raw(ctx, Fraction(1, qa * qb), n,
                                         intpoly.mul(da, db), reduced=True)
        da1 = intpoly.divexact(da, g)
        db1 = intpoly.divexact(db, g)
        n = intpoly.add(intpoly.scale(intpoly.mul(self._n, db1), pa * qb),
                        intpoly.scale(intpoly.mul(other._n, da1), pb * qa))
        if not n:
            return RationalFunction.constant(ctx, 0)
        g2 = intpoly.gcd(n, g)
        if not intpoly.is_constant(g2):
            n = intpoly.divexact(n, g2)
            g = intpoly.divexact(g, g2)
        d = intpoly.mul(intpoly.mul(da1, db1), g)
        return RationalFunction._raw(ctx, Fraction(1, qa * qb), n, d, reduced=True)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction._raw(self.context, -self._s, self._n, self._d, reduced=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        ctx = self.context
        if not self._n or not other._n:
            return RationalFunction.constant(ctx, 0)
        na, da, nb, db = self._n, self._d, other._n, other._d
        g1 = intpoly.gcd(na, db)
        g2 = intpoly.gcd(nb, da)
        if not intpoly.is_constant(g1):
            na, db = intpoly.divexact(na, g1), intpoly.divexact(db, g1)
        if not intpoly.is_constant(g2):
            nb, da = intpoly.divexact(nb, g2), intpoly.divexact(da, g2)
        return RationalFunction._raw(ctx, self._s * other._s, intpoly.mul(na, nb),
                                     intpoly.mul(da, db), reduced=True)

    __rmul__ = __mul__

    def inverse(self):
        if not self._n:
            raise DivisionByZero(f"inverse of zero in {self.context!r}")
        return RationalFunction._raw(self.context, 1 / self._s, self._d, self._n,
                                     reduced=True)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k):
        if not isinstance(k, int):
            raise ValueError("rational function powers must be integers")
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            return RationalFunction.constant(self.context, 1)
        return RationalFunction._raw(self.context, self._s ** k, intpoly.power(self._n, k),
                                     intpoly.power(self._d, k), reduced=True)

    # -- calculus / substitution -------------------------------------------

    def diff(self, symbol: str) -> "RationalFunction":
        i = self.context.index(symbol)
        n, d = self._n, self._d

        def pdiff(p):
            out = {}
            for e, c in p.items():
                k = e[i]
                if k:
                    out[e[:i] + (k - 1,) + e[i + 1:]] = c * k
            return out

        dd = pdiff(d)
        if not dd:
            return RationalFunction._raw(self.context, self._s, pdiff(n), d, reduced=False)
        top = intpoly.sub(intpoly.mul(pdiff(n), d), intpoly.mul(n, dd))
        return RationalFunction._raw(self.context, self._s, top, intpoly.mul(d, d),
                                     reduced=False)

    def substitute(self, bindings: Mapping[str, object],
                   target: Context | None = None) -> "RationalFunction":
        """Simultaneous substitution ``symbol -> image``.

        Images may be rational functions, polynomials or rational numbers.
        When ``target`` is omitted it is taken from the images (or ``self``).
        Unbound symbols are carried over by name into the target context.
        """
        src = self.context
        images = {}
        for sym, img in bindings.items():
            images[src.index(sym)] = img
        if target is None:
            ctxs = {img.context for img in images.values()
                    if isinstance(img, (RationalFunction, Polynomial))}
            if len(ctxs) > 1:
                raise ContextMismatch(f"substitution images span contexts {ctxs}")
            target = ctxs.pop() if ctxs else src
        m = len(target)
        bound = {}
        for i, img in images.items():
            if isinstance(img, Polynomial):
                img = RationalFunction.from_polynomials(img)
            elif not isinstance(img, RationalFunction):
                img = RationalFunction.constant(target, img)
            if img.context != target:
                raise ContextMismatch(f"image for {src.names[i]} lives in {img.context!r}")
            # identity bindings behave like unbound symbols
            if src == target and img.is_polynomial() and img._s == 1 and \
                    img._n == _unit(m, i):
                continue
            s = img._s
            bound[i] = (intpoly.scale(img._n, s.numerator) if img._n else {},
                        intpoly.scale(img._d, s.denominator))
        carry = {}
        for i, name in enumerate(src.names):
            if i not in bound:
                carry[i] = target.index(name) if name in target else None
        used = intpoly.variables(self._n) | intpoly.variables(self._d)
        for i in used:
            if i not in bound and carry[i] is None:
                raise ContextMismatch(f"unbound symbol {src.names[i]!r} missing from {target!r}")

        def degs(p):
            out = {}
            for i in bound:
                out[i] = max((e[i] for e in p), default=0)
            return out

        dn, dd = degs(self._n), degs(self._d)
        tops = {i: max(dn[i], dd[i]) for i in bound}
        pn = _homogeneous_sub(self._n, bound, carry, dn, m)
        pd = _homogeneous_sub(self._d, bound, carry, dd, m)
        for i, (_, den_i) in bound.items():
            if tops[i] - dn[i]:
                pn = intpoly.mul(pn, intpoly.power(den_i, tops[i] - dn[i]))
            if tops[i] - dd[i]:
                pd = intpoly.mul(pd, intpoly.power(den_i, tops[i] - dd[i]))
        if not pd:
            raise DivisionByZero(f"substitution makes the denominator of {self} vanish")
        return RationalFunction._raw(target, self._s, pn, pd, reduced=False)

    # -- evaluation --------------------------------------------------------

    def _point_vector(self, point: Mapping[str, object]):
        vals = [None] * len(self.context)
        for sym, v in point.items():
            if sym in self.context or sym in _alias_keys:
                vals[self.context.index(sym)] = v
        used = intpoly.variables(self._n) | intpoly.variables(self._d)
        for i in used:
            if vals[i] is None:
                raise ContextMismatch(f"no value bound for {self.context.names[i]!r}")
        return vals

    def evaluate(self, point: Mapping[str, object]) -> Fraction:
        """Exact value at a rational point; raises :class:`DivisionByZero` on a pole."""
        vals = [None if v is None else _as_fraction(v) for v in self._point_vector(point)]
        d = _eval_raw(self._d, vals)
        if d == 0:
            raise DivisionByZero(f"{self} has a pole at the given point")
        if not self._n:
            return Fraction(0)
        return self._s * Fraction(_eval_raw(self._n, vals)) / d

    def evaluate_float(self, point: Mapping[str, float]) -> float:
        vals = [None if v is None else float(v) for v in self._point_vector(point)]
        d = _eval_float_raw(self._d, vals)
        if d == 0.0:
            raise DivisionByZero(f"{self} has a pole at the given point")
        return float(self._s) * _eval_float_raw(self._n, vals) / d

    # -- equality ----------------------------------------------------------

    def _key(self):
        return (self._s, frozenset(self._n.items()), frozenset(self._d.items()))

    def __eq__(self, other):
        if isinstance(other, RationalFunction):
            return (self.context == other.context and self._s == other._s
                    and self._n == other._n and self._d == other._d)
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        if isinstance(other, Polynomial):
            return self == RationalFunction.from_polynomials(other)
        return NotImplemented

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.context, self._key()))
            object.__setattr__(self, "_hash", h)
        return h

    def __str__(self):
        from .serialize import format_rational
        return format_rational(self)

    def __repr__(self):
        return f"RationalFunction({self})"

    def __reduce__(self):
        return (_rebuild, (self.context.names, self.context.name, self._s, self._n, self._d))


def _rebuild(names, name, s, n, d):
    return RationalFunction._raw(Context(names, name), s, n, d, reduced=True)


_alias_keys = {f"α{i}" for i in range(5)} | {f"a{i}" for i in range(5)}


def _unit(m, i):
    e = [0] * m
    e[i] = 1
    return {tuple(e): 1}


def _eval_raw(p, vals):
    total = 0
    for e, c in p.items():
        term = c
        for i, k in enumerate(e):
            if k:
                term = term * vals[i] ** k
        total += term
    return total


def _eval_float_raw(p, vals):
    total = 0.0
    for e, c in p.items():
        term = float(c)
        for i, k in enumerate(e):
            if k:
                term *= vals[i] ** k
        total += term
    return total


def _homogeneous_sub(p, bound, carry, degs, m):
    """Sum of c_e * prod num_i^e_i den_i^(D_i - e_i) * carried monomials."""
    out = {}
    cache = {}
    zero_e = (0,) * m
    for e, c in p.items():
        term = {zero_e: c}
        mono = [0] * m
        for i, k in enumerate(e):
            if i in bound:
                key = (i, k)
                f = cache.get(key)
                if f is None:
                    num_i, den_i = bound[i]
                    if k and not num_i:
                        f = {}
                    else:
                        f = intpoly.mul(intpoly.power(num_i, k) if k else intpoly.const(m, 1),
                                        intpoly.power(den_i, degs[i] - k))
                    cache[key] = f
                if not f:
                    term = {}
                    break
                term = intpoly.mul(term, f)
            elif k:
                mono[carry[i]] += k
        if not term:
            continue
        if any(mono):
            term = intpoly.mul_monomial(term, tuple(mono))
        out = intpoly.add(out, term)
    return out


# -- functional surface -----------------------------------------------------

def rf_arith(op: str, a: RationalFunction, b: RationalFunction) -> RationalFunction:
    if a.context != b.context:
        raise ContextMismatch(f"{a.context!r} vs {b.context!r}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def rf_substitute(expr, bindings, target=None):
    return expr.substitute(bindings, target)


def rf_diff(expr, var):
    return expr.diff(var)


def rf_eval_exact(expr, point):
    return expr.evaluate(point)


def constraint_image(ctx: Context) -> RationalFunction:
    """alpha4 expressed through the normalization a0+a1+2a2+a3+a4 = 1."""
    a = [RationalFunction.var(ctx, s) for s in ALPHAS[:4]]
    return 1 - a[0] - a[1] - 2 * a[2] - a[3]


def constraint_residual(a: RationalFunction, b: RationalFunction, plain: bool = False):
    """Numerator of ``a - b``, reduced modulo the normalization unless ``plain``."""
    if a.context != b.context:
        raise ContextMismatch(f"{a.context!r} vs {b.context!r}")
    diff = a - b
    if diff.is_zero() or plain or "alpha4" not in a.context:
        return diff.numerator
    num = RationalFunction.from_polynomials(diff.numerator)
    return num.substitute({"alpha4": constraint_image(a.context)}).numerator


def rf_equals_mod_constraint(a: RationalFunction, b: RationalFunction,
                             plain: bool = False) -> bool:
    return constraint_residual(a, b, plain).is_zero()
