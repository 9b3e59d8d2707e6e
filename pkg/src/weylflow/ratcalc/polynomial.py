"""Variable contexts and sparse polynomials with exact rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from types import MappingProxyType
from typing import Iterable, Mapping

from ..errors import ContextMismatch, DivisionByZero
from . import intpoly

ALPHAS = ("alpha0", "alpha1", "alpha2", "alpha3", "alpha4")

# Accepted spellings for parameter symbols in parsed input.
SYMBOL_ALIASES = {
    **{f"α{i}": f"alpha{i}" for i in range(5)},
    **{f"a{i}": f"alpha{i}" for i in range(5)},
}


class Context:
    """An ordered, immutable tuple of symbol names.

    Two contexts compare equal when their names agree in order.
    """

    __slots__ = ("names", "_index", "name")

    def __init__(self, names: Iterable[str], name: str = ""):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate symbol names in {names}")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(names)})
        object.__setattr__(self, "name", name)

    def __setattr__(self, key, value):
        raise AttributeError("Context is immutable")

    def __len__(self):
        return len(self.names)

    def __contains__(self, symbol):
        return symbol in self._index

    def __iter__(self):
        return iter(self.names)

    def __eq__(self, other):
        return isinstance(other, Context) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        label = f"{self.name}: " if self.name else ""
        return f"Context({label}{', '.join(self.names)})"

    def __reduce__(self):
        return (Context, (self.names, self.name))

    def index(self, symbol: str) -> int:
        symbol = SYMBOL_ALIASES.get(symbol, symbol)
        try:
            return self._index[symbol]
        except KeyError:
            raise ContextMismatch(f"symbol {symbol!r} not in {self!r}") from None

    def resolve(self, symbol: str) -> str:
        return self.names[self.index(symbol)]


AUTONOMOUS = Context(("f0", "f1", "f2", "f3", "f4", "g1", "g2", "t") + ALPHAS,
                     name="autonomous")
REDUCED = Context(("x", "y", "z", "w", "T") + ALPHAS, name="reduced")


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, float):
        raise TypeError("floating point coefficients are not allowed in exact arithmetic")
    return Fraction(c)


class Polynomial:
    """Sparse polynomial over Q in the variables of a :class:`Context`.

    ``terms`` maps exponent vectors (tuples of length ``len(context)``) to
    nonzero :class:`~fractions.Fraction` coefficients.
    """

    __slots__ = ("context", "_terms", "_hash")

    def __init__(self, context: Context, terms: Mapping[tuple, Fraction] | None = None,
                 *, _trusted: bool = False):
        if _trusted:
            clean = terms
        else:
            n = len(context)
            clean = {}
            for e, c in (terms or {}).items():
                e = tuple(int(k) for k in e)
                if len(e) != n or min(e, default=0) < 0:
                    raise ValueError(f"bad exponent vector {e} for {context!r}")
                c = _as_fraction(c)
                if c:
                    clean[e] = clean.get(e, 0) + c
                    if not clean[e]:
                        del clean[e]
        object.__setattr__(self, "context", context)
        object.__setattr__(self, "_terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, key, value):
        raise AttributeError("Polynomial is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, context):
        return cls(context, {}, _trusted=True)

    @classmethod
    def constant(cls, context, c):
        c = _as_fraction(c)
        return cls(context, {(0,) * len(context): c} if c else {}, _trusted=True)

    @classmethod
    def var(cls, context, symbol):
        i = context.index(symbol)
        e = [0] * len(context)
        e[i] = 1
        return cls(context, {tuple(e): Fraction(1)}, _trusted=True)

    @classmethod
    def from_int(cls, context, raw, denominator=1):
        if denominator == 1:
            return cls(context, {e: Fraction(c) for e, c in raw.items()}, _trusted=True)
        return cls(context, {e: Fraction(c, denominator) for e, c in raw.items()},
                   _trusted=True)

    # -- inspection --------------------------------------------------------

    @property
    def terms(self) -> Mapping[tuple, Fraction]:
        return MappingProxyType(self._terms)

    def is_zero(self):
        return not self._terms

    def is_constant(self):
        t = self._terms
        return not t or (len(t) == 1 and not any(next(iter(t))))

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return next(iter(self._terms.values()), Fraction(0))

    def sorted_terms(self):
        """Terms in descending graded lexicographic order."""
        return sorted(self._terms.items(), key=lambda kv: intpoly.grlex_key(kv[0]),
                      reverse=True)

    def leading_term(self):
        e = intpoly.leading_exp(self._terms)
        return e, self._terms[e]

    def leading_coefficient(self) -> Fraction:
        return self.leading_term()[1] if self._terms else Fraction(0)

    def degree(self, symbol=None) -> int:
        if not self._terms:
            return -1
        if symbol is None:
            return max(sum(e) for e in self._terms)
        i = self.context.index(symbol)
        return max(e[i] for e in self._terms)

    def free_symbols(self):
        return {self.context.names[i] for i in intpoly.variables(self._terms)}

    def to_int(self):
        """``(raw, d)`` with integer ``raw`` such that ``self == raw / d``."""
        d = 1
        for c in self._terms.values():
            d = lcm(d, c.denominator)
        if d == 1:
            return {e: c.numerator for e, c in self._terms.items()}, 1
        return {e: (c * d).numerator for e, c in self._terms.items()}, d

    # -- arithmetic --------------------------------------------------------

    def _check(self, other):
        if self.context != other.context:
            raise ContextMismatch(f"{self.context!r} vs {other.context!r}")

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.context, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Polynomial(self.context, out, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.context, {e: -c for e, c in self._terms.items()},
                          _trusted=True)

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
        return Polynomial(self.context, intpoly.mul(self._terms, other._terms),
                          _trusted=True)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        if not self._terms:
            return Polynomial.constant(self.context, 1) if k == 0 else self
        return Polynomial(self.context, intpoly.power(self._terms, k), _trusted=True)

    def scale(self, c):
        c = _as_fraction(c)
        return Polynomial(self.context, intpoly.scale(self._terms, c), _trusted=True)

    def divexact(self, other: "Polynomial"):
        """Exact quotient over Q, or ``None`` when ``other`` does not divide."""
        self._check(other)
        if other.is_zero():
            raise DivisionByZero("division by the zero polynomial")
        a, da = self.to_int()
        b, db = other.to_int()
        # Gauss: a primitive divisor over Q divides over Z
        cb = intpoly.content(b)
        q = intpoly.divexact(a, intpoly.divexact_int(b, cb))
        if q is None:
            return None
        f = Fraction(db, da * cb)
        return Polynomial(self.context, {e: c * f for e, c in q.items() if c},
                          _trusted=True)

    def divmod_by(self, other: "Polynomial"):
        """Multivariate division by leading terms in graded lex order."""
        self._check(other)
        if other.is_zero():
            raise DivisionByZero("division by the zero polynomial")
        le, lc = other.leading_term()
        rem = dict(self._terms)
        quot, out_rem = {}, {}
        while rem:
            e = intpoly.leading_exp(rem)
            c = rem[e]
            d = tuple(x - y for x, y in zip(e, le))
            if min(d) < 0:
                out_rem[e] = c
                del rem[e]
                continue
            q = c / lc
            quot[d] = q
            for e2, c2 in other._terms.items():
                t = tuple(x + y for x, y in zip(e2, d))
                s = rem.get(t, 0) - q * c2
                if s:
                    rem[t] = s
                else:
                    rem.pop(t, None)
        return (Polynomial(self.context, quot, _trusted=True),
                Polynomial(self.context, out_rem, _trusted=True))

    def diff(self, symbol) -> "Polynomial":
        i = self.context.index(symbol)
        out = {}
        for e, c in self._terms.items():
            k = e[i]
            if k:
                out[e[:i] + (k - 1,) + e[i + 1:]] = c * k
        return Polynomial(self.context, out, _trusted=True)

    # -- evaluation --------------------------------------------------------

    def evaluate(self, values):
        """Evaluate at a full value vector (ordered like the context)."""
        total = 0
        powers = {}
        for e, c in self._terms.items():
            term = c
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    p = powers.get(key)
                    if p is None:
                        p = powers[key] = values[i] ** k
                    term = term * p
            total = total + term
        return total

    def evaluate_float(self, values):
        total = 0.0
        for e, c in self._terms.items():
            term = float(c)
            for i, k in enumerate(e):
                if k:
                    term *= values[i] ** k
            total += term
        return total

    # -- equality / hashing --------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.context == other.context and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.context, frozenset(self._terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    def __reduce__(self):
        return (Polynomial, (self.context, dict(self._terms)))

    def __str__(self):
        from .serialize import format_polynomial
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({self})"


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Gcd with integer-primitive normalization (positive leading coefficient)."""
    a._check(b)
    ra, _ = a.to_int()
    rb, _ = b.to_int()
    return Polynomial.from_int(a.context, intpoly.gcd(ra, rb))
