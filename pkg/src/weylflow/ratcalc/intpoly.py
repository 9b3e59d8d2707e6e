"""Integer multivariate polynomials as plain dicts, and their gcd.

A raw polynomial is ``dict[tuple[int, ...], int]`` mapping exponent vectors
to nonzero integer coefficients. Every vector in one computation has the
same length. These helpers never mutate their arguments.

The gcd is a recursive content / primitive-part scheme with a primitive
pseudo-remainder sequence in one main variable. Before any remainder
sequence is run, modular images of the inputs give upper bounds on the
degree of the gcd in every variable; a zero bound removes the variable from
the problem, and all-zero bounds prove coprimality outright.
"""

from math import gcd as igcd
import random

_PRIME = (1 << 61) - 1
# Fixed seed: the images only bound degrees, so the choice of points affects
# speed but never the result.
_rng = random.Random(0x5EED)


def grlex_key(e):
    return (sum(e), e)


def leading_exp(p):
    return max(p, key=grlex_key)


def is_constant(p):
    return len(p) == 1 and not any(next(iter(p)))


def const(n, c):
    return {(0,) * n: c} if c else {}


def add(a, b):
    out = dict(a)
    for e, c in b.items():
        s = out.get(e, 0) + c
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return out


def sub(a, b):
    out = dict(a)
    for e, c in b.items():
        s = out.get(e, 0) - c
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return out


def neg(a):
    return {e: -c for e, c in a.items()}


def scale(a, k):
    if not k:
        return {}
    return {e: c * k for e, c in a.items()}


def mul(a, b):
    if len(a) > len(b):
        a, b = b, a
    out = {}
    get = out.get
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple([x + y for x, y in zip(e1, e2)])
            s = get(e, 0) + c1 * c2
            if s:
                out[e] = s
            else:
                del out[e]
    return out


def mul_monomial(a, e0, c0=1):
    return {tuple([x + y for x, y in zip(e, e0)]): c * c0 for e, c in a.items()}


def power(a, k):
    n = len(next(iter(a))) if a else 0
    result = const(n, 1)
    base = a
    while k:
        if k & 1:
            result = mul(result, base)
        k >>= 1
        if k:
            base = mul(base, base)
    return result


def content(a):
    g = 0
    for c in a.values():
        g = igcd(g, c)
        if g == 1:
            break
    return g


def divexact_int(a, k):
    return {e: c // k for e, c in a.items()}


def divexact(a, b):
    """Quotient ``a / b`` if ``b`` divides ``a`` over Z, else ``None``."""
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    if not a:
        return {}
    lb = leading_exp(b)
    lc = b[lb]
    rem = dict(a)
    quot = {}
    while rem:
        lr = leading_exp(rem)
        d = tuple([x - y for x, y in zip(lr, lb)])
        if min(d) < 0:
            return None
        q, r = divmod(rem[lr], lc)
        if r:
            return None
        quot[d] = q
        for e, c in b.items():
            t = tuple([x + y for x, y in zip(e, d)])
            s = rem.get(t, 0) - q * c
            if s:
                rem[t] = s
            else:
                rem.pop(t, None)
    return quot


def degree_in(a, v):
    return max((e[v] for e in a), default=-1)


def variables(a):
    n = len(next(iter(a))) if a else 0
    return {i for i in range(n) if any(e[i] for e in a)}


def coeffs_in(a, v):
    """Split ``a`` as sum_k c_k * x_v^k; returns ``{k: c_k}`` with x_v removed."""
    out = {}
    for e, c in a.items():
        k = e[v]
        key = e[:v] + (0,) + e[v + 1:]
        out.setdefault(k, {})[key] = c
    return out


def from_coeffs(cs, v):
    out = {}
    for k, p in cs.items():
        for e, c in p.items():
            out[e[:v] + (k,) + e[v + 1:]] = c
    return out


def normalize_sign(a):
    if a and a[leading_exp(a)] < 0:
        return neg(a)
    return a


def primitive(a):
    """Integer-primitive part with positive leading coefficient."""
    if not a:
        return a
    c = content(a)
    if a[leading_exp(a)] < 0:
        c = -c
    return a if c == 1 else divexact_int(a, c)


# -- modular degree bounds -------------------------------------------------

def _image(a, v, point):
    """Univariate image of ``a`` in x_v, other variables evaluated mod p."""
    out = {}
    for e, c in a.items():
        val = c % _PRIME
        for i, k in enumerate(e):
            if k and i != v:
                val = val * pow(point[i], k, _PRIME) % _PRIME
        if val:
            out[e[v]] = (out.get(e[v], 0) + val) % _PRIME
    deg = max(out) if out else -1
    return [out.get(k, 0) for k in range(deg + 1)]


def _trim(u):
    while u and not u[-1]:
        u.pop()
    return u


def _umod_gcd_degree(u, w):
    u, w = _trim(list(u)), _trim(list(w))
    while w:
        inv = pow(w[-1], _PRIME - 2, _PRIME)
        while len(u) >= len(w):
            if not u[-1]:
                u.pop()
                continue
            q = u[-1] * inv % _PRIME
            shift = len(u) - len(w)
            for i, c in enumerate(w):
                u[i + shift] = (u[i + shift] - q * c) % _PRIME
            _trim(u)
        u, w = w, u
    return len(u) - 1


def _degree_bound(a, b, v, n):
    da, db = degree_in(a, v), degree_in(b, v)
    for _ in range(8):
        point = [_rng.randrange(1, _PRIME) for _ in range(n)]
        ua, ub = _image(a, v, point), _image(b, v, point)
        if len(ua) - 1 == da and len(ub) - 1 == db:
            return _umod_gcd_degree(ua, ub)
    return min(da, db)


# -- gcd -------------------------------------------------------------------

def _monomial_part(a):
    it = iter(a)
    m = list(next(it))
    for e in it:
        m = [min(x, y) for x, y in zip(m, e)]
    return tuple(m)


def _shift_down(a, m):
    return {tuple([x - y for x, y in zip(e, m)]): c for e, c in a.items()}


def content_in(a, v):
    """Gcd of the coefficients of ``a`` viewed as a polynomial in x_v."""
    g = {}
    for c in coeffs_in(a, v).values():
        g = gcd(g, c)
        if is_constant(g):
            break
    return g


def gcd(a, b):
    """Gcd over Z, normalized to positive leading coefficient (grlex)."""
    if not a:
        return primitive(b) if b else {}
    if not b:
        return primitive(a)
    n = len(next(iter(a)))
    g_int = igcd(content(a), content(b))
    if is_constant(a) or is_constant(b):
        return const(n, g_int)
    a = divexact_int(a, content(a))
    b = divexact_int(b, content(b))
    ma, mb = _monomial_part(a), _monomial_part(b)
    mono = tuple([min(x, y) for x, y in zip(ma, mb)])
    if any(ma):
        a = _shift_down(a, ma)
    if any(mb):
        b = _shift_down(b, mb)
    g = _gcd_primitive(a, b, n)
    if any(mono):
        g = mul_monomial(g, mono)
    return scale(normalize_sign(g), g_int)


def _gcd_primitive(a, b, n):
    """Gcd of integer-primitive polynomials free of monomial factors."""
    if is_constant(a) or is_constant(b):
        return const(n, 1)
    if len(a) == 1 or len(b) == 1:
        return const(n, 1)
    va, vb = variables(a), variables(b)
    # variables present in only one operand cannot occur in the gcd
    for v in va - vb:
        a = content_in(a, v)
        if is_constant(a):
            return const(n, 1)
    for v in vb - va:
        b = content_in(b, v)
        if is_constant(b):
            return const(n, 1)
    if va != vb:
        return _gcd_primitive(primitive(a), primitive(b), n)
    common = sorted(va)
    bounds = {v: _degree_bound(a, b, v, n) for v in common}
    zero = [v for v in common if bounds[v] == 0]
    if len(zero) == len(common):
        return const(n, 1)
    if zero:
        v = zero[0]
        return gcd(content_in(a, v), content_in(b, v))
    if all(bounds[v] == degree_in(b, v) for v in common):
        if divexact(a, b) is not None:
            return normalize_sign(b)
    if all(bounds[v] == degree_in(a, v) for v in common):
        if divexact(b, a) is not None:
            return normalize_sign(a)
    v = min(common, key=lambda i: (max(degree_in(a, i), degree_in(b, i)), i))
    return _prs_gcd(a, b, v, n)


def _lc_in(a, v):
    cs = coeffs_in(a, v)
    k = max(cs)
    return k, cs[k]


def _prem_primitive(a, b, v):
    """Pseudo-remainder of ``a`` by ``b`` in x_v (lc powers not tracked)."""
    db, lcb = _lc_in(b, v)
    r = a
    while r:
        dr = degree_in(r, v)
        if dr < db:
            break
        _, lcr = _lc_in(r, v)
        shift = [0] * len(next(iter(b)))
        shift[v] = dr - db
        r = sub(mul(r, lcb), mul(mul_monomial(b, tuple(shift)), lcr))
    return r


def _prs_gcd(a, b, v, n):
    ca, cb = content_in(a, v), content_in(b, v)
    c = gcd(ca, cb)
    pa = divexact(a, ca) if not is_constant(ca) else a
    pb = divexact(b, cb) if not is_constant(cb) else b
    if degree_in(pa, v) < degree_in(pb, v):
        pa, pb = pb, pa
    r0, r1 = pa, pb
    while True:
        r = _prem_primitive(r0, r1, v)
        if not r:
            g = r1
            break
        if degree_in(r, v) == 0:
            g = const(n, 1)
            break
        cr = content_in(r, v)
        r = primitive(divexact(r, cr) if not is_constant(cr) else r)
        r0, r1 = r1, r
    if not is_constant(g):
        cg = content_in(g, v)
        if not is_constant(cg):
            g = divexact(g, cg)
        g = primitive(g)
    return normalize_sign(mul(c, g))
