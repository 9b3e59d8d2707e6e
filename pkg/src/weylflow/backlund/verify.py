"""Exact verification of the invariance theorems, first integrals and relations."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction

from ..errors import ExhaustedResampling, PoleHit
from ..model import (build_autonomous_system, build_hamiltonian, build_piii_system,
                     SystemDefinition)
from ..ratcalc import REDUCED, Polynomial, RationalFunction, constraint_residual, parse
from .maps import (VARIANTS, RationalMap, apply_word_point, build_pi, build_s,
                   compose_params, compose_word, parse_word)

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"
DEFAULT_SEED = 42


@dataclass(frozen=True)
class VerificationReport:
    check_id: str
    status: str
    mode: str
    details: tuple = ()
    seed: int | None = None

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_dict(self):
        return {
            "check_id": self.check_id,
            "status": self.status,
            "mode": self.mode,
            "seed": self.seed,
            "details": [{"identity": i, "residual": r} for i, r in self.details],
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)


def _report(check_id, rows, mode="symbolic", seed=None):
    """``rows`` are ``(identity, residual_text, ok)`` triples."""
    status = PASS if all(ok for _, _, ok in rows) else FAIL
    return VerificationReport(check_id, status, mode,
                              tuple((ident, res) for ident, res, _ in rows), seed)


def lie_derivative(expr: RationalFunction, sys: SystemDefinition,
                   with_time: bool = True) -> RationalFunction:
    """Derivative of ``expr`` along the flow of ``sys``."""
    total = expr.diff(sys.time_var) if with_time else RationalFunction.constant(sys.context, 0)
    for v, comp in zip(sys.phase_vars, sys.components):
        d = expr.diff(v)
        if not d.is_zero():
            total = total + d * comp
    return total


def invariance_residuals(sys: SystemDefinition, m: RationalMap, plain=False):
    """Per phase variable, the residual of the chain-rule equivariance identity."""
    if VARIANTS[m.variant][0] != sys.context:
        raise ValueError(f"map {m.name} and system {sys.name} use different contexts")
    binds = m.bindings()
    out = []
    for v, phi, comp in zip(sys.phase_vars, m.images, sys.components):
        lhs = lie_derivative(phi, sys)
        if m.time_sign != 1:
            lhs = lhs * m.time_sign
        rhs = comp.substitute(binds)
        out.append((v, constraint_residual(lhs, rhs, plain)))
    return out


def verify_invariance(sys: SystemDefinition, m: RationalMap, plain: bool = False):
    rows = []
    for v, res in invariance_residuals(sys, m, plain):
        rows.append((f"d({m.name}*{v})/d{sys.time_var} = F_{v}({m.name}*u)", str(res),
                     res.is_zero()))
    tag = "plain" if plain else "modulo-constraint"
    return _report(f"invariance.{sys.name}.{m.name}" + (".plain" if plain else ""),
                   rows + [("constraint handling", tag, True)])


def _plain_and_constrained(lhs, rhs):
    return constraint_residual(lhs, rhs, True), constraint_residual(lhs, rhs, False)


def first_integral_residuals(sys: SystemDefinition | None = None):
    sys = sys or build_autonomous_system()
    ctx = sys.context
    P = lambda s: parse(s, ctx)
    out = []
    for label, expr, target in (
        ("d(f0 - f1)/dt = 0", P("f0 - f1"), P("0")),
        ("d(f3 - f4)/dt = 0", P("f3 - f4"), P("0")),
        ("d(f2 - g1*g2)/dt = f2 - g1*g2", P("f2 - g1*g2"), P("f2 - g1*g2")),
    ):
        lhs = lie_derivative(expr, sys)
        out.append((label,) + _plain_and_constrained(lhs, target))
    return out


def verify_first_integrals(sys: SystemDefinition | None = None, plain: bool = False):
    rows = []
    for label, res_plain, res_mod in first_integral_residuals(sys):
        res = res_plain if plain else res_mod
        rows.append((label, str(res), res.is_zero()))
        rows.append((label + " [plain residual]", str(res_plain), True))
    return _report("integrals" + (".plain" if plain else ""), rows)


def divisor_remainders(sys: SystemDefinition | None = None, specialize: bool = True):
    """Remainder of df_i/dt (at alpha_i = 0 if ``specialize``) divided by f_i."""
    sys = sys or build_autonomous_system()
    out = []
    for i in range(5):
        comp = sys.component(f"f{i}")
        if specialize:
            comp = comp.substitute({f"alpha{i}": 0})
        poly = comp.as_polynomial()
        _, rem = poly.divmod_by(Polynomial.var(sys.context, f"f{i}"))
        out.append((i, poly, rem))
    return out


def verify_invariant_divisors(sys: SystemDefinition | None = None, specialize: bool = True):
    rows = []
    for i, poly, rem in divisor_remainders(sys, specialize):
        cond = f" at alpha{i} = 0" if specialize else f" (alpha{i} symbolic)"
        rows.append((f"f{i} divides df{i}/dt{cond}", str(rem), rem.is_zero()))
    return _report("divisors" + ("" if specialize else ".symbolic-alpha"), rows)


HAMILTONIAN_PAIRS = (("x", "y", 1), ("y", "x", -1), ("z", "w", 1), ("w", "z", -1))


def verify_hamiltonian_form(sign: int = 1):
    """Check dq/dT = sign*dH/dp, dp/dT = -sign*dH/dq for (q, p) = (x, y), (z, w)."""
    sys = build_piii_system()
    H = build_hamiltonian().H
    rows = []
    for v, partner, s in HAMILTONIAN_PAIRS:
        rhs = H.diff(partner) * (s * sign)
        res = constraint_residual(sys.component(v), rhs, plain=True)
        op = "" if s * sign > 0 else "-"
        rows.append((f"d{v}/dT = {op}dH/d{partner}", str(res), res.is_zero()))
    return _report("hamiltonian" + ("" if sign == 1 else ".flipped"), rows)


REDUCTION_SUBSTITUTION = {
    "f0": "y - 1", "f1": "y", "f3": "w - 1", "f4": "w",
    "f2": "x*z + T", "g1": "x", "g2": "z",
}


def reduction_residuals(plain=False):
    auto, piii = build_autonomous_system(), build_piii_system()
    sub = {k: parse(v, REDUCED) for k, v in REDUCTION_SUBSTITUTION.items()}
    T = RationalFunction.var(REDUCED, "T")
    F = piii.field_map()
    x, z = RationalFunction.var(REDUCED, "x"), RationalFunction.var(REDUCED, "z")
    checks = [
        ("x", "g1", F["x"]), ("y", "f1", F["y"]), ("z", "g2", F["z"]), ("w", "f4", F["w"]),
        ("y", "f0", F["y"]), ("w", "f3", F["w"]),
        ("xz+T", "f2", F["x"] * z + x * F["z"] + 1),
    ]
    out = []
    for target, source, rate in checks:
        lhs = auto.component(source).substitute(sub, REDUCED)
        out.append((f"d{source}/dt -> T*d({target})/dT", constraint_residual(lhs, T * rate, plain)))
    return out


def verify_reduction(plain: bool = False):
    rows = [(label, str(res), res.is_zero()) for label, res in reduction_residuals(plain)]
    return _report("reduction" + (".plain" if plain else ""), rows)


# -- relations ---------------------------------------------------------------

def _draw(rng):
    return Fraction(rng.randint(-10, 10), rng.randint(1, 10))


def sample_point(variant, rng):
    """Random exact point: phase coordinates, normalized alphas, time."""
    _, phase, _ = VARIANTS[variant]
    state = [_draw(rng) for _ in phase]
    a = [_draw(rng) for _ in range(4)]
    a.append(1 - a[0] - a[1] - 2 * a[2] - a[3])
    time = _draw(rng)
    return state, a, time


def _fmt_point(state, alpha, time):
    return "state=(" + ", ".join(map(str, state)) + "), alpha=(" + \
        ", ".join(map(str, alpha)) + f"), time={time}"


def _identity_params(M, b):
    eye = tuple(tuple(Fraction(int(i == j)) for j in range(5)) for i in range(5))
    return M == eye and all(v == 0 for v in b)


def verify_relation(word, expected="identity", mode="sampled", n_samples=20,
                    seed=DEFAULT_SEED, variant="reduced"):
    names = parse_word(word)
    if not names:
        raise ValueError("relation word must be nonempty")
    if expected != "identity":
        raise ValueError("only identity relations are supported")
    text = " ".join(names)
    check_id = f"relation.{variant}.{text.replace(' ', '.')}"
    M, b = compose_params(names, variant)
    rows = [("parameter action = identity", "" if _identity_params(M, b) else
             f"M={[[str(c) for c in r] for r in M]}, b={[str(c) for c in b]}",
             _identity_params(M, b))]
    if mode == "symbolic":
        composed = compose_word(names, variant)
        ctx = composed.context
        for v, img in zip(composed.phase_vars, composed.images):
            res = img - RationalFunction.var(ctx, v)
            rows.append((f"{text} : {v} -> {v}", str(res), res.is_zero()))
        if composed.time_sign != 1:
            rows.append(("time sign", str(composed.time_sign), False))
        return _report(check_id, rows, "symbolic")
    rng = random.Random(seed)
    found = draws = failures = 0
    while found < n_samples:
        if draws >= 100 * n_samples:
            raise ExhaustedResampling(f"{text}: only {found} pole-free points in {draws} draws")
        draws += 1
        state, alpha, time = sample_point(variant, rng)
        try:
            out = apply_word_point(names, state, alpha, time, variant)
        except PoleHit:
            continue
        found += 1
        if list(out[0]) != state or list(out[1]) != alpha or out[2] != time:
            failures += 1
            if failures <= 3:
                rows.append((f"{text} fixes point", _fmt_point(*out) + " from " +
                             _fmt_point(state, alpha, time), False))
    rows.append((f"{text} fixes sampled points", f"{found - failures}/{found} fixed",
                 failures == 0))
    return _report(check_id, rows, "sampled", seed)


def fig1_relations():
    """Words of the D4(1) Coxeter relations: squares, commuting outer pairs, braids."""
    outer = (0, 1, 3, 4)
    squares = [f"s{i} s{i}" for i in range(5)]
    pairs = [f"s{a} s{b} s{a} s{b}" for k, a in enumerate(outer) for b in outer[k + 1:]]
    braids = [" ".join([f"s{a} s2"] * 3) for a in outer]
    return squares, pairs, braids


def conjugation_permutation(j):
    M = build_pi(j).param_matrix
    # row k of M has a single 1 at column sigma(k); involutive, so sigma(i) reads either way
    perm = {}
    for k, row in enumerate(M):
        cols = [c for c, v in enumerate(row) if v]
        if len(cols) != 1 or row[cols[0]] != 1:
            raise ValueError(f"pi{j} parameter action is not a permutation")
        perm[cols[0]] = k
    return perm


def verify_diagram_automorphism(j, n_samples=20, seed=DEFAULT_SEED):
    perm = conjugation_permutation(j)
    rng = random.Random(seed)
    rows = []
    for i in range(5):
        target = perm[i]
        word = [f"pi{j}", f"s{i}", f"pi{j}"]
        Mc, bc = compose_params(word)
        Mt, bt = compose_params([f"s{target}"])
        ok_params = Mc == Mt and bc == bt
        found = draws = bad = 0
        while found < n_samples:
            if draws >= 100 * n_samples:
                raise ExhaustedResampling(f"pi{j} s{i} pi{j}: too many poles")
            draws += 1
            state, alpha, time = sample_point("reduced", rng)
            try:
                lhs = apply_word_point(word, state, alpha, time)
                rhs = apply_word_point([f"s{target}"], state, alpha, time)
            except PoleHit:
                continue
            found += 1
            if list(lhs[0]) != list(rhs[0]) or list(lhs[1]) != list(rhs[1]) or lhs[2] != rhs[2]:
                bad += 1
        rows.append((f"pi{j} s{i} pi{j} = s{target}",
                     f"{found - bad}/{found} agree; parameter actions "
                     f"{'equal' if ok_params else 'differ'}", bad == 0 and ok_params))
    return _report(f"automorphism.pi{j}", rows, "sampled", seed)


def invariance_suite(plain=False):
    auto, piii = build_autonomous_system(), build_piii_system()
    reports = [verify_invariance(auto, build_s(i, "autonomous"), plain) for i in range(5)]
    reports += [verify_invariance(piii, build_s(i, "reduced"), plain) for i in range(5)]
    reports += [verify_invariance(piii, build_pi(j), plain) for j in (1, 2, 3)]
    return reports


def relations_suite(seed=DEFAULT_SEED, n_samples=20, variants=("reduced", "autonomous")):
    squares, pairs, braids = fig1_relations()
    reports = []
    for variant in variants:
        reports += [verify_relation(w, mode="symbolic", variant=variant) for w in squares]
        reports += [verify_relation(w, mode="sampled", n_samples=n_samples, seed=seed,
                                    variant=variant) for w in pairs + braids]
    return reports


# -- negative controls ---------------------------------------------------------

def coefficient_perturbations(m: RationalMap, delta=1):
    """Every map obtained by adding ``delta`` to one numerator or denominator coefficient."""
    for var, img in zip(m.phase_vars, m.images):
        num, den = img.numerator, img.denominator
        for part, poly in (("num", num), ("den", den)):
            for e, c in poly.sorted_terms():
                terms = dict(poly.terms)
                terms[e] = c + delta
                new = Polynomial(poly.context, terms)
                try:
                    img2 = (RationalFunction.from_polynomials(new, den) if part == "num"
                            else RationalFunction.from_polynomials(num, new))
                except ZeroDivisionError:
                    continue
                label = f"{m.name}:{var}:{part}[{'*'.join(map(str, e))}]"
                yield label, m.with_image(var, img2, name=f"{m.name}~")


def detects(sys: SystemDefinition, m: RationalMap) -> bool:
    """True when some invariance identity fails for ``m`` (stops at the first)."""
    binds = m.bindings()
    for phi, comp in zip(m.images, sys.components):
        lhs = lie_derivative(phi, sys)
        if m.time_sign != 1:
            lhs = lhs * m.time_sign
        if not constraint_residual(lhs, comp.substitute(binds)).is_zero():
            return True
    return False
