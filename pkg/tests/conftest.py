from fractions import Fraction

from hypothesis import HealthCheck, settings, strategies as st

from weylflow.ratcalc import Context, Polynomial, RationalFunction

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

SMALL = Context(["x", "y", "z"], name="small")

coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def polynomials(draw, ctx=SMALL, max_terms=4, max_exp=2):
    n = len(ctx)
    terms = draw(st.dictionaries(
        st.tuples(*[st.integers(0, max_exp)] * n), coeffs, max_size=max_terms))
    return Polynomial(ctx, terms)


@st.composite
def nonzero_polynomials(draw, ctx=SMALL, **kw):
    p = draw(polynomials(ctx, **kw))
    if p.is_zero():
        p = p + Polynomial.constant(ctx, draw(coeffs.filter(bool)))
    return p


@st.composite
def rationals(draw, ctx=SMALL):
    return RationalFunction.from_polynomials(draw(polynomials(ctx)),
                                             draw(nonzero_polynomials(ctx, max_terms=3)))


@st.composite
def points(draw, ctx=SMALL):
    return {s: Fraction(draw(st.integers(-9, 9)), draw(st.integers(1, 7))) for s in ctx.names}


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is not None and getattr(mod, "RESULTS", None):
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
