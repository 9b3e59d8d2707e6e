import random
from fractions import Fraction

import pytest

from weylflow.errors import SingularEvaluation
from weylflow.model import (ParameterVector, build_autonomous_system, build_hamiltonian,
                            build_piii_system, build_system, eval_field, eval_field_generic)
from weylflow.ratcalc import ALPHAS, AUTONOMOUS, REDUCED, Polynomial, parse

SIXTH = Fraction(1, 6)


def exact_point(names, values, alpha=(SIXTH,) * 5, **extra):
    p = dict(zip(names, values))
    p.update(zip(ALPHAS, alpha))
    p.update(extra)
    return p


class TestParameterVector:
    def test_symmetric_is_normalized(self):
        a = ParameterVector.symmetric()
        assert a.exact and a.weighted_sum() == 1

    def test_rejects_unnormalized(self):
        with pytest.raises(ValueError):
            ParameterVector((1, 1, 0, 0, 0))
        assert not ParameterVector((1, 1, 0, 0, 0), normalized=False).satisfies_normalization()

    def test_vertex(self):
        assert ParameterVector((1, 0, 0, 0, 0)).weighted_sum() == 1

    def test_float_tolerance(self):
        ParameterVector((0.2, 0.2, 0.1, 0.2, 0.2 + 5e-13))
        with pytest.raises(ValueError):
            ParameterVector((0.2, 0.2, 0.1, 0.2, 0.2 + 1e-9))

    def test_length(self):
        with pytest.raises(ValueError):
            ParameterVector((1,))


class TestAutonomous:
    def test_f0_component(self):
        sys = build_autonomous_system()
        assert sys.component("f0") == parse("-(2*f1*g1 + alpha1)*f0 - alpha0*f1", AUTONOMOUS)

    def test_values_at_ones(self):
        sys = build_autonomous_system()
        p = exact_point(sys.phase_vars, [1] * 7)
        vals = [c.evaluate(p) for c in sys.components]
        assert vals == [Fraction(v, 3) for v in (-7, -7, 14, -7, -7, 7, 7)]
        num = eval_field(sys, [1.0] * 7, 0.0, [1 / 6] * 5)
        assert num == pytest.approx([float(v) for v in vals], rel=1e-15)

    def test_divisor_row(self):
        sys = build_autonomous_system()
        p = exact_point(sys.phase_vars, [0, 2, 3, 5, 7, 11, 13], alpha=(0, 1, 0, 0, 0))
        assert sys.component("f0").evaluate(p) == 0

    def test_structure(self):
        sys = build_autonomous_system()
        assert sys.autonomous and sys.dimension == 7
        assert all(c.is_polynomial() and "t" not in c.free_symbols() for c in sys.components)


class TestPIII:
    def test_y_component(self):
        sys = build_piii_system()
        assert sys.component("y") == parse("(-2*x*y^2 + 2*x*y - (alpha0+alpha1)*y + alpha1)/T",
                                           REDUCED)

    def test_values_at_ones(self):
        sys = build_piii_system()
        p = exact_point(sys.phase_vars, [1] * 4, T=1)
        assert [c.evaluate(p) for c in sys.components] == [Fraction(7, 3), -SIXTH,
                                                           Fraction(7, 3), -SIXTH]
        assert eval_field(sys, [1] * 4, 1.0, [1 / 6] * 5) == pytest.approx(
            [7 / 3, -1 / 6, 7 / 3, -1 / 6], rel=1e-15)

    def test_singular_at_zero(self):
        with pytest.raises(SingularEvaluation):
            eval_field(build_piii_system(), [1] * 4, 0.0, [1 / 6] * 5)

    def test_denominators_are_powers_of_T(self):
        T = Polynomial.var(REDUCED, "T")
        for c in build_piii_system().components:
            d = c.denominator
            assert any(d == T ** k for k in range(3))

    def test_build_system(self):
        assert build_system("piii") is build_piii_system()
        with pytest.raises(ValueError):
            build_system("pvi")


class TestHamiltonian:
    def test_value_at_ones(self):
        H = build_hamiltonian().H
        # (1 - 1 + 1/3 - 1/6) - 1 + (1 - 1 + 1/3 - 1/6) - 1 + 2
        assert H.evaluate(exact_point(REDUCED.names[:4], [1] * 4, T=1)) == Fraction(1, 3)

    def test_denominator_is_T(self):
        assert build_hamiltonian().H.denominator == Polynomial.var(REDUCED, "T")

    def test_pair_swap_symmetry(self):
        H = build_hamiltonian().H
        swap = {"x": "z", "y": "w", "z": "x", "w": "y",
                "alpha0": "alpha3", "alpha1": "alpha4", "alpha3": "alpha0", "alpha4": "alpha1"}
        binds = {k: parse(v, REDUCED) for k, v in swap.items()}
        assert H.substitute(binds) == H


@pytest.mark.parametrize("name", ["autonomous", "piii"])
def test_kernel_matches_exact(name):
    sys = build_system(name)
    rng = random.Random(7)
    worst = 0.0
    for _ in range(100):
        state = [Fraction(rng.randint(-20, 20), rng.randint(1, 9)) for _ in sys.phase_vars]
        alpha = [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(5)]
        time = Fraction(rng.choice([-1, 1]) * rng.randint(1, 30), rng.randint(1, 9))
        p = exact_point(sys.phase_vars, state, alpha, **{sys.time_var: time})
        exact = [float(c.evaluate(p)) for c in sys.components]
        num = eval_field(sys, [float(v) for v in state], float(time), [float(a) for a in alpha])
        for e, n in zip(exact, num):
            worst = max(worst, abs(e - n) / max(abs(e), 1e-300))
    assert worst <= 1e-13


def test_generic_path_agrees():
    sys = build_piii_system()
    y, a = [0.3, -1.2, 0.7, 2.5], [0.1, 0.4, 0.05, 0.2, 0.2]
    assert eval_field_generic(sys, y, 1.7, a) == pytest.approx(eval_field(sys, y, 1.7, a),
                                                               rel=1e-14)
