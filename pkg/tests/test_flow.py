import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from weylflow.backlund import RationalMap, build_pi, build_s
from weylflow.errors import AllSamplesPoles, DomainError, StepLimit
from weylflow.flow import (IntegrationConfig, Trajectory, integrate,
                           lift_to_autonomous, map_trajectory, monitor_invariants, read_csv,
                           reduction_discrepancy)
from weylflow.model import (ParameterVector, build_autonomous_system, build_piii_system,
                            eval_field)

SYM = ParameterVector.symmetric()
GENERIC = [0.3, 0.6, -0.4, 0.2]


@pytest.fixture(scope="module")
def auto():
    return build_autonomous_system()


@pytest.fixture(scope="module")
def piii():
    return build_piii_system()


@pytest.fixture(scope="module")
def piii_run(piii):
    return integrate(piii, SYM, GENERIC, 1.0, 2.0)


class TestConfig:
    @pytest.mark.parametrize("kw", [dict(rtol=0), dict(atol=-1), dict(blowup_threshold=1),
                                    dict(max_step=0), dict(n_grid=1), dict(max_steps=0)])
    def test_invalid(self, kw):
        with pytest.raises(ValueError):
            IntegrationConfig(**kw)


class TestIntegrate:
    def test_all_ones_completes(self, auto):
        tr = integrate(auto, SYM, [1.0] * 7, 0.0, 1.0)
        assert tr.completed and len(tr) == 257
        assert tr.times[0] == 0.0 and tr.times[-1] == 1.0
        # first grid slope agrees with the field at the initial point
        slope = (tr.states[1] - tr.states[0]) / (tr.times[1] - tr.times[0])
        f = np.array(eval_field(auto, [1.0] * 7, 0.0, SYM))
        assert np.allclose(slope, f, rtol=2e-2)
        assert f[0] == pytest.approx(-7 / 3)

    def test_domain_error(self, piii):
        with pytest.raises(DomainError):
            integrate(piii, SYM, [1.0] * 4, -1.0, 1.0)
        with pytest.raises(DomainError):
            integrate(piii, SYM, [1.0] * 4, 0.0, 1.0)

    def test_blowup_threshold(self, auto):
        cfg = IntegrationConfig(blowup_threshold=2.0)
        tr = integrate(auto, SYM, [1.0] * 7, 0.0, 1.0, cfg)
        assert tr.termination == "blowup"
        assert np.max(np.abs(tr.states[-1])) > 2.0
        assert np.all(np.isfinite(tr.states))

    def test_step_limit(self, auto):
        cfg = IntegrationConfig(max_steps=5)
        assert integrate(auto, SYM, [1.0] * 7, 0.0, 1.0, cfg).termination == "step_limit"
        with pytest.raises(StepLimit):
            integrate(auto, SYM, [1.0] * 7, 0.0, 1.0, cfg, raise_on_step_limit=True)

    def test_backward_in_time(self, piii):
        tr = integrate(piii, SYM, GENERIC, -1.0, -2.0)
        assert tr.completed and np.all(np.diff(tr.times) < 0)

    def test_bad_inputs(self, auto):
        with pytest.raises(ValueError):
            integrate(auto, SYM, [1.0] * 6, 0.0, 1.0)
        with pytest.raises(ValueError):
            integrate(auto, SYM, [math.nan] + [1.0] * 6, 0.0, 1.0)
        with pytest.raises(ValueError):
            integrate(auto, SYM, [1.0] * 7, 0.0, 1.0, grid=[0.0, 0.7, 0.5, 1.0])

    def test_immutable(self, piii_run):
        with pytest.raises(ValueError):
            piii_run.states[0, 0] = 1.0

    def test_csv_roundtrip(self, piii_run, tmp_path):
        path = tmp_path / "run.csv"
        piii_run.write_csv(path)
        header, times, states = read_csv(path)
        assert header == ("T", "x", "y", "z", "w")
        assert np.array_equal(times, piii_run.times)
        assert np.array_equal(states, piii_run.states)

    def test_tolerance_tightening_converges(self, piii):
        # two grid points, so the controller alone picks the steps
        run = lambda **kw: integrate(piii, SYM, GENERIC, 1.0, 3.0,
                                     IntegrationConfig(n_grid=2, **kw)).states[-1]
        fine = run(rtol=1e-13, atol=1e-15)
        err_coarse = np.max(np.abs(run(rtol=1e-6, atol=1e-8) - fine))
        err_default = np.max(np.abs(run() - fine))
        assert err_default < err_coarse and err_default < 1e-9


class TestMonitor:
    def test_conserved_on_moderate_run(self, auto):
        # f0 - f1 = -1/2
        tr = integrate(auto, SYM, [0.5, 1, 0.5, 0.5, 1, 0.5, 0.5], 0.0, 1.0)
        d = monitor_invariants(tr)
        assert d.drift["f0-f1"] <= 1e-9 and d.drift["f3-f4"] <= 1e-9
        assert d.drift["(f2-g1*g2)*exp(-t)"] <= 1e-8
        assert d.within() and d.to_report().passed

    def test_detects_perturbed_sample(self, auto):
        tr = integrate(auto, SYM, [0.5, 1, 0.5, 0.5, 1, 0.5, 0.5], 0.0, 1.0)
        states = np.array(tr.states)
        states[100, 0] += 1e-3
        bad = Trajectory(tr.system, tr.alpha, np.array(tr.times), states, tr.termination,
                         tr.config, tr.phase_vars, tr.time_var)
        d = monitor_invariants(bad)
        assert d.drift["f0-f1"] >= 1e-3 * (1 - 1e-9)
        assert not d.within()

    def test_rejects_piii(self, piii_run):
        with pytest.raises(ValueError):
            monitor_invariants(piii_run)

    def test_third_integral_breaks_off_constraint(self, auto):
        alpha = ParameterVector((0.3, 0.3, 0.3, 0.3, 0.3), normalized=False)
        tr = integrate(auto, alpha, [0.5, 1, 0.5, 0.5, 1, 0.5, 0.5], 0.0, 1.0)
        d = monitor_invariants(tr).drift
        assert d["f0-f1"] <= 1e-9 and d["(f2-g1*g2)*exp(-t)"] > 1e-3


class TestMapTrajectory:
    @pytest.mark.parametrize("name", ["s0", "s1", "s2", "s3", "s4", "pi1", "pi2", "pi3"])
    def test_equivariance(self, piii, piii_run, name):
        m = build_s(int(name[1])) if name[0] == "s" else build_pi(int(name[2]))
        image, rep = map_trajectory(piii_run, m, piii)
        assert rep.discrepancy <= 1e-6 and rep.to_report().passed
        assert np.all(np.sign(image.times) == m.time_sign)
        assert image.alpha.values == tuple(m.apply_params(SYM.as_floats()))

    def test_identity(self, piii, piii_run):
        _, rep = map_trajectory(piii_run, RationalMap.identity("reduced"), piii)
        assert rep.discrepancy <= 1e-12

    def test_corrupted(self, piii, piii_run):
        bad = RationalMap.from_strings("bad", "reduced", {"x": "x + 1"})
        _, rep = map_trajectory(piii_run, bad, piii)
        assert rep.discrepancy > 1e-2 and not rep.to_report().passed

    def test_all_poles(self, piii):
        tr = integrate(piii, SYM, [0.3, 0.0, 0.4, 0.2], 1.0, 1.0 + 1e-9,
                       IntegrationConfig(n_grid=2))
        on_divisor = np.array(tr.states) * [1, 0, 1, 1]
        tr = Trajectory(tr.system, tr.alpha, np.array(tr.times), on_divisor, tr.termination,
                        tr.config, tr.phase_vars, tr.time_var)
        with pytest.raises(AllSamplesPoles):
            map_trajectory(tr, build_s(1), piii)

    def test_wrong_system(self, auto):
        tr = integrate(auto, SYM, [0.5, 1, 0.5, 0.5, 1, 0.5, 0.5], 0.0, 0.1)
        with pytest.raises(ValueError):
            map_trajectory(tr, build_s(1))


class TestReduction:
    def test_lift(self):
        assert lift_to_autonomous(1.0, 2.0, 3.0, 4.0, 5.0) == [1.0, 2.0, 8.0, 3.0, 4.0, 1.0, 3.0]

    @pytest.mark.parametrize("point,T0", [(GENERIC, 1.0), ([0.5, 0.3, 0.7, 0.4], 1.5)])
    def test_agreement(self, point, T0):
        disc, auto_run, piii_run = reduction_discrepancy(point, T0, SYM)
        assert auto_run.completed and piii_run.completed
        assert disc <= 1e-6
        assert piii_run.times[-1] == pytest.approx(T0 * math.e)


@settings(max_examples=15)
@given(st.lists(st.floats(-0.5, 0.5), min_size=4, max_size=4), st.floats(1.0, 3.0))
def test_reduction_property(point, T0):
    disc, a, p = reduction_discrepancy(point, T0, SYM, t1=0.3)
    if a.completed and p.completed:
        assert disc <= 1e-6
