"""Unit and property tests for the workload metric and the DD baseline."""

from __future__ import annotations

from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from pdwsim import (
    DdParams,
    DomainError,
    PairScenario,
    ParameterViolation,
    PdwParams,
    SpeedProfile,
    dynamic_density,
    fd_partial,
    integrate_separation,
    minmax_normalize,
    pdw,
    pdw_partial_d,
    pdw_partial_ddot,
    pdw_time_slope,
    pdw_trace,
)

from _helpers import local_s1, metric_value_at, pair_scenarios

P200 = PdwParams(200.0)


class TestPointValues:
    def test_pdw(self):
        assert pdw(100.0, -100.0, P200) == pytest.approx(0.015, abs=1e-12)
        assert pdw(100.0, 0.0, P200) == pytest.approx(0.01, abs=1e-12)
        assert pdw(100.0, 100.0, P200) == pytest.approx(0.005, abs=1e-12)
        assert pdw(50.0, -150.0, P200) == pytest.approx(0.035, abs=1e-12)

    def test_partials(self):
        assert pdw_partial_d(100.0, -100.0, P200) == pytest.approx(-1.5e-4, abs=1e-15)
        assert pdw_partial_d(100.0, 100.0, P200) == pytest.approx(-5e-5, abs=1e-15)
        assert pdw_partial_ddot(100.0, P200) == pytest.approx(-5e-5, abs=1e-15)
        assert pdw_partial_ddot(200.0, P200) == pytest.approx(-2.5e-5, abs=1e-15)

    def test_time_slope(self):
        assert pdw_time_slope(100.0, -100.0, P200) == pytest.approx(0.015, abs=1e-12)
        assert pdw_time_slope(100.0, -50.0, P200) == pytest.approx(0.00625, abs=1e-12)
        assert pdw_time_slope(100.0, 0.0, P200) == 0.0
        assert pdw_time_slope(100.0, 50.0, P200) < 0.0  # diverging pair relaxes

    def test_domain_checks(self):
        with pytest.raises(DomainError):
            pdw(0.0, 0.0, P200)
        with pytest.raises(DomainError):
            pdw(-10.0, 0.0, P200)
        with pytest.raises(ParameterViolation):
            pdw(100.0, 200.0, P200)  # bound is strict
        with pytest.raises(ParameterViolation):
            pdw(100.0, -200.0, P200)
        with pytest.raises(DomainError):
            pdw_partial_ddot(0.0, P200)
        with pytest.raises(ParameterViolation):
            pdw_time_slope(100.0, 210.0, P200)
        with pytest.raises(DomainError):
            PdwParams(0.0)


class TestFiniteDifferenceOracle:
    def test_matches_analytic_partials(self):
        for d in (10.0, 100.0, 250.0):
            for ddot in (-150.0, -10.0, 0.0, 120.0):
                analytic_d = pdw_partial_d(d, ddot, P200)
                analytic_r = pdw_partial_ddot(d, P200)
                assert abs(fd_partial("d", d, ddot, P200) - analytic_d) / abs(analytic_d) < 1e-6
                assert abs(fd_partial("ddot", d, ddot, P200) - analytic_r) / abs(analytic_r) < 1e-6

    def test_rate_partial_does_not_depend_on_the_rate(self):
        estimates = [fd_partial("ddot", 80.0, ddot, P200) for ddot in (-120.0, -40.0, 0.0, 90.0)]
        for est in estimates[1:]:
            assert abs(est - estimates[0]) / abs(estimates[0]) < 1e-6

    def test_explicit_step_override(self):
        analytic = pdw_partial_d(100.0, -100.0, P200)
        assert abs(fd_partial("d", 100.0, -100.0, P200, h=1e-4) - analytic) / abs(analytic) < 1e-6

    def test_stencil_domain_checks(self):
        with pytest.raises(DomainError):
            fd_partial("speed", 100.0, 0.0, P200)
        with pytest.raises(DomainError):
            fd_partial("d", 1e-6, 0.0, P200)  # d - h would go negative
        with pytest.raises(DomainError):
            fd_partial("ddot", 100.0, 199.9999, P200)  # ddot + h would hit the bound
        with pytest.raises(DomainError):
            fd_partial("d", 100.0, 250.0, P200)  # center already outside
        with pytest.raises(DomainError):
            fd_partial("d", 100.0, 0.0, P200, h=0.0)


class TestMinmaxNormalize:
    def test_worked_examples(self):
        assert minmax_normalize([1.0, 2.0, 3.0]) == [0.0, 0.5, 1.0]
        assert minmax_normalize([5.0, 5.0, 5.0]) == [0.0, 0.0, 0.0]
        assert minmax_normalize([3.0]) == [0.0]
        assert minmax_normalize([2.0, -2.0, 0.0]) == [1.0, 0.0, 0.5]
        # the converging-study extrema land the quiet start near 0.12
        out = minmax_normalize([0.009375, 0.01, 0.014464])
        assert out[0] == 0.0 and out[2] == 1.0
        assert out[1] == pytest.approx(0.1228, abs=1e-4)

    def test_rejects_empty_and_non_finite(self):
        with pytest.raises(DomainError):
            minmax_normalize([])
        with pytest.raises(DomainError):
            minmax_normalize([1.0, float("nan")])
        with pytest.raises(DomainError):
            minmax_normalize([1.0, float("inf")])

    @settings(max_examples=300)
    @given(st.lists(st.floats(-1e9, 1e9, allow_nan=False), min_size=1, max_size=40))
    def test_property_bounds_extremes_idempotence(self, xs):
        out = minmax_normalize(xs)
        assert all(0.0 <= v <= 1.0 for v in out)
        if max(xs) > min(xs):
            assert min(out) == 0.0 and max(out) == 1.0
            assert minmax_normalize(out) == out  # already spans [0, 1] exactly
        else:
            assert out == [0.0] * len(xs)


class TestPdwTrace:
    def test_extrema_of_the_converging_study(self):
        scenario = local_s1()
        trace = integrate_separation(scenario)
        metric = pdw_trace(trace, P200)
        raws = [s.raw for s in metric.samples]
        i_max = max(range(len(raws)), key=raws.__getitem__)
        i_min = min(range(len(raws)), key=raws.__getitem__)
        # peak just before the t=50 rate change: (1 + 70/200) / (280/3 km)
        assert trace.samples[i_max].t == pytest.approx(50.0, abs=1e-9)
        assert trace.is_pre_event(i_max)
        assert raws[i_max] == pytest.approx(float(Fraction(81, 5600)), abs=1e-9)
        # valley just after the t=10 change: (1 + 50/200) / (400/3 km)
        assert trace.samples[i_min].t == pytest.approx(10.0, abs=1e-9)
        assert not trace.is_pre_event(i_min)
        assert raws[i_min] == pytest.approx(float(Fraction(3, 320)), abs=1e-9)
        assert raws[0] == pytest.approx(0.01, abs=1e-12)
        norm = [s.normalized for s in metric.samples]
        assert norm[i_max] == 1.0 and norm[i_min] == 0.0
        assert all(0.0 <= v <= 1.0 for v in norm)
        assert metric.units == "1/km"
        assert [s.t for s in metric.samples] == [s.t for s in trace.samples]

    def test_requires_matching_rate_bound(self):
        trace = integrate_separation(local_s1())
        with pytest.raises(ParameterViolation):
            pdw_trace(trace, PdwParams(300.0))

    def test_constant_run_normalizes_to_zeros(self):
        scenario = PairScenario(
            name="flat",
            predecessor=SpeedProfile.constant(650.0, 20.0),
            follower=SpeedProfile.constant(650.0, 20.0),
            d0=80.0,
            t_f=20.0,
            ddot_max=100.0,
        )
        metric = pdw_trace(integrate_separation(scenario), PdwParams(100.0))
        assert all(s.raw == pytest.approx(1.0 / 80.0) for s in metric.samples)
        assert all(s.normalized == 0.0 for s in metric.samples)


class TestDynamicDensity:
    def test_counts_aircraft_with_events_in_the_trailing_window(self):
        scenario = local_s1()
        trace = integrate_separation(scenario)
        dd = dynamic_density(scenario, trace, DdParams())
        assert dd.units == "aircraft"
        assert metric_value_at(trace, dd, 5.0).raw == 0.0  # quiet start
        assert metric_value_at(trace, dd, 11.0).raw == 1.0  # predecessor stepped at t=10
        assert metric_value_at(trace, dd, 31.0).raw == 2.0  # both aircraft stepped at t=30
        assert metric_value_at(trace, dd, 11.5).raw == 1.0
        assert metric_value_at(trace, dd, 12.0).raw == 0.0  # window is open on the left
        # pre-event row at a changepoint still reflects the window up to, not
        # including, the event itself
        assert metric_value_at(trace, dd, 30.0, pre_event=True).raw == 0.0
        assert metric_value_at(trace, dd, 30.0).raw == 2.0

    def test_threshold_filters_small_steps(self):
        predecessor = SpeedProfile(((0.0, 600.0), (5.0, 601.0)), 10.0)  # 1 km/h: ignored
        follower = SpeedProfile(((0.0, 700.0), (5.0, 702.0)), 10.0)  # 2 km/h: counted
        scenario = PairScenario("thr", predecessor, follower, 100.0, 10.0, 150.0)
        trace = integrate_separation(scenario)
        dd = dynamic_density(scenario, trace, DdParams())
        assert metric_value_at(trace, dd, 6.0).raw == 1.0
        loose = dynamic_density(scenario, trace, DdParams(speed_threshold=0.5))
        assert metric_value_at(trace, loose, 6.0).raw == 2.0

    def test_constant_speeds_normalize_to_zeros(self):
        scenario = PairScenario(
            name="flat",
            predecessor=SpeedProfile.constant(650.0, 20.0),
            follower=SpeedProfile.constant(600.0, 20.0),
            d0=80.0,
            t_f=20.0,
            ddot_max=100.0,
        )
        trace = integrate_separation(scenario)
        dd = dynamic_density(scenario, trace)
        assert all(s.raw == 0.0 for s in dd.samples)
        assert all(s.normalized == 0.0 for s in dd.samples)

    def test_parameter_validation(self):
        scenario = local_s1()
        trace = integrate_separation(scenario)
        with pytest.raises(DomainError):
            dynamic_density(scenario, trace, DdParams(window=61.0))
        with pytest.raises(DomainError):
            DdParams(window=0.0)
        with pytest.raises(DomainError):
            DdParams(speed_threshold=-1.0)

    def test_symmetric_under_role_swap(self):
        scenario = local_s1()
        swapped = replace(
            scenario, predecessor=scenario.follower, follower=scenario.predecessor, d0=90.0
        )
        a = dynamic_density(scenario, integrate_separation(scenario))
        b = dynamic_density(swapped, integrate_separation(swapped))
        assert [(s.t, s.raw) for s in a.samples] == [(s.t, s.raw) for s in b.samples]

    @settings(max_examples=25, deadline=None)
    @given(pair_scenarios())
    def test_property_symmetric_under_role_swap(self, scenario):
        swapped = replace(scenario, predecessor=scenario.follower, follower=scenario.predecessor)
        a = dynamic_density(scenario, integrate_separation(scenario), DdParams(window=1.0))
        b = dynamic_density(swapped, integrate_separation(swapped), DdParams(window=1.0))
        assert [(s.t, s.raw) for s in a.samples] == [(s.t, s.raw) for s in b.samples]


@settings(max_examples=500)
@given(d=st.floats(0.1, 1000.0), ddot=st.floats(-199.999, 199.999))
def test_property_pdw_is_strictly_positive(d, ddot):
    assert pdw(d, ddot, P200) > 0.0


@settings(max_examples=200)
@given(d=st.floats(0.1, 500.0), bump=st.floats(1e-3, 100.0), ddot=st.floats(-199.0, 199.0))
def test_property_pdw_strictly_decreases_in_separation(d, bump, ddot):
    assert pdw(d + bump, ddot, P200) < pdw(d, ddot, P200)


@settings(max_examples=200)
@given(d=st.floats(0.1, 500.0), ddot=st.floats(-199.0, 150.0), bump=st.floats(0.5, 49.0))
def test_property_pdw_strictly_decreases_in_rate(d, ddot, bump):
    assert pdw(d, ddot + bump, P200) < pdw(d, ddot, P200)


@settings(max_examples=200)
@given(d=st.floats(0.5, 500.0), ddot=st.floats(-199.0, 150.0), bump=st.floats(0.5, 49.0))
def test_property_separation_sensitivity_grows_with_divergence(d, ddot, bump):
    # d-partial is negative everywhere but closer to zero for diverging pairs
    assert pdw_partial_d(d, ddot + bump, P200) > pdw_partial_d(d, ddot, P200)


@settings(max_examples=200)
@given(d=st.floats(0.5, 500.0), rate=st.floats(1.0, 150.0), extra=st.floats(1.0, 49.0))
def test_property_slope_steeper_for_faster_closure(d, rate, extra):
    slow = pdw_time_slope(d, -rate, P200)
    fast = pdw_time_slope(d, -(rate + extra), P200)
    assert fast > slow > 0.0


@settings(max_examples=200)
@given(d=st.floats(1.0, 500.0), ddot=st.floats(-190.0, 190.0))
def test_property_fd_oracle_confirms_analytic_partials(d, ddot):
    analytic_d = pdw_partial_d(d, ddot, P200)
    analytic_r = pdw_partial_ddot(d, P200)
    assert abs(fd_partial("d", d, ddot, P200) - analytic_d) / abs(analytic_d) < 1e-6
    assert abs(fd_partial("ddot", d, ddot, P200) - analytic_r) / abs(analytic_r) < 1e-6
    assert analytic_d < 0.0 and analytic_r < 0.0
