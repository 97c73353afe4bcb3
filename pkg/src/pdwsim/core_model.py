"""Kinematics of a predecessor-follower aircraft pair in cruise.

Two aircraft fly the same route at piecewise-constant airspeeds; the state of
interest is the along-track separation between them.  Because the speed
profiles are step functions, the separation rate is piecewise constant and
the separation itself is piecewise affine, so the trajectory can be advanced
exactly from breakpoint to breakpoint with no stepping error.  A deliberately
naive forward-Euler integrator is provided alongside as an independent
cross-check.

Unit conventions at every public interface: separation in km, airspeed in
km/h, time in minutes.  The factor of 60 lives inside the integrators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .errors import ConflictError, DomainError, ParameterViolation

MIN_PER_HOUR = 60.0

DEFAULT_SAMPLE_DT_MIN = 0.1

# Advisory floor only (5 NM in km); integration flags it but never aborts.
DEFAULT_UNSAFE_SEPARATION_KM = 9.26

# Tolerance for snapping uniform grid points onto profile breakpoints, in
# minutes.  k * sample_dt can land within one ulp of a breakpoint and must
# not produce a near-duplicate sample next to it.
_TIME_EPS = 1e-9


@dataclass(frozen=True)
class SpeedProfile:
    """Piecewise-constant airspeed profile over [0, t_end].

    ``breakpoints`` holds (t_start_min, v_kmh) pairs with strictly increasing
    times, the first at t=0 and all below ``t_end``.  The profile is
    right-continuous: each speed holds on [t_k, t_{k+1}), the last one on
    [t_last, t_end].
    """

    breakpoints: tuple[tuple[float, float], ...]
    t_end: float

    def __post_init__(self) -> None:
        bps = tuple((float(t), float(v)) for t, v in self.breakpoints)
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "t_end", float(self.t_end))
        if not bps:
            raise DomainError("speed profile needs at least one breakpoint")
        if bps[0][0] != 0.0:
            raise DomainError(
                f"first breakpoint must start at t=0, got t={bps[0][0]:g}"
            )
        for (t_prev, _), (t_next, _) in zip(bps, bps[1:]):
            if t_next <= t_prev:
                raise DomainError(
                    "breakpoint times must be strictly increasing, got "
                    f"{t_prev:g} followed by {t_next:g}"
                )
        if bps[-1][0] >= self.t_end:
            raise DomainError(
                f"breakpoint times must lie strictly below t_end={self.t_end:g}"
            )
        for t, v in bps:
            if v <= 0.0:
                raise DomainError(f"airspeed must be positive, got {v:g} km/h at t={t:g}")

    @classmethod
    def constant(cls, v_kmh: float, t_end: float) -> "SpeedProfile":
        """Single-segment profile holding ``v_kmh`` over the whole horizon."""
        return cls(((0.0, v_kmh),), t_end)

    def speed_at(self, t: float) -> float:
        """Airspeed in km/h at time ``t`` minutes; right-continuous at breakpoints.

        ``t`` must lie in [0, t_end]; at t_end the last segment's speed applies.
        """
        if t < 0.0 or t > self.t_end:
            raise DomainError(f"t={t:g} outside profile domain [0, {self.t_end:g}]")
        v = self.breakpoints[0][1]
        for t_k, v_k in self.breakpoints:
            if t_k <= t:
                v = v_k
            else:
                break
        return v

    def speed_before(self, t: float) -> float:
        """Left limit of the airspeed at ``t``; differs from speed_at only at breakpoints."""
        if t <= 0.0 or t > self.t_end:
            raise DomainError(f"t={t:g} outside (0, {self.t_end:g}] for a left limit")
        v = self.breakpoints[0][1]
        for t_k, v_k in self.breakpoints:
            if t_k < t:
                v = v_k
            else:
                break
        return v

    @property
    def interior_breakpoints(self) -> tuple[float, ...]:
        """Times where a new segment begins, excluding t=0."""
        return tuple(t for t, _ in self.breakpoints[1:])

    def change_times(self, threshold_kmh: float = 0.0) -> tuple[float, ...]:
        """Times of airspeed changes with magnitude strictly above the threshold."""
        out = []
        for (_, v_prev), (t, v) in zip(self.breakpoints, self.breakpoints[1:]):
            if abs(v - v_prev) > threshold_kmh:
                out.append(t)
        return tuple(out)


def separation_rate(v_pred_kmh: float, v_fol_kmh: float) -> float:
    """Separation rate in km/h: predecessor speed minus follower speed.

    Negative while the pair converges (follower faster), positive while it
    diverges, zero when speeds match.
    """
    if v_pred_kmh <= 0.0 or v_fol_kmh <= 0.0:
        raise DomainError("airspeeds must be positive")
    return v_pred_kmh - v_fol_kmh


@dataclass(frozen=True)
class PairScenario:
    """A predecessor-follower pair with a shared horizon and rate bound.

    ``ddot_max`` is the strict bound on |separation rate| that the metric
    layer relies on; it must dominate every segmentwise speed difference of
    the two profiles (checked where the bound is actually consumed, see
    :meth:`check_rate_bound`).
    """

    name: str
    predecessor: SpeedProfile
    follower: SpeedProfile
    d0: float  # initial separation, km
    t_f: float  # horizon, minutes
    ddot_max: float  # strict bound on |separation rate|, km/h
    sample_dt: float = DEFAULT_SAMPLE_DT_MIN  # output grid step, minutes

    def __post_init__(self) -> None:
        if self.d0 <= 0.0:
            raise DomainError("d0 must be positive")
        if self.t_f <= 0.0:
            raise DomainError("t_f must be positive")
        if self.ddot_max <= 0.0:
            raise DomainError("ddot_max must be positive")
        if self.sample_dt <= 0.0:
            raise DomainError("sample_dt must be positive")
        if self.predecessor.t_end != self.t_f:
            raise DomainError(
                f"predecessor profile spans [0, {self.predecessor.t_end:g}], expected t_f={self.t_f:g}"
            )
        if self.follower.t_end != self.t_f:
            raise DomainError(
                f"follower profile spans [0, {self.follower.t_end:g}], expected t_f={self.t_f:g}"
            )

    def rate_changepoints(self) -> tuple[float, ...]:
        """Sorted union of both profiles' interior breakpoint times."""
        times = set(self.predecessor.interior_breakpoints)
        times.update(self.follower.interior_breakpoints)
        return tuple(sorted(times))

    def max_rate_magnitude(self) -> float:
        """Largest |separation rate| over the horizon.

        Rates are constant between changepoints, so probing each segment
        start is exhaustive.
        """
        worst = 0.0
        for t in (0.0, *self.rate_changepoints()):
            rate = separation_rate(self.predecessor.speed_at(t), self.follower.speed_at(t))
            worst = max(worst, abs(rate))
        return worst

    def check_rate_bound(self) -> None:
        """Raise ParameterViolation unless ddot_max strictly dominates every segment rate."""
        worst = self.max_rate_magnitude()
        if worst >= self.ddot_max:
            raise ParameterViolation(
                f"ddot_max exceeded: largest |separation rate| over the profiles is "
                f"{worst:g} km/h, which must stay strictly below ddot_max={self.ddot_max:g} km/h"
            )


class SeparationSample(NamedTuple):
    t: float  # minutes
    d: float  # km
    ddot: float  # km/h


@dataclass(frozen=True)
class SeparationTrace:
    """Sampled separation history on the uniform grid augmented with breakpoints.

    Each interior rate changepoint contributes two samples at the same time:
    a pre-event row carrying the outgoing rate, then a post-event row with
    the incoming one.  Separation itself is continuous, so both rows agree on
    d.  Times are therefore non-decreasing, strictly increasing away from
    those duplicated rows, with t=0 and t=t_f appearing once.
    """

    samples: tuple[SeparationSample, ...]
    ddot_max: float  # bound the scenario was integrated under, km/h
    unsafe_threshold: float  # advisory separation floor, km
    unsafe: bool  # True if separation dipped below the advisory floor

    def min_separation(self) -> float:
        return min(s.d for s in self.samples)

    def is_pre_event(self, i: int) -> bool:
        """True when row ``i`` is the pre-event half of a duplicated breakpoint row."""
        return i + 1 < len(self.samples) and self.samples[i + 1].t == self.samples[i].t


def _uniform_interior(a: float, b: float, dt: float) -> list[float]:
    # Grid points k*dt strictly inside (a, b), each computed as a single
    # product so the grid is identical no matter how segments are split.
    # Points within _TIME_EPS of either endpoint are treated as coincident.
    out = []
    k = math.floor(a / dt) + 1
    while True:
        t = k * dt
        if t >= b - _TIME_EPS:
            break
        if t > a + _TIME_EPS:
            out.append(t)
        k += 1
    return out


def _rate_at(scenario: PairScenario, t: float) -> float:
    return separation_rate(scenario.predecessor.speed_at(t), scenario.follower.speed_at(t))


def integrate_separation(
    scenario: PairScenario,
    unsafe_threshold: float = DEFAULT_UNSAFE_SEPARATION_KM,
) -> SeparationTrace:
    """Exact separation trace for the scenario.

    The rate is constant between changepoints, so each segment is advanced
    with one affine step and the sample rows inside it are filled in by
    interpolation; endpoint separations carry no accumulated stepping error.

    Raises ConflictError at the earliest time separation would reach zero,
    and ParameterViolation when ddot_max fails to bound the profiles' rates.
    Separation below ``unsafe_threshold`` only sets the trace's advisory flag.
    """
    scenario.check_rate_bound()
    bounds = (0.0, *scenario.rate_changepoints(), scenario.t_f)
    samples: list[SeparationSample] = []
    d_start = scenario.d0
    for a, b in zip(bounds, bounds[1:]):
        ddot = _rate_at(scenario, a)
        slope = ddot / MIN_PER_HOUR  # km per minute
        d_end = d_start + slope * (b - a)
        if d_end <= 0.0:
            # slope must be negative to get here; the crossing is inside (a, b].
            t_cross = a + d_start / -slope
            raise ConflictError(t_cross)
        samples.append(SeparationSample(a, d_start, ddot))
        for t in _uniform_interior(a, b, scenario.sample_dt):
            samples.append(SeparationSample(t, d_start + slope * (t - a), ddot))
        samples.append(SeparationSample(b, d_end, ddot))
        d_start = d_end
    min_d = min(s.d for s in samples)
    return SeparationTrace(
        samples=tuple(samples),
        ddot_max=scenario.ddot_max,
        unsafe_threshold=unsafe_threshold,
        unsafe=min_d < unsafe_threshold,
    )


def brute_force_separation(
    scenario: PairScenario,
    dt_fine: float,
    unsafe_threshold: float = DEFAULT_UNSAFE_SEPARATION_KM,
) -> SeparationTrace:
    """Forward-Euler separation trace on the same augmented grid.

    ``dt_fine`` must lie in (0, sample_dt/100]; every substep re-derives the
    rate from the speed profiles, so agreement with integrate_separation is
    an end-to-end check of the exact integrator rather than a tautology.
    The rate bound is enforced per substep instead of upfront for the same
    reason.
    """
    if not 0.0 < dt_fine <= scenario.sample_dt / 100.0:
        raise DomainError(
            f"dt_fine must lie in (0, sample_dt/100] = (0, {scenario.sample_dt / 100.0:g}], "
            f"got {dt_fine:g}"
        )
    pred, fol = scenario.predecessor, scenario.follower
    bounds = (0.0, *scenario.rate_changepoints(), scenario.t_f)
    samples: list[SeparationSample] = []
    d = scenario.d0
    for a, b in zip(bounds, bounds[1:]):
        samples.append(SeparationSample(a, d, _rate_at(scenario, a)))
        t_prev = a
        for t_target in (*_uniform_interior(a, b, scenario.sample_dt), b):
            span = t_target - t_prev
            n = max(1, math.ceil(span / dt_fine - 1e-9))
            h = span / n
            for i in range(n):
                rate = _rate_at(scenario, t_prev + i * h)
                if abs(rate) >= scenario.ddot_max:
                    raise ParameterViolation(
                        f"ddot_max exceeded: |separation rate| {abs(rate):g} km/h at "
                        f"t={t_prev + i * h:g} min is not strictly below {scenario.ddot_max:g} km/h"
                    )
                d += rate * h / MIN_PER_HOUR
                if d <= 0.0:
                    raise ConflictError(t_prev + (i + 1) * h)
            if t_target < b:
                row_rate = _rate_at(scenario, t_target)
            else:
                row_rate = separation_rate(pred.speed_before(b), fol.speed_before(b))
            samples.append(SeparationSample(t_target, d, row_rate))
            t_prev = t_target
    min_d = min(s.d for s in samples)
    return SeparationTrace(
        samples=tuple(samples),
        ddot_max=scenario.ddot_max,
        unsafe_threshold=unsafe_threshold,
        unsafe=min_d < unsafe_threshold,
    )
