"""Separation-based workload metric, its partials, and the baseline it is
judged against.

The pairwise metric scores one predecessor-follower pair from its current
separation d (km) and separation rate ddot (km/h):

    pdw(d, ddot) = (1/d) * (1 - ddot/ddot_max)        [1/km]

The baseline is a stripped-down dynamic-density count: how many of the two
aircraft changed airspeed within a trailing time window.  Both metrics are
min-max normalized per run so their shapes can be compared on one axis.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .core_model import PairScenario, SeparationTrace
from .errors import DomainError, ParameterViolation


@dataclass(frozen=True)
class PdwParams:
    """Rate bound consumed by the pairwise workload metric."""

    ddot_max: float  # km/h, strict bound on |ddot|

    def __post_init__(self) -> None:
        if self.ddot_max <= 0.0:
            raise DomainError("ddot_max must be positive")


@dataclass(frozen=True)
class DdParams:
    """Trailing-window settings for the dynamic-density baseline."""

    window: float = 2.0  # minutes
    speed_threshold: float = 1.0  # km/h; changes at or below this are ignored

    def __post_init__(self) -> None:
        if self.window <= 0.0:
            raise DomainError("window must be positive")
        if self.speed_threshold < 0.0:
            raise DomainError("speed_threshold must be non-negative")


class MetricSample(NamedTuple):
    t: float
    raw: float
    normalized: float


@dataclass(frozen=True)
class MetricTrace:
    """A metric evaluated over a separation trace, with its normalized twin."""

    metric_name: str
    units: str
    samples: tuple[MetricSample, ...]

    def raw_values(self) -> list[float]:
        return [s.raw for s in self.samples]

    def normalized_values(self) -> list[float]:
        return [s.normalized for s in self.samples]


def _check_pdw_domain(d: float, ddot: float, params: PdwParams) -> None:
    if d <= 0.0:
        raise DomainError(f"separation must be positive, got d={d:g} km")
    if abs(ddot) >= params.ddot_max:
        raise ParameterViolation(
            f"|ddot|={abs(ddot):g} km/h must stay strictly below ddot_max={params.ddot_max:g} km/h"
        )


def pdw(d: float, ddot: float, params: PdwParams) -> float:
    """Pairwise workload in 1/km, strictly positive on its domain.

    Grows as the pair gets closer (smaller d) and as convergence strengthens
    (more negative ddot); the bound keeps the rate factor inside (0, 2).
    """
    _check_pdw_domain(d, ddot, params)
    return (1.0 / d) * (1.0 - ddot / params.ddot_max)


def pdw_partial_d(d: float, ddot: float, params: PdwParams) -> float:
    """Sensitivity to separation, -(1 - ddot/ddot_max)/d^2; strictly negative."""
    _check_pdw_domain(d, ddot, params)
    return -(1.0 - ddot / params.ddot_max) / (d * d)


def pdw_partial_ddot(d: float, params: PdwParams) -> float:
    """Sensitivity to the separation rate, -1/(d*ddot_max).

    Strictly negative and independent of the rate itself, hence no ddot
    argument.
    """
    if d <= 0.0:
        raise DomainError(f"separation must be positive, got d={d:g} km")
    return -1.0 / (d * params.ddot_max)


def pdw_time_slope(d: float, ddot: float, params: PdwParams) -> float:
    """Instantaneous time derivative of pdw inside a constant-rate segment.

    By the chain rule this is -ddot*(1 - ddot/ddot_max)/d^2, in 1/(km*h):
    positive while converging, negative while diverging, zero at ddot=0, and
    steeper for stronger convergence at fixed d.
    """
    _check_pdw_domain(d, ddot, params)
    return -ddot * (1.0 - ddot / params.ddot_max) / (d * d)


def fd_partial(
    which: str,
    d: float,
    ddot: float,
    params: PdwParams,
    h: float | None = None,
) -> float:
    """Central-difference estimate of a pdw partial; the oracle the analytic
    forms are checked against.

    ``which`` selects the perturbed coordinate, "d" or "ddot".  The default
    step is 1e-5 * max(1, |coordinate|).  The full stencil must stay inside
    the metric's domain (d +- h > 0 and |ddot +- h| < ddot_max).
    """
    if which not in ("d", "ddot"):
        raise DomainError(f"which must be 'd' or 'ddot', got {which!r}")
    x = d if which == "d" else ddot
    if h is None:
        h = 1e-5 * max(1.0, abs(x))
    if h <= 0.0:
        raise DomainError("h must be positive")
    if which == "d":
        if d - h <= 0.0:
            raise DomainError(f"stencil leaves the domain: d-h={d - h:g} <= 0")
        if abs(ddot) >= params.ddot_max:
            raise DomainError(
                f"stencil leaves the domain: |ddot|={abs(ddot):g} >= ddot_max={params.ddot_max:g}"
            )
        hi = pdw(d + h, ddot, params)
        lo = pdw(d - h, ddot, params)
    else:
        if d <= 0.0:
            raise DomainError(f"stencil leaves the domain: d={d:g} <= 0")
        if max(abs(ddot - h), abs(ddot + h)) >= params.ddot_max:
            raise DomainError(
                f"stencil leaves the domain: |ddot+-h| reaches ddot_max={params.ddot_max:g}"
            )
        hi = pdw(d, ddot + h, params)
        lo = pdw(d, ddot - h, params)
    return (hi - lo) / (2.0 * h)


def minmax_normalize(series: Sequence[float]) -> list[float]:
    """Affine rescale of a series onto [0, 1] by its realized extrema.

    A constant series maps to all zeros: no variation reads as no relative
    complexity.  Empty input and non-finite values are rejected.
    """
    values = [float(x) for x in series]
    if not values:
        raise DomainError("cannot normalize an empty series")
    for x in values:
        if not math.isfinite(x):
            raise DomainError(f"cannot normalize non-finite value {x!r}")
    lo = min(values)
    hi = max(values)
    if hi == lo:
        return [0.0] * len(values)
    span = hi - lo
    return [(x - lo) / span for x in values]


def pdw_trace(trace: SeparationTrace, params: PdwParams) -> MetricTrace:
    """Evaluate the pairwise metric over a separation trace.

    Keeps the source grid as-is, including the duplicated rows at rate
    changepoints, so jumps induced by step speed changes show up as a
    pre-event and a post-event value instead of being smoothed away.  The
    params bound must match the bound the trace was integrated under.
    """
    if params.ddot_max != trace.ddot_max:
        raise ParameterViolation(
            f"params.ddot_max={params.ddot_max:g} does not match the trace bound "
            f"{trace.ddot_max:g}"
        )
    raw = [pdw(s.d, s.ddot, params) for s in trace.samples]
    norm = minmax_normalize(raw)
    samples = tuple(
        MetricSample(s.t, r, n) for s, r, n in zip(trace.samples, raw, norm)
    )
    return MetricTrace(metric_name="pdw", units="1/km", samples=samples)


def dynamic_density(
    scenario: PairScenario,
    trace: SeparationTrace,
    params: DdParams = DdParams(),
) -> MetricTrace:
    """Simplified dynamic density over the trace's grid.

    raw(t) counts the aircraft of the pair (0, 1 or 2) whose profile has an
    airspeed change of magnitude above ``params.speed_threshold`` inside the
    trailing window (t - window, t].  Pre-event rows at a changepoint take
    the left limit of that count, i.e. the window [t - window, t), so the
    post-event row is the first to see an event at t itself.
    """
    if params.window > scenario.t_f:
        raise DomainError(
            f"window={params.window:g} min must not exceed the horizon t_f={scenario.t_f:g} min"
        )
    event_lists = [
        sorted(profile.change_times(params.speed_threshold))
        for profile in (scenario.predecessor, scenario.follower)
    ]
    raw: list[float] = []
    for i, s in enumerate(trace.samples):
        left_limit = trace.is_pre_event(i)
        count = 0
        for events in event_lists:
            if left_limit:
                hits = bisect_left(events, s.t) - bisect_left(events, s.t - params.window)
            else:
                hits = bisect_right(events, s.t) - bisect_right(events, s.t - params.window)
            if hits:
                count += 1
        raw.append(float(count))
    norm = minmax_normalize(raw)
    samples = tuple(
        MetricSample(s.t, r, n) for s, r, n in zip(trace.samples, raw, norm)
    )
    return MetricTrace(metric_name="dd", units="aircraft", samples=samples)
