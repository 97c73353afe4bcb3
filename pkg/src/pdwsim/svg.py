"""Self-contained SVG rendering of a scenario run: speed profiles on the
left, normalized metric traces on the right."""

from __future__ import annotations

import math

from .core_model import PairScenario, SpeedProfile
from .metrics import MetricTrace

_PANEL_W = 360.0
_PANEL_H = 250.0
_MARGIN_L = 62.0
_MARGIN_T = 46.0
_MARGIN_B = 46.0
_GAP = 84.0
_WIDTH = _MARGIN_L + _PANEL_W + _GAP + _PANEL_W + 28.0
_HEIGHT = _MARGIN_T + _PANEL_H + _MARGIN_B

_PRED_COLOR = "#1f77b4"
_FOL_COLOR = "#ff7f0e"
_PDW_COLOR = "#2ca02c"
_DD_COLOR = "#d62728"


def _nice_ticks(lo: float, hi: float, target: int = 6) -> list[float]:
    if hi <= lo:
        return [lo]
    raw_step = (hi - lo) / target
    mag = 10.0 ** math.floor(math.log10(raw_step))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        step = mult * mag
        if raw_step <= step:
            break
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-9 * step:
        ticks.append(round(t / step) * step)
        t += step
    return ticks


def _fmt_num(x: float) -> str:
    return f"{x:.6g}"


class _Panel:
    """Maps data coordinates onto one plot area and accumulates elements."""

    def __init__(self, x0, title, t_max, y_lo, y_hi):
        self.x0 = x0
        self.t_max = t_max
        self.y_lo = y_lo
        self.y_hi = y_hi
        self.parts: list[str] = []
        self.parts.append(
            f'<text x="{x0 + _PANEL_W / 2:.1f}" y="{_MARGIN_T - 18:.1f}" '
            f'text-anchor="middle" font-size="14" font-weight="bold">{title}</text>'
        )

    def px(self, t: float) -> float:
        return self.x0 + _PANEL_W * (t / self.t_max)

    def py(self, y: float) -> float:
        frac = (y - self.y_lo) / (self.y_hi - self.y_lo)
        return _MARGIN_T + _PANEL_H * (1.0 - frac)

    def axes(self, x_label: str, y_label: str) -> None:
        x0, x1 = self.x0, self.x0 + _PANEL_W
        y0, y1 = _MARGIN_T, _MARGIN_T + _PANEL_H
        self.parts.append(
            f'<rect x="{x0:.1f}" y="{y0:.1f}" width="{_PANEL_W:.1f}" height="{_PANEL_H:.1f}" '
            f'fill="none" stroke="#444" stroke-width="1"/>'
        )
        for t in _nice_ticks(0.0, self.t_max):
            px = self.px(t)
            self.parts.append(
                f'<line x1="{px:.1f}" y1="{y1:.1f}" x2="{px:.1f}" y2="{y1 + 4:.1f}" stroke="#444"/>'
            )
            self.parts.append(
                f'<text x="{px:.1f}" y="{y1 + 17:.1f}" text-anchor="middle" font-size="11">'
                f"{_fmt_num(t)}</text>"
            )
        for y in _nice_ticks(self.y_lo, self.y_hi, 5):
            py = self.py(y)
            self.parts.append(
                f'<line x1="{x0 - 4:.1f}" y1="{py:.1f}" x2="{x0:.1f}" y2="{py:.1f}" stroke="#444"/>'
            )
            self.parts.append(
                f'<text x="{x0 - 7:.1f}" y="{py + 4:.1f}" text-anchor="end" font-size="11">'
                f"{_fmt_num(y)}</text>"
            )
        self.parts.append(
            f'<text x="{x0 + _PANEL_W / 2:.1f}" y="{y1 + 34:.1f}" text-anchor="middle" '
            f'font-size="12">{x_label}</text>'
        )
        self.parts.append(
            f'<text x="{x0 - 48:.1f}" y="{_MARGIN_T + _PANEL_H / 2:.1f}" text-anchor="middle" '
            f'font-size="12" transform="rotate(-90 {x0 - 48:.1f} {_MARGIN_T + _PANEL_H / 2:.1f})">'
            f"{y_label}</text>"
        )

    def polyline(self, points, color: str, dashed: bool = False) -> None:
        coords = " ".join(f"{self.px(t):.2f},{self.py(y):.2f}" for t, y in points)
        dash = ' stroke-dasharray="7 4"' if dashed else ""
        self.parts.append(
            f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.8"{dash}/>'
        )

    def legend(self, entries) -> None:
        # entries: (label, color, dashed), drawn inside the top-right corner
        x = self.x0 + _PANEL_W - 10
        y = _MARGIN_T + 14
        for label, color, dashed in entries:
            dash = ' stroke-dasharray="7 4"' if dashed else ""
            self.parts.append(
                f'<line x1="{x - 120:.1f}" y1="{y:.1f}" x2="{x - 96:.1f}" y2="{y:.1f}" '
                f'stroke="{color}" stroke-width="1.8"{dash}/>'
            )
            self.parts.append(
                f'<text x="{x - 90:.1f}" y="{y + 4:.1f}" font-size="11">{label}</text>'
            )
            y += 16


def _step_points(profile: SpeedProfile) -> list[tuple[float, float]]:
    pts = []
    bps = profile.breakpoints
    for (t, v), (t_next, _) in zip(bps, bps[1:]):
        pts.append((t, v))
        pts.append((t_next, v))
    pts.append((bps[-1][0], bps[-1][1]))
    pts.append((profile.t_end, bps[-1][1]))
    return pts


def render_scenario_svg(
    scenario: PairScenario,
    pdw_trace: MetricTrace,
    dd_trace: MetricTrace,
) -> str:
    """Two-panel figure for one run.

    The metric traces include duplicated rows at rate changepoints, so jumps
    render as vertical risers without any special casing here.
    """
    speeds = [v for _, v in scenario.predecessor.breakpoints]
    speeds += [v for _, v in scenario.follower.breakpoints]
    pad = max(5.0, 0.08 * (max(speeds) - min(speeds)) or 5.0)
    left = _Panel(_MARGIN_L, "Airspeed profiles", scenario.t_f, min(speeds) - pad, max(speeds) + pad)
    left.axes("t [min]", "v [km/h]")
    left.polyline(_step_points(scenario.predecessor), _PRED_COLOR)
    left.polyline(_step_points(scenario.follower), _FOL_COLOR)
    left.legend([("predecessor", _PRED_COLOR, False), ("follower", _FOL_COLOR, False)])

    right = _Panel(
        _MARGIN_L + _PANEL_W + _GAP, "Normalized metrics", scenario.t_f, -0.02, 1.02
    )
    right.axes("t [min]", "normalized value")
    right.polyline([(s.t, s.normalized) for s in pdw_trace.samples], _PDW_COLOR)
    right.polyline([(s.t, s.normalized) for s in dd_trace.samples], _DD_COLOR, dashed=True)
    right.legend([("pairwise workload", _PDW_COLOR, False), ("dynamic density", _DD_COLOR, True)])

    body = "\n".join(left.parts + right.parts)
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH:.0f}" height="{_HEIGHT:.0f}" '
        f'viewBox="0 0 {_WIDTH:.0f} {_HEIGHT:.0f}" font-family="Helvetica, Arial, sans-serif">\n'
        f'<rect width="{_WIDTH:.0f}" height="{_HEIGHT:.0f}" fill="white"/>\n'
        f'<text x="{_WIDTH / 2:.1f}" y="20" text-anchor="middle" font-size="15" '
        f'font-weight="bold">scenario {scenario.name}</text>\n'
        f"{body}\n</svg>\n"
    )
