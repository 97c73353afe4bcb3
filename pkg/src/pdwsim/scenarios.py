"""Built-in demonstration scenarios and the external scenario-file format.

Scenario files are JSON objects whose field names carry the units:

    {
      "name": "example",
      "t_f_min": 60,
      "d0_km": 150,
      "ddot_max_kmh": 200,
      "sample_dt_min": 0.1,
      "predecessor": [{"t_min": 0, "v_kmh": 600}, {"t_min": 10, "v_kmh": 650}],
      "follower":    [{"t_min": 0, "v_kmh": 700}]
    }

``sample_dt_min`` is optional (default 0.1); everything else is required and
unknown fields are rejected.  Parsing reports malformed JSON with line and
column; validation errors name the violated invariant and the offending
field.
"""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Any

from .core_model import DEFAULT_SAMPLE_DT_MIN, PairScenario, SpeedProfile
from .errors import (
    DomainError,
    ParameterViolation,
    ScenarioParseError,
    ScenarioValidationError,
)

HORIZON_MIN = 60.0
DEFAULT_DDOT_MAX_KMH = 200.0
S1_D0_KM = 150.0  # converging pair starts 150 km apart
S2_D0_KM = 90.0  # diverging pair starts 90 km apart

# Alternating 600/650 km/h on 10-minute segments.
_ALTERNATING_PROFILE = (
    (0.0, 600.0),
    (10.0, 650.0),
    (20.0, 600.0),
    (30.0, 650.0),
    (40.0, 600.0),
    (50.0, 650.0),
)
# 700 km/h for the first half hour, then 670 km/h.
_TWO_STEP_PROFILE = ((0.0, 700.0), (30.0, 670.0))

_TOP_FIELDS = {
    "name",
    "t_f_min",
    "d0_km",
    "ddot_max_kmh",
    "sample_dt_min",
    "predecessor",
    "follower",
}
_REQUIRED_FIELDS = _TOP_FIELDS - {"sample_dt_min"}
_BREAKPOINT_FIELDS = {"t_min", "v_kmh"}


def builtin_scenario(scenario_id: str) -> PairScenario:
    """One of the two built-in 60-minute pair scenarios.

    "s1" is the converging pair: the predecessor alternates 600/650 km/h
    every 10 minutes while the follower flies 700 km/h for 30 minutes and
    670 km/h after.  "s2" swaps the two roles (and starts closer), so the
    same speed history plays out as a diverging pair.
    """
    if scenario_id == "s1":
        pred, fol, d0 = _ALTERNATING_PROFILE, _TWO_STEP_PROFILE, S1_D0_KM
    elif scenario_id == "s2":
        pred, fol, d0 = _TWO_STEP_PROFILE, _ALTERNATING_PROFILE, S2_D0_KM
    else:
        raise DomainError(f"unknown scenario id {scenario_id!r} (expected 's1' or 's2')")
    return PairScenario(
        name=scenario_id,
        predecessor=SpeedProfile(pred, HORIZON_MIN),
        follower=SpeedProfile(fol, HORIZON_MIN),
        d0=d0,
        t_f=HORIZON_MIN,
        ddot_max=DEFAULT_DDOT_MAX_KMH,
    )


def _read_source(source: Any) -> str:
    if isinstance(source, (str, os.PathLike)):
        try:
            return Path(source).read_text(encoding="utf-8")
        except OSError as exc:
            raise ScenarioParseError(f"cannot read scenario file {source!s}: {exc}") from exc
    if hasattr(source, "read"):
        data = source.read()
        if isinstance(data, bytes):
            try:
                return data.decode("utf-8")
            except UnicodeDecodeError as exc:
                raise ScenarioParseError(f"scenario document is not valid UTF-8: {exc}") from exc
        return data
    raise ScenarioParseError(
        f"unsupported scenario source {type(source).__name__}; pass a path or an open stream"
    )


def _as_number(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioValidationError(f"field {where}: expected a number, got {value!r}")
    return float(value)


def _parse_profile(doc: dict, key: str, t_f: float) -> SpeedProfile:
    raw = doc[key]
    if not isinstance(raw, list) or not raw:
        raise ScenarioValidationError(f"field {key}: must be a non-empty array of breakpoints")
    breakpoints = []
    for i, item in enumerate(raw):
        where = f"{key}[{i}]"
        if not isinstance(item, dict):
            raise ScenarioValidationError(f"field {where}: breakpoint must be an object")
        unknown = set(item) - _BREAKPOINT_FIELDS
        if unknown:
            raise ScenarioValidationError(
                f"field {where}: unknown field(s): {', '.join(sorted(unknown))}"
            )
        missing = _BREAKPOINT_FIELDS - set(item)
        if missing:
            raise ScenarioValidationError(
                f"field {where}: missing required field(s): {', '.join(sorted(missing))}"
            )
        t = _as_number(item["t_min"], f"{where}.t_min")
        v = _as_number(item["v_kmh"], f"{where}.v_kmh")
        breakpoints.append((t, v))
    try:
        return SpeedProfile(tuple(breakpoints), t_f)
    except DomainError as exc:
        raise ScenarioValidationError(f"field {key}: {exc}") from exc


def scenario_from_dict(doc: Any) -> PairScenario:
    """Validate a plain-dict scenario document and build the scenario.

    Inverse of :func:`scenario_to_dict`.
    """
    if not isinstance(doc, dict):
        raise ScenarioValidationError("scenario document must be a JSON object")
    unknown = set(doc) - _TOP_FIELDS
    if unknown:
        raise ScenarioValidationError(f"unknown field(s): {', '.join(sorted(unknown))}")
    missing = _REQUIRED_FIELDS - set(doc)
    if missing:
        raise ScenarioValidationError(f"missing required field(s): {', '.join(sorted(missing))}")
    name = doc["name"]
    if not isinstance(name, str) or not name:
        raise ScenarioValidationError("field name: must be non-empty text")
    t_f = _as_number(doc["t_f_min"], "t_f_min")
    d0 = _as_number(doc["d0_km"], "d0_km")
    ddot_max = _as_number(doc["ddot_max_kmh"], "ddot_max_kmh")
    if "sample_dt_min" in doc:
        sample_dt = _as_number(doc["sample_dt_min"], "sample_dt_min")
    else:
        sample_dt = DEFAULT_SAMPLE_DT_MIN
    if t_f <= 0.0:
        raise ScenarioValidationError("field t_f_min: t_f must be positive")
    if d0 <= 0.0:
        raise ScenarioValidationError("field d0_km: d0 must be positive")
    if ddot_max <= 0.0:
        raise ScenarioValidationError("field ddot_max_kmh: ddot_max must be positive")
    if sample_dt <= 0.0:
        raise ScenarioValidationError("field sample_dt_min: sample_dt must be positive")
    predecessor = _parse_profile(doc, "predecessor", t_f)
    follower = _parse_profile(doc, "follower", t_f)
    scenario = PairScenario(
        name=name,
        predecessor=predecessor,
        follower=follower,
        d0=d0,
        t_f=t_f,
        ddot_max=ddot_max,
        sample_dt=sample_dt,
    )
    try:
        scenario.check_rate_bound()
    except ParameterViolation as exc:
        raise ScenarioValidationError(f"field ddot_max_kmh: {exc}") from exc
    return scenario


def parse_scenario_file(source: Any) -> PairScenario:
    """Parse and validate a scenario document.

    ``source`` may be a filesystem path or an open text/binary stream.
    Raises ScenarioParseError for unreadable or malformed input (with line
    and column for JSON errors) and ScenarioValidationError when the
    document breaks an invariant.
    """
    text = _read_source(source)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioParseError(
            f"malformed scenario document: {exc.msg} (line {exc.lineno}, column {exc.colno})"
        ) from exc
    return scenario_from_dict(doc)


def scenario_to_dict(scenario: PairScenario) -> dict:
    """Plain-dict form of a scenario, matching the file grammar exactly."""
    return {
        "name": scenario.name,
        "t_f_min": scenario.t_f,
        "d0_km": scenario.d0,
        "ddot_max_kmh": scenario.ddot_max,
        "sample_dt_min": scenario.sample_dt,
        "predecessor": [
            {"t_min": t, "v_kmh": v} for t, v in scenario.predecessor.breakpoints
        ],
        "follower": [
            {"t_min": t, "v_kmh": v} for t, v in scenario.follower.breakpoints
        ],
    }


def write_scenario_file(scenario: PairScenario, path: Any) -> None:
    """Serialize a scenario to ``path``; parse_scenario_file inverts this."""
    text = json.dumps(scenario_to_dict(scenario), indent=2) + "\n"
    Path(path).write_text(text, encoding="utf-8")
