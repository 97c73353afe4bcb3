"""Deterministic simulation of predecessor-follower aircraft pairs in cruise,
with a separation-based pairwise workload metric and a dynamic-density
baseline for comparison."""

from .core_model import (
    DEFAULT_SAMPLE_DT_MIN,
    DEFAULT_UNSAFE_SEPARATION_KM,
    PairScenario,
    SeparationSample,
    SeparationTrace,
    SpeedProfile,
    brute_force_separation,
    integrate_separation,
    separation_rate,
)
from .errors import (
    ConflictError,
    DomainError,
    ParameterViolation,
    PdwsimError,
    ScenarioError,
    ScenarioParseError,
    ScenarioValidationError,
)
from .metrics import (
    DdParams,
    MetricSample,
    MetricTrace,
    PdwParams,
    dynamic_density,
    fd_partial,
    minmax_normalize,
    pdw,
    pdw_partial_d,
    pdw_partial_ddot,
    pdw_time_slope,
    pdw_trace,
)
from .scenarios import (
    builtin_scenario,
    parse_scenario_file,
    scenario_from_dict,
    scenario_to_dict,
    write_scenario_file,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_SAMPLE_DT_MIN",
    "DEFAULT_UNSAFE_SEPARATION_KM",
    "ConflictError",
    "DdParams",
    "DomainError",
    "MetricSample",
    "MetricTrace",
    "PairScenario",
    "ParameterViolation",
    "PdwParams",
    "PdwsimError",
    "ScenarioError",
    "ScenarioParseError",
    "ScenarioValidationError",
    "SeparationSample",
    "SeparationTrace",
    "SpeedProfile",
    "brute_force_separation",
    "builtin_scenario",
    "dynamic_density",
    "fd_partial",
    "integrate_separation",
    "minmax_normalize",
    "parse_scenario_file",
    "pdw",
    "pdw_partial_d",
    "pdw_partial_ddot",
    "pdw_time_slope",
    "pdw_trace",
    "scenario_from_dict",
    "scenario_to_dict",
    "separation_rate",
    "write_scenario_file",
    "__version__",
]
