"""Agent placement and migration over capacity-constrained edge servers."""

from ._antllm import (
    Infeasible,
    ParseError,
    Scenario,
    ValidationError,
    compare,
    generate_scenario,
    migrate,
    oracle_check,
    place,
    simulate,
)

__all__ = [
    "Infeasible",
    "ParseError",
    "Scenario",
    "ValidationError",
    "compare",
    "generate_scenario",
    "migrate",
    "oracle_check",
    "place",
    "simulate",
]
