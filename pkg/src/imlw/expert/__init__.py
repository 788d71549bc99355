"""Scripted demonstrators with a collector-proficiency model."""

from .collect import collect
from .controller import K_P, PlanExecutor, act
from .planner import ExpertPlan, Waypoint, plan
from .profiles import BUILTIN_PROFILES, ProficiencyProfile

__all__ = [
    "collect", "K_P", "PlanExecutor", "act", "ExpertPlan", "Waypoint", "plan",
    "BUILTIN_PROFILES", "ProficiencyProfile",
]
