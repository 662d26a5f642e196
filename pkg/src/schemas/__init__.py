"""
Pydantic schemas for scenarios, reports and artifact metadata.

This module consolidates every serialized structure of the toolkit.
"""

from .common import *
from .reports import *
from .scenario import *

__all__ = [
    # Common schemas
    "ArtifactMeta",
    "MessageResponse",
    # Report schemas
    "RankReport",
    "TruncationReport",
    "PMPReport",
    "HistoryEntry",
    "PropertyStatus",
    "PropertyResult",
    "VerifyReport",
    # Scenario schemas
    "OptimizerConfig",
    "Sampling",
    "TwoMoons",
    "TargetRule",
    "ScenarioFile",
]
