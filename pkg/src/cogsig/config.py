"""Pipeline configuration shared by the library stages and the CLI.

A single config object travels through every stage and is echoed into
every output artifact (logs, case tables, models, reports) together with
a format-version string, so any result can be traced back to the exact
settings that produced it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .discretize import METHOD_EQUAL_FREQUENCY, METHOD_EQUAL_WIDTH, METHODS

MODEL_FORMAT_VERSION = "cogsig-model/1"
REPORT_FORMAT_VERSION = "cogsig-report/1"
TABLE_FORMAT_VERSION = "cogsig-case-table/1"
LOG_FORMAT_VERSION = "cogsig-log/1"
PROFILE_FORMAT_VERSION = "cogsig-profile/1"
TASK_FORMAT_VERSION = "cogsig-task/1"


@dataclass(frozen=True)
class PipelineConfig:
    """Knobs of the identification pipeline.

    ``drop_empty_cases`` excludes all-NILL ticks from model fitting and
    classification; extraction still materializes them, so the stored case
    tables keep the full tick grid.
    """

    tick_s: float = 0.01
    method: str = METHOD_EQUAL_WIDTH
    k: int = 10
    threshold_t: float = 0.1
    smoothing_alpha: float = 1.0
    split: str = "interleaved"
    log_base: float = math.e
    drop_empty_cases: bool = True

    def __post_init__(self):
        if self.tick_s <= 0:
            raise ValueError(f"tick_s must be positive, got {self.tick_s}")
        if self.method not in METHODS:
            raise ValueError(f"unknown discretization method {self.method!r}")
        if self.k < 2:
            raise ValueError(f"interval count must be >= 2, got {self.k}")
        if self.threshold_t < 0:
            raise ValueError(f"threshold must be nonnegative, got {self.threshold_t}")
        if self.smoothing_alpha < 0:
            raise ValueError(f"smoothing alpha must be nonnegative, got {self.smoothing_alpha}")

    def to_dict(self) -> dict:
        return {
            "tick_s": self.tick_s,
            "method": self.method,
            "k": self.k,
            "threshold_t": self.threshold_t,
            "smoothing_alpha": self.smoothing_alpha,
            "split": self.split,
            "log_base": self.log_base,
            "drop_empty_cases": self.drop_empty_cases,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "PipelineConfig":
        return cls(
            tick_s=float(obj.get("tick_s", 0.01)),
            method=str(obj.get("method", METHOD_EQUAL_WIDTH)),
            k=int(obj.get("k", 10)),
            threshold_t=float(obj.get("threshold_t", 0.1)),
            smoothing_alpha=float(obj.get("smoothing_alpha", 1.0)),
            split=str(obj.get("split", "interleaved")),
            log_base=float(obj.get("log_base", math.e)),
            drop_empty_cases=bool(obj.get("drop_empty_cases", True)),
        )

    def with_(self, **kwargs) -> "PipelineConfig":
        return replace(self, **kwargs)


# The two standard parameterizations used throughout the test protocol.
PRESET_EQUAL_FREQUENCY = PipelineConfig(method=METHOD_EQUAL_FREQUENCY, k=5)
PRESET_EQUAL_WIDTH = PipelineConfig(method=METHOD_EQUAL_WIDTH, k=10)
