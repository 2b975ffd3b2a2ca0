"""
Run configuration for the closure solvers.
"""

import json
import os
from pathlib import Path
from typing import Any, Dict, Optional, Union

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

# Load environment variables
load_dotenv()

THREADS_ENV = "CURVECLOSE_THREADS"


def default_threads() -> int:
    raw = os.getenv(THREADS_ENV)
    if not raw:
        return 1
    try:
        threads = int(raw)
    except ValueError:
        raise ValueError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
    if threads < 1:
        raise ValueError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return threads


class RunConfig(BaseModel):
    """
    Numerical settings shared by the solvers, the oracle and the CLI.

    Tolerances marked relative are multiplied by the curve speed c.
    """

    model_config = ConfigDict(extra="forbid", validate_assignment=True)

    resolution: int = 4096
    residual_tol: float = Field(1e-8, gt=0, description="two-cut residual, relative")
    k_residual_tol: float = Field(1e-6, gt=0, description="k-arc residual, relative")
    closed_tol: float = Field(1e-9, gt=0, description="closed-curve threshold, relative")
    turning_tol: float = Field(1e-9, gt=0, description="radians")
    h_grid: int = Field(256, ge=2)
    loop_samples: int = Field(512, ge=16)
    loop_samples_cap: int = Field(65536, ge=16)
    bisect_width: float = Field(1e-6, gt=0)
    fd_step: float = Field(1e-6, gt=0)
    newton_max_iter: int = Field(50, ge=1)
    dedupe: float = Field(1e-3, gt=0)
    near_miss: float = Field(1e-4, gt=0, description="relative")
    on_loop_eps: float = Field(1e-12, gt=0, description="relative")
    oracle_resolution: int = Field(500, ge=2)
    oracle_budget: int = Field(20_000_000, ge=1)
    certificate_grid: int = Field(10_000, ge=1)
    seed: int = 0
    threads: int = Field(default_factory=default_threads, ge=1)
    csv_out: Optional[Path] = None
    svg_out: Optional[Path] = None
    curve_out: Optional[Path] = None

    @field_validator("resolution")
    @classmethod
    def _power_of_two(cls, value: int) -> int:
        if value < 64 or value & (value - 1):
            raise ValueError(f"resolution must be a power of two >= 64, got {value}")
        return value

    @field_validator("loop_samples_cap")
    @classmethod
    def _cap_above_start(cls, value: int, info) -> int:
        start = info.data.get("loop_samples")
        if start is not None and value < start:
            raise ValueError(f"loop_samples_cap ({value}) must be >= loop_samples ({start})")
        return value

    @classmethod
    def load(cls, path: Union[str, Path], **overrides: Any) -> "RunConfig":
        """Read a JSON config file; keyword overrides that are not None win."""
        try:
            data: Dict[str, Any] = json.loads(Path(path).read_text())
        except json.JSONDecodeError as e:
            raise ValueError(f"{path}: invalid JSON at line {e.lineno}: {e.msg}") from None
        if not isinstance(data, dict):
            raise ValueError(f"{path}: config must be a JSON object")
        data.update({key: value for key, value in overrides.items() if value is not None})
        return cls.model_validate(data)

    def with_overrides(self, **overrides: Any) -> "RunConfig":
        data = self.model_dump()
        data.update({key: value for key, value in overrides.items() if value is not None})
        return RunConfig.model_validate(data)


__all__ = ["RunConfig", "ValidationError", "THREADS_ENV", "default_threads"]
