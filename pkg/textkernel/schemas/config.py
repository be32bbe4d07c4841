"""Pydantic models for ``textkernel.config.yml``."""
from __future__ import annotations

from pathlib import Path
from typing import Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class LoggingSchema(_Section):
    level: str = "INFO"
    logfile: Optional[Path] = None

    @field_validator("level")
    @classmethod
    def _upper(cls, value: str) -> str:
        level = value.upper()
        if level not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"unknown log level {value!r}")
        return level


class PostprocessSchema(_Section):
    threshold: float = 0.5
    s: int = 9
    min_kernel_area: int = Field(10, ge=0)
    output_mode: Literal["polygon", "min_area_rect"] = "polygon"
    connectivity: Literal[4, 8] = 8
    tiles: int = Field(1, ge=1)

    @field_validator("s")
    @classmethod
    def _odd(cls, value: int) -> int:
        if value < 1 or value % 2 == 0:
            raise ValueError(f"dilation size must be odd and >= 1, got {value}")
        return value


class LabelsSchema(_Section):
    s_default: int = 9
    short_side_default: int = Field(640, gt=0)


class LossesSchema(_Section):
    alpha: float = 0.5
    ohem_ratio: float = Field(3.0, gt=0)


class EvaluationSchema(_Section):
    iou_threshold: float = Field(0.5, gt=0, le=1)
    canvas: Tuple[int, int] = (640, 640)
    workers: int = Field(4, ge=1)
    min_kernel_area: int = Field(0, ge=0)
    sweep: List[int] = Field(default_factory=lambda: [3, 5, 7, 9, 11])


class NasSchema(_Section):
    alpha: float = 0.5
    w: float = Field(0.1, ge=0)
    partition: Tuple[int, int, int, int] = (9, 9, 9, 9)
    channels: Tuple[int, int, int, int] = (64, 128, 256, 512)
    targets: Dict[str, float] = Field(default_factory=lambda: {"A0": 100.0, "A1": 80.0, "A2": 60.0})
    default_target: str = "A0"

    @model_validator(mode="after")
    def _known_target(self) -> "NasSchema":
        if self.default_target not in self.targets:
            raise ValueError(f"default_target {self.default_target!r} is not among targets")
        if any(value <= 0 for value in self.targets.values()):
            raise ValueError("FPS targets must be positive")
        return self


class SynthSchema(_Section):
    count: int = Field(100, ge=1)
    seed: int = 0
    width: int = Field(640, ge=1)
    height: int = Field(640, ge=1)
    instances_per_image: int = Field(10, ge=1)
    min_side: int = Field(24, ge=1)
    max_side: int = Field(120, ge=1)
    spacing: int = Field(12, ge=0)
    max_rotation_deg: float = Field(0.0, ge=0)
    thin_fraction: float = Field(0.0, ge=0, le=1)
    thin_below: int = Field(9, ge=2)
    output_dir: Optional[Path] = None


class DatasetProfileSchema(_Section):
    short_side: int = Field(gt=0)
    output_mode: Literal["polygon", "min_area_rect"] = "polygon"
    description: str = ""


def _default_profiles() -> Dict[str, DatasetProfileSchema]:
    return {
        "total_text": DatasetProfileSchema(short_side=640, output_mode="polygon", description="curved text"),
        "icdar2015": DatasetProfileSchema(short_side=736, output_mode="min_area_rect", description="multi-oriented"),
        "ctw1500": DatasetProfileSchema(short_side=640, output_mode="polygon", description="curved lines"),
        "msra_td500": DatasetProfileSchema(short_side=736, output_mode="min_area_rect", description="long lines"),
    }


class ProfilesSchema(_Section):
    default: str = "total_text"
    definitions: Dict[str, DatasetProfileSchema] = Field(default_factory=_default_profiles)

    @model_validator(mode="after")
    def _default_defined(self) -> "ProfilesSchema":
        if self.default not in self.definitions:
            raise ValueError(f"default profile {self.default!r} is not defined")
        return self


class TextKernelConfigSchema(_Section):
    logging: LoggingSchema = Field(default_factory=LoggingSchema)
    postprocess: PostprocessSchema = Field(default_factory=PostprocessSchema)
    labels: LabelsSchema = Field(default_factory=LabelsSchema)
    losses: LossesSchema = Field(default_factory=LossesSchema)
    evaluation: EvaluationSchema = Field(default_factory=EvaluationSchema)
    nas: NasSchema = Field(default_factory=NasSchema)
    synth: SynthSchema = Field(default_factory=SynthSchema)
    profiles: ProfilesSchema = Field(default_factory=ProfilesSchema)


__all__ = [
    "LoggingSchema",
    "PostprocessSchema",
    "LabelsSchema",
    "LossesSchema",
    "EvaluationSchema",
    "NasSchema",
    "SynthSchema",
    "DatasetProfileSchema",
    "ProfilesSchema",
    "TextKernelConfigSchema",
]
