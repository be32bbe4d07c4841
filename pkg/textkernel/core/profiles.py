"""Dataset profiles: test-time scale and output mode per benchmark."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterator, Optional

from textkernel.core.errors import UsageError
from textkernel.morphology.ops import DilationSize, scale_dilation_size
from textkernel.schemas.config import DatasetProfileSchema, TextKernelConfigSchema


@dataclass(frozen=True)
class DatasetProfile:
    name: str
    short_side: int
    output_mode: str


class ProfileManager:
    """Manage the active dataset profile and derive the dilation size from it."""

    def __init__(
        self,
        profiles: Dict[str, DatasetProfileSchema],
        default: str,
        *,
        s_default: int = 9,
        short_side_default: int = 640,
    ) -> None:
        if default not in profiles:
            raise ValueError(f"Default profile '{default}' is not defined.")
        self._profiles = profiles
        self._active = default
        self._s_default = s_default
        self._short_side_default = short_side_default

    @property
    def active_profile(self) -> str:
        return self._active

    def activate(self, profile: str) -> None:
        if profile not in self._profiles:
            known = ", ".join(sorted(self._profiles))
            raise UsageError(f"Profile '{profile}' not defined (known: {known})")
        self._active = profile

    def iter_profiles(self) -> Iterator[str]:
        yield from self._profiles

    def current(self) -> DatasetProfile:
        schema = self._profiles[self._active]
        return DatasetProfile(name=self._active, short_side=schema.short_side, output_mode=schema.output_mode)

    def dilation_size(self, short_side: Optional[float] = None) -> DilationSize:
        """Scale the default size to ``short_side`` (the active profile's by default).

        The scaled value is forced odd by rounding an even result up.
        """

        side = short_side if short_side is not None else self.current().short_side
        scaled = scale_dilation_size(side, self._short_side_default, self._s_default)
        return DilationSize.coerce(scaled)

    @classmethod
    def from_config(cls, config: TextKernelConfigSchema) -> "ProfileManager":
        return cls(
            config.profiles.definitions,
            config.profiles.default,
            s_default=config.labels.s_default,
            short_side_default=config.labels.short_side_default,
        )


__all__ = ["DatasetProfile", "ProfileManager"]
