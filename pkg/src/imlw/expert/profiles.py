"""Collector proficiency profiles: tremor, pauses, overshoot, speed."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class ProficiencyProfile:
    name: str
    tremor_std: float = 0.0      # metres of per-tick positional command noise
    pause_prob: float = 0.0      # probability per tick of holding still
    overshoot_gain: float = 1.0  # >= 1
    speed_factor: float = 1.0    # in (0, 1]

    def __post_init__(self):
        if self.tremor_std < 0:
            raise ValueError("tremor_std must be >= 0")
        if not 0.0 <= self.pause_prob < 1.0:
            raise ValueError("pause_prob must be in [0, 1)")
        if self.overshoot_gain < 1.0:
            raise ValueError("overshoot_gain must be >= 1")
        if not 0.0 < self.speed_factor <= 1.0:
            raise ValueError("speed_factor must be in (0, 1]")

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "tremor_std": self.tremor_std,
            "pause_prob": self.pause_prob,
            "overshoot_gain": self.overshoot_gain,
            "speed_factor": self.speed_factor,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ProficiencyProfile":
        return cls(**d)


BUILTIN_PROFILES = {
    "expertA": ProficiencyProfile(name="expertA"),
    "expertB": ProficiencyProfile(name="expertB", tremor_std=0.01, pause_prob=0.05,
                                  overshoot_gain=1.2),
}
