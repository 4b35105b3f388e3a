"""Residual report containers shared by the constraint and PDE checkers."""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass(frozen=True)
class ResidualEntry:
    """Statistics of one residual quantity over a sample set."""

    name: str
    max_abs: float
    rms: float
    worst_r: tuple[float, float, float] | None
    worst_t: float

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "max_abs": self.max_abs,
            "rms": self.rms,
            "worst_point": {
                "r": None if self.worst_r is None else list(self.worst_r),
                "t": self.worst_t,
            },
        }


@dataclass(frozen=True)
class ResidualReport:
    """Max/RMS residual magnitudes per checked quantity.

    `max_abs >= rms` per entry by construction; `worst_point` is the sample
    at which the maximum was attained.
    """

    entries: tuple[ResidualEntry, ...]
    sample_count: int
    step_sizes: dict = field(default_factory=dict)

    def entry(self, name: str) -> ResidualEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    @property
    def max_abs(self) -> float:
        return max(e.max_abs for e in self.entries)

    def to_dict(self) -> dict:
        return {
            "entries": [e.to_dict() for e in self.entries],
            "sample_count": self.sample_count,
            "step_sizes": dict(self.step_sizes),
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, sort_keys=True)


def make_entry(name, residuals, r_points, t_points) -> ResidualEntry:
    """Reduce |residual| samples to an entry (order-independent max and RMS)."""
    import numpy as np

    mags = np.abs(np.asarray(residuals, dtype=float))
    i = int(np.argmax(mags))
    worst_r = None
    if r_points is not None:
        r = np.asarray(r_points, dtype=float)
        worst_r = (float(r[i, 0]), float(r[i, 1]), float(r[i, 2]))
    t = np.asarray(t_points, dtype=float).ravel()
    return ResidualEntry(
        name=name,
        max_abs=float(mags[i]),
        rms=float(np.sqrt(np.mean(mags**2))),
        worst_r=worst_r,
        worst_t=float(t[i] if t.size > 1 else t[0]),
    )
