from dataclasses import dataclass

import numpy as np

from networkmodel.domain.model.exceptions.NetworkErrors import SchemaError, DimensionError


@dataclass(frozen=True)
class ReferenceSegment:
    """One constant piece of a reference: x_r held from start_time on"""
    start_time: int
    x_r: tuple[float, ...]


@dataclass(frozen=True)
class ReferenceSignal:
    """
    Value Object: piecewise-constant reference
    Segments sorted by start time, the first one starting at t = 0
    """
    segments: tuple[ReferenceSegment, ...]

    def __post_init__(self):
        if not self.segments:
            raise SchemaError("A reference needs at least one segment")
        starts = [s.start_time for s in self.segments]
        if starts[0] != 0:
            raise SchemaError("The first reference segment must start at t = 0")
        if any(b <= a for a, b in zip(starts, starts[1:])):
            raise SchemaError("Reference segment start times must be strictly increasing")
        sizes = {len(s.x_r) for s in self.segments}
        if len(sizes) != 1:
            raise DimensionError("All reference segments must have the same dimension")

    @classmethod
    def constant(cls, x_r) -> "ReferenceSignal":
        return cls(segments=(ReferenceSegment(0, tuple(float(v) for v in np.ravel(x_r))),))

    @classmethod
    def from_pairs(cls, pairs) -> "ReferenceSignal":
        """Build from [(start_time, x_r), ...]"""
        return cls(segments=tuple(
            ReferenceSegment(int(start), tuple(float(v) for v in np.ravel(x_r)))
            for start, x_r in pairs
        ))

    @property
    def dimension(self) -> int:
        return len(self.segments[0].x_r)

    def at(self, t: int) -> np.ndarray:
        """Reference active at time t"""
        active = self.segments[0]
        for segment in self.segments:
            if segment.start_time <= t:
                active = segment
            else:
                break
        return np.array(active.x_r, dtype=float)

    def final(self) -> np.ndarray:
        return np.array(self.segments[-1].x_r, dtype=float)
