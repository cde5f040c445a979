"""Strategy partitions of the unit interval.

A partition splits [0, 1] into ordered labeled intervals. Every interval is
half-open on the right except the last one, which is closed at 1, so each
value in [0, 1] belongs to exactly one interval. The default partition maps
the fork-following fraction to the mining strategy that is optimal there:
honest mining (HM), selfish mining (SM), lead-stubborn mining (LSM) and
equal-fork-stubborn mining (EFSM).
"""

from __future__ import annotations

import json
from bisect import bisect_right
from dataclasses import dataclass

DEFAULT_BOUNDARIES = (0.0, 0.675, 0.76, 0.761, 1.0)
DEFAULT_LABELS = ("HM", "SM", "LSM", "EFSM")


@dataclass(frozen=True)
class Interval:
    """One labeled interval of a strategy partition.

    Raises
    ------
    ValueError
        If the bounds are reversed.
    """

    lower: float
    upper: float
    label: str

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError("interval lower bound exceeds its upper bound")

    @property
    def length(self) -> float:
        return self.upper - self.lower

    @property
    def midpoint(self) -> float:
        return self.lower + (self.upper - self.lower) / 2.0


@dataclass(frozen=True)
class StrategyPartition:
    """Ordered disjoint intervals covering [0, 1] exactly.

    Parameters
    ----------
    intervals : sequence of Interval
        Must start at 0, end at 1, be contiguous, have strictly positive
        lengths and unique labels.

    Raises
    ------
    ValueError
        If any structural invariant is violated.
    """

    intervals: tuple[Interval, ...]

    def __post_init__(self):
        ivs = tuple(self.intervals)
        object.__setattr__(self, "intervals", ivs)
        if not ivs:
            raise ValueError("partition needs at least one interval")
        if ivs[0].lower != 0.0:
            raise ValueError("first interval must start at 0")
        if ivs[-1].upper != 1.0:
            raise ValueError("last interval must end at 1")
        for left, right in zip(ivs, ivs[1:]):
            if left.upper != right.lower:
                raise ValueError(
                    f"intervals {left.label!r} and {right.label!r} must be contiguous"
                )
        for iv in ivs:
            if not iv.upper > iv.lower:
                raise ValueError(f"interval {iv.label!r} must have positive length")
        labels = [iv.label for iv in ivs]
        if len(set(labels)) != len(labels):
            raise ValueError("interval labels must be unique")

    def __len__(self) -> int:
        return len(self.intervals)

    def __iter__(self):
        return iter(self.intervals)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(iv.label for iv in self.intervals)

    @property
    def boundaries(self) -> tuple[float, ...]:
        return tuple(iv.lower for iv in self.intervals) + (1.0,)

    def lengths(self) -> tuple[float, ...]:
        return tuple(iv.length for iv in self.intervals)

    def midpoints(self) -> tuple[float, ...]:
        return tuple(iv.midpoint for iv in self.intervals)

    def index_of(self, value: float) -> int:
        """Index of the interval containing ``value``.

        Interior boundaries belong to the interval that starts there and
        1.0 belongs to the final interval.

        Raises
        ------
        ValueError
            If ``value`` lies outside [0, 1].
        """
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"value {value!r} outside [0, 1]")
        uppers = [iv.upper for iv in self.intervals]
        return min(bisect_right(uppers, value), len(uppers) - 1)

    def to_json_obj(self) -> list[dict]:
        return [
            {"lower": iv.lower, "upper": iv.upper, "label": iv.label}
            for iv in self.intervals
        ]

    @classmethod
    def from_json_obj(cls, obj: list[dict]) -> "StrategyPartition":
        return cls(
            tuple(
                Interval(float(d["lower"]), float(d["upper"]), str(d["label"]))
                for d in obj
            )
        )

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "StrategyPartition":
        return cls.from_json_obj(json.loads(text))

    @classmethod
    def from_file(cls, path) -> "StrategyPartition":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_json(fh.read())


def default_partition() -> StrategyPartition:
    """The four-interval strategy partition with boundaries 0, 0.675, 0.76, 0.761, 1."""
    bounds = DEFAULT_BOUNDARIES
    return StrategyPartition(
        tuple(
            Interval(bounds[i], bounds[i + 1], DEFAULT_LABELS[i])
            for i in range(len(DEFAULT_LABELS))
        )
    )
