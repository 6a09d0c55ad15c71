"""Weekly piecewise-constant schedules.

A schedule maps simulation time (minutes, where 0 is Monday 00:00) to a
value and repeats every week.  Segments declare a constant value on
``[start_min, end_min)`` of one or more weekdays; any uncovered time takes
the schedule's default value.  Schedules over numbers additionally support
exact integration via per-piece arithmetic (no quadrature), which is what
availability averaging is built on.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import TYPE_CHECKING, Generic, Iterable, TypeVar

import numpy as np

if TYPE_CHECKING:  # pragma: no cover - type-only imports
    from .model import Region, Worker

V = TypeVar("V")

DAY_MINUTES = 1440.0
WEEK_MINUTES = 10080.0

#: Day indices accepted in segments; 0 = Monday ... 6 = Sunday.
ALL_DAYS = frozenset(range(7))
WEEKDAYS = frozenset(range(5))
WEEKEND = frozenset((5, 6))


@dataclass(frozen=True)
class Segment(Generic[V]):
    """Constant value on [start_min, end_min) of each listed day (0 = Monday)."""

    days: frozenset[int]
    start_min: float
    end_min: float
    value: V

    def __post_init__(self) -> None:
        days = frozenset(self.days)
        object.__setattr__(self, "days", days)
        if not days:
            raise ValueError("segment needs at least one day")
        if not days <= ALL_DAYS:
            raise ValueError(f"day indices must be in 0..6, got {sorted(days)}")
        if not (0 <= self.start_min < self.end_min <= DAY_MINUTES):
            raise ValueError(
                "segment needs 0 <= start_min < end_min <= 1440, got "
                f"[{self.start_min!r}, {self.end_min!r})"
            )


class WeeklySchedule(Generic[V]):
    """Immutable weekly schedule of constant pieces.

    Segments that overlap on the same day are rejected at construction, so
    evaluation is unambiguous.  Internally the week is flattened into a
    sorted list of half-open pieces tiling [0, 10080) minutes; gaps carry
    the default value.
    """

    __slots__ = (
        "segments",
        "default",
        "piece_starts",
        "piece_ends",
        "piece_values",
        "piece_prefix",
        "week_integral",
        "_ends_list",
    )

    def __init__(self, segments: Iterable[Segment[V]] = (), default: V = 0.0):
        self.segments: tuple[Segment[V], ...] = tuple(segments)
        self.default: V = default

        covered: list[tuple[float, float, V]] = []
        for seg in self.segments:
            for day in seg.days:
                covered.append(
                    (day * DAY_MINUTES + seg.start_min, day * DAY_MINUTES + seg.end_min, seg.value)
                )
        covered.sort(key=lambda p: p[0])
        for (s0, e0, _), (s1, _e1, _) in zip(covered, covered[1:]):
            if s1 < e0:
                raise ValueError(
                    f"schedule segments overlap: [{s0:g}, {e0:g}) and starting at {s1:g}"
                )

        starts: list[float] = []
        values: list[V] = []
        cursor = 0.0
        for s, e, v in covered:
            if s > cursor:
                starts.append(cursor)
                values.append(default)
            starts.append(s)
            values.append(v)
            cursor = e
        if cursor < WEEK_MINUTES:
            starts.append(cursor)
            values.append(default)

        self.piece_starts: np.ndarray = np.array(starts, dtype=float)
        self.piece_ends: np.ndarray = np.append(self.piece_starts[1:], WEEK_MINUTES)
        self.piece_values: tuple[V, ...] = tuple(values)
        self._ends_list: list[float] = self.piece_ends.tolist()

        numeric = all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in values)
        if numeric and (isinstance(default, (int, float)) and not isinstance(default, bool)):
            prefix = np.empty(len(values) + 1, dtype=float)
            acc = 0.0
            for i, v in enumerate(values):
                prefix[i] = acc
                acc = acc + float(v) * (self._ends_list[i] - starts[i])
            prefix[len(values)] = acc
            self.piece_prefix: np.ndarray | None = prefix
            self.week_integral: float | None = acc
        else:
            self.piece_prefix = None
            self.week_integral = None

    # -- value lookup -------------------------------------------------

    def value_at(self, t: float) -> V:
        """Value at time ``t`` (minutes); the schedule repeats weekly."""
        tm = t % WEEK_MINUTES
        return self.piece_values[bisect_right(self._ends_list, tm)]

    # -- exact integration (numeric schedules only) --------------------

    def cumulative(self, t: float) -> float:
        """Exact integral of the schedule from time 0 to ``t``."""
        if self.piece_prefix is None:
            raise TypeError("cumulative() needs a schedule over numbers")
        nw = math.floor(t / WEEK_MINUTES)
        tm = t - nw * WEEK_MINUTES
        i = min(bisect_right(self._ends_list, tm), len(self.piece_values) - 1)
        return (
            nw * self.week_integral
            + self.piece_prefix[i]
            + float(self.piece_values[i]) * (tm - self.piece_starts[i])
        )

    def integral(self, t0: float, t1: float) -> float:
        """Exact integral over [t0, t1]; requires t0 <= t1."""
        if t1 < t0:
            raise ValueError(f"integral needs t0 <= t1, got [{t0!r}, {t1!r}]")
        return self.cumulative(t1) - self.cumulative(t0)

    # -- plumbing -------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeeklySchedule):
            return NotImplemented
        return self.segments == other.segments and self.default == other.default

    def __hash__(self) -> int:
        return hash((self.segments, self.default))

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"WeeklySchedule({len(self.segments)} segments, default={self.default!r})"


def status_integral(schedule: WeeklySchedule[float], t0: float, t1: float) -> float:
    """Exact integral of a numeric schedule over [t0, t1]."""
    return schedule.integral(t0, t1)


def availability_score(status: WeeklySchedule[float], t: float, expiration: float) -> float:
    """Mean declared availability over [t, expiration); 0 for an empty window."""
    if expiration <= t:
        return 0.0
    return (status.cumulative(expiration) - status.cumulative(t)) / (expiration - t)


def expected_region_at(worker: "Worker", t: float) -> "Region":
    """The worker's declared region at time ``t`` (home region when undeclared)."""
    return worker.pattern.value_at(t)
