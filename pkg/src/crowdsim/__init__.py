"""Availability-aware task assignment and simulation for mobile workforces.

Workers follow weekly whereabouts patterns and publish weekly acceptance
(status) levels; tasks carry deadlines, rewards, and priorities.  The
package scores (task, worker, time) triples, assigns tasks offline in
batches or online one-by-one, and replays whole scenarios in a seeded
discrete-event simulator.
"""

from .assign import (
    Assignment,
    AssignOutcome,
    OutcomeKind,
    ScoreEngine,
    TimeGrid,
    baseline_nearest,
    offline_assign,
    online_assign,
    queue_order,
)
from .model import (
    Disc,
    Point,
    Rect,
    Region,
    Task,
    TaskCategory,
    TaskOwner,
    TrustCounters,
    Violation,
    Worker,
    centroid,
    distance,
    validate_scenario,
)
from .schedule import (
    ALL_DAYS,
    DAY_MINUTES,
    WEEK_MINUTES,
    WEEKDAYS,
    WEEKEND,
    Segment,
    WeeklySchedule,
    availability_score,
    expected_region_at,
    status_integral,
)
from .scoring import (
    ScoreBreakdown,
    TaskExpiredError,
    TrustWeights,
    VelocityProfile,
    reward_score,
    task_priority_score,
    time_score,
    time_to_complete,
    total_score,
    trustworthy_score,
)
from .simulate import POLICIES, LogRow, SimConfig, SimReport, TaskState, accept_decision, run
from .workload import (
    GenParams,
    ParameterError,
    Scenario,
    ScenarioFormatError,
    ScenarioValidationError,
    builtin_scenarios,
    generate,
    load,
    save,
)

__version__ = "0.1.0"

__all__ = [
    "ALL_DAYS",
    "Assignment",
    "AssignOutcome",
    "DAY_MINUTES",
    "Disc",
    "GenParams",
    "LogRow",
    "OutcomeKind",
    "POLICIES",
    "ParameterError",
    "Point",
    "Rect",
    "Region",
    "Scenario",
    "ScenarioFormatError",
    "ScenarioValidationError",
    "ScoreBreakdown",
    "ScoreEngine",
    "Segment",
    "SimConfig",
    "SimReport",
    "Task",
    "TaskCategory",
    "TaskExpiredError",
    "TaskOwner",
    "TaskState",
    "TimeGrid",
    "TrustCounters",
    "TrustWeights",
    "VelocityProfile",
    "Violation",
    "WEEKDAYS",
    "WEEKEND",
    "WEEK_MINUTES",
    "WeeklySchedule",
    "Worker",
    "accept_decision",
    "availability_score",
    "baseline_nearest",
    "builtin_scenarios",
    "centroid",
    "distance",
    "expected_region_at",
    "generate",
    "load",
    "offline_assign",
    "online_assign",
    "queue_order",
    "reward_score",
    "run",
    "save",
    "status_integral",
    "task_priority_score",
    "time_score",
    "time_to_complete",
    "total_score",
    "trustworthy_score",
    "validate_scenario",
]
