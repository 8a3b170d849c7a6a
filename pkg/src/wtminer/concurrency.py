"""Concurrency detection and enablement computation.

Concurrent activity pairs are detected from directly-follows statistics: a
pair observed often enough in both orders, with a low enough dependency
measure, is treated as parallel. Each instance is then enabled by the
completion of its closest (latest-completing) non-concurrent predecessor in
the same case; first instances and instances with only concurrent
predecessors are enabled at their own start and carry no waiting time.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from wtminer.model import (
    ActivityInstance,
    ConfigError,
    EventLog,
    TimeInstant,
)


@dataclass(frozen=True)
class OracleThresholds:
    """Tunables for the directly-follows concurrency oracle."""

    dependency_threshold: float = 0.9
    min_bidirectional_observations: int = 1
    length2_loop_guard: bool = True

    def __post_init__(self) -> None:
        if not 0.0 <= self.dependency_threshold <= 1.0:
            raise ConfigError(
                f"dependency threshold must be in [0, 1], got {self.dependency_threshold}"
            )
        if self.min_bidirectional_observations < 1:
            raise ConfigError("min bidirectional observations must be at least 1")


@dataclass(frozen=True)
class DirectlyFollowsCounts:
    """Adjacent-pair counts per activity ordering, plus length-2 loop counts."""

    pairs: dict[tuple[str, str], int]
    loops2: dict[tuple[str, str], int]

    def count(self, a: str, b: str) -> int:
        return self.pairs.get((a, b), 0)

    def loop2_count(self, a: str, b: str) -> int:
        return self.loops2.get((a, b), 0) + self.loops2.get((b, a), 0)


@dataclass(frozen=True)
class ConcurrencyRelation:
    """Symmetric, irreflexive set of activity pairs declared concurrent."""

    pairs: frozenset[tuple[str, str]] = frozenset()

    @classmethod
    def of(cls, *pairs: tuple[str, str]) -> "ConcurrencyRelation":
        normalized = set()
        for a, b in pairs:
            if a == b:
                raise ValueError(f"activity {a!r} cannot be concurrent with itself")
            normalized.add((min(a, b), max(a, b)))
        return cls(frozenset(normalized))

    def is_concurrent(self, a: str, b: str) -> bool:
        if a == b:
            return False
        return (min(a, b), max(a, b)) in self.pairs

    def __len__(self) -> int:
        return len(self.pairs)


def count_directly_follows(log: EventLog) -> DirectlyFollowsCounts:
    pairs: dict[tuple[str, str], int] = {}
    loops2: dict[tuple[str, str], int] = {}
    for seq in log.cases.values():
        acts = [inst.activity for inst in seq]
        for a, b in zip(acts, acts[1:]):
            pairs[(a, b)] = pairs.get((a, b), 0) + 1
        for a, b, c in zip(acts, acts[1:], acts[2:]):
            if a == c and a != b:
                loops2[(a, b)] = loops2.get((a, b), 0) + 1
    return DirectlyFollowsCounts(pairs, loops2)


def detect_concurrency(
    counts: DirectlyFollowsCounts,
    thresholds: Optional[OracleThresholds] = None,
) -> ConcurrencyRelation:
    if thresholds is None:
        thresholds = OracleThresholds()
    seen = {pair for pair in counts.pairs}
    candidates = {(min(a, b), max(a, b)) for a, b in seen if a != b}
    concurrent: set[tuple[str, str]] = set()
    m = thresholds.min_bidirectional_observations
    for a, b in sorted(candidates):
        ab = counts.count(a, b)
        ba = counts.count(b, a)
        if ab < m or ba < m:
            continue
        dependency = abs(ab - ba) / (ab + ba + 1)
        if dependency >= thresholds.dependency_threshold:
            continue
        if thresholds.length2_loop_guard and counts.loop2_count(a, b) > 0:
            continue
        concurrent.add((a, b))
    return ConcurrencyRelation(frozenset(concurrent))


def discover_concurrency(
    log: EventLog, thresholds: Optional[OracleThresholds] = None
) -> ConcurrencyRelation:
    return detect_concurrency(count_directly_follows(log), thresholds)


@dataclass
class EnablementStats:
    """How each instance's enablement time was determined."""

    derived: int = 0
    supplied: int = 0
    first_in_case: int = 0
    concurrent_only: int = 0
    clamped: int = 0

    def as_dict(self) -> dict[str, int]:
        return {
            "derived": self.derived,
            "supplied": self.supplied,
            "first_in_case": self.first_in_case,
            "concurrent_only": self.concurrent_only,
            "clamped": self.clamped,
        }


@dataclass(frozen=True)
class EnablementResult:
    """Log with every enabled field set, plus the enabling predecessor map."""

    log: EventLog
    relation: ConcurrencyRelation
    enabler: dict[ActivityInstance, ActivityInstance] = field(default_factory=dict)
    stats: EnablementStats = field(default_factory=EnablementStats)


def compute_enablement(
    log: EventLog, relation: Optional[ConcurrencyRelation] = None
) -> EnablementResult:
    """Set enabled on every instance from its closest non-concurrent predecessor.

    Supplied enablement times win over derived ones, but the predecessor is
    still resolved so the instance participates in a transition. A derived
    completion after the instance's start is clamped to the start and counted.
    """
    if relation is None:
        relation = ConcurrencyRelation()
    stats = EnablementStats()
    new_instances: list[ActivityInstance] = []
    enabler_positions: list[tuple[str, int, int]] = []  # (case, target idx, source idx)
    per_case_new: dict[str, list[ActivityInstance]] = {}

    for case_id, seq in log.cases.items():
        rebuilt: list[ActivityInstance] = []
        for idx, inst in enumerate(seq):
            enabler_idx: Optional[int] = None
            best_completion: Optional[TimeInstant] = None
            for j in range(idx):
                pred = seq[j]
                if relation.is_concurrent(pred.activity, inst.activity):
                    continue
                if best_completion is None or pred.completed >= best_completion:
                    best_completion = pred.completed
                    enabler_idx = j
            if inst.enabled is not None:
                enabled = inst.enabled
                stats.supplied += 1
            elif enabler_idx is None:
                enabled = inst.started
                if idx == 0:
                    stats.first_in_case += 1
                else:
                    stats.concurrent_only += 1
            else:
                enabled = best_completion
                if enabled > inst.started:
                    enabled = inst.started
                    stats.clamped += 1
                stats.derived += 1
            rebuilt.append(
                ActivityInstance(
                    case_id=inst.case_id,
                    activity=inst.activity,
                    resource=inst.resource,
                    started=inst.started,
                    completed=inst.completed,
                    enabled=enabled,
                )
            )
            if enabler_idx is not None:
                enabler_positions.append((case_id, idx, enabler_idx))
        per_case_new[case_id] = rebuilt
        new_instances.extend(rebuilt)

    new_log = EventLog.from_instances(new_instances)
    enabler: dict[ActivityInstance, ActivityInstance] = {}
    for case_id, target_idx, source_idx in enabler_positions:
        seq = per_case_new[case_id]
        enabler[seq[target_idx]] = seq[source_idx]
    return EnablementResult(log=new_log, relation=relation, enabler=enabler, stats=stats)
