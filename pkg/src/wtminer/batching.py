"""Batch detection.

A batch is a group of same-activity instances handled by one resource as a
unit: every member was enabled before any member started, and the resource
ran the members back to back (or simultaneously) without squeezing other
work in between. The batch-accumulation instant is the last member
enablement; waiting before that instant is attributable to batching.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from wtminer.model import (
    ActivityInstance,
    ConfigError,
    EventLog,
    IntervalSet,
    TimeInstant,
    UNKNOWN_RESOURCE,
)


@dataclass(frozen=True)
class BatchingConfig:
    """gap_tolerance: max idle seconds between consecutive member executions."""

    gap_tolerance: int = 0
    min_batch_size: int = 2

    def __post_init__(self) -> None:
        if self.gap_tolerance < 0:
            raise ConfigError("gap tolerance must be non-negative")
        if self.min_batch_size < 2:
            raise ConfigError("minimum batch size must be at least 2")


@dataclass(frozen=True)
class Batch:
    activity: str
    resource: str
    members: tuple[ActivityInstance, ...]

    def __post_init__(self) -> None:
        if len(self.members) < 2:
            raise ValueError("a batch needs at least two members")

    @property
    def accumulation_end(self) -> TimeInstant:
        # All members have enablement set by the time batches are built.
        return max(m.enabled for m in self.members)

    @property
    def first_start(self) -> TimeInstant:
        return min(m.started for m in self.members)

    @property
    def last_completion(self) -> TimeInstant:
        return max(m.completed for m in self.members)


@dataclass(frozen=True)
class BatchingResult:
    batches: tuple[Batch, ...]
    by_instance: dict[ActivityInstance, Batch]


def _resource_order(inst: ActivityInstance) -> tuple:
    return (inst.started, inst.completed, inst.activity, inst.case_id)


def detect_batches(log: EventLog, config: Optional[BatchingConfig] = None) -> BatchingResult:
    """Find maximal batches per (activity, resource) group.

    Within each resource's start-ordered work sequence, a run of same-activity
    instances grows while each newcomer was enabled by the run's first start
    and starts within gap_tolerance of the previous completion. A run is then
    shrunk until no other instance of the resource starts inside its
    [first start, last completion) window. Instances without a known resource
    never batch.
    """
    if config is None:
        config = BatchingConfig()
    by_resource: dict[str, list[ActivityInstance]] = {}
    for inst in log.instances:
        if inst.resource == UNKNOWN_RESOURCE:
            continue
        if inst.enabled is None:
            raise ValueError("batch detection requires enablement to be computed")
        by_resource.setdefault(inst.resource, []).append(inst)

    batches: list[Batch] = []
    by_instance: dict[ActivityInstance, Batch] = {}
    for resource in sorted(by_resource):
        seq = sorted(by_resource[resource], key=_resource_order)
        i = 0
        while i < len(seq):
            run = [seq[i]]
            first_start = seq[i].started
            j = i + 1
            while j < len(seq):
                nxt = seq[j]
                if nxt.activity != run[0].activity:
                    break
                if nxt.enabled > first_start:
                    break
                if nxt.started > run[-1].completed + config.gap_tolerance:
                    break
                run.append(nxt)
                j += 1
            # Shrink until no non-member execution starts inside the window.
            while len(run) >= 2:
                follower = seq[i + len(run)] if i + len(run) < len(seq) else None
                window_end = max(m.completed for m in run)
                if follower is not None and follower.started < window_end:
                    run.pop()
                    continue
                if i > 0 and seq[i - 1].started >= first_start and window_end > first_start:
                    # A same-instant predecessor sits inside the window; no
                    # suffix trim can fix that.
                    del run[1:]
                break
            if len(run) >= config.min_batch_size:
                batch = Batch(
                    activity=run[0].activity,
                    resource=resource,
                    members=tuple(run),
                )
                batches.append(batch)
                for member in run:
                    by_instance[member] = batch
                i += len(run)
            else:
                i += 1
    return BatchingResult(batches=tuple(batches), by_instance=by_instance)


def batching_interval(inst: ActivityInstance, batch: Batch) -> IntervalSet:
    """Waiting attributable to batch accumulation: [enabled, τ_bc) clipped to ω."""
    end = min(batch.accumulation_end, inst.started)
    if end <= inst.enabled:
        return IntervalSet.empty()
    return IntervalSet.of((inst.enabled, end))
