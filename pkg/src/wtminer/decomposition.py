"""Waiting time decomposition.

Every second of a transition instance's waiting interval is attributed to
exactly one cause, claimed in strict dominance order:

1. batching        - the target accumulated in a batch until its last member
                     was enabled
2. contention      - the resource was busy on work enabled no later than the
                     target (first come, first served backlog)
3. prioritization  - the resource was busy on work enabled after the target
                     (the target was overtaken)
4. unavailability  - the instant lies outside the resource's availability
                     calendar
5. extraneous      - residual: none of the above explains it

Each stage intersects its raw intervals with what previous stages left, so
the five sets partition the waiting interval exactly.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional

from wtminer.batching import BatchingResult, batching_interval
from wtminer.calendars import AbsoluteAvailability
from wtminer.model import (
    ActivityInstance,
    EventLog,
    IntervalSet,
    UNKNOWN_RESOURCE,
)
from wtminer.transitions import TransitionInstance

CAUSES = ("batching", "contention", "prioritization", "unavailability", "extraneous")


@dataclass(frozen=True)
class WtDecomposition:
    """Disjoint per-cause interval sets covering one instance's waiting time."""

    instance: TransitionInstance
    batching: IntervalSet
    contention: IntervalSet
    prioritization: IntervalSet
    unavailability: IntervalSet
    extraneous: IntervalSet

    def cause_sets(self) -> dict[str, IntervalSet]:
        return {cause: getattr(self, cause) for cause in CAUSES}

    def cause_durations(self) -> dict[str, int]:
        return {cause: s.total_duration for cause, s in self.cause_sets().items()}

    @property
    def waiting_duration(self) -> int:
        return self.instance.waiting.duration


class Decomposer:
    """Shared read-only indexes plus the per-instance cascade."""

    def __init__(
        self,
        log: EventLog,
        batching: BatchingResult,
        availability: dict[str, AbsoluteAvailability],
    ) -> None:
        self.log = log
        self.batching = batching
        self.availability = availability
        self._by_resource: dict[str, list[ActivityInstance]] = {}
        for inst in log.instances:
            self._by_resource.setdefault(inst.resource, []).append(inst)
        for seq in self._by_resource.values():
            seq.sort(key=lambda i: (i.started, i.completed))

    def _busy_overlaps(self, target: ActivityInstance, want_earlier: bool) -> IntervalSet:
        wait = target.waiting
        if wait.is_empty():
            return IntervalSet.empty()
        spans = []
        for other in self._by_resource.get(target.resource, ()):
            if other.started >= wait.end:
                break
            if other is target:
                continue
            earlier = other.enabled <= target.enabled
            if earlier != want_earlier:
                continue
            overlap = other.processing.intersect(wait)
            if overlap is not None:
                spans.append(overlap)
        return IntervalSet(tuple(spans))

    def raw_contention(self, target: ActivityInstance) -> IntervalSet:
        """Resource busy during the wait on work enabled no later than the target."""
        return self._busy_overlaps(target, want_earlier=True)

    def raw_prioritization(self, target: ActivityInstance) -> IntervalSet:
        """Resource busy during the wait on work enabled strictly after the target."""
        return self._busy_overlaps(target, want_earlier=False)

    def raw_unavailability(self, target: ActivityInstance) -> IntervalSet:
        """Waiting instants outside the resource's availability calendar."""
        wait = target.waiting
        if wait.is_empty():
            return IntervalSet.empty()
        avail = self.availability[target.resource].available
        return IntervalSet((wait,)) - avail

    def decompose(self, ti: TransitionInstance) -> WtDecomposition:
        target = ti.target
        remaining = IntervalSet((target.waiting,))

        if target.resource == UNKNOWN_RESOURCE:
            # No resource identity: no batch, no busy evidence, no calendar.
            empty = IntervalSet.empty()
            return WtDecomposition(
                instance=ti,
                batching=empty,
                contention=empty,
                prioritization=empty,
                unavailability=empty,
                extraneous=remaining,
            )

        batch = self.batching.by_instance.get(target)
        if batch is not None:
            batching_set = batching_interval(target, batch).intersect(remaining)
        else:
            batching_set = IntervalSet.empty()
        remaining = remaining - batching_set

        contention = self.raw_contention(target).intersect(remaining)
        remaining = remaining - contention

        prioritization = self.raw_prioritization(target).intersect(remaining)
        remaining = remaining - prioritization

        unavailability = self.raw_unavailability(target).intersect(remaining)
        remaining = remaining - unavailability

        return WtDecomposition(
            instance=ti,
            batching=batching_set,
            contention=contention,
            prioritization=prioritization,
            unavailability=unavailability,
            extraneous=remaining,
        )


def decompose_all(
    decomposer: Decomposer,
    transition_instances: Iterable[TransitionInstance],
    max_workers: Optional[int] = None,
) -> tuple[WtDecomposition, ...]:
    """Decompose many instances, optionally on a thread pool, keeping order."""
    items = list(transition_instances)
    if max_workers is not None and max_workers > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            return tuple(pool.map(decomposer.decompose, items))
    return tuple(decomposer.decompose(ti) for ti in items)


def multitasking_rate(log: EventLog) -> float:
    """Share of instances whose processing overlaps same-resource processing.

    The decomposition assumes resources work one instance at a time; this
    diagnostic quantifies how far a log deviates from that assumption.
    """
    by_resource: dict[str, list[ActivityInstance]] = {}
    for inst in log.instances:
        if inst.resource == UNKNOWN_RESOURCE:
            continue
        by_resource.setdefault(inst.resource, []).append(inst)
    overlapping: set[int] = set()
    for seq in by_resource.values():
        seq.sort(key=lambda i: (i.started, i.completed))
        active: list[ActivityInstance] = []
        for inst in seq:
            active = [a for a in active if a.completed > inst.started]
            for a in active:
                if a.processing.overlaps(inst.processing):
                    overlapping.add(id(a))
                    overlapping.add(id(inst))
            active.append(inst)
    total = sum(len(seq) for seq in by_resource.values())
    return len(overlapping) / total if total else 0.0
