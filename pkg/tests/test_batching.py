"""Batch detection tests."""
from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wtminer.batching import Batch, BatchingConfig, batching_interval, detect_batches
from wtminer.model import (
    ActivityInstance,
    ConfigError,
    EventLog,
    IntervalSet,
    UNKNOWN_RESOURCE,
)


def inst(case, act, res, enabled, started, completed):
    return ActivityInstance(case, act, res, started, completed, enabled=enabled)


def sequential_batch_log():
    """Three same-activity instances accumulated, then run back to back."""
    return EventLog.from_instances(
        [
            inst("c1", "b", "r1", 0, 10, 20),
            inst("c2", "b", "r1", 5, 20, 30),
            inst("c3", "b", "r1", 8, 30, 40),
        ]
    )


class TestDetectBatches:
    def test_sequential_batch(self):
        result = detect_batches(sequential_batch_log())
        (batch,) = result.batches
        assert len(batch.members) == 3
        assert batch.accumulation_end == 8
        assert batch.activity == "b"
        assert batch.resource == "r1"

    def test_lone_instance_is_not_a_batch(self):
        log = EventLog.from_instances([inst("c1", "b", "r1", 0, 10, 20)])
        assert detect_batches(log).batches == ()

    def test_late_enablement_splits_run(self):
        # Third instance enabled after the first one started: only the first
        # two form a batch.
        log = EventLog.from_instances(
            [
                inst("c1", "b", "r1", 0, 10, 20),
                inst("c2", "b", "r1", 5, 20, 30),
                inst("c3", "b", "r1", 12, 30, 40),
            ]
        )
        (batch,) = detect_batches(log).batches
        assert len(batch.members) == 2
        assert {m.case_id for m in batch.members} == {"c1", "c2"}

    def test_intruding_execution_truncates_batch(self):
        log = EventLog.from_instances(
            [
                inst("c1", "b", "r1", 0, 10, 20),
                inst("c2", "b", "r1", 1, 20, 30),
                inst("c3", "b", "r1", 2, 30, 40),
                inst("c4", "z", "r1", 30, 35, 50),
            ]
        )
        (batch,) = detect_batches(log).batches
        assert {m.case_id for m in batch.members} == {"c1", "c2"}

    def test_simultaneous_batch(self):
        log = EventLog.from_instances(
            [
                inst("c1", "b", "r1", 0, 100, 130),
                inst("c2", "b", "r1", 5, 100, 130),
                inst("c3", "b", "r1", 8, 100, 130),
            ]
        )
        (batch,) = detect_batches(log).batches
        assert len(batch.members) == 3
        assert batch.accumulation_end == 8

    def test_different_resources_do_not_batch_together(self):
        log = EventLog.from_instances(
            [
                inst("c1", "b", "r1", 0, 10, 20),
                inst("c2", "b", "r2", 0, 20, 30),
            ]
        )
        assert detect_batches(log).batches == ()

    def test_unknown_resource_never_batches(self):
        log = EventLog.from_instances(
            [
                inst("c1", "b", UNKNOWN_RESOURCE, 0, 10, 20),
                inst("c2", "b", UNKNOWN_RESOURCE, 5, 20, 30),
            ]
        )
        assert detect_batches(log).batches == ()

    def test_gap_tolerance(self):
        log = EventLog.from_instances(
            [
                inst("c1", "b", "r1", 0, 10, 20),
                inst("c2", "b", "r1", 5, 25, 35),
            ]
        )
        assert detect_batches(log).batches == ()
        (batch,) = detect_batches(log, BatchingConfig(gap_tolerance=5)).batches
        assert len(batch.members) == 2

    def test_min_batch_size(self):
        log = sequential_batch_log()
        assert detect_batches(log, BatchingConfig(min_batch_size=3)).batches != ()
        assert detect_batches(log, BatchingConfig(min_batch_size=4)).batches == ()

    def test_config_validation(self):
        with pytest.raises(ConfigError):
            BatchingConfig(gap_tolerance=-1)
        with pytest.raises(ConfigError):
            BatchingConfig(min_batch_size=1)

    def test_membership_map(self):
        result = detect_batches(sequential_batch_log())
        (batch,) = result.batches
        assert set(result.by_instance.values()) == {batch}
        assert len(result.by_instance) == 3

    def test_requires_enablement(self):
        log = EventLog.from_instances(
            [ActivityInstance("c1", "b", "r1", 10, 20)]
        )
        with pytest.raises(ValueError):
            detect_batches(log)


class TestBatchingInterval:
    def test_accumulation_wait(self):
        members = (
            inst("c1", "b", "r1", 0, 10, 20),
            inst("c2", "b", "r1", 6, 20, 30),
        )
        batch = Batch("b", "r1", members)
        assert batching_interval(members[0], batch) == IntervalSet.of((0, 6))

    def test_last_enabled_member_gets_nothing(self):
        result = detect_batches(sequential_batch_log())
        (batch,) = result.batches
        last = max(batch.members, key=lambda m: m.enabled)
        assert batching_interval(last, batch).is_empty()

    def test_clamped_to_waiting_interval(self):
        # Defensive clamp: a member that started before another member's
        # enablement only waits until its own start.
        members = (
            inst("c1", "b", "r1", 0, 5, 30),
            inst("c2", "b", "r1", 8, 10, 30),
        )
        batch = Batch("b", "r1", members)
        assert batching_interval(members[0], batch) == IntervalSet.of((0, 5))


@st.composite
def single_resource_logs(draw):
    n = draw(st.integers(min_value=2, max_value=10))
    instances = []
    for k in range(n):
        act = draw(st.sampled_from(["b", "z"]))
        enabled = draw(st.integers(min_value=0, max_value=60))
        started = enabled + draw(st.integers(min_value=0, max_value=40))
        completed = started + draw(st.integers(min_value=1, max_value=30))
        instances.append(inst(f"c{k}", act, "r1", enabled, started, completed))
    return EventLog.from_instances(instances)


class TestBatchInvariants:
    @given(single_resource_logs())
    def test_detected_batches_satisfy_invariants(self, log):
        result = detect_batches(log)
        seen = set()
        for batch in result.batches:
            assert len(batch.members) >= 2
            assert len({m.activity for m in batch.members}) == 1
            assert len({m.resource for m in batch.members}) == 1
            assert batch.accumulation_end <= batch.first_start
            for m in batch.members:
                assert id(m) not in seen
                seen.add(id(m))
                span = batching_interval(m, batch)
                wait = IntervalSet.of((m.enabled, m.started))
                assert (span - wait).is_empty()
            # No non-member execution by the resource starts in the window.
            member_ids = {id(m) for m in batch.members}
            for other in log.instances:
                if id(other) in member_ids or other.resource != batch.resource:
                    continue
                assert not (batch.first_start <= other.started < batch.last_completion)

    @given(single_resource_logs())
    def test_detection_is_order_insensitive(self, log):
        shuffled = EventLog.from_instances(tuple(reversed(log.instances)))
        a = detect_batches(log)
        b = detect_batches(shuffled)
        key = lambda batch: sorted((m.case_id, m.started) for m in batch.members)
        assert sorted(map(key, a.batches)) == sorted(map(key, b.batches))
