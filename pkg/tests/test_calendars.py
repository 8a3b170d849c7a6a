"""Calendar discovery, expansion and override parsing tests."""
from __future__ import annotations

import json

import pytest

from wtminer.calendars import (
    AbsoluteAvailability,
    CalendarParams,
    WeeklyCalendar,
    calendar_to_ranges,
    discover_calendar,
    discover_calendars,
    expand_calendar,
    load_calendar_overrides,
    week_start,
    weekday_of,
)
from wtminer.model import (
    ActivityInstance,
    ConfigError,
    EventLog,
    IntervalSet,
    TimeInterval,
    UNKNOWN_RESOURCE,
)

# 2023-01-02 00:00:00 UTC, a Monday.
MONDAY = 1672617600


def at(day: int, hour: int, minute: int = 0, second: int = 0) -> int:
    return MONDAY + day * 86400 + hour * 3600 + minute * 60 + second


def work(case, res, start, end, act="a"):
    return ActivityInstance(case, act, res, start, end)


class TestWeekMath:
    def test_weekday_indices(self):
        assert weekday_of(MONDAY) == 0
        assert weekday_of(at(6, 12)) == 6
        assert weekday_of(0) == 3  # the epoch was a Thursday

    def test_week_start(self):
        assert week_start(MONDAY) == MONDAY
        assert week_start(at(6, 23, 59)) == MONDAY
        assert week_start(at(7, 0)) == MONDAY + 7 * 86400


class TestDiscoverCalendar:
    def test_dense_monday_business_hours(self):
        instances = []
        k = 0
        for week in range(8):
            for hour in range(9, 17):
                start = at(7 * week, hour, 0)
                instances.append(work(f"c{k}", "r1", start, start + 45 * 60))
                k += 1
        cal = discover_calendar(EventLog.from_instances(instances), "r1")
        assert cal.working == frozenset((0, h) for h in range(9, 17))

    def test_single_observation(self):
        log = EventLog.from_instances([work("c1", "r1", at(2, 14, 30), at(2, 14, 30))])
        cal = discover_calendar(log, "r1")
        assert cal.working == frozenset({(2, 14)})

    def test_uniform_activity_gives_full_week(self):
        instances = []
        k = 0
        for day in range(7):
            for hour in range(24):
                start = at(day, hour, 5)
                instances.append(work(f"c{k}", "r1", start, start + 600))
                k += 1
        cal = discover_calendar(EventLog.from_instances(instances), "r1")
        assert cal.is_always_on

    def test_unknown_resource_raises(self):
        log = EventLog.from_instances([work("c1", "r1", at(0, 9), at(0, 10))])
        with pytest.raises(ValueError):
            discover_calendar(log, "r9")

    def test_reserved_resource_gets_full_week(self):
        log = EventLog.from_instances(
            [work("c1", UNKNOWN_RESOURCE, at(0, 9), at(0, 10))]
        )
        cal = discover_calendar(log, UNKNOWN_RESOURCE)
        assert cal.is_always_on

    def test_support_relaxation_widens_calendar(self):
        instances = []
        # 20 executions inside Mon 09:xx (40 observations in one slot).
        for k in range(20):
            start = at(0, 9, 1 + k)
            instances.append(work(f"m{k}", "r1", start, start + 30))
        # One execution in each of three other slots (2 observations each).
        for k, (day, hour) in enumerate([(1, 11), (2, 13), (3, 15)]):
            start = at(day, hour, 10)
            instances.append(work(f"s{k}", "r1", start, start + 60))
        log = EventLog.from_instances(instances)

        narrow = discover_calendar(log, "r1", CalendarParams(support=0.1))
        assert narrow.working == frozenset({(0, 9)})
        wide = discover_calendar(log, "r1", CalendarParams(support=0.9))
        assert wide.working == frozenset({(0, 9), (1, 11), (2, 13), (3, 15)})

    def test_discover_all_resources(self):
        log = EventLog.from_instances(
            [
                work("c1", "r1", at(0, 9), at(0, 10)),
                work("c2", "r2", at(1, 9), at(1, 10)),
                work("c3", UNKNOWN_RESOURCE, at(2, 9), at(2, 10)),
            ]
        )
        cals = discover_calendars(log)
        assert set(cals) == {"r1", "r2", UNKNOWN_RESOURCE}
        assert cals[UNKNOWN_RESOURCE].is_always_on

    def test_params_validation(self):
        with pytest.raises(ConfigError):
            CalendarParams(granule_minutes=7)
        with pytest.raises(ConfigError):
            CalendarParams(confidence=1.2)
        with pytest.raises(ConfigError):
            CalendarParams(support=-0.1)


class TestExpandCalendar:
    def test_always_on_covers_horizon(self):
        cal = WeeklyCalendar.always_on("r1")
        horizon = TimeInterval(at(0, 3, 17), at(11, 22, 4))
        avail = expand_calendar(cal, horizon)
        assert avail.available == IntervalSet((horizon,))

    def test_weekly_tiling(self):
        cal = WeeklyCalendar(
            "r1", 60, frozenset((0, h) for h in range(9, 17))
        )
        horizon = TimeInterval(MONDAY, MONDAY + 14 * 86400)
        avail = expand_calendar(cal, horizon)
        assert avail.available == IntervalSet.of(
            (at(0, 9), at(0, 17)), (at(7, 9), at(7, 17))
        )

    def test_empty_horizon(self):
        cal = WeeklyCalendar.always_on("r1")
        avail = expand_calendar(cal, TimeInterval(MONDAY, MONDAY))
        assert avail.available.is_empty()

    def test_clipped_to_horizon(self):
        cal = WeeklyCalendar("r1", 60, frozenset({(0, 9)}))
        horizon = TimeInterval(at(0, 9, 30), at(0, 9, 45))
        avail = expand_calendar(cal, horizon)
        assert avail.available == IntervalSet.of((at(0, 9, 30), at(0, 9, 45)))

    def test_availability_never_exceeds_horizon(self):
        cal = WeeklyCalendar.always_on("r1")
        horizon = TimeInterval(at(0, 0), at(20, 0))
        avail = expand_calendar(cal, horizon)
        assert avail.available.total_duration <= horizon.duration

    def test_observations_inside_own_availability(self):
        instances = []
        for week in range(4):
            for hour in (9, 12, 15):
                start = at(7 * week + 1, hour, 0)
                instances.append(work(f"c{week}_{hour}", "r1", start, start + 1800))
        log = EventLog.from_instances(instances)
        cal = discover_calendar(log, "r1")
        avail = expand_calendar(cal, log.horizon())
        for inst in log.instances:
            assert avail.available.contains_point(inst.started)

    def test_midnight_spanning_ranges_merge(self):
        cal = WeeklyCalendar("r1", 60, frozenset({(0, 23), (1, 0)}))
        assert cal.weekly_ranges() == ((23 * 3600, 25 * 3600),)
        horizon = TimeInterval(MONDAY, MONDAY + 7 * 86400)
        avail = expand_calendar(cal, horizon)
        assert avail.available == IntervalSet.of((at(0, 23), at(1, 1)))


class TestOverrides:
    def write(self, tmp_path, payload) -> str:
        path = tmp_path / "calendars.json"
        path.write_text(json.dumps(payload), encoding="utf-8")
        return str(path)

    def test_basic_override(self, tmp_path):
        path = self.write(
            tmp_path, {"R1": [{"day": "MON", "from": "09:00", "to": "17:00"}]}
        )
        cals = load_calendar_overrides(path)
        cal = cals["R1"]
        assert cal.granule_minutes == 1
        assert cal.weekly_ranges() == ((9 * 3600, 17 * 3600),)

    def test_empty_override_file(self, tmp_path):
        assert load_calendar_overrides(self.write(tmp_path, {})) == {}

    def test_midnight_end_allowed(self, tmp_path):
        path = self.write(
            tmp_path, {"R1": [{"day": "SUN", "from": "22:00", "to": "24:00"}]}
        )
        cal = load_calendar_overrides(path)["R1"]
        assert cal.weekly_ranges() == ((6 * 86400 + 22 * 3600, 7 * 86400),)

    @pytest.mark.parametrize(
        "entry",
        [
            {"day": "FUNDAY", "from": "09:00", "to": "17:00"},
            {"day": "MON", "from": "17:00", "to": "09:00"},
            {"day": "MON", "from": "09:00", "to": "09:00"},
            {"day": "MON", "from": "25:00", "to": "26:00"},
            {"day": "MON", "from": "24:00", "to": "24:00"},
            {"day": "MON", "from": "9am", "to": "5pm"},
            {"day": "MON", "start": "09:00", "to": "17:00"},
        ],
    )
    def test_malformed_entries_rejected(self, tmp_path, entry):
        path = self.write(tmp_path, {"R1": [entry]})
        with pytest.raises(ConfigError):
            load_calendar_overrides(path)

    def test_non_object_payload_rejected(self, tmp_path):
        path = self.write(tmp_path, ["not", "a", "mapping"])
        with pytest.raises(ConfigError):
            load_calendar_overrides(path)

    def test_invalid_json_rejected(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{", encoding="utf-8")
        with pytest.raises(ConfigError):
            load_calendar_overrides(str(path))

    def test_missing_file_rejected(self, tmp_path):
        with pytest.raises(ConfigError):
            load_calendar_overrides(str(tmp_path / "nope.json"))


class TestSerialization:
    def test_round_trip_through_ranges(self, tmp_path):
        payload = {
            "R1": [
                {"day": "MON", "from": "09:00", "to": "17:00"},
                {"day": "WED", "from": "08:30", "to": "12:00"},
            ]
        }
        path = tmp_path / "cals.json"
        path.write_text(json.dumps(payload), encoding="utf-8")
        cal = load_calendar_overrides(str(path))["R1"]
        assert calendar_to_ranges(cal) == [
            {"day": "MON", "from": "09:00", "to": "17:00"},
            {"day": "WED", "from": "08:30", "to": "12:00"},
        ]

    def test_ranges_split_at_midnight(self):
        cal = WeeklyCalendar("r1", 60, frozenset({(0, 23), (1, 0)}))
        assert calendar_to_ranges(cal) == [
            {"day": "MON", "from": "23:00", "to": "24:00"},
            {"day": "TUE", "from": "00:00", "to": "01:00"},
        ]
