"""Exposure log records, deduplication, buffering, and file rotation."""

import io
import json
import threading

import pytest

from planout.dsl import parse_or_raise
from planout.exposure import (
    CustomEvent,
    ExposureEvent,
    ExposureLogger,
    parse_record,
)
from planout.interpreter import evaluate


def make_event(unit=1, experiment="exp"):
    return ExposureEvent(
        timestamp=1700000000000, namespace="ns", experiment=experiment,
        inputs={"userid": unit}, params={"x": 1}, overrides={},
        script_digest="d" * 40)


def drain(logger):
    logger.flush()


class TestRecords:
    def test_exposure_round_trip(self):
        event = make_event()
        line = json.dumps(event.to_record())
        assert parse_record(line) == event

    def test_custom_event_round_trip(self):
        event = CustomEvent(
            timestamp=5, namespace="ns", experiment="exp",
            inputs={"userid": 9}, event_name="click", payload={"pos": 2})
        assert parse_record(json.dumps(event.to_record())) == event

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            parse_record('{"kind": "mystery"}')

    def test_one_record_per_line(self):
        stream = io.StringIO()
        logger = ExposureLogger(stream)
        logger.log_exposure(make_event(1))
        logger.log_exposure(make_event(2))
        logger.close()
        lines = stream.getvalue().splitlines()
        assert len(lines) == 2
        assert all(parse_record(line).namespace == "ns" for line in lines)


class TestDeduplication:
    def test_same_unit_logged_once(self):
        stream = io.StringIO()
        logger = ExposureLogger(stream)
        assert logger.log_exposure(make_event(1)) is True
        assert logger.log_exposure(make_event(1)) is False
        logger.close()
        assert len(stream.getvalue().splitlines()) == 1

    def test_different_experiments_both_logged(self):
        logger = ExposureLogger(io.StringIO())
        assert logger.log_exposure(make_event(1, "a"))
        assert logger.log_exposure(make_event(1, "b"))
        logger.close()

    def test_dedup_capacity_is_bounded(self):
        logger = ExposureLogger(io.StringIO(), dedup_capacity=2)
        logger.log_exposure(make_event(1))
        logger.log_exposure(make_event(2))
        logger.log_exposure(make_event(3))  # evicts unit 1
        assert logger.log_exposure(make_event(1)) is True
        logger.close()

    def test_custom_events_never_deduplicated(self):
        stream = io.StringIO()
        logger = ExposureLogger(stream)
        event = CustomEvent(timestamp=1, namespace="ns", experiment="e",
                            inputs={}, event_name="click")
        logger.log_event(event)
        logger.log_event(event)
        logger.close()
        assert len(stream.getvalue().splitlines()) == 2

    def test_empty_event_name_rejected(self):
        logger = ExposureLogger(io.StringIO())
        with pytest.raises(ValueError):
            logger.log_event(CustomEvent(
                timestamp=1, namespace="n", experiment="e", inputs={},
                event_name=""))
        logger.close()


class TestExposureHook:
    def test_assignment_get_writes_one_record(self):
        stream = io.StringIO()
        logger = ExposureLogger(stream)
        ir = parse_or_raise(
            "color = uniformChoice(choices=['r', 'b'], unit=userid);")
        a = evaluate(ir, {"userid": 7},
                     on_exposure=logger.exposure_hook("ns", "exp"))
        a.get("color")
        a.get("color")
        logger.close()
        [line] = stream.getvalue().splitlines()
        record = parse_record(line)
        assert record.inputs == {"userid": 7}
        assert record.params == {"color": a.peek("color")}
        assert record.script_digest == a.digest

    def test_peek_writes_nothing(self):
        stream = io.StringIO()
        logger = ExposureLogger(stream)
        ir = parse_or_raise("x = 1;")
        a = evaluate(ir, {"userid": 7},
                     on_exposure=logger.exposure_hook("ns", "exp"))
        a.peek("x")
        logger.close()
        assert stream.getvalue() == ""


class BrokenStream:
    def __init__(self, fail=True):
        self.fail = fail
        self.lines = []

    def write(self, data):
        if self.fail:
            raise OSError("sink unavailable")
        self.lines.append(data)


class TestSinkFailure:
    def test_buffered_then_replayed(self):
        sink = BrokenStream(fail=True)
        logger = ExposureLogger(sink, buffer_limit=100)
        for unit in range(5):
            logger.log_exposure(make_event(unit))
        logger.flush()
        assert sink.lines == []
        sink.fail = False
        logger.log_exposure(make_event(99))
        logger.close()
        assert len(sink.lines) == 6
        assert logger.dropped == 0

    def test_overflow_drops_oldest(self):
        sink = BrokenStream(fail=True)
        logger = ExposureLogger(sink, buffer_limit=3)
        for unit in range(10):
            logger.log_exposure(make_event(unit))
        logger.flush()
        assert logger.dropped == 7
        sink.fail = False
        logger.log_exposure(make_event(99))
        logger.close()
        kept = [parse_record(line).inputs["userid"] for line in sink.lines]
        assert kept == [7, 8, 9, 99]


class TestFileSink:
    def test_appends_to_path(self, tmp_path):
        path = str(tmp_path / "exposures.ndjson")
        logger = ExposureLogger(path)
        logger.log_exposure(make_event(1))
        logger.close()
        logger2 = ExposureLogger(path)
        logger2.log_exposure(make_event(2))
        logger2.close()
        lines = open(path).read().splitlines()
        assert [parse_record(l).inputs["userid"] for l in lines] == [1, 2]

    def test_rotation(self, tmp_path):
        path = str(tmp_path / "log.ndjson")
        logger = ExposureLogger(path, rotate_bytes=300)
        for unit in range(10):
            logger.log_exposure(make_event(unit))
        logger.close()
        rotated = list(tmp_path.glob("log.ndjson.*"))
        assert rotated, "expected at least one rotated segment"
        total = sum(len(open(str(p)).read().splitlines())
                    for p in [tmp_path / "log.ndjson", *rotated])
        assert total == 10

    def test_concurrent_writers_keep_lines_whole(self, tmp_path):
        path = str(tmp_path / "log.ndjson")
        logger = ExposureLogger(path)

        def worker(base):
            for i in range(50):
                logger.log_exposure(make_event(base + i))

        threads = [threading.Thread(target=worker, args=(k * 1000,))
                   for k in range(4)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        logger.close()
        lines = open(path).read().splitlines()
        assert len(lines) == 200
        for line in lines:
            parse_record(line)
