"""Structured logging of exposures and auxiliary events.

Records are newline-delimited JSON, one record per line (schema in
docs/log_format.md).  Exposure records are deduplicated at most once per
(namespace, experiment, unit tuple) per process through a bounded LRU;
custom events are never deduplicated.

Writers funnel through an internal queue drained by a single consumer
thread, so logging never blocks evaluation beyond the queue insertion.
"""

from __future__ import annotations

import json
import os
import queue
import threading
import time
from collections import OrderedDict
from dataclasses import dataclass, field

from .errors import SinkUnavailable


def now_ms() -> int:
    return int(time.time() * 1000)


@dataclass(frozen=True)
class ExposureEvent:
    timestamp: int
    namespace: str
    experiment: str
    inputs: dict
    params: dict
    overrides: dict
    script_digest: str

    def to_record(self) -> dict:
        return {
            "kind": "exposure",
            "timestamp": self.timestamp,
            "namespace": self.namespace,
            "experiment": self.experiment,
            "inputs": self.inputs,
            "params": self.params,
            "overrides": self.overrides,
            "script_digest": self.script_digest,
        }


@dataclass(frozen=True)
class CustomEvent:
    timestamp: int
    namespace: str
    experiment: str
    inputs: dict
    event_name: str
    payload: dict = field(default_factory=dict)

    def to_record(self) -> dict:
        return {
            "kind": "event",
            "timestamp": self.timestamp,
            "namespace": self.namespace,
            "experiment": self.experiment,
            "inputs": self.inputs,
            "event_name": self.event_name,
            "payload": self.payload,
        }


def parse_record(line: str):
    """Inverse of the writer: one line -> one event object."""
    doc = json.loads(line)
    kind = doc.get("kind")
    if kind == "exposure":
        return ExposureEvent(
            timestamp=doc["timestamp"], namespace=doc["namespace"],
            experiment=doc["experiment"], inputs=doc["inputs"],
            params=doc["params"], overrides=doc["overrides"],
            script_digest=doc["script_digest"])
    if kind == "event":
        return CustomEvent(
            timestamp=doc["timestamp"], namespace=doc["namespace"],
            experiment=doc["experiment"], inputs=doc["inputs"],
            event_name=doc["event_name"], payload=doc["payload"])
    raise ValueError(f"unknown record kind {kind!r}")


def _canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


class ExposureLogger:
    """Appends records to a sink (file path or writable stream).

    When the sink raises, records are buffered up to `buffer_limit` and then
    dropped, counted in `dropped`.
    """

    def __init__(self, sink, dedup_capacity=100_000, buffer_limit=10_000,
                 rotate_bytes=None):
        self._path = None
        self._stream = None
        if isinstance(sink, str):
            self._path = sink
        else:
            self._stream = sink
        self._dedup: OrderedDict = OrderedDict()
        self._dedup_capacity = dedup_capacity
        self._buffer_limit = buffer_limit
        self._rotate_bytes = rotate_bytes
        self._written_bytes = 0
        self._rotations = 0
        self.dropped = 0
        self._pending: list[str] = []
        self._queue: queue.Queue = queue.Queue()
        self._lock = threading.Lock()
        self._closed = False
        self._consumer = threading.Thread(target=self._drain, daemon=True)
        self._consumer.start()

    # --- public API ---

    def log_exposure(self, event: ExposureEvent) -> bool:
        """Enqueues the record; returns False if deduplicated."""
        key = _canonical([event.namespace, event.experiment, event.inputs])
        with self._lock:
            if key in self._dedup:
                self._dedup.move_to_end(key)
                return False
            self._dedup[key] = None
            while len(self._dedup) > self._dedup_capacity:
                self._dedup.popitem(last=False)
        self._queue.put(_canonical(event.to_record()))
        return True

    def log_event(self, event: CustomEvent) -> None:
        if not event.event_name:
            raise ValueError("event name must be nonempty")
        self._queue.put(_canonical(event.to_record()))

    def exposure_hook(self, namespace: str, experiment: str):
        """Adapter from Assignment exposure callbacks to exposure records."""
        def hook(assignment):
            self.log_exposure(ExposureEvent(
                timestamp=now_ms(), namespace=namespace,
                experiment=experiment, inputs=assignment.inputs,
                params=dict(assignment.params),
                overrides=assignment.overrides,
                script_digest=assignment.digest))
        return hook

    def flush(self):
        self._queue.join()

    def close(self):
        self.flush()
        self._closed = True
        self._queue.put(None)
        self._consumer.join(timeout=5)

    # --- consumer side ---

    def _drain(self):
        while True:
            line = self._queue.get()
            if line is None:
                self._queue.task_done()
                return
            try:
                self._write(line)
            finally:
                self._queue.task_done()

    def _write(self, line):
        self._pending.append(line)
        try:
            self._write_pending()
        except (OSError, SinkUnavailable):
            overflow = len(self._pending) - self._buffer_limit
            if overflow > 0:
                del self._pending[:overflow]
                self.dropped += overflow

    def _write_pending(self):
        while self._pending:
            line = self._pending[0]
            data = line + "\n"
            if self._path is not None:
                if (self._rotate_bytes is not None
                        and self._written_bytes + len(data) > self._rotate_bytes
                        and self._written_bytes > 0):
                    self._rotations += 1
                    os.replace(self._path, f"{self._path}.{self._rotations}")
                    self._written_bytes = 0
                with open(self._path, "a", encoding="utf-8") as fh:
                    fh.write(data)
            else:
                self._stream.write(data)
            self._written_bytes += len(data)
            self._pending.pop(0)
