"""Namespace management: primary units hash to segments, segments map to
experiments, and everything else serves launch defaults.

The store is a single-file append-only action log with periodic snapshots
(docs/store_format.md).  Segment allocation uses a deterministic salted
shuffle, so replaying the log reproduces the exact same segment map.

Reads (assign) work against an immutable namespace snapshot; admin
mutations build a modified copy under a single writer lock and swap it in
atomically, so an assignment never observes a half-applied allocation.
"""

from __future__ import annotations

import copy
import json
import os
import threading
import time
from dataclasses import dataclass, field

from . import ir as ir_mod
from . import random_ops
from .errors import (
    DuplicateNamespace,
    InsufficientSegments,
    InvalidScript,
    UnknownExperiment,
    UnknownNamespace,
    VersionConflict,
)
from .interpreter import Assignment, AssignmentCache
from .ir import ScriptIR
from .random_ops import SaltContext

DEFAULT_NUM_SEGMENTS = 10000
SEGMENT_SALT = "_segment"
ALLOCATION_SALT = "_alloc"
SNAPSHOT_INTERVAL = 100

STORE_FORMAT_VERSION = "1"

ACTIVE = "active"
DEALLOCATED = "deallocated"


@dataclass
class ExperimentDef:
    name: str
    ir: ScriptIR
    segments: tuple  # historical segment set, retained after deallocation
    created_at: int
    status: str = ACTIVE


@dataclass
class Namespace:
    name: str
    primary_unit: str
    num_segments: int = DEFAULT_NUM_SEGMENTS
    launch_defaults: dict = field(default_factory=dict)
    experiments: dict = field(default_factory=dict)
    segment_map: list = field(default_factory=list)  # segment -> exp name | None

    def __post_init__(self):
        if not self.segment_map:
            self.segment_map = [None] * self.num_segments

    def unallocated_segments(self) -> list:
        return [i for i, exp in enumerate(self.segment_map) if exp is None]

    def active_experiments(self) -> list:
        return [e for e in self.experiments.values() if e.status == ACTIVE]


def segment_of(ns: Namespace, unit_value) -> int:
    """Deterministic segment for a primary unit; uses a namespace-scoped
    salt distinct from every experiment's parameter hashing."""
    ctx = SaltContext(ns.name, SEGMENT_SALT, SEGMENT_SALT)
    return random_ops.hash_draw(ctx, [unit_value]).integer % ns.num_segments


class ParameterView:
    """What one unit sees: experiment assignment first, then launch
    defaults, then the caller's in-code default."""

    def __init__(self, namespace: Namespace, assignment: Assignment | None,
                 overrides=None):
        self.namespace = namespace
        self.assignment = assignment
        self.overrides = dict(overrides or {})

    @property
    def experiment(self) -> str | None:
        return self.assignment.ctx.experiment if self.assignment else None

    def get(self, name, default=None):
        if self.assignment is not None and name in self.assignment.params:
            return self.assignment.get(name)
        if name in self.overrides:
            return self.overrides[name]
        if name in self.namespace.launch_defaults:
            return self.namespace.launch_defaults[name]
        return default

    def materialize(self) -> dict:
        """Launch defaults overlaid with the experiment's parameters (a
        materializing access) and any default-path overrides."""
        result = dict(self.namespace.launch_defaults)
        if self.assignment is not None:
            result.update(self.assignment.get_all())
        else:
            result.update(self.overrides)
        return result

    @property
    def exposed(self) -> bool:
        return self.assignment is not None and self.assignment.exposed


class NamespaceStore:
    """All namespaces plus the durable action log.

    `path=None` keeps the store purely in memory.  Every mutation bumps
    `version`; admin callers may pass `expected_version` for optimistic
    concurrency.
    """

    def __init__(self, path=None, exposure_logger=None, cache_size=10000):
        self._path = path
        self._logger = exposure_logger
        self._namespaces: dict[str, Namespace] = {}
        self.version = 0
        self._actions_since_snapshot = 0
        self._lock = threading.RLock()
        self._cache = AssignmentCache(maxsize=cache_size)
        if path is not None and os.path.exists(path):
            self._load()

    # --- admin operations ---

    def create_namespace(self, name, primary_unit,
                         num_segments=DEFAULT_NUM_SEGMENTS,
                         launch_defaults=None, expected_version=None):
        with self._lock:
            self._check_version(expected_version)
            ns = self._apply_create(name, primary_unit, num_segments,
                                    dict(launch_defaults or {}))
            self._commit({"action": "create_namespace", "name": name,
                          "primary_unit": primary_unit,
                          "num_segments": num_segments,
                          "launch_defaults": ns.launch_defaults})
            return ns

    def allocate_experiment(self, ns_name, exp_name, script,
                            num_segments, expected_version=None):
        """`script` may be a ScriptIR or DSL source text."""
        with self._lock:
            self._check_version(expected_version)
            script_ir = _coerce_ir(script)
            exp = self._apply_allocate(ns_name, exp_name, script_ir,
                                       num_segments, now_ms())
            self._commit({"action": "allocate", "namespace": ns_name,
                          "experiment": exp_name,
                          "script": ir_mod.serialize(script_ir),
                          "num_segments": num_segments,
                          "created_at": exp.created_at})
            return exp

    def deallocate_experiment(self, ns_name, exp_name, expected_version=None):
        """Idempotent: deallocating twice returns the prior status."""
        with self._lock:
            self._check_version(expected_version)
            prior = self._apply_deallocate(ns_name, exp_name)
            self._commit({"action": "deallocate", "namespace": ns_name,
                          "experiment": exp_name})
            return prior

    def set_launch_value(self, ns_name, parameter, value,
                         expected_version=None):
        with self._lock:
            self._check_version(expected_version)
            self._apply_set_launch(ns_name, parameter, value)
            self._commit({"action": "set_launch_value", "namespace": ns_name,
                          "parameter": parameter, "value": value})

    # --- read path ---

    def namespace(self, name) -> Namespace:
        ns = self._namespaces.get(name)
        if ns is None:
            raise UnknownNamespace(f"no namespace named {name!r}")
        return ns

    def namespace_names(self) -> list:
        return list(self._namespaces)

    def assign(self, ns_name, primary_unit_value, extra_inputs=None,
               overrides=None):
        """Maps the unit to a segment, then to an experiment (or the
        default path).  Returns (experiment name | None, ParameterView)."""
        ns = self.namespace(ns_name)
        segment = segment_of(ns, primary_unit_value)
        exp_name = ns.segment_map[segment]
        if exp_name is None:
            return None, ParameterView(ns, None, overrides)
        exp = ns.experiments[exp_name]
        ctx = SaltContext(ns.name, exp_name)
        inputs = {ns.primary_unit: primary_unit_value}
        inputs.update(extra_inputs or {})
        hook = (self._logger.exposure_hook(ns.name, exp_name)
                if self._logger is not None else None)
        assignment = self._cache.get_or_evaluate(
            exp.ir, inputs, overrides, ctx, on_exposure=hook)
        return exp_name, ParameterView(ns, assignment, overrides)

    # --- state transitions (shared by API calls and log replay) ---

    def _apply_create(self, name, primary_unit, num_segments,
                      launch_defaults):
        if name in self._namespaces:
            raise DuplicateNamespace(f"namespace {name!r} already exists")
        if not name:
            raise ValueError("namespace name must be nonempty")
        if num_segments < 1:
            raise ValueError("num_segments must be >= 1")
        random_ops.check_salt_component(name)
        ns = Namespace(name=name, primary_unit=primary_unit,
                       num_segments=num_segments,
                       launch_defaults=launch_defaults)
        namespaces = dict(self._namespaces)
        namespaces[name] = ns
        self._namespaces = namespaces
        return ns

    def _apply_allocate(self, ns_name, exp_name, script_ir, num_segments,
                        created_at):
        ns = copy.deepcopy(self.namespace(ns_name))
        random_ops.check_salt_component(exp_name)
        if exp_name in ns.experiments:
            raise DuplicateNamespace(
                f"experiment {exp_name!r} already exists in {ns_name!r}")
        diagnostics = [d for d in ir_mod.validate(script_ir) if d.is_error]
        if diagnostics:
            raise InvalidScript(diagnostics)
        pool = ns.unallocated_segments()
        if num_segments < 1 or num_segments > len(pool):
            raise InsufficientSegments(
                f"requested {num_segments} of {len(pool)} free segments")
        ctx = SaltContext(ns.name, exp_name, ALLOCATION_SALT)
        chosen = random_ops.sample(pool, num_segments, ctx, [exp_name])
        exp = ExperimentDef(name=exp_name, ir=script_ir,
                            segments=tuple(sorted(chosen)),
                            created_at=created_at)
        for seg in chosen:
            ns.segment_map[seg] = exp_name
        ns.experiments[exp_name] = exp
        self._swap(ns)
        return exp

    def _apply_deallocate(self, ns_name, exp_name):
        ns = copy.deepcopy(self.namespace(ns_name))
        exp = ns.experiments.get(exp_name)
        if exp is None:
            raise UnknownExperiment(
                f"no experiment {exp_name!r} in {ns_name!r}")
        prior = exp.status
        if exp.status == ACTIVE:
            exp.status = DEALLOCATED
            for seg in exp.segments:
                if ns.segment_map[seg] == exp_name:
                    ns.segment_map[seg] = None
        self._swap(ns)
        return prior

    def _apply_set_launch(self, ns_name, parameter, value):
        ns = copy.deepcopy(self.namespace(ns_name))
        ns.launch_defaults[parameter] = value
        self._swap(ns)

    def _swap(self, ns):
        namespaces = dict(self._namespaces)
        namespaces[ns.name] = ns
        self._namespaces = namespaces

    def _check_version(self, expected_version):
        if expected_version is not None and expected_version != self.version:
            raise VersionConflict(expected_version, self.version)

    # --- durability ---

    def _commit(self, record):
        self.version += 1
        record["v"] = self.version
        record["ts"] = now_ms()
        if self._path is not None:
            with open(self._path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(record, sort_keys=True,
                                    separators=(",", ":")) + "\n")
            self._actions_since_snapshot += 1
            if self._actions_since_snapshot >= SNAPSHOT_INTERVAL:
                self._write_snapshot()

    def _write_snapshot(self):
        record = {"action": "snapshot", "v": self.version, "ts": now_ms(),
                  "format": STORE_FORMAT_VERSION,
                  "state": self._state_dict()}
        with open(self._path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(record, sort_keys=True,
                                separators=(",", ":")) + "\n")
        self._actions_since_snapshot = 0

    def _state_dict(self):
        namespaces = {}
        for ns in self._namespaces.values():
            namespaces[ns.name] = {
                "primary_unit": ns.primary_unit,
                "num_segments": ns.num_segments,
                "launch_defaults": ns.launch_defaults,
                "experiments": {
                    e.name: {
                        "script": ir_mod.serialize(e.ir),
                        "segments": list(e.segments),
                        "created_at": e.created_at,
                        "status": e.status,
                    }
                    for e in ns.experiments.values()
                },
            }
        return namespaces

    def _restore_state(self, version, state):
        self.version = version
        namespaces = {}
        for name, doc in state.items():
            ns = Namespace(name=name, primary_unit=doc["primary_unit"],
                           num_segments=doc["num_segments"],
                           launch_defaults=dict(doc["launch_defaults"]))
            for exp_name, edoc in doc["experiments"].items():
                exp = ExperimentDef(
                    name=exp_name,
                    ir=ir_mod.deserialize(edoc["script"]),
                    segments=tuple(edoc["segments"]),
                    created_at=edoc["created_at"],
                    status=edoc["status"])
                ns.experiments[exp_name] = exp
                if exp.status == ACTIVE:
                    for seg in exp.segments:
                        ns.segment_map[seg] = exp_name
            namespaces[name] = ns
        self._namespaces = namespaces

    def _load(self):
        with open(self._path, encoding="utf-8") as fh:
            records = [json.loads(line) for line in fh if line.strip()]
        # Start from the last snapshot, if any, then replay what follows.
        start = 0
        for i, record in enumerate(records):
            if record["action"] == "snapshot":
                start = i
        for record in records[start:]:
            action = record["action"]
            if action == "snapshot":
                self._restore_state(record["v"], record["state"])
                continue
            if action == "create_namespace":
                self._apply_create(record["name"], record["primary_unit"],
                                   record["num_segments"],
                                   dict(record["launch_defaults"]))
            elif action == "allocate":
                self._apply_allocate(
                    record["namespace"], record["experiment"],
                    ir_mod.deserialize(record["script"]),
                    record["num_segments"], record["created_at"])
            elif action == "deallocate":
                self._apply_deallocate(record["namespace"],
                                       record["experiment"])
            elif action == "set_launch_value":
                self._apply_set_launch(record["namespace"],
                                       record["parameter"], record["value"])
            else:
                raise ValueError(f"unknown action {action!r} in store log")
            self.version = record["v"]


def _coerce_ir(script) -> ScriptIR:
    if isinstance(script, ScriptIR):
        return script
    from .dsl import parse_or_raise
    return parse_or_raise(script)


def now_ms() -> int:
    return int(time.time() * 1000)
