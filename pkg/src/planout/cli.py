"""Developer command line: compile, run, simulate, administer namespaces,
serve the HTTP API.

Exit codes: 0 success, 1 user error (bad input, diagnostics), 2 internal
error.  `--format json|table` controls machine-readable output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import dsl, ir as ir_mod, simulator
from .errors import PlanoutError
from .interpreter import evaluate
from .namespaces import NamespaceStore
from .overrides import parse_value
from .random_ops import SaltContext


def _load_config(path):
    """planout.toml-style flat key=value file."""
    config = {}
    if path and os.path.exists(path):
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#") or "=" not in line:
                    continue
                key, value = line.split("=", 1)
                config[key.strip()] = value.strip().strip("'\"")
    return config


def _read_script(path):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        return ir_mod.deserialize(text)
    result = dsl.parse(text)
    if not result.ok:
        for d in result.diagnostics:
            print(f"{path}:{d.offset}: {d.severity}: {d.message}",
                  file=sys.stderr)
        raise SystemExit(1)
    return result.ir


def _kv_pairs(pairs):
    values = {}
    for item in pairs or []:
        if "=" not in item:
            raise SystemExit(_user_error(f"expected k=v, got {item!r}"))
        key, value = item.split("=", 1)
        values[key] = parse_value(value)
    return values


def _json_pairs(pairs):
    values = {}
    for item in pairs or []:
        key, value = item.split("=", 1)
        values[key] = json.loads(value)
    return values


def _user_error(message):
    print(f"error: {message}", file=sys.stderr)
    return 1


def _print_map(values, fmt):
    if fmt == "json":
        print(json.dumps(values, separators=(",", ":"), sort_keys=False))
    else:
        width = max((len(str(k)) for k in values), default=1)
        for key, value in values.items():
            print(f"{key:<{width}}  {json.dumps(value)}")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="planout",
        description="deterministic experiment assignment toolkit")
    parser.add_argument("--config", default="planout.toml",
                        help="key=value config file (store, log_sink)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", help="DSL source -> canonical IR text")
    p.add_argument("file")

    p = sub.add_parser("decompile", help="canonical IR text -> DSL source")
    p.add_argument("file")

    p = sub.add_parser("run", help="evaluate a script for given inputs")
    p.add_argument("file")
    p.add_argument("--input", action="append", metavar="K=V")
    p.add_argument("--input-json", action="append", metavar="K=JSON",
                   help="inputs with structured values, e.g. arrays")
    p.add_argument("--override", action="append", metavar="K=V")
    p.add_argument("--ns", default="default")
    p.add_argument("--exp", default="default")
    p.add_argument("--format", choices=["json", "table"], default="json")

    p = sub.add_parser("simulate", help="sweep a script over units")
    p.add_argument("file")
    p.add_argument("--n", type=int, default=10000)
    p.add_argument("--unit", action="append",
                   help="input name to sweep (repeat for a grid)")
    p.add_argument("--pairs", help="comma-separated parameter pair a,b")
    p.add_argument("--format", choices=["json", "table"], default="table")

    p = sub.add_parser("ns", help="namespace administration")
    ns_sub = p.add_subparsers(dest="ns_command", required=True)

    q = ns_sub.add_parser("create")
    q.add_argument("name")
    q.add_argument("--unit", required=True, help="primary unit name")
    q.add_argument("--segments", type=int, default=10000)
    q.add_argument("--default", action="append", metavar="K=V",
                   help="launch default")
    q.add_argument("--store")

    q = ns_sub.add_parser("alloc")
    q.add_argument("namespace")
    q.add_argument("experiment")
    q.add_argument("file", help="script (DSL or IR)")
    q.add_argument("--segments", type=int, required=True)
    q.add_argument("--store")

    q = ns_sub.add_parser("dealloc")
    q.add_argument("namespace")
    q.add_argument("experiment")
    q.add_argument("--store")

    q = ns_sub.add_parser("defaults")
    q.add_argument("namespace")
    q.add_argument("values", nargs="*", metavar="K=V")
    q.add_argument("--store")

    q = ns_sub.add_parser("map")
    q.add_argument("namespace")
    q.add_argument("--store")
    q.add_argument("--format", choices=["json", "table"], default="table")

    p = sub.add_parser("serve", help="run the HTTP API")
    p.add_argument("--port", type=int, default=8710)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--store")
    p.add_argument("--log-sink")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = _load_config(args.config)
    try:
        return _dispatch(args, config)
    except SystemExit as exc:
        return int(exc.code or 0)
    except PlanoutError as exc:
        return _user_error(str(exc))
    except Exception as exc:  # pragma: no cover - internal failure path
        print(f"internal error: {exc}", file=sys.stderr)
        return 2


def _store_path(args, config):
    path = getattr(args, "store", None) or config.get("store")
    if not path:
        raise SystemExit(_user_error(
            "no store given (use --store or a config file)"))
    return path


def _dispatch(args, config) -> int:
    if args.command == "compile":
        script = _read_script(args.file)
        print(ir_mod.serialize(script))
        return 0

    if args.command == "decompile":
        script = _read_script(args.file)
        sys.stdout.write(dsl.decompile(script))
        return 0

    if args.command == "run":
        script = _read_script(args.file)
        inputs = _kv_pairs(args.input)
        inputs.update(_json_pairs(args.input_json))
        overrides = _kv_pairs(args.override)
        ctx = SaltContext(args.ns, args.exp)
        assignment = evaluate(script, inputs, overrides, ctx)
        _print_map(dict(assignment.params), args.format)
        return 0

    if args.command == "simulate":
        script = _read_script(args.file)
        units = args.unit or ["userid"]
        unit_spec = units[0] if len(units) == 1 else units
        pairs = [tuple(args.pairs.split(","))] if args.pairs else []
        report = simulator.simulate(script, unit_spec=unit_spec, n=args.n,
                                    pairs=pairs)
        if args.format == "json":
            print(json.dumps(report.to_dict(), sort_keys=True))
        else:
            print(report.table())
        return 0

    if args.command == "ns":
        return _dispatch_ns(args, config)

    if args.command == "serve":
        import uvicorn

        from .exposure import ExposureLogger
        from .service import create_app

        logger = None
        sink = args.log_sink or config.get("log_sink")
        if sink:
            logger = ExposureLogger(sink)
        store = NamespaceStore(path=args.store or config.get("store"),
                               exposure_logger=logger)
        uvicorn.run(create_app(store), host=args.host, port=args.port)
        return 0

    return _user_error(f"unknown command {args.command!r}")


def _dispatch_ns(args, config) -> int:
    store = NamespaceStore(path=_store_path(args, config))
    if args.ns_command == "create":
        store.create_namespace(args.name, args.unit,
                               num_segments=args.segments,
                               launch_defaults=_kv_pairs(args.default))
        print(f"created namespace {args.name} (version {store.version})")
        return 0
    if args.ns_command == "alloc":
        script = _read_script(args.file)
        exp = store.allocate_experiment(args.namespace, args.experiment,
                                        script, args.segments)
        print(f"allocated {len(exp.segments)} segments to "
              f"{args.experiment} (version {store.version})")
        return 0
    if args.ns_command == "dealloc":
        prior = store.deallocate_experiment(args.namespace, args.experiment)
        print(f"deallocated {args.experiment} (was {prior}, "
              f"version {store.version})")
        return 0
    if args.ns_command == "defaults":
        for key, value in _kv_pairs(args.values).items():
            store.set_launch_value(args.namespace, key, value)
        ns = store.namespace(args.namespace)
        _print_map(ns.launch_defaults, "table")
        return 0
    if args.ns_command == "map":
        ns = store.namespace(args.namespace)
        if args.format == "json":
            print(json.dumps({"num_segments": ns.num_segments,
                              "segments": ns.segment_map}))
        else:
            counts: dict = {}
            for exp in ns.segment_map:
                label = exp if exp is not None else "(unallocated)"
                counts[label] = counts.get(label, 0) + 1
            _print_map(counts, "table")
        return 0
    return _user_error(f"unknown ns command {args.ns_command!r}")


def entry_point():  # console script
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
