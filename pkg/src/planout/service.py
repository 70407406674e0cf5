"""HTTP surface for assignment requests and namespace administration.

REST endpoints (documented in docs/http_api.md):

    GET  /version
    GET  /namespaces
    POST /namespaces
    GET  /namespaces/{ns}
    GET  /namespaces/{ns}/segment-map
    GET  /namespaces/{ns}/assignment?<primary unit>=...&ns_<ns>=<overrides>
    POST /namespaces/{ns}/experiments
    POST /namespaces/{ns}/experiments/{exp}/deallocate
    PUT  /namespaces/{ns}/defaults
    POST /compile
    POST /simulate

Admin mutations carry the store version they read; a stale version yields
409.  Assignment responses are deterministic per (store version, unit,
overrides).  CORS is enabled so the dashboard can run from another origin.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import dsl, ir as ir_mod, simulator
from .errors import (
    DuplicateNamespace,
    InvalidScript,
    MalformedOverride,
    PlanoutError,
    UnknownExperiment,
    UnknownNamespace,
    VersionConflict,
)
from .namespaces import NamespaceStore
from .overrides import parse_override_string, parse_value


def create_app(store: NamespaceStore) -> FastAPI:
    app = FastAPI(title="experiment assignment service")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
        allow_headers=["*"])
    app.state.store = store

    @app.exception_handler(PlanoutError)
    async def planout_error(request: Request, exc: PlanoutError):
        status = 500
        body = {"error": type(exc).__name__, "detail": str(exc)}
        if isinstance(exc, (UnknownNamespace, UnknownExperiment)):
            status = 404
        elif isinstance(exc, VersionConflict):
            status = 409
            body["version"] = exc.actual
        elif isinstance(exc, (DuplicateNamespace, MalformedOverride)):
            status = 400
        elif isinstance(exc, InvalidScript):
            status = 422
            body["diagnostics"] = [
                {"severity": d.severity, "message": d.message,
                 "offset": d.offset}
                for d in exc.diagnostics]
        return JSONResponse(status_code=status, content=body)

    @app.get("/version")
    def version():
        return {"version": store.version}

    @app.get("/namespaces")
    def list_namespaces():
        return {"version": store.version,
                "namespaces": [_namespace_summary(store.namespace(name))
                               for name in store.namespace_names()]}

    @app.post("/namespaces", status_code=201)
    def create_namespace(body: dict):
        ns = store.create_namespace(
            body["name"], body["primary_unit"],
            num_segments=body.get("num_segments", 10000),
            launch_defaults=body.get("launch_defaults") or {},
            expected_version=body.get("version"))
        return {"version": store.version, "namespace": _namespace_summary(ns)}

    @app.get("/namespaces/{ns_name}")
    def namespace_detail(ns_name: str):
        ns = store.namespace(ns_name)
        return {"version": store.version, "namespace": _namespace_summary(ns)}

    @app.get("/namespaces/{ns_name}/segment-map")
    def segment_map(ns_name: str):
        ns = store.namespace(ns_name)
        return {"version": store.version, "num_segments": ns.num_segments,
                "segments": list(ns.segment_map)}

    @app.get("/namespaces/{ns_name}/assignment")
    def assignment(ns_name: str, request: Request):
        ns = store.namespace(ns_name)
        query = dict(request.query_params)
        override_param = f"ns_{ns_name}"
        overrides = parse_override_string(query.pop(override_param, ""))
        if ns.primary_unit not in query:
            return JSONResponse(status_code=400, content={
                "error": "MissingPrimaryUnit",
                "detail": f"query must include {ns.primary_unit!r}"})
        unit_value = parse_value(query.pop(ns.primary_unit))
        extra = {k: parse_value(v) for k, v in query.items()}
        exp_name, view = store.assign(ns_name, unit_value, extra, overrides)
        was_exposed = view.exposed
        params = view.materialize()
        return {
            "experiment": exp_name,
            "params": params,
            "frozen": sorted(k for k in overrides if k in params),
            "exposure_logged": (not was_exposed and view.exposed
                                and store._logger is not None),
        }

    @app.post("/namespaces/{ns_name}/experiments", status_code=201)
    def add_experiment(ns_name: str, body: dict):
        script = _script_from_body(body)
        exp = store.allocate_experiment(
            ns_name, body["name"], script, body["num_segments"],
            expected_version=body.get("version"))
        return {"version": store.version,
                "experiment": {"name": exp.name, "status": exp.status,
                               "segments": list(exp.segments)}}

    @app.post("/namespaces/{ns_name}/experiments/{exp_name}/deallocate")
    def deallocate(ns_name: str, exp_name: str, body: dict | None = None):
        body = body or {}
        prior = store.deallocate_experiment(
            ns_name, exp_name, expected_version=body.get("version"))
        return {"version": store.version, "prior_status": prior}

    @app.put("/namespaces/{ns_name}/defaults")
    def set_defaults(ns_name: str, body: dict):
        expected = body.get("version")
        for parameter, value in body["values"].items():
            store.set_launch_value(ns_name, parameter, value,
                                   expected_version=expected)
            expected = None  # only the first mutation checks the version
        return {"version": store.version,
                "launch_defaults": store.namespace(ns_name).launch_defaults}

    @app.post("/compile")
    def compile_script(body: dict):
        result = dsl.parse(body["source"])
        diagnostics = list(result.diagnostics)
        payload: dict = {}
        if result.ok:
            diagnostics.extend(ir_mod.validate(result.ir))
            payload["ir"] = ir_mod.serialize(result.ir)
            payload["parameters"] = ir_mod.list_parameters(result.ir)
            payload["units"] = ir_mod.list_units(result.ir)
        payload["diagnostics"] = [
            {"severity": d.severity, "message": d.message, "offset": d.offset}
            for d in diagnostics]
        return payload

    @app.post("/simulate")
    def simulate_script(body: dict):
        script = _script_from_body(body)
        errors = [d for d in ir_mod.validate(script) if d.is_error]
        if errors:
            raise InvalidScript(errors)
        report = simulator.simulate(
            script,
            unit_spec=body.get("unit", "userid"),
            n=int(body.get("n", 10000)),
            pairs=[tuple(p) for p in body.get("pairs", [])])
        return report.to_dict()

    return app


def _script_from_body(body: dict):
    if "ir" in body:
        return ir_mod.deserialize(body["ir"])
    result = dsl.parse(body["source"])
    if not result.ok:
        raise InvalidScript(result.diagnostics)
    return result.ir


def _namespace_summary(ns) -> dict:
    allocated = sum(1 for s in ns.segment_map if s is not None)
    return {
        "name": ns.name,
        "primary_unit": ns.primary_unit,
        "num_segments": ns.num_segments,
        "allocated_segments": allocated,
        "launch_defaults": ns.launch_defaults,
        "experiments": [
            {"name": e.name, "status": e.status,
             "num_segments": len(e.segments),
             "parameters": ir_mod.list_parameters(e.ir)}
            for e in ns.experiments.values()
        ],
    }
