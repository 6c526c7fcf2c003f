"""HTTP API: launch selection runs, poll their event streams with cursors,
evaluate attribute sets, compare methods, and replay uploaded traces.

Runs execute on background threads, each appending serialized trace lines to
an in-memory buffer and to its file in the traces directory, so polling never
waits on an evaluation. The served event stream is the exact line content of
the persisted trace. The registry is rebuilt from trace files at startup.
"""

from __future__ import annotations

import json
import threading
import time
import uuid
from pathlib import Path

from fastapi import FastAPI, Form, HTTPException, UploadFile
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from . import trace as trace_mod
from . import views
from .dataset import Dataset, load_csv, stats
from .errors import FPSelectError, TraceError, UnknownAttribute
from .explorer import ExplorationConfig, run_method
from .measures import AttributeSet, CostWeights, attribute_set_properties

METHOD_ALIASES = {"cond-entropy": "conditional_entropy"}


class WeightsBody(BaseModel):
    size: float = 1.0
    instability: float = 1.0
    time: float = 0.0
    epsilon: float = 0.01


class ConfigBody(BaseModel):
    method: str = "fpselect"
    threshold: float
    budget: int = 1
    paths: int = 1
    weights: WeightsBody = WeightsBody()

    def build(self) -> ExplorationConfig:
        try:
            return ExplorationConfig(
                threshold_alpha=self.threshold,
                beam_width=self.paths,
                submission_budget=self.budget,
                weights=CostWeights(
                    w_size=self.weights.size,
                    w_instability=self.weights.instability,
                    w_time=self.weights.time,
                    epsilon=self.weights.epsilon,
                ),
                method=METHOD_ALIASES.get(self.method, self.method),
            )
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from None


class RunBody(BaseModel):
    dataset: str
    config: ConfigBody


class EvaluateBody(BaseModel):
    dataset: str
    attributes: list[str]
    config: ConfigBody


class CompareBody(BaseModel):
    dataset: str
    config: ConfigBody


class DatasetStore:
    """Lazy-loading view over the hosted datasets directory."""

    def __init__(self, root: Path):
        self.root = root
        self._cache: dict[str, Dataset] = {}
        self._lock = threading.Lock()

    def ids(self) -> list[str]:
        return sorted(p.stem for p in self.root.glob("*.csv"))

    def get(self, dataset_id: str) -> Dataset:
        with self._lock:
            if dataset_id in self._cache:
                return self._cache[dataset_id]
        path = self.root / f"{dataset_id}.csv"
        if not path.exists():
            raise HTTPException(status_code=404, detail=f"unknown dataset {dataset_id!r}")
        sidecar = path.with_name(path.stem + ".times.json")
        ds = load_csv(path, sidecar if sidecar.exists() else None)
        with self._lock:
            self._cache[dataset_id] = ds
        return ds

    def digests(self) -> dict[str, str]:
        return {ds_id: self.get(ds_id).digest for ds_id in self.ids()}


class Run:
    def __init__(self, run_id: str, config_echo: dict, trace_path: Path | None):
        self.id = run_id
        self.config = config_echo
        self.trace_path = trace_path
        self.state = "running"
        self.error: str | None = None
        self.lines: list[str] = []
        self._lock = threading.Lock()

    def append(self, line: str) -> None:
        with self._lock:
            self.lines.append(line)

    def snapshot(self, cursor: int) -> tuple[list[str], int, str]:
        with self._lock:
            lines = self.lines[cursor:]
            return lines, cursor + len(lines), self.state

    def handle(self) -> dict:
        with self._lock:
            return {
                "run_id": self.id,
                "state": self.state,
                "config": self.config,
                "event_count": len(self.lines),
                "error": self.error,
            }


def create_app(datasets_dir: str | Path, traces_dir: str | Path, ui_dir: str | Path | None = None) -> FastAPI:
    datasets = DatasetStore(Path(datasets_dir))
    traces_root = Path(traces_dir)
    traces_root.mkdir(parents=True, exist_ok=True)
    runs: dict[str, Run] = {}
    runs_lock = threading.Lock()

    app = FastAPI(title="fpselect service")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    def register(run: Run) -> None:
        with runs_lock:
            runs[run.id] = run

    def get_run(run_id: str) -> Run:
        with runs_lock:
            run = runs.get(run_id)
        if run is None:
            raise HTTPException(status_code=404, detail=f"unknown run {run_id!r}")
        return run

    # rebuild the registry from completed trace files
    for path in sorted(traces_root.glob("*.trace")):
        events, complete = trace_mod.tail_events(path)
        if not events or events[0].get("type") != "start":
            continue
        run = Run(path.stem, events[0].get("config", {}), path)
        run.lines = [trace_mod.serialize_event(e) for e in events]
        run.state = "finished" if complete else "failed"
        register(run)

    def launch(dataset: Dataset, config: ExplorationConfig) -> Run:
        run_id = uuid.uuid4().hex[:12]
        run = Run(run_id, config.to_json_dict(), traces_root / f"{run_id}.trace")
        register(run)

        def execute():
            try:
                with run.trace_path.open("w", encoding="utf-8", newline="\n") as fh:
                    def sink(event: dict) -> None:
                        line = trace_mod.serialize_event(event)
                        fh.write(line)
                        fh.write("\n")
                        fh.flush()
                        run.append(line)

                    run_method(dataset, config, sink)
                run.state = "finished"
            except Exception as exc:  # surfaced through the run handle
                run.error = str(exc)
                run.state = "failed"

        threading.Thread(target=execute, daemon=True).start()
        return run

    @app.get("/api/health")
    def health():
        return {"status": "ok"}

    @app.get("/api/datasets")
    def list_datasets():
        return {"datasets": [{"id": ds_id} for ds_id in datasets.ids()]}

    @app.get("/api/datasets/{dataset_id}/stats")
    def dataset_stats(dataset_id: str):
        ds = datasets.get(dataset_id)
        view = views.stats_view(stats(ds))
        view["attributes"] = ds.attribute_names()
        view["digest"] = ds.digest
        return view

    @app.post("/api/runs", status_code=201)
    def start_run(body: RunBody):
        ds = datasets.get(body.dataset)
        config = body.config.build()
        return launch(ds, config).handle()

    @app.get("/api/runs")
    def list_runs():
        with runs_lock:
            return {"runs": [run.handle() for run in runs.values()]}

    @app.get("/api/runs/{run_id}")
    def run_handle(run_id: str):
        return get_run(run_id).handle()

    @app.get("/api/runs/{run_id}/events")
    def run_events(run_id: str, cursor: int = 0):
        run = get_run(run_id)
        lines, next_cursor, state = run.snapshot(max(cursor, 0))
        return {"events": lines, "cursor": next_cursor, "state": state}

    @app.post("/api/evaluate")
    def evaluate(body: EvaluateBody):
        ds = datasets.get(body.dataset)
        config = body.config.build()
        names = ds.attribute_names()
        import difflib

        indices = []
        for name in body.attributes:
            if name not in names:
                suggestions = difflib.get_close_matches(name, names, n=3)
                raise HTTPException(
                    status_code=422,
                    detail=f"unknown attribute {name!r}"
                    + (f"; close matches: {suggestions}" if suggestions else ""),
                )
            indices.append(names.index(name))
        props = attribute_set_properties(ds, AttributeSet(tuple(indices)), config)
        return views.properties_view(props, names)

    @app.post("/api/compare")
    def compare(body: CompareBody):
        ds = datasets.get(body.dataset)
        config = body.config.build()
        return {"rows": views.compare_methods(ds, config)}

    @app.post("/api/replays", status_code=201)
    def replay(
        trace: UploadFile,
        pacing: float = Form(default=0.0),
        detached: bool = Form(default=False),
    ):
        raw = trace.file.read().decode("utf-8", errors="replace")
        events = []
        for line_no, line in enumerate(raw.split("\n"), start=1):
            if not line:
                continue
            try:
                event = json.loads(line)
            except json.JSONDecodeError:
                raise HTTPException(status_code=422, detail=f"line {line_no}: invalid JSON")
            if not isinstance(event, dict):
                raise HTTPException(status_code=422, detail=f"line {line_no}: not an object")
            events.append(event)
        try:
            trace_mod.validate_events(events)
        except TraceError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from None

        digest = events[0].get("dataset_digest")
        if not detached and digest not in datasets.digests().values():
            raise HTTPException(
                status_code=409,
                detail="trace dataset digest matches no hosted dataset; "
                "set detached=true to replay events only",
            )

        run_id = uuid.uuid4().hex[:12]
        run = Run(run_id, events[0].get("config", {}), None)
        lines = [trace_mod.serialize_event(e) for e in events]
        register(run)
        if pacing and pacing > 0:
            delay = 1.0 / min(pacing, 1000.0)

            def feed():
                for line in lines:
                    run.append(line)
                    time.sleep(delay)
                run.state = "finished"

            threading.Thread(target=feed, daemon=True).start()
        else:
            run.lines = lines
            run.state = "finished"
        return run.handle()

    @app.exception_handler(UnknownAttribute)
    def unknown_attribute_handler(request, exc):
        from fastapi.responses import JSONResponse

        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.exception_handler(FPSelectError)
    def package_error_handler(request, exc):
        from fastapi.responses import JSONResponse

        return JSONResponse(status_code=422, content={"detail": str(exc)})

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
