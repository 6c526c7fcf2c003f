"""Replayable execution traces: line-delimited JSON events.

One event per line, UTF-8, compact separators, keys in the fixed order below,
so identical runs produce byte-identical files:

    start:    type, step, version, method, config, attributes, dataset_digest
    evaluate: type, step, set, cost, sensitivity, efficiency, satisfying
    prune:    type, step, set, reason
    beam:     type, step, sets
    best:     type, step, set, cost
    end:      type, step, result, explored_count, pruned_count, duration_ms

`efficiency` is a number or the string "inf". `result` is a set (index list)
or null when the threshold was unreachable. `duration_ms` is pinned to 0: the
trace is a deterministic function of dataset and config, and wall time would
break the byte-identity contract. The first event is the single start, the
last the single end, steps never decrease, and any set referenced by beam,
best or end must have been evaluated earlier.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import TYPE_CHECKING, Callable, Iterable

from .errors import IncompleteTrace, InvariantViolation, MalformedLine, UnsupportedVersion

if TYPE_CHECKING:
    from .dataset import Dataset
    from .explorer import ExplorationConfig, PruneReason, SelectionResult
    from .measures import AttributeSet, NodeEvaluation

FORMAT_VERSION = "1"
EVENT_TYPES = ("start", "evaluate", "prune", "beam", "best", "end")


# --- event constructors ------------------------------------------------------

def start_event(config: "ExplorationConfig", dataset: "Dataset") -> dict:
    return {
        "type": "start",
        "step": 0,
        "version": FORMAT_VERSION,
        "method": config.method,
        "config": config.to_json_dict(),
        "attributes": dataset.attribute_names(),
        "dataset_digest": dataset.digest,
    }


def evaluate_event(step: int, ev: "NodeEvaluation") -> dict:
    return {
        "type": "evaluate",
        "step": step,
        "set": list(ev.set.members),
        "cost": ev.cost,
        "sensitivity": ev.sensitivity,
        "efficiency": "inf" if ev.efficiency == float("inf") else ev.efficiency,
        "satisfying": ev.satisfying,
    }


def prune_event(step: int, candidate: "AttributeSet", reason: "PruneReason") -> dict:
    return {
        "type": "prune",
        "step": step,
        "set": list(candidate.members),
        "reason": reason.value,
    }


def beam_event(step: int, beam: "list[NodeEvaluation]") -> dict:
    return {
        "type": "beam",
        "step": step,
        "sets": [list(ev.set.members) for ev in beam],
    }


def best_event(step: int, ev: "NodeEvaluation") -> dict:
    return {
        "type": "best",
        "step": step,
        "set": list(ev.set.members),
        "cost": ev.cost,
    }


def end_event(step: int, result: "SelectionResult") -> dict:
    return {
        "type": "end",
        "step": step,
        "result": list(result.best.set.members) if result.best is not None else None,
        "explored_count": result.explored_count,
        "pruned_count": result.pruned_count,
        "duration_ms": 0,
    }


# --- serialization -----------------------------------------------------------

def serialize_event(event: dict) -> str:
    return json.dumps(event, ensure_ascii=True, separators=(",", ":"))


def validate_events(events: list[dict]) -> None:
    """Check the trace invariants; raises with the 1-based offending line."""
    if not events:
        raise IncompleteTrace("empty event stream")
    if events[0].get("type") != "start":
        raise InvariantViolation(1, "first event must be start")
    if events[0].get("version") != FORMAT_VERSION:
        raise UnsupportedVersion(
            f"trace version {events[0].get('version')!r}, expected {FORMAT_VERSION!r}"
        )
    if events[-1].get("type") != "end":
        raise IncompleteTrace("event stream does not finish with an end event")

    evaluated: set[tuple[int, ...]] = set()
    last_step = 0
    for line, event in enumerate(events, start=1):
        etype = event.get("type")
        if etype not in EVENT_TYPES:
            raise InvariantViolation(line, f"unknown event type {etype!r}")
        if etype == "start" and line != 1:
            raise InvariantViolation(line, "duplicate start event")
        if etype == "end" and line != len(events):
            raise InvariantViolation(line, "end event before the last line")
        step = event.get("step")
        if not isinstance(step, int) or step < 0:
            raise InvariantViolation(line, f"bad step value {step!r}")
        if step < last_step:
            raise InvariantViolation(line, f"step {step} decreases below {last_step}")
        last_step = step

        if etype == "evaluate":
            evaluated.add(tuple(event["set"]))
        elif etype == "best":
            if tuple(event["set"]) not in evaluated:
                raise InvariantViolation(line, f"best references unevaluated set {event['set']}")
        elif etype == "beam":
            for members in event["sets"]:
                if tuple(members) not in evaluated:
                    raise InvariantViolation(line, f"beam references unevaluated set {members}")
        elif etype == "end":
            result = event.get("result")
            if result is not None and tuple(result) not in evaluated:
                raise InvariantViolation(line, f"end references unevaluated set {result}")


def write_trace(events: Iterable[dict], path: str | Path) -> Path:
    """Validate and write one event per line; refuses incomplete streams."""
    events = list(events)
    validate_events(events)
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for event in events:
            fh.write(serialize_event(event))
            fh.write("\n")
    return path


def read_trace(path: str | Path) -> list[dict]:
    """Parse and validate a trace file; reports the first offending line."""
    events = []
    with Path(path).open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped:
                raise MalformedLine(line_no, "blank line")
            try:
                event = json.loads(stripped)
            except json.JSONDecodeError as exc:
                raise MalformedLine(line_no, f"invalid JSON: {exc.msg}") from None
            if not isinstance(event, dict):
                raise MalformedLine(line_no, "event is not an object")
            events.append(event)
    if not events:
        raise IncompleteTrace(f"{path}: empty trace file")
    validate_events(events)
    return events


def tail_events(path: str | Path) -> tuple[list[dict], bool]:
    """Best-effort read of a possibly live trace: skips a trailing partial
    line and reports whether the end event has been written yet."""
    events = []
    with Path(path).open(encoding="utf-8") as fh:
        content = fh.read()
    for line in content.split("\n"):
        if not line:
            continue
        try:
            event = json.loads(line)
        except json.JSONDecodeError:
            break
        if isinstance(event, dict):
            events.append(event)
    complete = bool(events) and events[-1].get("type") == "end"
    return events, complete


class TraceWriter:
    """Single-writer incremental sink: one line per event, flushed as emitted,
    so live readers can tail the file."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._fh = self.path.open("w", encoding="utf-8", newline="\n")

    def __call__(self, event: dict) -> None:
        self._fh.write(serialize_event(event))
        self._fh.write("\n")
        self._fh.flush()

    def close(self) -> None:
        self._fh.close()

    def __enter__(self) -> "TraceWriter":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def collecting_sink() -> tuple[list[dict], "Callable[[dict], None]"]:
    """A sink that appends to a list; returns (buffer, sink)."""
    buffer: list[dict] = []
    return buffer, buffer.append


# --- reconstruction ----------------------------------------------------------

def summarize(events: list[dict]) -> "SelectionResult":
    """Rebuild the SelectionResult of the traced run purely from its events."""
    from .explorer import SelectionResult
    from .measures import AttributeSet, NodeEvaluation

    validate_events(events)
    evaluations: dict[tuple[int, ...], NodeEvaluation] = {}
    explored = 0
    pruned = 0
    for event in events:
        etype = event["type"]
        if etype == "evaluate":
            explored += 1
            eff = event["efficiency"]
            evaluations[tuple(event["set"])] = NodeEvaluation(
                set=AttributeSet(tuple(event["set"])),
                cost=event["cost"],
                sensitivity=event["sensitivity"],
                efficiency=float("inf") if eff == "inf" else eff,
                satisfying=event["satisfying"],
            )
        elif etype == "prune":
            pruned += 1

    end = events[-1]
    result = end["result"]
    best = evaluations[tuple(result)] if result is not None else None
    frontier = sorted(
        (ev for ev in evaluations.values() if ev.satisfying),
        key=NodeEvaluation.order_key,
    )
    return SelectionResult(
        best=best,
        frontier=frontier,
        explored_count=explored,
        pruned_count=pruned,
        steps=end["step"],
    )
