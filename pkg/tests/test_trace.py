from __future__ import annotations

import json
import random

import pytest

from fpselect.errors import (
    IncompleteTrace,
    InvariantViolation,
    MalformedLine,
    UnsupportedVersion,
)
from fpselect.explorer import ExplorationConfig, fpselect
from fpselect.measures import AttributeSet, CostWeights
from fpselect.trace import read_trace, summarize, tail_events, write_trace

from conftest import LANGUAGE, SCREEN, random_dataset

CONFIG = ExplorationConfig(
    threshold_alpha=0.2,
    beam_width=1,
    submission_budget=1,
    weights=CostWeights(w_size=1, w_instability=0, w_time=0, epsilon=0.01),
)


def run_events(dataset, config=CONFIG) -> list[dict]:
    events = []
    fpselect(dataset, config, events.append)
    return events


def test_framing(table1, tmp_path):
    events = run_events(table1)
    path = write_trace(events, tmp_path / "t.trace")
    lines = path.read_text().splitlines()
    assert json.loads(lines[0])["type"] == "start"
    assert json.loads(lines[-1])["type"] == "end"
    assert sum(1 for l in lines if json.loads(l)["type"] == "start") == 1
    assert sum(1 for l in lines if json.loads(l)["type"] == "end") == 1


def test_byte_identical_runs(table1, tmp_path):
    a = write_trace(run_events(table1), tmp_path / "a.trace")
    b = write_trace(run_events(table1), tmp_path / "b.trace")
    assert a.read_bytes() == b.read_bytes()


def test_roundtrip_identity(table1, tmp_path):
    events = run_events(table1)
    path = write_trace(events, tmp_path / "t.trace")
    assert read_trace(path) == events


def test_missing_end_refused(table1, tmp_path):
    events = run_events(table1)[:-1]
    with pytest.raises(IncompleteTrace):
        write_trace(events, tmp_path / "t.trace")


def test_beam_referencing_unevaluated(table1, tmp_path):
    events = run_events(table1)
    bad = [e if e["type"] != "beam" else {**e, "sets": [[0, 3]]} for e in events]
    path = tmp_path / "bad.trace"
    path.write_text("\n".join(json.dumps(e) for e in bad) + "\n")
    with pytest.raises(InvariantViolation):
        read_trace(path)


def test_truncated_last_line(table1, tmp_path):
    events = run_events(table1)
    path = write_trace(events, tmp_path / "t.trace")
    content = path.read_bytes()[:-25]
    path.write_bytes(content)
    with pytest.raises(MalformedLine) as exc:
        read_trace(path)
    assert exc.value.line == len(events)


def test_unsupported_version(table1, tmp_path):
    events = run_events(table1)
    events[0] = {**events[0], "version": "99"}
    path = tmp_path / "v.trace"
    path.write_text("\n".join(json.dumps(e) for e in events) + "\n")
    with pytest.raises(UnsupportedVersion):
        read_trace(path)


def test_decreasing_steps_rejected(table1, tmp_path):
    events = run_events(table1)
    idx = next(i for i, e in enumerate(events) if e["step"] > 0)
    events.insert(idx + 1, {"type": "prune", "step": 0, "set": [0], "reason": "duplicate"})
    path = tmp_path / "steps.trace"
    path.write_text("\n".join(json.dumps(e) for e in events) + "\n")
    with pytest.raises(InvariantViolation):
        read_trace(path)


def test_summarize_matches_live(table1, tmp_path):
    events = run_events(table1)
    result = fpselect(table1, CONFIG)
    rebuilt = summarize(read_trace(write_trace(events, tmp_path / "t.trace")))
    assert rebuilt == result
    assert rebuilt.best.set == AttributeSet.of(LANGUAGE, SCREEN)


def test_summarize_trivial(table1):
    import dataclasses

    config = dataclasses.replace(CONFIG, threshold_alpha=1.0)
    events = run_events(table1, config)
    rebuilt = summarize(events)
    assert rebuilt.best.set == AttributeSet()


def test_summarize_unreachable(table1):
    import dataclasses

    config = dataclasses.replace(CONFIG, threshold_alpha=0.05)
    events = run_events(table1, config)
    assert events[-1]["result"] is None
    rebuilt = summarize(events)
    assert rebuilt.best is None
    assert rebuilt == fpselect(table1, config)


def test_summarize_random_runs():
    rng = random.Random(99)
    for _ in range(15):
        ds = random_dataset(rng, max_attributes=5, max_browsers=24)
        config = ExplorationConfig(
            threshold_alpha=rng.choice([0.2, 0.5]),
            beam_width=rng.choice([1, 2]),
            submission_budget=rng.choice([1, 2]),
        )
        events = []
        live = fpselect(ds, config, events.append)
        assert summarize(events) == live


def test_tail_events_tolerates_partial(table1, tmp_path):
    events = run_events(table1)
    path = write_trace(events, tmp_path / "t.trace")
    full, complete = tail_events(path)
    assert complete and full == events

    # live file: no end yet, last line cut mid-write
    partial = "\n".join(json.dumps(e) for e in events[:-1]) + "\n" + '{"type":"ev'
    path.write_text(partial)
    got, complete = tail_events(path)
    assert not complete
    assert got == events[:-1]


def test_digest_pins_dataset(table1):
    events = run_events(table1)
    assert events[0]["dataset_digest"] == table1.digest
    other = random_dataset(random.Random(1))
    assert events[0]["dataset_digest"] != other.digest
