"""Batch command-line interface.

Exit codes: 0 success, 1 input or I/O error, 2 threshold unreachable.
With --json the only stdout output is one machine-readable JSON document.
"""

from __future__ import annotations

import argparse
import difflib
import json
import os
import socket
import sys
import time
from pathlib import Path

from . import data as bundled_data
from . import report, trace, views
from .dataset import Dataset, import_external, load_csv, load_mapping, stats
from .errors import FPSelectError, ThresholdUnreachable, UnknownAttribute
from .explorer import ExplorationConfig, run_method
from .measures import (
    AttributeSet,
    CostWeights,
    SensitivityParams,
    attribute_set_properties,
    sensitivity_top_k,
)

ENV_DATASETS_DIR = "FPSELECT_DATASETS_DIR"

METHOD_FLAGS = {"fpselect": "fpselect", "entropy": "entropy", "cond-entropy": "conditional_entropy"}


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; 2 is reserved for ThresholdUnreachable
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _parse_weights(spec: str) -> CostWeights:
    values = {"size": 1.0, "instability": 1.0, "time": 0.0, "epsilon": 0.01}
    if spec:
        for part in spec.split(","):
            key, _, raw = part.partition("=")
            key = key.strip()
            if key not in values:
                raise ValueError(f"unknown weight {key!r} (use size,instability,time,epsilon)")
            values[key] = float(raw)
    return CostWeights(
        w_size=values["size"],
        w_instability=values["instability"],
        w_time=values["time"],
        epsilon=values["epsilon"],
    )


def _resolve_dataset(value: str) -> Path:
    path = Path(value)
    if path.exists():
        return path
    env_dir = os.environ.get(ENV_DATASETS_DIR)
    if env_dir:
        for candidate in (Path(env_dir) / value, Path(env_dir) / f"{value}.csv"):
            if candidate.exists():
                return candidate
    raise FileNotFoundError(f"dataset {value!r} not found")


def _load_dataset(args) -> Dataset:
    path = _resolve_dataset(args.dataset)
    metadata = getattr(args, "metadata", None)
    if metadata is None:
        sidecar = path.with_name(path.stem + ".times.json")
        if sidecar.exists():
            metadata = sidecar
    return load_csv(path, metadata)


def _config_from_args(args, method: str | None = None) -> ExplorationConfig:
    return ExplorationConfig(
        threshold_alpha=args.threshold,
        beam_width=getattr(args, "paths", 1),
        submission_budget=args.budget,
        weights=_parse_weights(args.weights),
        method=method or METHOD_FLAGS[args.method],
    )


def _resolve_attributes(dataset: Dataset, spec: str) -> AttributeSet:
    names = dataset.attribute_names()
    indices = []
    for raw in spec.split(","):
        name = raw.strip()
        if not name:
            continue
        if name not in names:
            raise UnknownAttribute(name, difflib.get_close_matches(name, names, n=3))
        indices.append(names.index(name))
    return AttributeSet(tuple(indices))


def _emit(args, payload: dict, human_lines: list[str]) -> None:
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        for line in human_lines:
            print(line)


def _format_set(indices, names) -> str:
    return ", ".join(names[i] for i in indices) if indices else "(empty set)"


# --- commands ----------------------------------------------------------------

def cmd_select(args) -> int:
    dataset = _load_dataset(args)
    config = _config_from_args(args)
    events, sink = trace.collecting_sink()
    started = time.perf_counter()
    result = run_method(dataset, config, sink)
    elapsed_ms = (time.perf_counter() - started) * 1000
    if args.trace:
        trace.write_trace(events, args.trace)
    if args.figure:
        report.save_figure(report.lattice_figure(events), args.figure)

    names = dataset.attribute_names()
    if result.best is None:
        full_sens = sensitivity_top_k(
            dataset, AttributeSet.full(dataset.n_attributes), SensitivityParams(config.submission_budget)
        )
        _emit(
            args,
            {
                "status": "unreachable",
                "config": config.to_json_dict(),
                "full_set_sensitivity": full_sens,
                "explored_count": result.explored_count,
                "trace": str(args.trace) if args.trace else None,
            },
            [
                f"threshold {config.threshold_alpha} unreachable: "
                f"full-set sensitivity {full_sens:.4f}",
                f"explored: {result.explored_count} sets",
            ],
        )
        return 2

    _emit(
        args,
        {
            "status": "ok",
            "config": config.to_json_dict(),
            "result": views.result_view(result, names),
            "trace": str(args.trace) if args.trace else None,
            "elapsed_ms": round(elapsed_ms, 3),
        },
        [
            f"best: {_format_set(result.best.set.members, names)}",
            f"cost: {result.best.cost:.4f}",
            f"sensitivity: {result.best.sensitivity:.4f}",
            f"explored: {result.explored_count} sets "
            f"({result.pruned_count} pruned, {result.steps} steps, {elapsed_ms:.0f} ms)",
        ]
        + ([f"trace: {args.trace}"] if args.trace else [])
        + ([f"figure: {args.figure}"] if args.figure else []),
    )
    return 0


def cmd_evaluate(args) -> int:
    dataset = _load_dataset(args)
    config = _config_from_args(args, method="fpselect")
    attr_set = _resolve_attributes(dataset, args.attributes)
    props = attribute_set_properties(dataset, attr_set, config)
    names = dataset.attribute_names()
    view = views.properties_view(props, names)
    sample_lines = [
        f"  {count:>5}  {', '.join(v or repr('') for v in values)}"
        for values, count in props.sample
    ]
    _emit(
        args,
        view,
        [
            f"set: {_format_set(attr_set.members, names)}",
            f"cost: {props.evaluation.cost:.4f}",
            f"sensitivity: {props.evaluation.sensitivity:.4f} "
            f"(satisfying at threshold {config.threshold_alpha}: {props.evaluation.satisfying})",
            f"entropy: {props.entropy_bits:.4f} bits",
            f"unicity: {props.unicity:.4f}",
            f"stability: {props.stability:.4f}",
            "most common fingerprints (count, values):",
            *sample_lines,
        ],
    )
    return 0


def cmd_compare(args) -> int:
    dataset = _load_dataset(args)
    config = _config_from_args(args, method="fpselect")
    rows = views.compare_methods(dataset, config)
    names = dataset.attribute_names()

    if args.csv:
        import csv as csv_mod

        fields = [
            "method", "status", "set", "cost", "sensitivity",
            "entropy_bits", "unicity", "stability", "explored_count",
        ]
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            writer = csv_mod.DictWriter(fh, fieldnames=fields, extrasaction="ignore", lineterminator="\n")
            writer.writeheader()
            for row in rows:
                flat = dict(row)
                if "set" in flat:
                    flat["set"] = " ".join(flat["set"])
                writer.writerow(flat)
    if args.figure:
        report.save_figure(report.comparison_figure(rows), args.figure)

    human = []
    for row in rows:
        if row["status"] == "ok":
            human.append(
                f"{row['method']:>22}: {_format_set(row['indices'], names)} | "
                f"cost {row['cost']:.4f} | sens {row['sensitivity']:.4f} | "
                f"H {row['entropy_bits']:.3f} | unicity {row['unicity']:.3f} | "
                f"stability {row['stability']:.3f} | explored {row['explored_count']}"
            )
        elif row["status"] == "unreachable":
            human.append(
                f"{row['method']:>22}: threshold unreachable "
                f"(full-set sensitivity {row['full_set_sensitivity']:.4f})"
            )
        else:
            human.append(f"{row['method']:>22}: error: {row['error']}")
    _emit(args, {"rows": rows}, human)
    return 2 if all(r["status"] == "unreachable" for r in rows) else 0


def cmd_replay(args) -> int:
    events = trace.read_trace(args.trace)
    result = trace.summarize(events)
    names = events[0]["attributes"]
    if args.figure:
        report.save_figure(report.lattice_figure(events), args.figure)

    per_step: dict[int, dict[str, int]] = {}
    for event in events:
        if event["type"] in ("evaluate", "prune"):
            bucket = per_step.setdefault(event["step"], {"evaluated": 0, "pruned": 0})
            bucket["evaluated" if event["type"] == "evaluate" else "pruned"] += 1
    step_rows = [{"step": s, **counts} for s, counts in sorted(per_step.items())]

    payload = {
        "status": "ok" if result.best is not None else "unreachable",
        "method": events[0]["method"],
        "config": events[0]["config"],
        "dataset_digest": events[0]["dataset_digest"],
        "result": views.result_view(result, names),
        "per_step": step_rows,
    }
    human = [
        f"method: {events[0]['method']}",
        f"dataset digest: {events[0]['dataset_digest'][:16]}...",
        (
            f"best: {_format_set(result.best.set.members, names)} "
            f"(cost {result.best.cost:.4f}, sensitivity {result.best.sensitivity:.4f})"
            if result.best is not None
            else "best: none (threshold unreachable)"
        ),
        f"explored: {result.explored_count} sets ({result.pruned_count} pruned, {result.steps} steps)",
        "per step: "
        + "; ".join(f"step {r['step']}: {r['evaluated']} evaluated, {r['pruned']} pruned" for r in step_rows),
    ]
    _emit(args, payload, human)
    return 0 if result.best is not None else 2


def cmd_dataset_stats(args) -> int:
    dataset = _load_dataset(args)
    st = stats(dataset)
    _emit(
        args,
        views.stats_view(st),
        [
            f"attributes: {st.n_attributes}",
            f"browsers: {st.n_browsers}",
            f"records: {st.n_records}",
            f"distinct full fingerprints: {st.distinct_full_fingerprints}",
            f"unicity: {st.unicity_rate:.4f}",
        ],
    )
    return 0


BUNDLED_MAPPINGS = {"fpstalker": "fpstalker.mapping.json", "tillmann": "tillmann.mapping.json"}


def cmd_dataset_import(args) -> int:
    if args.mapping in BUNDLED_MAPPINGS:
        mapping_path = bundled_data.path(BUNDLED_MAPPINGS[args.mapping])
    else:
        mapping_path = Path(args.mapping)
        if not mapping_path.exists():
            raise FileNotFoundError(f"mapping config {args.mapping!r} not found")
    mapping = load_mapping(mapping_path)
    out = import_external(args.source, mapping, args.output)
    if not args.json:
        print(f"wrote canonical CSV: {out}")
    else:
        print(json.dumps({"output": str(out)}))
    return 0


def cmd_serve(args) -> int:
    datasets_dir = Path(args.datasets_dir or os.environ.get(ENV_DATASETS_DIR, "."))
    if not datasets_dir.is_dir():
        print(f"error: datasets directory {datasets_dir} does not exist", file=sys.stderr)
        return 1
    traces_dir = Path(args.traces_dir)
    traces_dir.mkdir(parents=True, exist_ok=True)

    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.bind((args.host, args.port))
    except OSError:
        print(f"error: port {args.port} already in use on {args.host}", file=sys.stderr)
        return 1
    finally:
        probe.close()

    import uvicorn

    from .service import create_app

    app = create_app(datasets_dir, traces_dir, ui_dir=args.ui_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


# --- parser ------------------------------------------------------------------

def _add_measure_flags(p, *, with_method=False, with_paths=False, with_trace=False):
    p.add_argument("--dataset", required=True, help="dataset CSV path or name in $" + ENV_DATASETS_DIR)
    p.add_argument("--metadata", default=None, help="sidecar JSON with per-attribute collection times")
    if with_method:
        p.add_argument("--method", choices=sorted(METHOD_FLAGS), default="fpselect")
    p.add_argument("--threshold", type=float, required=True, help="sensitivity threshold in (0, 1]")
    p.add_argument("--budget", type=int, default=1, help="attacker submission budget (default 1)")
    if with_paths:
        p.add_argument("--paths", type=int, default=1, help="beam width for fpselect (default 1)")
    p.add_argument(
        "--weights",
        default="",
        help="cost weights, e.g. size=1,instability=1,time=0,epsilon=0.01",
    )
    if with_trace:
        p.add_argument("--trace", default=None, help="write the execution trace to this file")
    p.add_argument("--json", action="store_true", help="machine-readable output only")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fpselect", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("select", help="run one selection method")
    _add_measure_flags(p, with_method=True, with_paths=True, with_trace=True)
    p.add_argument("--figure", default=None, help="render the explored lattice to this image file")
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("evaluate", help="measure one attribute set")
    _add_measure_flags(p)
    p.add_argument("--attributes", required=True, help="comma-separated attribute names")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("compare", help="run all three methods side by side")
    _add_measure_flags(p, with_paths=True)
    p.add_argument("--csv", default=None, help="write the comparison rows to this CSV file")
    p.add_argument("--figure", default=None, help="render the comparison chart to this image file")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("replay", help="reconstruct a run from its trace")
    p.add_argument("--trace", required=True)
    p.add_argument("--figure", default=None, help="render the explored lattice to this image file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("dataset", help="dataset utilities")
    ds_sub = p.add_subparsers(dest="dataset_command", required=True)
    q = ds_sub.add_parser("stats", help="print dataset statistics")
    q.add_argument("dataset")
    q.add_argument("--metadata", default=None)
    q.add_argument("--json", action="store_true")
    q.set_defaults(func=cmd_dataset_stats)
    q = ds_sub.add_parser("import", help="convert a foreign export to canonical CSV")
    q.add_argument("source")
    q.add_argument("output")
    q.add_argument(
        "--mapping",
        required=True,
        help="mapping config path, or bundled name: " + ", ".join(sorted(BUNDLED_MAPPINGS)),
    )
    q.add_argument("--json", action="store_true")
    q.set_defaults(func=cmd_dataset_import)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--datasets-dir", default=None, help="defaults to $" + ENV_DATASETS_DIR)
    p.add_argument("--traces-dir", default="traces")
    p.add_argument("--ui-dir", default=None, help="serve a built web UI from this directory")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1

    if getattr(args, "threshold", None) is not None and not 0 < args.threshold <= 1:
        print(f"error: --threshold must be in (0, 1], got {args.threshold}", file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except ThresholdUnreachable as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FPSelectError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
