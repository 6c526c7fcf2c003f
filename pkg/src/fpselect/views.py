"""Dict shaping shared by the CLI --json output and the HTTP service, plus the
three-method comparison used by both."""

from __future__ import annotations

import dataclasses

from .dataset import Dataset, DatasetStats
from .errors import FPSelectError
from .explorer import ExplorationConfig, SelectionResult, run_method
from .measures import (
    AttributeSet,
    AttributeSetProperties,
    NodeEvaluation,
    SensitivityParams,
    attribute_set_properties,
    sensitivity_top_k,
)

CLI_METHOD_NAMES = {"fpselect": "fpselect", "entropy": "entropy", "cond-entropy": "conditional_entropy"}


def node_view(ev: NodeEvaluation, names: list[str]) -> dict:
    return {
        "set": [names[i] for i in ev.set.members],
        "indices": list(ev.set.members),
        "cost": ev.cost,
        "sensitivity": ev.sensitivity,
        "efficiency": "inf" if ev.efficiency == float("inf") else ev.efficiency,
        "satisfying": ev.satisfying,
    }


def result_view(result: SelectionResult, names: list[str]) -> dict:
    return {
        "best": node_view(result.best, names) if result.best is not None else None,
        "frontier": [node_view(ev, names) for ev in result.frontier],
        "explored_count": result.explored_count,
        "pruned_count": result.pruned_count,
        "steps": result.steps,
    }


def properties_view(props: AttributeSetProperties, names: list[str]) -> dict:
    return {
        "evaluation": node_view(props.evaluation, names),
        "entropy_bits": props.entropy_bits,
        "unicity": props.unicity,
        "stability": props.stability,
        "sample": [{"values": list(values), "count": count} for values, count in props.sample],
    }


def stats_view(st: DatasetStats) -> dict:
    return dataclasses.asdict(st)


def compare_methods(dataset: Dataset, config: ExplorationConfig) -> list[dict]:
    """Run all three methods under one configuration; one row per method.

    A method failing never aborts the others: unreachable thresholds and
    errors are reported in the row's status.
    """
    names = dataset.attribute_names()
    rows = []
    for method in ("fpselect", "entropy", "conditional_entropy"):
        method_config = dataclasses.replace(config, method=method)
        row: dict = {"method": method}
        try:
            result = run_method(dataset, method_config)
        except FPSelectError as exc:
            row.update(status="error", error=str(exc))
            rows.append(row)
            continue
        if result.best is None:
            full = AttributeSet.full(dataset.n_attributes)
            row.update(
                status="unreachable",
                full_set_sensitivity=sensitivity_top_k(
                    dataset, full, SensitivityParams(config.submission_budget)
                ),
                explored_count=result.explored_count,
            )
            rows.append(row)
            continue
        props = attribute_set_properties(dataset, result.best.set, method_config)
        row.update(
            status="ok",
            set=[names[i] for i in result.best.set.members],
            indices=list(result.best.set.members),
            cost=result.best.cost,
            sensitivity=result.best.sensitivity,
            entropy_bits=props.entropy_bits,
            unicity=props.unicity,
            stability=props.stability,
            explored_count=result.explored_count,
        )
        rows.append(row)
    return rows
