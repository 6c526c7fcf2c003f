"""Greedy comparison methods: selection by entropy and by conditional entropy.

Both stop at the same sensitivity threshold as the lattice exploration so the
three methods are comparable on one yardstick. They emit the same trace event
schema, with the method tagged in the start event.
"""

from __future__ import annotations

from . import trace
from .dataset import Dataset
from .explorer import ExplorationConfig, SelectionResult, TraceSink
from .measures import AttributeSet, NodeEvaluation, conditional_entropy_gain, entropy_bits, evaluate_node


def _run_greedy(
    dataset: Dataset,
    config: ExplorationConfig,
    sink: TraceSink,
    method: str,
    pick_next,
) -> SelectionResult:
    """Shared driver: grow a prefix one attribute at a time until satisfying.

    `pick_next(selected, remaining)` returns the next attribute index, or None
    to give up early (only when no remaining pick can ever help).
    """
    if config.method != method:
        raise ValueError(f"config.method is {config.method!r}, expected {method!r}")
    emit = sink or (lambda event: None)
    emit(trace.start_event(config, dataset))

    step = 0
    explored = 0
    best: NodeEvaluation | None = None

    def evaluate(attr_set: AttributeSet) -> NodeEvaluation:
        nonlocal explored, best
        ev = evaluate_node(dataset, attr_set, config)
        explored += 1
        emit(trace.evaluate_event(step, ev))
        if ev.satisfying and best is None:
            best = ev
            emit(trace.best_event(step, ev))
        return ev

    selected = AttributeSet()
    ev = evaluate(selected)
    remaining = list(range(dataset.n_attributes))
    while not ev.satisfying and remaining:
        choice = pick_next(selected, remaining)
        if choice is None:
            break
        remaining.remove(choice)
        selected = selected.add(choice)
        step += 1
        ev = evaluate(selected)

    result = SelectionResult(
        best=best,
        frontier=[best] if best is not None else [],
        explored_count=explored,
        pruned_count=0,
        steps=step,
    )
    emit(trace.end_event(step, result))
    return result


def entropy_select(dataset: Dataset, config: ExplorationConfig, sink: TraceSink = None) -> SelectionResult:
    """Add attributes in descending single-attribute entropy order (ties by
    index) until the prefix satisfies the threshold or attributes run out."""
    ranking = sorted(
        range(dataset.n_attributes),
        key=lambda i: (-entropy_bits(dataset, AttributeSet.of(i)), i),
    )
    order = iter(ranking)
    return _run_greedy(
        dataset, config, sink, "entropy", lambda selected, remaining: next(order)
    )


def conditional_entropy_select(
    dataset: Dataset, config: ExplorationConfig, sink: TraceSink = None
) -> SelectionResult:
    """Re-rank every step by conditional entropy gain given the current prefix.

    When every remaining attribute has zero gain the partition can no longer
    refine (values are constant within each class), so the sensitivity floor
    is already reached and the run gives up instead of padding the prefix.
    """

    def pick_next(selected: AttributeSet, remaining: list[int]) -> int | None:
        best_gain, best_index = 0.0, None
        for i in remaining:
            gain = conditional_entropy_gain(dataset, selected, i)
            if gain > best_gain:
                best_gain, best_index = gain, i
        return best_index

    return _run_greedy(dataset, config, sink, "conditional_entropy", pick_next)
