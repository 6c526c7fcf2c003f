"""Lattice exploration: beam search from the empty set toward the
satisfiability frontier, plus an exhaustive oracle for verification.

The search keeps a beam of at most `beam_width` unsatisfying nodes. Each step
expands every beam node into its one-attribute supersets, prunes what it can
prove useless, and evaluates the rest; satisfying nodes land in the frontier,
unsatisfying ones in a candidate pool. The next beam is drawn from the pool by
descending efficiency. Pool candidates survive across steps so a dead-ended
path frees its slot to a sibling, but only candidates strictly larger than the
previous beam's smallest node are eligible: that keeps the beam's minimum size
strictly increasing, which bounds runs to n steps and evaluations to
beam_width * n(n+1)/2 + 1.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Optional

from . import trace
from .dataset import Dataset
from .errors import EmptyAttributePool, TooManyAttributes
from .measures import (
    AttributeSet,
    CostWeights,
    NodeEvaluation,
    unit_costs,
    evaluate_node,
)

METHODS = ("fpselect", "entropy", "conditional_entropy")

TraceSink = Optional[Callable[[dict], None]]


@dataclass(frozen=True)
class ExplorationConfig:
    threshold_alpha: float
    beam_width: int = 1
    submission_budget: int = 1
    weights: CostWeights = field(default_factory=CostWeights)
    method: str = "fpselect"

    def __post_init__(self):
        if not 0 < self.threshold_alpha <= 1:
            raise ValueError(f"threshold_alpha must be in (0, 1], got {self.threshold_alpha}")
        if self.beam_width < 1:
            raise ValueError("beam_width must be >= 1")
        if self.submission_budget < 1:
            raise ValueError("submission_budget must be >= 1")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")

    def to_json_dict(self) -> dict:
        return {
            "method": self.method,
            "threshold": self.threshold_alpha,
            "budget": self.submission_budget,
            "paths": self.beam_width,
            "weights": {
                "size": self.weights.w_size,
                "instability": self.weights.w_instability,
                "time": self.weights.w_time,
                "epsilon": self.weights.epsilon,
            },
        }


class PruneReason(enum.Enum):
    DUPLICATE = "duplicate"
    SUPERSET_OF_SATISFYING = "superset_of_satisfying"
    COST_BOUND = "cost_bound"


@dataclass
class SelectionResult:
    best: NodeEvaluation | None
    frontier: list[NodeEvaluation]
    explored_count: int
    pruned_count: int
    steps: int


@dataclass
class ExplorerState:
    """Mutable bookkeeping consulted by the pruning rules."""

    unit_costs: list[float]
    seen: set[int] = field(default_factory=set)  # bits of evaluated or pruned sets
    satisfying_bits: list[int] = field(default_factory=list)
    best: NodeEvaluation | None = None


def expand(node: AttributeSet, n: int) -> list[AttributeSet]:
    """All one-attribute supersets of `node`, in canonical order."""
    return [node.add(i) for i in range(n) if i not in node]


def should_prune(candidate: AttributeSet, state: ExplorerState) -> PruneReason | None:
    """Decide, without evaluating, whether a candidate cannot improve the result.

    Checked in order: already seen; superset of a known satisfying set (its
    cost is strictly higher, so it cannot beat that set); per-attribute cost
    lower bound at or above the current best cost.
    """
    bits = candidate.bits
    if bits in state.seen:
        return PruneReason.DUPLICATE
    for sat in state.satisfying_bits:
        if sat & bits == sat:
            return PruneReason.SUPERSET_OF_SATISFYING
    if state.best is not None:
        bound = 0.0
        for i in candidate.members:
            bound += state.unit_costs[i]
        if bound >= state.best.cost:
            return PruneReason.COST_BOUND
    return None


def _beam_rank_key(ev: NodeEvaluation):
    # Highest efficiency first; ties: lower sensitivity, lower cost, canonical set.
    return (-ev.efficiency, ev.sensitivity, ev.cost, ev.set)


def fpselect(
    dataset: Dataset,
    config: ExplorationConfig,
    sink: TraceSink = None,
    *,
    pruning_enabled: bool = True,
) -> SelectionResult:
    """Run the beam search; returns best=None when even the full set fails.

    Emits one trace event per evaluation, prune, beam update and best update,
    framed by start/end events. `pruning_enabled=False` switches off the
    superset and cost-bound rules (duplicate elimination always stays on) for
    prune-safety checks.
    """
    n = dataset.n_attributes
    if n == 0:
        raise EmptyAttributePool("dataset has no candidate attributes")
    if config.method != "fpselect":
        raise ValueError(f"config.method is {config.method!r}, expected 'fpselect'")

    emit = sink or (lambda event: None)
    emit(trace.start_event(config, dataset))

    state = ExplorerState(unit_costs=unit_costs(dataset, config.weights))
    frontier: list[NodeEvaluation] = []
    explored = 0
    pruned = 0
    step = 0

    def evaluate(attr_set: AttributeSet) -> NodeEvaluation:
        nonlocal explored
        ev = evaluate_node(dataset, attr_set, config)
        state.seen.add(attr_set.bits)
        explored += 1
        emit(trace.evaluate_event(step, ev))
        if ev.satisfying:
            frontier.append(ev)
            state.satisfying_bits.append(attr_set.bits)
            if state.best is None or ev.order_key() < state.best.order_key():
                state.best = ev
                emit(trace.best_event(step, ev))
        return ev

    def finish() -> SelectionResult:
        frontier.sort(key=NodeEvaluation.order_key)
        result = SelectionResult(
            best=state.best,
            frontier=frontier,
            explored_count=explored,
            pruned_count=pruned,
            steps=step,
        )
        emit(trace.end_event(step, result))
        return result

    empty_ev = evaluate(AttributeSet())
    if empty_ev.satisfying:
        return finish()

    beam = [empty_ev]
    emit(trace.beam_event(step, beam))
    pool: dict[int, NodeEvaluation] = {}

    while beam:
        step += 1
        prev_min_size = min(len(ev.set) for ev in beam)
        for node in beam:
            for candidate in expand(node.set, n):
                if pruning_enabled:
                    reason = should_prune(candidate, state)
                else:
                    reason = (
                        PruneReason.DUPLICATE if candidate.bits in state.seen else None
                    )
                if reason is not None:
                    state.seen.add(candidate.bits)
                    pruned += 1
                    emit(trace.prune_event(step, candidate, reason))
                    continue
                ev = evaluate(candidate)
                if not ev.satisfying:
                    pool[candidate.bits] = ev

        eligible = [
            ev
            for ev in pool.values()
            if prev_min_size < len(ev.set) < n  # the full set has no supersets
            and (state.best is None or ev.cost < state.best.cost)
        ]
        eligible.sort(key=_beam_rank_key)
        beam = eligible[: config.beam_width]
        for ev in beam:
            del pool[ev.set.bits]
        if beam:
            emit(trace.beam_event(step, beam))

    if state.best is None:
        # Explicit full-set check before declaring the threshold unreachable.
        full = AttributeSet.full(n)
        if full.bits not in state.seen:
            evaluate(full)
    return finish()


def brute_force_frontier(dataset: Dataset, config: ExplorationConfig) -> SelectionResult:
    """Exhaustive oracle: evaluate every subset, keep the minimal satisfying ones.

    Exponential in the attribute count, hence the hard guard; meant for
    verification on small datasets, not production use.
    """
    n = dataset.n_attributes
    if n > 20:
        raise TooManyAttributes(f"{n} attributes would need {2 ** n} evaluations")

    satisfying: list[NodeEvaluation] = []
    explored = 0
    for bits in range(2 ** n):
        members = tuple(i for i in range(n) if bits >> i & 1)
        ev = evaluate_node(dataset, AttributeSet(members), config)
        explored += 1
        if ev.satisfying:
            satisfying.append(ev)

    sat_bits = [ev.set.bits for ev in satisfying]
    frontier = [
        ev
        for ev in satisfying
        if not any(b != ev.set.bits and b & ev.set.bits == b for b in sat_bits)
    ]
    frontier.sort(key=NodeEvaluation.order_key)
    best = min(satisfying, key=NodeEvaluation.order_key) if satisfying else None
    return SelectionResult(
        best=best,
        frontier=frontier,
        explored_count=explored,
        pruned_count=0,
        steps=0,
    )


def run_method(dataset: Dataset, config: ExplorationConfig, sink: TraceSink = None) -> SelectionResult:
    """Dispatch on config.method."""
    if config.method == "fpselect":
        return fpselect(dataset, config, sink)
    from . import baselines

    if config.method == "entropy":
        return baselines.entropy_select(dataset, config, sink)
    return baselines.conditional_entropy_select(dataset, config, sink)
