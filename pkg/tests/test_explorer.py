from __future__ import annotations

import random
from collections import Counter

import pytest

from fpselect.dataset import latest_fingerprints
from fpselect.errors import TooManyAttributes
from fpselect.explorer import (
    ExplorationConfig,
    ExplorerState,
    PruneReason,
    brute_force_frontier,
    expand,
    fpselect,
    should_prune,
)
from fpselect.measures import AttributeSet, CostWeights, NodeEvaluation

from conftest import COOKIE, LANGUAGE, SCREEN, TIMEZONE, random_dataset

TABLE1_CONFIG = ExplorationConfig(
    threshold_alpha=0.2,
    beam_width=1,
    submission_budget=1,
    weights=CostWeights(w_size=1, w_instability=0, w_time=0, epsilon=0.01),
)


def independent_sensitivity(dataset, members: tuple[int, ...], budget: int) -> float:
    """Recompute top-k sensitivity straight from the population snapshot."""
    counts = Counter(
        tuple(values[i] for i in members) for values in latest_fingerprints(dataset).values()
    )
    return sum(sorted(counts.values(), reverse=True)[:budget]) / dataset.n_browsers


# --- expand -------------------------------------------------------------------

def test_expand_empty():
    assert expand(AttributeSet(), 3) == [AttributeSet.of(0), AttributeSet.of(1), AttributeSet.of(2)]


def test_expand_one_missing():
    assert expand(AttributeSet.of(0, 2), 3) == [AttributeSet.of(0, 1, 2)]


def test_expand_top_of_lattice():
    assert expand(AttributeSet.of(0, 1, 2), 3) == []


# --- pruning ------------------------------------------------------------------

def make_state() -> ExplorerState:
    return ExplorerState(unit_costs=[1.0, 2.0, 0.5, 1.5])


def test_prune_duplicate():
    state = make_state()
    state.seen.add(AttributeSet.of(1).bits)
    assert should_prune(AttributeSet.of(1), state) is PruneReason.DUPLICATE


def test_prune_superset_of_satisfying():
    state = make_state()
    state.satisfying_bits.append(AttributeSet.of(1, 3).bits)
    assert should_prune(AttributeSet.of(1, 2, 3), state) is PruneReason.SUPERSET_OF_SATISFYING
    assert should_prune(AttributeSet.of(1, 2), state) is None


def test_prune_cost_bound():
    state = make_state()
    state.best = NodeEvaluation(
        set=AttributeSet.of(2), cost=2.0, sensitivity=0.1, efficiency=1.0, satisfying=True
    )
    # lower bound of {0, 1} is 3.0 >= best cost 2.0
    assert should_prune(AttributeSet.of(0, 1), state) is PruneReason.COST_BOUND
    assert should_prune(AttributeSet.of(0), state) is None


def test_prune_check_order_duplicate_first():
    state = make_state()
    sat = AttributeSet.of(1)
    state.seen.add(sat.bits)
    state.satisfying_bits.append(sat.bits)
    assert should_prune(AttributeSet.of(1), state) is PruneReason.DUPLICATE


# --- beam search on the toy dataset ---------------------------------------------

def test_fpselect_table1(table1):
    result = fpselect(table1, TABLE1_CONFIG)
    assert result.best is not None
    assert result.best.set == AttributeSet.of(LANGUAGE, SCREEN)
    assert result.best.sensitivity == pytest.approx(1 / 6)
    assert result.best.cost == pytest.approx(6.02)


def test_fpselect_trivial_threshold(table1):
    result = fpselect(table1, ExplorationConfig(threshold_alpha=1.0))
    assert result.best is not None
    assert result.best.set == AttributeSet()
    assert result.best.cost == 0.0
    assert result.steps == 0


def test_fpselect_unreachable(table1):
    events = []
    result = fpselect(
        table1,
        ExplorationConfig(threshold_alpha=0.05, submission_budget=1),
        events.append,
    )
    assert result.best is None
    assert result.frontier == []
    # the full set was explicitly evaluated before giving up
    full = list(range(4))
    assert any(e["type"] == "evaluate" and e["set"] == full for e in events)
    assert events[-1]["result"] is None


def test_fpselect_soundness_recheck(table1):
    result = fpselect(table1, TABLE1_CONFIG)
    sens = independent_sensitivity(table1, result.best.set.members, 1)
    assert sens <= TABLE1_CONFIG.threshold_alpha


# --- brute-force oracle -----------------------------------------------------------

def test_oracle_table1(table1):
    result = brute_force_frontier(table1, TABLE1_CONFIG)
    assert result.best.set == AttributeSet.of(LANGUAGE, SCREEN)
    assert result.explored_count == 16
    # minimal satisfying sets only: no frontier element contains another
    for a in result.frontier:
        for b in result.frontier:
            if a is not b:
                assert not a.set.issubset(b.set)


def test_oracle_trivial(table1):
    result = brute_force_frontier(table1, ExplorationConfig(threshold_alpha=1.0))
    assert result.best.set == AttributeSet()
    assert result.frontier == [result.best]


def test_oracle_guard():
    ds = random_dataset(random.Random(0), max_attributes=6)
    config = ExplorationConfig(threshold_alpha=0.5)
    big = pytest.importorskip("fpselect.dataset")
    attrs = tuple(
        big.Attribute(i, f"a{i}") for i in range(21)
    )
    records = (big.FingerprintRecord("b", 1, tuple("v" for _ in range(21))),)
    with pytest.raises(TooManyAttributes):
        brute_force_frontier(big.Dataset(attrs, records), config)
    del ds


# --- randomized cross-checks ------------------------------------------------------

def test_fpselect_never_beats_oracle_and_full_beam_matches():
    rng = random.Random(7)
    for _ in range(25):
        ds = random_dataset(rng, max_attributes=5, max_browsers=24)
        config = ExplorationConfig(
            threshold_alpha=rng.choice([0.1, 0.2, 0.4]),
            beam_width=ds.n_attributes,
            submission_budget=rng.choice([1, 2]),
        )
        oracle = brute_force_frontier(ds, config)
        mine = fpselect(ds, config)
        if oracle.best is None:
            assert mine.best is None
        else:
            assert mine.best is not None
            assert mine.best.cost == pytest.approx(oracle.best.cost)


def test_evaluation_bound_and_termination():
    rng = random.Random(11)
    for _ in range(30):
        ds = random_dataset(rng, max_attributes=6, max_browsers=32)
        n = ds.n_attributes
        width = rng.choice([1, 2, n])
        config = ExplorationConfig(
            threshold_alpha=rng.choice([0.1, 0.3, 0.6]),
            beam_width=width,
            submission_budget=rng.choice([1, 2]),
        )
        result = fpselect(ds, config)
        assert result.explored_count <= width * n * (n + 1) // 2 + 1
        assert result.steps <= n


def test_prune_safety():
    rng = random.Random(23)
    for _ in range(20):
        ds = random_dataset(rng, max_attributes=5, max_browsers=24)
        config = ExplorationConfig(
            threshold_alpha=rng.choice([0.2, 0.4]),
            beam_width=rng.choice([1, 2]),
        )
        pruned = fpselect(ds, config)
        free = fpselect(ds, config, pruning_enabled=False)
        if free.best is None:
            assert pruned.best is None
        else:
            assert pruned.best is not None
            assert pruned.best.cost <= free.best.cost + 1e-12


def test_determinism_identical_event_sequences(table1):
    first: list[dict] = []
    second: list[dict] = []
    fpselect(table1, TABLE1_CONFIG, first.append)
    fpselect(table1, TABLE1_CONFIG, second.append)
    assert first == second


def test_best_is_minimum_of_frontier(table1):
    result = fpselect(table1, TABLE1_CONFIG)
    assert result.best == result.frontier[0]
    assert all(ev.satisfying for ev in result.frontier)
