from __future__ import annotations

import dataclasses
import random

import pytest

from fpselect.baselines import conditional_entropy_select, entropy_select
from fpselect.explorer import ExplorationConfig
from fpselect.measures import AttributeSet, CostWeights, SensitivityParams, sensitivity_top_k

from conftest import LANGUAGE, SCREEN, TIMEZONE, random_dataset

ENTROPY_CONFIG = ExplorationConfig(
    threshold_alpha=0.2,
    submission_budget=1,
    weights=CostWeights(w_size=1, w_instability=0, w_time=0, epsilon=0.01),
    method="entropy",
)
COND_CONFIG = dataclasses.replace(ENTROPY_CONFIG, method="conditional_entropy")


def test_entropy_select_table1(table1):
    # marginal entropies rank Language > Timezone > Screen > CookieEnabled
    result = entropy_select(table1, ENTROPY_CONFIG)
    assert result.best is not None
    assert result.best.set == AttributeSet.of(LANGUAGE, TIMEZONE, SCREEN)
    assert result.best.sensitivity == pytest.approx(1 / 6)


def test_entropy_select_trivial(table1):
    result = entropy_select(table1, dataclasses.replace(ENTROPY_CONFIG, threshold_alpha=1.0))
    assert result.best.set == AttributeSet()
    assert result.explored_count == 1


def test_entropy_select_unreachable(table1):
    result = entropy_select(table1, dataclasses.replace(ENTROPY_CONFIG, threshold_alpha=0.05))
    assert result.best is None
    # exhausted every attribute before giving up
    assert result.explored_count == 5


def test_entropy_select_rejects_wrong_method(table1):
    with pytest.raises(ValueError):
        entropy_select(table1, dataclasses.replace(ENTROPY_CONFIG, method="fpselect"))


def test_conditional_entropy_select_table1(table1):
    result = conditional_entropy_select(table1, COND_CONFIG)
    assert result.best is not None
    assert result.best.set == AttributeSet.of(LANGUAGE, SCREEN)


def test_conditional_entropy_select_loose(table1):
    result = conditional_entropy_select(
        table1, dataclasses.replace(COND_CONFIG, threshold_alpha=0.4)
    )
    assert result.best.set == AttributeSet.of(LANGUAGE)
    assert result.best.sensitivity == pytest.approx(1 / 3)


def test_conditional_entropy_select_trivial(table1):
    result = conditional_entropy_select(
        table1, dataclasses.replace(COND_CONFIG, threshold_alpha=1.0)
    )
    assert result.best.set == AttributeSet()


def test_correlation_effect_on_table1(table1):
    """The entropy pick is a strict, costlier superset of the conditional pick."""
    plain = entropy_select(table1, ENTROPY_CONFIG).best
    cond = conditional_entropy_select(table1, COND_CONFIG).best
    assert cond.set.issubset(plain.set)
    assert cond.set != plain.set
    assert cond.cost < plain.cost


def test_zero_gain_never_chosen_over_positive(table1):
    events = []
    conditional_entropy_select(table1, COND_CONFIG, events.append)
    picks = [e["set"] for e in events if e["type"] == "evaluate"]
    # second pick adds Screen (gain 0.667), never Timezone or CookieEnabled (gain 0)
    assert picks[2] == sorted([LANGUAGE, SCREEN])


def test_baselines_satisfy_when_full_set_does():
    rng = random.Random(5)
    for _ in range(25):
        ds = random_dataset(rng, max_attributes=5, max_browsers=20)
        alpha = rng.choice([0.2, 0.5, 0.9])
        full_ok = (
            sensitivity_top_k(ds, AttributeSet.full(ds.n_attributes), SensitivityParams(1))
            <= alpha
        )
        for method, run in (
            ("entropy", entropy_select),
            ("conditional_entropy", conditional_entropy_select),
        ):
            config = ExplorationConfig(threshold_alpha=alpha, submission_budget=1, method=method)
            result = run(ds, config)
            if full_ok:
                assert result.best is not None
                assert result.best.satisfying
            else:
                assert result.best is None


def test_method_tagged_in_start_event(table1):
    events = []
    entropy_select(table1, ENTROPY_CONFIG, events.append)
    assert events[0]["type"] == "start"
    assert events[0]["method"] == "entropy"

    events.clear()
    conditional_entropy_select(table1, COND_CONFIG, events.append)
    assert events[0]["method"] == "conditional_entropy"
