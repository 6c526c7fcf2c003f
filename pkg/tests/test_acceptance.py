"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line
with its runtime (run with `pytest tests/test_acceptance.py -v -s`)."""

from __future__ import annotations

import dataclasses
import math
import random
import time
from contextlib import contextmanager

import pytest

from fpselect import data
from fpselect.baselines import entropy_select
from fpselect.dataset import import_external, load_csv, load_mapping, stats
from fpselect.explorer import ExplorationConfig, brute_force_frontier, fpselect
from fpselect.measures import (
    AttributeSet,
    CostWeights,
    SensitivityParams,
    entropy_bits,
    sensitivity_top_k,
    usability_cost,
)
from fpselect.trace import read_trace, summarize, write_trace
from fpselect.views import compare_methods

from conftest import COOKIE, LANGUAGE, SCREEN, TIMEZONE, random_dataset


@contextmanager
def criterion(name: str, budget_s: float):
    started = time.perf_counter()
    try:
        yield
    except BaseException:
        print(f"FAIL  {name}  ({time.perf_counter() - started:.2f}s)")
        raise
    elapsed = time.perf_counter() - started
    status = "PASS" if elapsed < budget_s else "FAIL"
    print(f"{status}  {name}  ({elapsed:.2f}s, budget {budget_s:.0f}s)")
    assert elapsed < budget_s, f"{name} exceeded runtime budget: {elapsed:.2f}s"


def test_table1_golden_suite(table1):
    with criterion("table1-golden-suite", 1.0):
        assert entropy_bits(table1, AttributeSet.of(COOKIE)) == 0.0
        assert entropy_bits(table1, AttributeSet.of(SCREEN)) == pytest.approx(1.0)
        assert entropy_bits(table1, AttributeSet.of(LANGUAGE)) == pytest.approx(1.9183, abs=1e-3)
        assert entropy_bits(table1, AttributeSet.of(LANGUAGE, TIMEZONE)) == entropy_bits(
            table1, AttributeSet.of(LANGUAGE)
        )
        assert sensitivity_top_k(table1, AttributeSet(), SensitivityParams(1)) == 1.0
        assert sensitivity_top_k(
            table1, AttributeSet.of(LANGUAGE), SensitivityParams(1)
        ) == pytest.approx(1 / 3)
        assert sensitivity_top_k(
            table1, AttributeSet.full(4), SensitivityParams(1)
        ) == pytest.approx(1 / 6)
        assert sensitivity_top_k(
            table1, AttributeSet.of(LANGUAGE), SensitivityParams(2)
        ) == pytest.approx(2 / 3)


def _oracle_suite_instances():
    rng = random.Random(20210405)
    for _ in range(200):
        ds = random_dataset(rng, max_attributes=6, max_browsers=64, max_records_per_browser=3)
        alpha = rng.choice([0.1, 0.2, 0.4])
        budget = rng.choice([1, 2, 4])
        yield ds, alpha, budget


def test_oracle_equivalence_and_exploration_bound():
    bound_violations = []
    beam1_sound = beam1_not_worse_than_entropy = satisfiable = 0
    with criterion("oracle-equivalence", 60.0):
        for ds, alpha, budget in _oracle_suite_instances():
            n = ds.n_attributes
            full_beam_config = ExplorationConfig(
                threshold_alpha=alpha, beam_width=n, submission_budget=budget
            )
            oracle = brute_force_frontier(ds, full_beam_config)
            wide = fpselect(ds, full_beam_config)
            narrow = fpselect(ds, dataclasses.replace(full_beam_config, beam_width=1))

            for result, width in ((wide, n), (narrow, 1)):
                limit = width * n * (n + 1) // 2 + 1
                if result.explored_count > limit:
                    bound_violations.append((n, width, result.explored_count, limit))

            if oracle.best is None:
                assert wide.best is None and narrow.best is None
                continue
            satisfiable += 1
            # full beam matches the exhaustive optimum
            assert wide.best is not None
            assert wide.best.cost == pytest.approx(oracle.best.cost)
            # narrow beam is sound: a satisfying set never cheaper than optimal
            assert narrow.best is not None
            assert narrow.best.satisfying
            assert narrow.best.cost >= oracle.best.cost - 1e-9
            beam1_sound += 1

            entropy_result = entropy_select(
                ds, dataclasses.replace(full_beam_config, beam_width=1, method="entropy")
            )
            assert entropy_result.best is not None
            if narrow.best.cost <= entropy_result.best.cost + 1e-9:
                beam1_not_worse_than_entropy += 1

        assert satisfiable > 0
        rate = beam1_not_worse_than_entropy / satisfiable
        print(
            f"        beam-1 vs entropy baseline: not worse in {beam1_not_worse_than_entropy}"
            f"/{satisfiable} satisfiable trials ({rate:.1%})"
        )
        if rate < 0.80:
            # reported, not hard-failed, per the stated gate
            print("        NOTE: beam-1 cost beat rate below the 80% expectation")

    with criterion("exploration-bound", 60.0):
        assert bound_violations == [], bound_violations


def test_monotonicity_property_suite():
    rng = random.Random(987123)
    with criterion("monotonicity-suite", 30.0):
        for _ in range(500):
            ds = random_dataset(rng, max_attributes=6, max_browsers=32, max_records_per_browser=3)
            n = ds.n_attributes
            t_members = tuple(
                sorted(rng.sample(range(n), rng.randint(1, n)))
            )
            s_members = tuple(sorted(rng.sample(t_members, rng.randint(0, len(t_members) - 1))))
            small, big = AttributeSet(s_members), AttributeSet(t_members)
            budget = rng.choice([1, 2, 4])
            weights = CostWeights(
                w_size=rng.choice([0.0, 0.5, 1.0, 2.0]),
                w_instability=rng.choice([0.0, 1.0, 3.0]),
                w_time=0.0,
                epsilon=rng.choice([0.001, 0.01, 0.1]),
            )
            params = SensitivityParams(budget)
            assert sensitivity_top_k(ds, big, params) <= sensitivity_top_k(ds, small, params)
            assert usability_cost(ds, small, weights) < usability_cost(ds, big, weights)
            assert entropy_bits(ds, small) <= entropy_bits(ds, big)
            assert entropy_bits(ds, big) <= math.log2(ds.n_browsers) + 1e-9


def test_prune_safety():
    rng = random.Random(6021023)
    with criterion("prune-safety", 60.0):
        for _ in range(100):
            ds = random_dataset(rng, max_attributes=6, max_browsers=48, max_records_per_browser=2)
            config = ExplorationConfig(
                threshold_alpha=rng.choice([0.1, 0.2, 0.4]),
                beam_width=rng.choice([1, 2, 3]),
                submission_budget=rng.choice([1, 2]),
            )
            pruned = fpselect(ds, config)
            unpruned = fpselect(ds, config, pruning_enabled=False)
            if unpruned.best is None:
                assert pruned.best is None
            else:
                assert pruned.best is not None
                assert unpruned.best.cost >= pruned.best.cost - 1e-12


def test_trace_determinism_and_replay_fidelity(tmp_path):
    rng = random.Random(55001)
    with criterion("trace-determinism-replay-fidelity", 60.0):
        for i in range(50):
            ds = random_dataset(rng, max_attributes=5, max_browsers=32, max_records_per_browser=2)
            config = ExplorationConfig(
                threshold_alpha=rng.choice([0.1, 0.3, 0.6]),
                beam_width=rng.choice([1, 2]),
                submission_budget=rng.choice([1, 2]),
            )
            first_events, second_events = [], []
            live = fpselect(ds, config, first_events.append)
            fpselect(ds, config, second_events.append)
            a = write_trace(first_events, tmp_path / f"a{i}.trace")
            b = write_trace(second_events, tmp_path / f"b{i}.trace")
            assert a.read_bytes() == b.read_bytes()
            assert summarize(read_trace(a)) == live


def test_dataset_pipeline_on_bundled_sample(tmp_path):
    with criterion("dataset-pipeline-fpstalker-sample", 60.0):
        mapping = load_mapping(data.path("fpstalker.mapping.json"))
        out = import_external(
            data.path("fpstalker_sample.csv"), mapping, tmp_path / "canonical.csv"
        )
        ds = load_csv(out)
        st = stats(ds)
        assert st.n_records <= 5000
        assert st.n_browsers <= st.n_records
        assert st.distinct_full_fingerprints <= st.n_browsers
        assert 0.0 <= st.unicity_rate <= 1.0
        assert st.n_attributes == 15
        # time-series rows exist, so the instability measure is exercised
        from fpselect.measures import instability

        full = AttributeSet.full(ds.n_attributes)
        assert 0.0 < instability(ds, full) < 1.0


def test_comparison_report_substitutes_private_experiment(table1):
    """The published cost-reduction factors rest on a private 30k-browser
    dataset; the substituted check: on the toy data the entropy baseline's
    selection is a strict, costlier superset of the lattice search's."""
    with criterion("comparison-report-table1", 10.0):
        config = ExplorationConfig(
            threshold_alpha=0.2,
            submission_budget=1,
            weights=CostWeights(w_size=1, w_instability=1, w_time=0, epsilon=0.01),
        )
        rows = {r["method"]: r for r in compare_methods(table1, config)}
        assert rows["fpselect"]["status"] == "ok"
        assert rows["entropy"]["status"] == "ok"
        fp_set = set(rows["fpselect"]["indices"])
        entropy_set = set(rows["entropy"]["indices"])
        assert fp_set < entropy_set
        assert rows["fpselect"]["cost"] < rows["entropy"]["cost"]
        assert rows["conditional_entropy"]["indices"] == rows["fpselect"]["indices"]
