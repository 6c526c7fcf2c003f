from __future__ import annotations

import random

import pytest

from fpselect import data
from fpselect.dataset import Attribute, Dataset, FingerprintRecord, load_csv

# Attribute indices of the toy dataset, in header order.
COOKIE, LANGUAGE, TIMEZONE, SCREEN = 0, 1, 2, 3


@pytest.fixture(scope="session")
def table1() -> Dataset:
    return load_csv(data.path("table1.csv"))


def make_dataset(rows: list[tuple[str, int, list[str]]], names: list[str]) -> Dataset:
    """Build a dataset from (browser_id, timestamp, values) triples."""
    attrs = tuple(Attribute(i, n) for i, n in enumerate(names))
    records = tuple(FingerprintRecord(b, t, tuple(v)) for b, t, v in rows)
    return Dataset(attrs, records)


def random_dataset(
    rng: random.Random,
    max_attributes: int = 6,
    max_browsers: int = 64,
    max_records_per_browser: int = 3,
    alphabet_size: int = 4,
) -> Dataset:
    """Small random dataset for property and oracle tests."""
    n_attr = rng.randint(1, max_attributes)
    n_browsers = rng.randint(1, max_browsers)
    names = [f"a{i}" for i in range(n_attr)]
    rows = []
    for b in range(n_browsers):
        base = [str(rng.randrange(alphabet_size)) for _ in range(n_attr)]
        n_rec = rng.randint(1, max_records_per_browser)
        for t in range(n_rec):
            values = [
                v if rng.random() > 0.15 else str(rng.randrange(alphabet_size))
                for v in base
            ]
            rows.append((f"b{b}", t, values))
    return make_dataset(rows, names)
