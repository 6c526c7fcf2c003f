"""Lattice-node measurements: sensitivity, usability cost, entropy, efficiency.

All distribution-based measures work on the latest-fingerprint population
snapshot (one fingerprint per browser). Results are memoized on the dataset
instance keyed by the set's bit pattern, because the explorer revisits sets;
measures are pure with respect to the immutable dataset, so concurrent
duplicate inserts into the cache are harmless.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from .dataset import Dataset, consecutive_pairs, latest_fingerprints
from .errors import CandidateAlreadySelected, IndexOutOfRange, NegativeReduction

if TYPE_CHECKING:
    from .explorer import ExplorationConfig

INF = float("inf")


@dataclass(frozen=True, order=True)
class AttributeSet:
    """Canonical, duplicate-free, ascending subset of attribute indices.

    Ordering is shortlex: by size, then lexicographically on members. This is
    the "canonical set order" every tie-break in the package refers to.
    """

    size: int = field(init=False)
    members: tuple[int, ...] = ()

    def __post_init__(self):
        members = tuple(sorted(set(self.members)))
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "size", len(members))

    @classmethod
    def of(cls, *indices: int) -> "AttributeSet":
        return cls(tuple(indices))

    def __iter__(self):
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, index: int) -> bool:
        return index in self.members

    @property
    def bits(self) -> int:
        mask = 0
        for i in self.members:
            mask |= 1 << i
        return mask

    def add(self, index: int) -> "AttributeSet":
        return AttributeSet((*self.members, index))

    def issubset(self, other: "AttributeSet") -> bool:
        return self.bits & other.bits == self.bits

    @classmethod
    def full(cls, n: int) -> "AttributeSet":
        return cls(tuple(range(n)))


@dataclass(frozen=True)
class CostWeights:
    w_size: float = 1.0
    w_instability: float = 1.0
    w_time: float = 0.0
    epsilon: float = 0.01  # strictly positive per-attribute base cost

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError("epsilon must be strictly positive")
        if min(self.w_size, self.w_instability, self.w_time) < 0:
            raise ValueError("cost weights must be non-negative")

    def key(self) -> tuple[float, float, float, float]:
        return (self.w_size, self.w_instability, self.w_time, self.epsilon)


@dataclass(frozen=True)
class SensitivityParams:
    submission_budget: int = 1

    def __post_init__(self):
        if self.submission_budget < 1:
            raise ValueError("submission_budget must be >= 1")


@dataclass(frozen=True)
class NodeEvaluation:
    """One lattice node's measurements."""

    set: AttributeSet
    cost: float
    sensitivity: float
    efficiency: float  # INF iff sensitivity == 0
    satisfying: bool  # sensitivity <= the run's threshold

    def order_key(self) -> tuple[float, float, AttributeSet]:
        """Total order used to pick the best node: cost, sensitivity, set."""
        return (self.cost, self.sensitivity, self.set)


@dataclass(frozen=True)
class AttributeSetProperties:
    evaluation: NodeEvaluation
    entropy_bits: float
    unicity: float
    stability: float
    sample: tuple[tuple[tuple[str, ...], int], ...]  # top projected fingerprints


def _cached(dataset: Dataset, key: tuple, compute):
    cache = dataset._measure_cache
    try:
        return cache[key]
    except KeyError:
        value = compute()
        cache[key] = value
        return value


def _latest_rows(dataset: Dataset) -> list[tuple[str, ...]]:
    return _cached(dataset, ("latest_rows",), lambda: list(latest_fingerprints(dataset).values()))


def project(dataset: Dataset, attr_set: AttributeSet) -> dict[tuple[str, ...], int]:
    """Class counts of the population projected onto the selected attributes."""
    if attr_set.members and attr_set.members[-1] >= dataset.n_attributes:
        raise IndexOutOfRange(
            f"attribute index {attr_set.members[-1]} out of range "
            f"(dataset has {dataset.n_attributes} attributes)"
        )

    def compute():
        members = attr_set.members
        return dict(Counter(tuple(row[i] for i in members) for row in _latest_rows(dataset)))

    return _cached(dataset, ("project", attr_set.bits), compute)


def _class_counts(dataset: Dataset, attr_set: AttributeSet) -> list[int]:
    # Sorted descending so equal partitions produce bit-identical floats.
    return sorted(project(dataset, attr_set).values(), reverse=True)


def entropy_bits(dataset: Dataset, attr_set: AttributeSet) -> float:
    """Shannon entropy (base 2) of the projected-fingerprint distribution."""

    def compute():
        counts = _class_counts(dataset, attr_set)
        total = sum(counts)
        h = 0.0
        for c in counts:
            p = c / total
            h -= p * math.log2(p)
        return h + 0.0  # normalize -0.0

    return _cached(dataset, ("entropy", attr_set.bits), compute)


def conditional_entropy_gain(dataset: Dataset, base: AttributeSet, candidate: int) -> float:
    if candidate in base:
        raise CandidateAlreadySelected(f"attribute {candidate} already in {base.members}")
    return entropy_bits(dataset, base.add(candidate)) - entropy_bits(dataset, base)


def sensitivity_top_k(
    dataset: Dataset, attr_set: AttributeSet, params: SensitivityParams
) -> float:
    """Fraction of browsers covered by the attacker's most common fingerprints.

    The attacker submits its `submission_budget` most common projected
    fingerprints; ties between equal-count classes do not affect the sum.
    """

    def compute():
        counts = _class_counts(dataset, attr_set)
        covered = sum(counts[: params.submission_budget])
        return covered / dataset.n_browsers

    return _cached(dataset, ("sensitivity", attr_set.bits, params.submission_budget), compute)


def _change_counts(dataset: Dataset) -> tuple[list[int], int]:
    """Per-attribute changed-cell counts over consecutive pairs, and pair count."""

    def compute():
        changed = [0] * dataset.n_attributes
        pairs = 0
        for _, earlier, later in consecutive_pairs(dataset):
            pairs += 1
            for i, (a, b) in enumerate(zip(earlier, later)):
                if a != b:
                    changed[i] += 1
        return changed, pairs

    return _cached(dataset, ("change_counts",), compute)


def instability(dataset: Dataset, attr_set: AttributeSet) -> float:
    """Fraction of (consecutive pair, selected attribute) cells that changed."""
    if not attr_set.members:
        return 0.0
    changed, pairs = _change_counts(dataset)
    if pairs == 0:
        return 0.0
    return sum(changed[i] for i in attr_set.members) / (pairs * len(attr_set))


def unit_costs(dataset: Dataset, weights: CostWeights) -> list[float]:
    """Per-attribute cost contributions; the total cost of a set is their sum.

    The instability term is the attribute's own change rate, so the total
    stays strictly increasing when attributes are added (a set-level change
    fraction would shrink when a stable attribute joins an unstable one).
    """

    def compute():
        rows = _latest_rows(dataset)
        n_browsers = len(rows)
        changed, pairs = _change_counts(dataset)
        units = []
        for attr in dataset.attributes:
            i = attr.index
            mean_bytes = sum(len(row[i].encode("utf-8")) for row in rows) / n_browsers
            rate = changed[i] / pairs if pairs else 0.0
            time_ms = attr.avg_collection_time_ms or 0.0
            units.append(
                weights.w_size * mean_bytes
                + weights.w_time * time_ms
                + weights.w_instability * rate
                + weights.epsilon
            )
        return units

    return _cached(dataset, ("unit_costs", weights.key()), compute)


def usability_cost(dataset: Dataset, attr_set: AttributeSet, weights: CostWeights) -> float:
    """Weighted per-attribute cost: size + collection time + instability + base.

    cost(empty set) = 0; strictly increasing under set inclusion because every
    unit cost is >= epsilon > 0.
    """
    units = unit_costs(dataset, weights)
    if attr_set.members and attr_set.members[-1] >= dataset.n_attributes:
        raise IndexOutOfRange(f"attribute index {attr_set.members[-1]} out of range")
    total = 0.0
    for i in attr_set.members:
        total += units[i]
    return total


def efficiency(cost_full: float, cost: float, sensitivity: float) -> float:
    """Usability-cost reduction relative to the full set, per unit sensitivity."""
    if cost > cost_full:
        raise NegativeReduction(f"node cost {cost} exceeds full-set cost {cost_full}")
    if sensitivity == 0:
        return INF
    return (cost_full - cost) / sensitivity


def evaluate_node(
    dataset: Dataset, attr_set: AttributeSet, config: "ExplorationConfig"
) -> NodeEvaluation:
    """Bundle the four per-node measures under one run configuration."""
    cost = usability_cost(dataset, attr_set, config.weights)
    cost_full = usability_cost(dataset, AttributeSet.full(dataset.n_attributes), config.weights)
    sens = sensitivity_top_k(dataset, attr_set, SensitivityParams(config.submission_budget))
    return NodeEvaluation(
        set=attr_set,
        cost=cost,
        sensitivity=sens,
        efficiency=efficiency(cost_full, cost, sens),
        satisfying=sens <= config.threshold_alpha,
    )


def unicity(dataset: Dataset, attr_set: AttributeSet) -> float:
    """Fraction of browsers whose projected fingerprint is unique."""
    counts = project(dataset, attr_set)
    singletons = sum(1 for c in counts.values() if c == 1)
    return singletons / dataset.n_browsers


def attribute_set_properties(
    dataset: Dataset, attr_set: AttributeSet, config: "ExplorationConfig"
) -> AttributeSetProperties:
    """The property bundle shown for one attribute set: evaluation, entropy,
    unicity, stability, and the most common projected fingerprints."""
    counts = project(dataset, attr_set)
    sample = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[:10]
    return AttributeSetProperties(
        evaluation=evaluate_node(dataset, attr_set, config),
        entropy_bits=entropy_bits(dataset, attr_set),
        unicity=unicity(dataset, attr_set),
        stability=1.0 - instability(dataset, attr_set),
        sample=tuple(sample),
    )
