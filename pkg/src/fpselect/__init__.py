"""Attribute-set selection workbench for fingerprint-based web authentication.

Selects which browser attributes to collect by trading attacker reach
(sensitivity against a top-k dictionary attacker) against usability cost,
via beam search over the subset lattice plus entropy-based baselines.
"""

from .dataset import (
    Attribute,
    Dataset,
    DatasetStats,
    FingerprintRecord,
    MappingConfig,
    consecutive_pairs,
    import_external,
    latest_fingerprints,
    load_csv,
    load_mapping,
    stats,
    write_csv,
)
from .explorer import (
    ExplorationConfig,
    PruneReason,
    SelectionResult,
    brute_force_frontier,
    expand,
    fpselect,
    run_method,
    should_prune,
)
from .baselines import conditional_entropy_select, entropy_select
from .measures import (
    AttributeSet,
    AttributeSetProperties,
    CostWeights,
    NodeEvaluation,
    SensitivityParams,
    attribute_set_properties,
    conditional_entropy_gain,
    efficiency,
    entropy_bits,
    instability,
    project,
    sensitivity_top_k,
    usability_cost,
)
from .trace import read_trace, summarize, write_trace

__version__ = "0.1.0"

__all__ = [
    "Attribute",
    "AttributeSet",
    "AttributeSetProperties",
    "CostWeights",
    "Dataset",
    "DatasetStats",
    "ExplorationConfig",
    "FingerprintRecord",
    "MappingConfig",
    "NodeEvaluation",
    "PruneReason",
    "SelectionResult",
    "SensitivityParams",
    "attribute_set_properties",
    "brute_force_frontier",
    "conditional_entropy_gain",
    "conditional_entropy_select",
    "consecutive_pairs",
    "efficiency",
    "entropy_bits",
    "entropy_select",
    "expand",
    "fpselect",
    "import_external",
    "instability",
    "latest_fingerprints",
    "load_csv",
    "load_mapping",
    "project",
    "read_trace",
    "run_method",
    "sensitivity_top_k",
    "should_prune",
    "stats",
    "summarize",
    "usability_cost",
    "write_csv",
    "write_trace",
]
