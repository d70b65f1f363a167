"""Influence maximization under the coordination-game threshold model."""
from .diffusion import (
    EvalCache,
    Snapshot,
    SnapshotPool,
    SpreadResult,
    commit_seed,
    estimate_sigma_mc,
    estimate_sigma_snapshots,
    generate_snapshot,
    marginal_gain,
    simulate,
)
from .graph import EdgeListError, Graph, influence_neighbors, load_edge_list, spread_targets
from .oracle import (
    brute_force_opt,
    check_monotone_submodular,
    exact_sigma,
    find_submodularity_violation,
)
from .selection import (
    SeedSelection,
    degree_heuristic,
    evaluate_curve,
    greedy,
    greedy_pp,
    pagerank_heuristic,
    random_heuristic,
    select,
)
from .thresholds import (
    Concavity,
    ThresholdModel,
    cdf,
    delta_from_payoffs,
    is_concave_cdf,
    parse_model,
    requirement_distribution,
    sample_threshold,
)

__version__ = "0.1.0"
