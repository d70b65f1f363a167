import itertools
import math
from pathlib import Path

import numpy as np
import pytest

from cgim.diffusion import estimate_sigma_mc, simulate_direct
from cgim.generators import random_graph, star
from cgim.graph import Graph
from cgim.oracle import (
    OracleGuardError,
    Witness,
    brute_force_opt,
    check_monotone_submodular,
    check_sigma_table,
    exact_sigma,
    exact_sigma_many,
    exact_sigma_powerset,
    find_submodularity_violation,
    greedy_exact,
    requirement_support,
    small_connected_graphs,
)
from cgim.thresholds import ThresholdModel, requirement_distribution

LIN = ThresholdModel.linear()
CONCAVE = ThresholdModel.concave()
CONVEX = ThresholdModel.convex()
MAJ = ThresholdModel.majority()
FIXTURES = Path(__file__).parent / "fixtures"


def test_exact_examples(star4):
    edge = Graph.from_edges([(0, 1)])
    assert exact_sigma(edge, LIN, [0]) == 2.0
    assert exact_sigma(star4, LIN, [1]) == pytest.approx(2.0, abs=1e-15)
    assert exact_sigma(star4, LIN, []) == 0.0
    assert exact_sigma(star4, LIN, [0, 1, 2, 3]) == 4.0


def _python_exact(g, model, seeds):
    """Enumerate requirement assignments in pure Python, spreading with the
    real-valued rule and delta = m / d as the representative threshold."""
    n = g.node_count
    choices = []
    for v in range(n):
        d = int(g.in_degree[v])
        if d == 0:
            choices.append([(0.5, 1.0)])
            continue
        p = requirement_distribution(model, d)
        choices.append([(m / d, p[m]) for m in range(1, d + 1) if p[m] > 0])
    total = 0.0
    for combo in itertools.product(*choices):
        th = [c[0] for c in combo]
        prob = math.prod(c[1] for c in combo)
        total += prob * len(simulate_direct(g, th, seeds))
    return total


def test_exact_matches_python_enumeration():
    rng = np.random.default_rng(31)
    for trial in range(10):
        n = int(rng.integers(3, 7))
        g = random_graph(n, 0.5, rng, directed=bool(trial % 2))
        model = [LIN, CONCAVE, CONVEX, MAJ, ThresholdModel.power_law(1.5)][trial % 5]
        seeds = rng.choice(n, size=int(rng.integers(1, n)), replace=False).tolist()
        assert exact_sigma(g, model, seeds) == pytest.approx(_python_exact(g, model, seeds),
                                                             abs=1e-12)


def test_assignment_mass_sums_to_one():
    from cgim import _kernels as K

    rng = np.random.default_rng(32)
    for model in (LIN, CONCAVE, CONVEX, MAJ):
        g = random_graph(6, 0.6, rng)
        support, mass, sizes = requirement_support(g, model)
        _, total = K.exact_extra_mass(g.out_indptr, g.out_indices, g.node_count, support, mass,
                                      sizes, np.zeros((1, 1), np.int64), np.zeros(1, np.int64))
        assert abs(total - 1) < 1e-9


def test_full_seed_set_and_monotone_exhaustive():
    rng = np.random.default_rng(33)
    for trial in range(8):
        n = int(rng.integers(2, 7))
        g = random_graph(n, 0.5, rng, directed=bool(trial % 2))
        model = [LIN, CONCAVE, CONVEX, MAJ][trial % 4]
        sig = exact_sigma_powerset(g, model)
        assert sig[-1] == n
        assert sig[0] == 0
        for T in range(1 << n):
            for v in range(n):
                assert sig[T | 1 << v] >= sig[T] - 1e-12


@pytest.mark.slow
def test_mc_agrees_with_exact():
    rng = np.random.default_rng(34)
    misses = 0
    for trial in range(10):
        n = int(rng.integers(3, 7))
        g = random_graph(n, 0.5, rng, connected=True)
        model = [LIN, CONCAVE, CONVEX, MAJ, ThresholdModel.power_law(3)][trial % 5]
        seeds = rng.choice(n, size=int(rng.integers(1, n)), replace=False).tolist()
        mean, se = estimate_sigma_mc(g, model, seeds, 50_000, rng)
        exact = exact_sigma(g, model, seeds)
        misses += abs(mean - exact) > 3 * se + 1e-12
    assert misses <= 1


def test_brute_force_examples(star4):
    assert brute_force_opt(star4, LIN, 1) == ((0,), 4.0)
    assert brute_force_opt(star4, LIN, 4) == ((0, 1, 2, 3), 4.0)
    two = Graph.from_edges([(0, 1), (2, 3)])
    best, val = brute_force_opt(two, LIN, 2)
    assert val == 4.0
    assert best == (0, 2)
    vals = exact_sigma_many(two, LIN, list(itertools.combinations(range(4), 2)))
    assert sorted(vals.tolist()) == [2.0, 2.0, 4.0, 4.0, 4.0, 4.0]


def test_guards():
    big = Graph.from_edges(list(itertools.combinations(range(9), 2)))  # 9**9 assignments
    with pytest.raises(OracleGuardError, match="10000000"):
        exact_sigma(big, LIN, [0])
    line = Graph.from_edges([(i, i + 1) for i in range(40)])
    with pytest.raises(OracleGuardError):
        brute_force_opt(line, LIN, 20)
    with pytest.raises(OracleGuardError):
        exact_sigma_powerset(line, LIN)


def test_greedy_exact_star(star4):
    assert greedy_exact(star4, LIN, 2) == ([0, 1], 4.0)


def test_check_table_detects_violations():
    # coverage function: submodular
    sets = [{0, 1}, {1, 2}, {3}]
    cover = np.array([len(set().union(*[sets[i] for i in range(3) if m >> i & 1]))
                      for m in range(8)], dtype=float)
    assert check_sigma_table(cover, 3).holds
    # f = |S|^2 is supermodular
    sq = np.array([bin(m).count("1") ** 2 for m in range(8)], dtype=float)
    rep = check_sigma_table(sq, 3)
    assert not rep.holds and rep.witness.kind == "submodular"
    S, T, v = rep.witness.S, rep.witness.T, rep.witness.v
    assert set(S) <= set(T) and v not in T
    assert rep.witness.margin_S < rep.witness.margin_T
    dec = np.array([0, 1, 1, 0.5], dtype=float)
    rep = check_sigma_table(dec, 2)
    assert not rep.holds and rep.witness.kind == "monotone"


@pytest.mark.parametrize("model", [LIN, CONCAVE], ids=str)
def test_concave_models_hold_small(model):
    for g in small_connected_graphs(2, 4):
        assert check_monotone_submodular(g, model).holds


def test_violations_found():
    for model in (MAJ, CONVEX):
        w = find_submodularity_violation(model, 500)
        assert w is not None
        assert w.kind == "submodular"
        sig = exact_sigma_many(w.graph, model, [w.S, w.S + (w.v,), w.T, w.T + (w.v,)])
        assert sig[1] - sig[0] == pytest.approx(w.margin_S)
        assert sig[3] - sig[2] == pytest.approx(w.margin_T)
        assert w.margin_S < w.margin_T - 1e-9


@pytest.mark.slow
def test_linear_no_violation_within_budget():
    assert find_submodularity_violation(LIN, 500) is None


def test_witness_text_roundtrip():
    w = find_submodularity_violation(MAJ, 50)
    back = Witness.from_text(w.to_text())
    assert (back.kind, back.S, back.T, back.v) == (w.kind, w.S, w.T, w.v)
    assert back.margin_S == w.margin_S and back.margin_T == w.margin_T
    assert back.model == MAJ
    assert np.array_equal(back.graph.edges(), w.graph.edges())


@pytest.mark.parametrize("name, model", [("majority_witness.txt", MAJ),
                                         ("convex_witness.txt", CONVEX)])
def test_committed_witness_fixtures(name, model):
    w = Witness.from_text((FIXTURES / name).read_text())
    assert w.model == model
    rep = check_monotone_submodular(w.graph, model)
    assert not rep.holds
    sig = exact_sigma_many(w.graph, model, [w.S, w.S + (w.v,), w.T, w.T + (w.v,)])
    assert sig[1] - sig[0] == pytest.approx(w.margin_S, abs=1e-12)
    assert sig[3] - sig[2] == pytest.approx(w.margin_T, abs=1e-12)


def test_star_witness_by_hand():
    # center needs 2 of its 3 leaves under majority vote
    g = Graph.from_edges(star(3))
    assert exact_sigma(g, MAJ, [1]) == 1.0
    assert exact_sigma(g, MAJ, [1, 2]) - exact_sigma(g, MAJ, [2]) == 3.0
