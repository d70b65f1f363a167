"""
Spread on a small star
======================

A center node with three leaves, undirected. Under the linear threshold
model a single leaf activates the center with probability 1/3, and an
active center activates every remaining leaf (each has in-degree one).
"""
import numpy as np

from cgim import Graph, ThresholdModel, estimate_sigma_mc, exact_sigma, simulate
from cgim.diffusion import snapshot_from_thresholds

g = Graph.from_edges([(0, 1), (0, 2), (0, 3)])
lin = ThresholdModel.linear()

# fix every threshold at 0.5: the center needs 2 of its 3 leaves
snap = snapshot_from_thresholds(g, [0.5] * 4)
print("one leaf  ->", sorted(simulate(g, snap, [1]).active))
print("two leaves ->", sorted(simulate(g, snap, [1, 2]).active))

# expected spread from one leaf: 1 + (1/3) * 3 = 2
print("exact sigma({1}) =", exact_sigma(g, lin, [1]))
mean, se = estimate_sigma_mc(g, lin, [1], 100_000, np.random.default_rng(0))
print(f"monte carlo      = {mean:.4f} +/- {se:.4f}")
