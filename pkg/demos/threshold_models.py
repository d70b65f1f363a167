"""
Threshold distributions
=======================

Each model is a CDF on [0, 1]. Concave, continuous ones keep the expected
spread submodular; the others can break it.
"""
import numpy as np

from cgim import ThresholdModel, is_concave_cdf, parse_model
from cgim.thresholds import cdf, requirement_distribution, sample_thresholds

models = [parse_model(s) for s in ("linear", "concave", "convex", "majority", "powerlaw:3")]
x = np.linspace(0, 1, 6)
for m in models:
    print(f"{m.spec:12s} {is_concave_cdf(m).value:28s} F(x) =", np.round(cdf(m, x), 3))

# a node with in-degree 4 needs m of its neighbors, m = ceil(delta * 4)
for m in models:
    print(f"{m.spec:12s} P(requirement = 1..4) =", np.round(requirement_distribution(m, 4)[1:], 3))

rng = np.random.default_rng(1)
draws = sample_thresholds(ThresholdModel.concave(), rng, 100_000)
print("mean concave threshold:", draws.mean().round(4), "(exact 1/3)")
