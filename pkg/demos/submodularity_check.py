"""
Looking for diminishing returns violations
==========================================

For each model, search small graphs for S subset of T and a node v with
sigma(S + v) - sigma(S) < sigma(T + v) - sigma(T), using exact spreads.
"""
from cgim import ThresholdModel, find_submodularity_violation, is_concave_cdf

for model in (ThresholdModel.majority(), ThresholdModel.convex(), ThresholdModel.linear()):
    w = find_submodularity_violation(model, budget=100)
    print(f"== {model.spec} ({is_concave_cdf(model).value})")
    if w is None:
        print("no violation in 100 graphs")
    else:
        print(w.to_text())
