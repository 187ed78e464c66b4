"""Feature selection study: pick the single best predictor of a 4-state
class from 10 binary and 10 four-state candidate features.

The generative model fixes the binary features' predictive strength and
lets z set the four-state features' strength; the two arities carry equal
true mutual information near z ~ 0.088. At z = 0.10 the four-state
features are truly (slightly) better, so the right behavior is: prefer a
binary feature at small N (the four-state advantage is not yet
distinguishable from its extra capacity) and switch to four-state as N
grows.
"""

from depscore import (
    MeasureKind,
    NaiveBayesModel,
    format_curve,
    nb_equal_mi_z,
    nb_true_mi,
    run_feature_selection_experiment,
)

m = NaiveBayesModel(0.10)
print(f"true MI, binary feature:     {nb_true_mi(m, 'binary'):.4f} nats")
print(f"true MI, four-state at z=.1: {nb_true_mi(m, 'four_state'):.4f} nats")
print(f"equal-information point:     z* = {nb_equal_mi_z():.4f}")

curve = run_feature_selection_experiment(
    z=0.10,
    n_values=(32, 128, 512, 2048, 8192),
    replicates=100,
    measure_kinds=(MeasureKind.MI_BC, MeasureKind.SI, MeasureKind.NI,
                   MeasureKind.P_VALUE),
    master_seed=7,
)
print("\nfraction of resamples where the winning feature is binary:")
print(format_curve(curve), end="")

print("""
Reading the curve:
- si: high at N = 32 (the four-state winner must beat the binary winner by
  the notability margin to justify its extra states) and near 0 at large N,
  as it should be since the four-state features truly carry more.
- mi_bc: jumps to four-state features even at tiny N, where that choice is
  driven by sampling noise rather than signal.
- ni: drifts the wrong way: its entropy denominator keeps suppressing
  four-state candidates no matter how much data arrives.
- p_value: agrees with si until its naive computation underflows at large
  N (p_underflow column) and the plotted choice deliberately flips.
""")
