"""Discretization study: should a pair of 4-state variables be treated as
having 2 effective states or 4?

Tables are sampled from the block family: a 4x4 joint whose 2x2 block
merging is exactly independent, so every bit of dependence lives at the
4-state resolution and grows with the parameter z. Each measure then judges
sampled tables: is the refinement beyond 2 states real?

A well-regularized measure should answer "2 states" when z = 0 (the data
are pure noise) and "4 states" at large z, switching earlier as the sample
size grows. Watch how the standardized information does exactly that, the
bias-corrected MI stays near a coin flip at z = 0, and normalized MI barely
moves at N = 500 because its regularization does not shrink with N.
"""

from depscore import MeasureKind, format_curve, run_discretization_experiment

curves = run_discretization_experiment(
    z_grid=[0.0, 0.02, 0.04, 0.06, 0.08, 0.10],
    n_values=(25, 100, 500),
    replicates=100,
    measure_kinds=(MeasureKind.MI_BC, MeasureKind.SI, MeasureKind.NI,
                   MeasureKind.P_VALUE),
    master_seed=7,
)

for n, curve in curves.items():
    print(f"\n=== N = {n}: fraction of resamples favoring 2 states ===")
    print(format_curve(curve), end="")

print("""
Reading the tables:
- si: starts near 0.95 at z = 0 (the refinement is accepted only when it
  clears the alpha = 0.05 notability threshold) and drops toward 0 as z
  grows, earlier for larger N.
- mi_bc: hovers near 0.5 at z = 0: the additive bias correction centers
  the increment but provides no width, so noise decides.
- ni: needs the refinement to claim a fixed share of the entropy budget,
  independent of N, so at N = 500 it keeps favoring 2 states long after
  si has switched.
- p_value: tracks si until the naive 1-minus-CDF computation underflows
  (see the p_underflow column); those replicates are plotted with the
  deliberately wrong answer, so the curve jumps when the breakdown begins.
""")
