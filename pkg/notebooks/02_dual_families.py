"""Every dual is the canonical dual plus a null part.

Enumerates the degree-1 null parts of the example frame, builds random duals
from them and shows the two properties that only the canonical dual has.
"""

import numpy as np

from cstarframes import duals, frames, golden

F, G, rule = golden.example_frame(), golden.example_dual(), golden.example_rule()
can = frames.canonical_dual(F, rule)

for degree in (0, 1, 2):
    fam = duals.null_bessel_family(F, degree, rule)
    print(f"null parts of degree <= {degree}: dimension {len(fam)}")

family = duals.null_bessel_family(F, 1, rule)
rng = np.random.default_rng(7)
grid = np.linspace(0, 1, 20)
print("\n  dual          residual   kernel asym.   min eig(Q_D - Q^-1)")
for label, D in [("canonical", can), ("G", G)] + [
        (f"random #{i}", can + duals.combine(family, rng.standard_normal(len(family))))
        for i in range(3)]:
    res = frames.is_dual_pair(F, D, rule).residual_norm
    sym = duals.kernel_symmetry_check(F, D, grid).max_deviation
    mini = duals.minimality_check(F, D, rule)
    print(f"  {label:12s}  {res:8.1e}   {sym:10.3e}   {mini.margin:+.2e} (largest {mini.gap:.3f})")

dec = duals.dual_decompose(F, G, rule)
print("\nG = canonical + L with int F* L =", f"{dec.nullity_residual:.1e}")
K, checks = duals.k_operator_from_dual(F, G, rule)
print(f"|K| = {K.norm():.4f} <= {checks.norm_bound:.4f}; "
      f"max |T_F K f| / |f| = {checks.synthesis_residual:.1e}")
