"""Block algebras: central elements and unique duals.

In M_n(C) the centre is just the scalars, so central combinations of duals
only become interesting for algebras with several blocks.
"""

import numpy as np

from cstarframes import duals, frames, sums
from cstarframes.algebra import AlgebraDescriptor, is_central
from cstarframes.measure import Discrete, FrameMap, Interval, build_rule
from cstarframes.module import ModuleElement

rng = np.random.default_rng(11)
desc = AlgebraDescriptor((1, 1))
F = FrameMap.random_polynomial(desc, 1, 2, rng)
rule = build_rule(Interval(0, 1), 6)
can = frames.canonical_dual(F, rule)
family = duals.null_bessel_family(F, 2, rule)
K = can + duals.combine(family, rng.standard_normal(len(family)))

a1 = desc.from_dense(np.diag([0.25, 3.0]))
a2 = desc.identity() - a1
print("a1 central:", is_central(a1), "| a1 + a2 = 1")
out = sums.central_sum_dual(F, can, K, a1, a2, rule)
print("a1 G + a2 K residual:", f"{frames.is_dual_pair(F, out, rule).residual_norm:.1e}")

rep = sums.scaled_map(a1, F, rule)
print("central scaling residuals:", {k: f"{v:.1e}" for k, v in rep.central_residuals.items()})

# On a finite measure space the analysis operator can be onto; then the dual
# is unique.
print("\nRiesz-type diagnostic")
one_atom = build_rule(Discrete((0.0,), (1.0,)), 0)
f = ModuleElement.from_dense(desc, 1, np.diag([2.0, -1.0]))
for label, G_, r in [("one atom", FrameMap.constant(f), one_atom),
                     ("two atoms", FrameMap.constant(f), build_rule(Discrete((0.0, 1.0), (1.0, 1.0)), 0)),
                     ("interval", F, rule)]:
    diag = frames.riesz_type_diagnostic(G_, r)
    print(f"  {label:9s} {diag.verdict:15s} rank {diag.rank} of {diag.codomain_dim}")
