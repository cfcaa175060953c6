"""The worked 2x2 example, step by step.

A = M_2(C) acting on itself, Omega = [0, 1] with Lebesgue measure and
F(w) = w [[2, 1], [1, 3]].  Run with ``python notebooks/01_example25.py``.
"""

import numpy as np

from cstarframes import duals, frames, golden
from cstarframes.module import LEFT

np.set_printoptions(precision=6, suppress=True)

F, G, rule = golden.example_frame(), golden.example_dual(), golden.example_rule()
print(f"quadrature: {len(rule)} Gauss nodes, exact to degree {rule.degree}")

Q = frames.frame_operator(F, rule)
print("frame operator Q = int F* F:\n", Q.dense.real)
print("optimal bounds:", frames.optimal_frame_bounds(F, rule))
cert = frames.verify_claimed_bounds(F, 0.5, 4.5, rule)
print(f"claimed bounds (1/2, 9/2): {cert.verdict}, margins "
      f"{cert.lower_margin:.4f} / {cert.upper_margin:.4f}")

can = frames.canonical_dual(F, rule)
print("canonical dual slope:\n", can.coefficients[1].dense.real)
print("G is a dual, residual", frames.is_dual_pair(F, G, rule).residual_norm)

# Iterating V -> S^{-1}F + S V - F, with S applied on the left as in the
# displayed matrices.
V1 = duals.dual_sequence_step(F, G, rule, LEFT)
print("V_1 slope:\n", V1.coefficients[1].dense.real)
print("V_1 offset:\n", V1.coefficients[0].dense.real)
for i, V in enumerate(duals.dual_sequence(F, G, 5, rule, LEFT), start=1):
    print(f"  V_{i} residual {frames.is_dual_pair(F, V, rule).residual_norm:.2e}")

checks = golden.run_example25()
print(f"golden checks: {sum(c.passed for c in checks)}/{len(checks)} pass")
assert all(c.passed for c in checks)
