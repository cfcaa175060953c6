"""Building frames and duals from sums under operators."""

import numpy as np

from cstarframes import frames, golden, sums
from cstarframes.frames import operator_inverse
from cstarframes.module import ModuleOperator

F, G, rule = golden.example_frame(), golden.example_dual(), golden.example_rule()
d = F.descriptor
can = frames.canonical_dual(F, rule)
rng = np.random.default_rng(3)

# H = F X1 + G X2 is a frame with lower bound at least 2 when X1 X2^* = I.
X1 = ModuleOperator.random(d, 1, rng) + 3 * ModuleOperator.identity(d)
X2 = operator_inverse(X1).H
H, cert = sums.operator_sum_frame(F, G, X1, X2, rule)
print("sum frame: guaranteed", tuple(round(b, 4) for b in cert.guaranteed),
      "optimal", tuple(round(b, 4) for b in cert.optimal))

# G X1 + K X2 is a dual exactly when X1 + X2 = I.
print("\n  |X1 + X2 - I|   dual residual")
for shift in (0.0, 0.1, 1.0):
    Y1 = ModuleOperator.random(d, 1, rng)
    Y2 = ModuleOperator.identity(d) - Y1 + shift * ModuleOperator.identity(d)
    res = sums.operator_sum_dual(F, G, can, Y1, Y2, rule)
    print(f"  {res.iff_residual:12.3e}   {res.certificate.residual_norm:.3e}")

aff = sums.affine_sum_dual(F, G, can, 2.0, -1.0, rule)
print("\n2 G - canonical is a dual:", frames.is_dual_pair(F, aff, rule).holds)

u = d.random_unitary(rng)
rep = sums.scaled_map(u, F, rule, samples=0)
print(f"unitary scaling changes Q by {rep.unitary_residual:.1e}")
