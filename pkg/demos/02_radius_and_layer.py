"""
Radius of absolute convergence and the indeterminacy layer
==========================================================

The series sum_m (x1 + x2)^m has blocks whose rho-norms grow like 2^(m/rho).
The estimated radius therefore depends on rho, and between the radius and
its layer bound the verdict depends on the direction of the point.
"""

import math

from odotseries import series as se

s = se.from_coefficients(se.geometric_coefficients(2, 20))

for rho in (1, 2, 3, math.inf):
    est = se.radius_estimate(s, rho)
    lo, hi = se.indeterminacy_layer(s, rho)
    print(f"rho={rho}: R_hat={est.R_hat:.6f}  layer=[{lo:.6f}, {hi:.6f}]")

# With rho = 2 points are measured in the Euclidean norm.  Inside the layer
# the axis point is never shown to diverge, the diagonal point of the same
# norm is.
for h in ([0.3, 0.3], [0.9, 0.0], [0.9 / math.sqrt(2)] * 2):
    v = se.converges_at(s, h, 2)
    print(f"h={h}: ||h||_2={v.point_norm:.4f}  {v.status}")

# A sphere beyond the layer: the diagonal point is a divergence witness.
rep = se.layer_witness_scan(s, 2, 1.05, 6, seed=1)
print("beyond layer:", rep.beyond_layer, "diagonal:", rep.diagonal_verdict.status)
print("samples:", [v.status for v in rep.sample_verdicts])
