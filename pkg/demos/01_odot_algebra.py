"""
The odot product on graded matrices
===================================

Builds a few graded matrices and multiplies them with the odot product.
Powers of a row vector collect every monomial of the point, each weighted
by its multinomial coefficient.
"""

import numpy as np

from odotseries import graded_matrix as gm
from odotseries import multiindex as mi

# Monomials of degree 3 in two variables, in the graded order used everywhere.
print("slice (n=2, p=3):", mi.enumerate_slice(2, 3))

# A point h = (1, 2) as a 1 x 2 row vector.  Its odot powers collect
# multinomial coefficients times monomials.
h = gm.row_vector([1.0, 2.0])
for m in range(4):
    P = gm.odot_power(h, m)
    print(f"h^({m}) =", P.entries.ravel())

# The closed form agrees with the iterated product.
print("closed form h^(3):", gm.h_power_closed(h, 3).entries.ravel())

# The product is commutative and associative even though it mixes degrees.
rng = np.random.default_rng(0)
A = gm.random_graded(rng, 2, 2, 1, 1)
B = gm.random_graded(rng, 2, 2, 2, 0)
C = gm.random_graded(rng, 2, 2, 0, 2)
print("commutes:", gm.allclose(gm.odot(A, B), gm.odot(B, A)))
print("associates:", gm.allclose(gm.odot(gm.odot(A, B), C), gm.odot(A, gm.odot(B, C))))
print("grading of A.B.C:", gm.odot(gm.odot(A, B), C).grading)
