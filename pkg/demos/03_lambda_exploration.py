"""
Searching for the lower-bound constant lambda
=============================================

||A.B|| >= lambda ||A|| ||B|| holds with some positive lambda that has no
known formula.  In one variable every matrix is 1 x 1 and lambda is a
binomial power; beyond that only numerical upper estimates are available.
"""

import math

from odotseries.extremal import ExtremalProblem, lambda_estimate, lambda_scalar_closed_form

print("one variable, (p, p', q, q') = (0, 1, 0, 1)")
for rho in (1, 1.5, 2, 3, math.inf):
    res = lambda_estimate(ExtremalProblem(1, 1, 0, 1, 0, 1, rho=rho, restarts=8, iterations=400))
    print(f"  rho={rho}: estimate {res.value:.8f}  closed form {lambda_scalar_closed_form(1, 1, rho):.8f}")

print("two variables, rho = 2")
for dims in [(1, 0, 1, 0), (1, 1, 1, 1), (2, 0, 1, 1)]:
    res = lambda_estimate(ExtremalProblem(2, 2, *dims, rho=2, restarts=16, iterations=800))
    spread = max(res.trace) - min(res.trace)
    print(f"  {dims}: {res.value:.8f}  (restart spread {spread:.2e})")

# Over a complex field both spheres are searched and reported separately.
res = lambda_estimate(ExtremalProblem(2, 1, 1, 0, 1, 0, rho=2, field="complex", restarts=8, iterations=800))
print("complex field:", res.per_field)
