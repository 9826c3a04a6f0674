"""
Operator-norm roots versus rho-norm roots
=========================================

Each block A(m) also defines a symmetric m-linear map on points of unit
conjugate norm.  Its operator norm never exceeds the rho-norm of the block;
whether the two m-th root sequences share a limsup is an open question.
This script only tabulates both.
"""

from odotseries import series as se
from odotseries.extremal import opnorm_root_sequence

s = se.from_coefficients(se.geometric_coefficients(2, 6))
for rho in (1.5, 2, 3):
    print(f"rho={rho}")
    print(f"{'m':>3} {'op root':>12} {'rho root':>12}")
    for m, op, rr in opnorm_root_sequence(s, rho):
        print(f"{m:>3} {op:12.8f} {rr:12.8f}")
