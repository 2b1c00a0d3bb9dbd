"""
Solving a random rank-constrained SDP
=====================================

A 3x3 symmetric pencil in three unknowns, a linear cost, and the
constraint rank A(x) <= 2.
"""

import random

from exactsdp import Pencil, SDPInstance, degree_bound, solve_sdp

# integer entries in [-9, 9], fixed seed so the output is reproducible
pencil = Pencil.random(3, 3, random.Random(7))
for k, mat in enumerate(pencil.matrices):
    print(f"A{k} =", [[str(v) for v in row] for row in mat])

# minimize 2 x1 - x2 + 3 x3 subject to A(x) PSD and rank A(x) <= 2
instance = SDPInstance(pencil, [2, -1, 3], r=2)
report = solve_sdp(instance, seed=1)

# each rank stratum p contributes a finite set of critical points;
# the degree of its parametrization never exceeds the theta bound
table, total = degree_bound(3, 3, 2)
for p, degree in report.stratum_degrees().items():
    print(f"p = {p}: {degree} points (bound {table[p]})")
print("all strata:", report.parametrization.degree, "points, bound", total)

# real candidates are classified exactly: PSD or not, and the rank of A(x)
for c in report.candidates:
    coords = c.point.coords_decimal(12)
    print("psd" if c.is_psd else "   ", "rank", c.rank, coords)

# the minimizers are the feasible candidates with the smallest cost
best = report.minimizers[0]
print("minimum", best.objective.decimal(20), "at", best.point.coords_decimal(20))
