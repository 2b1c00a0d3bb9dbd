"""
Real points of a rational parametrization
=========================================

A finite set of points can be written as x_i = q_i(t) / q_0(t) where t
runs over the roots of q.  The real points come from isolating the real
roots of q; signs at those roots are decided exactly.
"""

from exactsdp import AlgebraicNumber, UniPoly, classify_matrix
from exactsdp.groebner import RationalParametrization
from exactsdp.pencil import AlgebraicPoint, Pencil

# the degree-4 parametrization of rank-2 Gram matrices of the sextic
q = UniPoly([-11, 16, -5, -2, 1])
q0 = UniPoly([187, -1787, 5475, -8058, 6130, -1917, -448, 576, -180, 20])
q1 = UniPoly([374, -3371, 10434, -16087, 13725, -6294, 1070, 284, -156, 20])
q2 = UniPoly([-374, 3138, -9040, 12678, -9040, 2230, 1233, -1116, 330, -36])
q3 = UniPoly([0, -1683, 7148, -12775, 12087, -6130, 1278, 192, -144, 20])
rp = RationalParametrization(q, q0, [q1, q2, q3])

# two of the four roots of q are real
roots = AlgebraicNumber.roots_of(q)
for root in roots:
    print(root.interval.to_strings(), root.to_decimal(20))

# the Gram pencil of the sextic
pencil = Pencil([
    [[1, -1, 0, -2], [-1, 5, 0, 0], [0, 0, 5, -1], [-2, 0, -1, 1]],
    [[0, 0, 1, 0], [0, -2, 0, 0], [1, 0, 0, 0], [0, 0, 0, 0]],
    [[0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]],
    [[0, 0, 0, 0], [0, 0, 0, 1], [0, 0, -2, 0], [0, 1, 0, 0]],
])

# coordinates stay exact elements of Q[t]/(q); classification never rounds
for root in roots:
    point = AlgebraicPoint(root, list(rp.coords), denominator=rp.q0)
    print(point.coords_decimal(20), "(psd, rank) =", classify_matrix(pencil, point))
