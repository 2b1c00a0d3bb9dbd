"""
Rank-two Gram matrices of a ternary quartic
===========================================

A quartic form in three variables has 6x6 Gram matrices.  For this one
the set of rank-2 Gram matrices is finite, and its points lie over a
cubic number field.
"""

from exactsdp import VariableSpace, certify_sos_length, poly_from_terms
from exactsdp.univar import AlgebraicNumber

space = VariableSpace.of("u1", "u2", "u3", block="u")
terms = [{"coeff": c, "exps": e} for c, e in [
    ("1", [4, 0, 0]), ("1", [1, 3, 0]), ("1", [0, 4, 0]), ("-3", [2, 1, 1]),
    ("-4", [1, 2, 1]), ("2", [2, 0, 2]), ("1", [1, 0, 3]), ("1", [0, 1, 3]),
    ("1", [0, 0, 4])]]
f = poly_from_terms(space, terms)

cert = certify_sos_length(f, 2)
print(cert, "Gram pencil", cert.gram_pencil)

# every rank-2 point is a root of the same cubic; one root gives an
# indefinite matrix, the other two are PSD
rp = cert.report.parametrization
print("q =", rp.q.to_text())
for c in cert.report.candidates:
    print("psd" if c.is_psd else "   ", "rank", c.rank, c.point.coords_decimal(15))

# the cubic field has three real embeddings
print([r.to_decimal(15) for r in AlgebraicNumber.roots_of(rp.q)])
