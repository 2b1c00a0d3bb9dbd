"""
How many squares does a binary sextic need?
===========================================

f = x^6 - 2x^5y + 5x^4y^2 - 4x^3y^3 + 5x^2y^4 - 2xy^5 + y^6 is positive,
so it is a sum of squares.  Its Gram matrices form a spectrahedron, and
the smallest rank of a PSD Gram matrix is the shortest decomposition.
"""

from exactsdp import (
    VariableSpace, build_gram_pencil, certify_sos_length, poly_from_terms,
)

space = VariableSpace.of("u1", "u2", block="u")
terms = [{"coeff": c, "exps": e} for c, e in [
    ("1", [6, 0]), ("-2", [5, 1]), ("5", [4, 2]), ("-4", [3, 3]),
    ("5", [2, 4]), ("-2", [1, 5]), ("1", [0, 6])]]
f = poly_from_terms(space, terms)

# Gram matrices in the basis u1^3, u1^2 u2, u1 u2^2, u2^3: an affine
# family with three free entries
gram = build_gram_pencil(f)
print(gram, "free entries", gram.free)
for row in gram.pencil.matrices[0]:
    print([str(v) for v in row])

# a single square is impossible
print(certify_sos_length(f, 1))

# two squares suffice; rational Gram points give exact decompositions
cert = certify_sos_length(f, 2)
print(cert)
for c in cert.points:
    print("rank", c.rank, c.point.coords_decimal(20))
for _, squares in cert.decompositions:
    print(" + ".join(f"{w}*({g.to_text()})^2" for w, g in squares))
