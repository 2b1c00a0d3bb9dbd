"""Sum-of-squares certificates through Gram spectrahedra.

A form f of degree 2d is a sum of r squares exactly when some PSD matrix X
of rank at most r satisfies f = b^T X b, with b the monomials of degree d.
The constraint is affine in X, so it is a rank-constrained SDP over the
pencil of Gram matrices of f.
"""

import logging
from itertools import combinations_with_replacement

from .errors import ExactSDPError, PreconditionError
from .exactpoly import ONE, QQ, ZERO, MultiPoly, VariableSpace, fmt_rational, poly_from_terms, poly_to_terms
from .lagrange import CostForm
from .linalg import rref
from .pencil import Pencil, classify_rational_matrix
from .solver import SDPInstance, solve_sdp

log = logging.getLogger(__name__)


class HomogeneousInput:
    """A nonzero form of even degree 2d in k variables.

    Inhomogeneous input is homogenized with a fresh last variable; the
    flag ``homogenized`` records it.
    """

    def __init__(self, f, homogenize=True):
        if f.is_zero():
            raise PreconditionError("the zero polynomial has no Gram matrices")
        degrees = {sum(e) for e in f.terms}
        self.homogenized = False
        if len(degrees) > 1:
            if not homogenize:
                raise PreconditionError("polynomial is not homogeneous")
            f = homogenize_poly(f)
            self.homogenized = True
            degrees = {sum(e) for e in f.terms}
        (deg,) = degrees
        if deg % 2:
            raise PreconditionError(f"degree {deg} is odd; a sum of squares has even degree")
        self.f = f
        self.k = len(f.space)
        self.d = deg // 2

    @classmethod
    def from_json(cls, data):
        if isinstance(data, list):
            data = {"terms": data}
        terms = data["terms"]
        if not terms:
            raise PreconditionError("empty term list")
        k = len(terms[0]["exps"])
        names = data.get("variables") or [f"u{i + 1}" for i in range(k)]
        return cls(poly_from_terms(VariableSpace.of(*names, block="u"), terms))

    def to_json(self):
        return {"variables": list(self.f.space.names), "terms": poly_to_terms(self.f)}


def homogenize_poly(f, name="u0"):
    """Homogenize f with a fresh variable appended last."""
    names = f.space.names
    while name in names:
        name += "_"
    space = VariableSpace.of(*names, name, block="u")
    top = f.total_degree()
    return MultiPoly(space, {e + (top - sum(e),): c for e, c in f.terms.items()})


def monomial_basis(k, d):
    """Exponent vectors of degree d in k variables, u1^d first."""
    out = []
    for combo in combinations_with_replacement(range(k), d):
        e = [0] * k
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    out.sort(reverse=True)
    return out


class GramPencil:
    """The affine space of Gram matrices of f as a pencil A(x).

    ``basis`` holds exponent vectors; ``free`` lists the Gram entries (i, j)
    that serve as coordinates: A(x)[i][j] == x_k for free[k] == (i, j).
    """

    def __init__(self, form, basis, pencil, free):
        self.form = form
        self.basis = basis
        self.pencil = pencil
        self.free = free

    @property
    def size(self):
        return len(self.basis)

    @property
    def n(self):
        return self.pencil.n

    def gram(self, x):
        return self.pencil.evaluate(x)

    def basis_polys(self):
        space = self.form.f.space
        return [MultiPoly(space, {e: ONE}) for e in self.basis]

    def quadratic_form(self, gram):
        """b^T G b as a polynomial."""
        space = self.form.f.space
        terms = {}
        for i, ei in enumerate(self.basis):
            for j, ej in enumerate(self.basis):
                if gram[i][j]:
                    e = tuple(a + b for a, b in zip(ei, ej))
                    terms[e] = terms.get(e, ZERO) + gram[i][j]
        return MultiPoly(space, terms)

    def __repr__(self):
        return f"GramPencil(M={self.size}, n={self.n})"


def build_gram_pencil(form):
    """Exact Gram pencil of a HomogeneousInput (or MultiPoly).

    Coefficient matching gives one equation per monomial of degree 2d.
    Unknowns are ordered so that elimination solves for the diagonal entry
    of each monomial when there is one, and for the first entry otherwise;
    the remaining entries become the pencil coordinates.
    """
    if isinstance(form, MultiPoly):
        form = HomogeneousInput(form)
    basis = monomial_basis(form.k, form.d)
    size = len(basis)
    entries = [(i, j) for i in range(size) for j in range(i, size)]
    groups = {}
    for i, j in entries:
        e = tuple(a + b for a, b in zip(basis[i], basis[j]))
        groups.setdefault(e, []).append((i, j))
    for e in form.f.terms:
        if e not in groups:
            raise PreconditionError(f"monomial {e} is not a product of two basis monomials")

    preferred = []
    for e, pairs in groups.items():
        diag = [ij for ij in pairs if ij[0] == ij[1]]
        preferred.append(diag[0] if diag else pairs[0])
    pref = set(preferred)
    order = sorted(preferred) + [ij for ij in entries if ij not in pref]
    col = {ij: c for c, ij in enumerate(order)}

    rows = []
    for e, pairs in groups.items():
        row = [ZERO] * (len(order) + 1)
        for i, j in pairs:
            row[col[(i, j)]] = ONE if i == j else QQ(2)
        row[-1] = form.f.terms.get(e, ZERO)
        rows.append(row)
    red, pivots = rref(rows)
    if len(order) in pivots:
        raise ExactSDPError("coefficient matching system is inconsistent")
    free_cols = [c for c in range(len(order)) if c not in pivots]
    free = sorted(order[c] for c in free_cols)
    free_cols = [col[ij] for ij in free]

    def matrix(values):
        a = [[ZERO] * size for _ in range(size)]
        for c, v in values.items():
            i, j = order[c]
            a[i][j] = a[j][i] = v
        return a

    base = {}
    for r, pc in enumerate(pivots):
        base[pc] = red[r][-1]
    mats = [matrix(base)]
    for fc in free_cols:
        vals = {fc: ONE}
        for r, pc in enumerate(pivots):
            if red[r][fc]:
                vals[pc] = -red[r][fc]
        mats.append(matrix(vals))
    return GramPencil(form, basis, Pencil(mats), free)


def _weighted_squares_poly(terms, space):
    acc = MultiPoly(space, {})
    for d, g in terms:
        acc = acc + g * g * d
    return acc


def extract_rational_decomposition(gram, basis, space=None):
    """Weighted squares [(d_i, g_i)] with sum d_i g_i^2 == b^T G b, d_i > 0.

    ``gram`` must be a rational PSD matrix; ``basis`` is a list of exponent
    vectors or of MultiPolys.  LDL^T with symmetric pivoting: each step
    takes the largest remaining diagonal entry as pivot.
    """
    g = [[QQ(v) for v in row] for row in gram]
    size = len(g)
    if len(basis) != size:
        raise PreconditionError(f"basis has {len(basis)} elements for a {size}x{size} matrix")
    if any(g[i][j] != g[j][i] for i in range(size) for j in range(i)):
        raise PreconditionError("Gram matrix is not symmetric")
    if basis and isinstance(basis[0], MultiPoly):
        polys = list(basis)
        space = polys[0].space
    else:
        if space is None:
            space = VariableSpace.of(*(f"u{i + 1}" for i in range(len(basis[0]))), block="u")
        polys = [MultiPoly(space, {tuple(e): ONE}) for e in basis]
    is_psd, rank = classify_rational_matrix(g) if size else (True, 0)
    if not is_psd:
        raise PreconditionError("Gram matrix is not positive semidefinite")

    work = [row[:] for row in g]
    remaining = list(range(size))
    out = []
    while remaining:
        piv = max(remaining, key=lambda i: work[i][i])
        d = work[piv][piv]
        if d <= 0:
            break
        v = [work[piv][j] / d for j in range(size)]
        for i in remaining:
            for j in remaining:
                work[i][j] -= d * v[i] * v[j]
        remaining.remove(piv)
        poly = MultiPoly(space, {})
        for c, b in zip(v, polys):
            if c:
                poly = poly + b * c
        out.append((d, poly))
    if len(out) != rank:
        raise PreconditionError(f"factorization has length {len(out)}, rank is {rank}")
    target = MultiPoly(space, {})
    for i in range(size):
        for j in range(size):
            if g[i][j]:
                target = target + polys[i] * polys[j] * g[i][j]
    if _weighted_squares_poly(out, space) != target:
        raise AssertionError("weighted squares do not reproduce the Gram form")
    return out


class SOSCertificate:
    """Outcome of certify_sos_length: feasible Gram points and decompositions."""

    def __init__(self, form, gram, r, report, decompositions, notes):
        self.form = form
        self.gram_pencil = gram
        self.r = r
        self.report = report
        self.decompositions = decompositions
        self.notes = notes

    @property
    def feasible(self):
        return bool(self.points)

    @property
    def points(self):
        if self.report is None:
            return []
        return self.report.feasible

    def ranks(self):
        return sorted({c.rank for c in self.points})

    def to_json(self, digits=20):
        out = {
            "polynomial": self.form.to_json(),
            "r": self.r,
            "feasible": self.feasible,
            "gram_size": self.gram_pencil.size,
            "basis": [list(e) for e in self.gram_pencil.basis],
            "pencil": self.gram_pencil.pencil.to_json(),
            "notes": list(self.notes),
            "decompositions": [
                {"candidate": idx, "squares": [
                    {"weight": fmt_rational(d), "poly": poly_to_terms(g)} for d, g in dec]}
                for idx, dec in self.decompositions
            ],
        }
        if self.report is not None:
            out["report"] = self.report.to_json(digits)
        return out

    def __repr__(self):
        return f"SOSCertificate(r={self.r}, feasible={self.feasible}, ranks={self.ranks()})"


def certify_sos_length(form, r, seed=0, budget=None, jobs=1, check_regularity=True):
    """Decide whether ``form`` is a sum of at most r squares.

    Runs the exact solver on the Gram pencil with zero cost, so every
    feasible point found is a witness.  Rational Gram points are factored
    into weighted squares; algebraic ones are reported in parametrized form.
    """
    if r < 1:
        raise PreconditionError("r must be at least 1")
    if isinstance(form, MultiPoly):
        form = HomogeneousInput(form)
    gram = build_gram_pencil(form)
    notes = []
    if form.homogenized:
        notes.append(f"input homogenized with variable {form.f.space.names[-1]}")
    basis_polys = gram.basis_polys()
    if gram.n == 0:
        mat = gram.pencil.matrices[0]
        is_psd, rank = classify_rational_matrix(mat)
        notes.append("the Gram matrix is unique")
        decs = []
        if is_psd and rank <= r:
            decs.append((0, extract_rational_decomposition(mat, basis_polys)))
        return _UniqueGram(form, gram, r, is_psd, rank, decs, notes)
    instance = SDPInstance(gram.pencil, CostForm([ZERO] * gram.n), r)
    report = solve_sdp(instance, seed=seed, budget=budget, jobs=jobs,
                       check_regularity=check_regularity)
    decs = []
    for idx, c in enumerate(report.candidates):
        if c.feasible and c.rational is not None:
            decs.append((idx, extract_rational_decomposition(gram.gram(c.rational), basis_polys)))
    if any(c.feasible and c.rational is None for c in report.candidates):
        notes.append("algebraic Gram points are given in parametrized form only")
    return SOSCertificate(form, gram, r, report, decs, notes)


class _UniqueGram(SOSCertificate):
    # no free coordinates: the single Gram matrix decides everything

    def __init__(self, form, gram, r, is_psd, rank, decs, notes):
        super().__init__(form, gram, r, None, decs, notes)
        self.is_psd = is_psd
        self.rank = rank

    @property
    def feasible(self):
        return self.is_psd and self.rank <= self.r

    @property
    def points(self):
        return [()] if self.feasible else []

    def ranks(self):
        return [self.rank] if self.feasible else []

    def to_json(self, digits=20):
        out = super().to_json(digits)
        out["unique_gram"] = {"is_psd": self.is_psd, "rank": self.rank}
        return out


__all__ = [
    "HomogeneousInput", "GramPencil", "SOSCertificate", "build_gram_pencil",
    "certify_sos_length", "extract_rational_decomposition", "homogenize_poly",
    "monomial_basis",
]
