"""Lagrange systems for the critical points of a linear cost on incidence varieties.

The compressed form works in coordinates where the cost is the first
variable x'_1: the critical equations then say that the rows of the
Jacobian, minus its x'_1 column, are dependent with weights (z_1, ..., 1).
Every equation is bilinear in two of the three blocks (x, y, z).
"""

from math import comb

from .errors import DegenerateCostError
from .exactpoly import ONE, QQ, ZERO, VariableSpace, fmt_rational, substitute_linear
from .linalg import identity, solve
from .pencil import build_incidence_full, build_incidence_reduced, reduced_generator_count


class CostForm:
    """The linear objective l_c(x) = c^T x."""

    def __init__(self, c):
        self.c = tuple(QQ(v) for v in c)

    def __len__(self):
        return len(self.c)

    def __repr__(self):
        return "CostForm([" + ", ".join(fmt_rational(v) for v in self.c) + "])"

    def __eq__(self, other):
        return isinstance(other, CostForm) and self.c == other.c

    def is_zero(self):
        return not any(self.c)

    def value(self, point):
        return sum((a * QQ(v) for a, v in zip(self.c, point)), ZERO)

    def pivot(self):
        return next(i for i, v in enumerate(self.c) if v)

    def coordinate_change(self):
        """(M, M^{-1}) with first row of M equal to c and the rest unit vectors.

        The unit vector at c's first nonzero position is the one left out,
        so M is invertible; x' = M x makes the cost equal to x'_1.
        """
        if self.is_zero():
            raise DegenerateCostError("the zero cost has no coordinate change")
        n = len(self.c)
        j0 = self.pivot()
        rows = [list(self.c)]
        for j in range(n):
            if j != j0:
                rows.append([ONE if k == j else ZERO for k in range(n)])
        minv = []
        ident = identity(n)
        cols = [solve(rows, [ident[i][k] for i in range(n)]) for k in range(n)]
        minv = [[cols[k][i] for k in range(n)] for i in range(n)]
        return rows, minv


class LagrangeSystem:
    """Polynomial system over blocks x, y (and z) for one (p, iota).

    ``change`` is None or the pair (M, M^{-1}) with x' = M x; the x-block
    of ``space`` then holds the primed coordinates.
    """

    def __init__(self, space, equations, p, iota, form, cost, change=None, incidence=None):
        self.space = space
        self.equations = list(equations)
        self.p = p
        self.iota = tuple(iota)
        self.form = form
        self.cost = cost
        self.change = change
        self.incidence = incidence

    def __repr__(self):
        return (f"LagrangeSystem({self.form}, p={self.p}, iota={list(self.iota)}, "
                f"{len(self.equations)} eqs in {len(self.space)} unknowns)")

    @property
    def drop_blocks(self):
        return [b for b, _ in self.space.blocks if b != "x"]

    def to_original_x(self, poly):
        """Rewrite a polynomial in primed x-coordinates in terms of the original x."""
        if self.change is None:
            return poly
        m, _ = self.change
        xs = poly.space.gens("x")
        names = poly.space.block("x")
        images = {}
        for i, name in enumerate(names):
            img = poly.space.zero()
            for j, a in enumerate(m[i]):
                if a:
                    img = img + xs[j] * a
            images[name] = img
        return substitute_linear(poly, images)

    def to_text(self):
        return "\n".join(e.to_text() for e in self.equations)


def _z_names(k):
    return [f"z{i + 1}" for i in range(k)]


def build_lagrange_full(inc, cost):
    """Critical-point system over all of Y, with one multiplier per incidence equation.

    g = sum_i z_i d f_i/dx + c and h = sum_i z_i d f_i/dy; the cost's own
    multiplier is normalised to 1.
    """
    if not isinstance(cost, CostForm):
        cost = CostForm(cost)
    if cost.is_zero():
        raise DegenerateCostError("Lagrange systems need a nonzero cost vector")
    if inc.substituted:
        inc = build_incidence_full(inc.pencil, inc.p, inc.iota)
    gens = inc.generators
    k = len(gens)
    old = inc.space
    space = VariableSpace(list(old.blocks) + [("z", _z_names(k))])
    lift = _lifter(old, space)
    f = [lift(g) for g in gens]
    zs = space.gens("z")
    eqs = list(f)
    for j, name in enumerate(old.block("x")):
        acc = space.const(cost.c[j])
        for zi, fi in zip(zs, f):
            d = fi.diff(name)
            if d:
                acc = acc + zi * d
        eqs.append(acc)
    for name in old.block("y"):
        acc = space.zero()
        for zi, fi in zip(zs, f):
            d = fi.diff(name)
            if d:
                acc = acc + zi * d
        eqs.append(acc)
    return LagrangeSystem(space, eqs, inc.p, inc.iota, "full", cost, None, inc)


def build_lagrange_compressed(pencil, p, iota, cost):
    """Trilinear critical-point system in coordinates where the cost is x'_1.

    c_p equations in (x', y-bar), n-1 in (y-bar, z-bar) and p(m-p) in
    (x', z-bar), with z-bar = (z_1, ..., z_{c_p-1}, 1).
    """
    if not isinstance(cost, CostForm):
        cost = CostForm(cost)
    if cost.is_zero():
        raise DegenerateCostError("Lagrange systems need a nonzero cost vector")
    n = pencil.n
    m_mat, minv = cost.coordinate_change()
    change = None
    work = pencil
    if m_mat != identity(n):
        change = (m_mat, minv)
        work = pencil.change_coordinates(minv)
    inc = build_incidence_reduced(work, p, iota)
    gens = inc.generators
    cp = len(gens)
    old = inc.space
    blocks = [b for b in old.blocks if b[1]]
    if cp > 1:
        blocks.append(("z", _z_names(cp - 1)))
    space = VariableSpace(blocks)
    lift = _lifter(old, space)
    f = [lift(g) for g in gens]
    zbar = space.gens("z") + [space.const(1)] if cp > 1 else [space.const(1)]
    xnames = old.block("x")
    ynames = old.block("y") if old.has_block("y") else ()
    eqs = list(f)
    for name in list(xnames[1:]) + list(ynames):
        acc = space.zero()
        for zi, fi in zip(zbar, f):
            d = fi.diff(name)
            if d:
                acc = acc + zi * d
        eqs.append(acc)
    return LagrangeSystem(space, eqs, p, inc.iota, "compressed", cost, change, inc)


def _lifter(old, new):
    idx = [new.index(v) for v in old.names]
    size = len(new)

    def lift(poly):
        out = {}
        for e, c in poly.terms.items():
            ne = [0] * size
            for i, k in zip(idx, e):
                ne[i] = k
            out[tuple(ne)] = c
        return type(poly)(new, out)

    return lift


def _binom(a, b):
    if a < 0 or b < 0 or b > a:
        return 0
    return comb(a, b)


def theta_bound(m, n, p):
    """Multilinear Bezout count of the compressed Lagrange system for rank p."""
    if not 0 <= p <= m or n < 1:
        raise ValueError(f"theta needs 0 <= p <= m and n >= 1, got m={m}, n={n}, p={p}")
    cp = reduced_generator_count(m, p)
    py = p * (m - p)
    return sum(_binom(cp, n - k) * _binom(n - 1, k + cp - 1 - py) * _binom(py, k)
               for k in range(n + 1))


def degree_bound(m, n, r):
    """Per-rank theta values and the total bound sum_p C(m, p) theta(m, n, p)."""
    table = {p: theta_bound(m, n, p) for p in range(0, min(r, m) + 1)}
    total = sum(comb(m, p) * t for p, t in table.items())
    return table, total


def bidegree(poly, blocks=("x", "y", "z")):
    space = poly.space
    return tuple(poly.degree_in(b) if space.has_block(b) else 0 for b in blocks)


__all__ = [
    "CostForm", "LagrangeSystem", "build_lagrange_full", "build_lagrange_compressed",
    "theta_bound", "degree_bound", "bidegree",
]
