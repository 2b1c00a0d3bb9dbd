"""Linear matrix pencils, incidence systems and exact PSD/rank classification."""

import logging
from itertools import combinations
from math import comb, lcm

from gmpy2 import mpq, mpz

from .errors import DegenerateSupportError, FieldError, SizeError
from .exactpoly import ONE, QQ, ZERO, VariableSpace, fmt_rational, jacobian, minors
from .groebner import Ideal
from .linalg import charpoly
from .univar import (
    UniPoly, algebraic_value, coprime, interval_eval, invmod, poly_gcd, pseudo_division,
    rational_to_decimal, sign_at, sign_near, zmul,
)

log = logging.getLogger(__name__)


def _sign(v):
    return (v > 0) - (v < 0)


class Pencil:
    """Symmetric affine matrix map A(x) = A_0 + x_1 A_1 + ... + x_n A_n over Q."""

    def __init__(self, matrices):
        mats = tuple(tuple(tuple(QQ(v) for v in row) for row in a) for a in matrices)
        if len(mats) < 1:
            raise ValueError("a pencil needs at least the constant matrix A_0")
        m = len(mats[0])
        for k, a in enumerate(mats):
            if len(a) != m or any(len(row) != m for row in a):
                raise SizeError(f"matrix A_{k} is not {m}x{m}")
            for i in range(m):
                for j in range(i):
                    if a[i][j] != a[j][i]:
                        raise ValueError(f"matrix A_{k} is not symmetric at ({i + 1},{j + 1})")
        self.matrices = mats
        self.m = m
        self.n = len(mats) - 1

    def __eq__(self, other):
        return isinstance(other, Pencil) and self.matrices == other.matrices

    def __hash__(self):
        return hash(self.matrices)

    def __repr__(self):
        return f"Pencil(m={self.m}, n={self.n})"

    @classmethod
    def random(cls, m, n, rng, bound=9):
        """Symmetric integer matrices with entries uniform in [-bound, bound]."""
        mats = []
        for _ in range(n + 1):
            a = [[0] * m for _ in range(m)]
            for i in range(m):
                for j in range(i + 1):
                    a[i][j] = a[j][i] = rng.randint(-bound, bound)
            mats.append(a)
        return cls(mats)

    @classmethod
    def from_json(cls, data):
        p = cls(data["matrices"])
        if "m" in data and data["m"] != p.m:
            raise SizeError(f"declared m={data['m']} but matrices are {p.m}x{p.m}")
        if "n" in data and data["n"] != p.n:
            raise SizeError(f"declared n={data['n']} but {p.n + 1} matrices were given")
        return p

    def to_json(self):
        return {
            "m": self.m,
            "n": self.n,
            "matrices": [[[fmt_rational(v) for v in row] for row in a] for a in self.matrices],
        }

    def x_names(self):
        return tuple(f"x{i + 1}" for i in range(self.n))

    def evaluate(self, point):
        """A(point) for rational coordinates, as a list of rows."""
        if len(point) != self.n:
            raise SizeError(f"expected {self.n} coordinates, got {len(point)}")
        vals = [QQ(v) for v in point]
        out = [list(row) for row in self.matrices[0]]
        for v, a in zip(vals, self.matrices[1:]):
            if not v:
                continue
            for i in range(self.m):
                for j in range(self.m):
                    if a[i][j]:
                        out[i][j] += v * a[i][j]
        return out

    def poly_matrix(self, space):
        """Entries of A(x) as polynomials in the x-block of ``space``."""
        xs = space.gens("x")
        rows = []
        for i in range(self.m):
            row = []
            for j in range(self.m):
                e = space.const(self.matrices[0][i][j])
                for v, a in zip(xs, self.matrices[1:]):
                    if a[i][j]:
                        e = e + v * a[i][j]
                row.append(e)
            rows.append(row)
        return rows

    def change_coordinates(self, minv):
        """Pencil in new coordinates x' with x = minv . x'.

        A'_j = sum_i minv[i][j] A_i, so that A'(x') = A(minv x').
        """
        n = self.n
        new = [self.matrices[0]]
        for j in range(n):
            a = [[ZERO] * self.m for _ in range(self.m)]
            for i in range(n):
                c = minv[i][j]
                if not c:
                    continue
                for r in range(self.m):
                    for s in range(self.m):
                        a[r][s] += c * self.matrices[i + 1][r][s]
            new.append(a)
        return Pencil(new)


class KernelSupport:
    """Rows iota (1-based, sorted) of the kernel matrix Y pinned to the identity."""

    __slots__ = ("m", "p", "iota")

    def __init__(self, m, p, iota):
        iota = tuple(sorted(int(i) for i in iota))
        if not 0 <= p <= m:
            raise SizeError(f"rank p={p} outside 0..{m}")
        if len(iota) != m - p or len(set(iota)) != len(iota):
            raise SizeError(f"support {iota} must have {m - p} distinct rows")
        if iota and (iota[0] < 1 or iota[-1] > m):
            raise SizeError(f"support {iota} not inside 1..{m}")
        self.m, self.p, self.iota = m, p, iota

    def __eq__(self, other):
        return isinstance(other, KernelSupport) and (self.m, self.p, self.iota) == (
            other.m, other.p, other.iota)

    def __hash__(self):
        return hash((self.m, self.p, self.iota))

    def __repr__(self):
        return f"KernelSupport(p={self.p}, iota={list(self.iota)})"

    @property
    def free_rows(self):
        return tuple(i for i in range(1, self.m + 1) if i not in self.iota)


def supports(m, p):
    """All kernel supports for rank p, in lexicographic order of iota."""
    return [KernelSupport(m, p, c) for c in combinations(range(1, m + 1), m - p)]


def full_generator_count(m, p):
    return m * (m - p) + comb(m - p + 1, 2)


def reduced_generator_count(m, p):
    return (m - p) * (m + p + 1) // 2


class IncidenceSystem:
    """Equations of V_{p,iota}: selected entries of A(x) Y(y) (and Y_iota - Id when unsubstituted).

    ``entries`` labels each product generator by its (row, column), 1-based.
    """

    def __init__(self, pencil, support, space, generators, entries, substituted, product):
        self.pencil = pencil
        self.support = support
        self.space = space
        self.generators = list(generators)
        self.entries = list(entries)
        self.substituted = substituted
        self._product = product

    @property
    def p(self):
        return self.support.p

    @property
    def iota(self):
        return self.support.iota

    @property
    def expected_codim(self):
        return full_generator_count(self.pencil.m, self.p)

    @property
    def full_count(self):
        return full_generator_count(self.pencil.m, self.p)

    def ideal(self):
        return Ideal(self.generators, self.space)

    def discarded_entries(self):
        """Entries g_{iota_a, b} with a < b of the product, dropped as redundant."""
        iota = self.iota
        out = []
        for a, row in enumerate(iota):
            for b in range(a + 1, len(iota)):
                out.append(((row, b + 1), self._product[row - 1][b]))
        return out

    def __repr__(self):
        kind = "reduced" if self.substituted else "full"
        return f"IncidenceSystem({kind}, p={self.p}, iota={list(self.iota)}, {len(self.generators)} eqs)"


def y_name(i, j):
    return f"y{i}_{j}"


def _incidence(pencil, p, iota, substituted):
    m = pencil.m
    if p == m:
        raise DegenerateSupportError("incidence systems are undefined for p = m")
    if iota is None:
        iota = tuple(range(1, m - p + 1))
    support = KernelSupport(m, p, iota)
    k = m - p
    rows = support.free_rows if substituted else tuple(range(1, m + 1))
    ys = [y_name(i, j) for i in rows for j in range(1, k + 1)]
    space = VariableSpace([("x", pencil.x_names()), ("y", ys)])
    Y = []
    for i in range(1, m + 1):
        if substituted and i in support.iota:
            a = support.iota.index(i)
            Y.append([space.const(1 if j == a else 0) for j in range(k)])
        else:
            Y.append([space.gen(y_name(i, j)) for j in range(1, k + 1)])
    A = pencil.poly_matrix(space)
    product = []
    for i in range(m):
        row = []
        for j in range(k):
            acc = space.zero()
            for s in range(m):
                if not A[i][s].is_zero() and not Y[s][j].is_zero():
                    acc = acc + A[i][s] * Y[s][j]
            row.append(acc)
        product.append(row)
    gens, entries = [], []
    for i in range(1, m + 1):
        if i in support.iota:
            a = support.iota.index(i)
            cols = range(a + 1)
        else:
            cols = range(k)
        for j in cols:
            gens.append(product[i - 1][j])
            entries.append((i, j + 1))
    if not substituted:
        for a, i in enumerate(support.iota):
            for j in range(k):
                gens.append(space.gen(y_name(i, j + 1)) - (1 if j == a else 0))
                entries.append(("Y", i, j + 1))
    return IncidenceSystem(pencil, support, space, gens, entries, substituted, product)


def build_incidence_reduced(pencil, p, iota=None):
    """Incidence equations with Y_iota = Id substituted: c_p equations in (x, y-bar)."""
    return _incidence(pencil, p, iota, True)


def build_incidence_full(pencil, p, iota=None):
    """Incidence equations over all m(m-p) entries of Y, including Y_iota - Id."""
    return _incidence(pencil, p, iota, False)


def _regular_mod(inc, sing, prime, budget):
    from .modular import ModularIdeal
    mid = ModularIdeal(inc.generators, inc.space, prime, budget)
    if mid.is_unit():
        return True
    if sing is None:
        return mid.is_zero_dimensional() and mid.is_radical()
    return ModularIdeal(sing, inc.space, prime, budget).is_unit()


def support_is_regular(pencil, p, iota, budget=None):
    """Regularity of one V_{p,iota}: empty, or smooth of the expected codimension.

    With more equations than unknowns the variety can only be regular if
    it is finite; then smoothness means the ideal is radical.  Otherwise
    the generators together with the maximal minors of their Jacobian must
    have no common zero.  Each test runs modulo primes near 2^30 and the
    answer is the one at least two primes agree on.
    """
    from .modular import primes
    inc = build_incidence_reduced(pencil, p, iota)
    c = len(inc.generators)
    sing = None
    if c <= len(inc.space):
        jac = jacobian(inc.generators, list(inc.space.names))
        sing = list(inc.generators) + [d for d in minors(jac, c) if not d.is_zero()]
    den = 1
    for g in inc.generators:
        for v in g.terms.values():
            den = den * int(v.denominator)
    votes = []
    for prime in primes():
        if den % prime == 0:
            continue
        votes.append(_regular_mod(inc, sing, prime, budget))
        if len(votes) >= 2 and votes.count(votes[-1]) >= 2:
            return votes[-1]


def find_irregular_support(pencil, p, budget=None):
    """First iota (lexicographic) whose incidence variety fails the check, or None."""
    for s in supports(pencil.m, p):
        if not support_is_regular(pencil, p, s.iota, budget):
            return s.iota
    return None


def check_regularity(pencil, p, budget=None):
    """True iff every V_{p,iota} is empty or smooth and equidimensional."""
    if not 0 <= p < pencil.m:
        raise SizeError(f"regularity is checked for 0 <= p < m, got p={p}")
    return find_irregular_support(pencil, p, budget) is None


# -- classification of evaluated matrices -------------------------------

class AlgebraicPoint:
    """A real point encoded by a parametrization at one root t* of q.

    Coordinate i is values[i](t*) / denominator(t*); ``denominator`` is
    None when the values are the coordinates themselves.  The values are
    reduced modulo the defining polynomial of ``root``.
    """

    def __init__(self, root, values, variables=None, denominator=None):
        self.root = root
        q = root.poly
        self.values = tuple(v % q if q.degree > 0 else v for v in values)
        self.denominator = denominator % q if denominator is not None and q.degree > 0 \
            else denominator
        self.variables = tuple(variables) if variables else None

    @property
    def n(self):
        return len(self.values)

    def is_rational(self):
        return self.rational_coords() is not None

    def rational_coords(self):
        if self.root.is_rational_point():
            t0 = self.root.lower
            den = self.denominator(t0) if self.denominator is not None else ONE
            return [v(t0) / den for v in self.values]
        if self.denominator is None and all(v.degree <= 0 for v in self.values):
            return [v.coeffs[0] if v.coeffs else ZERO for v in self.values]
        return None

    def coordinate_polys(self):
        if self.denominator is None:
            return list(self.values)
        inv = invmod(self.denominator, self.root.poly)
        return [(v * inv) % self.root.poly for v in self.values]

    def coordinate(self, i):
        return algebraic_value(self.coordinate_polys()[i], self.root)

    def enclose(self, num, digits=20):
        """Rational interval around num(t*)/denominator(t*).

        The width is at most 10^-(digits+2), relative to the magnitude
        when that exceeds one.
        """
        target = QQ(1) / QQ(10) ** (digits + 2)
        a = self.root
        while True:
            lo, hi = interval_eval(num, a.lower, a.upper)
            if self.denominator is not None:
                dlo, dhi = interval_eval(self.denominator, a.lower, a.upper)
                if dlo <= 0 <= dhi:
                    if a.is_rational_point():
                        raise FieldError("denominator vanishes at the point")
                    a = a.refine((a.upper - a.lower) / 1024)
                    continue
                ends = [x / y for x in (lo, hi) for y in (dlo, dhi)]
                lo, hi = min(ends), max(ends)
            scale = max(abs(lo), abs(hi), ONE)
            if hi - lo <= target * scale or a.is_rational_point():
                return lo, hi
            a = a.refine((a.upper - a.lower) / 1024)

    def enclosures(self, digits=20):
        return [self.enclose(v, digits) for v in self.values]

    def coords_decimal(self, digits=20):
        return [rational_to_decimal((lo + hi) / 2, digits) for lo, hi in self.enclosures(digits)]

    def __repr__(self):
        return f"AlgebraicPoint({self.root!r}, n={self.n})"


def _zadd(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, y in enumerate(b):
        out[i] += y
    return out


class ParametrizedClassifier:
    """PSD flag and rank of A(x) at the points of a parametrization.

    With x_i = w_i(t) / w_0(t) the matrix B(t) = D w_0(t) A(x(t)) has
    integer polynomial entries for a suitable positive integer D.  Its
    characteristic coefficients e_k(B) are computed once, exactly in Z[t],
    and reduced modulo q; at a root t*, sign e_k(A) = sign e_k(B) *
    sign(w_0(t*))^k.
    """

    def __init__(self, pencil, q, values, denominator=None):
        m = pencil.m
        self.m = m
        self.q = q
        w0 = denominator if denominator is not None else UniPoly([1])
        self.w0 = w0
        den = 1
        for poly in [w0] + list(values):
            for c in poly.coeffs:
                den = lcm(den, int(c.denominator))
        for a in pencil.matrices:
            for row in a:
                for c in row:
                    den = lcm(den, int(c.denominator))
        ints = [[int(c * den) for c in v.coeffs] for v in values]
        iw0 = [int(c * den) for c in w0.coeffs]
        # entries: A0_ij * w0 + sum_k A_k,ij * w_k, all scaled by den
        mat = []
        for i in range(m):
            row = []
            for j in range(m):
                acc = [int(pencil.matrices[0][i][j] * den) * c for c in iw0]
                for k, v in enumerate(ints):
                    a = pencil.matrices[k + 1][i][j]
                    if a:
                        acc = _zadd(acc, [int(a * den) * c for c in v])
                row.append(acc)
            mat.append(row)
        # positive multiples of e_k mod q are enough for signs
        qz = [mpz(v) for v in q.integer_coeffs()]
        self.e = [UniPoly._raw([mpq(v) for v in (pseudo_division(c, qz)[1] if q.degree > 0 else c)])
                  for c in _charpoly_z(mat)]

        self._common = {}

    def _sign(self, k, root):
        g = self.e[k]
        if not g:
            return 0
        if root.is_rational_point():
            return sign_at(g, root)
        if k not in self._common:
            self._common[k] = None if coprime(g, self.q) else poly_gcd(g, self.q)
        h = self._common[k]
        # h divides q, so inside an isolating interval of q it changes sign
        # exactly when t* is its root
        if h is not None and h.degree >= 1 and h(root.lower) * h(root.upper) < 0:
            return 0
        return sign_near(g, root)

    def classify(self, root):
        if root.poly != self.q and not root.is_rational_point():
            raise FieldError("the root does not belong to this parametrization")
        s0 = sign_at(self.w0, root)
        signs = [self._sign(k, root) * s0 ** k for k in range(1, self.m + 1)]
        return _signs_to_class(signs)


def _charpoly_z(mat):
    """e_1..e_m (index 1..m; e[0] = 1) of a matrix over Z[t], by Faddeev-LeVerrier."""
    m = len(mat)

    def mul(a, b):
        return [[_sum_polys(zmul(a[i][k], b[k][j]) for k in range(m)) for j in range(m)]
                for i in range(m)]

    e = [[1]] + [[] for _ in range(m)]
    mk = [[[] for _ in range(m)] for _ in range(m)]
    for k in range(1, m + 1):
        am = mul(mat, mk) if k > 1 else [[[] for _ in range(m)] for _ in range(m)]
        c_prev = [(-1) ** (k - 1) * v for v in e[k - 1]]
        for i in range(m):
            am[i][i] = _zadd(am[i][i], c_prev)
        mk = am
        amk = mul(mat, mk)
        tr = _sum_polys(amk[i][i] for i in range(m))
        # charpoly coefficient c_{m-k} = -tr/k and e_k = (-1)^k c_{m-k}
        ck = [-v // k for v in tr]
        e[k] = [(-1) ** k * v for v in ck]
    return e


def _sum_polys(polys):
    acc = []
    for p in polys:
        acc = _zadd(acc, p)
    return acc


def _signs_to_class(signs):
    """(is_psd, rank) from the signs of e_1..e_m."""
    is_psd = all(s >= 0 for s in signs)
    rank = max((k + 1 for k, s in enumerate(signs) if s), default=0)
    return is_psd, rank


def classify_matrix(pencil, point):
    """(is_psd, rank) of A(point) from the signs of its elementary symmetric functions.

    ``point`` is a sequence of rationals or an :class:`AlgebraicPoint`.
    """
    m = pencil.m
    if isinstance(point, AlgebraicPoint):
        if point.n != pencil.n:
            raise SizeError(f"expected {pencil.n} coordinates, got {point.n}")
        rat = point.rational_coords()
        if rat is None:
            return _classify_algebraic(pencil, point)
        point = rat
    elif point and isinstance(point[0], UniPoly):
        raise FieldError("polynomial coordinates need a shared root; pass an AlgebraicPoint")
    mat = pencil.evaluate(point)
    cp = charpoly(mat)
    signs = [_sign(cp[m - k]) * (-1) ** k for k in range(1, m + 1)]
    return _signs_to_class(signs)


def classify_rational_matrix(mat):
    m = len(mat)
    cp = charpoly([[QQ(v) for v in row] for row in mat])
    return _signs_to_class([_sign(cp[m - k]) * (-1) ** k for k in range(1, m + 1)])


def _classify_algebraic(pencil, point):
    clf = ParametrizedClassifier(pencil, point.root.poly, point.values, point.denominator)
    return clf.classify(point.root)


__all__ = [
    "Pencil", "KernelSupport", "IncidenceSystem", "AlgebraicPoint", "supports",
    "build_incidence_reduced", "build_incidence_full", "check_regularity",
    "find_irregular_support", "support_is_regular", "classify_matrix",
    "classify_rational_matrix", "full_generator_count", "reduced_generator_count",
    "ParametrizedClassifier",
]
