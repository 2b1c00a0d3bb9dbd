"""Exact rational arithmetic and sparse multivariate polynomials.

Coefficients are ``gmpy2.mpq`` values: always in lowest terms with a
positive denominator, and arithmetic never rounds.  A polynomial is a dict
from exponent tuples to nonzero coefficients, tied to a
:class:`VariableSpace` made of named blocks (``x``, ``y``, ``z``, ...).
"""

from fractions import Fraction
from itertools import combinations

from gmpy2 import mpq

from .errors import SizeError

Rational = type(mpq())

ZERO = mpq(0)
ONE = mpq(1)


def QQ(value):
    """Coerce ``value`` (int, str "a/b", Fraction, mpq) to an exact rational."""
    if isinstance(value, Rational):
        return value
    if isinstance(value, int):
        return mpq(value)
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            num, den = text.split("/")
            if int(den) == 0:
                raise ZeroDivisionError(f"zero denominator in {value!r}")
            return mpq(int(num), int(den))
        if any(ch in text for ch in ".eE"):
            return QQ(Fraction(text))
        return mpq(int(text))
    if isinstance(value, float):
        raise TypeError("floating-point coefficients are not supported")
    return mpq(value)


def fmt_rational(value):
    """Canonical string form: "a/b", or "a" when the denominator is 1."""
    value = QQ(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def to_fraction(value):
    value = QQ(value)
    return Fraction(int(value.numerator), int(value.denominator))


class VariableSpace:
    """Ordered, named blocks of variables.

    The first variable is the largest one for lexicographic-type orders.
    """

    __slots__ = ("blocks", "names", "_index")

    def __init__(self, blocks):
        blocks = tuple((str(b), tuple(str(v) for v in vs)) for b, vs in blocks)
        names = tuple(v for _, vs in blocks for v in vs)
        if len(set(names)) != len(names):
            raise ValueError("variable names must be distinct across blocks")
        if len({b for b, _ in blocks}) != len(blocks):
            raise ValueError("block names must be distinct")
        self.blocks = blocks
        self.names = names
        self._index = {v: i for i, v in enumerate(names)}

    @classmethod
    def of(cls, *names, block="v"):
        return cls([(block, names)])

    def __len__(self):
        return len(self.names)

    def __eq__(self, other):
        return isinstance(other, VariableSpace) and self.blocks == other.blocks

    def __hash__(self):
        return hash(self.blocks)

    def __repr__(self):
        inner = ", ".join(f"{b}={list(vs)}" for b, vs in self.blocks)
        return f"VariableSpace({inner})"

    def index(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown variable {name!r} in {self!r}") from None

    def block(self, name):
        for b, vs in self.blocks:
            if b == name:
                return vs
        raise KeyError(f"unknown block {name!r}")

    def has_block(self, name):
        return any(b == name for b, _ in self.blocks)

    def resolve(self, vars_):
        """Variable indices for a block name, a variable name, or a list of names."""
        if isinstance(vars_, str):
            if self.has_block(vars_):
                return tuple(self._index[v] for v in self.block(vars_))
            return (self.index(vars_),)
        out = []
        for v in vars_:
            out.extend(self.resolve(v))
        return tuple(out)

    def gen(self, name):
        e = [0] * len(self.names)
        e[self.index(name)] = 1
        return MultiPoly(self, {tuple(e): ONE})

    def gens(self, block=None):
        names = self.names if block is None else self.block(block)
        return [self.gen(v) for v in names]

    def zero(self):
        return MultiPoly(self, {})

    def const(self, c):
        return MultiPoly(self, {(0,) * len(self.names): QQ(c)})

    def one_exps(self):
        return (0,) * len(self.names)


_BASE_BITS = 20
_BASE = 1 << _BASE_BITS


def _grevlex_key(exps):
    deg = sum(exps)
    if deg >= _BASE:
        raise OverflowError("monomial degree too large for packed order key")
    key = deg
    for e in reversed(exps):
        key = (key << _BASE_BITS) | (_BASE - 1 - e)
    return key


class MonomialOrder:
    """Monomial order producing packed integer sort keys.

    ``kind`` is ``"lex"``, ``"grevlex"`` or ``"block"``.  A block order
    compares the variables listed in ``eliminate`` first (grevlex among
    them), then the remaining ones (grevlex), so that a Groebner basis for
    it contains a basis of the elimination ideal.
    """

    __slots__ = ("kind", "nvars", "eliminate", "_keep")

    def __init__(self, kind, nvars, eliminate=()):
        if kind not in ("lex", "grevlex", "block"):
            raise ValueError(f"unknown monomial order {kind!r}")
        self.kind = kind
        self.nvars = nvars
        self.eliminate = tuple(sorted(eliminate))
        self._keep = tuple(i for i in range(nvars) if i not in set(self.eliminate))

    @classmethod
    def lex(cls, nvars):
        return cls("lex", nvars)

    @classmethod
    def grevlex(cls, nvars):
        return cls("grevlex", nvars)

    @classmethod
    def block(cls, space, drop):
        return cls("block", len(space), space.resolve(drop))

    def __eq__(self, other):
        return (isinstance(other, MonomialOrder) and self.kind == other.kind
                and self.nvars == other.nvars and self.eliminate == other.eliminate)

    def __hash__(self):
        return hash((self.kind, self.nvars, self.eliminate))

    def __repr__(self):
        if self.kind == "block":
            return f"MonomialOrder(block, eliminate={self.eliminate})"
        return f"MonomialOrder({self.kind})"

    def key(self, exps):
        if self.kind == "grevlex":
            return _grevlex_key(exps)
        if self.kind == "lex":
            key = 0
            for e in exps:
                if e >= _BASE:
                    raise OverflowError("exponent too large for packed order key")
                key = (key << _BASE_BITS) | e
            return key
        hi = _grevlex_key(tuple(exps[i] for i in self.eliminate))
        lo = _grevlex_key(tuple(exps[i] for i in self._keep))
        return (hi << (_BASE_BITS * (len(self._keep) + 1))) | lo


def _scalar(value):
    if isinstance(value, Rational):
        return value
    if isinstance(value, (int, Fraction)):
        return QQ(value)
    return None


class MultiPoly:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("space", "terms")

    def __init__(self, space, terms):
        self.space = space
        self.terms = {e: c for e, c in terms.items() if c}

    @classmethod
    def _raw(cls, space, terms):
        # terms already free of zeros
        p = object.__new__(cls)
        p.space = space
        p.terms = terms
        return p

    # -- basic queries -------------------------------------------------
    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self):
        return all(not any(e) for e in self.terms)

    def constant(self):
        return self.terms.get(self.space.one_exps(), ZERO)

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, vars_):
        idx = self.space.resolve(vars_)
        return max((sum(e[i] for i in idx) for e in self.terms), default=-1)

    def variables(self):
        used = set()
        for e in self.terms:
            used.update(i for i, k in enumerate(e) if k)
        return tuple(self.space.names[i] for i in sorted(used))

    def leading_term(self, order):
        e = max(self.terms, key=order.key)
        return e, self.terms[e]

    def sorted_terms(self, order):
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def monic(self, order):
        _, c = self.leading_term(order)
        return self * (1 / c)

    # -- arithmetic ----------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            if other.space != self.space:
                raise ValueError("polynomials live in different variable spaces")
            return other
        s = _scalar(other)
        if s is None:
            return NotImplemented
        return self.space.const(s)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, ZERO) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return MultiPoly._raw(self.space, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.space, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        s = _scalar(other)
        if s is not None:
            if not s:
                return self.space.zero()
            return MultiPoly._raw(self.space, {e: c * s for e, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, ZERO) + c1 * c2
        return MultiPoly(self.space, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        s = _scalar(other)
        if s is None:
            return NotImplemented
        return self * (1 / s)

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative power")
        result = self.space.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.space == other.space and self.terms == other.terms
        s = _scalar(other)
        if s is None:
            return NotImplemented
        return self.terms == self.space.const(s).terms

    def __hash__(self):
        return hash((self.space, frozenset(self.terms.items())))

    # -- calculus and substitution -------------------------------------
    def diff(self, var):
        i = self.space.index(var) if isinstance(var, str) else var
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                e2 = e[:i] + (k - 1,) + e[i + 1:]
                out[e2] = c * k
        return MultiPoly._raw(self.space, out)

    def subs(self, assignment):
        return evaluate(self, assignment)

    def to_text(self, order=None):
        """Canonical text form, terms sorted by ``order`` (grevlex by default)."""
        if not self.terms:
            return "0"
        order = order or MonomialOrder.grevlex(len(self.space))
        parts = []
        for e, c in self.sorted_terms(order):
            mono = "*".join(
                name if k == 1 else f"{name}^{k}"
                for name, k in zip(self.space.names, e) if k
            )
            coeff = fmt_rational(c)
            if mono:
                parts.append(mono if c == 1 else (f"-{mono}" if c == -1 else f"{coeff}*{mono}"))
            else:
                parts.append(coeff)
        text = parts[0]
        for part in parts[1:]:
            text += f" - {part[1:]}" if part.startswith("-") else f" + {part}"
        return text

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"MultiPoly({self.to_text()})"


def evaluate(p, assignment):
    """Substitute rationals for some variables; unassigned variables stay symbolic."""
    space = p.space
    vals = {space.index(k): QQ(v) for k, v in assignment.items()}
    out = {}
    for e, c in p.terms.items():
        coeff = c
        e2 = list(e)
        for i, v in vals.items():
            if e[i]:
                coeff *= v ** e[i]
                e2[i] = 0
        if coeff:
            e2 = tuple(e2)
            out[e2] = out.get(e2, ZERO) + coeff
    return MultiPoly(space, out)


def substitute_linear(p, images):
    """Compose ``p`` with polynomial images for some variables: ``{name: MultiPoly}``."""
    space = p.space
    imgs = {space.index(k): v for k, v in images.items()}
    result = space.zero()
    for e, c in p.terms.items():
        rest = list(e)
        term = None
        for i, img in imgs.items():
            if e[i]:
                rest[i] = 0
                factor = img ** e[i]
                term = factor if term is None else term * factor
        mono = MultiPoly._raw(space, {tuple(rest): c})
        result = result + (mono if term is None else mono * term)
    return result


class PolyMatrix:
    """Rectangular matrix of polynomials over one VariableSpace."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        rows = tuple(tuple(r) for r in rows)
        if rows and len({len(r) for r in rows}) != 1:
            raise ValueError("PolyMatrix rows must have equal length")
        spaces = {p.space for r in rows for p in r}
        if len(spaces) > 1:
            raise ValueError("PolyMatrix entries must share a VariableSpace")
        self.rows = rows

    @property
    def shape(self):
        return (len(self.rows), len(self.rows[0]) if self.rows else 0)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return isinstance(other, PolyMatrix) and self.rows == other.rows

    def __repr__(self):
        return "PolyMatrix([" + ", ".join(
            "[" + ", ".join(p.to_text() for p in r) + "]" for r in self.rows) + "])"

    def submatrix(self, rows, cols):
        return PolyMatrix([[self.rows[i][j] for j in cols] for i in rows])

    def det(self):
        r, c = self.shape
        if r != c:
            raise SizeError("determinant of a non-square matrix")
        return _det(self.rows, range(r), range(c))


def _det(rows, ridx, cidx):
    ridx, cidx = tuple(ridx), tuple(cidx)
    k = len(ridx)
    if k == 0:
        raise SizeError("empty determinant")
    space = rows[ridx[0]][cidx[0]].space
    cache = {}

    # Laplace expansion along rows, memoised on the set of unused columns.
    def rec(i, cols):
        if i == k:
            return space.const(1)
        hit = cache.get(cols)
        if hit is not None:
            return hit
        total = space.zero()
        for pos, j in enumerate(cols):
            entry = rows[ridx[i]][j]
            if entry.is_zero():
                continue
            minor = rec(i + 1, cols[:pos] + cols[pos + 1:])
            if minor.is_zero():
                continue
            term = entry * minor
            total = total - term if pos % 2 else total + term
        cache[cols] = total
        return total

    return rec(0, cidx)


def jacobian(system, vars_):
    """Matrix of partial derivatives, one row per polynomial."""
    system = list(system)
    if not system:
        return PolyMatrix([])
    space = system[0].space
    idx = space.resolve(vars_)
    return PolyMatrix([[f.diff(i) for i in idx] for f in system])


def minors(M, k):
    """All k x k minors, rows-combination major, in lexicographic index order."""
    r, c = M.shape
    if k < 1 or k > min(r, c):
        raise SizeError(f"minor size {k} out of range for a {r}x{c} matrix")
    return [_det(M.rows, rs, cs)
            for rs in combinations(range(r), k)
            for cs in combinations(range(c), k)]


def poly_from_terms(space, terms):
    """Build from ``[{"coeff": "a/b", "exps": [...]}, ...]``."""
    out = {}
    for t in terms:
        e = tuple(int(k) for k in t["exps"])
        if len(e) != len(space):
            raise ValueError(f"exponent vector {e} has wrong length for {space!r}")
        out[e] = out.get(e, ZERO) + QQ(t["coeff"])
    return MultiPoly(space, out)


def poly_to_terms(p, order=None):
    order = order or MonomialOrder.grevlex(len(p.space))
    return [{"coeff": fmt_rational(c), "exps": list(e)} for e, c in p.sorted_terms(order)]

