"""Univariate polynomials over Q and real algebraic numbers.

Real roots are isolated with Sturm sequences and bisection; the sign of a
polynomial at a real algebraic number is decided exactly (a zero sign is
certified by a gcd, never by a small numerical value).
"""

from decimal import Decimal, localcontext
from fractions import Fraction

from gmpy2 import gcd, isqrt, lcm, mpq, mpz, next_prime

from .exactpoly import ONE, QQ, ZERO, fmt_rational



# -- integer coefficient kernels ---------------------------------------
# Rational polynomials are handled as (positive denominator, integer list);
# products go through Kronecker substitution so GMP does the work.

def _pack(ints, nbytes):
    return mpz(int.from_bytes(b"".join(int(v).to_bytes(nbytes, "little") for v in ints),
                              "little"))


def zmul(a, b):
    """Product of two integer coefficient lists."""
    if not a or not b:
        return []
    if len(a) * len(b) <= 64:
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return out
    bits = (max(abs(v) for v in a).bit_length() + max(abs(v) for v in b).bit_length()
            + min(len(a), len(b)).bit_length() + 2)
    nbytes = (bits + 7) // 8
    half = 1 << (8 * nbytes - 1)
    n = len(a) + len(b) - 1
    pa = _pack([max(v, 0) for v in a], nbytes) - _pack([max(-v, 0) for v in a], nbytes)
    pb = _pack([max(v, 0) for v in b], nbytes) - _pack([max(-v, 0) for v in b], nbytes)
    # shift every digit into [0, 2^(8 nbytes)) before reading bytes back
    prod = pa * pb + _pack([half] * n, nbytes)
    raw = int(prod).to_bytes(n * nbytes, "little")
    return [mpz(int.from_bytes(raw[i * nbytes:(i + 1) * nbytes], "little")) - half
            for i in range(n)]


def pseudo_division(a, b):
    """Pseudo-division: (Q, R, L) with L * a == Q * b + R, L = lc(b)^(da-db+1)."""
    db = len(b) - 1
    if len(a) - 1 < db:
        return [], list(a), mpz(1)
    lb = b[-1]
    steps = len(a) - db
    big = mpz(lb) ** steps
    rem = [v * big for v in a]
    quo = [0] * steps
    for k in range(len(rem) - 1, db - 1, -1):
        c = rem[k]
        if not c:
            continue
        f = c // lb
        quo[k - db] = f
        base = k - db
        for i, y in enumerate(b):
            if y:
                rem[base + i] -= f * y
    rem = rem[:db]
    while rem and not rem[-1]:
        rem.pop()
    return quo, rem, big


def _zcontent(ints):
    g = mpz(0)
    for v in ints:
        g = gcd(g, v)
        if g == 1:
            break
    return g


def _from_ints(ints, den=1):
    return UniPoly._raw([mpq(v, den) for v in ints]) if den != 1 else \
        UniPoly._raw([mpq(v) for v in ints])


class UniPoly:
    """Dense univariate polynomial, coefficients stored low -> high."""

    __slots__ = ("coeffs", "_ints")

    def __init__(self, coeffs=()):
        cs = [QQ(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)
        self._ints = None

    @classmethod
    def _raw(cls, coeffs):
        cs = list(coeffs)
        while cs and not cs[-1]:
            cs.pop()
        p = object.__new__(cls)
        p.coeffs = tuple(cs)
        p._ints = None
        return p

    @classmethod
    def const(cls, c):
        return cls([c])

    @classmethod
    def x(cls):
        return cls([0, 1])

    @classmethod
    def from_strings(cls, items):
        return cls([QQ(s) for s in items])

    def to_strings(self):
        return [fmt_rational(c) for c in self.coeffs] or ["0"]

    # -- queries -------------------------------------------------------
    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def lead(self):
        return self.coeffs[-1] if self.coeffs else ZERO

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def _integer_form(self):
        """(den, ints) with self == ints / den and den > 0."""
        if self._ints is None:
            den = mpz(1)
            for c in self.coeffs:
                den = lcm(den, c.denominator)
            self._ints = (den, [c.numerator * (den // c.denominator) for c in self.coeffs])
        return self._ints

    def __call__(self, x):
        if not self.coeffs:
            return ZERO
        x = QQ(x)
        # homogeneous Horner in integers, one division at the end
        den, ints = self._integer_form()
        a, b = x.numerator, x.denominator
        acc = ints[-1]
        bpow = mpz(1)
        for c in reversed(ints[:-1]):
            bpow *= b
            acc = acc * a + c * bpow
        return mpq(acc, den * bpow)

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)) or isinstance(other, type(ZERO)):
            return self.coeffs == UniPoly([other]).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"UniPoly({self.to_text()})"

    def to_text(self, var="t"):
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            mag = fmt_rational(abs(c))
            body = mag if not mono else (mono if abs(c) == 1 else f"{mag}*{mono}")
            parts.append(("-" if c < 0 else "+", body))
        sign, body = parts[0]
        text = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    # -- arithmetic ----------------------------------------------------
    @staticmethod
    def _lift(other):
        if isinstance(other, UniPoly):
            return other
        return UniPoly([other])

    def __add__(self, other):
        other = self._lift(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return UniPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return UniPoly._raw([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, UniPoly):
            s = QQ(other)
            if not s:
                return UniPoly()
            return UniPoly._raw([c * s for c in self.coeffs])
        if not self.coeffs or not other.coeffs:
            return UniPoly()
        da, a = self._integer_form()
        db, b = other._integer_form()
        return _from_ints(zmul(a, b), da * db)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, UniPoly):
            return NotImplemented
        return self * (1 / QQ(other))

    def __pow__(self, k):
        result = UniPoly([1])
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __divmod__(self, other):
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        if len(self.coeffs) <= other.degree:
            return UniPoly(), self
        da, a = self._integer_form()
        db, b = other._integer_form()
        quo, rem, big = pseudo_division(a, b)
        # L a_int = Q b_int + R with a = a_int / da and b = b_int / db
        scale = big * da
        return _from_ints([v * db for v in quo], scale), _from_ints(rem, scale)

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def derivative(self):
        return UniPoly._raw([c * k for k, c in enumerate(self.coeffs)][1:])

    def monic(self):
        if not self.coeffs:
            return self
        return self * (1 / self.lead)

    def compose(self, other):
        acc = UniPoly()
        for c in reversed(self.coeffs):
            acc = acc * other + c
        return acc

    def integer_coeffs(self):
        """Primitive integer multiple with positive leading coefficient."""
        from math import gcd, lcm
        if not self.coeffs:
            return []
        den = 1
        for c in self.coeffs:
            den = lcm(den, int(c.denominator))
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for v in ints:
            g = gcd(g, v)
        ints = [v // g for v in ints]
        if ints[-1] < 0:
            ints = [-v for v in ints]
        return ints


def poly_gcd(a, b):
    """Monic gcd (zero if both are zero)."""
    if not a or not b:
        g = a or b
        return g.monic() if g else UniPoly()
    if a.degree == 0 or b.degree == 0:
        return UniPoly([1])
    return _modular_gcd(a, b)


def _gcd_mod(a, b, p):
    """Monic gcd of coefficient lists over GF(p)."""
    while b:
        inv = pow(b[-1], -1, p)
        a = list(a)
        db = len(b) - 1
        for k in range(len(a) - 1, db - 1, -1):
            c = a[k] * inv % p
            if c:
                for i in range(db + 1):
                    a[k - db + i] = (a[k - db + i] - c * b[i]) % p
        a = a[:db]
        while a and not a[-1]:
            a.pop()
        a, b = b, a
    inv = pow(a[-1], -1, p)
    return [v * inv % p for v in a]


def _ratrec(a, m, bound):
    r0, r1 = m, a % m
    s0, s1 = 0, 1
    while r1 > bound:
        k = r0 // r1
        r0, r1 = r1, r0 - k * r1
        s0, s1 = s1, s0 - k * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    return mpq(r1, s1)


def _zdivides(g, a):
    return not pseudo_division(a, g)[1]


def _modular_gcd(a, b):
    """Monic gcd over Q from gcds modulo word-size primes.

    Primes where the modular gcd has too high a degree are dropped; the
    CRT image is lifted by rational reconstruction and accepted only once
    it divides both inputs exactly.
    """
    _, za = a._integer_form()
    _, zb = b._integer_form()
    ca, cb = _zcontent(za), _zcontent(zb)
    za = [v // ca for v in za]
    zb = [v // cb for v in zb]
    p = mpz(1) << 62
    best = None
    residues, modulus, used = None, mpz(1), 0
    check_at = 1
    while True:
        p = next_prime(p)
        if za[-1] % p == 0 or zb[-1] % p == 0:
            continue
        g = _gcd_mod([v % p for v in za], [v % p for v in zb], p)
        deg = len(g) - 1
        if deg == 0:
            return UniPoly([1])
        if best is None or deg < best:
            best, residues, modulus, used, check_at = deg, [mpz(v) for v in g], mpz(p), 1, 1
        elif deg > best:
            continue
        else:
            # CRT: x = r mod modulus, x = v mod p
            inv = pow(modulus % p, -1, p)
            residues = [r + modulus * ((v - r) * inv % p) for r, v in zip(residues, g)]
            modulus *= p
            used += 1
        if used < check_at:
            continue
        check_at *= 2
        bound = isqrt(modulus // 2)
        cand = [_ratrec(r, modulus, bound) for r in residues]
        if any(c is None for c in cand):
            continue
        g = UniPoly._raw(cand)
        _, zg = g._integer_form()
        if _zdivides(zg, za) and _zdivides(zg, zb):
            return g


def ext_gcd(a, b):
    """(g, s, t) with s*a + t*b = g monic."""
    r0, r1 = a, b
    s0, s1 = UniPoly([1]), UniPoly()
    t0, t1 = UniPoly(), UniPoly([1])
    while r1:
        quo, rem = divmod(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, s0 - quo * s1
        t0, t1 = t1, t0 - quo * t1
    if not r0:
        return r0, s0, t0
    inv = 1 / r0.lead
    return r0 * inv, s0 * inv, t0 * inv


def invmod(a, q):
    g, s, _ = ext_gcd(a % q, q)
    if g.degree != 0:
        raise ZeroDivisionError("polynomial is not invertible modulo q")
    return s % q


def squarefree_part(q):
    """q / gcd(q, q'), made monic."""
    if not q:
        raise ValueError("squarefree part of the zero polynomial")
    if q.degree <= 0:
        return UniPoly([1])
    g = poly_gcd(q, q.derivative())
    return (q // g).monic()


def _sign(v):
    return (v > 0) - (v < 0)


_TEST_PRIMES = (2305843009213693951, 4611686018427387847, 1152921504606846883)


def _reduce_mod(a, p):
    out = []
    for c in a.coeffs:
        den = int(c.denominator)
        if den % p == 0:
            return None
        out.append(int(c.numerator) * pow(den, -1, p) % p)
    while out and not out[-1]:
        out.pop()
    return out


def _gcd_degree_mod(a, b, p):
    while b:
        inv = pow(b[-1], -1, p)
        a = list(a)
        db = len(b) - 1
        for k in range(len(a) - 1, db - 1, -1):
            c = a[k] * inv % p
            if c:
                for i in range(db + 1):
                    a[k - db + i] = (a[k - db + i] - c * b[i]) % p
        a = a[:db]
        while a and not a[-1]:
            a.pop()
        a, b = b, a
    return len(a) - 1


def coprime(a, b):
    """True iff a and b have no common complex root.

    The gcd modulo a large prime (that keeps both degrees) has degree at
    least that of the gcd over Q, so a constant modular gcd settles the
    question; otherwise the gcd is computed over Q.
    """
    return _coprime_mod(a, b) or poly_gcd(a, b).degree < 1


def _coprime_mod(a, b):
    # True proves coprimality; False is inconclusive
    for p in _TEST_PRIMES:
        ra, rb = _reduce_mod(a, p), _reduce_mod(b, p)
        if ra is None or rb is None or len(ra) != len(a.coeffs) or len(rb) != len(b.coeffs):
            continue
        return _gcd_degree_mod(ra, rb, p) < 1
    return False


def sign_near(g, alpha):
    """Sign of g at alpha when g(alpha) != 0 is already known."""
    a = alpha
    while True:
        lo, hi = interval_eval(g, a.lower, a.upper)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        if a.is_rational_point():
            return _sign(g(a.lower))
        a = a.refine((a.upper - a.lower) / 256)


# -- Sturm sequences ----------------------------------------------------

def _prem_positive(a, b):
    """|lc(b)|^k * a mod b for integer coefficient lists (a positive multiple)."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    lab, sb = abs(lb), (1 if lb > 0 else -1)
    while len(r) - 1 >= db and r:
        c = r[-1] * sb
        shift = len(r) - 1 - db
        r = [x * lab for x in r]
        for i, y in enumerate(b):
            r[i + shift] -= c * y
        r.pop()
        while r and not r[-1]:
            r.pop()
    return r


def _primitive(ints):
    g = mpz(0)
    for v in ints:
        g = gcd(g, v)
        if g == 1:
            return ints
    return [v // g for v in ints]


def sturm_sequence(q):
    """Sturm chain of q, each member replaced by a positive integer multiple.

    Positive factors do not change signs, so the chain counts roots exactly
    like the classical one; primitive pseudo-remainders keep the integers
    from growing the way rational remainders do.
    """
    if not q:
        return []
    head = [mpz(v) for v in q.integer_coeffs()]
    seq = [head]
    d = _primitive([c * i for i, c in enumerate(head)][1:])
    if d:
        seq.append(d)
        while True:
            r = _prem_positive(seq[-2], seq[-1])
            if not r:
                break
            seq.append(_primitive([-v for v in r]))
    return [UniPoly._raw([mpq(v) for v in p]) for p in seq]


def _variations(signs):
    signs = [s for s in signs if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def variations_at(seq, x):
    """Sign variations of a Sturm chain at x; x may be +-inf (float)."""
    if x == float("inf"):
        return _variations([_sign(p.lead) for p in seq])
    if x == float("-inf"):
        return _variations([_sign(p.lead) * (-1 if p.degree % 2 else 1) for p in seq])
    return _variations([_sign(p(x)) for p in seq])


def count_real_roots(q, lo=None, hi=None, seq=None):
    """Distinct real roots of q in (lo, hi]; the whole line by default."""
    seq = seq or sturm_sequence(q)
    a = float("-inf") if lo is None else lo
    b = float("inf") if hi is None else hi
    return variations_at(seq, a) - variations_at(seq, b)


def cauchy_bound(q):
    """A power of two exceeding the modulus of every complex root of q.

    Fujiwara's bound 2 max |c_i / c_d|^(1/(d-i)), rounded up through bit
    lengths; unlike 1 + max |c_i / c_d| it does not blow up with large
    coefficients.
    """
    ints = q.integer_coeffs()
    d = len(ints) - 1
    top = abs(ints[-1]).bit_length()
    k = 0
    for i, c in enumerate(ints[:-1]):
        if c:
            k = max(k, -(-(abs(c).bit_length() - top + 1) // (d - i)))
    return QQ(2) ** (k + 1)


class IsolatingInterval:
    """Closed rational interval holding exactly one root of ``poly``."""

    __slots__ = ("lower", "upper", "poly")

    def __init__(self, lower, upper, poly):
        self.lower = QQ(lower)
        self.upper = QQ(upper)
        self.poly = poly
        if self.lower > self.upper:
            raise ValueError("interval lower bound exceeds upper bound")

    @property
    def width(self):
        return self.upper - self.lower

    def is_point(self):
        return self.lower == self.upper

    def to_strings(self):
        return [fmt_rational(self.lower), fmt_rational(self.upper)]

    def __repr__(self):
        return f"IsolatingInterval([{fmt_rational(self.lower)}, {fmt_rational(self.upper)}])"

    def __eq__(self, other):
        return (isinstance(other, IsolatingInterval) and self.lower == other.lower
                and self.upper == other.upper and self.poly == other.poly)


def isolate_real_roots(q):
    """One isolating interval per distinct real root of q, increasing order."""
    if not q:
        raise ValueError("cannot isolate the roots of the zero polynomial")
    sq = squarefree_part(q)
    if sq.degree < 1:
        return []
    seq = sturm_sequence(sq)
    bound = cauchy_bound(sq)
    out = []
    # work list of open intervals (a, b) whose endpoints are not roots
    stack = [(-bound, bound, variations_at(seq, -bound), variations_at(seq, bound))]
    while stack:
        a, b, va, vb = stack.pop()
        n = va - vb
        if n == 0:
            continue
        if n == 1:
            out.append(IsolatingInterval(a, b, sq))
            continue
        mid = (a + b) / 2
        if sq(mid) == 0:
            # split around a window that holds only the root at mid, so no
            # closed interval ends at a root
            out.append(IsolatingInterval(mid, mid, sq))
            delta = (b - a) / 4
            while True:
                lo, hi = mid - delta, mid + delta
                vlo, vhi = variations_at(seq, lo), variations_at(seq, hi)
                if sq(lo) and sq(hi) and vlo - vhi == 1:
                    break
                delta /= 2
            stack.append((a, lo, va, vlo))
            stack.append((hi, b, vhi, vb))
            continue
        vm = variations_at(seq, mid)
        stack.append((a, mid, va, vm))
        stack.append((mid, b, vm, vb))
    out.sort(key=lambda iv: iv.lower)
    # neighbours may share an endpoint; halve them until they are disjoint
    for i in range(len(out) - 1):
        while out[i].upper >= out[i + 1].lower:
            out[i] = _halve(out[i])
            out[i + 1] = _halve(out[i + 1])
    return out


def _halve(iv):
    # endpoints of a non-point isolating interval are not roots
    if iv.is_point():
        return iv
    q, lo, hi = iv.poly, iv.lower, iv.upper
    mid = (lo + hi) / 2
    vm = q(mid)
    if vm == 0:
        return IsolatingInterval(mid, mid, q)
    if _sign(q(lo)) != _sign(vm):
        return IsolatingInterval(lo, mid, q)
    return IsolatingInterval(mid, hi, q)


def _imul(a, b, xa, xb):
    # [a, b] * [xa, xb] for integer intervals
    if xa >= 0:
        if a >= 0:
            return a * xa, b * xb
        if b <= 0:
            return a * xb, b * xa
        return a * xb, b * xb
    if xb <= 0:
        if a >= 0:
            return b * xa, a * xb
        if b <= 0:
            return b * xb, a * xa
        return b * xa, a * xa
    p1, p2, p3, p4 = a * xa, a * xb, b * xa, b * xb
    return min(p1, p2, p3, p4), max(p1, p2, p3, p4)


def interval_eval(p, lo, hi):
    """Rational interval containing p([lo, hi]) (interval Horner scheme).

    Runs in integers: with lo = a/D and hi = b/D the scheme is applied to
    the homogenized polynomial and divided out once at the end.
    """
    lo, hi = QQ(lo), QQ(hi)
    if lo == hi:
        v = p(lo)
        return v, v
    if not p.coeffs:
        return ZERO, ZERO
    den, ints = p._integer_form()
    d = lcm(lo.denominator, hi.denominator)
    xa, xb = lo.numerator * (d // lo.denominator), hi.numerator * (d // hi.denominator)
    a = b = ints[-1]
    dpow = mpz(1)
    for c in reversed(ints[:-1]):
        dpow *= d
        a, b = _imul(a, b, xa, xb)
        c = c * dpow
        a, b = a + c, b + c
    scale = den * dpow
    return mpq(a, scale), mpq(b, scale)


class AlgebraicNumber:
    """A real root of a squarefree polynomial, pinned by an isolating interval."""

    __slots__ = ("poly", "interval")

    def __init__(self, poly, interval):
        if isinstance(interval, IsolatingInterval):
            lo, hi = interval.lower, interval.upper
        else:
            lo, hi = (QQ(v) for v in interval)
        self.poly = poly
        self.interval = IsolatingInterval(lo, hi, poly)

    @classmethod
    def from_rational(cls, value):
        value = QQ(value)
        return cls(UniPoly([-value, 1]), (value, value))

    @classmethod
    def roots_of(cls, q):
        return [cls(iv.poly, iv) for iv in isolate_real_roots(q)]

    @property
    def lower(self):
        return self.interval.lower

    @property
    def upper(self):
        return self.interval.upper

    def is_rational_point(self):
        return self.interval.is_point()

    def __repr__(self):
        return f"AlgebraicNumber({self.poly.to_text()}, {self.interval.to_strings()})"

    def bisect(self):
        lo, hi = self.lower, self.upper
        if lo == hi:
            return self
        mid = (lo + hi) / 2
        vm = self.poly(mid)
        if vm == 0:
            return AlgebraicNumber(self.poly, (mid, mid))
        if _sign(self.poly(lo)) != _sign(vm):
            return AlgebraicNumber(self.poly, (lo, mid))
        return AlgebraicNumber(self.poly, (mid, hi))

    def refine(self, width):
        """New instance whose interval is at most ``width`` wide."""
        width = QQ(width)
        a = self
        while a.upper - a.lower > width:
            a = a.bisect()
        return a

    def as_rational(self):
        """The exact value if it is rational, else None.

        A rational root a/b of the primitive integer form of the polynomial
        has b dividing the leading coefficient, which bounds the search.
        """
        if self.is_rational_point():
            return self.lower
        ints = self.poly.integer_coeffs()
        lead = abs(ints[-1])
        a = self.refine(mpq(1, 2 * lead * lead))
        if a.is_rational_point():
            return a.lower
        mid = (a.lower + a.upper) / 2
        cand = Fraction(int(mid.numerator), int(mid.denominator)).limit_denominator(lead)
        cand = QQ(cand)
        if a.lower <= cand <= a.upper and self.poly(cand) == 0:
            return cand
        return None

    def to_decimal(self, digits=20):
        """Decimal string with ``digits`` significant digits (display only)."""
        a = self
        tiny = mpq(1, 10 ** (digits + 40))
        rel = mpq(1, 10 ** (digits + 2))
        while a.upper - a.lower > tiny:
            lo, hi = a.lower, a.upper
            if (lo > 0 or hi < 0) and hi - lo <= rel * min(abs(lo), abs(hi)):
                break
            a = a.bisect()
        return rational_to_decimal((a.lower + a.upper) / 2, digits)

    def __float__(self):
        a = self.refine(mpq(1, 10 ** 18))
        return float((a.lower + a.upper) / 2)


def rational_to_decimal(value, digits=20):
    value = QQ(value)
    with localcontext() as ctx:
        ctx.prec = digits
        d = Decimal(int(value.numerator)) / Decimal(int(value.denominator))
    return str(d) if d == 0 or abs(d.adjusted()) < 25 else format(d, "E")


def _count_in_open(seq, lo, hi):
    # roots of a squarefree chain head in (lo, hi]
    return variations_at(seq, lo) - variations_at(seq, hi)


def sign_at(g, alpha):
    """Exact sign of g at the real algebraic number alpha: -1, 0 or +1."""
    if not g:
        return 0
    if alpha.is_rational_point():
        return _sign(g(alpha.lower))
    q = alpha.poly
    if coprime(g, q):
        return sign_near(g, alpha)
    h = poly_gcd(g, q)
    if h.degree >= 1:
        # h divides q, so it has at most one root in the interval and the
        # endpoints are not roots: a sign change certifies g(alpha) == 0.
        if _sign(h(alpha.lower)) * _sign(h(alpha.upper)) < 0:
            return 0
    gs = squarefree_part(g)
    seq = sturm_sequence(gs)
    a = alpha
    while True:
        if a.is_rational_point():
            return _sign(g(a.lower))
        if g(a.upper) != 0 and _count_in_open(seq, a.lower, a.upper) == 0:
            return _sign(g(a.upper))
        a = a.bisect()


def algebraic_equal(alpha, beta):
    """Exact equality of two real algebraic numbers."""
    if alpha.is_rational_point() and beta.is_rational_point():
        return alpha.lower == beta.lower
    if alpha.is_rational_point():
        r = alpha.lower
        return beta.lower <= r <= beta.upper and beta.poly(r) == 0
    if beta.is_rational_point():
        return algebraic_equal(beta, alpha)
    if alpha.upper < beta.lower or beta.upper < alpha.lower:
        return False
    g = poly_gcd(alpha.poly, beta.poly)
    if g.degree < 1 or sign_at(g, alpha) != 0 or sign_at(g, beta) != 0:
        return False
    # g divides both defining polynomials, so no interval endpoint is a root
    seq = sturm_sequence(g)
    a, b = alpha, beta
    while True:
        if a.upper < b.lower or b.upper < a.lower:
            return False
        lo, hi = min(a.lower, b.lower), max(a.upper, b.upper)
        if _count_in_open(seq, lo, hi) == 1:
            return True
        a, b = a.bisect(), b.bisect()
        if a.is_rational_point() or b.is_rational_point():
            return algebraic_equal(a, b)


def compare(alpha, beta):
    """-1, 0, +1 as alpha <, ==, > beta, decided exactly."""
    if algebraic_equal(alpha, beta):
        return 0
    a, b = alpha, beta
    while True:
        if a.upper < b.lower:
            return -1
        if b.upper < a.lower:
            return 1
        if a.is_rational_point() and b.is_rational_point():
            return _sign(a.lower - b.lower)
        a, b = a.bisect(), b.bisect()


def minimal_polynomial_mod(h, q):
    """Minimal polynomial of h in Q[t]/(q) by a Krylov dependency search.

    For squarefree q its roots are exactly the distinct values h(t*) over the
    complex roots t* of q.
    """
    from .linalg import Echelon

    d = q.degree
    if d < 1:
        return UniPoly([1])
    ech = Echelon()
    power = UniPoly([1])
    h = h % q
    for k in range(d + 1):
        vec = {i: c for i, c in enumerate(power.coeffs) if c}
        rel = ech.insert(vec, k)
        if rel is not None:
            coeffs = [ZERO] * (k + 1)
            coeffs[k] = ONE
            for j, c in rel.items():
                coeffs[j] -= c
            return UniPoly(coeffs)
        power = (power * h) % q
    raise AssertionError("Krylov sequence failed to become dependent")


def algebraic_value(h, alpha):
    """The real number h(alpha) as an AlgebraicNumber (h polynomial in t)."""
    if alpha.is_rational_point():
        return AlgebraicNumber.from_rational(h(alpha.lower))
    q = alpha.poly
    h = h % q
    if h.degree <= 0:
        return AlgebraicNumber.from_rational(h.coeffs[0] if h.coeffs else ZERO)
    mp = minimal_polynomial_mod(h, q)
    seq = sturm_sequence(mp)
    a = alpha
    while True:
        if a.is_rational_point():
            return AlgebraicNumber.from_rational(h(a.lower))
        lo, hi = interval_eval(h, a.lower, a.upper)
        if lo == hi:
            return AlgebraicNumber.from_rational(lo)
        if mp(lo) != 0 and mp(hi) != 0 and _count_in_open(seq, lo, hi) == 1:
            return AlgebraicNumber(mp, (lo, hi))
        a = a.bisect()
