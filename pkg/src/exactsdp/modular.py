"""Zero-dimensional solving by a modular Groebner basis and p-adic lifting.

The ideal is solved once modulo a word-size prime, which gives a
parametrization of its points over GF(p).  Newton iteration then lifts
that parametrization to Z/p^(2^k) and rational reconstruction recovers a
candidate over Q.  Nothing is returned before the candidate passes an
exact check over Q: the defining polynomial is squarefree and every
equation of the input vanishes at every encoded point.  What remains
probabilistic is completeness, which depends on the prime being lucky.
"""

import logging
import random
from math import gcd, isqrt, lcm

from gmpy2 import is_prime, mpq, mpz

from .errors import DimensionError, ExactSDPError, ResourceError
from .exactpoly import VariableSpace
from .groebner import (
    MonomialOrder, QuotientAlgebra, RationalParametrization, _Budget, _buchberger,
    _krylov, apply_cols, default_step_budget, ideal_of_parametrizations,
    rur,
)
from .linalg import Echelon
from .univar import UniPoly, poly_gcd

log = logging.getLogger(__name__)

DEFAULT_MAX_BITS = 1 << 20


class LiftingError(ExactSDPError):
    """The modular image could not be lifted (singular points or bad prime)."""


def primes(start=1 << 30):
    """Primes below ``start``, decreasing."""
    p = start
    while True:
        p = int(_prev_prime(p))
        yield p


def _prev_prime(n):
    n -= 1
    while not is_prime(n):
        n -= 1
    return n


def integer_terms(poly):
    """Primitive integer multiple of a rational polynomial, as a term dict."""
    den = 1
    for c in poly.terms.values():
        den = lcm(den, int(c.denominator))
    out = {e: int(c * den) for e, c in poly.terms.items()}
    g = 0
    for v in out.values():
        g = gcd(g, v)
    return {e: v // g for e, v in out.items()} if g > 1 else out


# -- dense univariate polynomials over Z/N --------------------------------
# Lists of ints, low -> high, entries in [0, N).

def _trim(a):
    while a and not a[-1]:
        a.pop()
    return a


def _pdivmod(a, b, p):
    a = list(a)
    db = len(b) - 1
    inv = pow(b[-1], -1, p)
    if len(a) <= db:
        return [], _trim(a)
    quo = [0] * (len(a) - db)
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k] * inv % p
        if not c:
            continue
        quo[k - db] = c
        base = k - db
        for i in range(db + 1):
            a[base + i] = (a[base + i] - c * b[i]) % p
    return _trim(quo), _trim(a[:db])


def _pgcd(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pdivmod(a, b, p)[1]
    if not a:
        return a
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim([c % p for c in out])


def _pinv(a, q, p):
    """Inverse of a modulo q over GF(p), or None when gcd(a, q) != 1."""
    r0, r1 = list(q), _pdivmod(a, q, p)[1]
    s0, s1 = [], [1]
    while r1:
        quo, rem = _pdivmod(r0, r1, p)
        r0, r1 = r1, rem
        prod = _pmul(quo, s1, p)
        n = max(len(s0), len(prod))
        s0, s1 = s1, _trim([((s0[i] if i < len(s0) else 0)
                             - (prod[i] if i < len(prod) else 0)) % p for i in range(n)])
    if len(r0) != 1:
        return None
    inv = pow(r0[0], -1, p)
    return _pdivmod([c * inv % p for c in s0], q, p)[1]


def _deriv(a, n):
    return [(k * c) % n for k, c in enumerate(a)][1:]


def squarefree_mod(a, p):
    g = _pgcd(a, _trim(_deriv(a, p)), p)
    return _pdivmod(a, g, p)[0] if len(g) > 1 else list(a)


class _Ring:
    """(Z/N)[T]/(q) for a monic q; elements are lists of length < deg q.

    Products go through Kronecker substitution: polynomials are packed
    into big integers, multiplied there (by GMP) and unpacked once per
    entry.  Reduction modulo q is a Barrett step with the precomputed
    inverse of the reversed q, so it costs two more packed products.
    """

    def __init__(self, q, n, terms=64):
        self.q = list(q)
        self.d = len(q) - 1
        self.n = n
        self.slot = 2 * n.bit_length() + (terms * max(self.d, 1)).bit_length() + 1
        self.nbytes = (self.slot + 7) // 8
        self._packed_q = None
        self._rinv = None

    def pack(self, a):
        if not a:
            return mpz(0)
        w = self.nbytes
        return mpz.from_bytes(b"".join(int(c).to_bytes(w, "little") for c in a), "little")

    def unpack(self, x, length):
        w = self.nbytes
        total = max(length, (x.bit_length() + 8 * w - 1) // (8 * w))
        raw = x.to_bytes(w * total, "little")
        return [int.from_bytes(raw[i * w:(i + 1) * w], "little") for i in range(length)]

    def _barrett(self):
        # inverse of rev(q) modulo T^(d-1), coefficients mod n
        d, n, q = self.d, self.n, self.q
        rq = q[::-1]
        k = max(d - 1, 1)
        inv = [1] + [0] * (k - 1)
        for i in range(1, k):
            acc = 0
            for j in range(1, min(i, d) + 1):
                acc += rq[j] * inv[i - j]
            inv[i] = -acc % n
        self._rinv = self.pack(inv)
        self._packed_q = self.pack(q)

    def reduce(self, a):
        n, d = self.n, self.d
        a = [int(c) % n for c in a]
        if len(a) <= d:
            return _trim(a)
        if len(a) > 2 * d - 1 or d < 8:
            q = self.q
            for k in range(len(a) - 1, d - 1, -1):
                c = a[k] % n
                if not c:
                    continue
                base = k - d
                for i in range(d):
                    if q[i]:
                        a[base + i] -= c * q[i]
            return _trim([c % n for c in a[:d]])
        if self._rinv is None:
            self._barrett()
        top = len(a) - 1 - d           # degree of the quotient
        ra = self.pack(a[::-1][:top + 1])
        rquo = self.unpack(ra * self._rinv, 2 * top + 2)[:top + 1]
        quo = [c % n for c in rquo[::-1]]
        prod = self.unpack(self.pack(quo) * self._packed_q, len(a) + 1)
        return _trim([(x - y) % n for x, y in zip(a[:d], prod[:d])])

    def reduce_packed(self, x):
        if not x:
            return []
        length = (x.bit_length() + self.slot - 1) // self.slot + 1
        return self.reduce(self.unpack(x, length))

    def mul(self, a, b):
        if not a or not b:
            return []
        return self.reduce_packed(self.pack(a) * self.pack(b))

    def add(self, a, b):
        n = self.n
        m = max(len(a), len(b))
        return _trim([((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % n
                      for i in range(m)])

    def sub(self, a, b):
        n = self.n
        m = max(len(a), len(b))
        return _trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % n
                      for i in range(m)])

    def scale(self, a, c):
        n = self.n
        return _trim([v * c % n for v in a])

    def matmul(self, a, b):
        pa = [[self.pack(v) for v in row] for row in a]
        pb = [[self.pack(v) for v in row] for row in b]
        cols = list(zip(*pb))
        return [[self.reduce_packed(sum(x * y for x, y in zip(row, col) if x and y))
                 for col in cols] for row in pa]

    def matvec(self, a, v):
        pv = [self.pack(x) for x in v]
        return [self.reduce_packed(sum(self.pack(x) * y for x, y in zip(row, pv) if x and y))
                for row in a]

    def evaluate(self, terms, values):
        """Integer polynomial (term dict) at polynomial values, in the ring."""
        acc = [0] * max(self.d, 1)
        cache = {}
        for e, c in terms.items():
            prod = None
            for i, k in enumerate(e):
                if not k:
                    continue
                pw = cache.get((i, k))
                if pw is None:
                    pw = values[i]
                    for _ in range(k - 1):
                        pw = self.mul(pw, values[i])
                    cache[(i, k)] = pw
                prod = pw if prod is None else self.mul(prod, pw)
            if prod is None:
                acc[0] += c
            else:
                for j, v in enumerate(prod):
                    acc[j] += c * v
        return self.reduce(acc)


# -- the modular image ------------------------------------------------------

class ModularIdeal:
    """An ideal of Q[vars] reduced modulo a prime, with its grevlex basis."""

    def __init__(self, equations, space, prime, budget=None):
        self.space = space
        self.nvars = len(space)
        self.prime = prime
        self.int_terms = [integer_terms(f) for f in equations if not f.is_zero()]
        self.order = MonomialOrder.grevlex(self.nvars)
        polys = []
        for t in self.int_terms:
            red = {e: c % prime for e, c in t.items() if c % prime}
            polys.append(red)
        bud = _Budget(default_step_budget() if budget is None else budget)
        self.basis = _buchberger(polys, self.order, self.nvars, bud, prime)
        self._budget = budget

    def is_unit(self):
        return len(self.basis) == 1 and not any(next(iter(self.basis[0])))

    def is_zero_dimensional(self):
        from .groebner import _staircase_is_finite
        lts = [max(t, key=self.order.key) for t in self.basis]
        return _staircase_is_finite(lts, self.nvars)

    def algebra(self):
        if not self.is_zero_dimensional():
            raise DimensionError("ideal is not zero-dimensional modulo p")
        return QuotientAlgebra(self.basis, self.nvars, self.prime)

    def radical(self):
        """Seidenberg: add the squarefree part of every univariate eliminant."""
        alg = self.algebra()
        p = self.prime
        extra = []
        for i in range(self.nvars):
            mp, _ = _krylov(alg, alg.mult_matrix(i), alg.dim)
            sq = squarefree_mod(mp, p)
            if len(sq) < len(mp):
                e0 = [0] * self.nvars
                terms = {}
                for k, c in enumerate(sq):
                    if c:
                        e = list(e0)
                        e[i] = k
                        terms[tuple(e)] = c
                extra.append(terms)
        if not extra:
            return self
        out = object.__new__(ModularIdeal)
        out.__dict__.update(self.__dict__)
        bud = _Budget(default_step_budget() if self._budget is None else self._budget)
        out.basis = _buchberger(list(self.basis) + extra, self.order, self.nvars, bud, p)
        return out

    def is_radical(self):
        return self.radical() is self


def _separating_krylov(alg, lam):
    mp, ech = _krylov(alg, alg.mult_by_form(lam), alg.dim)
    if len(mp) - 1 < alg.dim:
        return None
    coords = []
    for i in range(alg.nvars):
        rel = ech.express(apply_cols(alg.mult_matrix(i), alg.one(), alg.mod))
        coords.append(_trim([rel.get(k, 0) for k in range(alg.dim)]))
    return mp, coords


def _random_form(rng, n, bound):
    while True:
        lam = [rng.randint(-2 * bound, 2 * bound) for _ in range(n)]
        if any(lam):
            return lam


def modular_parametrization(mideal, rng, max_retries=8):
    """(q, coords, form) over GF(p) for the radical of a zero-dimensional ideal."""
    p = mideal.prime
    alg = mideal.algebra()
    if alg.dim == 0:
        return [1], [[] for _ in range(mideal.nvars)], None
    radical_done = False
    bound = 1
    for _ in range(max_retries + 1):
        lam = _random_form(rng, mideal.nvars, bound)
        bound *= 2
        got = _separating_krylov(alg, [c % p for c in lam])
        if got is not None and len(squarefree_mod(got[0], p)) == len(got[0]):
            return got[0], got[1], lam
        if not radical_done:
            radical_done = True
            rad = mideal.radical()
            if rad is not mideal:
                mideal = rad
                alg = mideal.algebra()
    raise LiftingError("no separating form found modulo p")


def _rewrite_in(q, coords, w, p):
    """Express coords in the powers of w inside GF(p)[T]/q; None if w does not separate."""
    d = len(q) - 1
    ring = _Ring(q, p)
    ech = Echelon(p)
    power = [1]
    for k in range(d):
        if ech.insert({i: c for i, c in enumerate(power) if c}, k) is not None:
            return None
        power = ring.mul(power, w)
    rel = ech.insert({i: c for i, c in enumerate(power) if c}, d)
    mp = [0] * (d + 1)
    mp[d] = 1
    for j, c in rel.items():
        mp[j] = (mp[j] - c) % p
    out = []
    for v in coords:
        r = ech.express({i: c for i, c in enumerate(v) if c})
        out.append(_trim([r.get(k, 0) for k in range(d)]))
    return mp, out


def _restrict(q, coords, factor, p):
    """Drop the roots of ``factor`` (a divisor of q) from the parametrization."""
    keep = _pdivmod(q, factor, p)[0]
    return keep, [_pdivmod(v, keep, p)[1] for v in coords]


def rank_deficient_factor(q, coords, matrix_terms, size, p):
    """gcd of q with every size x size minor of a matrix of integer polynomials.

    Its roots are the points where the matrix has rank below ``size``.
    """
    ring = _Ring(q, p)
    mat = [[ring.evaluate(t, coords) if t else [] for t in row] for row in matrix_terms]
    g = list(q)
    m = len(mat)
    from itertools import combinations
    for rows in combinations(range(m), size):
        for cols in combinations(range(m), size):
            sub = [[mat[i][j] for j in cols] for i in rows]
            g = _pgcd(g, _ring_det(ring, sub), p)
            if len(g) <= 1:
                return [1]
    return g


def _ring_det(ring, a):
    n = len(a)
    if n == 1:
        return a[0][0]
    if n == 2:
        return ring.sub(ring.mul(a[0][0], a[1][1]), ring.mul(a[0][1], a[1][0]))
    acc = []
    for j in range(n):
        if not a[0][j]:
            continue
        minor = [row[:j] + row[j + 1:] for row in a[1:]]
        term = ring.mul(a[0][j], _ring_det(ring, minor))
        acc = ring.add(acc, term) if j % 2 == 0 else ring.sub(acc, term)
    return acc


# -- Newton-Hensel lifting --------------------------------------------------

def _initial_inverse(jac, q, p, rng, tries=4):
    """Inverse of a matrix over GF(p)[T]/q by elimination with unit pivots.

    A random constant left factor makes unit pivots available when the
    matrix is invertible at every root of q; the factor is undone at the end.
    """
    n = len(jac)
    ring = _Ring(q, p)
    for attempt in range(tries):
        if attempt:
            r = [[rng.randrange(p) for _ in range(n)] for _ in range(n)]
            left = [[[c] if c else [] for c in row] for row in r]
        else:
            left = [[[1] if i == j else [] for j in range(n)] for i in range(n)]
        a = ring.matmul(left, jac)
        aug = [row + [list(v) for v in lrow] for row, lrow in zip(a, left)]
        ok = True
        for c in range(n):
            piv = None
            for r_ in range(c, n):
                inv = _pinv(aug[r_][c], q, p) if aug[r_][c] else None
                if inv is not None:
                    piv = r_
                    break
            if piv is None:
                ok = False
                break
            aug[c], aug[piv] = aug[piv], aug[c]
            aug[c] = [ring.mul(v, inv) for v in aug[c]]
            for r_ in range(n):
                f = aug[r_][c]
                if r_ != c and f:
                    aug[r_] = [ring.sub(x, ring.mul(f, y)) for x, y in zip(aug[r_], aug[c])]
        if ok:
            return [row[n:] for row in aug]
    raise LiftingError("the Jacobian is singular at some solution modulo p")


def rational_reconstruction(a, m, bound=None):
    """The fraction r/s == a (mod m) with |r|, |s| <= bound, or None."""
    if bound is None:
        bound = isqrt(m // 2)
    r0, r1 = m, a % m
    s0, s1 = 0, 1
    while r1 > bound:
        k = r0 // r1
        r0, r1 = r1, r0 - k * r1
        s0, s1 = s1, s0 - k * s1
    if s1 == 0 or abs(s1) > bound or gcd(s1, m) != 1:
        return None
    return mpq(r1, s1)


class _Reconstructor:
    """Reconstruct many residues with a shared, growing denominator."""

    def __init__(self, m):
        self.m = m
        self.bound = isqrt(m // 2)
        self.den = 1

    def __call__(self, a):
        m = self.m
        v = a * self.den % m
        if v > m // 2:
            v -= m
        if abs(v) <= self.bound:
            return mpq(v, self.den)
        r = rational_reconstruction(a, m, self.bound)
        if r is not None:
            self.den = lcm(self.den, int(r.denominator))
        return r


def _reconstruct(q, coords, m):
    rec = _Reconstructor(m)
    out = []
    for poly in [q] + coords:
        vals = []
        for c in poly:
            r = rec(c)
            if r is None:
                return None
            vals.append(r)
        out.append(UniPoly(vals))
    return out[0], out[1:]


def _square_system(int_terms, nvars, rng):
    """At most ``nvars`` equations: random integer combinations when overdetermined."""
    if len(int_terms) <= nvars:
        return [dict(t) for t in int_terms]
    out = []
    for _ in range(nvars):
        acc = {}
        for t in int_terms:
            c = rng.randint(1, 97)
            for e, v in t.items():
                nv = acc.get(e, 0) + c * v
                if nv:
                    acc[e] = nv
                else:
                    acc.pop(e, None)
        out.append(acc)
    return out


def _jacobian_terms(system, nvars):
    jac = []
    for t in system:
        row = []
        for i in range(nvars):
            d = {}
            for e, c in t.items():
                k = e[i]
                if k:
                    ne = e[:i] + (k - 1,) + e[i + 1:]
                    d[ne] = d.get(ne, 0) + k * c
            row.append({e: c for e, c in d.items() if c})
        jac.append(row)
    return jac


def _eval_matrix(ring, terms, values):
    return [[ring.evaluate(t, values) if t else [] for t in row] for row in terms]


def _form_value(ring, lam, coords):
    acc = []
    for a, v in zip(lam, coords):
        if a:
            acc = ring.add(acc, ring.scale(v, _modq(a, ring.n)))
    return acc


def hensel_lift(equations, space, q, coords, lam, prime, rng, max_bits=DEFAULT_MAX_BITS):
    """Lift a parametrization over GF(p) of simple solutions to one over Q.

    ``q`` is monic and squarefree over GF(p), ``coords[i](T)`` gives the
    i-th variable, and ``lam . coords == T``.  The result (q, coords) over Q
    is returned only after it passes the exact check.
    """
    nvars = len(space)
    int_terms = [integer_terms(f) for f in equations if not f.is_zero()]
    system = _square_system(int_terms, nvars, rng)
    if len(system) < nvars:
        raise DimensionError("fewer equations than unknowns; the solution set is not finite")
    jac_terms = _jacobian_terms(system, nvars)
    d = len(q) - 1
    ring = _Ring(q, prime, terms=max(nvars, 8))
    jinv = _initial_inverse(_eval_matrix(ring, jac_terms, coords), q, prime, rng)
    m = prime
    values = [list(v) for v in coords]
    q = list(q)
    tpoly = [0, 1]
    while m.bit_length() < max_bits:
        m2 = m * m
        ring = _Ring(q, m2, terms=max(nvars, 8))
        fv = [ring.evaluate(t, values) for t in system]
        step = ring.matvec(jinv, fv)
        w = [ring.sub(v, s) for v, s in zip(values, step)]
        delta = ring.sub(_form_value(ring, lam, w), ring.reduce(tpoly))
        dq = _deriv(q, m2)
        q_new = _pad_monic(ring.sub(q[:d], ring.mul(dq, delta)), d)
        ring2 = _Ring(q_new, m2, terms=max(nvars, 8))
        values = [ring2.sub(v, ring2.mul(_deriv(v, m2), delta)) for v in w]
        q, m, ring = q_new, m2, ring2
        jac = _eval_matrix(ring, jac_terms, values)
        resid = ring.matmul(jac, jinv)
        ident = [[[1] if i == j else [] for j in range(nvars)] for i in range(nvars)]
        err = [[ring.sub(a, b) for a, b in zip(r1, r2)] for r1, r2 in zip(ident, resid)]
        corr = ring.matmul(jinv, err)
        jinv = [[ring.add(a, b) for a, b in zip(r1, r2)] for r1, r2 in zip(jinv, corr)]
        log.debug("lifted to %d bits", m.bit_length())
        # coordinates are reconstructed as q' * v mod q, whose height is far
        # smaller than that of v itself
        dq = _deriv(q, m)
        scaled = [ring.mul(v, dq) for v in values]
        cand = _reconstruct(q, scaled, m)
        if cand is not None and _verify(equations, cand[0], cand[1], lam):
            return cand
    raise ResourceError(f"p-adic lifting did not stabilise below {max_bits} bits")


def _pad_monic(low, d):
    return list(low) + [0] * (d - len(low)) + [1]


def _verify(equations, q, scaled, lam):
    """Exact check over Q of (q, q' v_1, ..., q' v_n).

    q must be squarefree, the form must give T, and each equation f of
    degree D satisfies q'^D f(v) == 0 mod q, evaluated without inverting q'.
    """
    if q.degree < 1:
        return True
    dq = q.derivative()
    if poly_gcd(q, dq).degree > 0:
        return False
    form = UniPoly()
    for a, w in zip(lam, scaled):
        if a:
            form = form + w * a
    if (form - UniPoly([0, 1]) * dq) % q:
        return False
    dq_pows = [UniPoly([1])]
    cache = {}
    for f in equations:
        deg = f.total_degree()
        while len(dq_pows) <= deg:
            dq_pows.append((dq_pows[-1] * dq) % q)
        acc = UniPoly()
        for e, c in f.terms.items():
            term = dq_pows[deg - sum(e)] * c
            for i, k in enumerate(e):
                if not k:
                    continue
                pw = cache.get((i, k))
                if pw is None:
                    pw = scaled[i] % q
                    for _ in range(k - 1):
                        pw = (pw * scaled[i]) % q
                    cache[(i, k)] = pw
                term = (term * pw) % q
            acc = acc + term
        if acc % q:
            return False
    return True


# -- driver -----------------------------------------------------------------

def solve_points(equations, space, keep="x", rank_matrix=None, rank=None, rng=None,
                 form=None, known=None, budget=None, max_bits=DEFAULT_MAX_BITS,
                 prime_tries=3):
    """Parametrization over Q of the projection to ``keep`` of a finite variety.

    ``rank_matrix`` (rows of polynomials in ``space``) with ``rank`` keeps
    only the points where that matrix has rank at least ``rank``.  ``form``
    (rational weights on the kept variables) is tried first as separating
    form.  When ``known`` is a parametrization with the same form whose
    reduction modulo p encodes exactly the same points, it is returned
    without lifting.  Raises DimensionError when the system has infinitely
    many solutions modulo p.
    """
    rng = rng or random.Random(0)
    keep_idx = list(space.resolve(keep))
    keep_names = [space.names[i] for i in keep_idx]
    mat_terms = None
    bad = 1
    if rank_matrix is not None:
        # one common denominator keeps every minor a nonzero multiple of the original
        den = 1
        for row in rank_matrix:
            for e in row:
                for c in e.terms.values():
                    den = lcm(den, int(c.denominator))
        mat_terms = [[{k: int(v * den) for k, v in e.terms.items()} for e in row]
                     for row in rank_matrix]
        bad = den
    for eq in equations:
        for c in eq.terms.values():
            bad = lcm(bad, int(c.denominator))
    for a in form or ():
        bad = lcm(bad, int(a.denominator))
    if known is not None and not known.is_empty():
        for poly in [known.q, known.q0] + list(known.coords):
            for c in poly.coeffs:
                bad = lcm(bad, int(c.denominator))
    last_error = None
    gen = primes()
    for _ in range(prime_tries):
        p = next(gen)
        while bad % p == 0:
            p = next(gen)
        try:
            return _solve_with_prime(equations, space, keep_idx, keep_names, mat_terms, rank,
                                     p, rng, form, known, budget, max_bits)
        except LiftingError as exc:
            log.info("prime %d rejected: %s", p, exc)
            last_error = exc
    raise last_error


def _modq(a, n):
    a = mpq(a)
    return int(a.numerator) * pow(int(a.denominator), -1, n) % n


def _known_mod_p(known, p):
    """(q, coordinate values) of a parametrization over Q, reduced modulo p."""
    q = [_modq(c, p) for c in known.q.coeffs]
    if q[-1] != 1:
        inv = pow(q[-1], -1, p)
        q = [c * inv % p for c in q]
    q0 = _trim([_modq(c, p) for c in known.q0.coeffs])
    inv = _pinv(q0, q, p)
    if inv is None:
        return None
    ring = _Ring(q, p)
    return q, [ring.mul(_trim([_modq(c, p) for c in w.coeffs]), inv) for w in known.coords]


def _solve_with_prime(equations, space, keep_idx, keep_names, mat_terms, rank, p, rng,
                      form, known, budget, max_bits):
    mideal = ModularIdeal(equations, space, p, budget)
    if mideal.is_unit():
        return RationalParametrization.empty(len(keep_idx), keep_names)
    q, coords, lam = modular_parametrization(mideal, rng)
    if len(q) <= 1:
        return RationalParametrization.empty(len(keep_idx), keep_names)
    if mat_terms is not None:
        bad = rank_deficient_factor(q, coords, _mod_terms(mat_terms, p), rank, p)
        if len(bad) > 1:
            q, coords = _restrict(q, coords, bad, p)
        if len(q) <= 1:
            return RationalParametrization.empty(len(keep_idx), keep_names)
    # prefer a separating form in the kept variables only
    injective = False
    bound = 1
    for attempt in range(7):
        if attempt == 0 and form is not None:
            lam_x = list(form)
        else:
            lam_x = _random_form(rng, len(keep_idx), bound)
            bound *= 2
        full = [0] * len(space)
        for i, a in zip(keep_idx, lam_x):
            full[i] = a
        ring = _Ring(q, p)
        w = _form_value(ring, full, coords)
        got = _rewrite_in(q, coords, w, p)
        if got is not None:
            q, coords = got
            lam = full
            injective = True
            break
    if (injective and known is not None and known.separating_form is not None
            and list(known.separating_form) == [lam[i] for i in keep_idx]):
        image = _known_mod_p(known, p)
        if image is not None and image[0] == q and image[1] == [coords[i] for i in keep_idx]:
            log.info("support adds no new points modulo p; reusing the known parametrization")
            return known
    lq, scaled = hensel_lift(equations, space, q, coords, lam, p, rng, max_bits)
    xs = [scaled[i] for i in keep_idx]
    dq = lq.derivative()
    if injective:
        return RationalParametrization(lq, dq, xs, keep_names, [lam[i] for i in keep_idx])
    log.info("projection is not injective; merging points over Q")
    sub = VariableSpace([("x", keep_names)])
    raw = RationalParametrization(lq, dq, xs, keep_names)
    ideal, _ = ideal_of_parametrizations([raw], sub)
    return rur(ideal, rng)


def _mod_terms(mat_terms, p):
    return [[{e: c % p for e, c in t.items() if c % p} for t in row]
            for row in mat_terms]


__all__ = [
    "ModularIdeal", "LiftingError", "primes", "solve_points", "hensel_lift",
    "rational_reconstruction", "modular_parametrization", "rank_deficient_factor",
]
