"""Groebner bases, elimination and rational univariate representations.

Buchberger's algorithm with the sugar selection strategy and the
Gebauer-Moeller criteria.  Zero-dimensional ideals are handled through
their finite quotient algebra: elimination and union are kernel
computations of linear maps out of a polynomial ring (FGLM style), and the
parametrization comes from the multiplication matrix of a separating form.
"""

import heapq
import logging
import os
import random
from operator import add, sub

from .errors import DimensionError, RandomnessBudgetError, ResourceError
from .exactpoly import ONE, QQ, ZERO, MonomialOrder, MultiPoly, VariableSpace, fmt_rational
from .linalg import Echelon
from .univar import UniPoly, invmod, poly_gcd, squarefree_part

log = logging.getLogger(__name__)

DEFAULT_STEP_BUDGET = 10 ** 7


def default_step_budget():
    env = os.environ.get("EXACTSDP_STEP_BUDGET")
    return int(env) if env else DEFAULT_STEP_BUDGET


class Ideal:
    """Generators in a VariableSpace, with Groebner bases cached per order."""

    def __init__(self, generators, space=None):
        gens = [g for g in generators if not g.is_zero()]
        if space is None:
            if not generators:
                raise ValueError("an empty ideal needs an explicit VariableSpace")
            space = generators[0].space
        for g in gens:
            if g.space != space:
                raise ValueError("generators live in different variable spaces")
        self.space = space
        self.generators = tuple(gens)
        self._gb = {}

    def __repr__(self):
        return "Ideal<" + ", ".join(g.to_text() for g in self.generators) + ">"

    def cached_basis(self, order):
        return self._gb.get(order)

    def _store(self, order, basis):
        self._gb[order] = basis

    def is_zero(self):
        return not self.generators


# -- internal polynomial records -----------------------------------------

class _Elem:
    __slots__ = ("lt", "lkey", "tail", "terms", "sugar", "mask", "alive")

    def __init__(self, terms, keyf, sugar, mod=None):
        items = sorted(((keyf(e), e, c) for e, c in terms.items()), reverse=True)
        k0, e0, c0 = items[0]
        self.lt = e0
        self.lkey = k0
        if mod:
            inv = pow(c0, -1, mod)
            self.tail = [(e, k, c * inv % mod) for k, e, c in items[1:]]
            self.terms = {e: c * inv % mod for k, e, c in items}
        else:
            inv = 1 / c0
            self.tail = [(e, k, c * inv) for k, e, c in items[1:]]
            self.terms = {e: c * inv for k, e, c in items}
        self.sugar = sugar
        self.mask = _mask(e0)
        self.alive = True


def _mask(e):
    m = 0
    for i, k in enumerate(e):
        if k:
            m |= 1 << i
    return m


def _divides(a, b):
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _lcm(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


def _coprime(a, b):
    for x, y in zip(a, b):
        if x and y:
            return False
    return True


class _Budget:
    __slots__ = ("left",)

    def __init__(self, steps):
        self.left = steps

    def spend(self, n=1):
        self.left -= n
        if self.left < 0:
            raise ResourceError("Groebner reduction step budget exhausted "
                                "(raise EXACTSDP_STEP_BUDGET to continue)")


class _Reducer:
    """Full reduction of polynomials (dicts) modulo a list of _Elem.

    Coefficients are rationals, or ints in [0, mod) when ``mod`` is set.
    """

    def __init__(self, keyf, nvars, budget, mod=None):
        self.keyf = keyf
        self.budget = budget
        self.mod = mod
        self.basis = []

    def find(self, e, emask):
        for g in self.basis:
            if g.alive and not (g.mask & ~emask) and _divides(g.lt, e):
                return g
        return None

    def reduce(self, terms, full=True):
        keyf = self.keyf
        mod = self.mod
        f = dict(terms)
        keys = {e: keyf(e) for e in f}
        heap = [(-k, e) for e, k in keys.items()]
        heapq.heapify(heap)
        inheap = set(f)
        out = {}
        spend = self.budget.spend
        while heap:
            negk, e = heapq.heappop(heap)
            inheap.discard(e)
            c = f.pop(e, None)
            if c is None:
                continue
            g = self.find(e, _mask(e))
            if g is None:
                out[e] = c
                if not full:
                    for e2, c2 in f.items():
                        out[e2] = c2
                    return out
                continue
            spend()
            shift = tuple(map(sub, e, g.lt))
            skey = -negk - g.lkey
            for ge, gk, gc in g.tail:
                ne = tuple(map(add, ge, shift))
                v = f.get(ne)
                if v is None:
                    f[ne] = (-c * gc) % mod if mod else -c * gc
                    if ne not in inheap:
                        heapq.heappush(heap, (-(gk + skey), ne))
                        inheap.add(ne)
                else:
                    nv = (v - c * gc) % mod if mod else v - c * gc
                    if nv:
                        f[ne] = nv
                    else:
                        del f[ne]
        return out


def _spoly(f, g, mod=None):
    lcm = _lcm(f.lt, g.lt)
    sf = tuple(map(sub, lcm, f.lt))
    sg = tuple(map(sub, lcm, g.lt))
    out = {}
    for e, c in f.terms.items():
        out[tuple(map(add, e, sf))] = c
    for e, c in g.terms.items():
        ne = tuple(map(add, e, sg))
        v = out.get(ne, 0) - c
        if mod:
            v %= mod
        if v:
            out[ne] = v
        else:
            out.pop(ne, None)
    sugar = max(f.sugar + sum(sf), g.sugar + sum(sg))
    return out, sugar


def _buchberger(polys, order, nvars, budget, mod=None):
    """Reduced Groebner basis of the given term dicts; returns list of dicts.

    Over Q by default; over GF(mod) (integer coefficients) when ``mod`` is set.
    """
    keyf = order.key
    one = 1 if mod else ONE
    red = _Reducer(keyf, nvars, budget, mod)
    pairs = []   # heap of (sugar, lcm key, seq, f, g)
    seq = 0

    def update(h):
        nonlocal seq
        active = [g for g in red.basis if g.alive]
        # Gebauer-Moeller: prune the new pairs (h, g)
        cands = [(g, _lcm(h.lt, g.lt)) for g in active]
        kept = []
        for idx, (g1, l1) in enumerate(cands):
            if _coprime(h.lt, g1.lt):
                kept.append((g1, l1, True))
                continue
            redundant = False
            for g2, l2 in cands[idx + 1:]:
                if _divides(l2, l1):
                    redundant = True
                    break
            if not redundant:
                for g2, l2, _ in kept:
                    if _divides(l2, l1):
                        redundant = True
                        break
            if not redundant:
                kept.append((g1, l1, False))
        # old pairs whose lcm is a multiple of lt(h) are redundant unless
        # lcm equals one of the new lcms
        survivors = []
        for item in pairs:
            _, _, _, g1, g2, l12 = item
            if _divides(h.lt, l12) and _lcm(g1.lt, h.lt) != l12 and _lcm(h.lt, g2.lt) != l12:
                continue
            survivors.append(item)
        pairs[:] = survivors
        heapq.heapify(pairs)
        for g, l, coprime in kept:
            if coprime:
                continue
            sugar = max(h.sugar + sum(l) - sum(h.lt), g.sugar + sum(l) - sum(g.lt))
            seq += 1
            heapq.heappush(pairs, (sugar, keyf(l), seq, g, h, l))
        for g in active:
            if _divides(h.lt, g.lt):
                g.alive = False
        red.basis.append(h)

    initial = []
    for p in polys:
        if p:
            initial.append(p)
    initial.sort(key=lambda t: max(keyf(e) for e in t))
    for p in initial:
        sugar = max(sum(e) for e in p)
        r = red.reduce(p)
        if not r:
            continue
        h = _Elem(r, keyf, sugar, mod)
        if not any(h.lt):
            return [{(0,) * nvars: one}]
        update(h)

    while pairs:
        sugar, _, _, f, g, l = heapq.heappop(pairs)
        s, s_sugar = _spoly(f, g, mod)
        r = red.reduce(s)
        if not r:
            continue
        h = _Elem(r, keyf, s_sugar, mod)
        if not any(h.lt):
            return [{(0,) * nvars: one}]
        update(h)

    # interreduce the minimal basis
    final = sorted((g for g in red.basis if g.alive), key=lambda g: g.lkey)
    out = []
    for i, g in enumerate(final):
        red.basis = [h for j, h in enumerate(final) if j != i]
        tail = red.reduce({e: c for e, _, c in g.tail})
        tail[g.lt] = one
        out.append(tail)
    return out


def _to_multipoly(space, terms):
    return MultiPoly(space, terms)


def groebner_basis(ideal, order=None, budget=None):
    """Reduced Groebner basis (monic, sorted by increasing leading monomial)."""
    space = ideal.space
    order = order or MonomialOrder.grevlex(len(space))
    cached = ideal.cached_basis(order)
    if cached is not None:
        return list(cached)
    bud = _Budget(default_step_budget() if budget is None else budget)
    raw = _buchberger([dict(g.terms) for g in ideal.generators], order, len(space), bud)
    basis = [_to_multipoly(space, t) for t in raw]
    basis.sort(key=lambda p: order.key(p.leading_term(order)[0]))
    ideal._store(order, tuple(basis))
    return basis


def normal_form(p, basis, order=None):
    """Remainder of p modulo a Groebner basis (zero iff p is in the ideal)."""
    space = p.space
    order = order or MonomialOrder.grevlex(len(space))
    red = _Reducer(order.key, len(space), _Budget(default_step_budget()))
    red.basis = [_Elem(dict(g.terms), order.key, 0) for g in basis if not g.is_zero()]
    return MultiPoly(space, red.reduce(dict(p.terms)))


def leading_monomials(basis, order):
    return [g.leading_term(order)[0] for g in basis]


def is_unit_ideal(ideal, budget=None):
    gb = groebner_basis(ideal, budget=budget)
    return len(gb) == 1 and gb[0].is_constant()


def _staircase_is_finite(lts, nvars):
    if any(not any(e) for e in lts):
        return True
    return all(any(e[i] and sum(e) == e[i] for e in lts) for i in range(nvars))


def _is_zero_dim_basis(basis, order, nvars):
    return _staircase_is_finite(leading_monomials(basis, order), nvars)


def is_zero_dimensional(ideal, budget=None):
    """Finite staircase test on a grevlex basis (the unit ideal counts)."""
    order = MonomialOrder.grevlex(len(ideal.space))
    gb = groebner_basis(ideal, order, budget)
    return _is_zero_dim_basis(gb, order, len(ideal.space))


def _standard_monomials(lts, nvars, keyf):
    if not _staircase_is_finite(lts, nvars):
        raise DimensionError("ideal is not zero-dimensional (infinite staircase)")
    if any(not any(e) for e in lts):
        return []
    out = []
    seen = {(0,) * nvars}
    frontier = [(0,) * nvars]
    while frontier:
        m = frontier.pop()
        out.append(m)
        for i in range(nvars):
            nm = m[:i] + (m[i] + 1,) + m[i + 1:]
            if nm in seen:
                continue
            seen.add(nm)
            if not any(_divides(lt, nm) for lt in lts):
                frontier.append(nm)
    out.sort(key=keyf)
    return out


def quotient_basis(basis, order=None, space=None):
    """Standard monomials (exponent tuples) under the staircase, increasing order."""
    if space is None:
        if not basis:
            raise DimensionError("the zero ideal has an infinite staircase")
        space = basis[0].space
    order = order or MonomialOrder.grevlex(len(space))
    return _standard_monomials(leading_monomials(basis, order), len(space), order.key)


class QuotientAlgebra:
    """Q[vars]/I (or GF(p)[vars]/I) for zero-dimensional I.

    ``basis_terms`` is a reduced grevlex Groebner basis as term dicts.
    Elements are sparse coordinate dicts over the standard monomials, and
    multiplication matrices are stored as lists of sparse columns.
    """

    def __init__(self, basis_terms, nvars, mod=None):
        self.nvars = nvars
        self.mod = mod
        self.order = MonomialOrder.grevlex(nvars)
        keyf = self.order.key
        lts = [max(t, key=keyf) for t in basis_terms]
        self.monomials = _standard_monomials(lts, nvars, keyf)
        self.index = {m: i for i, m in enumerate(self.monomials)}
        self.dim = len(self.monomials)
        self._red = _Reducer(keyf, nvars, _Budget(default_step_budget()), mod)
        self._red.basis = [_Elem(dict(t), keyf, 0, mod) for t in basis_terms]
        self._mult = {}

    @classmethod
    def of_ideal(cls, ideal, budget=None):
        gb = groebner_basis(ideal, MonomialOrder.grevlex(len(ideal.space)), budget)
        return cls([g.terms for g in gb], len(ideal.space))

    def vector(self, poly_terms):
        nf = self._red.reduce(dict(poly_terms))
        return {self.index[e]: c for e, c in nf.items()}

    def mult_matrix(self, i):
        """Columns (sparse dicts) of multiplication by variable i."""
        cols = self._mult.get(i)
        if cols is None:
            one = 1 if self.mod else ONE
            cols = []
            for m in self.monomials:
                nm = m[:i] + (m[i] + 1,) + m[i + 1:]
                j = self.index.get(nm)
                cols.append({j: one} if j is not None else self.vector({nm: one}))
            self._mult[i] = cols
        return cols

    def mult_by_form(self, coeffs):
        """Columns of multiplication by sum(coeffs[i] * var_i)."""
        mod = self.mod
        cols = [dict() for _ in range(self.dim)]
        for i, a in enumerate(coeffs):
            if not a:
                continue
            for j, col in enumerate(self.mult_matrix(i)):
                tgt = cols[j]
                for k, v in col.items():
                    nv = tgt.get(k, 0) + a * v
                    if mod:
                        nv %= mod
                    if nv:
                        tgt[k] = nv
                    else:
                        tgt.pop(k, None)
        return cols

    def one(self):
        if not self.dim:
            return {}
        return {self.index[(0,) * self.nvars]: 1 if self.mod else ONE}


def apply_cols(cols, vec, mod=None):
    out = {}
    for j, c in vec.items():
        for k, v in cols[j].items():
            nv = out.get(k, 0) + c * v
            if mod:
                nv %= mod
            if nv:
                out[k] = nv
            else:
                out.pop(k, None)
    return out


def kernel_ideal(space, mult, one, order=None):
    """Groebner basis of the kernel of a multiplicative linear map Q[space] -> W.

    ``one`` is the image of 1 and ``mult(i, w)`` the image of var_i times a
    preimage of w.  Monomials are scanned in increasing ``order``; the first
    dependent one in each direction becomes a leading monomial (FGLM).
    Returns (basis as MultiPoly list, standard monomials).
    """
    nvars = len(space)
    order = order or MonomialOrder.grevlex(nvars)
    keyf = order.key
    zero_e = (0,) * nvars
    ech = Echelon()
    images = {}
    standard = []
    lts = []
    gb = []
    heap = [(keyf(zero_e), zero_e)]
    seen = {zero_e}
    while heap:
        _, m = heapq.heappop(heap)
        if any(_divides(lt, m) for lt in lts):
            continue
        if m == zero_e:
            vec = dict(one)
        else:
            i = next(k for k in range(nvars) if m[k] and
                     (m[:k] + (m[k] - 1,) + m[k + 1:]) in images)
            prev = m[:i] + (m[i] - 1,) + m[i + 1:]
            vec = mult(i, images[prev])
        rel = ech.insert(vec, m)
        if rel is None:
            images[m] = vec
            standard.append(m)
            for k in range(nvars):
                nm = m[:k] + (m[k] + 1,) + m[k + 1:]
                if nm not in seen:
                    seen.add(nm)
                    heapq.heappush(heap, (keyf(nm), nm))
        else:
            terms = {m: ONE}
            for b, c in rel.items():
                terms[b] = terms.get(b, ZERO) - c
            lts.append(m)
            gb.append(MultiPoly(space, terms))
    if not standard:
        gb = [space.const(1)]
    return gb, standard


def subspace_without(space, drop):
    dropped = set(space.resolve(drop))
    blocks = []
    for b, vs in space.blocks:
        kept = tuple(v for v in vs if space.index(v) not in dropped)
        if kept:
            blocks.append((b, kept))
    return VariableSpace(blocks)


def restrict_poly(p, subspace):
    idx = [p.space.index(v) for v in subspace.names]
    out = {}
    for e, c in p.terms.items():
        if any(k for i, k in enumerate(e) if i not in set(idx)):
            raise ValueError("polynomial involves a dropped variable")
        out[tuple(e[i] for i in idx)] = c
    return MultiPoly(subspace, out)


def eliminate(ideal, drop, budget=None):
    """Generators of the elimination ideal, in the space without ``drop``.

    Zero-dimensional ideals are projected through their quotient algebra
    (the kernel of Q[kept] -> Q[all]/I, which is the reduced basis the
    block order would produce).  Other ideals use a block-order basis and
    keep the elements free of dropped variables.
    """
    space = ideal.space
    sub_space = subspace_without(space, drop)
    drop_idx = set(space.resolve(drop))
    keep_idx = [i for i in range(len(space)) if i not in drop_idx]
    if not drop_idx:
        return Ideal(list(ideal.generators), space)
    if is_zero_dimensional(ideal, budget):
        alg = QuotientAlgebra.of_ideal(ideal, budget)
        if alg.dim == 0:
            return Ideal([sub_space.const(1)], sub_space)

        def mult(i, vec):
            return apply_cols(alg.mult_matrix(keep_idx[i]), vec)

        gb, _ = kernel_ideal(sub_space, mult, alg.one())
        out = Ideal(gb, sub_space)
        out._store(MonomialOrder.grevlex(len(sub_space)), tuple(gb))
        return out
    order = MonomialOrder("block", len(space), drop_idx)
    gb = groebner_basis(ideal, order, budget)
    kept = [restrict_poly(g, sub_space) for g in gb
            if all(not e[i] for e in g.terms for i in drop_idx)]
    return Ideal(kept, sub_space)


# -- rational parametrizations ------------------------------------------

class RationalParametrization:
    """(q, q0, q1..qn): points (q1/q0, ..., qn/q0)(t) over the roots of q."""

    def __init__(self, q, q0, coords, variables=None, separating_form=None):
        self.q = q
        self.q0 = q0
        self.coords = tuple(coords)
        self.variables = tuple(variables) if variables else tuple(
            f"x{i + 1}" for i in range(len(self.coords)))
        self.separating_form = (tuple(QQ(a) for a in separating_form)
                                if separating_form else None)

    @property
    def degree(self):
        return self.q.degree

    @property
    def n(self):
        return len(self.coords)

    @classmethod
    def empty(cls, n, variables=None):
        return cls(UniPoly([1]), UniPoly(), [UniPoly()] * n, variables)

    def is_empty(self):
        return self.q.degree < 1

    def coordinate_polys(self):
        """v_i = q_i * q0^{-1} mod q, valid at every root of q."""
        if self.is_empty():
            return [UniPoly()] * self.n
        inv = invmod(self.q0, self.q)
        return [(qi * inv) % self.q for qi in self.coords]

    def to_json(self):
        out = {
            "q": self.q.to_strings(),
            "q0": self.q0.to_strings(),
            "qi": [c.to_strings() for c in self.coords],
            "variables": list(self.variables),
        }
        if self.separating_form is not None:
            out["separating_form"] = [fmt_rational(a) for a in self.separating_form]
        return out

    @classmethod
    def from_json(cls, data):
        return cls(UniPoly.from_strings(data["q"]), UniPoly.from_strings(data["q0"]),
                   [UniPoly.from_strings(c) for c in data["qi"]],
                   data.get("variables"), data.get("separating_form"))

    def __repr__(self):
        return f"RationalParametrization(deg={self.degree}, q={self.q.to_text()})"


def eval_poly_mod(p, values, q):
    """p(values) in Q[t]/(q) for a MultiPoly p and UniPoly images of its variables."""
    acc = UniPoly()
    powers = [dict() for _ in values]
    for e, c in p.terms.items():
        term = UniPoly([c])
        for i, k in enumerate(e):
            if not k:
                continue
            pw = powers[i].get(k)
            if pw is None:
                pw = pow_mod(values[i], k, q)
                powers[i][k] = pw
            term = (term * pw) % q
        acc = acc + term
    return acc % q


def pow_mod(p, k, q):
    result = UniPoly([1]) % q if q.degree > 0 else UniPoly()
    base = p % q
    while k:
        if k & 1:
            result = (result * base) % q
        base = (base * base) % q
        k >>= 1
    return result


def check_parametrization(generators, rp):
    """Exact residual test: every generator vanishes at every encoded point."""
    if rp.is_empty():
        return True
    q = squarefree_part(rp.q)
    if poly_gcd(q, rp.q0).degree > 0:
        return False
    vals = rp.coordinate_polys()
    return all(eval_poly_mod(g, vals, q).is_zero() for g in generators)


def _krylov(alg, cols, maxdim):
    """Minimal polynomial of the element whose multiplication columns are ``cols``.

    Returns (coefficients low -> high, echelon spanning 1, u, ..., u^(d-1)).
    """
    mod = alg.mod
    ech = Echelon(mod)
    vec = alg.one()
    for k in range(maxdim + 1):
        rel = ech.insert(vec, k)
        if rel is not None:
            coeffs = [0] * (k + 1)
            coeffs[k] = 1
            for j, c in rel.items():
                coeffs[j] = (coeffs[j] - c) % mod if mod else coeffs[j] - c
            return (coeffs if mod else UniPoly(coeffs)), ech
        vec = apply_cols(cols, vec, mod)
    raise AssertionError("Krylov sequence did not terminate")


def _express(ech, vec):
    rel = ech.express(vec)
    if rel is None:
        raise AssertionError("vector outside the Krylov span")
    return rel


def radical_ideal(ideal, budget=None):
    """Radical of a zero-dimensional ideal (add squarefree univariate eliminants)."""
    alg = QuotientAlgebra.of_ideal(ideal, budget)
    extra = []
    space = ideal.space
    for i in range(len(space)):
        mp, _ = _krylov(alg, alg.mult_matrix(i), alg.dim)
        sq = squarefree_part(mp)
        if sq.degree < mp.degree:
            var = space.gen(space.names[i])
            poly = space.zero()
            for k, c in enumerate(sq.coeffs):
                poly = poly + var ** k * c
            extra.append(poly)
    if not extra:
        return ideal
    return Ideal(list(groebner_basis(ideal, budget=budget)) + extra, space)


def rur(ideal, rng=None, budget=None, max_retries=8, form=None):
    """Rational univariate representation of a zero-dimensional ideal.

    ``form`` is tried first when given.  Otherwise (or if it does not
    separate) the separating form has integer coefficients drawn from
    [-2B, 2B], with B doubling on every failed attempt.  The normalisation
    is q0 = q'.
    """
    space = ideal.space
    n = len(space)
    if not is_zero_dimensional(ideal, budget):
        raise DimensionError("ideal is not zero-dimensional; no rational parametrization")
    rng = rng or random.Random(0)
    alg = QuotientAlgebra.of_ideal(ideal, budget)
    if alg.dim == 0:
        return RationalParametrization.empty(n, space.names)
    radical_checked = False
    bound = 1
    for attempt in range(max_retries + 1):
        if attempt == 0 and form is not None:
            lam = [QQ(a) for a in form]
        else:
            lam = [rng.randint(-2 * bound, 2 * bound) for _ in range(n)]
            bound *= 2
        if not any(lam):
            continue
        cols = alg.mult_by_form(lam)
        mp, ech = _krylov(alg, cols, alg.dim)
        d = mp.degree
        if d < alg.dim or squarefree_part(mp).degree < d:
            if not radical_checked:
                radical_checked = True
                rad = radical_ideal(ideal, budget)
                if rad is not ideal:
                    log.info("ideal is not radical; continuing with its radical")
                    ideal = rad
                    alg = QuotientAlgebra.of_ideal(rad, budget)
                    cols = alg.mult_by_form(lam)
                    mp, ech = _krylov(alg, cols, alg.dim)
                    d = mp.degree
            if d < alg.dim:
                log.info("linear form %s is not separating; redrawing", lam)
                continue
        coords = []
        for i in range(n):
            expr = _express(ech, apply_cols(alg.mult_matrix(i), alg.one()))
            coords.append(UniPoly([expr.get(k, ZERO) for k in range(d)]))
        q = mp
        dq = q.derivative()
        rp = RationalParametrization(q, dq, [(c * dq) % q for c in coords],
                                     space.names, lam)
        if check_parametrization(ideal.generators, rp):
            return rp
        log.info("re-substitution check failed for form %s; redrawing", lam)
    raise RandomnessBudgetError("no separating linear form found within the retry budget")


def ideal_of_parametrizations(params, space):
    """Vanishing ideal of the union of the point sets (kernel construction)."""
    parts = []
    offset = 0
    for rp in params:
        if rp.is_empty():
            continue
        q = squarefree_part(rp.q)
        inv = invmod(rp.q0 % q, q)
        vals = [(c * inv) % q for c in rp.coords]
        parts.append((offset, q, vals))
        offset += q.degree
    if not parts:
        return Ideal([space.const(1)], space), []

    def split(vec):
        out = []
        for off, q, _ in parts:
            out.append(UniPoly([vec.get(off + k, ZERO) for k in range(q.degree)]))
        return out

    def join(polys):
        vec = {}
        for (off, q, _), p in zip(parts, polys):
            for k, c in enumerate(p.coeffs):
                if c:
                    vec[off + k] = c
        return vec

    def mult(i, vec):
        return join([(p * vals[i]) % q for p, (_, q, vals) in zip(split(vec), parts)])

    one = join([UniPoly([1]) for _ in parts])
    gb, standard = kernel_ideal(space, mult, one)
    ideal = Ideal(gb, space)
    ideal._store(MonomialOrder.grevlex(len(space)), tuple(gb))
    return ideal, standard


def union_params(q1, q2, rng=None, budget=None):
    """Parametrization of the set union (shared points appear once)."""
    if q1.n != q2.n:
        raise ValueError(f"coordinate count mismatch: {q1.n} vs {q2.n}")
    if q1.is_empty():
        return q2
    if q2.is_empty():
        return q1
    if (q1.separating_form is not None and q1.separating_form == q2.separating_form
            and tuple(q1.variables) == tuple(q2.variables)):
        merged = _merge_same_form(q1, q2)
        if merged is not None:
            return merged
    space = VariableSpace([("x", q1.variables)])
    ideal, _ = ideal_of_parametrizations([q1, q2], space)
    return rur(ideal, rng, budget)


def _normalized(rp):
    """(q, W) with q squarefree and coordinates W_i / q' at the roots of q."""
    q = rp.q
    if q.degree > 0 and rp.q0 == q.derivative() and poly_gcd(q, rp.q0).degree < 1:
        return q, list(rp.coords)
    q = squarefree_part(q)
    inv = invmod(rp.q0, q)
    dq = q.derivative()
    return q, [(c * inv * dq) % q for c in rp.coords]


def _monic(q, ws):
    # W / q' is unchanged when q and W are divided by the same constant
    c = q.lead
    if c == 1:
        return q, ws
    return q.monic(), [w * (1 / c) for w in ws]


def _merge_same_form(a, b):
    """Union of two parametrizations sharing a separating form, by CRT.

    Both are brought to the form (q, q', W); roots common to both q's must
    carry the same coordinates, otherwise the form does not separate the
    union and None is returned.
    """
    if a is b or (a.q == b.q and a.q0 == b.q0 and a.coords == b.coords):
        return a
    qa, wa = _normalized(a)
    qb, wb = _normalized(b)
    qa, wa = _monic(qa, wa)
    qb, wb = _monic(qb, wb)
    g = poly_gcd(qa, qb)
    dqa, dqb = qa.derivative(), qb.derivative()
    if g.degree > 0 and any((x * dqb - y * dqa) % g for x, y in zip(wa, wb)):
        return None
    rest = qb // g
    if rest.degree < 1:
        q, ws = qa, wa
    elif g.degree < 1:
        q = qa * qb
        ws = [x * qb + y * qa for x, y in zip(wa, wb)]
    else:
        # at roots of rest, q' = qa * rest' and qb' = g * rest'
        q = qa * rest
        inv = invmod(g % rest, rest)
        ws = [(x * rest + qa * ((y * inv) % rest)) % q for x, y in zip(wa, wb)]
    return RationalParametrization(q, q.derivative(), ws, a.variables, a.separating_form)


def format_parametrization(rp):
    lines = [f"q(t)  = {rp.q.to_text()}", f"q0(t) = {rp.q0.to_text()}"]
    for name, c in zip(rp.variables, rp.coords):
        lines.append(f"{name}: {c.to_text()}")
    return "\n".join(lines)


__all__ = [
    "Ideal", "groebner_basis", "normal_form", "eliminate", "is_zero_dimensional",
    "quotient_basis", "rur", "RationalParametrization", "union_params",
    "check_parametrization", "kernel_ideal", "QuotientAlgebra", "fmt_rational",
]
