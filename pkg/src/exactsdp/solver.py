"""Rank-constrained SDP solving: the rank loop, per-support solving and post-processing.

For every rank p <= r and every kernel support iota, the points of the
incidence variety where the cost is critical are computed and projected to
x.  The union of these finite sets contains every minimizer.  Its real
points are then classified exactly (PSD or not, rank), the infeasible ones
are dropped and the rest are sorted by the objective.
"""

import logging
import random
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from .errors import DimensionError, RegularityError, SizeError
from .exactpoly import QQ, ZERO, VariableSpace, fmt_rational
from .groebner import (
    Ideal, RationalParametrization, eliminate, ideal_of_parametrizations, is_zero_dimensional,
    rur, union_params,
)
from .lagrange import CostForm, LagrangeSystem, build_lagrange_compressed
from .modular import solve_points
from .pencil import (
    AlgebraicPoint, IncidenceSystem, ParametrizedClassifier, Pencil, build_incidence_reduced,
    classify_matrix, find_irregular_support, supports,
)
from .univar import (
    AlgebraicNumber, UniPoly, algebraic_value, compare, coprime, invmod, poly_gcd,
    rational_to_decimal, sign_at, squarefree_part,
)

log = logging.getLogger(__name__)


class SDPInstance:
    """min c.x subject to A(x) PSD and rank A(x) <= r."""

    def __init__(self, pencil, cost, r):
        if not isinstance(cost, CostForm):
            cost = CostForm(cost)
        if len(cost) != pencil.n:
            raise SizeError(f"cost has {len(cost)} entries, pencil has {pencil.n} variables")
        if not 0 <= r <= pencil.m:
            raise SizeError(f"rank bound r={r} outside 0..{pencil.m}")
        self.pencil = pencil
        self.cost = cost
        self.r = r

    @classmethod
    def from_json(cls, data):
        pencil = Pencil.from_json(data["pencil"] if "pencil" in data else data)
        cost = data.get("cost", "generic")
        if cost == "generic":
            cost = [0] * pencil.n
        r = data.get("r", pencil.m)
        return cls(pencil, [QQ(c) for c in cost], int(r))

    def to_json(self):
        return {"pencil": self.pencil.to_json(), "cost": [fmt_rational(c) for c in self.cost.c],
                "r": self.r}

    def __repr__(self):
        return f"SDPInstance(m={self.pencil.m}, n={self.pencil.n}, r={self.r})"


# -- projection and parametrization ---------------------------------------

def project_to_x(system, rng=None, method="auto", budget=None):
    """Vanishing ideal in Q[x] of the projection of a system's solutions.

    ``system`` is a LagrangeSystem, an IncidenceSystem or an Ideal whose
    space has an x-block.  For Lagrange and incidence systems only the
    points where A(x) has rank exactly p are kept.  ``method`` "lifted"
    solves modulo a prime and lifts; "exact" eliminates with a Groebner
    basis over Q; "auto" uses the lifted route when the system is finite
    modulo p and exact elimination otherwise.  Primed coordinates of a
    Lagrange system are mapped back to the original x.
    """
    rng = rng or random.Random(0)
    change = None
    rank_matrix = rank = None
    if isinstance(system, LagrangeSystem):
        eqs, space = system.equations, system.space
        change = system.change
        rank_matrix = system.incidence.pencil.poly_matrix(space)
        rank = system.p
    elif isinstance(system, IncidenceSystem):
        eqs, space = system.generators, system.space
        rank_matrix = system.pencil.poly_matrix(space)
        rank = system.p
    else:
        eqs, space = list(system.generators), system.space
    if method in ("auto", "lifted"):
        try:
            rp = solve_points(eqs, space, "x", rank_matrix, rank, rng, budget=budget)
        except DimensionError:
            if method == "lifted":
                raise
        else:
            if change is not None:
                rp = transform_parametrization(rp, change[1], change[0])
            sub = VariableSpace([("x", rp.variables)])
            ideal, _ = ideal_of_parametrizations([rp], sub)
            return ideal
    drop = [b for b, _ in space.blocks if b != "x"]
    ideal = eliminate(Ideal(eqs, space), drop, budget)
    if change is not None and isinstance(system, LagrangeSystem):
        gens = [system.to_original_x(g) for g in ideal.generators]
        ideal = Ideal(gens, ideal.space)
    return ideal


def ratpar_of_ideal(ideal, rng=None, budget=None, form=None):
    """Rational parametrization of a zero-dimensional ideal; DimensionError otherwise."""
    if not is_zero_dimensional(ideal, budget):
        raise DimensionError("RatPar needs a zero-dimensional ideal")
    return rur(ideal, rng or random.Random(0), budget, form=form)


def transform_parametrization(rp, mat, inverse):
    """Parametrization of the points mat . x, for x encoded by ``rp``.

    ``inverse`` is mat^{-1}; the separating form is carried along so that
    it takes the same values on the transformed points.
    """
    n = rp.n
    coords = []
    for i in range(n):
        acc = UniPoly()
        for j in range(n):
            if mat[i][j]:
                acc = acc + rp.coords[j] * mat[i][j]
        coords.append(acc)
    form = None
    if rp.separating_form is not None:
        form = [sum((rp.separating_form[j] * inverse[j][i] for j in range(n)), ZERO)
                for i in range(n)]
    return RationalParametrization(rp.q, rp.q0, coords, rp.variables, form)


def _matvec_form(form, mat):
    n = len(form)
    return [sum((QQ(form[j]) * mat[j][i] for j in range(n)), ZERO) for i in range(n)]


def support_parametrization(pencil, p, iota, cost, rng=None, form=None, known=None,
                            budget=None, strategy="auto"):
    """x-points of rank exactly p that are critical for the cost on V_{p,iota}.

    When the incidence variety is already finite all its points are
    critical and it is solved directly ("direct"); otherwise the compressed
    Lagrange system is solved ("lagrange").  Returns (parametrization, method).
    """
    rng = rng or random.Random(0)
    inc = build_incidence_reduced(pencil, p, iota)
    source = (p, tuple(inc.iota))
    if strategy in ("auto", "direct") and len(inc.generators) >= len(inc.space):
        try:
            rp = solve_points(inc.generators, inc.space, "x", pencil.poly_matrix(inc.space), p,
                              rng, form=form, known=known, budget=budget)
            return rp, "direct"
        except DimensionError as exc:
            if strategy == "direct":
                raise DimensionError(str(exc), source) from None
            log.info("V_%s is not finite; switching to the Lagrange system", source)
    lag = build_lagrange_compressed(pencil, p, inc.iota, cost)
    work_form, work_known = form, known
    if lag.change is not None:
        m_mat, minv = lag.change
        if form is not None:
            work_form = _matvec_form(form, minv)
        if known is not None and not known.is_empty():
            work_known = transform_parametrization(known, m_mat, minv)
    try:
        rp = solve_points(lag.equations, lag.space, "x", lag.incidence.pencil.poly_matrix(lag.space),
                          p, rng, form=work_form, known=work_known, budget=budget)
    except DimensionError as exc:
        raise DimensionError(str(exc), source) from None
    if rp is work_known:
        return known, "lagrange"
    if lag.change is not None:
        rp = transform_parametrization(rp, lag.change[1], lag.change[0])
    return rp, "lagrange"


def _task_rng(seed, p, iota):
    return random.Random(f"{seed}:{p}:{','.join(map(str, iota))}")


def _support_task(args):
    pencil, p, iota, cost, seed, form, budget = args
    rp, method = support_parametrization(pencil, p, iota, cost, _task_rng(seed, p, iota),
                                         form=form, budget=budget)
    return rp.to_json(), method


# -- post-processing ------------------------------------------------------

class Candidate:
    """A real point of the output parametrization with its exact classification."""

    def __init__(self, point, is_psd, rank, feasible, sources, objective=None, rational=None):
        self.point = point
        self.is_psd = is_psd
        self.rank = rank
        self.feasible = feasible
        self.sources = list(sources)
        self.objective = objective
        self.rational = rational

    def __repr__(self):
        return (f"Candidate(psd={self.is_psd}, rank={self.rank}, feasible={self.feasible}, "
                f"sources={self.sources})")


class SolutionReport:
    """Candidates, minimizers and the rank profile of a solved instance."""

    def __init__(self, instance, parametrization, candidates, minimizers, generic_cost=False,
                 cost=None, strata=None, notes=()):
        self.instance = instance
        self.parametrization = parametrization
        self.candidates = list(candidates)
        self.minimizers = list(minimizers)
        self.generic_cost = generic_cost
        self.cost = cost or instance.cost
        self.strata = strata or []
        self.notes = list(notes)

    @property
    def rank_profile(self):
        return sorted({c.rank for c in self.minimizers})

    @property
    def feasible(self):
        return [c for c in self.candidates if c.feasible]

    def stratum_degrees(self):
        return {s["p"]: s["degree"] for s in self.strata}

    def __repr__(self):
        return (f"SolutionReport(deg q={self.parametrization.degree}, "
                f"{len(self.candidates)} real candidates, {len(self.minimizers)} minimizers)")

    def to_json(self, digits=20):
        cands = []
        for c in self.candidates:
            entry = {
                "interval": c.point.root.interval.to_strings(),
                "coords": _exact_coords(c),
                "coords_decimal": _decimal_coords(c, digits),
                "is_psd": c.is_psd,
                "rank": c.rank,
                "feasible": c.feasible,
                "stratum": [[p, list(iota)] for p, iota in c.sources],
            }
            if c.objective is not None:
                entry["objective"] = c.objective.exact_json()
                entry["objective_decimal"] = c.objective.decimal(digits)
            else:
                entry["objective_decimal"] = Objective(c, self.cost).decimal(digits)
            cands.append(entry)
        index = {id(c): i for i, c in enumerate(self.candidates)}
        return {
            "instance": self.instance.to_json(),
            "cost": [fmt_rational(v) for v in self.cost.c],
            "generic_cost": self.generic_cost,
            "parametrization": self.parametrization.to_json(),
            "strata": self.strata,
            "candidates": cands,
            "minimizers": [index[id(c)] for c in self.minimizers],
            "rank_profile": self.rank_profile,
            "notes": self.notes,
        }


def _exact_coords(c):
    if c.rational is not None:
        return [fmt_rational(v) for v in c.rational]
    return [{"enclosure": [fmt_rational(lo), fmt_rational(hi)]}
            for lo, hi in c.point.enclosures(30)]


def _decimal_coords(c, digits):
    if c.rational is not None:
        return [rational_to_decimal(v, digits) for v in c.rational]
    return c.point.coords_decimal(digits)


class Objective:
    """The value c.x at a candidate, compared by enclosures first.

    Only when enclosures at high precision still overlap is the exact
    algebraic number built (the minimal polynomial of c.x over Q(t*)).
    """

    def __init__(self, cand, cost):
        self.cand = cand
        if cand.rational is not None:
            self.rational = cost.value(cand.rational)
            self.num = None
        else:
            self.rational = None
            self.num = sum((v * a for v, a in zip(cand.point.values, cost.c) if a), UniPoly())
        self._exact = None
        self._encl = {}

    def enclosure(self, digits):
        if self.rational is not None:
            return self.rational, self.rational
        if digits not in self._encl:
            self._encl[digits] = self.cand.point.enclose(self.num, digits)
        return self._encl[digits]

    def exact(self):
        if self._exact is None:
            if self.rational is not None:
                self._exact = AlgebraicNumber.from_rational(self.rational)
            else:
                pt = self.cand.point
                h = self.num
                if pt.denominator is not None:
                    h = (h * invmod(pt.denominator, pt.root.poly)) % pt.root.poly
                self._exact = algebraic_value(h, pt.root)
        return self._exact

    def compare(self, other):
        if other is self:
            return 0
        if self.rational is not None and other.rational is not None:
            return (self.rational > other.rational) - (self.rational < other.rational)
        for digits in (10, 30, 60):
            lo, hi = self.enclosure(digits)
            olo, ohi = other.enclosure(digits)
            if hi < olo:
                return -1
            if ohi < lo:
                return 1
        return compare(self.exact(), other.exact())

    def exact_json(self):
        if self.rational is not None:
            return fmt_rational(self.rational)
        lo, hi = self.enclosure(30)
        return {"enclosure": [fmt_rational(lo), fmt_rational(hi)]}

    def decimal(self, digits):
        if self.rational is not None:
            return rational_to_decimal(self.rational, digits)
        lo, hi = self.enclosure(digits)
        return rational_to_decimal((lo + hi) / 2, digits)


def _rational_root(root, q):
    """The root as an exact rational when it has a small denominator, else None."""
    if root.is_rational_point():
        return root.lower
    a = root.refine(QQ(1) / (1 << 80))
    mid = (a.lower + a.upper) / 2
    guess = Fraction(int(mid.numerator), int(mid.denominator)).limit_denominator(1 << 32)
    cand = QQ(guess)
    if a.lower <= cand <= a.upper and q(cand) == 0:
        return cand
    return None


def _compose_mod(f, u, q):
    acc = UniPoly()
    for c in reversed(f.coeffs):
        acc = (acc * u + c) % q
    return acc


def _membership(source, values, root, q):
    """Exact test that the point (values at root) is encoded by ``source``."""
    if source.is_empty():
        return False
    form = source.separating_form
    if form is None:
        return True
    u = UniPoly()
    for a, v in zip(form, values):
        if a:
            u = u + v * a
    u = u % q
    sq = squarefree_part(source.q)
    if sign_at(_compose_mod(sq, u, q), root) != 0:
        return False
    for w, v in zip(source.coordinate_polys(), values):
        if sign_at((_compose_mod(w, u, q) - v) % q, root) != 0:
            return False
    return True


def _in_source(source, rp, values, root, q, common):
    if source.is_empty():
        return False
    if source.separating_form is not None and source.separating_form == rp.separating_form:
        # both encode points by the same value t = form(x), so t* lies in
        # the source iff it is a root of h = gcd(q_source, q); h divides q,
        # hence changes sign across the isolating interval exactly then
        key = id(source)
        if key not in common:
            common[key] = poly_gcd(source.q, q)
        h = common[key]
        if h.degree < 1:
            return False
        if root.is_rational_point():
            return h(root.lower) == 0
        return h(root.lower) * h(root.upper) < 0
    return _membership(source, values(), root, q)


def real_points(rp):
    """(q, numerators, denominator, [(root, rational coords or None)]).

    q is squarefree; the coordinates at a root are numerators / denominator
    (denominator None means the numerators are the coordinates).  Roots
    that are small rationals are pinned to point intervals.
    """
    q = rp.q
    if coprime(q, q.derivative()):
        nums, den = [c % q for c in rp.coords], rp.q0 % q
    else:
        q = squarefree_part(q)
        nums, den = [v % q for v in rp.coordinate_polys()], None
    out = []
    for root in AlgebraicNumber.roots_of(q):
        t = _rational_root(root, q)
        if t is not None:
            d = den(t) if den is not None else 1
            out.append((AlgebraicNumber.from_rational(t), [v(t) / d for v in nums]))
        else:
            out.append((root, None))
    return q, nums, den, out


def filter_and_sort(parametrization, instance, sources=(), generic_cost=False, cost=None):
    """Classify the real points of a parametrization and sort the feasible ones.

    ``sources`` is a list of ((p, iota), parametrization) used for
    provenance.  With ``generic_cost`` every feasible point is reported as a
    feasibility witness and no sorting takes place.
    """
    pencil = instance.pencil
    cost = cost or instance.cost
    rp = parametrization
    cands = []
    if not rp.is_empty():
        q, nums, den, roots = real_points(rp)
        clf = ParametrizedClassifier(pencil, q, nums, den)
        cache = []
        common = {}

        def values():
            if not cache:
                inv = invmod(den, q) if den is not None else UniPoly([1])
                cache.append([(v * inv) % q for v in nums])
            return cache[0]

        for root, rational in roots:
            if rational is not None:
                point = AlgebraicPoint(root, [UniPoly([x]) for x in rational], rp.variables)
                is_psd, rank = classify_matrix(pencil, rational)
            else:
                point = AlgebraicPoint(root, nums, rp.variables, den)
                is_psd, rank = clf.classify(root)
            feasible = is_psd and rank <= instance.r
            src = [s for s, srp in sources if _in_source(srp, rp, values, root, q, common)]
            cands.append(Candidate(point, is_psd, rank, feasible, src, rational=rational))
    feasible = [c for c in cands if c.feasible]
    if generic_cost:
        minimizers = feasible
    else:
        for c in feasible:
            c.objective = Objective(c, cost)
        feasible.sort(key=_cmp_key)
        minimizers = [c for c in feasible if c.objective.compare(feasible[0].objective) == 0]
        order = {id(c): i for i, c in enumerate(feasible)}
        cands.sort(key=lambda c: (not c.feasible, order.get(id(c), 0)))
    return SolutionReport(instance, rp, cands, minimizers, generic_cost, cost)


class _cmp_key:
    __slots__ = ("c",)

    def __init__(self, c):
        self.c = c

    def __lt__(self, other):
        return self.c.objective.compare(other.c.objective) < 0


# -- the rank loop ----------------------------------------------------------

def generic_cost(n, rng):
    return CostForm([rng.randint(-9, 9) or 1 for _ in range(n)])


def solve_sdp(instance, seed=0, budget=None, check_regularity=True, jobs=1,
              postprocess=True, ranks=None):
    """Solve a rank-constrained SDP exactly.

    Visits p = 0..min(r, m-1) (or the given ``ranks``) and, for each p,
    every support iota in lexicographic order.  Returns a SolutionReport
    whose parametrization encodes a finite set containing all minimizers.
    """
    pencil = instance.pencil
    m = pencil.m
    rng = random.Random(seed)
    cost = instance.cost
    generic = cost.is_zero()
    notes = []
    if generic:
        cost = generic_cost(pencil.n, rng)
        notes.append("zero cost: solved with a generic cost; minimizers are feasibility witnesses")
    form = [rng.randint(-9, 9) for _ in range(pencil.n)]
    if ranks is None:
        ranks = range(0, min(instance.r, m - 1) + 1)
    if instance.r >= m:
        notes.append("rank p = m is not searched: full-rank points are interior")
    total = RationalParametrization.empty(pencil.n, pencil.x_names())
    sources = []
    strata = []
    for p in ranks:
        if check_regularity:
            bad = find_irregular_support(pencil, p, budget)
            if bad is not None:
                raise RegularityError(f"incidence variety for p={p}, iota={list(bad)} is not regular",
                                      p, bad)
        iotas = [s.iota for s in supports(m, p)]
        results = _solve_stratum(pencil, p, iotas, cost, seed, form, budget, jobs)
        stratum = RationalParametrization.empty(pencil.n, pencil.x_names())
        info = []
        for iota, (rp, method) in zip(iotas, results):
            sources.append(((p, iota), rp))
            stratum = union_params(stratum, rp, rng, budget)
            info.append({"iota": list(iota), "degree": rp.degree, "method": method})
            log.info("p=%d iota=%s: degree %d (%s)", p, list(iota), rp.degree, method)
        strata.append({"p": p, "degree": stratum.degree, "supports": info})
        total = union_params(total, stratum, rng, budget)
    if postprocess:
        report = filter_and_sort(total, instance, sources, generic, cost)
    else:
        report = SolutionReport(instance, total, [], [], generic, cost)
    report.strata = strata
    report.notes = notes
    return report


def _solve_stratum(pencil, p, iotas, cost, seed, form, budget, jobs):
    if jobs > 1 and len(iotas) > 1:
        args = [(pencil, p, iota, cost, seed, form, budget) for iota in iotas]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            out = list(pool.map(_support_task, args))
        return [(RationalParametrization.from_json(d), method) for d, method in out]
    results = []
    known = None
    for iota in iotas:
        rp, method = support_parametrization(pencil, p, iota, cost, _task_rng(seed, p, iota),
                                             form=form, known=known, budget=budget)
        if not rp.is_empty():
            known = rp
        results.append((rp, method))
    return results


__all__ = [
    "SDPInstance", "SolutionReport", "Candidate", "project_to_x", "ratpar_of_ideal",
    "union_params", "solve_sdp", "filter_and_sort", "support_parametrization",
    "transform_parametrization", "generic_cost", "real_points", "Objective",
]
