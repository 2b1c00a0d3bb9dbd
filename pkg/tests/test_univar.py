import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_unipoly
from exactsdp.exactpoly import QQ
from exactsdp.univar import (
    AlgebraicNumber, UniPoly, algebraic_equal, algebraic_value, cauchy_bound, compare,
    count_real_roots, interval_eval, invmod, isolate_real_roots, poly_gcd, pseudo_division,
    sign_at, squarefree_part, sturm_sequence, variations_at, zmul,
)

T = UniPoly([0, 1])


def P(*coeffs):
    return UniPoly(coeffs)


def root_in(q, lo, hi):
    for a in AlgebraicNumber.roots_of(q):
        a = a.refine(QQ(1) / 16)
        if lo <= a.lower and a.upper <= hi:
            return a
    raise AssertionError("no root in range")


def test_squarefree_examples():
    assert squarefree_part((T - 1) * (T - 1) * (T + 2)) == (T - 1) * (T + 2)
    assert squarefree_part(T ** 3 - T - 1) == T ** 3 - T - 1
    assert squarefree_part(T ** 4 - 2 * T ** 2 + 1) == T ** 2 - 1


def test_isolate_examples():
    assert isolate_real_roots(T ** 2 + 1) == []
    ivs = isolate_real_roots(T ** 2 - 2)
    assert len(ivs) == 2
    assert ivs[0].upper < ivs[1].lower
    assert root_in(T ** 2 - 2, -2, -1) and root_in(T ** 2 - 2, 1, 2)
    assert len(isolate_real_roots(T ** 3 - T - 1)) == 1
    assert root_in(T ** 3 - T - 1, 1, 2)


def test_isolate_rational_roots_and_multiplicity():
    q = (T - QQ(1) / 2) ** 3 * (T + 3) * (T ** 2 - 2)
    ivs = isolate_real_roots(q)
    assert len(ivs) == 4
    for a, b in zip(ivs, ivs[1:]):
        assert a.upper < b.lower
    assert any(iv.is_point() and iv.lower == QQ(1) / 2 for iv in ivs)


def test_isolate_zero_poly():
    with pytest.raises(ValueError):
        isolate_real_roots(UniPoly())


def test_sign_at_examples():
    alpha = root_in(T ** 3 - T - 1, 1, 2)
    assert sign_at(T ** 3 - T - 1, alpha) == 0
    assert sign_at(T ** 2 - 2, alpha) == -1
    beta = root_in(T ** 2 - 2, 1, 2)
    assert sign_at(T - 1, beta) == 1


def test_sign_at_certified_zero_of_factor():
    q = (T ** 2 - 2) * (T ** 2 - 3)
    beta = root_in(q, 1, QQ(3) / 2)
    assert sign_at(T ** 2 - 2, beta) == 0
    assert sign_at(T ** 2 - 3, beta) == -1
    assert sign_at((T ** 2 - 3) * (T ** 3 + 1), beta) == -1


def test_rational_point_sign():
    a = AlgebraicNumber.from_rational(QQ(-3) / 7)
    g = 7 * T + 3
    assert sign_at(g, a) == 0
    assert sign_at(T, a) == -1


def test_cauchy_bound_encloses_roots():
    q = UniPoly([-10 ** 30, 0, 1])
    b = cauchy_bound(q)
    assert b > 10 ** 15
    assert count_real_roots(q, -b, b) == 2


def test_algebraic_value_and_compare():
    sqrt2 = root_in(T ** 2 - 2, 0, 2)
    two = algebraic_value(T ** 2, sqrt2)
    assert two.is_rational_point() and two.lower == 2
    v = algebraic_value(T + 1, sqrt2)
    assert compare(v, AlgebraicNumber.from_rational(QQ(12) / 5)) == 1
    assert compare(v, AlgebraicNumber.from_rational(QQ(5) / 2)) == -1
    other = root_in(T ** 2 - 2 * T - 1, 2, 3)  # 1 + sqrt(2)
    assert algebraic_equal(v, other)
    assert compare(v, other) == 0


def test_invmod():
    q = T ** 3 - T - 1
    inv = invmod(T ** 2 + 1, q)
    assert ((T ** 2 + 1) * inv) % q == UniPoly([1])
    with pytest.raises(ZeroDivisionError):
        invmod(T - 1, T ** 2 - 1)


def test_decimal_rendering():
    sqrt2 = root_in(T ** 2 - 2, 0, 2)
    assert sqrt2.to_decimal(20) == "1.4142135623730950488"


def test_text_and_strings():
    p = P(QQ(1) / 2, 0, -3)
    assert p.to_text() == "-3*t^2 + 1/2"
    assert UniPoly.from_strings(p.to_strings()) == p


ints = st.lists(st.integers(-10 ** 6, 10 ** 6), min_size=1, max_size=30)


@given(ints, ints)
def test_kronecker_product_matches_schoolbook(a, b):
    naive = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            naive[i + j] += x * y
    assert [int(v) for v in zmul(a, b)] == naive


@given(ints, ints)
def test_pseudo_division_identity(a, b):
    while b and b[-1] == 0:
        b.pop()
    if not b:
        return
    quo, rem, lead = pseudo_division(a, b)
    lhs = [lead * v for v in a]
    rhs = zmul(quo, b) if quo else []
    rhs = rhs + [0] * (len(lhs) - len(rhs))
    for i, r in enumerate(rem):
        rhs[i] += r
    assert [int(v) for v in lhs] == [int(v) for v in rhs[:len(lhs)]] and not any(rhs[len(lhs):])
    assert len(rem) < len(b)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_gcd_contains_common_factor(seed):
    rng = random.Random(seed)
    a, b, c = (random_unipoly(rng, rng.randint(1, 6)) for _ in range(3))
    g = poly_gcd(a * c, b * c)
    assert ((a * c) % g).is_zero() and ((b * c) % g).is_zero()
    assert (g % c.monic()).is_zero()
    assert g.lead == 1


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_divmod_identity(seed):
    rng = random.Random(seed)
    a = random_unipoly(rng, rng.randint(0, 9)) * QQ(rng.randint(1, 9)) / 7
    b = random_unipoly(rng, rng.randint(0, 5)) / 3
    quo, rem = divmod(a, b)
    assert quo * b + rem == a
    assert rem.degree < b.degree


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_isolation_soundness(seed):
    rng = random.Random(seed)
    q = random_unipoly(rng, rng.randint(1, 10))
    sq = squarefree_part(q)
    seq = sturm_sequence(sq)
    ivs = isolate_real_roots(q)
    assert len(ivs) == count_real_roots(q)
    for iv in ivs:
        if iv.is_point():
            assert sq(iv.lower) == 0
        else:
            assert sq(iv.lower) != 0 and sq(iv.upper) != 0
            assert variations_at(seq, iv.lower) - variations_at(seq, iv.upper) == 1
    for a, b in zip(ivs, ivs[1:]):
        assert a.upper < b.lower
        # the chain counts roots in half-open (a.upper, b.lower]
        assert variations_at(seq, a.upper) - variations_at(seq, b.lower) == int(b.is_point())


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_refinement_halves_and_keeps_root(seed):
    rng = random.Random(seed)
    q = random_unipoly(rng, rng.randint(1, 8))
    seq = sturm_sequence(squarefree_part(q))
    for a in AlgebraicNumber.roots_of(q):
        for _ in range(5):
            b = a.bisect()
            if b.is_rational_point():
                assert q(b.lower) == 0
                break
            assert b.upper - b.lower == (a.upper - a.lower) / 2
            assert variations_at(seq, b.lower) - variations_at(seq, b.upper) == 1
            a = b


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_sign_is_multiplicative(seed):
    rng = random.Random(seed)
    q = random_unipoly(rng, rng.randint(1, 6))
    g, h = random_unipoly(rng, rng.randint(0, 4)), random_unipoly(rng, rng.randint(0, 4))
    if rng.random() < 0.3:
        g = g * squarefree_part(q)
    for a in AlgebraicNumber.roots_of(q):
        s = sign_at(g * h, a)
        assert s in (-1, 0, 1)
        assert s == sign_at(g, a) * sign_at(h, a)


@given(st.integers(-50, 50), st.integers(1, 20), st.integers(0, 10 ** 6))
def test_sign_at_rational_point(num, den, seed):
    rng = random.Random(seed)
    g = random_unipoly(rng, rng.randint(0, 5))
    r = QQ(num) / den
    expected = g(r)
    assert sign_at(g, AlgebraicNumber.from_rational(r)) == (expected > 0) - (expected < 0)


@given(st.integers(0, 10 ** 6), st.integers(-40, 40), st.integers(1, 40))
def test_interval_eval_contains_values(seed, a, w):
    rng = random.Random(seed)
    p = random_unipoly(rng, rng.randint(0, 7)) / 5
    lo, hi = QQ(a) / 8, QQ(a + w) / 8
    elo, ehi = interval_eval(p, lo, hi)
    for k in range(9):
        x = lo + (hi - lo) * k / 8
        assert elo <= p(x) <= ehi
