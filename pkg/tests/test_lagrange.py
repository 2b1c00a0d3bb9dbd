import random
from math import comb

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from exactsdp.errors import DegenerateCostError
from exactsdp.exactpoly import QQ
from exactsdp.groebner import Ideal, eliminate, groebner_basis, radical_ideal
from exactsdp.lagrange import (
    CostForm, bidegree, build_lagrange_compressed, build_lagrange_full, degree_bound,
    theta_bound,
)
from exactsdp.linalg import identity
from exactsdp.pencil import Pencil, build_incidence_full, reduced_generator_count


def bezout_oracle(m, n, p):
    """Coefficient of X^n Y^{p(m-p)} Z^{c_p - 1} in the product of the block-degree forms."""
    X, Y, Z = sympy.symbols("X Y Z")
    cp = reduced_generator_count(m, p)
    py = p * (m - p)
    if cp == 0:
        return 0
    prod = sympy.expand((X + Y) ** cp * (Y + Z) ** (n - 1) * (X + Z) ** py)
    return int(sympy.Poly(prod, X, Y, Z).coeff_monomial(X ** n * Y ** py * Z ** (cp - 1)))


def test_theta_examples():
    assert theta_bound(3, 3, 2) == 16
    assert theta_bound(4, 3, 2) == 35
    assert theta_bound(3, 3, 0) == 0
    with pytest.raises(ValueError):
        theta_bound(3, 3, 4)


@pytest.mark.parametrize("m", range(1, 7))
def test_theta_matches_expansion(m):
    for n in range(1, 9):
        for p in range(m + 1):
            assert theta_bound(m, n, p) == bezout_oracle(m, n, p), (m, n, p)


def test_degree_bound_total():
    table, total = degree_bound(3, 3, 2)
    assert table == {0: 0, 1: theta_bound(3, 3, 1), 2: 16}
    assert total == sum(comb(3, p) * t for p, t in table.items())


def test_compressed_shape():
    pencil = Pencil.random(3, 3, random.Random(2))
    L = build_lagrange_compressed(pencil, 2, (1,), [2, -1, 3])
    assert len(L.equations) == len(L.space) == 7
    assert [len(L.space.block(b)) for b in ("x", "y", "z")] == [3, 2, 2]


def test_unit_cost_needs_no_change():
    pencil = Pencil.random(3, 2, random.Random(3))
    L = build_lagrange_compressed(pencil, 1, (1, 2), [1, 0])
    assert L.change is None
    m, minv = CostForm([0, 3, 1]).coordinate_change()
    assert m[0] == [0, 3, 1]
    prod = [[sum(a * b for a, b in zip(row, col)) for col in zip(*minv)] for row in m]
    assert prod == identity(3)


def test_cost_becomes_first_coordinate():
    pencil = Pencil.random(3, 3, random.Random(4))
    L = build_lagrange_compressed(pencil, 2, (2,), [2, -1, 3])
    x1 = L.space.gen("x1")
    xs = L.space.gens("x")
    assert L.to_original_x(x1) == 2 * xs[0] - xs[1] + 3 * xs[2]


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(2, 4), st.integers(1, 3))
def test_bidegree_pattern(seed, m, n):
    rng = random.Random(seed)
    p = rng.randint(0, m - 1)
    pencil = Pencil.random(m, n, rng)
    cost = [rng.randint(-3, 3) for _ in range(n)]
    if not any(cost):
        cost[0] = 1
    L = build_lagrange_compressed(pencil, p, None, cost)
    cp = reduced_generator_count(m, p)
    py = p * (m - p)
    assert len(L.equations) == cp + n - 1 + py
    allowed = [(1, 1, 0)] * cp + [(0, 1, 1)] * (n - 1) + [(1, 0, 1)] * py
    for eq, cap in zip(L.equations, allowed):
        assert all(d <= c for d, c in zip(bidegree(eq), cap))


def test_zero_cost_rejected():
    pencil = Pencil.random(3, 2, random.Random(5))
    with pytest.raises(DegenerateCostError):
        build_lagrange_compressed(pencil, 1, (1, 2), [0, 0])
    with pytest.raises(DegenerateCostError):
        build_lagrange_full(build_incidence_full(pencil, 1, (1, 2)), [0, 0])


def test_full_form_counts():
    pencil = Pencil.random(3, 3, random.Random(6))
    inc = build_incidence_full(pencil, 2, (1,))
    L = build_lagrange_full(inc, [1, 2, 3])
    assert len(L.space.block("z")) == 4
    assert len(L.equations) == 4 + 3 + 3
    assert len(L.equations) == len(L.space)


def _projection(system):
    ideal = eliminate(Ideal(system.equations, system.space), ["y", "z"])
    gens = [system.to_original_x(g) for g in ideal.generators]
    return groebner_basis(radical_ideal(Ideal(gens, ideal.space)))


@pytest.mark.parametrize("m,n,p,seed", [(2, 2, 1, 5), (2, 2, 1, 8), (3, 2, 2, 5)])
def test_full_and_compressed_project_alike(m, n, p, seed):
    rng = random.Random(seed)
    pencil = Pencil.random(m, n, rng)
    cost = [rng.randint(-5, 5) or 1 for _ in range(n)]
    iota = tuple(range(1, m - p + 1))
    comp = build_lagrange_compressed(pencil, p, iota, cost)
    full = build_lagrange_full(build_incidence_full(pencil, p, iota), cost)
    assert _projection(comp) == _projection(full)


def test_cost_value():
    assert CostForm([1, QQ(1) / 2]).value([2, 4]) == 4
