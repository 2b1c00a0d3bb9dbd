import random

import pytest

from conftest import sextic_gram_pencil, sextic_parametrization
from exactsdp.errors import DimensionError, SizeError
from exactsdp.exactpoly import QQ, PolyMatrix, VariableSpace, minors
from exactsdp.groebner import (
    Ideal, RationalParametrization, check_parametrization, eval_poly_mod,
)
from exactsdp.lagrange import CostForm, degree_bound
from exactsdp.pencil import Pencil, classify_matrix
from exactsdp.solver import (
    SDPInstance, filter_and_sort, ratpar_of_ideal, real_points, solve_sdp,
    support_parametrization, union_params,
)
from exactsdp.univar import UniPoly, squarefree_part

XY = VariableSpace.of("x1", "x2", block="x")
x1, x2 = XY.gens()


def points_of(rp):
    """Rational real points as tuples; irrational ones as None."""
    _, _, _, roots = real_points(rp)
    out = []
    for root, rational in roots:
        out.append(tuple(rational) if rational is not None else None)
    return out


def test_ratpar_of_points():
    rp = ratpar_of_ideal(Ideal([x1 - 1, x2 - 2]))
    assert rp.degree == 1
    assert points_of(rp) == [(1, 2)]
    rp = ratpar_of_ideal(Ideal([x1 ** 2 - 2, x2 - x1]))
    assert rp.degree == 2
    assert check_parametrization([x1 ** 2 - 2, x2 - x1], rp)
    with pytest.raises(DimensionError):
        ratpar_of_ideal(Ideal([x1 - x2]))


def test_union_examples():
    a = ratpar_of_ideal(Ideal([x1 - 1, x2 - 2]))
    b = ratpar_of_ideal(Ideal([x1 - 3, x2 - 4]))
    ab = union_params(a, b, random.Random(1))
    assert ab.degree == 2
    assert sorted(points_of(ab)) == [(1, 2), (3, 4)]
    assert union_params(ab, ab, random.Random(2)).degree == 2
    c = ratpar_of_ideal(Ideal([x1 - 1, x2]))
    d = ratpar_of_ideal(Ideal([x1 ** 2 - 2, x2 - x1]))
    cd = union_params(c, d, random.Random(3))
    assert cd.degree == 3
    assert check_parametrization([(x1 - 1) * (x1 ** 2 - 2), x2 * (x2 - x1)], cd)


def test_union_with_empty():
    a = ratpar_of_ideal(Ideal([x1 - 1, x2 - 2]))
    empty = RationalParametrization.empty(2)
    assert union_params(empty, a) is a
    assert union_params(a, empty) is a


def test_instance_validation():
    pencil = Pencil.random(3, 2, random.Random(1))
    with pytest.raises(SizeError):
        SDPInstance(pencil, [1, 2, 3], 2)
    with pytest.raises(SizeError):
        SDPInstance(pencil, [1, 2], 4)
    inst = SDPInstance.from_json({"pencil": pencil.to_json(), "cost": "generic", "r": 1})
    assert inst.cost.is_zero() and inst.r == 1


@pytest.fixture(scope="module")
def solved_332():
    pencil = Pencil.random(3, 3, random.Random(7))
    inst = SDPInstance(pencil, [2, -1, 3], 2)
    return inst, solve_sdp(inst, seed=1)


def test_solve_332_degrees(solved_332):
    inst, rep = solved_332
    degrees = rep.stratum_degrees()
    assert degrees[2] == 4
    table, total = degree_bound(3, 3, 2)
    for p, d in degrees.items():
        assert d <= table[p]
    assert rep.parametrization.degree <= total


def test_minimizers_are_consistent(solved_332):
    inst, rep = solved_332
    assert rep.minimizers
    best = rep.minimizers[0].objective
    for c in rep.candidates:
        assert c.feasible == (c.is_psd and c.rank <= inst.r)
        if c.feasible:
            assert c.objective.compare(best) >= 0
    for c in rep.minimizers:
        assert c.feasible and c.objective.compare(best) == 0
    assert rep.rank_profile == sorted({c.rank for c in rep.minimizers})


def test_support_residuals_are_exact(solved_332):
    # every point of a rank-p support has all (p+1)-minors of A(x) exactly zero
    inst, _ = solved_332
    pencil = inst.pencil
    space = VariableSpace([("x", pencil.x_names())])
    A = PolyMatrix(pencil.poly_matrix(space))
    for p, iota in [(1, (1, 2)), (2, (1,)), (2, (3,))]:
        rp, _ = support_parametrization(pencil, p, iota, inst.cost, random.Random(0))
        assert rp.degree == 4
        q = squarefree_part(rp.q)
        vals = rp.coordinate_polys()
        for g in minors(A, p + 1):
            assert eval_poly_mod(g, vals, q).is_zero()
        # and A(x) never drops below rank p on the support's points
        lower = minors(A, p)
        assert any(not eval_poly_mod(g, vals, q).is_zero() for g in lower)


def test_empty_spectrahedron():
    # trace(A(x)) = -3 for every x, so A(x) is never PSD
    rng = random.Random(11)
    mats = [[[-1, 0, 0], [0, -1, 0], [0, 0, -1]]]
    for _ in range(2):
        a = [[rng.randint(-5, 5) for _ in range(3)] for _ in range(3)]
        a = [[a[i][j] + a[j][i] for j in range(3)] for i in range(3)]
        shift = sum(a[i][i] for i in range(3))
        a[2][2] -= shift
        mats.append(a)
    rep = solve_sdp(SDPInstance(Pencil(mats), [1, 1], 2), seed=0)
    assert rep.minimizers == []
    assert all(not c.feasible for c in rep.candidates)


def test_filter_on_sextic_parametrization():
    inst = SDPInstance(sextic_gram_pencil(), [1, 0, 0], 2)
    rep = filter_and_sort(sextic_parametrization(), inst)
    assert len(rep.candidates) == 2
    assert any(c.is_psd and c.rank == 2 for c in rep.candidates)
    # the smaller x1 wins
    assert rep.minimizers[0].point.coords_decimal(10)[0].startswith("-2.676205016")


def test_filter_on_rational_points():
    pts = [(0, -2, 2), (2, -2, 0)]
    S = VariableSpace.of("x1", "x2", "x3", block="x")
    y1, y2, y3 = S.gens()
    gens = [y2 + 2, y1 + y3 - 2, y1 * y3]
    rp = ratpar_of_ideal(Ideal(gens))
    inst = SDPInstance(sextic_gram_pencil(), [1, 1, 1], 2)
    rep = filter_and_sort(rp, inst)
    assert sorted(tuple(c.rational) for c in rep.candidates) == sorted(
        tuple(QQ(v) for v in p) for p in pts)
    for c in rep.candidates:
        assert c.feasible and c.rank == 2
    # both have objective 0, so both are minimizers
    assert len(rep.minimizers) == 2


def test_single_infeasible_point():
    S = VariableSpace.of("x1", "x2", "x3", block="x")
    y1, y2, y3 = S.gens()
    rp = ratpar_of_ideal(Ideal([y1 - 10, y2, y3]))
    inst = SDPInstance(sextic_gram_pencil(), [1, 0, 0], 3)
    assert classify_matrix(inst.pencil, [10, 0, 0])[0] is False
    rep = filter_and_sort(rp, inst)
    assert len(rep.candidates) == 1 and rep.minimizers == []


def test_generic_cost_reports_witnesses():
    rep = filter_and_sort(sextic_parametrization(), SDPInstance(sextic_gram_pencil(), [0, 0, 0], 2),
                          generic_cost=True, cost=CostForm([1, 2, 3]))
    assert rep.minimizers == rep.feasible


def test_report_json_shape(solved_332):
    _, rep = solved_332
    data = rep.to_json(12)
    assert set(data) >= {"instance", "parametrization", "strata", "candidates", "minimizers"}
    back = RationalParametrization.from_json(data["parametrization"])
    assert back.q == rep.parametrization.q
    for c in data["candidates"]:
        assert set(c) >= {"interval", "coords", "is_psd", "rank", "feasible", "stratum"}
    assert isinstance(UniPoly.from_strings(data["parametrization"]["q"]), UniPoly)
