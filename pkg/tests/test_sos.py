import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import sextic_form, sextic_gram_pencil, ternary_quartic
from exactsdp.errors import PreconditionError
from exactsdp.exactpoly import QQ, MultiPoly, VariableSpace
from exactsdp.pencil import classify_rational_matrix
from exactsdp.sos import (
    HomogeneousInput, build_gram_pencil, certify_sos_length, extract_rational_decomposition,
    monomial_basis,
)

U2 = VariableSpace.of("u1", "u2", block="u")
u1, u2 = U2.gens()


def square_sum(terms):
    acc = None
    for d, g in terms:
        acc = g * g * d if acc is None else acc + g * g * d
    return acc


def test_monomial_basis_order():
    assert monomial_basis(2, 3) == [(3, 0), (2, 1), (1, 2), (0, 3)]
    assert len(monomial_basis(3, 2)) == 6


def test_sextic_pencil_matches_known_matrix():
    gp = build_gram_pencil(sextic_form())
    assert gp.size == 4 and gp.n == 3
    assert gp.free == [(0, 2), (1, 2), (1, 3)]
    assert gp.pencil == sextic_gram_pencil()


def test_ternary_quartic_dimensions():
    gp = build_gram_pencil(ternary_quartic())
    assert (gp.size, gp.n) == (6, 6)


def test_single_square_has_unique_gram():
    gp = build_gram_pencil(u1 ** 2)
    assert (gp.size, gp.n) == (2, 0)
    cert = certify_sos_length(u1 ** 2, 1)
    assert cert.feasible and cert.ranks() == [1]


def test_identity_gram_gives_two_squares():
    dec = extract_rational_decomposition([[1, 0], [0, 1]], [(1, 0), (0, 1)], U2)
    assert sorted((d, g.to_text()) for d, g in dec) == [(1, "u1"), (1, "u2")]


def test_rank_one_gram_gives_one_square():
    v = [QQ(1), QQ(-2), QQ(3)]
    gram = [[a * b for b in v] for a in v]
    dec = extract_rational_decomposition(gram, monomial_basis(2, 2), U2)
    assert len(dec) == 1
    d, g = dec[0]
    assert g * g * d == (u1 ** 2 - 2 * u1 * u2 + 3 * u2 ** 2) ** 2


def test_decomposition_at_sextic_point():
    gp = build_gram_pencil(sextic_form())
    gram = gp.gram([0, -2, 2])
    dec = extract_rational_decomposition(gram, gp.basis, sextic_form().space)
    assert len(dec) == 2 and all(d > 0 for d, _ in dec)
    assert square_sum(dec) == sextic_form()


def test_pencil_reproduces_form():
    rng = random.Random(17)
    for form in (sextic_form(), ternary_quartic()):
        gp = build_gram_pencil(form)
        for _ in range(10):
            x = [QQ(rng.randint(-9, 9)) / rng.randint(1, 5) for _ in range(gp.n)]
            assert gp.quadratic_form(gp.gram(x)) == form


def _random_psd(rng, size):
    rank = rng.randint(1, size)
    vs = [[QQ(rng.randint(-3, 3)) / rng.randint(1, 2) for _ in range(size)] for _ in range(rank)]
    return [[sum((v[i] * v[j] for v in vs), QQ(0)) for j in range(size)] for i in range(size)]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_decomposition_soundness(seed):
    rng = random.Random(seed)
    basis = monomial_basis(2, rng.randint(1, 3))
    gram = _random_psd(rng, len(basis))
    dec = extract_rational_decomposition(gram, basis, U2)
    _, rank = classify_rational_matrix(gram)
    assert len(dec) == rank
    assert all(d > 0 for d, _ in dec)
    target = U2.zero()
    for i, a in enumerate(basis):
        for j, b in enumerate(basis):
            target = target + MultiPoly(U2, {tuple(x + y for x, y in zip(a, b)): gram[i][j]})
    assert square_sum(dec) == target if dec else target.is_zero()


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 2))
def test_sum_of_squares_round_trip(seed, count):
    rng = random.Random(seed)
    gs = []
    for _ in range(count):
        g = U2.zero()
        while g.is_zero():
            g = sum((m * rng.randint(-3, 3) for m in (u1 * u1, u1 * u2, u2 * u2)), U2.zero())
        gs.append(g)
    f = square_sum([(1, g) for g in gs])
    cert = certify_sos_length(f, count)
    assert cert.feasible
    assert all(rank <= count for rank in cert.ranks())
    for _, dec in cert.decompositions:
        assert square_sum(dec) == f


def test_sextic_length():
    assert not certify_sos_length(sextic_form(), 1).feasible
    cert = certify_sos_length(sextic_form(), 2)
    assert cert.feasible and cert.ranks() == [2]
    rational = sorted(tuple(c.rational) for c in cert.points if c.rational is not None)
    assert rational == [(0, -2, 2), (2, -2, 0)]
    assert len(cert.decompositions) == 2
    for _, dec in cert.decompositions:
        assert len(dec) == 2 and square_sum(dec) == sextic_form()


def test_inhomogeneous_input_is_homogenized():
    S = VariableSpace.of("u1", block="u")
    (u,) = S.gens()
    form = HomogeneousInput(u ** 2 + 1)
    assert form.homogenized and form.f.space.names == ("u1", "u0")
    cert = certify_sos_length(u ** 2 + 1, 2)
    assert cert.feasible
    assert any("homogenized" in n for n in cert.notes)


def test_preconditions():
    with pytest.raises(PreconditionError):
        HomogeneousInput(U2.zero())
    with pytest.raises(PreconditionError):
        HomogeneousInput(u1 ** 3)
    with pytest.raises(PreconditionError):
        HomogeneousInput(u1 ** 2 + u2, homogenize=False)
    with pytest.raises(PreconditionError):
        certify_sos_length(u1 ** 2, 0)
    with pytest.raises(PreconditionError):
        extract_rational_decomposition([[1, 0], [0, -1]], [(1, 0), (0, 1)], U2)
    with pytest.raises(PreconditionError):
        HomogeneousInput.from_json([])


def test_json_input():
    form = HomogeneousInput.from_json([{"coeff": "1", "exps": [2, 0]}, {"coeff": "1", "exps": [0, 2]}])
    assert form.f == u1 ** 2 + u2 ** 2
    assert HomogeneousInput.from_json(form.to_json()).f == form.f
