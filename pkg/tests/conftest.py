import random

import pytest
from hypothesis import strategies as st

from exactsdp.exactpoly import QQ, MultiPoly, VariableSpace
from exactsdp.groebner import RationalParametrization
from exactsdp.pencil import Pencil
from exactsdp.univar import UniPoly

small_ints = st.integers(min_value=-30, max_value=30)
rationals = st.builds(lambda a, b: QQ(a) / b, small_ints, st.integers(min_value=1, max_value=12))


def random_poly(space, rng, nterms=4, maxdeg=2, bound=5):
    terms = {}
    for _ in range(nterms):
        e = tuple(rng.randint(0, maxdeg) for _ in range(len(space)))
        terms[e] = QQ(rng.randint(-bound, bound)) / rng.randint(1, 3)
    return MultiPoly(space, terms)


def random_unipoly(rng, deg, bound=20):
    cs = [rng.randint(-bound, bound) for _ in range(deg)] + [rng.choice([-1, 1]) * rng.randint(1, bound)]
    return UniPoly(cs)


def sextic_form():
    """x^6 - 2x^5y + 5x^4y^2 - 4x^3y^3 + 5x^2y^4 - 2xy^5 + y^6, positive on R^2."""
    space = VariableSpace.of("u1", "u2", block="u")
    terms = {(6, 0): 1, (5, 1): -2, (4, 2): 5, (3, 3): -4, (2, 4): 5, (1, 5): -2, (0, 6): 1}
    return MultiPoly(space, {e: QQ(c) for e, c in terms.items()})


def ternary_quartic():
    space = VariableSpace.of("u1", "u2", "u3", block="u")
    terms = {(4, 0, 0): 1, (1, 3, 0): 1, (0, 4, 0): 1, (2, 1, 1): -3, (1, 2, 1): -4,
             (2, 0, 2): 2, (1, 0, 3): 1, (0, 1, 3): 1, (0, 0, 4): 1}
    return MultiPoly(space, {e: QQ(c) for e, c in terms.items()})


def sextic_gram_pencil():
    """Gram matrices of the sextic in the basis (u1^3, u1^2 u2, u1 u2^2, u2^3)."""
    a0 = [[1, -1, 0, -2], [-1, 5, 0, 0], [0, 0, 5, -1], [-2, 0, -1, 1]]
    a1 = [[0, 0, 1, 0], [0, -2, 0, 0], [1, 0, 0, 0], [0, 0, 0, 0]]
    a2 = [[0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]]
    a3 = [[0, 0, 0, 0], [0, 0, 0, 1], [0, 0, -2, 0], [0, 1, 0, 0]]
    return Pencil([a0, a1, a2, a3])


def sextic_parametrization():
    """Degree-4 parametrization of a finite set on the sextic Gram pencil."""
    q = UniPoly([-11, 16, -5, -2, 1])
    q0 = UniPoly([187, -1787, 5475, -8058, 6130, -1917, -448, 576, -180, 20])
    q1 = UniPoly([374, -3371, 10434, -16087, 13725, -6294, 1070, 284, -156, 20])
    q2 = UniPoly([-374, 3138, -9040, 12678, -9040, 2230, 1233, -1116, 330, -36])
    q3 = UniPoly([0, -1683, 7148, -12775, 12087, -6130, 1278, 192, -144, 20])
    return RationalParametrization(q, q0, [q1, q2, q3])


@pytest.fixture
def rng():
    return random.Random(20240611)


# -- acceptance reporting ---------------------------------------------------

_criteria = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion with a PASS/FAIL line")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        # an expected failure is still a FAIL for the criterion it tracks
        ok = report.passed and not hasattr(report, "wasxfail")
        _criteria.append((mark.args[0], ok))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok in _criteria:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}")
