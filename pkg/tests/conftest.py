from fractions import Fraction

import pytest
from hypothesis import settings

from mcgauge.dgcore import DgAlgebra, DgLieAlgebra, GradedVectorSpace

settings.register_profile("default", deadline=None, max_examples=25, derandomize=True)
settings.load_profile("default")


def square_zero(deg=0, name="A"):
    """One generator x with x^2 = 0 and d = 0."""
    return DgAlgebra(GradedVectorSpace(("x",), (deg,)), {}, {}, None, True, name=name)


def unital(names, degs, prod=None, diff=None, splitting=None, name="A"):
    """Unital commutative algebra with unit "one" prepended to the basis."""
    names = ("one",) + tuple(names)
    degs = (0,) + tuple(degs)
    n = len(names)
    table = {(0, i): {i: Fraction(1)} for i in range(n)}
    table.update({(i, 0): {i: Fraction(1)} for i in range(n)})
    for (a, b), v in (prod or {}).items():
        table[(a, b)] = v
    return DgAlgebra(GradedVectorSpace(names, degs), diff or {}, table, 0, True, splitting, name)


def k_plus_ku():
    return unital(("u",), (1,), name="A'")


def abelian_lie(degs, name="g"):
    names = tuple(f"{name}{i}" for i in range(len(degs)))
    return DgLieAlgebra(GradedVectorSpace(names, tuple(degs)), {}, {}, name)


@pytest.fixture
def sq0():
    return square_zero(0)
