import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from mcgauge import randgen
from mcgauge.dgcore import (
    AxiomError,
    CurvedLieAlgebra,
    DgAlgebra,
    DgLieAlgebra,
    GradedVectorSpace,
    check_axioms,
    homology_of,
    twist,
)

from conftest import k_plus_ku

F = Fraction


def identities(report):
    return {v.identity for v in report}


def test_zero_algebra_is_valid():
    A = DgAlgebra(GradedVectorSpace(("x", "y"), (0, 1)))
    assert check_axioms(A) == []


def test_planted_associativity_defect():
    sp = GradedVectorSpace(("a", "b", "c"), (0, 0, 0))
    A = DgAlgebra(sp, {}, {(0, 0): {1: F(1)}, (1, 0): {2: F(1)}})
    bad = [v for v in check_axioms(A) if v.identity == "associativity"]
    assert bad and bad[0].witness == ("a", "a", "a")


def test_commutativity_and_leibniz_defects():
    sp = GradedVectorSpace(("a", "b", "c"), (0, 0, 0))
    A = DgAlgebra(sp, {}, {(0, 1): {2: F(1)}}, commutative=True)
    assert "graded commutativity" in identities(check_axioms(A))
    # e acts as a unit on a but kills b = d a: d(e a) = b while d(e) a + e d(a) = 0
    sp = GradedVectorSpace(("a", "b", "e"), (1, 0, 0))
    A = DgAlgebra(sp, {0: {1: F(1)}}, {(2, 0): {0: F(1)}, (0, 2): {0: F(1)}, (2, 2): {2: F(1)}})
    assert "Leibniz" in identities(check_axioms(A))


def test_curved_lie_with_d_squared_nonzero():
    sp = GradedVectorSpace(("a", "b", "c"), (2, 1, 0))
    L = CurvedLieAlgebra(sp, {0: {1: F(1)}, 1: {2: F(1)}}, {}, "L", {})
    assert "curvature identity" in identities(check_axioms(L))


def test_lie_defects():
    sp = GradedVectorSpace(("a", "b"), (0, 0))
    g = DgLieAlgebra(sp, {}, {(0, 1): {1: F(1)}, (1, 0): {1: F(1)}})
    assert "antisymmetry" in identities(check_axioms(g))


def test_homology_examples():
    H = homology_of(k_plus_ku(), (0, 1))
    assert H[0][0] == 1 and H[1][0] == 1
    sp = GradedVectorSpace(("a", "b"), (1, 0))
    acyclic = DgAlgebra(sp, {0: {1: F(1)}})
    assert all(d == 0 for d, _ in homology_of(acyclic).values())
    names = ("x", "y", "xx", "xy", "yy", "one")
    poly = DgAlgebra(GradedVectorSpace(names, (0,) * 6))
    assert homology_of(poly)[0][0] == 6


def _nilpotent_lie():
    """a (deg -1), b (deg -2): [a, a] = b, d a = -1/2 b; a is Maurer-Cartan."""
    sp = GradedVectorSpace(("a", "b"), (-1, -2))
    return DgLieAlgebra(sp, {0: {1: F(-1, 2)}}, {(0, 0): {1: F(1)}}, "n")


def test_twist_by_zero_is_identity():
    g = _nilpotent_lie()
    t = twist(g, {})
    assert t.differential == g.differential and t.curvature == {}


def test_twist_by_mc_element_is_flat():
    g = _nilpotent_lie()
    assert check_axioms(g) == []
    t = twist(g, {0: F(1)})
    assert t.curvature == {}
    assert check_axioms(t) == []
    assert t.differential[0] == {1: F(1, 2)}


def test_twist_rejects_wrong_degree():
    with pytest.raises(ValueError):
        twist(_nilpotent_lie(), {1: F(1)})


@given(st.integers(0, 10_000))
def test_twice_twisting(seed):
    rng = random.Random(seed)
    g = randgen.random_lie_algebra(rng, 3, (-2, 1))
    minus = g.space.in_degree(-1)
    a = {i: F(rng.choice((-2, -1, 1, 2))) for i in minus if rng.random() < 0.7}
    b = {i: F(rng.choice((-2, -1, 1, 2))) for i in minus if rng.random() < 0.7}
    ab = {i: a.get(i, 0) + b.get(i, 0) for i in set(a) | set(b)}
    ab = {i: c for i, c in ab.items() if c}
    lhs, rhs = twist(twist(g, a), b), twist(g, ab)
    assert lhs.differential == rhs.differential
    assert lhs.curvature == rhs.curvature
    assert check_axioms(lhs) == []


@given(st.integers(0, 10_000))
def test_random_algebras_are_valid(seed):
    rng = random.Random(seed)
    A = randgen.random_commutative_algebra(rng, 3)
    assert check_axioms(A) == []
    assert check_axioms(randgen.unitalize(A, rng, twist_splitting=True)) == []
    assert check_axioms(randgen.random_lie_algebra(rng, 3)) == []


def test_axiom_error_carries_report():
    sp = GradedVectorSpace(("a", "b", "c"), (0, 0, 0))
    A = DgAlgebra(sp, {}, {(0, 0): {1: F(1)}, (1, 0): {2: F(1)}})
    err = AxiomError(check_axioms(A))
    assert "associativity" in str(err)
