import random
from fractions import Fraction
from itertools import permutations
from math import comb, factorial

import pytest
from hypothesis import given, strategies as st

from mcgauge import randgen
from mcgauge.barcobar import TruncationError, apply_weight_map, bar_com
from mcgauge.dgcore import DgLieAlgebra, GradedVectorSpace
from mcgauge.faithful import check_retraction
from mcgauge.pbw import (
    EnvelopingAlgebra,
    GroupAlgebraElement,
    bracket_span_rank,
    convolution_retraction,
    descents,
    eulerian_idempotent,
    inverse,
    harrison_section,
    pbw_decompose,
    primitive_projection,
    required_cap,
    stirling_first,
    sym_dims,
    uc_compare,
)
from mcgauge.suite import _equivariance

from conftest import abelian_lie, square_zero

F = Fraction


def test_small_eulerian_idempotents():
    assert eulerian_idempotent(1, 1).coefficients == {(1,): F(1)}
    e1 = eulerian_idempotent(2, 1)
    assert e1.coefficients == {(1, 2): F(1, 2), (2, 1): F(-1, 2)}
    assert eulerian_idempotent(2, 2).coefficients == {(1, 2): F(1, 2), (2, 1): F(1, 2)}
    assert e1 * e1 == e1
    assert e1.act(("x", "y")) == {("x", "y"): F(1, 2), ("y", "x"): F(-1, 2)}


@pytest.mark.parametrize("n", range(1, 7))
def test_first_idempotent_closed_form(n):
    """Coefficient of w in e^(1) is (-1)^d / (n binom(n-1, d)), d = descents of w^-1."""
    e = eulerian_idempotent(n, 1)
    for w in permutations(range(1, n + 1)):
        d = descents(inverse(w))
        assert e.coefficients.get(w, 0) == F((-1) ** d, n * comb(n - 1, d))


def test_pbw_small_ranks():
    assert pbw_decompose(1).ranks == {1: 1}
    assert pbw_decompose(2).ranks == {1: 1, 2: 1}
    P = pbw_decompose(3)
    assert [P.ranks[k] for k in (1, 2, 3)] == [2, 3, 1]
    assert all(P.certificate.values())


@pytest.mark.parametrize("n", [4, 5])
def test_pbw_certificates(n):
    P = pbw_decompose(n)
    assert all(P.certificate.values()), P.certificate
    assert sum(P.ranks.values()) == factorial(n)


def test_component_bases_have_rank_dimensions():
    P = pbw_decompose(3)
    for k, basis in P.component_bases.items():
        assert len(basis) == P.ranks[k]


def test_pbw_arity_cap():
    with pytest.raises(ValueError):
        pbw_decompose(9)


def test_oracles():
    assert [bracket_span_rank(n) for n in range(1, 6)] == [1, 1, 2, 6, 24]
    assert [stirling_first(4, k) for k in range(1, 5)] == [6, 11, 6, 1]
    assert sum(stirling_first(5, k) for k in range(1, 6)) == 120


def test_group_algebra_product_is_associative():
    rng = random.Random(0)
    perms = list(permutations(range(1, 4)))
    el = lambda: GroupAlgebraElement(3, {p: F(rng.randint(-2, 2)) for p in perms})
    a, b, c = el(), el(), el()
    assert (a * b) * c == a * (b * c)


# --- Harrison section and the convolution retraction -----------------------------

def test_section_examples():
    H = harrison_section(square_zero(0), 3)
    for i in range(H.BC.dim(1)):
        assert H.section({(1, i): F(1)}) == {(1, i): F(1)}
    word = H.BA.index_of((0, 0))
    assert H.section({(2, 0): F(1)}) == {word: F(1)}


@given(st.integers(0, 10_000))
def test_section_is_a_chain_splitting(seed):
    A = randgen.random_commutative_algebra(random.Random(seed), 2)
    H = harrison_section(A, 4)
    for k in H.BC.keys():
        x = {k: F(1)}
        assert H.project(H.section(x)) == x
        assert H.section(H.BC.D(x)) == H.BA.D(H.section(x))


@given(st.integers(0, 10_000))
def test_retraction_identities(seed):
    rng = random.Random(seed)
    A = randgen.random_commutative_algebra(rng, 2)
    A2 = randgen.random_commutative_algebra(rng, 2)
    R = convolution_retraction(A, A2, 3)
    for _ in range(5):
        f = randgen.random_element(rng, R.h, -1)
        assert R.r(R.i(f)) == f
    for w in range(1, 4):
        y = randgen.random_element(rng, R.g, -1, wmin=w)
        y = {e: c for e, c in y.items() if e[0] == w}
        assert all(e[0] == w for e in R.r(y))
    assert check_retraction(R) == []


def test_uc_compare():
    rep = uc_compare(square_zero(0), 4)
    assert rep["bar_dims"] == [1, 1, 1, 1] == rep["sym_dims"]
    assert rep["dims_match"] and rep["p_s_identity"]


@given(st.integers(0, 10_000))
def test_uc_compare_random(seed):
    A = randgen.random_commutative_algebra(random.Random(seed), 2)
    rep = uc_compare(A, 4)
    assert rep["dims_match"] and rep["p_s_identity"]
    assert rep["bar_dims"][0] == rep["sym_dims"][0]


# --- enveloping algebras ------------------------------------------------------------

def two_dim():
    """[a, b] = b in degree 0."""
    sp = GradedVectorSpace(("a", "b"), (0, 0))
    return DgLieAlgebra(sp, {}, {(0, 1): {1: F(1)}, (1, 0): {1: F(-1)}}, "n")


def test_abelian_enveloping_algebra():
    U = EnvelopingAlgebra(abelian_lie((0,), "x"), 3)
    assert U.space.names == ("1", "x0", "x0*x0", "x0*x0*x0")
    x = U.include({0: F(1)})
    assert x == {1: F(1)}
    assert U.mul(x, U.mul(x, x)) == {3: F(1)}
    r = primitive_projection(U)
    assert r(x) == {0: F(1)} and r({2: F(1)}) == {}


def test_straightening_step():
    U = EnvelopingAlgebra(two_dim(), 3)
    a, b = U.include({0: F(1)}), U.include({1: F(1)})
    ab = U.mul(a, b)
    expected = dict(ab)
    expected[U.index((1,))] = expected.get(U.index((1,)), 0) - 1
    assert U.mul(b, a) == {k: v for k, v in expected.items() if v}
    assert U.check_axioms() == []


def test_adjoint_equivariance_two_dim():
    assert _equivariance(EnvelopingAlgebra(two_dim(), 3)) == []


@given(st.integers(0, 10_000))
def test_pbw_dimensions(seed):
    h = randgen.random_lie_algebra(random.Random(seed), 3, (0, 2))
    U = EnvelopingAlgebra(h, 4)
    assert U.length_dims() == sym_dims(h.space.degrees, 4)
    assert _equivariance(U) == []
    r = primitive_projection(U)
    for x in range(h.dim):
        assert r(U.include({x: F(1)})) == {x: F(1)}


def test_sym_dims():
    assert sym_dims((0,), 3) == [1, 1, 1, 1]
    assert sym_dims((1,), 3) == [1, 1, 0, 0]
    assert sym_dims((0, 0), 2) == [1, 2, 3]


def test_degree_policy():
    g = abelian_lie((1,))
    with pytest.raises(TruncationError, match="truncation unsound"):
        required_cap(g, abelian_lie((0,), "h"), 3)
    assert required_cap(g, abelian_lie((1, 2), "h"), 3) == 6
