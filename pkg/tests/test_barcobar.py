import random
from fractions import Fraction
from itertools import product as iproduct

import pytest
from hypothesis import given, strategies as st

from mcgauge import randgen
from mcgauge.barcobar import (
    apply_weight_map,
    bar_ass,
    bar_com,
    bar_lie,
    bar_unital,
    cobar_ass,
    harrison_projection,
    koszul_perm_sign,
    shuffle_product,
)
from mcgauge.dgcore import DgAlgebra, DgLieAlgebra, GradedVectorSpace
from mcgauge.mc import convolution, is_mc
from mcgauge.pbw import EnvelopingAlgebra

from conftest import abelian_lie, square_zero, unital

F = Fraction


def _mobius(n):
    out, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            out = -out
        p += 1
    return -out if m > 1 else out


def free_lie_odd(n, w):
    """dim of the weight-w part of the free Lie superalgebra on n odd generators."""
    total = sum(_mobius(d) * (-1) ** (w + w // d) * n ** (w // d) for d in range(1, w + 1) if w % d == 0)
    assert total % w == 0
    return total // w


def zero_product(n, deg=0):
    names = tuple(f"x{i}" for i in range(n))
    return DgAlgebra(GradedVectorSpace(names, (deg,) * n), {}, {}, None, True)


# --- associative bar ---------------------------------------------------------

def test_bar_ass_square_zero():
    B = bar_ass(square_zero(0), 4)
    assert B.dims() == [1, 1, 1, 1]
    assert not any(B.d0.values()) and not any(B.d1.values())
    assert B.check_axioms() == []


def test_bar_ass_zero_product_dims():
    B = bar_ass(zero_product(2), 4)
    assert B.dims() == [2, 4, 8, 16]
    assert not any(B.d1.values())


def test_bar_ass_truncated_polynomial():
    sp = GradedVectorSpace(("x", "x2"), (0, 0))
    A = DgAlgebra(sp, {}, {(0, 0): {1: F(1)}}, None, True)
    B = bar_ass(A, 3)
    i = B.index_of((0, 0))[1]
    assert B.d1[2][i] == {B.index_of((1,))[1]: F(1)}
    assert B.check_axioms() == []


def test_bar_ass_rejects_unital_and_bad_weight():
    with pytest.raises(ValueError):
        bar_ass(unital((), ()), 2)
    with pytest.raises(ValueError):
        bar_ass(square_zero(), 0)


# --- Harrison bar -------------------------------------------------------------

def test_bar_com_square_zero_examples():
    assert bar_com(square_zero(0), 4).dims() == [1, 1, 0, 0]
    assert bar_com(square_zero(1), 4).dims() == [1, 0, 0, 0]


@pytest.mark.parametrize("n,W", [(1, 5), (2, 5), (3, 3)])
def test_bar_com_zero_product_is_free_lie(n, W):
    B = bar_com(zero_product(n), W)
    assert B.dims() == [free_lie_odd(n, w) for w in range(1, W + 1)]
    assert B.check_axioms() == []


def test_bar_com_rejects_noncommutative():
    N = randgen.random_noncommutative_algebra(random.Random(3))
    with pytest.raises(ValueError, match="commutativity"):
        bar_com(N, 3)


def test_harrison_projection_examples():
    A = zero_product(2)
    BC = bar_com(A, 3)
    BA = BC.parent
    p = harrison_projection(BA, BC)
    for i in range(BA.dim(1)):
        assert p[1][i] == {i: F(1)}
    ldeg = lambda x: 1
    for u, v in [((0,), (1,)), ((0,), (0, 1)), ((1,), (0, 1))]:
        sh = {BA.index_of(word): F(c) for word, c in shuffle_product(u, v, ldeg).items()}
        assert apply_weight_map(p, sh) == {}
    with pytest.raises(ValueError, match="truncation mismatch"):
        harrison_projection(bar_ass(A, 2), BC)


@given(st.integers(0, 10_000))
def test_projection_is_a_chain_map(seed):
    rng = random.Random(seed)
    A = randgen.random_commutative_algebra(rng, 2)
    BC = bar_com(A, 4)
    BA = BC.parent
    p = BC.proj
    for k in BA.keys():
        x = {k: F(1)}
        assert apply_weight_map(p, BA.D(x)) == BC.D(apply_weight_map(p, x))


@given(st.integers(0, 10_000))
def test_random_bars_satisfy_axioms(seed):
    rng = random.Random(seed)
    A = randgen.random_commutative_algebra(rng, 3)
    assert bar_ass(A, 3).check_axioms() == []
    assert bar_com(A, 3).check_axioms() == []


# --- Chevalley-Eilenberg -----------------------------------------------------------

def test_bar_lie_examples():
    assert bar_lie(abelian_lie((0,)), 4).dims() == [1, 0, 0, 0]
    assert bar_lie(abelian_lie((1,)), 4).dims() == [1, 1, 1, 1]
    assert bar_lie(abelian_lie((1, 1)), 3).dims()[1] == 3


def sl2():
    sp = GradedVectorSpace(("e", "f", "h"), (0, 0, 0))
    br = {(0, 1): {2: F(1)}, (1, 0): {2: F(-1)},
          (2, 0): {0: F(2)}, (0, 2): {0: F(-2)},
          (2, 1): {1: F(-2)}, (1, 2): {1: F(2)}}
    return DgLieAlgebra(sp, {}, br, "sl2")


def test_bar_lie_sl2():
    B = bar_lie(sl2(), 3)
    assert B.dims() == [3, 3, 1]
    assert B.check_axioms() == []
    for k in B.keys():
        assert B.D(B.D({k: F(1)})) == {}


@given(st.integers(0, 10_000))
def test_random_ce_bars_satisfy_axioms(seed):
    g = randgen.random_lie_algebra(random.Random(seed), 3, (0, 2))
    assert bar_lie(g, 3).check_axioms() == []


# --- curved bars -----------------------------------------------------------------

def test_bar_unital_of_ground_field():
    B = bar_unital(unital((), ()), "associative", 3)
    assert B.dims() == [0, 0, 0] and B.curvature == {}


def test_bar_unital_exterior():
    A = unital(("u",), (1,))
    for flavor, dims in (("associative", [1, 1, 1]), ("commutative", [1, 0, 0])):
        B = bar_unital(A, flavor, 3)
        assert B.dims() == dims
        assert B.curvature == {}
        assert not any(B.d0.values()) and not any(B.d1.values())


def test_bar_unital_needs_unit():
    with pytest.raises(ValueError):
        bar_unital(square_zero(), "associative", 2)


def dual_numbers(split_shift=None):
    """K[e]/(e^2), |e| = 0, with complement spanned by e + shift.1."""
    split = None if split_shift is None else {"e": {1: F(1), 0: F(split_shift)}}
    return unital(("e",), (0,), splitting=split)


def test_defect_splitting_is_curved():
    B = bar_unital(dual_numbers(1), "commutative", 3)
    assert B.curvature == {(2, 0): F(-1)}
    assert B.check_axioms() == []


def test_defect_splitting_mc_sets_biject():
    """Strict maps e -> a correspond under e + c.1 -> a + c.1."""
    target = unital(("d",), (0,), name="B")
    c = 1
    std = convolution(bar_unital(dual_numbers(), "commutative", 3), target)
    dfc = convolution(bar_unital(dual_numbers(c), "commutative", 3), target)
    for x, y in iproduct(range(-2, 3), repeat=2):
        a = {(1, 0, 0): F(x), (1, 0, 1): F(y)}
        b = {(1, 0, 0): F(x + c), (1, 0, 1): F(y)}
        a = {k: v for k, v in a.items() if v}
        b = {k: v for k, v in b.items() if v}
        assert is_mc(std, a) == is_mc(dfc, b) == (x == 0)


@given(st.integers(0, 10_000))
def test_random_curved_bars(seed):
    rng = random.Random(seed)
    A = randgen.unitalize(randgen.random_commutative_algebra(rng, 3), rng, twist_splitting=True)
    for flavor in ("associative", "commutative"):
        assert bar_unital(A, flavor, 3).check_axioms() == []


# --- cobar ---------------------------------------------------------------------

def test_cobar_of_weight_one_coalgebra_has_zero_differential():
    C = cobar_ass(bar_ass(zero_product(2), 1), (-2, 3), 1)
    for k in range(-2, 4):
        assert C.d_matrix(k).is_zero()


def test_cobar_bar_recovers_homology():
    assert cobar_ass(bar_ass(square_zero(0), 4), (-1, 2), 4).homology() == {-1: 0, 0: 1, 1: 0, 2: 0}
    sp = GradedVectorSpace(("x", "y"), (1, 0))
    A = DgAlgebra(sp, {0: {1: F(1)}}, {}, None, True)
    assert all(v == 0 for v in cobar_ass(bar_ass(A, 3), (-1, 3), 3).homology().values())


def test_cobar_of_ce_bar_matches_enveloping_algebra():
    g = abelian_lie((1,))
    H = cobar_ass(bar_lie(g, 4), (0, 4), 4).homology()
    U = EnvelopingAlgebra(g, 4)
    reduced = {}
    for m, d in zip(U.monomials, U.space.degrees):
        if m:
            reduced[d] = reduced.get(d, 0) + 1
    assert {k: v for k, v in H.items() if v} == reduced


# --- signs -------------------------------------------------------------------------

def test_koszul_signs_and_shuffles():
    assert koszul_perm_sign([1, 1], [1, 0]) == -1
    assert koszul_perm_sign([1, 2], [1, 0]) == 1
    odd = lambda x: 1
    assert shuffle_product((0,), (0,), odd) == {}
    even = lambda x: 0
    assert shuffle_product((0,), (1,), even) == {(0, 1): 1, (1, 0): 1}
