import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from mcgauge import randgen
from mcgauge.barcobar import bar_ass, bar_com, bar_unital
from mcgauge.dgcore import DgAlgebra, GradedVectorSpace, sign
from mcgauge.mc import (
    ObstructionReport,
    Twisted,
    add,
    bch,
    convolution,
    gauge_act,
    gauge_lift,
    gauge_search,
    is_mc,
    mc_check,
    mc_extend,
    scale,
    truncate,
    twisted_homology,
)
from mcgauge.pbw import convolution_retraction

from conftest import square_zero, unital

F = Fraction


def random_conv(seed, W=3, kind="ass"):
    rng = random.Random(seed)
    A = randgen.random_commutative_algebra(rng, 2, name="A")
    B = randgen.random_commutative_algebra(rng, 2, name="B")
    C = bar_ass(A, W) if kind == "ass" else bar_com(A, W)
    return rng, convolution(C, B, W)


def homogeneous(rng, g, k):
    return randgen.random_element(rng, g, k, 0.6)


@given(st.integers(0, 10_000), st.sampled_from(["ass", "com"]))
def test_convolution_is_a_dg_lie_algebra(seed, kind):
    rng, g = random_conv(seed, kind=kind)
    ks = [rng.choice((-2, -1, 0, 1)) for _ in range(3)]
    x, y, z = (homogeneous(rng, g, k) for k in ks)
    # d^2 = 0
    assert g.d(g.d(x)) == {}
    # Leibniz
    lhs = g.d(g.bracket(x, y))
    rhs = add(g.bracket(g.d(x), y), (sign(ks[0]), g.bracket(x, g.d(y))))
    assert lhs == rhs
    # graded antisymmetry
    assert g.bracket(x, y) == scale(g.bracket(y, x), -sign(ks[0] * ks[1]))
    # Jacobi: [x,[y,z]] = [[x,y],z] + (-1)^{|x||y|} [y,[x,z]]
    lhs = g.bracket(x, g.bracket(y, z))
    rhs = add(g.bracket(g.bracket(x, y), z), (sign(ks[0] * ks[1]), g.bracket(y, g.bracket(x, z))))
    assert lhs == rhs


def test_mc_check_flat_and_curved():
    _, g = random_conv(1)
    assert not g.curved
    assert mc_check(g, {}) == {} and is_mc(g, {})
    A = unital(("e",), (0,), {(1, 1): {1: 1}}, {}, {"e": {1: 1, 0: 1}})
    B = unital((), (), name="B")
    h = convolution(bar_unital(A, "associative", 2), B, 2)
    assert h.curved
    assert mc_check(h, {}) == {w: v for w, v in _by_weight(h.curvature).items()}
    assert not is_mc(h, {})


def _by_weight(x):
    out = {}
    for e, c in x.items():
        out.setdefault(e[0], {})[e] = c
    return out


def test_mc_degree_is_checked():
    _, g = random_conv(1)
    e = g.basis(0)
    if e:
        with pytest.raises(ValueError, match="degree"):
            mc_check(g, {e[0]: F(1)})


@given(st.integers(0, 10_000))
def test_mc_extend_and_random_mc(seed):
    rng, g = random_conv(seed)
    alpha = randgen.random_mc(rng, g)
    assert is_mc(g, alpha)
    for w in range(1, g.W):
        ext = mc_extend(g, truncate(alpha, 1, w), w)
        assert ext.consistent
        cand = add(truncate(alpha, 1, w), ext.element())
        assert not truncate(g.residual(cand), 1, w + 1)


@settings(max_examples=100)
@given(st.integers(0, 10_000))
def test_gauge_action_preserves_mc(seed):
    rng, g = random_conv(seed)
    alpha = randgen.random_mc(rng, g)
    lam = randgen.random_gauge(rng, g)
    assert is_mc(g, gauge_act(g, lam, alpha))
    # group law: lam . (mu . alpha) = BCH(lam, mu) . alpha
    mu = randgen.random_gauge(rng, g)
    assert gauge_act(g, lam, gauge_act(g, mu, alpha)) == gauge_act(g, bch(g, lam, mu), alpha)


@given(st.integers(0, 10_000))
def test_bch_inverse(seed):
    rng, g = random_conv(seed)
    a = randgen.random_gauge(rng, g)
    assert bch(g, a, scale(a, -1)) == {}
    assert bch(g, a, {}) == a


def test_gauge_search_identity_and_synthesized():
    rng, g = random_conv(7, W=3)
    alpha = randgen.random_mc(rng, g)
    assert gauge_search(g, alpha, alpha) == {}
    for seed in range(10):
        rng, g = random_conv(seed, W=3)
        alpha = randgen.random_mc(rng, g)
        alpha2 = gauge_act(g, randgen.random_gauge(rng, g), alpha)
        mu = gauge_search(g, alpha, alpha2)
        assert not isinstance(mu, ObstructionReport)
        assert not truncate(add(gauge_act(g, mu, alpha), (-1, alpha2)), 1, g.W)


def test_gauge_search_weight_one_obstruction():
    A = DgAlgebra(GradedVectorSpace(("x",), (0,)), {}, {}, None, True)
    B = DgAlgebra(GradedVectorSpace(("y",), (0,)), {}, {}, None, True)
    h = convolution(bar_com(A, 3), B, 3)
    rep = gauge_search(h, {}, {(1, 0, 0): F(1)})
    assert isinstance(rep, ObstructionReport)
    assert rep.weight == 1 and rep.status == "obstructed" and rep.class_nonzero
    rep = gauge_search(h, {}, {(1, 0, 0): F(1)}, budget=0)
    assert rep.status == "inconclusive"


def test_gauge_search_rejects_non_mc():
    checked = 0
    for seed in range(20):
        _, g = random_conv(seed)
        for e in g.basis(-1):
            bad = {e: F(1)}
            if not is_mc(g, bad):
                with pytest.raises(ValueError, match="not Maurer-Cartan"):
                    gauge_search(g, {}, bad)
                checked += 1
                break
    assert checked


def test_gauge_lift_along_identity():
    rng, g = random_conv(3)
    ident = lambda x: dict(x)
    alpha = randgen.random_mc(rng, g)
    lam = randgen.random_gauge(rng, g)
    alpha2 = gauge_act(g, lam, alpha)
    res = gauge_lift(g, g, ident, ident, alpha, alpha2, lam)
    assert all(s.strategy in "A-" for s in res.stages)
    assert not truncate(add(gauge_act(g, res.gauge, alpha), (-1, alpha2)), 1, g.W)


def test_gauge_lift_rejects_bad_witness():
    rng, g = random_conv(3)
    alpha = randgen.random_mc(rng, g)
    lam = randgen.random_gauge(rng, g)
    alpha2 = gauge_act(g, lam, alpha)
    if alpha2 != alpha:
        with pytest.raises(ValueError, match="witness"):
            gauge_lift(g, g, dict, dict, alpha, alpha2, {})


def test_twisted_algebra_is_flat():
    A = unital(("e",), (0,), {(1, 1): {1: 1}}, {}, {"e": {1: 1, 0: 1}})
    B = unital(("b",), (0,), {(1, 1): {1: 1}}, name="B")
    h = convolution(bar_unital(A, "commutative", 2), B, 2)
    alpha = randgen.random_mc(random.Random(0), h, base=randgen.augmentation_mc(h, A))
    assert is_mc(h, alpha)
    T = Twisted(h, alpha)
    assert not truncate(T.curvature, 1, 2)
    for k in (-1, 0, 1):
        for e in T.basis(k):
            assert not truncate(T.d(T.d({e: F(1)})), 1, 2)


def test_twisted_homology():
    R = convolution_retraction(square_zero(0), square_zero(0, "y"), 2)
    h = R.h
    rep0 = twisted_homology(h, {}, (-2, 1))
    assert set(rep0["totals"]) == {-2, -1, 0, 1}
    assert all(len(rep0["representatives"][k]) == rep0["totals"][k] for k in rep0["totals"])
    with pytest.raises(ValueError):
        nonmc = {e: F(1) for e in h.basis(-1)}
        if not is_mc(h, nonmc):
            twisted_homology(h, nonmc, (0, 0))
        else:
            raise ValueError


def test_twisting_changes_homology():
    """Twisting by a weight-1 MC element can change the homology dimensions."""
    A = square_zero(0)
    B = unital(("b",), (0,), name="B")
    h = convolution(bar_com(A, 2), B, 2)
    found = False
    for e in h.basis(-1, 1, 1):
        alpha = {e: F(1)}
        if is_mc(h, alpha):
            t0 = twisted_homology(h, {}, (-2, 1))["totals"]
            t1 = twisted_homology(h, alpha, (-2, 1))["totals"]
            found |= t0 != t1
    assert found


# --- small hand-checkable instances -------------------------------------------------

def x_and_x2(name="A"):
    """span{x, x2}, both degree 0, x.x = x2: the truncated polynomial ring without unit."""
    sp = GradedVectorSpace(("x", "x2"), (0, 0))
    return DgAlgebra(sp, {}, {(0, 0): {1: F(1)}}, None, True, name=name)


def test_weight_two_bracket_by_hand():
    # one Sweedler term: [f, f](sx|sx) = 2 (f * f)(sx|sx) = +-2 f(sx) f(sx) = +-2 x2
    g = convolution(bar_ass(square_zero(0), 2), x_and_x2("B"), 2)
    f = {(1, 0, 0): F(1)}
    br = g.bracket(f, f)
    assert list(br) == [(2, 0, 1)] and abs(br[(2, 0, 1)]) == 2
    # the weight-2 residual is the bracket term plus d of the weight-1 part
    res = truncate(g.residual(f), 2, 2)
    assert res == truncate(add(scale(br, F(1, 2)), g.d(f)), 2, 2)


def test_exterior_source_has_no_weight_two_curvature():
    A = unital(("u",), (1,))
    h = convolution(bar_unital(A, "commutative", 3), unital(("v",), (1,), name="B"), 3)
    assert not any(e[0] == 2 for e in h.curvature)


def test_extension_kernel_from_zero_is_cycles():
    from mcgauge.exactalg import kernel
    _, g = random_conv(5)
    for w in range(0, g.W):
        n = w + 1
        src, tgt = g.basis(-1, n, n), g.basis(-2, n, n)
        M = g.matrix(lambda v: truncate(g.d(v), n, n), src, tgt)
        ext = mc_extend(g, {}, w)
        assert ext.consistent and ext.particular == {}
        assert len(ext.kernel) == len(kernel(M))


def test_weight_two_extension_into_exterior_target():
    # A = span{x, y, xy} (degree 0, x.y = y.x = xy), target K + Ku
    sp = GradedVectorSpace(("x", "y", "xy"), (0, 0, 0))
    A = DgAlgebra(sp, {}, {(0, 1): {2: F(1)}, (1, 0): {2: F(1)}}, None, True)
    g = convolution(bar_com(A, 2), unital(("u",), (1,), name="B"), 2)
    ext = mc_extend(g, {}, 1)
    assert ext.consistent and len(ext.kernel) == 6
    assert is_mc(g, ext.element([1] * 6))
    # x.x = 0 forces alpha(sx)^2 = 0 at weight 2, and similarly for y and xy
    for e in g.basis(-1, 1, 1):
        assert not truncate(g.residual({e: F(1)}), 1, 1)
        assert not mc_extend(g, {e: F(1)}, 1).consistent


def test_central_closed_gauge_fixes_everything():
    A = square_zero(0)
    B = DgAlgebra(GradedVectorSpace(("y0", "y1"), (0, 1)), {}, {}, None, True, name="B")
    g = convolution(bar_com(A, 3), B, 3)
    alpha = {(1, 0, 0): F(1)}
    lam = {(1, 0, 1): F(3)}
    assert is_mc(g, alpha) and g.d(lam) == {}
    assert gauge_act(g, lam, alpha) == alpha


@given(st.integers(0, 10_000))
def test_gauge_inverse_round_trip(seed):
    rng, g = random_conv(seed)
    alpha = randgen.random_mc(rng, g)
    lam = randgen.random_gauge(rng, g)
    assert gauge_act(g, lam, gauge_act(g, scale(lam, -1), alpha)) == alpha


def test_first_stage_fixes_weight_one():
    for seed in range(10):
        rng, g = random_conv(seed)
        alpha = randgen.random_mc(rng, g)
        alpha2 = gauge_act(g, randgen.random_gauge(rng, g), alpha)
        mu = gauge_search(g, alpha, alpha2, W=1)
        assert not truncate(add(gauge_act(g, mu, alpha), (-1, alpha2)), 1, 1)
