"""Seeded random instances: small dg algebras, Lie algebras, MC elements, gauges.

All generators take a ``random.Random`` so results depend only on the seed.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional, Tuple

from .dgcore import DgAlgebra, DgLieAlgebra, GradedVectorSpace, check_axioms, sign
from .mc import Element, add, bch, gauge_act, mc_extend, truncate

COEFFS = (-2, -1, 1, 2)


def _coef(rng):
    return Fraction(rng.choice(COEFFS))


def _split_degrees(rng, n, lo, hi, allow_square=True):
    """Degrees for V (generators) and W (square-zero part) of total size n.

    Each W element is planted as the target of a product v_a v_b or of a
    differential d v_a, so the random tables below are rarely empty.
    """
    nv = n if n == 1 else rng.randint(1, n - 1)
    pool = list(range(lo, hi + 1)) + [d for d in (-1, 0, 0, 1) if lo <= d <= hi]
    dv = [rng.choice(pool) for _ in range(nv)]
    dw = []
    for _ in range(n - nv):
        prods, diffs = [], []
        for a in range(nv):
            for b in range(a, nv):
                if a == b and (dv[a] % 2) != (0 if allow_square else 1):
                    continue
                if lo <= dv[a] + dv[b] <= hi:
                    prods.append(dv[a] + dv[b])
            if dv[a] - 1 >= lo:
                diffs.append(dv[a] - 1)
        options = prods if prods and (not diffs or rng.random() < 0.7) else diffs
        dw.append(rng.choice(options) if options else rng.choice(pool))
    return dv, dw


def random_commutative_algebra(rng: random.Random, max_dim: int = 3, degrees: Tuple[int, int] = (-1, 2),
                               commutative: bool = True, name: str = "A") -> DgAlgebra:
    """A = V + W with V.V in W, W.A = 0, d(V) in W, d(W) = 0.

    Every such table is associative and Leibniz; graded commutativity is
    imposed on V.V when ``commutative`` is set.
    """
    lo, hi = degrees
    n = max(1, max_dim - rng.choice((0, 0, 1, 2)))
    dv, dw = _split_degrees(rng, n, lo, hi)
    degs = dv + dw
    nv = len(dv)
    names = [f"v{i}" for i in range(nv)] + [f"w{i}" for i in range(len(dw))]
    W_by_deg = {}
    for k, d in enumerate(dw):
        W_by_deg.setdefault(d, []).append(nv + k)
    prod = {}
    for a in range(nv):
        for b in range(a if commutative else 0, nv):
            targets = W_by_deg.get(dv[a] + dv[b], [])
            if not targets or rng.random() < 0.2:
                continue
            if commutative and a == b and dv[a] % 2:
                continue
            v = {t: _coef(rng) for t in targets if rng.random() < 0.7}
            if not v:
                continue
            prod[(a, b)] = v
            if commutative and a != b:
                s = sign(dv[a] * dv[b])
                prod[(b, a)] = {t: s * c for t, c in v.items()}
    diff = {}
    for a in range(nv):
        targets = W_by_deg.get(dv[a] - 1, [])
        if targets and rng.random() < 0.5:
            diff[a] = {t: _coef(rng) for t in targets}
    A = DgAlgebra(GradedVectorSpace(tuple(names), tuple(degs)), diff, prod, None, commutative, name=name)
    assert not check_axioms(A), check_axioms(A)
    return A


def random_noncommutative_algebra(rng: random.Random, max_dim: int = 3) -> DgAlgebra:
    """Square-zero-type algebra with a deliberately non-commutative product."""
    while True:
        A = random_commutative_algebra(rng, max_dim, (0, 0), commutative=False)
        A.commutative = True
        if any(v.identity == "graded commutativity" for v in check_axioms(A)):
            return A


def unitalize(A: DgAlgebra, rng: Optional[random.Random] = None, twist_splitting: bool = False) -> DgAlgebra:
    """K.1 + A with 1 as first basis element; optionally a shifted splitting
    (complement spanned by v + c.1 for degree-0 v), which makes the curved bar
    genuinely curved."""
    n = A.dim
    names = ("one",) + A.space.names
    degs = (0,) + A.space.degrees
    prod = {(0, 0): {0: Fraction(1)}}
    for i in range(n):
        prod[(0, i + 1)] = {i + 1: Fraction(1)}
        prod[(i + 1, 0)] = {i + 1: Fraction(1)}
    for (a, b), v in A.product.items():
        prod[(a + 1, b + 1)] = {t + 1: c for t, c in v.items()}
    diff = {a + 1: {t + 1: c for t, c in v.items()} for a, v in A.differential.items()}
    split = None
    if twist_splitting and rng is not None:
        split = {}
        for i in range(n):
            v = {i + 1: Fraction(1)}
            if degs[i + 1] == 0 and rng.random() < 0.7:
                v[0] = _coef(rng)
            split[names[i + 1]] = v
    U = DgAlgebra(GradedVectorSpace(names, degs), diff, prod, 0, A.commutative, split, A.name)
    assert not check_axioms(U), check_axioms(U)
    return U


def random_lie_algebra(rng: random.Random, max_dim: int = 3, degrees: Tuple[int, int] = (0, 2),
                       name: str = "g") -> DgLieAlgebra:
    """g = V + W with [V, V] in W central and d(V) in W (two-step nilpotent)."""
    lo, hi = degrees
    n = max(1, max_dim - rng.choice((0, 0, 1, 2)))
    dv, dw = _split_degrees(rng, n, lo, hi, allow_square=False)
    degs = dv + dw
    nv = len(dv)
    names = [f"{name}{i}" for i in range(n)]
    W_by_deg = {}
    for k, d in enumerate(dw):
        W_by_deg.setdefault(d, []).append(nv + k)
    br = {}
    for a in range(nv):
        for b in range(a, nv):
            targets = W_by_deg.get(dv[a] + dv[b], [])
            if not targets or rng.random() < 0.2:
                continue
            if a == b and dv[a] % 2 == 0:
                continue  # [x, x] = 0 for even x
            v = {t: _coef(rng) for t in targets if rng.random() < 0.7}
            if not v:
                continue
            br[(a, b)] = v
            if a != b:
                s = -sign(dv[a] * dv[b])
                br[(b, a)] = {t: s * c for t, c in v.items()}
    diff = {}
    for a in range(nv):
        targets = W_by_deg.get(dv[a] - 1, [])
        if targets and rng.random() < 0.5:
            diff[a] = {t: _coef(rng) for t in targets}
    g = DgLieAlgebra(GradedVectorSpace(tuple(names), tuple(degs)), diff, br, name)
    assert not check_axioms(g), check_axioms(g)
    return g


def random_element(rng: random.Random, g, k: int, density: float = 0.5, wmin: int = 1) -> Element:
    return {e: _coef(rng) for e in g.basis(k, wmin) if rng.random() < density}


def random_mc(rng: random.Random, g, base: Optional[Element] = None, density: float = 0.6, tries: int = 20) -> Element:
    """MC element built weight by weight from random points of the affine extension sets.

    With ``base`` (an MC element, needed in curved algebras where 0 is not MC)
    each weight starts from the base component when it still solves the
    weight's equation, so the result is a random deformation of the base.
    """
    if base is None and not getattr(g, "curved", False):
        base = {}
    for t in range(tries):
        # later tries perturb less; with a base the last try returns it unchanged
        dens = density * (tries - 1 - t) / max(1, tries - 1) if base is not None else density
        alpha: Element = {}
        ok = True
        for w in range(0, g.W):
            if base is not None:
                trial = add(alpha, truncate(base, w + 1, w + 1))
                if not truncate(g.residual(trial), w + 1, w + 1):
                    ext = mc_extend(g, alpha, w)
                    coeffs = [rng.choice((0,) + COEFFS) if rng.random() < dens else 0 for _ in ext.kernel]
                    alpha = add(trial, *[(c, k) for c, k in zip(coeffs, ext.kernel) if c])
                    continue
            ext = mc_extend(g, alpha, w)
            if not ext.consistent:
                ok = False
                break
            coeffs = [rng.choice((0,) + COEFFS) if rng.random() < dens else 0 for _ in ext.kernel]
            alpha = add(alpha, ext.element(coeffs))
        if ok:
            return alpha
    raise RuntimeError("no Maurer-Cartan element found")


def augmentation_mc(h, A) -> Element:
    """MC element of hom(B_u A, A2) for the unital map A -> K -> A2.

    It sends s(v) to eps(v) 1 on the chosen complement, where eps kills the
    original non-unit basis; it lives in weight 1.
    """
    from .barcobar import unital_coordinates
    comp, _, _ = unital_coordinates(A)
    unit = h.target.unit
    out: Element = {}
    words = h.C.words[1]
    for k, word in enumerate(words):
        c = comp[word[0]].get(A.unit, 0)
        if c:
            out[(1, k, unit)] = Fraction(c)
    return out


def random_gauge(rng: random.Random, g, density: float = 0.5) -> Element:
    return random_element(rng, g, 0, density)


def twisted_cycle(rng: random.Random, g, x: Element, density: float = 0.5) -> Element:
    """Random degree-0 element of F^1 killed by d + [x, -]."""
    from .exactalg import kernel
    src = g.basis(0)
    tgt = g.basis(-1)
    M = g.matrix(lambda v: g.twisted_d(x, v), src, tgt)
    out: Element = {}
    for k in kernel(M):
        if rng.random() < density:
            add_c = _coef(rng)
            for i, c in k.items():
                out[src[i]] = out.get(src[i], 0) + add_c * c
    return {e: c for e, c in out.items() if c}


def synthesize_pair(rng: random.Random, h, g, i, tries: int = 10):
    """(alpha, alpha', lam) with alpha' = mu0 . alpha in h and lam . i(alpha) = i(alpha') in g.

    lam = BCH(kappa, i(mu0)) with kappa a twisted cycle at i(alpha'), so lam
    differs from i(mu0) by a stabilizer element.
    """
    alpha = random_mc(rng, h)
    mu0 = random_gauge(rng, h)
    alpha2 = gauge_act(h, mu0, alpha)
    kappa = twisted_cycle(rng, g, i(alpha2))
    lam = bch(g, kappa, i(mu0))
    return alpha, alpha2, lam, mu0
