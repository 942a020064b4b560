"""Faithfulness witnesses and the classification of maps out of K[x, y].

The witnesses all follow one pattern: a gauge in the big convolution algebra
(associative side, or U h side) is pushed back along a filtered retraction
by ``mc.gauge_lift``, and the result is re-verified exactly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .dgcore import DgAlgebra, DgLieAlgebra, GradedVectorSpace, Violation, check_axioms, sign
from .exactalg import Echelon, kernel, Matrix, rank_of_vectors, vaddto
from .mc import (
    Element,
    LiftResult,
    Twisted,
    add,
    gauge_act,
    gauge_lift,
    homology,
    truncate,
    twisted_homology,
)
from .pbw import Retraction, convolution_retraction, enveloping_retraction, unital_retraction
from . import randgen


# --- retraction contract ----------------------------------------------------------

def _all_entries(g):
    degs = sorted({g.entry_deg((w, i, j)) for w in range(1, g.W + 1)
                   for i in range(g.C.dim(w)) for j in range(len(g.tdeg))})
    out = []
    for k in degs:
        out.extend(g.basis(k))
    return out


def check_retraction(R: Retraction, module_degrees: Optional[Tuple[int, ...]] = None) -> List[Violation]:
    """r.i = id, chain map, filtration, module identity on basis elements."""
    h, g = R.h, R.g
    out: List[Violation] = []
    hb = _all_entries(h)
    gb = _all_entries(g)
    lab = lambda alg, e: f"{alg.C.labels[e[0]][e[1]]}->{alg.target.space.names[e[2]]}"
    for e in hb:
        x = {e: Fraction(1)}
        if R.r(R.i(x)) != x:
            out.append(Violation("r.i = id", (lab(h, e),)))
    for e in gb:
        y = {e: Fraction(1)}
        ry = R.r(y)
        if any(k[0] != e[0] for k in ry):
            out.append(Violation("filtration", (lab(g, e),)))
        if R.r(g.d(y)) != h.d(ry):
            out.append(Violation("chain map", (lab(g, e),)))
    if h.curved or g.curved:
        if R.r(g.curvature) != h.curvature:
            out.append(Violation("curvature", ("theta",)))
    hsel = [e for e in hb if module_degrees is None or h.entry_deg(e) in module_degrees]
    gsel = [e for e in gb if module_degrees is None or g.entry_deg(e) in module_degrees]
    for e in hsel:
        x = {e: Fraction(1)}
        ix = R.i(x)
        for f in gsel:
            if e[0] + f[0] > g.W:
                continue
            y = {f: Fraction(1)}
            if R.r(g.bracket(ix, y)) != h.bracket(x, R.r(y)):
                out.append(Violation("module map", (lab(h, e), lab(g, f))))
    return out


def verify_retraction_contract(A: DgAlgebra, A2: DgAlgebra, W: int, section=None) -> List[Violation]:
    """Empty list iff the Harrison retraction hom(B A, A2) -> hom(B_Com A, A2) satisfies the contract."""
    return check_retraction(convolution_retraction(A, A2, W, section))


def planted_non_section(A: DgAlgebra, W: int):
    """The Eulerian section with its weight-2 part replaced by the representative
    word itself, which is not a chain-compatible section in general."""
    from .pbw import harrison_section
    H = harrison_section(A, W)
    s = {w: dict(v) for w, v in H.s.items()}
    if W >= 2:
        s[2] = {k: {i: Fraction(1)} for k, i in enumerate(H.BC.rep[2])}
        # also break r.i = id on weight 1
    s[1] = {k: {i: Fraction(2)} for k, i in enumerate(H.BC.rep[1])}
    return s


# --- morphism pairs and witnesses -------------------------------------------------

@dataclass
class MorphismPair:
    A: object
    A2: object
    f: Element
    g: Element
    witness: Optional[Element] = None
    kind: str = "commutative"  # "commutative", "unital" or "enveloping"
    retraction: Optional[Retraction] = None


def faithfulness_witness(pair: MorphismPair, W: int) -> LiftResult:
    """C-infinity homotopy between pair.f and pair.g from an A-infinity one."""
    R = pair.retraction or convolution_retraction(pair.A, pair.A2, W)
    if R.h.W != W:
        raise ValueError(f"truncation mismatch: algebras built through {R.h.W}, asked for {W}")
    for name, x in (("f", pair.f), ("g", pair.g)):
        if truncate(R.h.residual(x), 1, W):
            raise ValueError(f"{name} is not Maurer-Cartan through weight {W}")
    if pair.witness is None:
        raise ValueError("no witness homotopy supplied")
    return gauge_lift(R.h, R.g, R.i, R.r, pair.f, pair.g, pair.witness, W,
                      contract_check=lambda: not check_retraction(R, (0, -1)))


def unital_faithfulness_witness(pair: MorphismPair, W: int) -> LiftResult:
    """Curved case: twist both sides at f, lift 0 ~ g - f, and read the gauge back."""
    R = pair.retraction or unital_retraction(pair.A, pair.A2, W)
    if truncate(R.h.residual(pair.f), 1, W):
        raise ValueError("f does not satisfy the curved MC equation")
    hT = Twisted(R.h, pair.f)
    gT = Twisted(R.g, R.i(pair.f))
    if truncate(hT.curvature, 1, W) or truncate(gT.curvature, 1, W):
        raise AssertionError("twisted algebras are not flat")
    y = add(pair.g, (-1, pair.f))
    res = gauge_lift(hT, gT, R.i, R.r, {}, y, pair.witness, W,
                     contract_check=lambda: not check_retraction(R, (0, -1)))
    if truncate(add(gauge_act(R.h, res.gauge, pair.f), (-1, pair.g)), 1, W):
        raise AssertionError("internal error: transported gauge does not verify")
    return res


def enveloping_faithfulness_witness(g: DgLieAlgebra, h: DgLieAlgebra, f: Element, f2: Element,
                                    witness: Element, W: int, T: Optional[int] = None,
                                    retraction: Optional[Retraction] = None) -> LiftResult:
    """Gauge in hom(B_Lie g, h) from one in hom(B_Lie g, U h)."""
    R = retraction or enveloping_retraction(g, h, W, T)
    res = gauge_lift(R.h, R.g, R.i, R.r, f, f2, witness, W)
    if R.U.escapes and not R.U.policy:
        from .barcobar import TruncationError
        raise TruncationError("truncation unsound for this instance")
    return res


# --- synthesis ------------------------------------------------------------------------

def synthesize(R: Retraction, rng: random.Random) -> MorphismPair:
    f, f2, lam, _ = randgen.synthesize_pair(rng, R.h, R.g, R.i)
    return MorphismPair(None, None, f, f2, lam, retraction=R)


def _structured(alg) -> bool:
    table = alg.product if isinstance(alg, DgAlgebra) else alg.bracket
    return bool(table) or bool(alg.differential)


def synthesize_commutative(seed: int, W: int = 4, max_dim: int = 3, tries: int = 60) -> MorphismPair:
    """Round-trip instance; resamples within the seeded stream until the
    algebras carry structure and f differs from g."""
    rng = random.Random(seed)
    last = None
    for _ in range(tries):
        A = randgen.random_commutative_algebra(rng, max_dim, name="A")
        A2 = randgen.random_commutative_algebra(rng, max_dim, name="B")
        if not (_structured(A) and _structured(A2)) and last is not None:
            continue
        R = convolution_retraction(A, A2, W)
        p = synthesize(R, rng)
        p.A, p.A2 = A, A2
        last = p
        if p.f != p.g and _structured(A) and _structured(A2):
            break
    return last


def synthesize_unital(seed: int, W: int = 3, max_dim: int = 2, tries: int = 20) -> MorphismPair:
    """Curved round-trip instance; resamples within the seeded stream until
    the algebras carry structure and f differs from g."""
    rng = random.Random(seed)
    from .mc import bch
    last = None
    for _ in range(tries):
        A = randgen.unitalize(randgen.random_commutative_algebra(rng, max_dim, name="A"), rng, twist_splitting=True)
        A2 = randgen.unitalize(randgen.random_commutative_algebra(rng, max_dim, name="B"))
        R = unital_retraction(A, A2, W)
        f = randgen.random_mc(rng, R.h, base=randgen.augmentation_mc(R.h, A))
        if truncate(R.h.residual(f), 1, W):
            raise RuntimeError("could not build a curved MC element")
        mu0 = randgen.random_gauge(rng, R.h)
        f2 = gauge_act(R.h, mu0, f)
        kappa = randgen.twisted_cycle(rng, R.g, R.i(f2))
        lam = bch(R.g, kappa, R.i(mu0))
        last = MorphismPair(A, A2, f, f2, lam, "unital", R)
        if _structured(A) and _structured(A2) and f != f2:
            break
    return last


def synthesize_enveloping(seed: int, W: int = 3, tries: int = 200) -> Tuple[DgLieAlgebra, DgLieAlgebra, MorphismPair]:
    rng = random.Random(seed)
    last = None
    for _ in range(tries):
        g = randgen.random_lie_algebra(rng, 3, (0, 1), name="x")
        h = randgen.random_lie_algebra(rng, 3, (1, 2), name="y")
        if not (_structured(g) and _structured(h)):
            continue
        R = enveloping_retraction(g, h, W)
        p = synthesize(R, rng)
        p.A, p.A2, p.kind = g, h, "enveloping"
        last = (g, h, p)
        if p.f != p.g:
            break
    if last is None:
        raise RuntimeError("no structured Lie algebras sampled")
    return last


# --- polynomial forms on the interval ---------------------------------------------

class PolynomialFormsLine:
    """Omega_1 truncated at polynomial degree D: t^k (degree 0), t^k dt (degree -1)."""

    def __init__(self, D: int):
        if D < 1:
            raise ValueError("polynomial cap D must be >= 1")
        self.D = D
        names = [f"t^{k}" for k in range(D + 1)] + [f"t^{k}dt" for k in range(D)]
        degs = [0] * (D + 1) + [-1] * D
        self.space = GradedVectorSpace(tuple(names), tuple(degs))
        self.differential = {k: {D + 1 + k - 1: Fraction(k)} for k in range(1, D + 1)}
        self.product = {}
        for a in range(D + 1):
            for b in range(D + 1):
                if a + b <= D:
                    self.product[(a, b)] = {a + b: Fraction(1)}
                if a + b <= D - 1:
                    self.product[(a, D + 1 + b)] = {D + 1 + a + b: Fraction(1)}
                    self.product[(D + 1 + b, a)] = {D + 1 + a + b: Fraction(1)}

    def ev(self, s: int, i: int) -> Fraction:
        """Evaluation at t = s (0 or 1) of a basis form."""
        if i > self.D:
            return Fraction(0)
        return Fraction(s ** i)

    def d(self, v):
        out = {}
        for i, c in v.items():
            vaddto(out, self.differential.get(i, {}), c)
        return out

    def check_axioms(self):
        out = []
        for i in range(self.space.dim):
            if self.d(self.d({i: Fraction(1)})):
                out.append(Violation("d^2 = 0", (self.space.names[i],)))
        return out


def _tensor_complex(A2: DgAlgebra, Om: PolynomialFormsLine):
    """A2 (x) Omega_1^{<= D}: degrees and differential on pairs (a, k)."""
    keys = [(a, k) for a in range(A2.dim) for k in range(Om.space.dim)]
    deg = {(a, k): A2.space.degrees[a] + Om.space.degrees[k] for a, k in keys}
    diff = {}
    for a, k in keys:
        v = {}
        for b, c in A2.d({a: Fraction(1)}).items():
            v[(b, k)] = v.get((b, k), 0) + c
        for l, c in Om.d({k: Fraction(1)}).items():
            v[(a, l)] = v.get((a, l), 0) + sign(A2.space.degrees[a]) * c
        diff[(a, k)] = {x: y for x, y in v.items() if y}
    return keys, deg, diff


def _cycles(keys, deg, diff, k):
    src = [x for x in keys if deg[x] == k]
    tgt = [x for x in keys if deg[x] == k - 1]
    pos = {x: i for i, x in enumerate(tgt)}
    M = Matrix.from_columns(len(tgt), [{pos[t]: c for t, c in diff[s].items()} for s in src])
    return [{src[i]: c for i, c in z.items()} for z in kernel(M)]


def _relations(A2: DgAlgebra, D: int, k: int) -> List[Dict[int, Fraction]]:
    """R_k = (ev_1 - ev_0)(Z_k(A2 (x) Omega_1^{<= D})) as vectors in A2."""
    Om = PolynomialFormsLine(D)
    keys, deg, diff = _tensor_complex(A2, Om)
    out = []
    for z in _cycles(keys, deg, diff, k):
        v = {}
        for (a, i), c in z.items():
            e = Om.ev(1, i) - Om.ev(0, i)
            if e:
                v[a] = v.get(a, 0) + c * e
        v = {a: c for a, c in v.items() if c}
        if v:
            out.append(v)
    return out


def _algebra_cycles(A2: DgAlgebra, k: int) -> List[Dict[int, Fraction]]:
    src = A2.space.in_degree(k)
    tgt = A2.space.in_degree(k - 1)
    pos = {t: i for i, t in enumerate(tgt)}
    M = Matrix.from_columns(len(tgt), [{pos[t]: c for t, c in A2.d({s: Fraction(1)}).items()} for s in src])
    return [{src[i]: c for i, c in z.items()} for z in kernel(M)]


def _classification(A2: DgAlgebra, D: int):
    Z0, Z1 = _algebra_cycles(A2, 0), _algebra_cycles(A2, 1)
    R0, R1 = _relations(A2, D, 0), _relations(A2, D, 1)
    q0 = rank_of_vectors(Z0) - rank_of_vectors(R0)
    q1 = rank_of_vectors(Z1) - rank_of_vectors(R1)
    return Z0, Z1, R0, R1, q0, q1


def example_1_4(A2: DgAlgebra, D: int = 3) -> Dict[str, object]:
    """Homotopy classes of maps K[x, y] -> A2 (commutative) versus maps from
    the cofibrant model K<x, y, z>, dz = xy - yx (associative)."""
    if A2.unit is None:
        raise ValueError("target must be unital")
    bad = check_axioms(A2)
    if bad:
        from .dgcore import AxiomError
        raise AxiomError(bad)
    if not A2.commutative:
        raise ValueError("target must be commutative")
    # the relation xy - yx maps to ab - ba = 0 for all degree-0 a, b
    deg0 = A2.space.in_degree(0)
    for a in deg0:
        for b in deg0:
            v = A2.mul({a: Fraction(1)}, {b: Fraction(1)})
            vaddto(v, A2.mul({b: Fraction(1)}, {a: Fraction(1)}), -1)
            if v:
                raise ValueError("degree-0 elements do not commute")
    results = {}
    for cap in (D, D + 1):
        Z0, Z1, R0, R1, q0, q1 = _classification(A2, cap)
        results[cap] = (q0, q1)
    q0, q1 = results[D]
    stable = results[D] == results[D + 1]
    comm = 2 * q0
    assoc = 2 * q0 + q1
    # comparison (a, b) -> (a, b, 0) on quotients: image dimension
    Z0, Z1, R0, R1, _, _ = _classification(A2, D)
    n = A2.dim
    embed = lambda v, slot: {slot * n + a: c for a, c in v.items()}
    rel = [embed(v, 0) for v in R0] + [embed(v, 1) for v in R0] + [embed(v, 2) for v in R1]
    imgs = [embed(v, 0) for v in Z0] + [embed(v, 1) for v in Z0]
    image_dim = rank_of_vectors(rel + imgs) - rank_of_vectors(rel)
    injective = image_dim == comm
    surjective = image_dim == assoc
    verdict = f"{comm} vs {assoc}; " + ("injective" if injective else "not injective") + ", " + \
        ("surjective" if surjective else "not surjective")
    return {
        "commutative_parameters": comm,
        "associative_parameters": assoc,
        "H0": q0,
        "H1": q1,
        "injective": injective,
        "surjective": surjective,
        "stable": stable,
        "D": D,
        "verdict": verdict,
    }


# --- homology split injectivity -----------------------------------------------------

def homology_split_injectivity(A: DgAlgebra, A2: DgAlgebra, alpha: Element, window: Tuple[int, int],
                               W: int = 3, R: Optional[Retraction] = None) -> Dict[str, object]:
    """H(h^alpha) -> H(g^{i alpha}) is injective with left inverse induced by r."""
    R = R or convolution_retraction(A, A2, W)
    h, g = R.h, R.g
    ialpha = R.i(alpha)
    Hh = twisted_homology(h, alpha, window)
    per_degree = {}
    ok = True
    for k in range(window[0], window[1] + 1):
        reps = Hh["representatives"][k]
        gb_src = g.basis(k + 1)
        pos = {e: n for n, e in enumerate(g.basis(k))}
        bounds = []
        for e in gb_src:
            v = g.twisted_d(ialpha, {e: Fraction(1)})
            bounds.append({pos[t]: c for t, c in v.items()})
        images = [{pos[t]: c for t, c in R.i(z).items()} for z in reps]
        rb = rank_of_vectors(bounds)
        injective = rank_of_vectors(bounds + images) - rb == len(reps)
        cycles = all(not g.twisted_d(ialpha, R.i(z)) for z in reps)
        split = all(R.r(R.i(z)) == z for z in reps)
        # r carries twisted boundaries to twisted boundaries (chain map for the twisted differentials)
        chain = all(R.r(g.twisted_d(ialpha, {e: Fraction(1)})) == h.twisted_d(alpha, R.r({e: Fraction(1)}))
                    for e in gb_src)
        per_degree[k] = {"h_dim": len(reps), "image_rank": rank_of_vectors(bounds + images) - rb,
                         "injective": injective, "split": split and chain and cycles}
        ok &= injective and split and chain and cycles
    return {"ok": ok, "degrees": per_degree}
