"""Convolution Lie algebras hom(C, A'), Maurer-Cartan elements and gauges.

An element of a convolution algebra is a sparse dict ``(w, i, j) -> c``:
the map sending the basis element ``(w, i)`` of the source coalgebra to
``c`` times basis element ``j`` of the target, plus other entries.  Its
(entry) degree is ``|j| - |(w, i)|`` and its filtration weight is ``w``;
F^n is spanned by entries of weight >= n.  Elements need not be
homogeneous: signs are applied entry by entry.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .barcobar import TruncationError, WeightGradedCoalgebra
from .dgcore import DgAlgebra, DgLieAlgebra, sign
from .exactalg import Matrix, homology, solve_linear, vaddto

Entry = Tuple[int, int, int]
Element = Dict[Entry, Fraction]
# type aliases kept for readability in signatures
MCElement = Element
GaugeElement = Element


class StageFailure(RuntimeError):
    """The gauge-lifting stage could not be solved."""

    def __init__(self, stage, discrepancy, hypotheses_hold, trace=None):
        self.stage = stage
        self.discrepancy = discrepancy
        self.hypotheses_hold = hypotheses_hold
        self.trace = trace or []
        what = "retraction contract re-verifies" if hypotheses_hold else "retraction contract FAILS"
        super().__init__(f"criterion stage failed at weight {stage} ({what})")


# --- element helpers --------------------------------------------------------

def add(*terms) -> Element:
    """Linear combination: ``add((c1, x1), (c2, x2), ...)`` or plain elements."""
    out: Element = {}
    for t in terms:
        if isinstance(t, tuple):
            c, x = t
        else:
            c, x = 1, t
        vaddto(out, x, c)
    return out


def scale(x: Element, c) -> Element:
    return {k: c * v for k, v in x.items()} if c else {}


def truncate(x: Element, lo: int = 1, hi: Optional[int] = None) -> Element:
    """Entries of weight in [lo, hi]."""
    return {k: v for k, v in x.items() if k[0] >= lo and (hi is None or k[0] <= hi)}


def by_weight(x: Element) -> Dict[int, Element]:
    out: Dict[int, Element] = {}
    for k, v in x.items():
        out.setdefault(k[0], {})[k] = v
    return dict(sorted(out.items()))


def lowest_weight(x: Element) -> Optional[int]:
    return min((k[0] for k in x), default=None)


# --- the convolution algebra ---------------------------------------------------

class ConvolutionLie:
    """hom(C, T) through weight W with its (possibly curved) Lie structure.

    Three flavours, chosen from the inputs:

    * Lie-coalgebra source, commutative target: bracket from the cobracket;
    * Lie algebra target (cocommutative source): bracket from the target bracket;
    * otherwise the associative convolution product, bracket = graded commutator.
    """

    def __init__(self, source: WeightGradedCoalgebra, target, W: Optional[int] = None, name: str = "g"):
        self.C = source
        self.target = target
        self.W = source.W if W is None else W
        self.name = name
        if self.W > source.W:
            raise TruncationError(f"convolution needs weight {self.W} but the source stops at {source.W}")
        if isinstance(target, DgLieAlgebra):
            if source.kind != "cocommutative":
                raise ValueError("a Lie target needs a cocommutative source")
            self.mode = "lie-target"
            self._op = lambda a, b: target.br({a: Fraction(1)}, {b: Fraction(1)})
        elif source.is_lie:
            if not getattr(target, "commutative", False):
                raise ValueError("Lie-coalgebra source requires a commutative target")
            self.mode = "cobracket"
            self._op = lambda a, b: target.mul({a: Fraction(1)}, {b: Fraction(1)})
        else:
            self.mode = "associative"
            self._op = lambda a, b: target.mul({a: Fraction(1)}, {b: Fraction(1)})
        self._op_cache: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
        self.tdeg = list(target.space.degrees)
        self._by_tdeg: Dict[int, List[int]] = {}
        for j, d in enumerate(self.tdeg):
            self._by_tdeg.setdefault(d, []).append(j)
        # inverse of the source differential: x -> [(y, c)] with D y containing c x
        self._Dinv: Dict[Tuple[int, int], List[Tuple[Tuple[int, int], Fraction]]] = {}
        for y in source.keys():
            if y[0] > self.W:
                continue
            for x, c in source.D({y: Fraction(1)}).items():
                self._Dinv.setdefault(x, []).append((y, c))
        self.curvature: Element = {}
        if source.curved and source.curvature:
            unit = getattr(target, "unit", None)
            if unit is None:
                raise ValueError("curved source needs a unital target")
            self.curvature = {(w, i, unit): c for (w, i), c in source.curvature.items() if w <= self.W}
        self._basis_cache: Dict[Tuple[int, int, int], List[Entry]] = {}

    @property
    def curved(self) -> bool:
        return bool(self.curvature)

    # degrees and bases
    def entry_deg(self, e: Entry) -> int:
        return self.tdeg[e[2]] - self.C.deg((e[0], e[1]))

    def degrees(self, x: Element) -> set:
        return {self.entry_deg(e) for e in x}

    def basis(self, k: int, wmin: int = 1, wmax: Optional[int] = None) -> List[Entry]:
        """Entries of degree k with weight in [wmin, wmax]."""
        wmax = self.W if wmax is None else min(wmax, self.W)
        key = (k, wmin, wmax)
        if key not in self._basis_cache:
            out = []
            for w in range(max(wmin, 1), wmax + 1):
                for i, d in enumerate(self.C.degrees.get(w, [])):
                    for j in self._by_tdeg.get(k + d, []):
                        out.append((w, i, j))
            self._basis_cache[key] = out
        return self._basis_cache[key]

    # structure
    def op(self, a: int, b: int) -> Dict[int, Fraction]:
        r = self._op_cache.get((a, b))
        if r is None:
            r = self._op(a, b)
            self._op_cache[(a, b)] = r
        return r

    def _group(self, f: Element):
        out: Dict[Tuple[int, int], List[Tuple[int, Fraction, int]]] = {}
        for e, c in f.items():
            out.setdefault((e[0], e[1]), []).append((e[2], c, self.entry_deg(e)))
        return out

    def convolve(self, f: Element, g: Element) -> Element:
        """(f * g)(x) = sum (-1)^{|g||x1|} f(x1) g(x2) over the (co)product of x."""
        if not f or not g:
            return {}
        inv = self.C.inverse_coproduct()
        fs, gs = self._group(f), self._group(g)
        out: Element = {}
        for x1, fl in fs.items():
            dx1 = self.C.deg(x1)
            for x2, gl in gs.items():
                if x1[0] + x2[0] > self.W:
                    continue
                targets = inv.get((x1, x2))
                if not targets:
                    continue
                for j1, c1, _ in fl:
                    for j2, c2, d2 in gl:
                        prod = self.op(j1, j2)
                        if not prod:
                            continue
                        s = sign(d2 * dx1) * c1 * c2
                        for x, c in targets:
                            for j, k in prod.items():
                                key = (x[0], x[1], j)
                                v = out.get(key, 0) + s * c * k
                                if v:
                                    out[key] = v
                                else:
                                    out.pop(key, None)
        return out

    def bracket(self, f: Element, g: Element) -> Element:
        if self.mode != "associative":
            return self.convolve(f, g)
        out: Element = {}
        fd, gd = _split_degrees(self, f), _split_degrees(self, g)
        for a, fa in fd.items():
            for b, gb in gd.items():
                vaddto(out, self.convolve(fa, gb))
                vaddto(out, self.convolve(gb, fa), -sign(a * b))
        return out

    def d(self, f: Element) -> Element:
        """d f = d_T . f - (-1)^|f| f . D_C."""
        out: Element = {}
        T = self.target
        for e, c in f.items():
            w, i, j = e
            for t, k in T.d({j: Fraction(1)}).items():
                key = (w, i, t)
                out[key] = out.get(key, 0) + c * k
            s = sign(self.entry_deg(e))
            for y, k in self._Dinv.get((w, i), []):
                key = (y[0], y[1], j)
                out[key] = out.get(key, 0) - s * c * k
        return {k: v for k, v in out.items() if v}

    def residual(self, alpha: Element) -> Element:
        out = dict(self.curvature)
        vaddto(out, self.d(alpha))
        vaddto(out, self.bracket(alpha, alpha), Fraction(1, 2))
        return out

    def twisted_d(self, alpha: Element, f: Element) -> Element:
        out = self.d(f)
        vaddto(out, self.bracket(alpha, f))
        return out

    def matrix(self, op: Callable[[Element], Element], src: Sequence[Entry], tgt: Sequence[Entry]) -> Matrix:
        pos = {e: n for n, e in enumerate(tgt)}
        cols = []
        for e in src:
            img = op({e: Fraction(1)})
            col = {}
            for t, c in img.items():
                if t in pos:
                    col[pos[t]] = c
            cols.append(col)
        return Matrix.from_columns(len(tgt), cols)

    def fmt(self, x: Element) -> str:
        parts = []
        for (w, i, j), c in sorted(x.items()):
            parts.append(f"{c}*[{self.C.labels[w][i]} -> {self.target.space.names[j]}]")
        return " + ".join(parts) if parts else "0"


def _split_degrees(g, x: Element) -> Dict[int, Element]:
    out: Dict[int, Element] = {}
    for e, c in x.items():
        out.setdefault(g.entry_deg(e), {})[e] = c
    return out


class Twisted:
    """g^alpha: same bracket, differential d + [alpha, -], curvature R(alpha)."""

    def __init__(self, base, alpha: Element):
        self.base = base
        self.alpha = dict(alpha)
        self.W = base.W
        self.C = base.C
        self.target = base.target
        self.curvature = base.residual(alpha)
        self.name = f"{base.name}^alpha"

    curved = property(lambda self: bool(self.curvature))

    def entry_deg(self, e):
        return self.base.entry_deg(e)

    def degrees(self, x):
        return self.base.degrees(x)

    def basis(self, k, wmin=1, wmax=None):
        return self.base.basis(k, wmin, wmax)

    def bracket(self, f, g):
        return self.base.bracket(f, g)

    def d(self, f):
        return self.base.twisted_d(self.alpha, f)

    def residual(self, beta):
        out = dict(self.curvature)
        vaddto(out, self.d(beta))
        vaddto(out, self.bracket(beta, beta), Fraction(1, 2))
        return out

    def twisted_d(self, beta, f):
        out = self.d(f)
        vaddto(out, self.bracket(beta, f))
        return out

    matrix = ConvolutionLie.matrix
    fmt = lambda self, x: self.base.fmt(x)


def convolution(C: WeightGradedCoalgebra, target, W: Optional[int] = None) -> ConvolutionLie:
    return ConvolutionLie(C, target, W)


# --- Maurer-Cartan ---------------------------------------------------------------

def _require_degree(g, x: Element, k: int, what: str):
    for e in x:
        if g.entry_deg(e) != k:
            raise ValueError(f"{what} has an entry of degree {g.entry_deg(e)}, expected {k}")
        if e[0] > g.W:
            raise ValueError(f"{what} has weight {e[0]} beyond the truncation {g.W}")


def mc_check(g, alpha: MCElement) -> Dict[int, Element]:
    """Residual theta + d alpha + 1/2 [alpha, alpha] split by weight; {} iff MC through W."""
    _require_degree(g, alpha, -1, "MC element")
    return by_weight(g.residual(alpha))


def is_mc(g, alpha: MCElement) -> bool:
    return not mc_check(g, alpha)


@dataclass
class WeightExtension:
    """Affine set of weight-(w+1) components making the residual vanish there."""

    weight: int
    basis: List[Entry]
    particular: Optional[Element]
    kernel: List[Element]

    @property
    def consistent(self) -> bool:
        return self.particular is not None

    def element(self, coeffs: Sequence = ()) -> Element:
        if self.particular is None:
            raise ValueError(f"extension obstructed at weight {self.weight}")
        out = dict(self.particular)
        for c, k in zip(coeffs, self.kernel):
            vaddto(out, k, Fraction(c))
        return out


def mc_extend(g, alpha: MCElement, w: int) -> WeightExtension:
    """Solve for alpha_{w+1} given alpha through weight w with vanishing residuals there."""
    _require_degree(g, alpha, -1, "MC element")
    alpha = truncate(alpha, 1, w)
    n = w + 1
    if n > g.W:
        raise TruncationError(f"extension to weight {n} beyond truncation {g.W}")
    res = truncate(g.residual(alpha), 1, w)
    if res:
        raise ValueError(f"residual does not vanish through weight {w}")
    rhs_full = truncate(g.residual(alpha), n, n)
    src = g.basis(-1, n, n)
    tgt = g.basis(-2, n, n)
    pos = {e: i for i, e in enumerate(tgt)}
    M = g.matrix(lambda v: truncate(g.d(v), n, n), src, tgt)
    sol = solve_linear(M, {pos[e]: -c for e, c in rhs_full.items()})
    to_elem = lambda v: {src[i]: c for i, c in v.items()}
    part = to_elem(sol.particular) if sol.consistent else None
    return WeightExtension(n, src, part, [to_elem(k) for k in sol.kernel_basis])


# --- gauge action and BCH ----------------------------------------------------------

def gauge_act(g, lam: GaugeElement, alpha: MCElement) -> MCElement:
    """lam . alpha = e^{ad lam} alpha - ((e^{ad lam} - 1)/ad lam)(d lam)."""
    _require_degree(g, lam, 0, "gauge")
    out = dict(alpha)
    term = dict(alpha)
    k = 1
    while term:
        term = scale(g.bracket(lam, term), Fraction(1, k))
        vaddto(out, term)
        k += 1
    term = g.d(lam)
    vaddto(out, term, -1)
    k = 2
    while term:
        term = scale(g.bracket(lam, term), Fraction(1, k))
        vaddto(out, term, -1)
        k += 1
    return out


def _wmul(a, b, N):
    out = {}
    for u, x in a.items():
        for v, y in b.items():
            if len(u) + len(v) <= N:
                w = u + v
                out[w] = out.get(w, 0) + x * y
    return {k: v for k, v in out.items() if v}


@lru_cache(maxsize=None)
def bch_series(N: int) -> Tuple[Tuple[Fraction, Tuple[int, ...]], ...]:
    """log(e^X e^Y) through degree N as left-normed brackets ``(c, word)``.

    Computed in the truncated free associative algebra and converted with
    the Dynkin-Specht-Wever map.  Letters: 0 = X, 1 = Y.
    """
    fact = [1]
    for k in range(1, N + 1):
        fact.append(fact[-1] * k)
    ex = {(0,) * a + (1,) * b: Fraction(1, fact[a] * fact[b]) for a in range(N + 1) for b in range(N + 1 - a)}
    Z = {w: c for w, c in ex.items() if w}
    log: Dict[tuple, Fraction] = {}
    power = dict(Z)
    for m in range(1, N + 1):
        for w, c in power.items():
            log[w] = log.get(w, 0) + Fraction((-1) ** (m + 1), m) * c
        power = _wmul(power, Z, N)
    return tuple((c / len(w), w) for w, c in sorted(log.items(), key=lambda t: (len(t[0]), t[0])) if c)


def bch(g, a: GaugeElement, b: GaugeElement) -> GaugeElement:
    """BCH(a, b) with exp(a) exp(b) = exp(BCH(a, b)), evaluated through weight W."""
    if not a:
        return dict(b)
    if not b:
        return dict(a)
    letters = (a, b)
    memo: Dict[tuple, Element] = {}

    def left_normed(w):
        if w in memo:
            return memo[w]
        if len(w) == 1:
            v = letters[w[0]]
        else:
            v = left_normed(w[:-1])
            v = g.bracket(v, letters[w[-1]]) if v else {}
        memo[w] = v
        return v

    out: Element = {}
    for c, w in bch_series(g.W):
        v = left_normed(w)
        if v:
            vaddto(out, v, c)
    return out


# --- gauge search ------------------------------------------------------------------

@dataclass
class ObstructionReport:
    weight: int
    residual: Element
    status: str  # "obstructed" or "inconclusive"
    class_nonzero: bool
    trace: List[str] = field(default_factory=list)

    def to_dict(self, g=None):
        from .exactalg import fmt
        return {
            "status": self.status,
            "weight": self.weight,
            "class_nonzero": self.class_nonzero,
            "residual": [[w, i, j, fmt(c)] for (w, i, j), c in sorted(self.residual.items())],
            "trace": list(self.trace),
        }


def stage_ok(g, x: Element, sigma: Element, disc: Element, n: int) -> bool:
    """Does exp(sigma) move x by exactly disc modulo F^{n+1}?"""
    lhs = truncate(g.twisted_d(x, sigma), 1, n)
    vaddto(lhs, disc)
    return not lhs


def stage_solve(g, x: Element, disc: Element, n: int, support: str = "full") -> Optional[Element]:
    """Find sigma with d^x sigma = -disc modulo F^{n+1}, or None."""
    lo = n if support == "weight" else 1
    src = g.basis(0, lo, n)
    tgt = g.basis(-1, 1, n)
    if not src:
        return None if disc else {}
    pos = {e: i for i, e in enumerate(tgt)}
    M = g.matrix(lambda v: truncate(g.twisted_d(x, v), 1, n), src, tgt)
    sol = solve_linear(M, {pos[e]: -c for e, c in disc.items()})
    if not sol.consistent:
        return None
    return {src[i]: c for i, c in sol.particular.items()}


def _graded_class_nonzero(g, x: Element, disc: Element, n: int) -> bool:
    # class of the weight-n discrepancy in the associated graded, whose
    # differential is the weight-preserving part of d
    src = g.basis(0, n, n)
    tgt = g.basis(-1, n, n)
    pos = {e: i for i, e in enumerate(tgt)}
    M = g.matrix(lambda v: truncate(g.d(v), n, n), src, tgt)
    return not solve_linear(M, {pos[e]: c for e, c in truncate(disc, n, n).items()}).consistent


def gauge_search(g, alpha: MCElement, alpha2: MCElement, start_weight: int = 1,
                 W: Optional[int] = None, budget: Optional[int] = None):
    """Weightwise search for lam with lam . alpha = alpha2 through W.

    At weight n the stage is a single linear system: with x = current image,
    find sigma in F^1 g_0 with d^x sigma = -(alpha2 - x) mod F^{n+1}.  The
    weight-n-only system is tried first; widening to all weights <= n costs
    one unit of ``budget`` (default: one per weight).  Because the widened
    system parametrizes every gauge moving x correctly mod F^{n+1}, its
    failure is a certificate.
    """
    W = g.W if W is None else W
    if W > g.W:
        raise TruncationError(f"search through {W} beyond truncation {g.W}")
    if budget is None:
        budget = W
    for name, a in (("alpha", alpha), ("alpha'", alpha2)):
        if truncate(g.residual(a), 1, W):
            raise ValueError(f"{name} is not Maurer-Cartan through weight {W}")
    if truncate(add(alpha2, (-1, alpha)), 1, start_weight - 1):
        raise ValueError(f"inputs differ below the start weight {start_weight}")
    x = dict(alpha)
    mu: Element = {}
    trace: List[str] = []
    used = 0
    for n in range(start_weight, W + 1):
        disc = truncate(add(alpha2, (-1, x)), 1, n)
        if not disc:
            trace.append(f"weight {n}: already agrees")
            continue
        sigma = stage_solve(g, x, disc, n, "weight")
        if sigma is not None:
            trace.append(f"weight {n}: solved with weight-{n} gauge")
        else:
            nonzero = _graded_class_nonzero(g, x, disc, n)
            if used >= budget:
                trace.append(f"weight {n}: weight-{n} system inconsistent, budget exhausted")
                return ObstructionReport(n, disc, "inconclusive", nonzero, trace)
            used += 1
            sigma = stage_solve(g, x, disc, n, "full")
            if sigma is None:
                trace.append(f"weight {n}: full system through weight {n} inconsistent")
                return ObstructionReport(n, disc, "obstructed", nonzero, trace)
            trace.append(f"weight {n}: solved after widening support to weights <= {n}")
        x = truncate(gauge_act(g, sigma, x), 1, g.W)
        mu = bch(g, sigma, mu)
    check = add(gauge_act(g, mu, alpha), (-1, alpha2))
    if truncate(check, 1, W):
        raise AssertionError("internal error: search result does not verify")
    return mu


# --- gauge lifting along a filtered retraction ------------------------------------

@dataclass
class StageRecord:
    stage: int
    strategy: str  # "A" (retraction-guided), "B" (direct solve), "-" (nothing to do)
    discrepancy_size: int


@dataclass
class LiftResult:
    gauge: GaugeElement
    stages: List[StageRecord]

    @property
    def strategy_a_fraction(self) -> float:
        used = [s for s in self.stages if s.strategy != "-"]
        if not used:
            return 1.0
        return sum(s.strategy == "A" for s in used) / len(used)


def gauge_lift(h, g, i: Callable[[Element], Element], r: Callable[[Element], Element],
               alpha: MCElement, alpha2: MCElement, lam: GaugeElement,
               W: Optional[int] = None, contract_check: Optional[Callable[[], bool]] = None) -> LiftResult:
    """Turn a g-gauge lam with lam . i(alpha) = i(alpha2) into an h-gauge mu.

    Stage n keeps x = current image of alpha, congruent to alpha2 mod F^n, and
    an exact g-gauge Lam with Lam . i(x) = i(alpha2).  Lam then stabilizes
    i(x) mod F^n, so d^{i x} Lam = -i(alpha2 - x) mod F^{n+1}; applying the
    retraction r (a filtered chain map and module map with r i = id) gives
    sigma = r(Lam truncated to weights <= n) solving the h-stage.
    """
    W = min(h.W, g.W) if W is None else W
    check = add(gauge_act(g, lam, i(alpha)), (-1, i(alpha2)))
    if truncate(check, 1, W):
        raise ValueError("witness does not satisfy lam . i(alpha) = i(alpha') through W")
    x = dict(alpha)
    mu: Element = {}
    Lam = dict(lam)
    stages: List[StageRecord] = []
    for n in range(1, W + 1):
        disc = truncate(add(alpha2, (-1, x)), 1, n)
        if not disc:
            stages.append(StageRecord(n, "-", 0))
            continue
        sigma = r(truncate(Lam, 1, n))
        strategy = "A"
        if not stage_ok(h, x, sigma, disc, n):
            strategy = "B"
            sigma = stage_solve(h, x, disc, n, "full")
            if sigma is None:
                ok = contract_check() if contract_check is not None else True
                raise StageFailure(n, disc, ok)
        x = truncate(gauge_act(h, sigma, x), 1, h.W)
        mu = bch(h, sigma, mu)
        Lam = bch(g, Lam, scale(i(sigma), -1))
        if truncate(add(alpha2, (-1, x)), 1, n):
            raise StageFailure(n, truncate(add(alpha2, (-1, x)), 1, n), True, ["stage did not close"])
        stages.append(StageRecord(n, strategy, len(disc)))
    final = add(gauge_act(h, mu, alpha), (-1, alpha2))
    if truncate(final, 1, W):
        raise AssertionError("internal error: lifted gauge does not verify")
    return LiftResult(mu, stages)


# --- twisted homology ----------------------------------------------------------------

def twisted_homology(g, alpha: MCElement, degree_window: Tuple[int, int]):
    """Homology of (g / F^{W+1}, d + [alpha, -]) per degree, plus the
    associated-graded dimensions per weight."""
    if truncate(g.residual(alpha), 1, g.W):
        raise ValueError("alpha is not Maurer-Cartan: the twisted differential does not square to zero")
    lo, hi = degree_window
    op = lambda v: g.twisted_d(alpha, v)
    totals = {}
    reps = {}
    for k in range(lo, hi + 1):
        d_in = g.matrix(op, g.basis(k + 1), g.basis(k))
        d_out = g.matrix(op, g.basis(k), g.basis(k - 1))
        dim, rs = homology(d_in, d_out)
        totals[k] = dim
        reps[k] = [{g.basis(k)[i]: c for i, c in v.items()} for v in rs]
    graded = {}
    for w in range(1, g.W + 1):
        graded[w] = {}
        gr = lambda v, w=w: truncate(g.d(v), w, w)
        for k in range(lo, hi + 1):
            d_in = g.matrix(gr, g.basis(k + 1, w, w), g.basis(k, w, w))
            d_out = g.matrix(gr, g.basis(k, w, w), g.basis(k - 1, w, w))
            graded[w][k] = homology(d_in, d_out)[0]
    return {"totals": totals, "graded": graded, "representatives": reps}
