"""Bar and cobar constructions, stored weight by weight up to a truncation W.

Weight is tensor length; the weight grading refines the coradical
filtration, so "through weight W" is the computable shadow of every
statement about the complete objects.

Conventions (suspension s of degree +1, Koszul signs throughout):

* bar differential on sA: ``sa -> -s(da)`` and ``sa|sb -> (-1)^|a| s(ab)``,
  extended as a coderivation of the deconcatenation coproduct;
* Chevalley-Eilenberg: ``sx -> -s(dx)`` and ``sx.sy -> (-1)^|x| s[x,y]``,
  extended as a coderivation of the unshuffle coproduct;
* curved (unital) bars: the unit component of the full structure maps is
  collected into a curvature function ``theta`` on weights 1 and 2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product as iproduct
from typing import Dict, List, Optional, Sequence, Tuple

from .dgcore import (
    DgAlgebra,
    DgCoalgebra,
    DgLieAlgebra,
    GradedVectorSpace,
    Violation,
    check_axioms,
    sign,
)
from .exactalg import Echelon, Matrix, homology, solve_linear, vaddto

Key = Tuple[int, int]  # (weight, index within the weight component)
Elem = Dict[Key, Fraction]

KINDS = ("coassociative", "cocommutative", "Lie-coalgebra", "curved-coassociative", "curved-Lie-coalgebra")


class TruncationError(ValueError):
    pass


@dataclass
class WeightGradedCoalgebra:
    kind: str
    W: int
    words: Dict[int, List[tuple]]  # basis keys per weight
    degrees: Dict[int, List[int]]
    labels: Dict[int, List[str]]
    d0: Dict[int, Dict[int, Dict[int, Fraction]]]  # weight-preserving part
    d1: Dict[int, Dict[int, Dict[int, Fraction]]]  # weight w -> weight w-1
    coproduct: Dict[int, Dict[int, Dict[Tuple[Key, Key], Fraction]]]  # reduced Delta or cobracket
    curvature: Dict[Key, Fraction] = field(default_factory=dict)
    source: object = None  # the algebra this was built from
    # Harrison data (bar_com / curved-lie only)
    parent: Optional["WeightGradedCoalgebra"] = None
    proj: Optional[Dict[int, Dict[int, Dict[int, Fraction]]]] = None  # parent word -> classes
    rep: Optional[Dict[int, List[int]]] = None  # class -> representative parent word
    relations: Optional[Dict[int, Echelon]] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown coalgebra kind {self.kind!r}")
        self._index = {w: {k: i for i, k in enumerate(ws)} for w, ws in self.words.items()}
        self._inverse = None

    # -- basic data ---------------------------------------------------------
    @property
    def curved(self) -> bool:
        return self.kind.startswith("curved")

    @property
    def is_lie(self) -> bool:
        return self.kind in ("Lie-coalgebra", "curved-Lie-coalgebra")

    def dims(self) -> List[int]:
        return [len(self.words.get(w, [])) for w in range(1, self.W + 1)]

    def dim(self, w: int) -> int:
        return len(self.words.get(w, []))

    def keys(self):
        for w in range(1, self.W + 1):
            for i in range(self.dim(w)):
                yield (w, i)

    def deg(self, key: Key) -> int:
        return self.degrees[key[0]][key[1]]

    def label(self, key: Key) -> str:
        return self.labels[key[0]][key[1]]

    def index_of(self, word: tuple) -> Key:
        w = len(word)
        return (w, self._index[w][word])

    # -- structure maps on elements -----------------------------------------
    def D(self, x: Elem) -> Elem:
        out: Elem = {}
        for (w, i), c in x.items():
            for j, k in self.d0.get(w, {}).get(i, {}).items():
                out[(w, j)] = out.get((w, j), 0) + c * k
            if w > 1:
                for j, k in self.d1.get(w, {}).get(i, {}).items():
                    out[(w - 1, j)] = out.get((w - 1, j), 0) + c * k
        return {k: v for k, v in out.items() if v}

    def delta(self, x: Elem) -> Dict[Tuple[Key, Key], Fraction]:
        out: Dict[Tuple[Key, Key], Fraction] = {}
        for (w, i), c in x.items():
            for pair, k in self.coproduct.get(w, {}).get(i, {}).items():
                out[pair] = out.get(pair, 0) + c * k
        return {k: v for k, v in out.items() if v}

    def inverse_coproduct(self) -> Dict[Tuple[Key, Key], List[Tuple[Key, Fraction]]]:
        """``(x1, x2) -> [(x, c)]`` listing every x whose coproduct contains c*x1(x)x2."""
        if self._inverse is None:
            inv: Dict[Tuple[Key, Key], List[Tuple[Key, Fraction]]] = {}
            for w, table in self.coproduct.items():
                for i, terms in table.items():
                    for pair, c in terms.items():
                        inv.setdefault(pair, []).append(((w, i), c))
            self._inverse = inv
        return self._inverse

    def to_dg_coalgebra(self) -> DgCoalgebra:
        """Flatten weights 1..W into one finite dg (Lie) coalgebra (uncurved only)."""
        keys = list(self.keys())
        pos = {k: n for n, k in enumerate(keys)}
        names = [f"w{k[0]}:{self.label(k)}" for k in keys]
        space = GradedVectorSpace(tuple(names), tuple(self.deg(k) for k in keys))
        diff = {pos[k]: {pos[t]: c for t, c in self.D({k: Fraction(1)}).items()} for k in keys}
        cop = {pos[k]: {(pos[a], pos[b]): c for (a, b), c in self.delta({k: Fraction(1)}).items()} for k in keys}
        return DgCoalgebra(space, diff, cop, lie=self.is_lie, weights=tuple(k[0] for k in keys))

    def check_axioms(self) -> List[Violation]:
        """(d0 + d1)^2 = 0, or the curvature identity for curved kinds, plus
        co-associativity / co-Jacobi, co-Leibniz and weight additivity."""
        if not self.curved:
            return check_axioms(self.to_dg_coalgebra())
        out: List[Violation] = []
        for k in self.keys():
            dd = self.D(self.D({k: Fraction(1)}))
            # coassociative: D^2 x = sum x1 theta(x2) - theta(x1) x2;
            # Lie: D^2 x = sum x1 theta(x2), the cobracket being antisymmetric
            for (a, b), c in self.delta({k: Fraction(1)}).items():
                tb = self.curvature.get(b)
                if tb:
                    dd[a] = dd.get(a, 0) - c * tb
                ta = self.curvature.get(a)
                if ta and not self.is_lie:
                    dd[b] = dd.get(b, 0) + c * ta
            if any(dd.values()):
                out.append(Violation("curvature identity", (self.label(k),)))
            # theta vanishes on boundaries: theta(D x) = 0
            t = sum((c * self.curvature.get(y, 0) for y, c in self.D({k: Fraction(1)}).items()), Fraction(0))
            if t:
                out.append(Violation("curvature is closed", (self.label(k),)))
        flat = WeightGradedCoalgebra(
            self.kind.replace("curved-", ""),
            self.W, self.words, self.degrees, self.labels, {}, {}, self.coproduct)
        out += [v for v in check_axioms(flat.to_dg_coalgebra()) if v.identity != "d^2 = 0"]
        return out

    def dimension_table(self) -> Dict[str, object]:
        per_degree = {}
        for w in range(1, self.W + 1):
            counts: Dict[int, int] = {}
            for d in self.degrees.get(w, []):
                counts[d] = counts.get(d, 0) + 1
            per_degree[w] = dict(sorted(counts.items()))
        return {"kind": self.kind, "W": self.W, "dims": self.dims(), "by_degree": per_degree}


# --- graded sign helpers -----------------------------------------------------

def koszul_perm_sign(degs: Sequence[int], perm: Sequence[int]) -> int:
    """Sign of reordering letters of the given degrees into ``[letters[p] for p in perm]``."""
    s = 0
    for a in range(len(perm)):
        for b in range(a + 1, len(perm)):
            if perm[a] > perm[b]:
                s += degs[perm[a]] * degs[perm[b]]
    return sign(s)


def shuffle_product(u: tuple, v: tuple, letter_deg) -> Dict[tuple, int]:
    """Signed shuffle u * v of two words (letters graded by ``letter_deg``)."""
    n, m = len(u), len(v)
    letters = u + v
    degs = [letter_deg(x) for x in letters]
    out: Dict[tuple, int] = {}
    for pos in combinations(range(n + m), n):
        perm = [0] * (n + m)
        ui, vi = 0, n
        pset = set(pos)
        for k in range(n + m):
            if k in pset:
                perm[k] = ui
                ui += 1
            else:
                perm[k] = vi
                vi += 1
        word = tuple(letters[p] for p in perm)
        out[word] = out.get(word, 0) + koszul_perm_sign(degs, perm)
    return {k: c for k, c in out.items() if c}


# --- associative bar -----------------------------------------------------------

def _suspended_structure(A: DgAlgebra, basis: List[Dict[int, Fraction]], coords):
    """Structure maps of the suspension of span(basis) inside A.

    ``coords(v)`` expresses an element of A as (unit part, {basis idx: c}).
    Returns (degrees, Q1, Q2, theta1, theta2).
    """
    n = len(basis)
    deg = []
    for v in basis:
        ds = {A.space.degrees[i] for i in v}
        if len(ds) != 1:
            raise ValueError("splitting vectors must be homogeneous")
        deg.append(ds.pop())
    Q1: Dict[int, Dict[int, Fraction]] = {}
    th1: Dict[int, Fraction] = {}
    for i, v in enumerate(basis):
        eps, rest = coords(A.d(v))
        if rest:
            Q1[i] = {j: -c for j, c in rest.items()}
        if eps:
            th1[i] = -eps
    Q2: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
    th2: Dict[Tuple[int, int], Fraction] = {}
    for i in range(n):
        for j in range(n):
            eps, rest = coords(A.mul(basis[i], basis[j]))
            s = sign(deg[i])
            if rest:
                Q2[(i, j)] = {k: s * c for k, c in rest.items()}
            if eps:
                th2[(i, j)] = s * eps
    return [d + 1 for d in deg], Q1, Q2, th1, th2


def _tensor_bar(kind, W, names, sdeg, Q1, Q2, th1=None, th2=None, source=None):
    n = len(names)
    words: Dict[int, List[tuple]] = {}
    for w in range(1, W + 1):
        words[w] = list(iproduct(range(n), repeat=w)) if n else []
    index = {w: {k: i for i, k in enumerate(ws)} for w, ws in words.items()}
    degrees = {w: [sum(sdeg[x] for x in word) for word in ws] for w, ws in words.items()}
    labels = {w: ["|".join("s" + names[x] for x in word) for word in ws] for w, ws in words.items()}
    d0: Dict[int, Dict[int, Dict[int, Fraction]]] = {}
    d1: Dict[int, Dict[int, Dict[int, Fraction]]] = {}
    cop: Dict[int, Dict[int, Dict[Tuple[Key, Key], Fraction]]] = {}
    for w in range(1, W + 1):
        d0w, d1w, cw = {}, {}, {}
        for i, word in enumerate(words[w]):
            acc0: Dict[int, Fraction] = {}
            acc1: Dict[int, Fraction] = {}
            prefix = 0
            for p, x in enumerate(word):
                s = sign(prefix)
                for y, c in Q1.get(x, {}).items():
                    t = index[w][word[:p] + (y,) + word[p + 1:]]
                    acc0[t] = acc0.get(t, 0) + s * c
                if p + 1 < w:
                    for y, c in Q2.get((x, word[p + 1]), {}).items():
                        t = index[w - 1][word[:p] + (y,) + word[p + 2:]]
                        acc1[t] = acc1.get(t, 0) + s * c
                prefix += sdeg[x]
            acc0 = {k: v for k, v in acc0.items() if v}
            acc1 = {k: v for k, v in acc1.items() if v}
            if acc0:
                d0w[i] = acc0
            if acc1:
                d1w[i] = acc1
            terms = {}
            for k in range(1, w):
                a, b = word[:k], word[k:]
                terms[((k, index[k][a]), (w - k, index[w - k][b]))] = Fraction(1)
            if terms:
                cw[i] = terms
        d0[w], d1[w], cop[w] = d0w, d1w, cw
    curvature: Dict[Key, Fraction] = {}
    if th1:
        for x, c in th1.items():
            curvature[(1, index[1][(x,)])] = Fraction(c)
    if th2 and W >= 2:
        for (x, y), c in th2.items():
            curvature[(2, index[2][(x, y)])] = Fraction(c)
    kind = "curved-coassociative" if (th1 is not None or th2 is not None) else "coassociative"
    return WeightGradedCoalgebra(kind, W, words, degrees, labels, d0, d1, cop, curvature, source)


def bar_ass(A: DgAlgebra, W: int) -> WeightGradedCoalgebra:
    """Bar construction B A = T^c(sA) through weight W (non-unital A)."""
    if A.unital:
        raise ValueError("bar_ass takes a non-unital algebra; use bar_unital for unital ones")
    if W < 1:
        raise ValueError("W must be >= 1")
    n = A.dim
    basis = [{i: Fraction(1)} for i in range(n)]
    sdeg, Q1, Q2, _, _ = _suspended_structure(A, basis, lambda v: (0, v))
    return _tensor_bar("coassociative", W, list(A.space.names), sdeg, Q1, Q2, source=A)


# --- Harrison quotient -----------------------------------------------------

def _harrison(B: WeightGradedCoalgebra, kind: str) -> WeightGradedCoalgebra:
    sdeg_letter = {}
    for i, word in enumerate(B.words.get(1, [])):
        sdeg_letter[word[0]] = B.degrees[1][i]
    ldeg = lambda x: sdeg_letter[x]
    words: Dict[int, List[tuple]] = {}
    degrees: Dict[int, List[int]] = {}
    labels: Dict[int, List[str]] = {}
    proj: Dict[int, Dict[int, Dict[int, Fraction]]] = {}
    rep: Dict[int, List[int]] = {}
    rels: Dict[int, Echelon] = {}
    for w in range(1, B.W + 1):
        E = Echelon()
        idx = B._index[w]
        for k in range(1, w // 2 + 1):
            for u in B.words[k]:
                for v in B.words[w - k]:
                    row = {idx[t]: Fraction(c) for t, c in shuffle_product(u, v, ldeg).items()}
                    E.add(row)
        rels[w] = E
        R = E.rref_rows()
        free = [i for i in range(len(B.words[w])) if i not in R]
        cls = {i: n for n, i in enumerate(free)}
        pw: Dict[int, Dict[int, Fraction]] = {i: {cls[i]: Fraction(1)} for i in free}
        for piv, row in R.items():
            pw[piv] = {cls[j]: -c for j, c in row.items() if j != piv}
            pw[piv] = {k: v for k, v in pw[piv].items() if v}
        proj[w] = pw
        rep[w] = free
        words[w] = [B.words[w][i] for i in free]
        degrees[w] = [B.degrees[w][i] for i in free]
        labels[w] = [B.labels[w][i] for i in free]

    def p(x: Elem) -> Elem:
        out: Elem = {}
        for (w, i), c in x.items():
            for j, k in proj[w][i].items():
                out[(w, j)] = out.get((w, j), 0) + c * k
        return {k: v for k, v in out.items() if v}

    d0: Dict[int, Dict[int, Dict[int, Fraction]]] = {}
    d1: Dict[int, Dict[int, Dict[int, Fraction]]] = {}
    cop: Dict[int, Dict[int, Dict[Tuple[Key, Key], Fraction]]] = {}
    for w in range(1, B.W + 1):
        d0[w], d1[w], cop[w] = {}, {}, {}
        for n, i in enumerate(rep[w]):
            img = p(B.D({(w, i): Fraction(1)}))
            a0 = {j: c for (ww, j), c in img.items() if ww == w}
            a1 = {j: c for (ww, j), c in img.items() if ww == w - 1}
            if a0:
                d0[w][n] = a0
            if a1:
                d1[w][n] = a1
            terms: Dict[Tuple[Key, Key], Fraction] = {}
            for (a, b), c in B.delta({(w, i): Fraction(1)}).items():
                s = sign(B.deg(a) * B.deg(b))
                for x, cx in p({a: Fraction(1)}).items():
                    for y, cy in p({b: Fraction(1)}).items():
                        terms[(x, y)] = terms.get((x, y), 0) + c * cx * cy
                        terms[(y, x)] = terms.get((y, x), 0) - s * c * cx * cy
            terms = {k: v for k, v in terms.items() if v}
            if terms:
                cop[w][n] = terms
    curvature: Dict[Key, Fraction] = {}
    if B.curved:
        # theta vanishes on shuffles, so restricting to representatives is exact
        for w in (1, 2):
            if w > B.W:
                continue
            for n, i in enumerate(rep[w]):
                t = B.curvature.get((w, i))
                if t:
                    curvature[(w, n)] = t
    out = WeightGradedCoalgebra(kind, B.W, words, degrees, labels, d0, d1, cop, curvature, B.source,
                                parent=B, proj=proj, rep=rep, relations=rels)
    return out


def bar_com(A: DgAlgebra, W: int) -> WeightGradedCoalgebra:
    """Harrison bar construction B_Com A = B A / shuffles, a Lie coalgebra."""
    if not A.commutative or any(v.identity == "graded commutativity" for v in check_axioms(A)):
        raise ValueError("Harrison quotient requires commutativity")
    return _harrison(bar_ass(A, W), "Lie-coalgebra")


def harrison_projection(BA, BC):
    """Weightwise quotient map p: B A -> B_Com A as ``{w: {word: {class: c}}}``.

    Accepts either the two bar constructions, or ``(A, W)``.
    """
    if isinstance(BA, DgAlgebra):
        BC = bar_com(BA, BC)
        BA = BC.parent
    if BC.parent is None or BC.proj is None:
        raise ValueError("second argument is not a Harrison bar construction")
    if BC.W != BA.W:
        raise ValueError(f"truncation mismatch: B A built through {BA.W}, B_Com A through {BC.W}")
    if BC.parent.words != BA.words or BC.parent.d1 != BA.d1:
        raise ValueError("bar constructions come from different algebras")
    return BC.proj


def apply_weight_map(m: Dict[int, Dict[int, Dict[int, Fraction]]], x: Elem) -> Elem:
    out: Elem = {}
    for (w, i), c in x.items():
        for j, k in m.get(w, {}).get(i, {}).items():
            out[(w, j)] = out.get((w, j), 0) + c * k
    return {k: v for k, v in out.items() if v}


# --- unital (curved) bars ------------------------------------------------------

def unital_coordinates(A: DgAlgebra):
    """Basis of the chosen complement of K.1 and a coordinate function."""
    if A.unit is None:
        raise ValueError("algebra has no unit")
    n = A.dim
    if A.splitting is None:
        comp = [{i: Fraction(1)} for i in range(n) if i != A.unit]
        names = [A.space.names[i] for i in range(n) if i != A.unit]
    else:
        comp = [dict(v) for v in A.splitting.values()]
        names = [str(k) for k in A.splitting.keys()]
    if len(comp) != n - 1:
        raise ValueError("splitting must have dim A - 1 vectors")
    cols = [{A.unit: Fraction(1)}] + comp
    M = Matrix.from_columns(n, cols)
    E = Echelon()
    for c in cols:
        if not E.add(c):
            raise ValueError("splitting is not complementary to the unit")

    def coords(v):
        sol = solve_linear(M, v)
        x = sol.particular
        eps = x.get(0, Fraction(0))
        rest = {k - 1: c for k, c in x.items() if k > 0 and c}
        return eps, rest

    return comp, names, coords


def bar_unital(A: DgAlgebra, flavor: str, W: int) -> WeightGradedCoalgebra:
    """Curved bar construction on the suspension of the complement of K.1.

    ``flavor`` is ``"associative"`` (B_uAss) or ``"commutative"`` (B_uCom).
    """
    if A.unit is None:
        raise ValueError("bar_unital needs a unital algebra (no unit declared)")
    comp, names, coords = unital_coordinates(A)
    sdeg, Q1, Q2, th1, th2 = _suspended_structure(A, comp, coords)
    B = _tensor_bar("curved-coassociative", W, names, sdeg, Q1, Q2, th1, th2, source=A)
    if flavor == "associative":
        return B
    if flavor == "commutative":
        if not A.commutative or any(v.identity == "graded commutativity" for v in check_axioms(A)):
            raise ValueError("Harrison quotient requires commutativity")
        return _harrison(B, "curved-Lie-coalgebra")
    raise ValueError(f"unknown flavor {flavor!r}")


# --- Chevalley-Eilenberg bar -------------------------------------------------

def sym_normalize(letters: Sequence[int], ldeg) -> Tuple[int, Optional[tuple]]:
    """Sort a product of letters in the graded-symmetric algebra.

    Returns (sign, sorted tuple) or (0, None) if an odd letter repeats.
    """
    degs = [ldeg(x) for x in letters]
    perm = sorted(range(len(letters)), key=lambda k: letters[k])
    word = tuple(letters[k] for k in perm)
    for a in range(len(word) - 1):
        if word[a] == word[a + 1] and ldeg(word[a]) % 2:
            return 0, None
    return koszul_perm_sign(degs, perm), word


def bar_lie(g: DgLieAlgebra, W: int) -> WeightGradedCoalgebra:
    """Chevalley-Eilenberg coalgebra Sym^c(s g) through weight W."""
    n = g.dim
    gdeg = list(g.space.degrees)
    sdeg = [d + 1 for d in gdeg]
    ldeg = lambda x: sdeg[x]
    Q1: Dict[int, Dict[int, Fraction]] = {}
    for i in range(n):
        v = g.d({i: Fraction(1)})
        if v:
            Q1[i] = {j: -c for j, c in v.items()}
    Q2: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
    for i in range(n):
        for j in range(n):
            v = g.br({i: Fraction(1)}, {j: Fraction(1)})
            if v:
                Q2[(i, j)] = {k: sign(gdeg[i]) * c for k, c in v.items()}
    words: Dict[int, List[tuple]] = {}
    for w in range(1, W + 1):
        ws = []
        for combo in _multisets(n, w):
            if all(not (combo[a] == combo[a + 1] and sdeg[combo[a]] % 2) for a in range(w - 1)):
                ws.append(combo)
        words[w] = ws
    index = {w: {k: i for i, k in enumerate(ws)} for w, ws in words.items()}
    degrees = {w: [sum(sdeg[x] for x in m) for m in ws] for w, ws in words.items()}
    names = g.space.names
    labels = {w: [".".join("s" + names[x] for x in m) for m in ws] for w, ws in words.items()}
    d0, d1, cop = {}, {}, {}
    for w in range(1, W + 1):
        d0[w], d1[w], cop[w] = {}, {}, {}
        for i, m in enumerate(words[w]):
            acc0: Dict[int, Fraction] = {}
            acc1: Dict[int, Fraction] = {}
            for p in range(w):
                # move letter p to the front
                perm = [p] + [q for q in range(w) if q != p]
                s = koszul_perm_sign([sdeg[x] for x in m], perm)
                rest = [m[q] for q in range(w) if q != p]
                for y, c in Q1.get(m[p], {}).items():
                    s2, t = sym_normalize([y] + rest, ldeg)
                    if s2:
                        k = index[w][t]
                        acc0[k] = acc0.get(k, 0) + s * s2 * c
            for p, q in combinations(range(w), 2):
                perm = [p, q] + [r for r in range(w) if r not in (p, q)]
                s = koszul_perm_sign([sdeg[x] for x in m], perm)
                rest = [m[r] for r in range(w) if r not in (p, q)]
                for y, c in Q2.get((m[p], m[q]), {}).items():
                    s2, t = sym_normalize([y] + rest, ldeg)
                    if s2:
                        k = index[w - 1][t]
                        acc1[k] = acc1.get(k, 0) + s * s2 * c
            acc0 = {k: v for k, v in acc0.items() if v}
            acc1 = {k: v for k, v in acc1.items() if v}
            if acc0:
                d0[w][i] = acc0
            if acc1:
                d1[w][i] = acc1
            terms: Dict[Tuple[Key, Key], Fraction] = {}
            for k in range(1, w):
                for S in combinations(range(w), k):
                    Sc = [r for r in range(w) if r not in S]
                    s = koszul_perm_sign([sdeg[x] for x in m], list(S) + Sc)
                    a = tuple(m[r] for r in S)
                    b = tuple(m[r] for r in Sc)
                    key = ((k, index[k][a]), (w - k, index[w - k][b]))
                    terms[key] = terms.get(key, 0) + s
            terms = {k: Fraction(v) for k, v in terms.items() if v}
            if terms:
                cop[w][i] = terms
    return WeightGradedCoalgebra("cocommutative", W, words, degrees, labels, d0, d1, cop, {}, g)


def _multisets(n: int, w: int):
    if w == 0:
        yield ()
        return

    def rec(start, left):
        if left == 0:
            yield ()
            return
        for x in range(start, n):
            for rest in rec(x, left - 1):
                yield (x,) + rest

    yield from rec(0, w)


# --- cobar --------------------------------------------------------------------

@dataclass
class CobarTruncation:
    """Weight <= N, degree-windowed piece of the cobar construction of C.

    The differential never raises total weight, so this is a subcomplex of
    the quasi-free algebra T(s^-1 C); the product is only partially defined.
    """

    C: WeightGradedCoalgebra
    N: int
    window: Tuple[int, int]
    space: GradedVectorSpace
    words: List[tuple]
    differential: Dict[int, Dict[int, Fraction]]

    def d(self, v):
        out: Dict[int, Fraction] = {}
        for i, c in v.items():
            vaddto(out, self.differential.get(i, {}), c)
        return out

    def d_matrix(self, k: int) -> Matrix:
        src = self.space.in_degree(k)
        tgt = self.space.in_degree(k - 1)
        pos = {t: n for n, t in enumerate(tgt)}
        cols = [{pos[t]: c for t, c in self.differential.get(s, {}).items() if t in pos} for s in src]
        return Matrix.from_columns(len(tgt), cols)

    def homology(self) -> Dict[int, int]:
        lo, hi = self.window
        return {k: homology(self.d_matrix(k + 1), self.d_matrix(k))[0] for k in range(lo, hi + 1)}


def cobar_ass(C: WeightGradedCoalgebra, degree_window: Tuple[int, int], W: Optional[int] = None) -> CobarTruncation:
    """Cobar construction of a coassociative C, restricted to total weight <= W
    and to degrees ``lo - 1 .. hi + 1`` around the requested window."""
    if C.kind not in ("coassociative", "cocommutative"):
        raise ValueError("cobar_ass needs a coassociative coalgebra")
    N = C.W if W is None else W
    if N > C.W:
        raise TruncationError(f"cobar needs weight {C.W + 1} of the coalgebra, built only through {C.W}")
    lo, hi = degree_window
    gens = [k for k in C.keys() if k[0] <= N]
    gdeg = {k: C.deg(k) - 1 for k in gens}
    gw = {k: k[0] for k in gens}
    words: List[tuple] = []

    def grow(prefix, weight):
        if prefix:
            words.append(prefix)
        for g in gens:
            if weight + gw[g] <= N:
                grow(prefix + (g,), weight + gw[g])

    grow((), 0)
    wdeg = lambda word: sum(gdeg[g] for g in word)
    words = [w for w in words if lo - 1 <= wdeg(w) <= hi + 1]
    words.sort(key=lambda w: (wdeg(w), sum(g[0] for g in w), w))
    index = {w: i for i, w in enumerate(words)}

    def dgen(g) -> Dict[tuple, Fraction]:
        out: Dict[tuple, Fraction] = {}
        for t, c in C.D({g: Fraction(1)}).items():
            out[(t,)] = out.get((t,), 0) - c
        for (a, b), c in C.delta({g: Fraction(1)}).items():
            out[(a, b)] = out.get((a, b), 0) + sign(C.deg(a)) * c
        return out

    cache = {g: dgen(g) for g in gens}
    diff: Dict[int, Dict[int, Fraction]] = {}
    for word in words:
        if wdeg(word) < lo:
            continue
        acc: Dict[int, Fraction] = {}
        prefix = 0
        for p, g in enumerate(word):
            s = sign(prefix)
            for rep, c in cache[g].items():
                t = word[:p] + rep + word[p + 1:]
                if t not in index:
                    raise TruncationError(f"differential escapes the window at weight {sum(x[0] for x in t)}")
                acc[index[t]] = acc.get(index[t], 0) + s * c
            prefix += gdeg[g]
        acc = {k: v for k, v in acc.items() if v}
        if acc:
            diff[index[word]] = acc
    labels = tuple(" ".join("s^-1(" + C.label(g) + ")" for g in w) for w in words)
    space = GradedVectorSpace(labels, tuple(wdeg(w) for w in words))
    return CobarTruncation(C, N, (lo, hi), space, words, diff)
