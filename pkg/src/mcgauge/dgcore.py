"""Finite-dimensional differential graded structures.

Grading is homological: every differential has degree -1.  Elements are
sparse dicts ``basis index -> Fraction``.  Structure constants are stored
on basis pairs only and extended bilinearly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct
from typing import Dict, List, Optional, Sequence, Tuple

from .exactalg import Matrix, NotAComplexError, Q, homology, vaddto

Vec = Dict[int, Fraction]


class AxiomError(ValueError):
    """Raised when a structure is built from tables violating its axioms."""

    def __init__(self, report):
        self.report = report
        super().__init__("; ".join(str(v) for v in report[:5]))


@dataclass(frozen=True)
class Violation:
    identity: str
    witness: Tuple[str, ...]
    detail: str = ""

    def __str__(self):
        w = ", ".join(self.witness)
        return f"{self.identity} fails at ({w})" + (f": {self.detail}" if self.detail else "")


def sign(n: int) -> int:
    return -1 if n % 2 else 1


@dataclass(frozen=True)
class GradedVectorSpace:
    names: Tuple[str, ...]
    degrees: Tuple[int, ...]

    def __post_init__(self):
        if len(self.names) != len(self.degrees):
            raise ValueError("names and degrees differ in length")
        if len(set(self.names)) != len(self.names):
            raise ValueError("basis names must be unique")

    @classmethod
    def of(cls, pairs: Sequence[Tuple[str, int]]) -> "GradedVectorSpace":
        return cls(tuple(n for n, _ in pairs), tuple(int(d) for _, d in pairs))

    @property
    def dim(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown basis element {name!r}") from None

    def in_degree(self, k: int) -> List[int]:
        return [i for i, d in enumerate(self.degrees) if d == k]

    def degree_range(self) -> Tuple[int, int]:
        if not self.degrees:
            return (0, -1)
        return (min(self.degrees), max(self.degrees))

    def fmt(self, v: Vec) -> str:
        if not v:
            return "0"
        return " + ".join(f"{c}*{self.names[i]}" for i, c in sorted(v.items()))


@dataclass
class GradedMap:
    """Linear map of fixed degree; ``entries[src] = {tgt: coeff}``."""

    source: GradedVectorSpace
    target: GradedVectorSpace
    degree: int
    entries: Dict[int, Vec] = field(default_factory=dict)

    def __post_init__(self):
        for s, col in self.entries.items():
            for t in col:
                if self.target.degrees[t] != self.source.degrees[s] + self.degree:
                    raise ValueError(
                        f"entry {self.source.names[s]} -> {self.target.names[t]} breaks degree {self.degree}")

    def __call__(self, v: Vec) -> Vec:
        out: Vec = {}
        for s, c in v.items():
            col = self.entries.get(s)
            if col:
                vaddto(out, col, c)
        return out

    def matrix(self, src_idx: Sequence[int], tgt_idx: Sequence[int]) -> Matrix:
        pos = {t: k for k, t in enumerate(tgt_idx)}
        cols = []
        for s in src_idx:
            col = self.entries.get(s, {})
            cols.append({pos[t]: c for t, c in col.items() if t in pos})
        return Matrix.from_columns(len(tgt_idx), cols)


def _table(raw, n_args=2):
    out = {}
    for k, v in (raw or {}).items():
        v = {i: Q(c) for i, c in v.items() if c}
        if v:
            out[k] = v
    return out


class _Complex:
    """Shared behaviour: a graded space with a degree -1 map ``d``."""

    space: GradedVectorSpace
    differential: Dict[int, Vec]

    def d(self, v: Vec) -> Vec:
        out: Vec = {}
        for i, c in v.items():
            col = self.differential.get(i)
            if col:
                vaddto(out, col, c)
        return out

    def d_matrix(self, k: int) -> Matrix:
        src = self.space.in_degree(k)
        tgt = self.space.in_degree(k - 1)
        pos = {t: n for n, t in enumerate(tgt)}
        cols = [{pos[t]: c for t, c in self.differential.get(s, {}).items()} for s in src]
        return Matrix.from_columns(len(tgt), cols)


@dataclass
class DgAlgebra(_Complex):
    space: GradedVectorSpace
    differential: Dict[int, Vec] = field(default_factory=dict)
    product: Dict[Tuple[int, int], Vec] = field(default_factory=dict)
    unit: Optional[int] = None
    commutative: bool = False
    splitting: Optional[Dict[int, Vec]] = None  # unital only: basis of the complement of K.1
    name: str = "A"

    def __post_init__(self):
        self.differential = _table(self.differential)
        self.product = _table(self.product)

    @property
    def unital(self) -> bool:
        return self.unit is not None

    @property
    def dim(self) -> int:
        return self.space.dim

    def mul(self, u: Vec, v: Vec) -> Vec:
        out: Vec = {}
        for i, a in u.items():
            for j, b in v.items():
                p = self.product.get((i, j))
                if p:
                    vaddto(out, p, a * b)
        return out

    def basis_vec(self, i: int) -> Vec:
        return {i: Fraction(1)}


@dataclass
class DgLieAlgebra(_Complex):
    space: GradedVectorSpace
    differential: Dict[int, Vec] = field(default_factory=dict)
    bracket: Dict[Tuple[int, int], Vec] = field(default_factory=dict)
    name: str = "g"

    def __post_init__(self):
        self.differential = _table(self.differential)
        self.bracket = _table(self.bracket)

    @property
    def dim(self) -> int:
        return self.space.dim

    def br(self, u: Vec, v: Vec) -> Vec:
        out: Vec = {}
        for i, a in u.items():
            for j, b in v.items():
                p = self.bracket.get((i, j))
                if p:
                    vaddto(out, p, a * b)
        return out


@dataclass
class CurvedLieAlgebra(DgLieAlgebra):
    """Lie algebra with a pre-differential squaring to ``[curvature, -]``.

    ``weights`` (optional) assigns each basis element a filtration weight >= 1;
    F^p is spanned by elements of weight >= p.
    """

    curvature: Vec = field(default_factory=dict)
    weights: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        super().__post_init__()
        self.curvature = {i: Q(c) for i, c in self.curvature.items() if c}

    @classmethod
    def from_lie(cls, g: DgLieAlgebra, weights=None) -> "CurvedLieAlgebra":
        return cls(g.space, dict(g.differential), dict(g.bracket), g.name, {}, weights)


@dataclass
class DgCoalgebra(_Complex):
    """Coassociative (``lie=False``) or Lie (``lie=True``) dg coalgebra.

    ``coproduct[i] = {(j, k): c}`` is the reduced coproduct, resp. cobracket.
    """

    space: GradedVectorSpace
    differential: Dict[int, Vec] = field(default_factory=dict)
    coproduct: Dict[int, Dict[Tuple[int, int], Fraction]] = field(default_factory=dict)
    lie: bool = False
    weights: Optional[Tuple[int, ...]] = None
    name: str = "C"

    def __post_init__(self):
        self.differential = _table(self.differential)
        self.coproduct = _table(self.coproduct)


DgLieCoalgebra = DgCoalgebra


# --- axiom checks ----------------------------------------------------------

def _nz(v: Vec) -> bool:
    return any(v.values())


def _names(space, *idx):
    return tuple(space.names[i] for i in idx)


def _check_d2(obj, out: List[Violation], curvature: Optional[Vec] = None, lie=None):
    sp = obj.space
    for i in range(sp.dim):
        dd = obj.d(obj.d({i: Fraction(1)}))
        if curvature is not None:
            vaddto(dd, lie.br(curvature, {i: Fraction(1)}), -1)
            if _nz(dd):
                out.append(Violation("curvature identity", _names(sp, i), "d^2 x != [theta, x]"))
        elif _nz(dd):
            out.append(Violation("d^2 = 0", _names(sp, i)))


def _check_algebra(A: DgAlgebra) -> List[Violation]:
    out: List[Violation] = []
    sp = A.space
    deg = sp.degrees
    n = sp.dim
    for i, col in A.differential.items():
        for t in col:
            if deg[t] != deg[i] - 1:
                out.append(Violation("differential degree", _names(sp, i, t)))
    for (i, j), v in A.product.items():
        for t in v:
            if deg[t] != deg[i] + deg[j]:
                out.append(Violation("product degree", _names(sp, i, j, t)))
    _check_d2(A, out)
    e = lambda i: {i: Fraction(1)}
    for a, b, c in iproduct(range(n), repeat=3):
        lhs = A.mul(A.mul(e(a), e(b)), e(c))
        rhs = A.mul(e(a), A.mul(e(b), e(c)))
        vaddto(lhs, rhs, -1)
        if _nz(lhs):
            out.append(Violation("associativity", _names(sp, a, b, c)))
    for a, b in iproduct(range(n), repeat=2):
        lhs = A.d(A.mul(e(a), e(b)))
        vaddto(lhs, A.mul(A.d(e(a)), e(b)), -1)
        vaddto(lhs, A.mul(e(a), A.d(e(b))), -sign(deg[a]))
        if _nz(lhs):
            out.append(Violation("Leibniz", _names(sp, a, b)))
        if A.commutative:
            lhs = A.mul(e(a), e(b))
            vaddto(lhs, A.mul(e(b), e(a)), -sign(deg[a] * deg[b]))
            if _nz(lhs):
                out.append(Violation("graded commutativity", _names(sp, a, b)))
    if A.unit is not None:
        u = A.unit
        if deg[u] != 0:
            out.append(Violation("unit degree", _names(sp, u)))
        if _nz(A.d(e(u))):
            out.append(Violation("unit is a cycle", _names(sp, u)))
        for a in range(n):
            l = A.mul(e(u), e(a))
            r = A.mul(e(a), e(u))
            vaddto(l, e(a), -1)
            vaddto(r, e(a), -1)
            if _nz(l) or _nz(r):
                out.append(Violation("unit", _names(sp, a)))
    return out


def _check_lie(g: DgLieAlgebra, curvature: Optional[Vec] = None) -> List[Violation]:
    out: List[Violation] = []
    sp = g.space
    deg = sp.degrees
    n = sp.dim
    e = lambda i: {i: Fraction(1)}
    for (i, j), v in g.bracket.items():
        for t in v:
            if deg[t] != deg[i] + deg[j]:
                out.append(Violation("bracket degree", _names(sp, i, j, t)))
    if curvature is not None:
        if any(deg[i] != -2 for i in curvature):
            out.append(Violation("curvature degree", tuple(sp.names[i] for i in curvature)))
        if _nz(g.d(curvature)):
            out.append(Violation("curvature is closed", ("theta",)))
    _check_d2(g, out, curvature, g)
    for a, b in iproduct(range(n), repeat=2):
        lhs = g.br(e(a), e(b))
        vaddto(lhs, g.br(e(b), e(a)), sign(deg[a] * deg[b]))
        if _nz(lhs):
            out.append(Violation("antisymmetry", _names(sp, a, b)))
        lhs = g.d(g.br(e(a), e(b)))
        vaddto(lhs, g.br(g.d(e(a)), e(b)), -1)
        vaddto(lhs, g.br(e(a), g.d(e(b))), -sign(deg[a]))
        if _nz(lhs):
            out.append(Violation("Leibniz", _names(sp, a, b)))
    for a, b, c in iproduct(range(n), repeat=3):
        lhs = g.br(e(a), g.br(e(b), e(c)))
        vaddto(lhs, g.br(g.br(e(a), e(b)), e(c)), -1)
        vaddto(lhs, g.br(e(b), g.br(e(a), e(c))), -sign(deg[a] * deg[b]))
        if _nz(lhs):
            out.append(Violation("Jacobi", _names(sp, a, b, c)))
    return out


def _tensor_apply_left(table, t: Dict[Tuple, Fraction]):
    """(Delta x 1) on a dict of pairs."""
    out: Dict[Tuple, Fraction] = {}
    for (a, b), c in t.items():
        for (x, y), k in table.get(a, {}).items():
            key = (x, y, b)
            out[key] = out.get(key, 0) + c * k
    return {k: v for k, v in out.items() if v}


def _tensor_apply_right(table, t, deg):
    out: Dict[Tuple, Fraction] = {}
    for (a, b), c in t.items():
        for (x, y), k in table.get(b, {}).items():
            key = (a, x, y)
            out[key] = out.get(key, 0) + c * k
    return {k: v for k, v in out.items() if v}


def _check_coalgebra(C: DgCoalgebra) -> List[Violation]:
    out: List[Violation] = []
    sp = C.space
    deg = sp.degrees
    _check_d2(C, out)
    for x in range(sp.dim):
        dx = C.coproduct.get(x, {})
        for (a, b) in dx:
            if deg[a] + deg[b] != deg[x]:
                out.append(Violation("coproduct degree", _names(sp, x, a, b)))
            if C.weights is not None and C.weights[a] + C.weights[b] != C.weights[x]:
                out.append(Violation("coradical filtration", _names(sp, x, a, b)))
        # co-Leibniz: Delta d = (d x 1 + 1 x d) Delta
        lhs: Dict[Tuple, Fraction] = {}
        for y, c in C.d({x: Fraction(1)}).items():
            for k, v in C.coproduct.get(y, {}).items():
                lhs[k] = lhs.get(k, 0) + c * v
        for (a, b), c in dx.items():
            for y, k in C.d({a: Fraction(1)}).items():
                lhs[(y, b)] = lhs.get((y, b), 0) - c * k
            for y, k in C.d({b: Fraction(1)}).items():
                lhs[(a, y)] = lhs.get((a, y), 0) - c * k * sign(deg[a])
        if any(lhs.values()):
            out.append(Violation("co-Leibniz", _names(sp, x)))
        if not C.lie:
            l = _tensor_apply_left(C.coproduct, dx)
            r = _tensor_apply_right(C.coproduct, dx, deg)
            for k, v in r.items():
                l[k] = l.get(k, 0) - v
            if any(l.values()):
                out.append(Violation("coassociativity", _names(sp, x)))
        else:
            anti: Dict[Tuple, Fraction] = dict(dx)
            for (a, b), c in dx.items():
                anti[(b, a)] = anti.get((b, a), 0) + c * sign(deg[a] * deg[b])
            if any(anti.values()):
                out.append(Violation("co-antisymmetry", _names(sp, x)))
            l = _tensor_apply_left(C.coproduct, dx)
            cyc: Dict[Tuple, Fraction] = {}
            for (a, b, c), v in l.items():
                for key, s in (
                    ((a, b, c), 1),
                    ((c, a, b), sign(deg[c] * (deg[a] + deg[b]))),
                    ((b, c, a), sign(deg[a] * (deg[b] + deg[c]))),
                ):
                    cyc[key] = cyc.get(key, 0) + s * v
            if any(cyc.values()):
                out.append(Violation("co-Jacobi", _names(sp, x)))
    return out


def check_axioms(obj) -> List[Violation]:
    """Every violated identity of ``obj`` with basis witnesses; [] if valid."""
    if isinstance(obj, CurvedLieAlgebra):
        return _check_lie(obj, obj.curvature)
    if isinstance(obj, DgLieAlgebra):
        return _check_lie(obj)
    if isinstance(obj, DgAlgebra):
        return _check_algebra(obj)
    if isinstance(obj, DgCoalgebra):
        return _check_coalgebra(obj)
    if hasattr(obj, "check_axioms"):
        return obj.check_axioms()
    raise TypeError(f"no axioms known for {type(obj).__name__}")


def homology_of(obj, degree_window: Optional[Tuple[int, int]] = None):
    """``{degree: (dimension, representatives)}`` over the window (inclusive)."""
    lo, hi = degree_window if degree_window is not None else obj.space.degree_range()
    out = {}
    for k in range(lo, hi + 1):
        try:
            out[k] = homology(obj.d_matrix(k + 1), obj.d_matrix(k))
        except NotAComplexError:
            raise NotAComplexError(f"not a complex: d^2 != 0 around degree {k}") from None
    return out


def twist(g, alpha: Vec) -> CurvedLieAlgebra:
    """Twist by a degree -1 element: d -> d + [alpha, -], theta -> theta + d alpha + 1/2 [alpha, alpha]."""
    if not isinstance(g, CurvedLieAlgebra):
        g = CurvedLieAlgebra.from_lie(g)
    sp = g.space
    for i in alpha:
        if sp.degrees[i] != -1:
            raise ValueError(f"twisting element has component {sp.names[i]} of degree {sp.degrees[i]}, not -1")
        if g.weights is not None and g.weights[i] < 1:
            raise ValueError("twisting element must lie in F^1")
    diff: Dict[int, Vec] = {}
    for i in range(sp.dim):
        v = dict(g.differential.get(i, {}))
        vaddto(v, g.br(alpha, {i: Fraction(1)}))
        if v:
            diff[i] = v
    theta = dict(g.curvature)
    vaddto(theta, g.d(alpha))
    vaddto(theta, g.br(alpha, alpha), Fraction(1, 2))
    return CurvedLieAlgebra(sp, diff, dict(g.bracket), g.name, theta, g.weights)
