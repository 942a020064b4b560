"""Exact rational linear algebra.

Vectors are sparse dicts ``index -> Fraction`` with no stored zeros.
Elimination is fraction-free: rows are kept as primitive integer vectors
and only converted back to reduced rationals at the end, which keeps
coefficient growth in check on the larger bar-construction components.
Pivots are chosen deterministically (earliest row, then its leading column).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, List, Optional, Sequence

Vector = Dict[int, Fraction]


class DimensionError(ValueError):
    pass


class NotAComplexError(ValueError):
    pass


def Q(x) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        s = x.strip()
        if "/" in s:
            p, q = s.split("/", 1)
            if int(q) == 0:
                raise ZeroDivisionError(f"zero denominator in {x!r}")
        return Fraction(s)
    return Fraction(x)


def fmt(q: Fraction) -> str:
    """Serialize a scalar as "p/q" (or "p" when q = 1)."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


# --- sparse vector helpers -------------------------------------------------

def vadd(u: dict, v: dict, c=1) -> dict:
    """Return u + c*v as a new dict."""
    out = dict(u)
    vaddto(out, v, c)
    return out


def vaddto(u: dict, v: dict, c=1) -> None:
    """In place u += c*v."""
    if c == 0:
        return
    for k, x in v.items():
        y = u.get(k, 0) + c * x
        if y:
            u[k] = y
        else:
            u.pop(k, None)


def vscale(v: dict, c) -> dict:
    if c == 0:
        return {}
    return {k: c * x for k, x in v.items()}


def vclean(v: dict) -> dict:
    return {k: x for k, x in v.items() if x}


# --- matrices --------------------------------------------------------------

@dataclass
class Matrix:
    """Sparse rows x cols matrix; ``data[row][col]`` holds nonzero entries."""

    rows: int
    cols: int
    data: Dict[int, Dict[int, Fraction]] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for r, row in self.data.items():
            row = {c: Q(x) for c, x in row.items() if x}
            for c in row:
                if not (0 <= r < self.rows and 0 <= c < self.cols):
                    raise DimensionError(f"entry ({r},{c}) outside {self.rows}x{self.cols}")
            if row:
                clean[r] = row
        self.data = clean

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence]) -> "Matrix":
        nr = len(rows)
        nc = len(rows[0]) if nr else 0
        return cls(nr, nc, {i: {j: Q(x) for j, x in enumerate(r) if x} for i, r in enumerate(rows)})

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[dict]) -> "Matrix":
        data: Dict[int, Dict[int, Fraction]] = {}
        for j, col in enumerate(columns):
            for i, x in col.items():
                if x:
                    data.setdefault(i, {})[j] = x
        return cls(rows, len(columns), data)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, {i: {i: Fraction(1)} for i in range(n)})

    @classmethod
    def zero(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols, {})

    def __getitem__(self, rc):
        r, c = rc
        return self.data.get(r, {}).get(c, Fraction(0))

    def row_vectors(self) -> List[Vector]:
        return [dict(self.data.get(i, {})) for i in range(self.rows)]

    def column_vectors(self) -> List[Vector]:
        cols: List[Vector] = [{} for _ in range(self.cols)]
        for i, row in self.data.items():
            for j, x in row.items():
                cols[j][i] = x
        return cols

    def apply(self, v: dict) -> Vector:
        if v and max(v) >= self.cols:
            raise DimensionError("vector longer than matrix width")
        out: Vector = {}
        for i, row in self.data.items():
            s = sum((x * v[j] for j, x in row.items() if j in v), Fraction(0))
            if s:
                out[i] = s
        return out

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise DimensionError(f"cannot compose {self.rows}x{self.cols} with {other.rows}x{other.cols}")
        out: Dict[int, Dict[int, Fraction]] = {}
        for i, row in self.data.items():
            acc: Dict[int, Fraction] = {}
            for k, x in row.items():
                for j, y in other.data.get(k, {}).items():
                    acc[j] = acc.get(j, 0) + x * y
            acc = {j: z for j, z in acc.items() if z}
            if acc:
                out[i] = acc
        return Matrix(self.rows, other.cols, out)

    def is_zero(self) -> bool:
        return not self.data

    def dense(self) -> List[List[Fraction]]:
        return [[self[i, j] for j in range(self.cols)] for i in range(self.rows)]


# --- fraction-free echelon form -------------------------------------------

def _primitive(row: Dict[int, int]) -> Dict[int, int]:
    g = 0
    for x in row.values():
        g = gcd(g, x)
        if g == 1:
            break
    if g > 1:
        row = {k: x // g for k, x in row.items()}
    return row


def _to_int_row(v: dict) -> Dict[int, int]:
    den = 1
    for x in v.values():
        d = Fraction(x).denominator
        den = den * d // gcd(den, d)
    return {k: int(Fraction(x) * den) for k, x in v.items() if x}


class Echelon:
    """Incrementally maintained reduced echelon basis of a row space.

    Rows are stored as primitive integer vectors whose pivot entry is positive;
    every stored row is zero in the pivot columns of all other stored rows.
    """

    def __init__(self):
        self.rows: Dict[int, Dict[int, int]] = {}  # pivot column -> row

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def pivots(self) -> List[int]:
        return sorted(self.rows)

    def _reduce_int(self, r: Dict[int, int]) -> Dict[int, int]:
        hits = [c for c in r if c in self.rows]
        while hits:
            c = min(hits)
            p = self.rows[c]
            a, b = p[c], r[c]
            g = gcd(a, b)
            a, b = a // g, b // g
            out = {k: a * x for k, x in r.items()}
            for k, y in p.items():
                z = out.get(k, 0) - b * y
                if z:
                    out[k] = z
                else:
                    out.pop(k, None)
            r = _primitive(out) if out else out
            hits = [c for c in r if c in self.rows]
        return r

    def reduce(self, v: dict) -> Vector:
        """Exact normal form of v modulo the row space."""
        if not v:
            return {}
        # stored rows vanish on each other's pivots, so one pass suffices
        out = {k: Fraction(x) for k, x in v.items() if x}
        for c in sorted(k for k in list(out) if k in self.rows):
            if c not in out:
                continue
            p = self.rows[c]
            f = out[c] / p[c]
            for k, y in p.items():
                z = out.get(k, 0) - f * y
                if z:
                    out[k] = z
                else:
                    out.pop(k, None)
        return out

    def add(self, v: dict) -> bool:
        """Insert v; return True if it enlarged the row space."""
        if not v:
            return False
        r = self._reduce_int(_to_int_row(v))
        if not r:
            return False
        c = min(r)
        if r[c] < 0:
            r = {k: -x for k, x in r.items()}
        # keep the basis fully reduced in the new pivot column
        for pc, p in list(self.rows.items()):
            if c in p:
                a, b = r[c], p[c]
                g = gcd(a, b)
                a, b = a // g, b // g
                out = {k: a * x for k, x in p.items()}
                for k, y in r.items():
                    z = out.get(k, 0) - b * y
                    if z:
                        out[k] = z
                    else:
                        out.pop(k, None)
                out = _primitive(out)
                if out[pc] < 0:
                    out = {k: -x for k, x in out.items()}
                self.rows[pc] = out
        self.rows[c] = r
        return True

    def contains(self, v: dict) -> bool:
        return not self.reduce(v)

    def rref_rows(self) -> Dict[int, Vector]:
        """Rows normalized to pivot 1, keyed by pivot column."""
        out = {}
        for c, row in self.rows.items():
            p = row[c]
            out[c] = {k: Fraction(x, p) for k, x in row.items()}
        return out


def rank(M: Matrix) -> int:
    E = Echelon()
    for row in M.data.values():
        E.add(row)
    return E.rank


def rank_of_vectors(vectors: Iterable[dict]) -> int:
    E = Echelon()
    for v in vectors:
        E.add(v)
    return E.rank


def kernel(M: Matrix) -> List[Vector]:
    """Basis of {x : M x = 0}; one vector per free column, in column order."""
    E = Echelon()
    for i in sorted(M.data):
        E.add(M.data[i])
    R = E.rref_rows()
    pivots = set(R)
    basis = []
    for f in range(M.cols):
        if f in pivots:
            continue
        v: Vector = {f: Fraction(1)}
        for c, row in R.items():
            x = row.get(f)
            if x:
                v[c] = -x
        basis.append(v)
    return basis


@dataclass
class AffineSolutionSet:
    """Solutions of M x = b: ``particular + span(kernel_basis)``.

    ``particular is None`` marks an inconsistent system.
    """

    particular: Optional[Vector]
    kernel_basis: List[Vector]

    @property
    def consistent(self) -> bool:
        return self.particular is not None

    def point(self, coeffs: Sequence = ()) -> Vector:
        if self.particular is None:
            raise ValueError("inconsistent system has no solutions")
        v = dict(self.particular)
        for c, k in zip(coeffs, self.kernel_basis):
            vaddto(v, k, Q(c))
        return v


def solve_linear(M: Matrix, b: dict) -> AffineSolutionSet:
    if b and max(b) >= M.rows:
        raise DimensionError(f"right-hand side has index {max(b)} but matrix has {M.rows} rows")
    aug = M.cols  # extra column carries b
    E = Echelon()
    for i in range(M.rows):
        row = dict(M.data.get(i, {}))
        if b.get(i):
            row[aug] = Q(b[i])
        E.add(row)
    R = E.rref_rows()
    ker = kernel(M)
    if aug in R:
        return AffineSolutionSet(None, ker)
    x: Vector = {}
    for c, row in R.items():
        t = row.get(aug)
        if t:
            x[c] = t
    return AffineSolutionSet(x, ker)


def image_echelon(columns: Iterable[dict]) -> Echelon:
    E = Echelon()
    for v in columns:
        E.add(v)
    return E


def homology(d_in: Matrix, d_out: Matrix):
    """Homology at the middle term of ``X --d_in--> Y --d_out--> Z``.

    Returns ``(dimension, representatives)``; representatives are cycles in Y
    spanning a complement of the boundaries.
    """
    if d_in.rows != d_out.cols:
        raise DimensionError("d_in target and d_out source differ")
    if not (d_out @ d_in).is_zero():
        raise NotAComplexError("not a complex: d_out . d_in != 0")
    B = image_echelon(d_in.column_vectors())
    reps = []
    for z in kernel(d_out):
        if B.add(z):
            reps.append(z)
    return len(reps), reps
