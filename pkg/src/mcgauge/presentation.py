"""Plain-text presentations of dg algebras and dg Lie algebras.

A presentation is a sequence of sections; ``#`` starts a comment::

    [flags]
    name = A
    commutative
    unit = one

    [basis]
    one : 0
    x : 1
    y : 2

    [differential]
    y -> 2 x

    [product]
    x * x -> 0

    [splitting]
    x -> x

A Lie algebra uses ``lie`` in [flags] and a [bracket] section with lines
``[x, y] -> ...``.  Linear combinations are sums of terms ``c name`` or
``c*name`` with integer or ``p/q`` coefficients.  Optional [weights] lines
``name : w`` record filtration weights.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .dgcore import AxiomError, DgAlgebra, DgLieAlgebra, GradedVectorSpace, check_axioms
from .exactalg import fmt

SECTIONS = ("flags", "basis", "differential", "product", "bracket", "splitting", "weights")
NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_'^]*")
NUMBER = re.compile(r"[0-9]+(?:/[0-9]+)?")


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        self.message, self.line, self.column = message, line, column
        super().__init__(f"line {line}, column {column}: {message}")


class _Cursor:
    def __init__(self, text: str, line: int, col0: int = 0):
        self.text, self.line, self.pos = text, line, col0

    def error(self, msg, pos=None):
        return ParseError(msg, self.line, (self.pos if pos is None else pos) + 1)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def done(self) -> bool:
        self.skip()
        return self.pos >= len(self.text)

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def eat(self, s: str) -> bool:
        self.skip()
        if self.text.startswith(s, self.pos):
            self.pos += len(s)
            return True
        return False

    def expect(self, s: str):
        if not self.eat(s):
            raise self.error(f"expected {s!r}")

    def match(self, rx) -> Optional[Tuple[str, int]]:
        self.skip()
        m = rx.match(self.text, self.pos)
        if not m:
            return None
        start = self.pos
        self.pos = m.end()
        return m.group(0), start

    def name(self, names: Dict[str, int]) -> int:
        got = self.match(NAME)
        if got is None:
            raise self.error("expected a basis element name")
        s, start = got
        if s not in names:
            raise self.error(f"unknown basis element {s!r}", start)
        return names[s]

    def scalar(self) -> Fraction:
        got = self.match(NUMBER)
        if got is None:
            raise self.error("expected a number")
        s, start = got
        p, _, q = s.partition("/")
        if q and int(q) == 0:
            raise self.error(f"zero denominator in {s!r}", start)
        return Fraction(int(p), int(q) if q else 1)

    def combination(self, names: Dict[str, int]) -> Dict[int, Fraction]:
        """sum of [+-] [coef [*]] name terms, or 0"""
        out: Dict[int, Fraction] = {}
        if self.peek() == "0":
            save = self.pos
            self.pos += 1
            if self.done():
                return out
            self.pos = save
        first = True
        while True:
            sgn = 1
            if self.eat("+"):
                pass
            elif self.eat("-"):
                sgn = -1
            elif not first:
                raise self.error("expected '+' or '-'")
            c = Fraction(1)
            self.skip()
            if NUMBER.match(self.text, self.pos):
                c = self.scalar()
                self.eat("*")
            i = self.name(names)
            out[i] = out.get(i, 0) + sgn * c
            first = False
            if self.done():
                break
        return {i: c for i, c in out.items() if c}


def _lines(text: str):
    for n, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].rstrip()
        if body.strip():
            yield n, body


def parse(text: str):
    """DgAlgebra or DgLieAlgebra from presentation text (axioms not checked)."""
    section = None
    flags = {"name": None, "commutative": False, "lie": False, "unital": False, "unit": None}
    basis: List[Tuple[str, int, int]] = []
    rows: Dict[str, List[Tuple[int, str, int]]] = {s: [] for s in SECTIONS}
    for n, body in _lines(text):
        s = body.strip()
        if s.startswith("[") and s.endswith("]") and s[1:-1].strip().isidentifier():
            section = s[1:-1].strip()
            if section not in SECTIONS:
                raise ParseError(f"unknown section [{section}]", n, body.index("[") + 1)
            continue
        if section is None:
            raise ParseError("content before the first section", n, 1)
        col = len(body) - len(body.lstrip())
        if section == "flags":
            key, eq, val = s.partition("=")
            key, val = key.strip(), val.strip()
            if key in ("commutative", "lie", "unital") and not eq:
                flags[key] = True
            elif key in ("name", "unit") and eq and val:
                flags[key] = val
            else:
                raise ParseError(f"unknown flag {s!r}", n, col + 1)
        elif section == "basis":
            basis.append((n, body, col))
        else:
            rows[section].append((n, body, col))

    names: Dict[str, int] = {}
    degs: List[int] = []
    for n, body, col in basis:
        cur = _Cursor(body, n, col)
        got = cur.match(NAME)
        if got is None:
            raise cur.error("expected a basis element name")
        if got[0] in names:
            raise cur.error(f"duplicate basis element {got[0]!r}", got[1])
        cur.expect(":")
        neg = cur.eat("-")
        d = cur.match(re.compile(r"[0-9]+"))
        if d is None:
            raise cur.error("expected an integer degree")
        if not cur.done():
            raise cur.error("unexpected trailing text")
        names[got[0]] = len(degs)
        degs.append(-int(d[0]) if neg else int(d[0]))
    space = GradedVectorSpace(tuple(names), tuple(degs))

    def rhs(cur):
        cur.expect("->")
        if cur.done():
            raise cur.error("expected a linear combination")
        return cur.combination(names)

    diff: Dict[int, Dict[int, Fraction]] = {}
    for n, body, col in rows["differential"]:
        cur = _Cursor(body, n, col)
        i = cur.name(names)
        diff[i] = rhs(cur)
    table: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
    lie = flags["lie"]
    if lie and rows["product"]:
        n, body, col = rows["product"][0]
        raise ParseError("a Lie presentation takes [bracket], not [product]", n, col + 1)
    if not lie and rows["bracket"]:
        n, body, col = rows["bracket"][0]
        raise ParseError("[bracket] requires the lie flag", n, col + 1)
    for n, body, col in rows["bracket" if lie else "product"]:
        cur = _Cursor(body, n, col)
        if lie:
            cur.expect("[")
            a = cur.name(names)
            cur.expect(",")
            b = cur.name(names)
            cur.expect("]")
        else:
            a = cur.name(names)
            cur.expect("*")
            b = cur.name(names)
        table[(a, b)] = rhs(cur)
    weights = None
    if rows["weights"]:
        weights = [None] * len(degs)
        for n, body, col in rows["weights"]:
            cur = _Cursor(body, n, col)
            i = cur.name(names)
            cur.expect(":")
            w = cur.match(re.compile(r"[0-9]+"))
            if w is None or not cur.done():
                raise cur.error("expected an integer weight")
            weights[i] = int(w[0])
    name = flags["name"] or ("g" if lie else "A")
    if lie:
        if flags["unital"] or flags["unit"] or flags["commutative"] or rows["splitting"]:
            raise ParseError("Lie presentations take no unit, splitting or commutative flag", 1, 1)
        g = DgLieAlgebra(space, diff, table, name)
        g.weights = tuple(weights) if weights else None
        return g
    unit = None
    if flags["unit"] is not None:
        if flags["unit"] not in names:
            raise ParseError(f"unknown unit {flags['unit']!r}", 1, 1)
        unit = names[flags["unit"]]
    elif flags["unital"]:
        raise ParseError("unital flag requires unit = <name>", 1, 1)
    split = None
    if rows["splitting"]:
        if unit is None:
            n, body, col = rows["splitting"][0]
            raise ParseError("splitting requires a unit", n, col + 1)
        split = {}
        for n, body, col in rows["splitting"]:
            cur = _Cursor(body, n, col)
            got = cur.match(NAME)
            if got is None or got[0] not in names:
                raise cur.error("expected a basis element name")
            split[got[0]] = rhs(cur)
    A = DgAlgebra(space, diff, table, unit, flags["commutative"], split, name)
    A.weights = tuple(weights) if weights else None
    return A


def load(path: str, check: bool = True):
    with open(path) as fh:
        obj = parse(fh.read())
    if check:
        bad = check_axioms(obj)
        if bad:
            raise AxiomError(bad)
    return obj


def _combo(space: GradedVectorSpace, v) -> str:
    if not v:
        return "0"
    parts = []
    for i, c in sorted(v.items()):
        c = Fraction(c)
        s = "-" if c < 0 else "+"
        parts.append(f"{s} {fmt(abs(c))} {space.names[i]}")
    out = " ".join(parts)
    return out[2:] if out.startswith("+ ") else "-" + out[1:]


def dump(obj) -> str:
    """Presentation text that parses back to an equal structure."""
    lie = isinstance(obj, DgLieAlgebra)
    sp = obj.space
    lines = ["[flags]", f"name = {obj.name}"]
    if lie:
        lines.append("lie")
    else:
        if obj.commutative:
            lines.append("commutative")
        if obj.unit is not None:
            lines.append(f"unit = {sp.names[obj.unit]}")
    lines += ["", "[basis]"] + [f"{n} : {d}" for n, d in zip(sp.names, sp.degrees)]
    if obj.differential:
        lines += ["", "[differential]"]
        lines += [f"{sp.names[i]} -> {_combo(sp, v)}" for i, v in sorted(obj.differential.items()) if v]
    table = obj.bracket if lie else obj.product
    if table:
        lines += ["", "[bracket]" if lie else "[product]"]
        for (a, b), v in sorted(table.items()):
            if v:
                lhs = f"[{sp.names[a]}, {sp.names[b]}]" if lie else f"{sp.names[a]} * {sp.names[b]}"
                lines.append(f"{lhs} -> {_combo(sp, v)}")
    if not lie and obj.splitting:
        lines += ["", "[splitting]"]
        for k, v in obj.splitting.items():
            key = k if isinstance(k, str) else sp.names[k]
            lines.append(f"{key} -> {_combo(sp, v)}")
    weights = getattr(obj, "weights", None)
    if weights:
        lines += ["", "[weights]"] + [f"{n} : {w}" for n, w in zip(sp.names, weights) if w is not None]
    return "\n".join(lines) + "\n"


def same_structure(a, b) -> bool:
    """Equality of presentations up to zero entries."""
    if type(a) is not type(b) or a.space != b.space or a.name != b.name:
        return False
    clean = lambda t: {k: {i: Fraction(c) for i, c in v.items() if c} for k, v in t.items() if v}
    if clean(a.differential) != clean(b.differential):
        return False
    if isinstance(a, DgLieAlgebra):
        return clean(a.bracket) == clean(b.bracket)
    split = lambda A: None if not A.splitting else {
        (k if isinstance(k, str) else A.space.names[k]): {i: Fraction(c) for i, c in v.items() if c}
        for k, v in A.splitting.items()}
    return (clean(a.product) == clean(b.product) and a.unit == b.unit
            and a.commutative == b.commutative and split(a) == split(b))


# --- machine-readable reports ---------------------------------------------------

def jsonable(x):
    """Fractions become "p/q" strings, tuples lists, dict keys strings."""
    if isinstance(x, Fraction):
        return fmt(x)
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, float):
        return x
    if isinstance(x, dict):
        return {str(k) if not isinstance(k, tuple) else ",".join(map(str, k)): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if hasattr(x, "to_dict"):
        return jsonable(x.to_dict())
    return str(x)


def dumps(report) -> str:
    return json.dumps(jsonable(report), sort_keys=True, indent=2) + "\n"
