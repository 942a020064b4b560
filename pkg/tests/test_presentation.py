import random
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from mcgauge import randgen
from mcgauge.dgcore import DgAlgebra, DgLieAlgebra, check_axioms
from mcgauge.presentation import ParseError, dump, dumps, jsonable, load, parse, same_structure

PRES = Path(__file__).resolve().parent.parent / "presentations"


def test_parse_k_plus_ku():
    A = load(PRES / "k_plus_ku.txt")
    assert isinstance(A, DgAlgebra)
    assert A.space.names == ("one", "u") and A.space.degrees == (0, 1)
    assert A.unit == 0 and A.commutative and A.name == "A'"
    assert A.mul({1: 1}, {0: 1}) == {1: 1}


def test_parse_lie_and_coefficients():
    g = parse("""
[flags]
lie
[basis]
a : 1
b : 2   # trailing comment
[bracket]
[a, a] -> -3/2 * b
""")
    assert isinstance(g, DgLieAlgebra)
    assert g.br({0: 1}, {0: 1}) == {1: Fraction(-3, 2)}


def test_weights_and_splitting():
    A = parse("""
[flags]
commutative
unit = one
[basis]
one : 0
e : 0
[product]
one * one -> one
one * e -> e
e * one -> e
e * e -> e
[splitting]
e -> e + one
[weights]
e : 2
""")
    assert A.splitting == {"e": {1: 1, 0: 1}}
    assert A.weights == (None, 2)
    assert check_axioms(A) == []


@pytest.mark.parametrize("text, where, fragment", [
    ("[basis]\nx : 1\n[differential]\nx -> 1/0 x\n", (4, 6), "zero denominator"),
    ("[basis]\nx : a\n", (2, 5), ""),
    ("[bogus]\n", (1, 1), ""),
    ("[basis]\nx : 0\n[product]\nx * y -> x\n", (4, 5), "y"),
    ("[basis]\nx : 0\nx : 1\n", (3, 1), "x"),
])
def test_parse_errors_have_locations(text, where, fragment):
    with pytest.raises(ParseError) as info:
        parse(text)
    err = info.value
    assert (err.line, err.column)[0] == where[0]
    assert str(err).startswith(f"line {err.line}, column {err.column}: ")
    assert fragment in str(err)


def test_bad_scalar_file():
    with pytest.raises(ParseError, match="line 9, column 6: zero denominator"):
        load(PRES / "bad_scalar.txt")


def test_load_checks_axioms():
    from mcgauge.dgcore import AxiomError
    with pytest.raises(AxiomError):
        load(PRES / "assoc_defect.txt")
    assert isinstance(load(PRES / "assoc_defect.txt", check=False), DgAlgebra)


@given(st.integers(0, 10_000), st.sampled_from(["com", "unital", "lie"]))
def test_dump_parse_round_trip(seed, kind):
    rng = random.Random(seed)
    if kind == "lie":
        obj = randgen.random_lie_algebra(rng, 3)
    else:
        obj = randgen.random_commutative_algebra(rng, 3)
        if kind == "unital":
            obj = randgen.unitalize(obj, rng, twist_splitting=True)
    back = parse(dump(obj))
    assert same_structure(obj, back)
    assert dump(back) == dump(obj)


def test_jsonable_and_dumps():
    x = {(1, 2, 3): Fraction(-1, 2), "k": [Fraction(3)]}
    assert jsonable(x) == {"1,2,3": "-1/2", "k": ["3"]}
    assert dumps({"b": 1, "a": 2}) == dumps({"a": 2, "b": 1})
